fn main() {
    std::process::exit(revdiff::cli::run(std::env::args_os()));
}
