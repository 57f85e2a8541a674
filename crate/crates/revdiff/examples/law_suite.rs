//! Runs a law suite and prints the report.
//!
//!     cargo run --release --example law_suite -- [suite] [model] [alphabet]

use revdiff::laws::{run_suite, LawParams, ModelKind, Suite, SuiteRun};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let suite: Suite = args.first().map_or("all", String::as_str).parse().expect("suite");
    let model: ModelKind = args.get(1).map_or("ext2", String::as_str).parse().expect("model");
    let alphabet = args.get(2).map_or(2, |s| s.parse().expect("alphabet"));
    let params = LawParams::new(model, alphabet);
    let reports = run_suite(suite, &params).expect("the catalog type-checks");
    print!("{}", SuiteRun { suite, params, reports }.to_text());
}
