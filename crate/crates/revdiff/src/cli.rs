//! The `revdiff` command line: law suites, structure-map dumps, reverse
//! derivatives of expressions and gradient descent.
//!
//! Exit codes: 0 success, 1 a law failed, 2 usage or validation error,
//! 3 numeric divergence.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;

use crate::bang::CoeffPolicy;
use crate::crdc::Cartesian;
use crate::laws::{any_failed, run_suite, LawError, LawParams, ModelKind, Suite, SuiteRun};
use crate::map::Map;
use crate::model::Model;
use crate::polycrdc::{d_poly, parse_poly, r_poly};
use crate::smoothcrdc::{d_expr, gradient_descent, parse_expr, r_expr, trajectory_text, SmoothError};
use crate::wrel::{Mor, Obj};

pub const EXIT_OK: i32 = 0;
pub const EXIT_LAW_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "revdiff", version, about = "Models of reverse differential categories and their laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a law suite in a model.
    Laws {
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print a structure map as a tab-separated matrix.
    Dump {
        /// One of: id delta epsilon comult counit nabla unit d dcirc eta r
        /// r_star chi chi_inv cup cap (relational models), D R (poly, smooth)
        #[arg(long)]
        map: String,
        /// Expression for D and R, as text or a file name.
        #[arg(long)]
        expr: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Reverse derivative of an expression map, optionally evaluated.
    Rderive {
        /// Expression, as text or a file name.
        #[arg(long)]
        expr: String,
        /// Comma-separated point, one value per variable.
        #[arg(long)]
        point: Option<String>,
        /// Comma-separated cotangent, one value per component (default all ones).
        #[arg(long)]
        cotangent: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Gradient descent on a scalar loss, using its reverse derivative.
    Descend {
        /// Loss expression, as text or a file name.
        #[arg(long)]
        expr: String,
        /// Comma-separated start point (default the origin).
        #[arg(long)]
        init: Option<String>,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        lr: f64,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// rel, nat, gf2rel, ext2, poly or smooth.
    #[arg(long)]
    model: Option<String>,
    /// Alphabet size of the bag models; largest arity for poly and smooth.
    #[arg(long)]
    alphabet: Option<usize>,
    /// Dimension for ext2 (same as --alphabet).
    #[arg(long)]
    n: Option<usize>,
    /// Degree cap D.
    #[arg(long, default_value_t = 3)]
    degree: usize,
    /// Outer cap K.
    #[arg(long, default_value_t = 2)]
    outer: usize,
    #[arg(long, default_value = "default")]
    policy: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the main output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

/// A failed command: exit status and message for standard error.
#[derive(Debug)]
struct Failure(i32, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

impl From<LawError> for Failure {
    fn from(e: LawError) -> Self {
        usage(e.to_string())
    }
}

impl From<SmoothError> for Failure {
    fn from(e: SmoothError) -> Self {
        match e {
            SmoothError::NonFinite { .. } => Failure(EXIT_DIVERGED, e.to_string()),
            e => usage(e.to_string()),
        }
    }
}

impl Common {
    fn model_kind(&self, default: ModelKind) -> Result<ModelKind, Failure> {
        self.model.as_deref().map_or(Ok(default), |m| m.parse().map_err(usage))
    }

    fn size(&self, kind: ModelKind) -> Result<usize, Failure> {
        match (self.alphabet, self.n) {
            (Some(a), Some(n)) if a != n => Err(usage("--alphabet and --n disagree")),
            (a, n) => Ok(a.or(n).unwrap_or(if kind.is_cartesian() { 3 } else { 2 })),
        }
    }

    fn params(&self, kind: ModelKind) -> Result<LawParams, Failure> {
        if CoeffPolicy::named(&self.policy).is_none() {
            return Err(usage(format!("unknown policy {:?}; expected one of {}", self.policy, CoeffPolicy::NAMES.join(", "))));
        }
        let mut p = LawParams::new(kind, self.size(kind)?);
        p.degree = self.degree;
        p.outer = self.outer;
        p.policy = self.policy.clone();
        p.seed = self.seed;
        Ok(p)
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Reads `arg` as a file if one exists by that name, else uses it as text.
fn source(arg: &str) -> Result<String, Failure> {
    let path = std::path::Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {arg}: {e}")));
    }
    Ok(arg.to_string())
}

fn numbers(arg: &str, what: &str) -> Result<Vec<f64>, Failure> {
    let arg = arg.trim().trim_start_matches('(').trim_end_matches(')');
    if arg.trim().is_empty() {
        return Ok(Vec::new());
    }
    arg.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| usage(format!("bad number {s:?} in --{what}"))))
        .collect()
}

fn fmt_values(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn cmd_laws(suite: &str, common: &Common) -> Result<i32, Failure> {
    let suite: Suite = suite.parse().map_err(usage)?;
    let params = common.params(common.model_kind(ModelKind::Rel)?)?;
    let reports = run_suite(suite, &params)?;
    let failed = any_failed(&reports);
    let run = SuiteRun { suite, params, reports };
    let text = match common.format {
        Format::Text => run.to_text(),
        Format::Structured => to_json(&run),
    };
    common.emit(&text)?;
    if common.out.is_some() {
        if let Some(line) = run.to_text().lines().last() {
            println!("{line}");
        }
    }
    Ok(if failed { EXIT_LAW_FAILED } else { EXIT_OK })
}

#[derive(Serialize)]
struct Dump {
    model: String,
    map: String,
    params: LawParams,
    entries: Vec<(String, String, String)>,
    truncated_rows: Vec<String>,
}

/// The structure map `name` on the model's base object(s).
fn structure_map(model: &Model, kind: ModelKind, n: usize, name: &str) -> Result<Map, Failure> {
    let (a, b) = if kind == ModelKind::Ext2 {
        let ws: Vec<String> = (1..=n).map(|i| format!("w{i}")).collect();
        (Obj::vectors("A", n), Obj::base("B", &ws.iter().map(String::as_str).collect::<Vec<_>>()))
    } else {
        let ps: Vec<String> = (0..n).map(|i| char::from(b'p' + i as u8).to_string()).collect();
        (Obj::letters("A", n), Obj::base("B", &ps.iter().map(String::as_str).collect::<Vec<_>>()))
    };
    Ok(match name {
        "id" => model.id(&model.bang(&a)),
        "delta" => model.delta(&a),
        "epsilon" => model.epsilon(&a),
        "comult" => model.comult(&a),
        "counit" => model.counit(&a),
        "nabla" => model.nabla(&a),
        "unit" => model.unit(&a),
        "d" => model.d(&a),
        "dcirc" => model.dcirc(&a),
        "eta" => model.eta(&a),
        "r" => model.r(&a),
        "r_star" => model.r_star(&a),
        "chi" => model.chi(&a, &b),
        "chi_inv" => model.chi_inv(&a, &b),
        "cup" => model.cup(&model.bang(&a)),
        "cap" => model.cap(&model.bang(&a)),
        other => return Err(usage(format!("unknown map {other:?}"))),
    })
}

fn cmd_dump(name: &str, expr: Option<&str>, common: &Common) -> Result<i32, Failure> {
    let kind = common.model_kind(ModelKind::Rel)?;
    let params = common.params(kind)?;
    if kind.is_cartesian() {
        let text = source(expr.ok_or_else(|| usage("dump on poly or smooth needs --expr"))?)?;
        let shown = match (kind, name) {
            (ModelKind::Poly, "D") => d_poly(&parse_poly(&text).map_err(|e| usage(e.to_string()))?).to_string(),
            (ModelKind::Poly, "R") => r_poly(&parse_poly(&text).map_err(|e| usage(e.to_string()))?).to_string(),
            (_, "D") => d_expr(&parse_expr(&text)?).to_string(),
            (_, "R") => r_expr(&parse_expr(&text)?).to_string(),
            (_, other) => return Err(usage(format!("unknown map {other:?} for {kind}; expected D or R"))),
        };
        let out = match common.format {
            Format::Text => format!("{shown}\n"),
            Format::Structured => to_json(&serde_json::json!({ "model": kind.name(), "map": name, "expr": text.trim(), "result": shown })),
        };
        common.emit(&out)?;
        return Ok(EXIT_OK);
    }
    let model = params.build_model().map_err(usage)?;
    let mor: Mor = structure_map(&model, kind, params.alphabet, name)?.materialize();
    let out = match common.format {
        Format::Text => {
            let mut s = mor.dump();
            for row in mor.truncated_rows() {
                let _ = writeln!(s, "# truncated row {row}");
            }
            s
        }
        Format::Structured => to_json(&Dump {
            model: kind.name().into(),
            map: name.into(),
            params,
            entries: mor.entries().map(|(a, c, v)| (a.to_string(), c.to_string(), v.to_string())).collect(),
            truncated_rows: mor.truncated_rows().iter().map(ToString::to_string).collect(),
        }),
    };
    common.emit(&out)?;
    Ok(EXIT_OK)
}

fn cmd_rderive(expr: &str, point: Option<&str>, cotangent: Option<&str>, common: &Common) -> Result<i32, Failure> {
    let kind = common.model_kind(ModelKind::Smooth)?;
    let text = source(expr)?;
    let (shown, f) = match kind {
        ModelKind::Poly => {
            let p = parse_poly(&text).map_err(|e| usage(e.to_string()))?;
            (r_poly(&p).to_string(), crate::smoothcrdc::ExprMap::from_poly(&p))
        }
        ModelKind::Smooth => {
            let f = parse_expr(&text)?;
            (r_expr(&f).to_string(), f)
        }
        other => return Err(usage(format!("rderive works on poly or smooth, not {other}"))),
    };
    let value = match point {
        None => None,
        Some(p) => {
            let x = numbers(p, "point")?;
            let t = match cotangent {
                Some(c) => numbers(c, "cotangent")?,
                None => vec![1.0; f.cod()],
            };
            if x.len() != f.dom() {
                return Err(usage(format!("--point has {} values, the map has {} variables", x.len(), f.dom())));
            }
            if t.len() != f.cod() {
                return Err(usage(format!("--cotangent has {} values, the map has {} components", t.len(), f.cod())));
            }
            let v = if kind == ModelKind::Poly {
                let q: Vec<BigRational> = x.iter().chain(&t).map(|v| BigRational::from_float(*v).expect("finite")).collect();
                let exact = r_poly(&f.to_poly().expect("polynomial")).eval(&q);
                exact.iter().map(|v| num_traits::ToPrimitive::to_f64(v).expect("finite")).collect()
            } else {
                r_expr(&f).eval(&x.iter().chain(&t).copied().collect::<Vec<_>>())?
            };
            Some((x, t, v))
        }
    };
    let out = match common.format {
        Format::Text => {
            let mut s = format!("R[f] = {shown}\n");
            if let Some((x, t, v)) = &value {
                let _ = writeln!(s, "R[f]({}, {}) = {}", fmt_values(x), fmt_values(t), fmt_values(v));
            }
            s
        }
        Format::Structured => to_json(&serde_json::json!({
            "model": kind.name(),
            "expr": text.trim(),
            "forward": if kind == ModelKind::Poly { d_poly(&f.to_poly().expect("polynomial")).to_string() } else { d_expr(&f).to_string() },
            "reverse": shown,
            "point": value.as_ref().map(|v| v.0.clone()),
            "cotangent": value.as_ref().map(|v| v.1.clone()),
            "value": value.as_ref().map(|v| v.2.clone()),
        })),
    };
    common.emit(&out)?;
    Ok(EXIT_OK)
}

fn cmd_descend(expr: &str, init: Option<&str>, lr: f64, steps: usize, common: &Common) -> Result<i32, Failure> {
    let kind = common.model_kind(ModelKind::Smooth)?;
    if !matches!(kind, ModelKind::Smooth | ModelKind::Poly) {
        return Err(usage(format!("descend works on poly or smooth, not {kind}")));
    }
    if !lr.is_finite() || lr < 0.0 {
        return Err(usage(format!("--lr must be a nonnegative number, got {lr}")));
    }
    let loss = parse_expr(&source(expr)?)?;
    let x0 = match init {
        Some(s) => numbers(s, "init")?,
        None => vec![0.0; loss.dom()],
    };
    let trajectory = gradient_descent(&loss, &x0, lr, steps)?;
    let last = trajectory.last().expect("step 0 is always recorded");
    let out = match common.format {
        Format::Text => trajectory_text(&trajectory),
        Format::Structured => to_json(&serde_json::json!({
            "loss": loss.to_string(),
            "lr": lr,
            "steps": steps,
            "trajectory": trajectory.iter().map(|s| serde_json::json!({ "step": s.step, "x": s.x, "loss": s.loss })).collect::<Vec<_>>(),
        })),
    };
    match &common.out {
        Some(_) => {
            common.emit(&out)?;
            println!("final\t{}\t{:?}", last.x.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(" "), last.loss);
        }
        None => print!("{out}"),
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli) -> Result<i32, Failure> {
    match &cli.command {
        Command::Laws { suite, common } => cmd_laws(suite, common),
        Command::Dump { map, expr, common } => cmd_dump(map, expr.as_deref(), common),
        Command::Rderive { expr, point, cotangent, common } => cmd_rderive(expr, point.as_deref(), cotangent.as_deref(), common),
        Command::Descend { expr, init, lr, steps, common } => cmd_descend(expr, init.as_deref(), *lr, *steps, common),
    }
}

/// Parses arguments (the first is the program name), runs the command and
/// returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            eprintln!("revdiff: {msg}");
            code
        }
    }
}
