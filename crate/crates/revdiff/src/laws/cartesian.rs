//! The CD and RD axioms on the two Cartesian models: exact polynomial maps
//! (compared symbolically) and expression maps (compared at random points).

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{law_seed, LawError, LawParams, LawReport, ModelKind, Suite, Verdict, Witness};
use crate::crdc::{self, second_map, Cartesian, Differential, Equation, SecondMap};
use crate::polycrdc::{random_poly_map, PolyMap};
use crate::smoothcrdc::{random_expr_map, random_point, relative_gap, ExprMap};

/// Relative tolerance and points per map for the numeric model.
const SMOOTH_FIRST_ORDER: (f64, usize) = (1e-9, 100);
const SMOOTH_NESTED: (f64, usize) = (1e-7, 20);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Cd,
    Rd,
    Roundtrip,
}

fn laws(suite: Suite) -> Result<Vec<(String, Family, usize)>, LawError> {
    let cd = (1..=7).map(|k| (format!("CD.{k}"), Family::Cd, k));
    let rd = (1..=7).map(|k| (format!("RD.{k}"), Family::Rd, k)).chain([("crdc_to_cdc".to_string(), Family::Roundtrip, 0)]);
    Ok(match suite {
        Suite::CokleisliCd => cd.collect(),
        Suite::CokleisliRd => rd.collect(),
        Suite::All => cd.chain(rd).collect(),
        other => {
            return Err(LawError::Usage(format!(
                "suite {other} has no instance on the Cartesian models; use cokleisli_cd, cokleisli_rd or all"
            )))
        }
    })
}

fn equations<M: Differential>(family: Family, k: usize, f: &M, g: Option<&M>) -> Vec<Equation<M>> {
    match family {
        Family::Cd => crdc::cd_axiom(k, f, g).expect("second map drawn to fit"),
        Family::Rd => crdc::rd_axiom(k, f, g).expect("second map drawn to fit"),
        Family::Roundtrip => vec![crdc::crdc_to_cdc(f)],
    }
}

/// Arities of f and of the second map the axiom needs.
fn shapes<R: Rng>(rng: &mut R, max_arity: usize, k: usize, family: Family) -> ((usize, usize), Option<(usize, usize)>) {
    let max = max_arity.clamp(1, 3);
    let n = rng.gen_range(1..=max);
    let m = rng.gen_range(1..=max.min(2));
    let need = if family == Family::Roundtrip { SecondMap::None } else { second_map(k) };
    let g = match need {
        SecondMap::None => None,
        SecondMap::Parallel => Some((n, m)),
        SecondMap::SameDomain => Some((n, rng.gen_range(1..=max.min(2)))),
        SecondMap::Composable => Some((m, rng.gen_range(1..=max.min(2)))),
    };
    ((n, m), g)
}

struct Outcome {
    compared: u64,
    witness: Option<Witness>,
}

fn check_poly(family: Family, k: usize, params: &LawParams, rng: &mut ChaCha8Rng) -> Outcome {
    let degree = params.degree.min(u32::MAX as usize) as u32;
    let mut out = Outcome { compared: 0, witness: None };
    for i in 0..params.samples {
        let ((n, m), gs) = shapes(rng, params.alphabet, k, family);
        let f = random_poly_map(rng, n, m, degree, 5);
        let g = gs.map(|(a, b)| random_poly_map(rng, a, b, degree, 5));
        for e in equations(family, k, &f, g.as_ref()) {
            out.compared += 1;
            if e.lhs != e.rhs {
                let c = (0..e.lhs.cod()).find(|&c| e.lhs.components()[c] != e.rhs.components()[c]).expect("differs");
                out.witness = Some(Witness {
                    sample: describe(i, &f.to_string(), g.as_ref().map(PolyMap::to_string)),
                    row: e.name,
                    col: format!("component {}", c + 1),
                    lhs: e.lhs.components()[c].to_string(),
                    rhs: e.rhs.components()[c].to_string(),
                });
                return out;
            }
        }
    }
    out
}

fn check_smooth(family: Family, k: usize, params: &LawParams, rng: &mut ChaCha8Rng) -> Outcome {
    let (tol, points) = if family != Family::Roundtrip && k >= 6 { SMOOTH_NESTED } else { SMOOTH_FIRST_ORDER };
    let mut out = Outcome { compared: 0, witness: None };
    for i in 0..params.samples {
        let ((n, m), gs) = shapes(rng, params.alphabet, k, family);
        let depth = params.degree.clamp(1, 4);
        let f = random_expr_map(rng, n, m, depth);
        let g = gs.map(|(a, b)| random_expr_map(rng, a, b, depth));
        let eqs = equations(family, k, &f, g.as_ref());
        for _ in 0..points {
            let width = eqs.iter().map(|e| e.lhs.dom()).max().unwrap_or(0);
            let p = random_point(rng, width);
            for e in &eqs {
                let x = &p[..e.lhs.dom()];
                let (l, r) = (e.lhs.eval(x), e.rhs.eval(x));
                out.compared += 1;
                let bad = match (&l, &r) {
                    (Ok(l), Ok(r)) => relative_gap(l, r) > tol,
                    _ => true,
                };
                if bad {
                    let show = |v: &Result<Vec<f64>, _>| match v {
                        Ok(v) => format!("{v:?}"),
                        Err(e) => format!("{e}"),
                    };
                    out.witness = Some(Witness {
                        sample: describe(i, &f.to_string(), g.as_ref().map(ExprMap::to_string)),
                        row: e.name.clone(),
                        col: format!("point {x:?}"),
                        lhs: show(&l),
                        rhs: show(&r),
                    });
                    return out;
                }
            }
        }
    }
    out
}

fn describe(i: usize, f: &str, g: Option<String>) -> String {
    match g {
        Some(g) => format!("random map {i}: f = {f}, g = {g}"),
        None => format!("random map {i}: f = {f}"),
    }
}

/// Runs the axioms a suite covers on the polynomial or expression model.
pub fn run(suite: Suite, params: &LawParams) -> Result<Vec<LawReport>, LawError> {
    let laws = laws(suite)?;
    let mut reports: Vec<LawReport> = std::thread::scope(|s| {
        let handles: Vec<_> = laws
            .iter()
            .map(|(id, family, k)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let mut rng = ChaCha8Rng::seed_from_u64(law_seed(params.seed, id));
                    let (o, note) = match params.model {
                        ModelKind::Poly => (check_poly(*family, *k, params, &mut rng), "exact symbolic comparison"),
                        _ => (check_smooth(*family, *k, params, &mut rng), "numeric comparison at random points"),
                    };
                    LawReport {
                        law: id.clone(),
                        model: params.model.name().to_string(),
                        params: params.clone(),
                        verdict: if o.witness.is_some() { Verdict::Fail } else { Verdict::Pass },
                        counterexample: o.witness,
                        entries_compared: o.compared,
                        entries_skipped: 0,
                        skips: Vec::new(),
                        note: Some(note.to_string()),
                        wall_time_ms: start.elapsed().as_millis() as u64,
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("axiom checker panicked")).collect()
    });
    reports.sort_by(|a, b| a.law.cmp(&b.law));
    Ok(reports)
}
