//! Law checking: every equation of the theory as a pair of terms, evaluated
//! in a model and compared entry by entry.
//!
//! Rows are exact unless some generator on the way cut an infinite fan-out
//! (∩ on a bag object, r*, or the parts cap of δ). A cut row is compared
//! only on the part of its codomain inside the caps, and only if that part
//! does not change when both caps are raised by one; otherwise its entries
//! are reported as skipped, with the generator that cut it.

pub mod cartesian;
pub mod catalog;
pub mod term;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Semiring;
use crate::bang::{BangConfig, CoeffPolicy};
use crate::cokleisli::{CtxMor, KlMor};
use crate::map::Map;
use crate::model::{Fault, Model};
use crate::wrel::{first_vector_difference, random_mor, Label, Mor, Obj, Vector};

pub use catalog::{catalog, find, LawSpec, Suite};
pub use term::{eval, type_of, Env, Gen, LawError, LawResult, Sort, Term, Ty, Val};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Rel,
    Nat,
    Gf2rel,
    Ext2,
    /// Exact polynomial maps, checked symbolically.
    Poly,
    /// Expression maps, checked numerically.
    Smooth,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Rel => "rel",
            ModelKind::Nat => "nat",
            ModelKind::Gf2rel => "gf2rel",
            ModelKind::Ext2 => "ext2",
            ModelKind::Poly => "poly",
            ModelKind::Smooth => "smooth",
        }
    }

    /// Coefficients of a weighted-relation model; None for the Cartesian ones.
    pub fn semiring(self) -> Option<Semiring> {
        match self {
            ModelKind::Rel => Some(Semiring::Boolean),
            ModelKind::Nat => Some(Semiring::Natural),
            ModelKind::Gf2rel | ModelKind::Ext2 => Some(Semiring::Gf2),
            ModelKind::Poly | ModelKind::Smooth => None,
        }
    }

    pub fn is_cartesian(self) -> bool {
        self.semiring().is_none()
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "rel" => ModelKind::Rel,
            "nat" => ModelKind::Nat,
            "gf2rel" => ModelKind::Gf2rel,
            "ext2" => ModelKind::Ext2,
            "poly" => ModelKind::Poly,
            "smooth" => ModelKind::Smooth,
            _ => return Err(format!("unknown model {s:?}; expected rel, nat, gf2rel, ext2, poly or smooth")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawParams {
    pub model: ModelKind,
    /// Size of every alphabet (dimension for the exterior model, largest
    /// arity for the Cartesian ones).
    pub alphabet: usize,
    pub degree: usize,
    pub outer: usize,
    pub policy: String,
    pub seed: u64,
    /// Random assignments per law, on top of the basis morphisms; random
    /// maps per axiom for the Cartesian models.
    pub samples: usize,
    /// Injected structure-map defect, for mutation tests.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
}

impl Default for LawParams {
    fn default() -> Self {
        LawParams { model: ModelKind::Rel, alphabet: 2, degree: 3, outer: 2, policy: "default".into(), seed: 0, samples: 3, fault: None }
    }
}

impl LawParams {
    pub fn new(model: ModelKind, alphabet: usize) -> Self {
        let samples = if model.is_cartesian() { 50 } else { 3 };
        LawParams { model, alphabet, samples, ..LawParams::default() }
    }

    pub fn with_policy(mut self, p: &str) -> Self {
        self.policy = p.to_string();
        self
    }

    pub fn with_degree(mut self, d: usize) -> Self {
        self.degree = d;
        self
    }

    pub fn build_model(&self) -> Result<Model, String> {
        let policy =
            CoeffPolicy::named(&self.policy).ok_or_else(|| format!("unknown policy {:?}; expected one of {}", self.policy, CoeffPolicy::NAMES.join(", ")))?;
        if self.degree == 0 || self.outer == 0 {
            return Err("degree and outer caps must be at least 1".into());
        }
        Ok(match (self.model, self.model.semiring()) {
            (ModelKind::Ext2, _) => Model::exterior(),
            (_, Some(sr)) => Model::bags(sr, BangConfig::new(self.degree, self.outer).with_policy(policy)),
            (k, None) => return Err(format!("{k} is not a weighted-relation model")),
        }
        .with_fault(self.fault))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    WindowSkippedPartial,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::WindowSkippedPartial => "window-skipped-partial",
            Verdict::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Which assignment of the law's variables failed.
    pub sample: String,
    pub row: String,
    pub col: String,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "input {} output {}: lhs {} vs rhs {} ({})", self.row, self.col, self.lhs, self.rhs, self.sample)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    pub model: String,
    pub params: LawParams,
    pub verdict: Verdict,
    pub counterexample: Option<Witness>,
    pub entries_compared: u64,
    pub entries_skipped: u64,
    /// One line per skipped row: the input and the generator that cut it.
    pub skips: Vec<String>,
    pub note: Option<String>,
    pub wall_time_ms: u64,
}

impl LawReport {
    /// The report with its wall time cleared, for reproducibility checks.
    pub fn timeless(&self) -> LawReport {
        LawReport { wall_time_ms: 0, ..self.clone() }
    }
}

/// Names of the atoms of each type variable.
fn objects(params: &LawParams) -> BTreeMap<&'static str, Obj> {
    let n = params.alphabet;
    let ext = params.model == ModelKind::Ext2;
    let mut out = BTreeMap::new();
    for (var, letter, prefix) in [("A", 'a', "v"), ("B", 'p', "w"), ("C", 'u', "u"), ("D", 'i', "t"), ("X", 'x', "x")] {
        let names: Vec<String> = if ext {
            (1..=n).map(|i| format!("{prefix}{i}")).collect()
        } else {
            (0..n).map(|i| char::from(letter as u8 + i as u8).to_string()).collect()
        };
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        out.insert(var, Obj::base(var, &refs));
    }
    out.insert("Z", Obj::base("Z", &[]));
    out
}

/// Stable per-law seed, so that adding a law does not reshuffle the others.
pub(crate) fn law_seed(seed: u64, id: &str) -> u64 {
    id.bytes().fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// The matrix object a variable's body lives on.
fn body_objs(s: &Sort, m: &Model, objs: &BTreeMap<&'static str, Obj>) -> (Obj, Obj) {
    match s {
        Sort::Plain { dom, cod } => (dom.obj(m, objs), cod.obj(m, objs)),
        Sort::Kl { dom, cod } => (m.bang(&dom.obj(m, objs)), cod.obj(m, objs)),
        Sort::Ctx { ctx, dom, cod } => (Obj::tensor(&m.bang(&ctx.obj(m, objs)), &dom.obj(m, objs)), cod.obj(m, objs)),
    }
}

/// Inputs small enough for basis morphisms: at most one element in the
/// bag (or context bag).
fn small_input(s: &Sort, l: &Label) -> bool {
    let bag_len = |x: &Label| x.elems().map_or(0, <[Label]>::len);
    match s {
        Sort::Plain { .. } => true,
        Sort::Kl { .. } => bag_len(l) <= 1,
        Sort::Ctx { .. } => bag_len(&l.split_at(1).0) <= 1,
    }
}

struct Sample {
    name: String,
    bodies: BTreeMap<&'static str, Mor>,
}

fn samples(law: &LawSpec, m: &Model, objs: &BTreeMap<&'static str, Obj>, params: &LawParams) -> Vec<Sample> {
    if law.vars.is_empty() {
        return vec![Sample { name: "no variables".into(), bodies: BTreeMap::new() }];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(law_seed(params.seed, law.id));
    let mut out = Vec::new();
    for i in 0..params.samples.max(1) {
        let bodies = law
            .vars
            .iter()
            .map(|(v, s)| {
                let (d, c) = body_objs(s, m, objs);
                let density = rng.gen_range(0.2..0.6);
                (*v, random_mor(&d, &c, m.sr, density, &mut rng))
            })
            .collect();
        out.push(Sample { name: format!("random sample {i}"), bodies });
    }
    let base = out[0].bodies.clone();
    for (v, s) in &law.vars {
        let (d, c) = body_objs(s, m, objs);
        for a in d.basis().iter().filter(|l| small_input(s, l)) {
            for b in c.basis() {
                let mut bodies = base.clone();
                let mut e = Mor::zero(&d, &c, m.sr);
                e.add_at(a.clone(), b.clone(), m.sr.one()).expect("basis labels");
                bodies.insert(v, e);
                out.push(Sample { name: format!("{v} = unit at ({a}, {b})"), bodies });
            }
        }
    }
    out
}

fn values(law: &LawSpec, m: &Model, objs: &BTreeMap<&'static str, Obj>, bodies: &BTreeMap<&'static str, Mor>) -> LawResult<BTreeMap<&'static str, Val>> {
    let mut vals = BTreeMap::new();
    for (v, s) in &law.vars {
        let body = &bodies[v];
        let val = match s {
            Sort::Plain { .. } => Val::Plain(Map::from_mor(body)),
            Sort::Kl { dom, cod } => Val::Kl(KlMor::from_body(m, &dom.obj(m, objs), &cod.obj(m, objs), body)?),
            Sort::Ctx { ctx, dom, cod } => {
                Val::Ctx(CtxMor::from_body(m, &ctx.obj(m, objs), &dom.obj(m, objs), &cod.obj(m, objs), body)?)
            }
        };
        vals.insert(*v, val);
    }
    Ok(vals)
}

fn as_map(v: Val) -> Map {
    match v {
        Val::Plain(m) => m,
        Val::Kl(k) => k.map().clone(),
        Val::Ctx(c) => c.map().clone(),
    }
}

/// Both sides of a law as maps, under one model.
fn sides(law: &LawSpec, m: &Model, objs: &BTreeMap<&'static str, Obj>, bodies: &BTreeMap<&'static str, Mor>) -> LawResult<(Map, Map)> {
    let vals = values(law, m, objs, bodies)?;
    let env = Env { model: m, objs, vals: &vals };
    Ok((as_map(eval(&law.lhs, &env)?), as_map(eval(&law.rhs, &env)?)))
}

/// The inputs a law is compared on, and the codomain whose caps bound the
/// compared part of a cut row.
fn window(s: &Sort, m: &Model, objs: &BTreeMap<&'static str, Obj>) -> (Obj, Obj) {
    body_objs(s, m, objs)
}

fn restrict(v: &Vector, cod: &Obj) -> Vector {
    v.iter().filter(|(c, _)| cod.contains(c)).map(|(c, x)| (c.clone(), x.clone())).collect()
}

fn entries(l: &Vector, r: &Vector) -> u64 {
    let n = l.keys().chain(r.keys().filter(|k| !l.contains_key(*k))).count();
    n.max(1) as u64
}

struct Tally {
    compared: u64,
    skipped: u64,
    skips: Vec<String>,
    witness: Option<Witness>,
}

fn not_applicable(law: &LawSpec, params: &LawParams, why: String) -> LawReport {
    LawReport {
        law: law.id.to_string(),
        model: params.model.name().to_string(),
        params: params.clone(),
        verdict: Verdict::NotApplicable,
        counterexample: None,
        entries_compared: 0,
        entries_skipped: 0,
        skips: Vec::new(),
        note: Some(why),
        wall_time_ms: 0,
    }
}

/// Checks one law. Type errors in the law itself are returned as errors;
/// everything about the model ends up in the report.
pub fn check_law(law: &LawSpec, params: &LawParams) -> Result<LawReport, LawError> {
    let start = Instant::now();
    let m = params.build_model().map_err(LawError::Usage)?;
    let vars: term::VarSorts = law.vars.iter().cloned().collect();
    let ls = type_of(&law.lhs, &vars)?;
    let rs = type_of(&law.rhs, &vars)?;
    if ls != rs {
        return Err(LawError::Type { path: law.id.to_string(), msg: format!("sides differ: {ls} vs {rs}") });
    }
    if let Some(only) = law.only {
        if !only.contains(&m.sr) {
            return Ok(not_applicable(law, params, format!("claimed only over {}", only.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", "))));
        }
    }
    if let (Some(max), false) = (law.bag_alphabet_max, m.is_exterior()) {
        if params.alphabet > max {
            return Ok(not_applicable(law, params, format!("bag models only up to alphabet {max}")));
        }
    }
    let objs = objects(params);
    let (dom, cod) = window(&ls, &m, &objs);
    let bumped = m.bumped();
    let mut t = Tally { compared: 0, skipped: 0, skips: Vec::new(), witness: None };
    for sample in samples(law, &m, &objs, params) {
        let (lm, rm) = match sides(law, &m, &objs, &sample.bodies) {
            Ok(x) => x,
            Err(LawError::NotApplicable(why)) => return Ok(not_applicable(law, params, why)),
            Err(LawError::Witness(w)) => {
                t.witness = Some(Witness {
                    sample: format!("{}; a side is undefined", sample.name),
                    row: w.row.to_string(),
                    col: w.col.to_string(),
                    lhs: w.lhs.to_string(),
                    rhs: w.rhs.to_string(),
                });
                break;
            }
            Err(e) => return Err(e),
        };
        let mut raised: Option<Option<(Map, Map)>> = None;
        for x in dom.basis() {
            let (lr, rr) = (lm.row(x), rm.row(x));
            let (l, r) = if !lr.is_cut() && !rr.is_cut() {
                (lr.v, rr.v)
            } else {
                let (lw, rw) = (restrict(&lr.v, &cod), restrict(&rr.v, &cod));
                let up = raised.get_or_insert_with(|| sides(law, &bumped, &objs, &sample.bodies).ok());
                let stable = up.as_ref().is_some_and(|(lb, rb)| {
                    restrict(&lb.row(x).v, &cod) == lw && restrict(&rb.row(x).v, &cod) == rw
                });
                if !stable {
                    t.skipped += entries(&lw, &rw);
                    let why = lr.trunc.or(rr.trunc).map_or_else(String::new, |s| s.to_string());
                    t.skips.push(format!("{}: input {x}: {why}; row changes when the caps are raised", sample.name));
                    continue;
                }
                (lw, rw)
            };
            t.compared += entries(&l, &r);
            if let Some((c, a, b)) = first_vector_difference(m.sr, &l, &r) {
                t.witness = Some(Witness {
                    sample: sample.name.clone(),
                    row: x.to_string(),
                    col: c.to_string(),
                    lhs: a.to_string(),
                    rhs: b.to_string(),
                });
                break;
            }
        }
        if t.witness.is_some() {
            break;
        }
    }
    let verdict = match (&t.witness, t.skipped) {
        (Some(_), _) => Verdict::Fail,
        (None, 0) => Verdict::Pass,
        (None, _) => Verdict::WindowSkippedPartial,
    };
    Ok(LawReport {
        law: law.id.to_string(),
        model: params.model.name().to_string(),
        params: params.clone(),
        verdict,
        counterexample: t.witness,
        entries_compared: t.compared,
        entries_skipped: t.skipped,
        skips: t.skips,
        note: None,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs every law of a suite, in parallel; reports come back sorted by id.
pub fn run_suite(suite: Suite, params: &LawParams) -> Result<Vec<LawReport>, LawError> {
    if params.model.is_cartesian() {
        return cartesian::run(suite, params);
    }
    params.build_model().map_err(LawError::Usage)?;
    let laws: Vec<LawSpec> = catalog().into_iter().filter(|l| suite.covers(l.suite)).collect();
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(laws.len().max(1));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results: Vec<(usize, Result<LawReport, LawError>)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                s.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                        let Some(law) = laws.get(i) else { break };
                        out.push((i, check_law(law, params)));
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("law checker panicked")).collect()
    });
    let mut reports = results.into_iter().map(|(_, r)| r).collect::<Result<Vec<_>, _>>()?;
    reports.sort_by(|a, b| a.law.cmp(&b.law));
    Ok(reports)
}

/// True iff some report failed.
pub fn any_failed(reports: &[LawReport]) -> bool {
    reports.iter().any(|r| r.verdict == Verdict::Fail)
}

/// A suite run as one self-describing document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteRun {
    pub suite: Suite,
    pub params: LawParams,
    pub reports: Vec<LawReport>,
}

impl SuiteRun {
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut s = format!(
            "suite {} model {} alphabet {} degree {} outer {} policy {} seed {} samples {}\n",
            self.suite, p.model, p.alphabet, p.degree, p.outer, p.policy, p.seed, p.samples
        );
        for r in &self.reports {
            s += &format!(
                "{:<28} {:<22} compared {:>6} skipped {:>5} {:>6}ms\n",
                r.law, r.verdict, r.entries_compared, r.entries_skipped, r.wall_time_ms
            );
            if let Some(w) = &r.counterexample {
                s += &format!("    counterexample: {w}\n");
            }
            if let Some(n) = &r.note {
                s += &format!("    note: {n}\n");
            }
            for k in &r.skips {
                s += &format!("    skipped {k}\n");
            }
        }
        let count = |v: Verdict| self.reports.iter().filter(|r| r.verdict == v).count();
        s += &format!(
            "total {} pass {} fail {} window-skipped-partial {} not-applicable {}\n",
            self.reports.len(),
            count(Verdict::Pass),
            count(Verdict::Fail),
            count(Verdict::WindowSkippedPartial),
            count(Verdict::NotApplicable)
        );
        s
    }
}

/// Where each displayed equation of the theory is checked, or why not.
pub fn coverage_audit() -> Vec<(&'static str, &'static [&'static str])> {
    vec![
        ("comonad: counit laws and coassociativity of δ", &["comonad.counit_left", "comonad.counit_right", "comonad.coassoc"]),
        ("naturality of δ and ε", &["comonad.delta_natural", "comonad.eps_natural"]),
        ("comonoid !A: coassociativity, counit, cocommutativity", &["comonoid.coassoc", "comonoid.counit", "comonoid.cocomm"]),
        ("naturality of Δ and e", &["comonoid.comult_natural", "comonoid.counit_natural"]),
        ("δ is a comonoid morphism", &["coalgebra.comult", "coalgebra.counit"]),
        ("coderiving transformation d° = Δ;(1⊗ε)", &["coderiving"]),
        ("Seely maps are isomorphisms, and natural", &["seely_iso", "seely_iso.inverse", "seely_iso.top", "seely.natural"]),
        (
            "additive bialgebra modality: bimonoid !A",
            &[
                "bimonoid",
                "bimonoid.counit",
                "bimonoid.unit",
                "bimonoid.scalar",
                "monoid.assoc",
                "monoid.unit",
                "monoid.comm",
                "monoid.nabla_natural",
                "monoid.unit_natural",
            ],
        ),
        ("χ⁻¹ = (!ι0⊗!ι1);∇: the definition used by the model, checked through seely_iso", &[]),
        ("deriving transformation: naturality, constant, Leibniz, linear, chain, interchange", &["d.N", "d.1", "d.2", "d.3", "d.4", "d.5"]),
        ("codereliction and deriving transformation determine each other", &["codereliction.from_d", "codereliction.to_d"]),
        ("coKleisli category: associativity and units", &["kl.assoc", "kl.unit_left", "kl.unit_right"]),
        (
            "Cartesian differential combinator axioms",
            &["CD.1", "CD.1.zero", "CD.2", "CD.2.zero", "CD.3", "CD.3.proj0", "CD.3.proj1", "CD.4", "CD.5", "CD.6", "CD.7"],
        ),
        ("derivative of a coKleisli map, both forms", &["D_via_dcirc"]),
        (
            "Cartesian reverse differential combinator axioms",
            &["RD.1", "RD.1.zero", "RD.2", "RD.2.zero", "RD.3", "RD.3.proj0", "RD.3.proj1", "RD.4", "RD.5", "RD.6", "RD.7"],
        ),
        ("forward derivative recovered from the reverse one", &["crdc_to_cdc"]),
        ("reverse derivative three ways: χ;r, the fibre dagger, cups and caps", &["R_three_way", "R_three_way.cupcap"]),
        ("self-dual objects: snake equations", &["snake", "snake.mirror", "snake.base", "snake.base_mirror"]),
        ("twist equations", &["twist", "twist.cap"]),
        ("sliding equations and the induced transpose", &["slide", "slide.cup", "star_def", "star_involution", "star_contravariant", "star_identity"]),
        ("reverse deriving transformation axioms", &["r.N", "r.1", "r.2", "r.3", "r.4", "r.5"]),
        ("d and r determine each other", &["r_from_d", "d_from_r", "dr_roundtrip", "rd_roundtrip"]),
        ("d* = d° in the Seely case", &["dstar_eq_dcirc"]),
        ("context fibration: fibre identities", &["fibre.unit_left", "fibre.unit_right", "cartesian_lift"]),
        ("fibres of linear maps and the E isomorphism", &["E_roundtrip", "E_roundtrip.inverse"]),
        (
            "dagger fibration: involution, contravariance, change of base, monoidal, biproducts",
            &[
                "dagger_involution",
                "dagger_contravariant",
                "dagger_identity",
                "dagger_change_of_base",
                "dagger_tensor",
                "dagger_lift",
                "dagger_biproduct",
                "dagger_biproduct.1",
            ],
        ),
        ("monoidal coalgebra modality maps m_{A,B} and m_k: not modelled, the Seely form is used instead", &[]),
        ("Cartesian maps of the fibration are (f, e⊗1): checked as a predicate, not as a law", &[]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(id: &str, p: &LawParams) -> LawReport {
        check_law(&find(id).unwrap_or_else(|| panic!("no law {id}")), p).unwrap()
    }

    #[test]
    fn every_law_type_checks() {
        for law in catalog() {
            let vars: term::VarSorts = law.vars.iter().cloned().collect();
            let l = type_of(&law.lhs, &vars).unwrap_or_else(|e| panic!("{}: {e}", law.id));
            let r = type_of(&law.rhs, &vars).unwrap_or_else(|e| panic!("{}: {e}", law.id));
            assert_eq!(l, r, "{}", law.id);
        }
    }

    #[test]
    fn ids_are_unique_and_audited() {
        let laws = catalog();
        let mut ids: Vec<&str> = laws.iter().map(|l| l.id).collect();
        ids.dedup();
        assert_eq!(ids.len(), laws.len());
        let audited: Vec<&str> = coverage_audit().iter().flat_map(|(_, v)| v.iter().copied()).collect();
        for id in &ids {
            assert_eq!(audited.iter().filter(|a| *a == id).count(), 1, "{id} audited once");
        }
        for a in audited {
            assert!(ids.contains(&a), "audit names unknown law {a}");
        }
    }

    #[test]
    fn type_errors_name_the_subterm() {
        let bad = Term::Compose(vec![Term::Gen(Gen::D(Ty::Var("A"))), Term::Gen(Gen::D(Ty::Var("A")))]);
        match type_of(&bad, &Default::default()) {
            Err(LawError::Type { path, .. }) => assert_eq!(path, "/compose.1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn d3_at_one_letter() {
        let p = LawParams::new(ModelKind::Rel, 1).with_degree(2);
        assert_eq!(report("d.3", &p).verdict, Verdict::Pass);
    }

    #[test]
    fn leibniz_on_booleans() {
        assert_eq!(report("d.2", &LawParams::new(ModelKind::Rel, 2)).verdict, Verdict::Pass);
    }

    #[test]
    fn bimonoid_negative_control() {
        let p = LawParams::new(ModelKind::Nat, 1).with_degree(2).with_policy("both-multinomial");
        let r = report("bimonoid", &p);
        assert_eq!(r.verdict, Verdict::Fail);
        let w = r.counterexample.unwrap();
        assert_eq!((w.row.as_str(), w.col.as_str(), w.lhs.as_str(), w.rhs.as_str()), ("([a],[a])", "([a],[a])", "4", "2"));
    }

    #[test]
    fn snake_on_exterior_is_exact() {
        let r = report("snake", &LawParams::new(ModelKind::Ext2, 3));
        assert_eq!((r.verdict, r.entries_skipped), (Verdict::Pass, 0));
    }

    #[test]
    fn dstar_only_claimed_over_booleans() {
        let r = report("dstar_eq_dcirc", &LawParams::new(ModelKind::Nat, 1));
        assert_eq!(r.verdict, Verdict::NotApplicable);
        assert_eq!(report("dstar_eq_dcirc", &LawParams::new(ModelKind::Rel, 2)).verdict, Verdict::Pass);
    }
}
