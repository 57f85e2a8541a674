//! Law terms: a small typed language over the structure maps, with an
//! interpreter into a [`Model`].
//!
//! Terms have three sorts. Plain terms are morphisms of the base category,
//! coKleisli terms are maps `!A → B` composed by promotion, and fibre terms
//! are maps `!X⊗A → B` over a context X.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::cokleisli::{self as kl, CtxMor, KlError, KlMor};
use crate::map::{Dual, Map};
use crate::model::Model;
use crate::wrel::{Counterexample, Obj, WrelError};

use self::Gen as G;

/// Object expressions. Tensors are kept flat, as [`Obj::tensor`] does.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Ty {
    Var(&'static str),
    Tensor(Vec<Ty>),
    Sum(Box<Ty>, Box<Ty>),
    Bang(Box<Ty>),
}

impl Ty {
    pub fn unit() -> Ty {
        Ty::Tensor(Vec::new())
    }

    pub fn tensor(a: &Ty, b: &Ty) -> Ty {
        let mut v = a.factors();
        v.extend(b.factors());
        if v.len() == 1 {
            v.pop().expect("one factor")
        } else {
            Ty::Tensor(v)
        }
    }

    fn factors(&self) -> Vec<Ty> {
        match self {
            Ty::Tensor(v) => v.clone(),
            t => vec![t.clone()],
        }
    }

    pub fn sum(a: &Ty, b: &Ty) -> Ty {
        Ty::Sum(Box::new(a.clone()), Box::new(b.clone()))
    }

    pub fn bang(a: &Ty) -> Ty {
        Ty::Bang(Box::new(a.clone()))
    }

    fn summands(&self) -> Option<(&Ty, &Ty)> {
        match self {
            Ty::Sum(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// The object under a model, with type variables from `objs`.
    pub fn obj(&self, m: &Model, objs: &BTreeMap<&'static str, Obj>) -> Obj {
        match self {
            Ty::Var(v) => objs.get(v).unwrap_or_else(|| panic!("no object for {v}")).clone(),
            Ty::Tensor(v) => Obj::from_factors(v.iter().map(|t| t.obj(m, objs)).collect()),
            Ty::Sum(a, b) => Obj::sum(&a.obj(m, objs), &b.obj(m, objs)),
            Ty::Bang(a) => m.bang(&a.obj(m, objs)),
        }
    }

    pub fn vars(&self, out: &mut Vec<&'static str>) {
        match self {
            Ty::Var(v) => {
                if !out.contains(v) {
                    out.push(v)
                }
            }
            Ty::Tensor(v) => v.iter().for_each(|t| t.vars(out)),
            Ty::Sum(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Ty::Bang(a) => a.vars(out),
        }
    }
}

fn atomic(t: &Ty) -> String {
    match t {
        Ty::Tensor(v) if !v.is_empty() => format!("({t})"),
        Ty::Sum(..) => format!("({t})"),
        _ => t.to_string(),
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Var(v) => f.write_str(v),
            Ty::Tensor(v) if v.is_empty() => f.write_str("k"),
            Ty::Tensor(v) => f.write_str(&v.iter().map(atomic).collect::<Vec<_>>().join("⊗")),
            Ty::Sum(a, b) => write!(f, "{}×{}", atomic(a), atomic(b)),
            Ty::Bang(a) => write!(f, "!{}", atomic(a)),
        }
    }
}

/// Structure maps of the base category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gen {
    Id(Ty),
    Sym(Ty, Ty),
    Zero(Ty, Ty),
    Proj(Ty, Ty, u8),
    Inj(Ty, Ty, u8),
    Delta(Ty),
    Eps(Ty),
    Comult(Ty),
    Counit(Ty),
    Nabla(Ty),
    Unit(Ty),
    Chi(Ty, Ty),
    ChiInv(Ty, Ty),
    D(Ty),
    Dcirc(Ty),
    Eta(Ty),
    R(Ty),
    Cup(Ty),
    Cap(Ty),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Gen(Gen),
    /// A morphism bound by the law (`f`, `g`, ...).
    Var(&'static str),
    Compose(Vec<Term>),
    Tensor(Vec<Term>),
    Add(Box<Term>, Box<Term>),
    Star(Box<Term>),
    BangOf(Box<Term>),
    /// `d` rebuilt from an `r` through the cups and caps, and conversely.
    DFromR(Ty, Box<Term>),
    RFromD(Ty, Box<Term>),

    KlId(Ty),
    KlZero(Ty, Ty),
    KlProj(Ty, Ty, u8),
    KlInj(Ty, Ty, u8),
    KlSum(Ty),
    KlEll(Ty),
    KlInterchange(Ty),
    KlLift(Box<Term>),
    KlCompose(Vec<Term>),
    KlPair(Box<Term>, Box<Term>),
    KlProduct(Box<Term>, Box<Term>),
    KlAdd(Box<Term>, Box<Term>),
    DOf(Box<Term>),
    DViaDcirc(Box<Term>),
    ROf(Box<Term>),
    RViaDagger(Box<Term>),
    RViaCupCap(Box<Term>),

    CtxId(Ty, Ty),
    CtxLift(Ty, Box<Term>),
    CtxCompose(Box<Term>, Box<Term>),
    CtxSubst(Box<Term>, Box<Term>),
    CtxTensor(Box<Term>, Box<Term>),
    DaggerOf(Box<Term>),
    EOf(Box<Term>),
    EInvOf(Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sort {
    Plain { dom: Ty, cod: Ty },
    Kl { dom: Ty, cod: Ty },
    Ctx { ctx: Ty, dom: Ty, cod: Ty },
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Plain { dom, cod } => write!(f, "{dom} → {cod}"),
            Sort::Kl { dom, cod } => write!(f, "{dom} ⇒ {cod}"),
            Sort::Ctx { ctx, dom, cod } => write!(f, "{dom} →[{ctx}] {cod}"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LawError {
    #[error("type error at {path}: {msg}")]
    Type { path: String, msg: String },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("{0}")]
    Witness(Box<Counterexample>),
    #[error(transparent)]
    Kl(#[from] KlError),
    /// The suite cannot be run on the model, or the model is misconfigured.
    #[error("{0}")]
    Usage(String),
}

impl From<WrelError> for LawError {
    fn from(e: WrelError) -> Self {
        LawError::Kl(e.into())
    }
}

pub type LawResult<T> = Result<T, LawError>;

fn bad<T>(path: &str, msg: String) -> LawResult<T> {
    Err(LawError::Type { path: path.to_string(), msg })
}

pub type VarSorts = BTreeMap<&'static str, Sort>;

impl Gen {
    pub fn sort(&self) -> (Ty, Ty) {
        use Gen::*;
        let b = Ty::bang;
        let t = Ty::tensor;
        match self {
            Id(a) => (a.clone(), a.clone()),
            Sym(a, c) => (t(a, c), t(c, a)),
            Zero(a, c) => (a.clone(), c.clone()),
            Proj(a, c, i) => (Ty::sum(a, c), if *i == 0 { a.clone() } else { c.clone() }),
            Inj(a, c, i) => (if *i == 0 { a.clone() } else { c.clone() }, Ty::sum(a, c)),
            Delta(a) => (b(a), b(&b(a))),
            Eps(a) => (b(a), a.clone()),
            Comult(a) => (b(a), t(&b(a), &b(a))),
            Counit(a) => (b(a), Ty::unit()),
            Nabla(a) => (t(&b(a), &b(a)), b(a)),
            Unit(a) => (Ty::unit(), b(a)),
            Chi(a, c) => (b(&Ty::sum(a, c)), t(&b(a), &b(c))),
            ChiInv(a, c) => (t(&b(a), &b(c)), b(&Ty::sum(a, c))),
            D(a) => (t(&b(a), a), b(a)),
            Dcirc(a) => (b(a), t(&b(a), a)),
            Eta(a) => (a.clone(), b(a)),
            R(a) => (t(&b(a), &b(a)), a.clone()),
            Cup(a) => (t(a, a), Ty::unit()),
            Cap(a) => (Ty::unit(), t(a, a)),
        }
    }
}

fn plain(s: Sort, path: &str) -> LawResult<(Ty, Ty)> {
    match s {
        Sort::Plain { dom, cod } => Ok((dom, cod)),
        other => bad(path, format!("expected a base map, found {other}")),
    }
}

fn klsort(s: Sort, path: &str) -> LawResult<(Ty, Ty)> {
    match s {
        Sort::Kl { dom, cod } => Ok((dom, cod)),
        other => bad(path, format!("expected a coKleisli map, found {other}")),
    }
}

fn ctxsort(s: Sort, path: &str) -> LawResult<(Ty, Ty, Ty)> {
    match s {
        Sort::Ctx { ctx, dom, cod } => Ok((ctx, dom, cod)),
        other => bad(path, format!("expected a fibre map, found {other}")),
    }
}

fn expect_eq(path: &str, found: &Ty, expected: &Ty) -> LawResult<()> {
    if found != expected {
        return bad(path, format!("expected {expected}, found {found}"));
    }
    Ok(())
}

fn sum_parts<'a>(path: &str, t: &'a Ty) -> LawResult<(&'a Ty, &'a Ty)> {
    t.summands().map_or_else(|| bad(path, format!("{t} is not a product")), Ok)
}

/// The sort of a term, or the path to the first ill-typed subterm.
pub fn type_of(term: &Term, vars: &VarSorts) -> LawResult<Sort> {
    check(term, vars, "")
}

fn check(term: &Term, vars: &VarSorts, path: &str) -> LawResult<Sort> {
    use Term::*;
    let sub = |i: usize, name: &str| format!("{path}/{name}.{i}");
    let p = |dom: Ty, cod: Ty| Ok(Sort::Plain { dom, cod });
    let k = |dom: Ty, cod: Ty| Ok(Sort::Kl { dom, cod });
    match term {
        Gen(g) => {
            let (d, c) = g.sort();
            p(d, c)
        }
        Var(v) => vars.get(v).cloned().map_or_else(|| bad(path, format!("unbound variable {v}")), Ok),
        Compose(ts) => {
            let mut it = ts.iter().enumerate();
            let (_, first) = it.next().map_or_else(|| bad(path, "empty composite".into()), Ok)?;
            let (dom, mut cod) = plain(check(first, vars, &sub(0, "compose"))?, &sub(0, "compose"))?;
            for (i, t) in it {
                let sp = sub(i, "compose");
                let (d, c) = plain(check(t, vars, &sp)?, &sp)?;
                expect_eq(&sp, &d, &cod)?;
                cod = c;
            }
            p(dom, cod)
        }
        Tensor(ts) => {
            let (mut dom, mut cod) = (Ty::unit(), Ty::unit());
            for (i, t) in ts.iter().enumerate() {
                let sp = sub(i, "tensor");
                let (d, c) = plain(check(t, vars, &sp)?, &sp)?;
                dom = Ty::tensor(&dom, &d);
                cod = Ty::tensor(&cod, &c);
            }
            p(dom, cod)
        }
        Add(a, b) | KlAdd(a, b) => {
            let sa = check(a, vars, &sub(0, "add"))?;
            let sb = check(b, vars, &sub(1, "add"))?;
            if sa != sb {
                return bad(&sub(1, "add"), format!("expected {sa}, found {sb}"));
            }
            match (term, &sa) {
                (Add(..), Sort::Plain { .. }) | (KlAdd(..), Sort::Kl { .. }) => Ok(sa),
                _ => bad(path, format!("sum of the wrong sort {sa}")),
            }
        }
        Star(t) => {
            let (d, c) = plain(check(t, vars, &sub(0, "star"))?, &sub(0, "star"))?;
            p(c, d)
        }
        BangOf(t) => {
            let (d, c) = plain(check(t, vars, &sub(0, "bang_of"))?, &sub(0, "bang_of"))?;
            p(Ty::bang(&d), Ty::bang(&c))
        }
        DFromR(a, r) => {
            let sp = sub(0, "d_from_r");
            let (d, c) = plain(check(r, vars, &sp)?, &sp)?;
            let (ed, ec) = G::R(a.clone()).sort();
            expect_eq(&sp, &d, &ed)?;
            expect_eq(&sp, &c, &ec)?;
            G::D(a.clone()).sort_plain()
        }
        RFromD(a, d) => {
            let sp = sub(0, "r_from_d");
            let (dd, dc) = plain(check(d, vars, &sp)?, &sp)?;
            let (ed, ec) = G::D(a.clone()).sort();
            expect_eq(&sp, &dd, &ed)?;
            expect_eq(&sp, &dc, &ec)?;
            G::R(a.clone()).sort_plain()
        }

        KlId(a) => k(a.clone(), a.clone()),
        KlZero(a, b) => k(a.clone(), b.clone()),
        KlProj(a, b, i) => {
            let (d, c) = G::Proj(a.clone(), b.clone(), *i).sort();
            k(d, c)
        }
        KlInj(a, b, i) => {
            let (d, c) = G::Inj(a.clone(), b.clone(), *i).sort();
            k(d, c)
        }
        KlSum(a) => k(Ty::sum(a, a), a.clone()),
        KlEll(a) => {
            let aa = Ty::sum(a, a);
            k(aa.clone(), Ty::sum(&aa, &aa))
        }
        KlInterchange(a) => {
            let aa = Ty::sum(a, a);
            let q = Ty::sum(&aa, &aa);
            k(q.clone(), q)
        }
        KlLift(t) => {
            let (d, c) = plain(check(t, vars, &sub(0, "lift"))?, &sub(0, "lift"))?;
            k(d, c)
        }
        KlCompose(ts) => {
            let mut it = ts.iter().enumerate();
            let (_, first) = it.next().map_or_else(|| bad(path, "empty composite".into()), Ok)?;
            let (dom, mut cod) = klsort(check(first, vars, &sub(0, "kl_compose"))?, &sub(0, "kl_compose"))?;
            for (i, t) in it {
                let sp = sub(i, "kl_compose");
                let (d, c) = klsort(check(t, vars, &sp)?, &sp)?;
                expect_eq(&sp, &d, &cod)?;
                cod = c;
            }
            k(dom, cod)
        }
        KlPair(a, b) => {
            let (da, ca) = klsort(check(a, vars, &sub(0, "pair"))?, &sub(0, "pair"))?;
            let (db, cb) = klsort(check(b, vars, &sub(1, "pair"))?, &sub(1, "pair"))?;
            expect_eq(&sub(1, "pair"), &db, &da)?;
            k(da, Ty::sum(&ca, &cb))
        }
        KlProduct(a, b) => {
            let (da, ca) = klsort(check(a, vars, &sub(0, "product"))?, &sub(0, "product"))?;
            let (db, cb) = klsort(check(b, vars, &sub(1, "product"))?, &sub(1, "product"))?;
            k(Ty::sum(&da, &db), Ty::sum(&ca, &cb))
        }
        DOf(f) | DViaDcirc(f) => {
            let (d, c) = klsort(check(f, vars, &sub(0, "D_of"))?, &sub(0, "D_of"))?;
            k(Ty::sum(&d, &d), c)
        }
        ROf(f) | RViaDagger(f) | RViaCupCap(f) => {
            let (d, c) = klsort(check(f, vars, &sub(0, "R_of"))?, &sub(0, "R_of"))?;
            k(Ty::sum(&d, &c), d)
        }

        CtxId(x, a) => Ok(Sort::Ctx { ctx: x.clone(), dom: a.clone(), cod: a.clone() }),
        CtxLift(x, t) => {
            let (d, c) = plain(check(t, vars, &sub(0, "ctx_lift"))?, &sub(0, "ctx_lift"))?;
            Ok(Sort::Ctx { ctx: x.clone(), dom: d, cod: c })
        }
        CtxCompose(f, g) => {
            let (x, a, b) = ctxsort(check(f, vars, &sub(0, "ctx_compose"))?, &sub(0, "ctx_compose"))?;
            let (y, b2, c) = ctxsort(check(g, vars, &sub(1, "ctx_compose"))?, &sub(1, "ctx_compose"))?;
            expect_eq(&sub(1, "ctx_compose"), &y, &x)?;
            expect_eq(&sub(1, "ctx_compose"), &b2, &b)?;
            Ok(Sort::Ctx { ctx: x, dom: a, cod: c })
        }
        CtxSubst(h, f) => {
            let (x, y) = klsort(check(h, vars, &sub(0, "substitute"))?, &sub(0, "substitute"))?;
            let (y2, a, b) = ctxsort(check(f, vars, &sub(1, "substitute"))?, &sub(1, "substitute"))?;
            expect_eq(&sub(1, "substitute"), &y2, &y)?;
            Ok(Sort::Ctx { ctx: x, dom: a, cod: b })
        }
        CtxTensor(f, g) => {
            let (x, a, b) = ctxsort(check(f, vars, &sub(0, "ctx_tensor"))?, &sub(0, "ctx_tensor"))?;
            let (y, c, d) = ctxsort(check(g, vars, &sub(1, "ctx_tensor"))?, &sub(1, "ctx_tensor"))?;
            expect_eq(&sub(1, "ctx_tensor"), &y, &x)?;
            Ok(Sort::Ctx { ctx: x, dom: Ty::tensor(&a, &c), cod: Ty::tensor(&b, &d) })
        }
        DaggerOf(f) => {
            let (x, a, b) = ctxsort(check(f, vars, &sub(0, "dagger_of"))?, &sub(0, "dagger_of"))?;
            Ok(Sort::Ctx { ctx: x, dom: b, cod: a })
        }
        EOf(g) => {
            let (x, a, b) = ctxsort(check(g, vars, &sub(0, "E"))?, &sub(0, "E"))?;
            k(Ty::sum(&x, &a), b)
        }
        EInvOf(f) => {
            let sp = sub(0, "E_inv");
            let (d, b) = klsort(check(f, vars, &sp)?, &sp)?;
            let (x, a) = sum_parts(&sp, &d)?;
            Ok(Sort::Ctx { ctx: x.clone(), dom: a.clone(), cod: b })
        }
    }
}

impl Gen {
    fn sort_plain(&self) -> LawResult<Sort> {
        let (dom, cod) = self.sort();
        Ok(Sort::Plain { dom, cod })
    }
}

/// A term's value in a model.
#[derive(Clone, Debug)]
pub enum Val {
    Plain(Map),
    Kl(KlMor),
    Ctx(CtxMor),
}

impl Val {
    fn plain(self) -> Map {
        match self {
            Val::Plain(m) => m,
            other => panic!("type-checked term gave {other:?} where a base map was expected"),
        }
    }

    fn kl(self) -> KlMor {
        match self {
            Val::Kl(m) => m,
            other => panic!("type-checked term gave {other:?} where a coKleisli map was expected"),
        }
    }

    fn ctx(self) -> CtxMor {
        match self {
            Val::Ctx(m) => m,
            other => panic!("type-checked term gave {other:?} where a fibre map was expected"),
        }
    }
}

/// Everything a term needs to be evaluated.
pub struct Env<'a> {
    pub model: &'a Model,
    pub objs: &'a BTreeMap<&'static str, Obj>,
    pub vals: &'a BTreeMap<&'static str, Val>,
}

impl Env<'_> {
    fn obj(&self, t: &Ty) -> Obj {
        t.obj(self.model, self.objs)
    }
}

fn gen_map(g: &Gen, env: &Env) -> Map {
    use Gen::*;
    let m = env.model;
    let o = |t: &Ty| env.obj(t);
    match g {
        Id(a) => m.id(&o(a)),
        Sym(a, b) => m.sym(&o(a), &o(b)),
        Zero(a, b) => m.zero(&o(a), &o(b)),
        Proj(a, b, i) => m.proj(&o(a), &o(b), *i),
        Inj(a, b, i) => m.inj(&o(a), &o(b), *i),
        Delta(a) => m.delta(&o(a)),
        Eps(a) => m.epsilon(&o(a)),
        Comult(a) => m.comult(&o(a)),
        Counit(a) => m.counit(&o(a)),
        Nabla(a) => m.nabla(&o(a)),
        Unit(a) => m.unit(&o(a)),
        Chi(a, b) => m.chi(&o(a), &o(b)),
        ChiInv(a, b) => m.chi_inv(&o(a), &o(b)),
        D(a) => m.d(&o(a)),
        Dcirc(a) => m.dcirc(&o(a)),
        Eta(a) => m.eta(&o(a)),
        R(a) => m.r(&o(a)),
        Cup(a) => m.cup(&o(a)),
        Cap(a) => m.cap(&o(a)),
    }
}

pub fn eval(term: &Term, env: &Env) -> LawResult<Val> {
    use Term::*;
    let m = env.model;
    let pl = |t: &Term| -> LawResult<Map> { Ok(eval(t, env)?.plain()) };
    let kv = |t: &Term| -> LawResult<KlMor> { Ok(eval(t, env)?.kl()) };
    let cv = |t: &Term| -> LawResult<CtxMor> { Ok(eval(t, env)?.ctx()) };
    let o = |t: &Ty| env.obj(t);
    Ok(match term {
        Gen(g) => Val::Plain(gen_map(g, env)),
        Var(v) => env.vals.get(v).cloned().ok_or_else(|| LawError::NotApplicable(format!("no value for {v}")))?,
        Compose(ts) => {
            let maps = ts.iter().map(pl).collect::<LawResult<Vec<_>>>()?;
            Val::Plain(Map::chain(&maps)?)
        }
        Tensor(ts) => {
            let mut acc = m.id(&Obj::unit());
            for t in ts {
                acc = acc.tensor(&pl(t)?)?;
            }
            Val::Plain(acc)
        }
        Add(a, b) => Val::Plain(pl(a)?.add(&pl(b)?)?),
        Star(t) => Val::Plain(star(t, env)?),
        BangOf(t) => Val::Plain(m.bang_map(&pl(t)?)),
        DFromR(a, r) => Val::Plain(m.d_from_r(&pl(r)?, &o(a))?),
        RFromD(a, d) => Val::Plain(m.r_from_d(&pl(d)?, &o(a))?),

        KlId(a) => Val::Kl(kl::kl_id(m, &o(a))),
        KlZero(a, b) => Val::Kl(kl::kl_zero(m, &o(a), &o(b))),
        KlProj(a, b, i) => Val::Kl(kl::kl_proj(m, &o(a), &o(b), *i)),
        KlInj(a, b, i) => Val::Kl(kl::kl_inj(m, &o(a), &o(b), *i)),
        KlSum(a) => Val::Kl(kl::cartesian_left_additive_ops(m, &o(a)).sum_map),
        KlEll(a) => Val::Kl(kl::cartesian_left_additive_ops(m, &o(a)).lift_ell),
        KlInterchange(a) => Val::Kl(kl::cartesian_left_additive_ops(m, &o(a)).interchange_c),
        KlLift(t) => Val::Kl(kl::kl_lift(m, &pl(t)?)?),
        KlCompose(ts) => {
            let (first, rest) = ts.split_first().expect("type-checked composite");
            let mut acc = kv(first)?;
            for t in rest {
                acc = kl::kl_compose(&acc, &kv(t)?)?;
            }
            Val::Kl(acc)
        }
        KlPair(a, b) => Val::Kl(kl::kl_pair(&kv(a)?, &kv(b)?)?),
        KlProduct(a, b) => Val::Kl(kl::kl_product(&kv(a)?, &kv(b)?)?),
        KlAdd(a, b) => Val::Kl(kl::kl_add(&kv(a)?, &kv(b)?)?),
        DOf(f) => Val::Kl(kl::forward_d(&kv(f)?)?),
        DViaDcirc(f) => Val::Kl(kl::forward_d_via_dcirc(&kv(f)?)?),
        ROf(f) => Val::Kl(kl::reverse_r(&kv(f)?)?),
        RViaDagger(f) => Val::Kl(kl::reverse_r_via_dagger(&kv(f)?)?),
        RViaCupCap(f) => Val::Kl(kl::reverse_r_via_cupcap(&kv(f)?)?),

        CtxId(x, a) => Val::Ctx(kl::ctx_id(m, &o(x), &o(a))),
        CtxLift(x, t) => Val::Ctx(kl::ctx_lift(m, &o(x), &pl(t)?)),
        CtxCompose(f, g) => Val::Ctx(kl::ctx_compose(&cv(f)?, &cv(g)?)?),
        CtxSubst(h, f) => Val::Ctx(kl::ctx_substitute(&kv(h)?, &cv(f)?)?),
        CtxTensor(f, g) => Val::Ctx(kl::ctx_tensor(&cv(f)?, &cv(g)?)?),
        DaggerOf(f) => Val::Ctx(kl::ctx_dagger(&cv(f)?)?),
        EOf(g) => Val::Kl(kl::e_functor(&cv(g)?)?),
        EInvOf(f) => match kl::e_inv(&kv(f)?) {
            Ok(c) => Val::Ctx(c),
            Err(KlError::NotLinearInContext(w)) => return Err(LawError::Witness(w)),
            Err(e) => return Err(e.into()),
        },
    })
}

/// The transpose of a base term. Maps whose rows can be inverted exactly
/// are transposed directly; otherwise the star is pushed through the term.
fn star(t: &Term, env: &Env) -> LawResult<Map> {
    use Gen::*;
    let m = env.model;
    let o = |t: &Ty| env.obj(t);
    match t {
        Term::Gen(Cup(a)) => return Ok(m.cap(&o(a))),
        Term::Gen(Cap(a)) => return Ok(m.cup(&o(a))),
        Term::Gen(Sym(a, b)) => return Ok(m.sym(&o(b), &o(a))),
        Term::Gen(Id(a)) => return Ok(m.id(&o(a))),
        Term::Gen(Zero(a, b)) => return Ok(m.zero(&o(b), &o(a))),
        Term::Gen(Proj(a, b, i)) => return Ok(m.inj(&o(a), &o(b), *i)),
        Term::Gen(Inj(a, b, i)) => return Ok(m.proj(&o(a), &o(b), *i)),
        Term::Gen(R(a)) => return Ok(m.r_star(&o(a))),
        _ => {}
    }
    let map = eval(t, env)?.plain();
    if map.dual() != Dual::Unknown {
        return Ok(map.transpose()?);
    }
    match t {
        Term::Compose(ts) => {
            let maps = ts.iter().rev().map(|x| star(x, env)).collect::<LawResult<Vec<_>>>()?;
            Ok(Map::chain(&maps)?)
        }
        Term::Tensor(ts) => {
            let mut acc = m.id(&Obj::unit());
            for x in ts {
                acc = acc.tensor(&star(x, env)?)?;
            }
            Ok(acc)
        }
        Term::Add(a, b) => Ok(star(a, env)?.add(&star(b, env)?)?),
        _ => Err(LawError::NotApplicable(format!("no exact transpose for {t}"))),
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Gen::*;
        match self {
            Id(a) => write!(f, "1_{a}"),
            Sym(a, b) => write!(f, "σ_{{{a},{b}}}"),
            Zero(..) => write!(f, "0"),
            Proj(_, _, i) => write!(f, "π{i}"),
            Inj(_, _, i) => write!(f, "ι{i}"),
            Delta(a) => write!(f, "δ_{a}"),
            Eps(a) => write!(f, "ε_{a}"),
            Comult(a) => write!(f, "Δ_{a}"),
            Counit(a) => write!(f, "e_{a}"),
            Nabla(a) => write!(f, "∇_{a}"),
            Unit(a) => write!(f, "u_{a}"),
            Chi(a, b) => write!(f, "χ_{{{a},{b}}}"),
            ChiInv(a, b) => write!(f, "χ⁻¹_{{{a},{b}}}"),
            D(a) => write!(f, "d_{a}"),
            Dcirc(a) => write!(f, "d°_{a}"),
            Eta(a) => write!(f, "η_{a}"),
            R(a) => write!(f, "r_{a}"),
            Cup(a) => write!(f, "∪_{a}"),
            Cap(a) => write!(f, "∩_{a}"),
        }
    }
}

fn list(f: &mut fmt::Formatter<'_>, ts: &[Term], sep: &str) -> fmt::Result {
    let parts: Vec<String> = ts
        .iter()
        .map(|t| match t {
            Term::Compose(_) | Term::Tensor(_) | Term::Add(..) | Term::KlCompose(_) => format!("({t})"),
            _ => t.to_string(),
        })
        .collect();
    f.write_str(&parts.join(sep))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Term::*;
        match self {
            Gen(g) => write!(f, "{g}"),
            Var(v) => f.write_str(v),
            Compose(ts) => list(f, ts, ";"),
            Tensor(ts) => list(f, ts, " ⊗ "),
            Add(a, b) | KlAdd(a, b) => write!(f, "{a} + {b}"),
            Star(t) => write!(f, "({t})*"),
            BangOf(t) => write!(f, "!({t})"),
            DFromR(_, r) => write!(f, "d⟨{r}⟩"),
            RFromD(_, d) => write!(f, "r⟨{d}⟩"),
            KlId(a) => write!(f, "1_{a}"),
            KlZero(..) => f.write_str("0"),
            KlProj(_, _, i) => write!(f, "π{i}"),
            KlInj(_, _, i) => write!(f, "ι{i}"),
            KlSum(a) => write!(f, "+_{a}"),
            KlEll(a) => write!(f, "ℓ_{a}"),
            KlInterchange(a) => write!(f, "c_{a}"),
            KlLift(t) => write!(f, "F({t})"),
            KlCompose(ts) => list(f, ts, " ∘; "),
            KlPair(a, b) => write!(f, "⟨{a}, {b}⟩"),
            KlProduct(a, b) => write!(f, "({a} × {b})"),
            DOf(t) => write!(f, "D[{t}]"),
            DViaDcirc(t) => write!(f, "D°[{t}]"),
            ROf(t) => write!(f, "R[{t}]"),
            RViaDagger(t) => write!(f, "D[{t}]†"),
            RViaCupCap(t) => write!(f, "R∪∩[{t}]"),
            CtxId(x, a) => write!(f, "(e_{x} ⊗ 1_{a})"),
            CtxLift(x, t) => write!(f, "(e_{x} ⊗ {t})"),
            CtxCompose(a, b) => write!(f, "({a} ;ₓ {b})"),
            CtxSubst(h, t) => write!(f, "{h}*({t})"),
            CtxTensor(a, b) => write!(f, "({a} ⊗ₓ {b})"),
            DaggerOf(t) => write!(f, "({t})†"),
            EOf(t) => write!(f, "E({t})"),
            EInvOf(t) => write!(f, "E⁻¹({t})"),
        }
    }
}
