//! The equations, as data.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::term::{Gen, Sort, Term, Ty};
use crate::algebra::Semiring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Modality,
    Bialgebra,
    Differential,
    Reverse,
    Compact,
    Seely,
    CokleisliCd,
    CokleisliRd,
    Fibration,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 10] = [
        "modality",
        "bialgebra",
        "differential",
        "reverse",
        "compact",
        "seely",
        "cokleisli_cd",
        "cokleisli_rd",
        "fibration",
        "all",
    ];

    pub fn name(self) -> &'static str {
        Suite::NAMES[self as usize]
    }

    pub fn covers(self, s: Suite) -> bool {
        self == Suite::All || self == s
    }

    /// Suites evaluated in the coKleisli category or its fibration.
    pub fn is_cokleisli(self) -> bool {
        matches!(self, Suite::CokleisliCd | Suite::CokleisliRd | Suite::Fibration)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        const ALL: [Suite; 10] = [
            Suite::Modality,
            Suite::Bialgebra,
            Suite::Differential,
            Suite::Reverse,
            Suite::Compact,
            Suite::Seely,
            Suite::CokleisliCd,
            Suite::CokleisliRd,
            Suite::Fibration,
            Suite::All,
        ];
        ALL.into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", ")))
    }
}

/// One displayed equation. Type variables range over the model's alphabets
/// and term variables over sampled morphisms of the given sorts.
#[derive(Clone, Debug)]
pub struct LawSpec {
    pub id: &'static str,
    pub suite: Suite,
    pub name: &'static str,
    pub vars: Vec<(&'static str, Sort)>,
    pub lhs: Term,
    pub rhs: Term,
    /// Semirings the equation is claimed for; `None` means all.
    pub only: Option<&'static [Semiring]>,
    /// Largest alphabet on bag models; the nested reverse derivatives grow
    /// too fast beyond it.
    pub bag_alphabet_max: Option<usize>,
}

impl fmt::Display for LawSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {} = {}", self.id, self.name, self.lhs, self.rhs)
    }
}

fn a() -> Ty {
    Ty::Var("A")
}
fn b() -> Ty {
    Ty::Var("B")
}
fn c() -> Ty {
    Ty::Var("C")
}
fn x() -> Ty {
    Ty::Var("X")
}
fn z() -> Ty {
    Ty::Var("Z")
}
fn bg(t: &Ty) -> Ty {
    Ty::bang(t)
}
fn sum(s: &Ty, t: &Ty) -> Ty {
    Ty::sum(s, t)
}

fn g(x: Gen) -> Term {
    Term::Gen(x)
}
fn id(t: &Ty) -> Term {
    g(Gen::Id(t.clone()))
}
fn var(n: &'static str) -> Term {
    Term::Var(n)
}
fn seq(v: Vec<Term>) -> Term {
    Term::Compose(v)
}
fn par(v: Vec<Term>) -> Term {
    Term::Tensor(v)
}
fn add(s: Term, t: Term) -> Term {
    Term::Add(Box::new(s), Box::new(t))
}
fn star(t: Term) -> Term {
    Term::Star(Box::new(t))
}
fn bang(t: Term) -> Term {
    Term::BangOf(Box::new(t))
}

fn kseq(v: Vec<Term>) -> Term {
    Term::KlCompose(v)
}
fn kadd(s: Term, t: Term) -> Term {
    Term::KlAdd(Box::new(s), Box::new(t))
}
fn pair(s: Term, t: Term) -> Term {
    Term::KlPair(Box::new(s), Box::new(t))
}
fn prod(s: Term, t: Term) -> Term {
    Term::KlProduct(Box::new(s), Box::new(t))
}
fn dd(t: Term) -> Term {
    Term::DOf(Box::new(t))
}
fn rr(t: Term) -> Term {
    Term::ROf(Box::new(t))
}
fn kid(t: &Ty) -> Term {
    Term::KlId(t.clone())
}
fn kproj(s: &Ty, t: &Ty, i: u8) -> Term {
    Term::KlProj(s.clone(), t.clone(), i)
}
fn kinj(s: &Ty, t: &Ty, i: u8) -> Term {
    Term::KlInj(s.clone(), t.clone(), i)
}
fn dagger(t: Term) -> Term {
    Term::DaggerOf(Box::new(t))
}

fn plain(d: Ty, c: Ty) -> Sort {
    Sort::Plain { dom: d, cod: c }
}
fn klm(d: Ty, c: Ty) -> Sort {
    Sort::Kl { dom: d, cod: c }
}
fn ctxm(x: Ty, d: Ty, c: Ty) -> Sort {
    Sort::Ctx { ctx: x, dom: d, cod: c }
}

fn law(id: &'static str, suite: Suite, name: &'static str, lhs: Term, rhs: Term) -> LawSpec {
    LawSpec { id, suite, name, vars: Vec::new(), lhs, rhs, only: None, bag_alphabet_max: None }
}

impl LawSpec {
    fn with(mut self, v: &'static str, s: Sort) -> Self {
        self.vars.push((v, s));
        self
    }

    fn only(mut self, srs: &'static [Semiring]) -> Self {
        self.only = Some(srs);
        self
    }

    fn bag_alphabet_max(mut self, n: usize) -> Self {
        self.bag_alphabet_max = Some(n);
        self
    }
}

/// Every law, sorted by id.
pub fn catalog() -> Vec<LawSpec> {
    let mut v = Vec::new();
    v.extend(modality());
    v.extend(bialgebra());
    v.extend(seely());
    v.extend(differential());
    v.extend(reverse());
    v.extend(compact());
    v.extend(cokleisli_cd());
    v.extend(cokleisli_rd());
    v.extend(fibration());
    v.sort_by(|p, q| p.id.cmp(q.id));
    v
}

pub fn find(id: &str) -> Option<LawSpec> {
    catalog().into_iter().find(|l| l.id == id)
}

fn modality() -> Vec<LawSpec> {
    use Gen::*;
    let s = Suite::Modality;
    let (a, b, ba) = (a(), b(), bg(&a()));
    let f = || var("f");
    let fab = plain(a.clone(), b.clone());
    vec![
        law("comonad.counit_left", s, "δ then ε on !!A", seq(vec![g(Delta(a.clone())), g(Eps(ba.clone()))]), id(&ba)),
        law("comonad.counit_right", s, "δ then !ε", seq(vec![g(Delta(a.clone())), bang(g(Eps(a.clone())))]), id(&ba)),
        law(
            "comonad.coassoc",
            s,
            "coassociativity of δ",
            seq(vec![g(Delta(a.clone())), g(Delta(ba.clone()))]),
            seq(vec![g(Delta(a.clone())), bang(g(Delta(a.clone())))]),
        ),
        law(
            "comonad.delta_natural",
            s,
            "naturality of δ",
            seq(vec![bang(f()), g(Delta(b.clone()))]),
            seq(vec![g(Delta(a.clone())), bang(bang(f()))]),
        )
        .with("f", fab.clone()),
        law(
            "comonad.eps_natural",
            s,
            "naturality of ε",
            seq(vec![bang(f()), g(Eps(b.clone()))]),
            seq(vec![g(Eps(a.clone())), f()]),
        )
        .with("f", fab.clone()),
        law(
            "comonoid.coassoc",
            s,
            "coassociativity of Δ",
            seq(vec![g(Comult(a.clone())), par(vec![g(Comult(a.clone())), id(&ba)])]),
            seq(vec![g(Comult(a.clone())), par(vec![id(&ba), g(Comult(a.clone()))])]),
        ),
        law(
            "comonoid.counit",
            s,
            "counit of Δ",
            seq(vec![g(Comult(a.clone())), par(vec![g(Counit(a.clone())), id(&ba)])]),
            id(&ba),
        ),
        law(
            "comonoid.cocomm",
            s,
            "cocommutativity of Δ",
            seq(vec![g(Comult(a.clone())), g(Sym(ba.clone(), ba.clone()))]),
            g(Comult(a.clone())),
        ),
        law(
            "comonoid.comult_natural",
            s,
            "naturality of Δ",
            seq(vec![bang(f()), g(Comult(b.clone()))]),
            seq(vec![g(Comult(a.clone())), par(vec![bang(f()), bang(f())])]),
        )
        .with("f", fab.clone()),
        law(
            "comonoid.counit_natural",
            s,
            "naturality of e",
            seq(vec![bang(f()), g(Counit(b.clone()))]),
            g(Counit(a.clone())),
        )
        .with("f", fab),
        law(
            "coalgebra.comult",
            s,
            "δ is a comonoid morphism: Δ",
            seq(vec![g(Delta(a.clone())), g(Comult(ba.clone()))]),
            seq(vec![g(Comult(a.clone())), par(vec![g(Delta(a.clone())), g(Delta(a.clone()))])]),
        ),
        law(
            "coalgebra.counit",
            s,
            "δ is a comonoid morphism: e",
            seq(vec![g(Delta(a.clone())), g(Counit(ba.clone()))]),
            g(Counit(a.clone())),
        ),
        law(
            "coderiving",
            s,
            "coderiving transformation",
            g(Dcirc(a.clone())),
            seq(vec![g(Comult(a.clone())), par(vec![id(&ba), g(Eps(a.clone()))])]),
        ),
    ]
}

fn bialgebra() -> Vec<LawSpec> {
    use Gen::*;
    let s = Suite::Bialgebra;
    let (a, b, ba) = (a(), b(), bg(&a()));
    let f = || var("f");
    let fab = plain(a.clone(), b.clone());
    let nab = || g(Nabla(a.clone()));
    vec![
        law(
            "bimonoid",
            s,
            "∇ and Δ form a bimonoid",
            seq(vec![nab(), g(Comult(a.clone()))]),
            seq(vec![
                par(vec![g(Comult(a.clone())), g(Comult(a.clone()))]),
                par(vec![id(&ba), g(Sym(ba.clone(), ba.clone())), id(&ba)]),
                par(vec![nab(), nab()]),
            ]),
        ),
        law("bimonoid.counit", s, "∇ then e", seq(vec![nab(), g(Counit(a.clone()))]), par(vec![g(Counit(a.clone())), g(Counit(a.clone()))])),
        law("bimonoid.unit", s, "u then Δ", seq(vec![g(Unit(a.clone())), g(Comult(a.clone()))]), par(vec![g(Unit(a.clone())), g(Unit(a.clone()))])),
        law("bimonoid.scalar", s, "u then e", seq(vec![g(Unit(a.clone())), g(Counit(a.clone()))]), id(&Ty::unit())),
        law(
            "monoid.assoc",
            s,
            "associativity of ∇",
            seq(vec![par(vec![nab(), id(&ba)]), nab()]),
            seq(vec![par(vec![id(&ba), nab()]), nab()]),
        ),
        law("monoid.unit", s, "unit of ∇", seq(vec![par(vec![g(Unit(a.clone())), id(&ba)]), nab()]), id(&ba)),
        law("monoid.comm", s, "commutativity of ∇", seq(vec![g(Sym(ba.clone(), ba.clone())), nab()]), nab()),
        law(
            "monoid.nabla_natural",
            s,
            "naturality of ∇",
            seq(vec![par(vec![bang(f()), bang(f())]), g(Nabla(b.clone()))]),
            seq(vec![nab(), bang(f())]),
        )
        .with("f", fab.clone()),
        law("monoid.unit_natural", s, "naturality of u", seq(vec![g(Unit(a.clone())), bang(f())]), g(Unit(b.clone()))).with("f", fab),
    ]
}

fn seely() -> Vec<LawSpec> {
    use Gen::*;
    let s = Suite::Seely;
    let (a, b, c, ab) = (a(), b(), c(), sum(&a(), &b()));
    let fg = add(
        seq(vec![g(Proj(a.clone(), c.clone(), 0)), var("f"), g(Inj(b.clone(), Ty::Var("D"), 0))]),
        seq(vec![g(Proj(a.clone(), c.clone(), 1)), var("g"), g(Inj(b.clone(), Ty::Var("D"), 1))]),
    );
    vec![
        law("seely_iso", s, "χ then χ⁻¹", seq(vec![g(Chi(a.clone(), b.clone())), g(ChiInv(a.clone(), b.clone()))]), id(&bg(&ab))),
        law(
            "seely_iso.inverse",
            s,
            "χ⁻¹ then χ",
            seq(vec![g(ChiInv(a.clone(), b.clone())), g(Chi(a.clone(), b.clone()))]),
            id(&Ty::tensor(&bg(&a), &bg(&b))),
        ),
        law("seely_iso.top", s, "e on the zero object", seq(vec![g(Counit(z())), g(Unit(z()))]), id(&bg(&z()))),
        law(
            "seely.natural",
            s,
            "naturality of χ",
            seq(vec![bang(fg), g(Chi(b.clone(), Ty::Var("D")))]),
            seq(vec![g(Chi(a.clone(), c.clone())), par(vec![bang(var("f")), bang(var("g"))])]),
        )
        .with("f", plain(a.clone(), b.clone()))
        .with("g", plain(c.clone(), Ty::Var("D"))),
    ]
}

fn differential() -> Vec<LawSpec> {
    use Gen::*;
    let s = Suite::Differential;
    let (a, b, ba) = (a(), b(), bg(&a()));
    let d = || g(D(a.clone()));
    vec![
        law(
            "d.N",
            s,
            "naturality of d",
            seq(vec![par(vec![bang(var("f")), var("f")]), g(D(b.clone()))]),
            seq(vec![d(), bang(var("f"))]),
        )
        .with("f", plain(a.clone(), b.clone())),
        law("d.1", s, "constant rule", seq(vec![d(), g(Counit(a.clone()))]), g(Zero(Ty::tensor(&ba, &a), Ty::unit()))),
        law(
            "d.2",
            s,
            "Leibniz rule",
            seq(vec![d(), g(Comult(a.clone()))]),
            seq(vec![
                par(vec![g(Comult(a.clone())), id(&a)]),
                add(
                    par(vec![id(&ba), d()]),
                    seq(vec![par(vec![id(&ba), g(Sym(ba.clone(), a.clone()))]), par(vec![d(), id(&ba)])]),
                ),
            ]),
        ),
        law("d.3", s, "linear rule", seq(vec![d(), g(Eps(a.clone()))]), par(vec![g(Counit(a.clone())), id(&a)])),
        law(
            "d.4",
            s,
            "chain rule",
            seq(vec![d(), g(Delta(a.clone()))]),
            seq(vec![par(vec![g(Comult(a.clone())), id(&a)]), par(vec![g(Delta(a.clone())), d()]), g(D(ba.clone()))]),
        ),
        law(
            "d.5",
            s,
            "interchange rule",
            seq(vec![par(vec![d(), id(&a)]), d()]),
            seq(vec![par(vec![id(&ba), g(Sym(a.clone(), a.clone()))]), par(vec![d(), id(&a)]), d()]),
        ),
        law("codereliction.from_d", s, "η from d", g(Eta(a.clone())), seq(vec![par(vec![g(Unit(a.clone())), id(&a)]), d()])),
        law("codereliction.to_d", s, "d from η", d(), seq(vec![par(vec![id(&ba), g(Eta(a.clone()))]), g(Nabla(a.clone()))])),
    ]
}

fn reverse() -> Vec<LawSpec> {
    use Gen::*;
    let s = Suite::Reverse;
    let (a, b, ba, bb) = (a(), b(), bg(&a()), bg(&b()));
    let bba = bg(&ba);
    let r = || g(R(a.clone()));
    vec![
        law(
            "r.N",
            s,
            "reverse naturality rule",
            seq(vec![par(vec![bang(var("f")), id(&bb)]), g(R(b.clone())), star(var("f"))]),
            seq(vec![par(vec![id(&ba), star(bang(var("f")))]), r()]),
        )
        .with("f", plain(a.clone(), b.clone())),
        law(
            "r.1",
            s,
            "reverse constant rule",
            seq(vec![par(vec![id(&ba), star(g(Counit(a.clone())))]), r()]),
            g(Zero(ba.clone(), a.clone())),
        ),
        law(
            "r.2",
            s,
            "reverse Leibniz rule",
            seq(vec![par(vec![id(&ba), star(g(Comult(a.clone())))]), r()]),
            seq(vec![
                par(vec![g(Comult(a.clone())), id(&ba), id(&ba)]),
                par(vec![id(&ba), g(Sym(ba.clone(), ba.clone())), id(&ba)]),
                add(par(vec![g(Cup(ba.clone())), id(&ba), id(&ba)]), par(vec![id(&ba), id(&ba), g(Cup(ba.clone()))])),
                r(),
            ]),
        ),
        law(
            "r.3",
            s,
            "reverse linear rule",
            seq(vec![par(vec![id(&ba), star(g(Eps(a.clone())))]), r()]),
            par(vec![g(Counit(a.clone())), id(&a)]),
        ),
        law(
            "r.4",
            s,
            "reverse chain rule",
            seq(vec![par(vec![id(&ba), star(g(Delta(a.clone())))]), r()]),
            seq(vec![
                par(vec![g(Comult(a.clone())), id(&bba)]),
                par(vec![id(&ba), g(Delta(a.clone())), id(&bba)]),
                par(vec![id(&ba), g(R(ba.clone()))]),
                r(),
            ]),
        ),
        law(
            "r.5",
            s,
            "reverse interchange rule",
            seq(vec![par(vec![id(&ba), g(Cap(ba.clone())), id(&ba)]), par(vec![r(), r()]), g(Sym(a.clone(), a.clone()))]),
            seq(vec![par(vec![id(&ba), g(Cap(ba.clone())), id(&ba)]), par(vec![r(), r()])]),
        ),
        law("r_from_d", s, "r built from d", Term::RFromD(a.clone(), Box::new(g(D(a.clone())))), r()),
        law("d_from_r", s, "d built from r", Term::DFromR(a.clone(), Box::new(r())), g(D(a.clone()))),
        law(
            "dr_roundtrip",
            s,
            "d to r and back",
            Term::DFromR(a.clone(), Box::new(Term::RFromD(a.clone(), Box::new(g(D(a.clone())))))),
            g(D(a.clone())),
        ),
        law(
            "rd_roundtrip",
            s,
            "r to d and back",
            Term::RFromD(a.clone(), Box::new(Term::DFromR(a.clone(), Box::new(r())))),
            r(),
        ),
        law("dstar_eq_dcirc", s, "d* is the coderiving transformation", star(g(D(a.clone()))), g(Dcirc(a.clone())))
            .only(&[Semiring::Boolean, Semiring::Gf2]),
    ]
}

fn compact() -> Vec<LawSpec> {
    use Gen::*;
    let s = Suite::Compact;
    let (a, b, c, ba) = (a(), b(), c(), bg(&a()));
    let f = || var("f");
    let snake = |t: &Ty| {
        (
            seq(vec![par(vec![id(t), g(Cap(t.clone()))]), par(vec![g(Cup(t.clone())), id(t)])]),
            seq(vec![par(vec![g(Cap(t.clone())), id(t)]), par(vec![id(t), g(Cup(t.clone()))])]),
        )
    };
    let (s1, s2) = snake(&ba);
    let (s3, s4) = snake(&a);
    vec![
        law("snake", s, "snake equation on !A", s1, id(&ba)),
        law("snake.mirror", s, "other snake equation on !A", s2, id(&ba)),
        law("snake.base", s, "snake equation on A", s3, id(&a)),
        law("snake.base_mirror", s, "other snake equation on A", s4, id(&a)),
        law("twist", s, "∪ is symmetric", seq(vec![g(Sym(ba.clone(), ba.clone())), g(Cup(ba.clone()))]), g(Cup(ba.clone()))),
        law("twist.cap", s, "∩ is symmetric", seq(vec![g(Cap(ba.clone())), g(Sym(ba.clone(), ba.clone()))]), g(Cap(ba.clone()))),
        law(
            "slide",
            s,
            "sliding along ∩",
            seq(vec![g(Cap(a.clone())), par(vec![id(&a), f()])]),
            seq(vec![g(Cap(b.clone())), par(vec![star(f()), id(&b)])]),
        )
        .with("f", plain(a.clone(), b.clone())),
        law(
            "slide.cup",
            s,
            "sliding along ∪",
            seq(vec![par(vec![id(&b), f()]), g(Cup(b.clone()))]),
            seq(vec![par(vec![star(f()), id(&a)]), g(Cup(a.clone()))]),
        )
        .with("f", plain(a.clone(), b.clone())),
        law(
            "star_def",
            s,
            "transpose through ∩ and ∪",
            star(f()),
            seq(vec![
                par(vec![g(Cap(a.clone())), id(&b)]),
                par(vec![id(&a), f(), id(&b)]),
                par(vec![id(&a), g(Cup(b.clone()))]),
            ]),
        )
        .with("f", plain(a.clone(), b.clone())),
        law("star_involution", s, "f** = f", star(star(f())), f()).with("f", plain(a.clone(), b.clone())),
        law(
            "star_contravariant",
            s,
            "(f;g)* = g*;f*",
            star(seq(vec![f(), var("g")])),
            seq(vec![star(var("g")), star(f())]),
        )
        .with("f", plain(a.clone(), b.clone()))
        .with("g", plain(b.clone(), c.clone())),
        law("star_identity", s, "1* = 1", star(id(&ba)), id(&ba)),
    ]
}

fn cokleisli_cd() -> Vec<LawSpec> {
    let s = Suite::CokleisliCd;
    let (a, b, c) = (a(), b(), c());
    let aa = sum(&a, &a);
    let f = || var("f");
    let fk = klm(a.clone(), b.clone());
    vec![
        law("kl.assoc", s, "associativity of coKleisli composition", kseq(vec![kseq(vec![f(), var("h")]), var("k")]), kseq(vec![f(), kseq(vec![var("h"), var("k")])]))
            .with("f", fk.clone())
            .with("h", klm(b.clone(), c.clone()))
            .with("k", klm(c.clone(), a.clone())),
        law("kl.unit_left", s, "ε is a left unit", kseq(vec![kid(&a), f()]), f()).with("f", fk.clone()),
        law("kl.unit_right", s, "ε is a right unit", kseq(vec![f(), kid(&b)]), f()).with("f", fk.clone()),
        law("CD.1", s, "additivity of differentiation", dd(kadd(f(), var("g"))), kadd(dd(f()), dd(var("g"))))
            .with("f", fk.clone())
            .with("g", fk.clone()),
        law("CD.1.zero", s, "D[0] = 0", dd(Term::KlZero(a.clone(), b.clone())), Term::KlZero(aa.clone(), b.clone())),
        law(
            "CD.2",
            s,
            "additivity of the derivative in its second variable",
            kseq(vec![prod(kid(&a), Term::KlSum(a.clone())), dd(f())]),
            kadd(kseq(vec![prod(kid(&a), kproj(&a, &a, 0)), dd(f())]), kseq(vec![prod(kid(&a), kproj(&a, &a, 1)), dd(f())])),
        )
        .with("f", fk.clone()),
        law("CD.2.zero", s, "ι0;D[f] = 0", kseq(vec![kinj(&a, &a, 0), dd(f())]), Term::KlZero(a.clone(), b.clone())).with("f", fk.clone()),
        law("CD.3", s, "D[1] = π1", dd(kid(&a)), kproj(&a, &a, 1)),
        law(
            "CD.3.proj0",
            s,
            "D[π0] = π1;π0",
            dd(kproj(&a, &b, 0)),
            kseq(vec![kproj(&sum(&a, &b), &sum(&a, &b), 1), kproj(&a, &b, 0)]),
        ),
        law(
            "CD.3.proj1",
            s,
            "D[π1] = π1;π1",
            dd(kproj(&a, &b, 1)),
            kseq(vec![kproj(&sum(&a, &b), &sum(&a, &b), 1), kproj(&a, &b, 1)]),
        ),
        law("CD.4", s, "coherence with pairings", dd(pair(f(), var("g"))), pair(dd(f()), dd(var("g"))))
            .with("f", fk.clone())
            .with("g", klm(a.clone(), c.clone())),
        law(
            "CD.5",
            s,
            "chain rule",
            dd(kseq(vec![f(), var("h")])),
            kseq(vec![pair(kseq(vec![kproj(&a, &a, 0), f()]), dd(f())), dd(var("h"))]),
        )
        .with("f", fk.clone())
        .with("h", klm(b.clone(), c.clone())),
        law("CD.6", s, "linearity of the derivative in its second variable", kseq(vec![Term::KlEll(a.clone()), dd(dd(f()))]), dd(f()))
            .with("f", fk.clone()),
        law(
            "CD.7",
            s,
            "symmetry of mixed partial derivatives",
            kseq(vec![Term::KlInterchange(a.clone()), dd(dd(f()))]),
            dd(dd(f())),
        )
        .with("f", fk.clone()),
        law("D_via_dcirc", s, "D through d°", dd(f()), Term::DViaDcirc(Box::new(f()))).with("f", fk),
    ]
}

fn cokleisli_rd() -> Vec<LawSpec> {
    let s = Suite::CokleisliRd;
    let (a, b, c) = (a(), b(), c());
    let (ab, aa) = (sum(&a, &b), sum(&a, &a));
    let f = || var("f");
    let fk = klm(a.clone(), b.clone());
    // D[f] read back from R: (ι0×1_A);R[R[f]];π1
    let d_from_r = |t: Term, dom: &Ty, cod: &Ty| {
        kseq(vec![prod(kinj(dom, cod, 0), kid(dom)), rr(rr(t)), kproj(dom, cod, 1)])
    };
    let inner = d_from_r(f(), &a, &b);
    let rd7 = |lead: Vec<Term>| {
        let mut v = lead;
        v.push(prod(kinj(&aa, &b, 0), kid(&aa)));
        v.push(rr(rr(inner.clone())));
        v.push(kproj(&aa, &b, 1));
        kseq(v)
    };
    vec![
        law("RD.1", s, "additivity of reverse differentiation", rr(kadd(f(), var("g"))), kadd(rr(f()), rr(var("g"))))
            .with("f", fk.clone())
            .with("g", fk.clone()),
        law("RD.1.zero", s, "R[0] = 0", rr(Term::KlZero(a.clone(), b.clone())), Term::KlZero(ab.clone(), a.clone())),
        law(
            "RD.2",
            s,
            "additivity of the reverse derivative in its second variable",
            kseq(vec![prod(kid(&a), Term::KlSum(b.clone())), rr(f())]),
            kadd(kseq(vec![prod(kid(&a), kproj(&b, &b, 0)), rr(f())]), kseq(vec![prod(kid(&a), kproj(&b, &b, 1)), rr(f())])),
        )
        .with("f", fk.clone()),
        law("RD.2.zero", s, "ι0;R[f] = 0", kseq(vec![kinj(&a, &b, 0), rr(f())]), Term::KlZero(a.clone(), a.clone())).with("f", fk.clone()),
        law("RD.3", s, "R[1] = π1", rr(kid(&a)), kproj(&a, &a, 1)),
        law("RD.3.proj0", s, "R[π0] = π1;ι0", rr(kproj(&a, &b, 0)), kseq(vec![kproj(&ab, &a, 1), kinj(&a, &b, 0)])),
        law("RD.3.proj1", s, "R[π1] = π1;ι1", rr(kproj(&a, &b, 1)), kseq(vec![kproj(&ab, &b, 1), kinj(&a, &b, 1)])),
        law(
            "RD.4",
            s,
            "coherence with pairings",
            rr(pair(f(), var("g"))),
            kadd(
                kseq(vec![prod(kid(&a), kproj(&b, &c, 0)), rr(f())]),
                kseq(vec![prod(kid(&a), kproj(&b, &c, 1)), rr(var("g"))]),
            ),
        )
        .with("f", fk.clone())
        .with("g", klm(a.clone(), c.clone())),
        law(
            "RD.5",
            s,
            "reverse chain rule",
            rr(kseq(vec![f(), var("h")])),
            kseq(vec![
                pair(kproj(&a, &c, 0), kseq(vec![pair(kseq(vec![kproj(&a, &c, 0), f()]), kproj(&a, &c, 1)), rr(var("h"))])),
                rr(f()),
            ]),
        )
        .with("f", fk.clone())
        .with("h", klm(b.clone(), c.clone())),
        law(
            "RD.6",
            s,
            "linearity of the reverse derivative in its second variable",
            kseq(vec![
                prod(kinj(&a, &b, 0), kinj(&a, &b, 1)),
                prod(kinj(&ab, &a, 0), kid(&ab)),
                rr(rr(rr(f()))),
                kproj(&ab, &a, 1),
            ]),
            rr(f()),
        )
        .with("f", fk.clone())
        .bag_alphabet_max(1),
        law("RD.7", s, "symmetry of mixed partial derivatives", rd7(vec![Term::KlInterchange(a.clone())]), rd7(Vec::new()))
            .with("f", fk.clone())
            .bag_alphabet_max(1),
        law("R_three_way", s, "R[f] = D[f]†", rr(f()), Term::RViaDagger(Box::new(f()))).with("f", fk.clone()),
        law("R_three_way.cupcap", s, "R[f] through ∩ and ∪", rr(f()), Term::RViaCupCap(Box::new(f()))).with("f", fk.clone()),
        law("crdc_to_cdc", s, "D from R", d_from_r(f(), &a, &b), dd(f())).with("f", fk),
    ]
}

fn fibration() -> Vec<LawSpec> {
    use Gen::*;
    let s = Suite::Fibration;
    let (a, b, c, x) = (a(), b(), c(), x());
    let gv = || var("g");
    let gs = ctxm(x.clone(), a.clone(), b.clone());
    vec![
        law("fibre.unit_left", s, "e⊗1 is a left unit", Term::CtxCompose(Box::new(Term::CtxId(x.clone(), a.clone())), Box::new(gv())), gv())
            .with("g", gs.clone()),
        law("fibre.unit_right", s, "e⊗1 is a right unit", Term::CtxCompose(Box::new(gv()), Box::new(Term::CtxId(x.clone(), b.clone()))), gv())
            .with("g", gs.clone()),
        law("E_roundtrip", s, "E⁻¹∘E = 1", Term::EInvOf(Box::new(Term::EOf(Box::new(gv())))), gv()).with("g", gs.clone()),
        law(
            "E_roundtrip.inverse",
            s,
            "E∘E⁻¹ = 1 on maps linear in context",
            Term::EOf(Box::new(Term::EInvOf(Box::new(Term::EOf(Box::new(gv())))))),
            Term::EOf(Box::new(gv())),
        )
        .with("g", gs.clone()),
        law("dagger_involution", s, "g†† = g", dagger(dagger(gv())), gv()).with("g", gs.clone()),
        law(
            "dagger_contravariant",
            s,
            "(g;h)† = h†;g†",
            dagger(Term::CtxCompose(Box::new(gv()), Box::new(var("h")))),
            Term::CtxCompose(Box::new(dagger(var("h"))), Box::new(dagger(gv()))),
        )
        .with("g", gs.clone())
        .with("h", ctxm(x.clone(), b.clone(), c.clone())),
        law("dagger_identity", s, "(e⊗1)† = e⊗1", dagger(Term::CtxId(x.clone(), a.clone())), Term::CtxId(x.clone(), a.clone())),
        law(
            "dagger_change_of_base",
            s,
            "substitution commutes with †",
            dagger(Term::CtxSubst(Box::new(var("k")), Box::new(gv()))),
            Term::CtxSubst(Box::new(var("k")), Box::new(dagger(gv()))),
        )
        .with("g", gs.clone())
        .with("k", klm(x.clone(), x.clone())),
        law(
            "dagger_tensor",
            s,
            "† is monoidal",
            dagger(Term::CtxTensor(Box::new(gv()), Box::new(var("h")))),
            Term::CtxTensor(Box::new(dagger(gv())), Box::new(dagger(var("h")))),
        )
        .with("g", gs.clone())
        .with("h", ctxm(x.clone(), b.clone(), a.clone())),
        law(
            "dagger_lift",
            s,
            "(e⊗f)† = e⊗f*",
            dagger(Term::CtxLift(x.clone(), Box::new(var("f")))),
            Term::CtxLift(x.clone(), Box::new(star(var("f")))),
        )
        .with("f", plain(a.clone(), b.clone())),
        law(
            "dagger_biproduct",
            s,
            "π0† = ι0",
            dagger(Term::CtxLift(x.clone(), Box::new(g(Proj(a.clone(), b.clone(), 0))))),
            Term::CtxLift(x.clone(), Box::new(g(Inj(a.clone(), b.clone(), 0)))),
        ),
        law(
            "dagger_biproduct.1",
            s,
            "π1† = ι1",
            dagger(Term::CtxLift(x.clone(), Box::new(g(Proj(a.clone(), b.clone(), 1))))),
            Term::CtxLift(x.clone(), Box::new(g(Inj(a.clone(), b.clone(), 1)))),
        ),
        law("cartesian_lift", s, "reindexing e⊗1 stays Cartesian", Term::CtxSubst(Box::new(var("k")), Box::new(Term::CtxId(x.clone(), a.clone()))), Term::CtxId(x.clone(), a.clone()))
            .with("k", klm(x.clone(), x)),
    ]
}
