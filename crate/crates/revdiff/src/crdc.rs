//! Cartesian left additive structure over tuples of coordinates, and the
//! differential and reverse differential axioms stated once for any model
//! of it.
//!
//! Objects are arities; `A × B` is concatenation. An axiom instance is a
//! list of equations, each a pair of parallel maps; models decide how to
//! compare them (symbolically for polynomials, numerically for
//! expressions).

use std::fmt;

/// A Cartesian left additive category whose objects are arities.
pub trait Cartesian: Clone {
    fn dom(&self) -> usize;
    fn cod(&self) -> usize;
    fn identity(n: usize) -> Self;
    fn zero(n: usize, m: usize) -> Self;
    /// Coordinates `start..start + len` of an `n`-tuple.
    fn select(n: usize, start: usize, len: usize) -> Self;
    /// `⟨f, g⟩`; panics unless the domains agree.
    fn pair(&self, g: &Self) -> Self;
    /// Diagrammatic composite `self;g`; panics on an arity mismatch.
    fn then(&self, g: &Self) -> Self;
    fn plus(&self, g: &Self) -> Self;

    /// `π0 : A × B → A`.
    fn proj0(a: usize, b: usize) -> Self {
        Self::select(a + b, 0, a)
    }

    /// `π1 : A × B → B`.
    fn proj1(a: usize, b: usize) -> Self {
        Self::select(a + b, a, b)
    }

    /// `ι0 = ⟨1, 0⟩ : A → A × B`.
    fn inj0(a: usize, b: usize) -> Self {
        Self::identity(a).pair(&Self::zero(a, b))
    }

    /// `ι1 = ⟨0, 1⟩ : B → A × B`.
    fn inj1(a: usize, b: usize) -> Self {
        Self::zero(b, a).pair(&Self::identity(b))
    }

    /// `f × g`.
    fn times(&self, g: &Self) -> Self {
        let (a, b) = (self.dom(), g.dom());
        Self::proj0(a, b).then(self).pair(&Self::proj1(a, b).then(g))
    }

    /// `+_A = π0 + π1 : A × A → A`.
    fn sum_map(a: usize) -> Self {
        Self::proj0(a, a).plus(&Self::proj1(a, a))
    }

    /// `ℓ_A = ι0 × ι1 : A × A → (A × A) × (A × A)`.
    fn lift(a: usize) -> Self {
        Self::inj0(a, a).times(&Self::inj1(a, a))
    }

    /// `c_A = ⟨π0 × π0, π1 × π1⟩`.
    fn interchange(a: usize) -> Self {
        let p0 = Self::proj0(a, a);
        let p1 = Self::proj1(a, a);
        p0.times(&p0).pair(&p1.times(&p1))
    }
}

/// Forward and reverse derivatives.
pub trait Differential: Cartesian {
    /// `D[f] : A × A → B`.
    fn deriv(&self) -> Self;
    /// `R[f] : A × B → A`.
    fn rderiv(&self) -> Self;
}

/// One equation of an axiom instance.
#[derive(Clone, Debug)]
pub struct Equation<M> {
    pub name: String,
    pub lhs: M,
    pub rhs: M,
}

fn eq<M>(name: &str, lhs: M, rhs: M) -> Equation<M> {
    Equation { name: name.to_string(), lhs, rhs }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomError {
    UnknownAxiom(String),
    MissingSecondMap(String),
    Arity(String),
}

impl fmt::Display for AxiomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomError::UnknownAxiom(a) => write!(f, "unknown axiom {a}; expected 1..7"),
            AxiomError::MissingSecondMap(a) => write!(f, "{a} needs a second map"),
            AxiomError::Arity(m) => write!(f, "arity mismatch: {m}"),
        }
    }
}

impl std::error::Error for AxiomError {}

/// What the second map of an axiom must look like, given the first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecondMap {
    None,
    /// Same domain and codomain.
    Parallel,
    /// Same domain, any codomain.
    SameDomain,
    /// Domain = codomain of the first.
    Composable,
}

/// The second map axiom k takes (same for the CD and RD families).
pub fn second_map(k: usize) -> SecondMap {
    match k {
        1 => SecondMap::Parallel,
        4 => SecondMap::SameDomain,
        5 => SecondMap::Composable,
        _ => SecondMap::None,
    }
}

fn second<'a, M: Cartesian>(label: &str, k: usize, f: &M, g: Option<&'a M>) -> Result<Option<&'a M>, AxiomError> {
    let need = second_map(k);
    if need == SecondMap::None {
        return Ok(None);
    }
    let g = g.ok_or_else(|| AxiomError::MissingSecondMap(label.to_string()))?;
    let ok = match need {
        SecondMap::Parallel => g.dom() == f.dom() && g.cod() == f.cod(),
        SecondMap::SameDomain => g.dom() == f.dom(),
        SecondMap::Composable => g.dom() == f.cod(),
        SecondMap::None => true,
    };
    if !ok {
        return Err(AxiomError::Arity(format!("{label}: f is {}→{}, g is {}→{}", f.dom(), f.cod(), g.dom(), g.cod())));
    }
    Ok(Some(g))
}

/// The equations of CD.k for f (and g where the axiom has one).
pub fn cd_axiom<M: Differential>(k: usize, f: &M, g: Option<&M>) -> Result<Vec<Equation<M>>, AxiomError> {
    let label = format!("CD.{k}");
    let g = second(&label, k, f, g)?;
    let (a, b) = (f.dom(), f.cod());
    let id_a = M::identity(a);
    Ok(match k {
        1 => {
            let g = g.expect("checked");
            vec![
                eq("CD.1", f.plus(g).deriv(), f.deriv().plus(&g.deriv())),
                eq("CD.1.zero", M::zero(a, b).deriv(), M::zero(2 * a, b)),
            ]
        }
        2 => {
            let df = f.deriv();
            vec![
                eq(
                    "CD.2",
                    id_a.times(&M::sum_map(a)).then(&df),
                    id_a.times(&M::proj0(a, a)).then(&df).plus(&id_a.times(&M::proj1(a, a)).then(&df)),
                ),
                eq("CD.2.zero", M::inj0(a, a).then(&df), M::zero(a, b)),
            ]
        }
        3 => {
            // projections out of A × B with A = dom f, B = cod f
            vec![
                eq("CD.3", id_a.deriv(), M::proj1(a, a)),
                eq("CD.3.proj0", M::proj0(a, b).deriv(), M::proj1(a + b, a + b).then(&M::proj0(a, b))),
                eq("CD.3.proj1", M::proj1(a, b).deriv(), M::proj1(a + b, a + b).then(&M::proj1(a, b))),
            ]
        }
        4 => {
            let g = g.expect("checked");
            vec![eq("CD.4", f.pair(g).deriv(), f.deriv().pair(&g.deriv()))]
        }
        5 => {
            let g = g.expect("checked");
            let rhs = M::proj0(a, a).then(f).pair(&f.deriv()).then(&g.deriv());
            vec![eq("CD.5", f.then(g).deriv(), rhs)]
        }
        6 => vec![eq("CD.6", M::lift(a).then(&f.deriv().deriv()), f.deriv())],
        7 => {
            let ddf = f.deriv().deriv();
            vec![eq("CD.7", M::interchange(a).then(&ddf), ddf)]
        }
        _ => return Err(AxiomError::UnknownAxiom(label)),
    })
}

/// The equations of RD.k for f (and g where the axiom has one).
pub fn rd_axiom<M: Differential>(k: usize, f: &M, g: Option<&M>) -> Result<Vec<Equation<M>>, AxiomError> {
    let label = format!("RD.{k}");
    let g = second(&label, k, f, g)?;
    let (a, b) = (f.dom(), f.cod());
    let id_a = M::identity(a);
    Ok(match k {
        1 => {
            let g = g.expect("checked");
            vec![
                eq("RD.1", f.plus(g).rderiv(), f.rderiv().plus(&g.rderiv())),
                eq("RD.1.zero", M::zero(a, b).rderiv(), M::zero(a + b, a)),
            ]
        }
        2 => {
            let rf = f.rderiv();
            vec![
                eq(
                    "RD.2",
                    id_a.times(&M::sum_map(b)).then(&rf),
                    id_a.times(&M::proj0(b, b)).then(&rf).plus(&id_a.times(&M::proj1(b, b)).then(&rf)),
                ),
                eq("RD.2.zero", M::inj0(a, b).then(&rf), M::zero(a, a)),
            ]
        }
        3 => vec![
            eq("RD.3", id_a.rderiv(), M::proj1(a, a)),
            eq("RD.3.proj0", M::proj0(a, b).rderiv(), M::proj1(a + b, a).then(&M::inj0(a, b))),
            eq("RD.3.proj1", M::proj1(a, b).rderiv(), M::proj1(a + b, b).then(&M::inj1(a, b))),
        ],
        4 => {
            let g = g.expect("checked");
            let c = g.cod();
            let rhs = id_a
                .times(&M::proj0(b, c))
                .then(&f.rderiv())
                .plus(&id_a.times(&M::proj1(b, c)).then(&g.rderiv()));
            vec![eq("RD.4", f.pair(g).rderiv(), rhs)]
        }
        5 => {
            let g = g.expect("checked");
            let c = g.cod();
            let inner = M::proj0(a, c).then(f).pair(&M::proj1(a, c)).then(&g.rderiv());
            let rhs = M::proj0(a, c).pair(&inner).then(&f.rderiv());
            vec![eq("RD.5", f.then(g).rderiv(), rhs)]
        }
        6 => {
            let ab = a + b;
            let lhs = M::inj0(a, b)
                .times(&M::inj1(a, b))
                .then(&M::inj0(ab, a).times(&M::identity(ab)))
                .then(&f.rderiv().rderiv().rderiv())
                .then(&M::proj1(ab, a));
            vec![eq("RD.6", lhs, f.rderiv())]
        }
        7 => {
            // h = (ι0×1);R[R[f]];π1 : A × A → B, which is D[f]
            let h = M::inj0(a, b).times(&id_a).then(&f.rderiv().rderiv()).then(&M::proj1(a, b));
            let aa = 2 * a;
            let tail = M::inj0(aa, b).times(&M::identity(aa)).then(&h.rderiv().rderiv()).then(&M::proj1(aa, b));
            vec![eq("RD.7", M::interchange(a).then(&tail), tail)]
        }
        _ => return Err(AxiomError::UnknownAxiom(label)),
    })
}

/// `(ι0 × 1);R[R[f]];π1 = D[f]`: the forward derivative a reverse one induces.
pub fn crdc_to_cdc<M: Differential>(f: &M) -> Equation<M> {
    let (a, b) = (f.dom(), f.cod());
    let lhs = M::inj0(a, b).times(&M::identity(a)).then(&f.rderiv().rderiv()).then(&M::proj1(a, b));
    eq("crdc_to_cdc", lhs, f.deriv())
}
