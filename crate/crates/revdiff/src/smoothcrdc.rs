//! Smooth maps given by elementary-function expressions: symbolic forward
//! and reverse derivatives, double-precision evaluation, a finite-difference
//! oracle and gradient descent driven by R.
//!
//! Expressions are shared trees; derivatives reuse subtrees of the map they
//! differentiate, so nested R stays small. Folding is limited to rational
//! constants and to the zeros and ones the derivative rules introduce.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::crdc::{self, AxiomError, Cartesian, Differential, Equation};
use crate::polycrdc::{parse_syntax, Grammar, Poly, PolyError, PolyMap, Syntax};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Const(BigRational),
    /// Zero-based variable index.
    Var(usize),
    Add(Expr, Expr),
    Mul(Expr, Expr),
    Neg(Expr),
    Sin(Expr),
    Cos(Expr),
    Exp(Expr),
    Pow(Expr, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn constant(q: BigRational) -> Expr {
        Expr(Arc::new(Node::Const(q)))
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(BigRational::from_integer(n.into()))
    }

    pub fn var(i: usize) -> Expr {
        Expr(Arc::new(Node::Var(i)))
    }

    fn as_const(&self) -> Option<&BigRational> {
        match self.node() {
            Node::Const(q) => Some(q),
            _ => None,
        }
    }

    fn is_zero(&self) -> bool {
        self.as_const().is_some_and(Zero::is_zero)
    }

    fn is_one(&self) -> bool {
        self.as_const().is_some_and(One::is_one)
    }

    pub fn add(&self, b: &Expr) -> Expr {
        match (self.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::constant(x + y),
            _ if self.is_zero() => b.clone(),
            _ if b.is_zero() => self.clone(),
            _ => Expr(Arc::new(Node::Add(self.clone(), b.clone()))),
        }
    }

    pub fn mul(&self, b: &Expr) -> Expr {
        match (self.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::constant(x * y),
            _ if self.is_zero() || b.is_zero() => Expr::int(0),
            _ if self.is_one() => b.clone(),
            _ if b.is_one() => self.clone(),
            _ => Expr(Arc::new(Node::Mul(self.clone(), b.clone()))),
        }
    }

    pub fn neg(&self) -> Expr {
        match self.node() {
            Node::Const(q) => Expr::constant(-q),
            Node::Neg(a) => a.clone(),
            _ => Expr(Arc::new(Node::Neg(self.clone()))),
        }
    }

    pub fn sub(&self, b: &Expr) -> Expr {
        self.add(&b.neg())
    }

    pub fn sin(&self) -> Expr {
        match self.as_const() {
            Some(q) if q.is_zero() => Expr::int(0),
            _ => Expr(Arc::new(Node::Sin(self.clone()))),
        }
    }

    pub fn cos(&self) -> Expr {
        match self.as_const() {
            Some(q) if q.is_zero() => Expr::int(1),
            _ => Expr(Arc::new(Node::Cos(self.clone()))),
        }
    }

    pub fn exp(&self) -> Expr {
        match self.as_const() {
            Some(q) if q.is_zero() => Expr::int(1),
            _ => Expr(Arc::new(Node::Exp(self.clone()))),
        }
    }

    pub fn pow(&self, k: u32) -> Expr {
        match (self.as_const(), k) {
            (Some(q), _) => Expr::constant(num_traits::pow(q.clone(), k as usize)),
            (_, 0) => Expr::int(1),
            (_, 1) => self.clone(),
            _ => Expr(Arc::new(Node::Pow(self.clone(), k))),
        }
    }

    /// ∂/∂x_i by the usual rules.
    pub fn partial(&self, i: usize) -> Expr {
        self.partial_memo(i, &mut HashMap::new())
    }

    fn partial_memo(&self, i: usize, memo: &mut HashMap<usize, Expr>) -> Expr {
        if let Some(d) = memo.get(&self.key()) {
            return d.clone();
        }
        let d = match self.node() {
            Node::Const(_) => Expr::int(0),
            Node::Var(j) => Expr::int(i64::from(*j == i)),
            Node::Add(a, b) => a.partial_memo(i, memo).add(&b.partial_memo(i, memo)),
            Node::Mul(a, b) => a.partial_memo(i, memo).mul(b).add(&a.mul(&b.partial_memo(i, memo))),
            Node::Neg(a) => a.partial_memo(i, memo).neg(),
            Node::Sin(a) => a.cos().mul(&a.partial_memo(i, memo)),
            Node::Cos(a) => a.sin().neg().mul(&a.partial_memo(i, memo)),
            Node::Exp(a) => self.mul(&a.partial_memo(i, memo)),
            Node::Pow(a, k) => Expr::int(i64::from(*k)).mul(&a.pow(k - 1)).mul(&a.partial_memo(i, memo)),
        };
        memo.insert(self.key(), d.clone());
        d
    }

    /// Replaces variable i by `args[i]`.
    pub fn substitute(&self, args: &[Expr]) -> Expr {
        self.subst_memo(args, &mut HashMap::new())
    }

    fn subst_memo(&self, args: &[Expr], memo: &mut HashMap<usize, Expr>) -> Expr {
        if let Some(e) = memo.get(&self.key()) {
            return e.clone();
        }
        let e = match self.node() {
            Node::Const(_) => self.clone(),
            Node::Var(j) => args[*j].clone(),
            Node::Add(a, b) => a.subst_memo(args, memo).add(&b.subst_memo(args, memo)),
            Node::Mul(a, b) => a.subst_memo(args, memo).mul(&b.subst_memo(args, memo)),
            Node::Neg(a) => a.subst_memo(args, memo).neg(),
            Node::Sin(a) => a.subst_memo(args, memo).sin(),
            Node::Cos(a) => a.subst_memo(args, memo).cos(),
            Node::Exp(a) => a.subst_memo(args, memo).exp(),
            Node::Pow(a, k) => a.subst_memo(args, memo).pow(*k),
        };
        memo.insert(self.key(), e.clone());
        e
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.eval_memo(point, &mut HashMap::new())
    }

    fn eval_memo(&self, x: &[f64], memo: &mut HashMap<usize, f64>) -> f64 {
        if let Some(v) = memo.get(&self.key()) {
            return *v;
        }
        let v = match self.node() {
            Node::Const(q) => q.to_f64().expect("finite rational"),
            Node::Var(j) => x[*j],
            Node::Add(a, b) => a.eval_memo(x, memo) + b.eval_memo(x, memo),
            Node::Mul(a, b) => a.eval_memo(x, memo) * b.eval_memo(x, memo),
            Node::Neg(a) => -a.eval_memo(x, memo),
            Node::Sin(a) => a.eval_memo(x, memo).sin(),
            Node::Cos(a) => a.eval_memo(x, memo).cos(),
            Node::Exp(a) => a.eval_memo(x, memo).exp(),
            Node::Pow(a, k) => a.eval_memo(x, memo).powi(*k as i32),
        };
        memo.insert(self.key(), v);
        v
    }

    pub fn max_var(&self) -> Option<usize> {
        match self.node() {
            Node::Const(_) => None,
            Node::Var(i) => Some(*i),
            Node::Add(a, b) | Node::Mul(a, b) => a.max_var().max(b.max_var()),
            Node::Neg(a) | Node::Sin(a) | Node::Cos(a) | Node::Exp(a) | Node::Pow(a, _) => a.max_var(),
        }
    }

    /// The polynomial this expression denotes, if it uses no functions.
    pub fn to_poly(&self, arity: usize) -> Option<Poly> {
        Some(match self.node() {
            Node::Const(q) => Poly::constant(arity, q.clone()),
            Node::Var(i) => Poly::var(arity, *i),
            Node::Add(a, b) => a.to_poly(arity)?.add(&b.to_poly(arity)?),
            Node::Mul(a, b) => a.to_poly(arity)?.mul(&b.to_poly(arity)?),
            Node::Neg(a) => a.to_poly(arity)?.neg(),
            Node::Pow(a, k) => a.to_poly(arity)?.pow(*k),
            Node::Sin(_) | Node::Cos(_) | Node::Exp(_) => return None,
        })
    }

    pub fn from_poly(p: &Poly) -> Expr {
        p.terms().iter().fold(Expr::int(0), |acc, (e, c)| {
            let mono = e.iter().enumerate().fold(Expr::constant(c.clone()), |t, (i, &k)| t.mul(&Expr::var(i).pow(k)));
            acc.add(&mono)
        })
    }

    fn from_syntax(s: &Syntax) -> Expr {
        match s {
            Syntax::Num(q) => Expr::constant(q.clone()),
            Syntax::Var(i) => Expr::var(*i),
            Syntax::Add(a, b) => Expr::from_syntax(a).add(&Expr::from_syntax(b)),
            Syntax::Sub(a, b) => Expr::from_syntax(a).sub(&Expr::from_syntax(b)),
            Syntax::Mul(a, b) => Expr::from_syntax(a).mul(&Expr::from_syntax(b)),
            Syntax::Neg(a) => Expr::from_syntax(a).neg(),
            Syntax::Pow(a, k) => Expr::from_syntax(a).pow(*k),
            Syntax::Call(f, a) => {
                let a = Expr::from_syntax(a);
                match f.as_str() {
                    "sin" => a.sin(),
                    "cos" => a.cos(),
                    "exp" => a.exp(),
                    other => unreachable!("the parser only accepts known functions, got {other}"),
                }
            }
        }
    }

    fn prec(&self) -> u8 {
        match self.node() {
            Node::Add(..) => 1,
            Node::Neg(_) => 2,
            Node::Mul(..) => 3,
            Node::Const(q) if q.is_negative() || !q.is_integer() => 2,
            Node::Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.prec() < min;
        if paren {
            f.write_str("(")?;
        }
        match self.node() {
            Node::Const(q) => write!(f, "{q}")?,
            Node::Var(i) => write!(f, "x{}", i + 1)?,
            Node::Add(a, b) => {
                a.fmt_at(f, 1)?;
                match b.node() {
                    Node::Neg(c) => {
                        f.write_str(" - ")?;
                        c.fmt_at(f, 3)?;
                    }
                    _ => {
                        f.write_str(" + ")?;
                        b.fmt_at(f, 2)?;
                    }
                }
            }
            Node::Mul(a, b) => {
                a.fmt_at(f, 3)?;
                f.write_str("*")?;
                b.fmt_at(f, 4)?;
            }
            Node::Neg(a) => {
                f.write_str("-")?;
                a.fmt_at(f, 3)?;
            }
            Node::Sin(a) | Node::Cos(a) | Node::Exp(a) => {
                let name = match self.node() {
                    Node::Sin(_) => "sin",
                    Node::Cos(_) => "cos",
                    _ => "exp",
                };
                write!(f, "{name}(")?;
                a.fmt_at(f, 0)?;
                f.write_str(")")?;
            }
            Node::Pow(a, k) => {
                a.fmt_at(f, 5)?;
                write!(f, "^{k}")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SmoothError {
    Parse(PolyError),
    Arity { expected: usize, got: usize },
    /// A non-finite value; `step` is set during descent.
    NonFinite { step: Option<usize>, detail: String },
    BadRate(f64),
}

impl fmt::Display for SmoothError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoothError::Parse(e) => write!(f, "{e}"),
            SmoothError::Arity { expected, got } => write!(f, "arity mismatch: expected {expected} values, got {got}"),
            SmoothError::NonFinite { step: Some(s), detail } => write!(f, "diverged at step {s}: {detail}"),
            SmoothError::NonFinite { step: None, detail } => write!(f, "non-finite value: {detail}"),
            SmoothError::BadRate(lr) => write!(f, "learning rate must be nonnegative, got {lr}"),
        }
    }
}

impl std::error::Error for SmoothError {}

impl From<PolyError> for SmoothError {
    fn from(e: PolyError) -> Self {
        SmoothError::Parse(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExprMap {
    dom: usize,
    comps: Vec<Expr>,
}

impl ExprMap {
    pub fn new(dom: usize, comps: Vec<Expr>) -> Result<ExprMap, SmoothError> {
        if let Some(i) = comps.iter().filter_map(Expr::max_var).max() {
            if i >= dom {
                return Err(SmoothError::Arity { expected: dom, got: i + 1 });
            }
        }
        Ok(ExprMap { dom, comps })
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    pub fn eval(&self, point: &[f64]) -> Result<Vec<f64>, SmoothError> {
        if point.len() != self.dom {
            return Err(SmoothError::Arity { expected: self.dom, got: point.len() });
        }
        let mut memo = HashMap::new();
        let out: Vec<f64> = self.comps.iter().map(|e| e.eval_memo(point, &mut memo)).collect();
        if let Some(v) = out.iter().find(|v| !v.is_finite()) {
            return Err(SmoothError::NonFinite { step: None, detail: format!("{v} at {point:?}") });
        }
        Ok(out)
    }

    pub fn to_poly(&self) -> Option<PolyMap> {
        let comps = self.comps.iter().map(|e| e.to_poly(self.dom)).collect::<Option<Vec<_>>>()?;
        PolyMap::new(self.dom, comps).ok()
    }

    pub fn from_poly(f: &PolyMap) -> ExprMap {
        ExprMap { dom: f.dom(), comps: f.components().iter().map(Expr::from_poly).collect() }
    }
}

impl fmt::Display for ExprMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.len() == 1 {
            return write!(f, "{}", self.comps[0]);
        }
        let parts: Vec<String> = self.comps.iter().map(Expr::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Parses an expression map; the arity is the largest variable index.
pub fn parse_expr(text: &str) -> Result<ExprMap, SmoothError> {
    let comps = parse_syntax(text, Grammar::Expr, None)?;
    let n = comps.iter().filter_map(Syntax::max_var).max().map_or(0, |i| i + 1);
    Ok(ExprMap { dom: n, comps: comps.iter().map(Expr::from_syntax).collect() })
}

/// Parses an expression map in exactly `arity` variables.
pub fn parse_expr_in(text: &str, arity: usize) -> Result<ExprMap, SmoothError> {
    let comps = parse_syntax(text, Grammar::Expr, Some(arity))?;
    Ok(ExprMap { dom: arity, comps: comps.iter().map(Expr::from_syntax).collect() })
}

/// `∂f/∂x_i` of a scalar expression.
pub fn partial(e: &Expr, i: usize) -> Expr {
    e.partial(i)
}

/// `D[f](x, v) = Σ_j ∂f/∂x_j · v_j`, variables x1..xn then v1..vn.
pub fn d_expr(f: &ExprMap) -> ExprMap {
    let n = f.dom;
    let comps = f
        .comps
        .iter()
        .map(|e| (0..n).fold(Expr::int(0), |acc, j| acc.add(&e.partial(j).mul(&Expr::var(n + j)))))
        .collect();
    ExprMap { dom: 2 * n, comps }
}

/// `R[f](x, t)_j = Σ_i ∂f_i/∂x_j · t_i`, variables x1..xn then t1..tm.
pub fn r_expr(f: &ExprMap) -> ExprMap {
    let (n, m) = (f.dom, f.comps.len());
    let comps = (0..n)
        .map(|j| (0..m).fold(Expr::int(0), |acc, i| acc.add(&f.comps[i].partial(j).mul(&Expr::var(n + i)))))
        .collect();
    ExprMap { dom: n + m, comps }
}

impl Cartesian for ExprMap {
    fn dom(&self) -> usize {
        self.dom
    }

    fn cod(&self) -> usize {
        self.comps.len()
    }

    fn identity(n: usize) -> Self {
        ExprMap::select(n, 0, n)
    }

    fn zero(n: usize, m: usize) -> Self {
        ExprMap { dom: n, comps: vec![Expr::int(0); m] }
    }

    fn select(n: usize, start: usize, len: usize) -> Self {
        assert!(start + len <= n, "selection out of range");
        ExprMap { dom: n, comps: (start..start + len).map(Expr::var).collect() }
    }

    fn pair(&self, g: &Self) -> Self {
        assert_eq!(self.dom, g.dom, "pairing needs a common domain");
        ExprMap { dom: self.dom, comps: self.comps.iter().chain(&g.comps).cloned().collect() }
    }

    fn then(&self, g: &Self) -> Self {
        assert_eq!(self.comps.len(), g.dom, "composite arity mismatch");
        let mut memo = HashMap::new();
        ExprMap { dom: self.dom, comps: g.comps.iter().map(|e| e.subst_memo(&self.comps, &mut memo)).collect() }
    }

    fn plus(&self, g: &Self) -> Self {
        assert_eq!((self.dom, self.comps.len()), (g.dom, g.comps.len()), "sum of non-parallel maps");
        ExprMap { dom: self.dom, comps: self.comps.iter().zip(&g.comps).map(|(a, b)| a.add(b)).collect() }
    }
}

impl Differential for ExprMap {
    fn deriv(&self) -> Self {
        d_expr(self)
    }

    fn rderiv(&self) -> Self {
        r_expr(self)
    }
}

/// Largest relative disagreement `|l - r| / max(|l|, |r|, 1)` over the
/// components of two maps at a point.
pub fn relative_gap(l: &[f64], r: &[f64]) -> f64 {
    l.iter().zip(r).map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0)).fold(0.0, f64::max)
}

/// Numeric check of one axiom instance at the given points: the largest
/// relative gap over every equation and point.
pub fn axiom_gap(eqs: &[Equation<ExprMap>], points: &[Vec<f64>]) -> Result<f64, SmoothError> {
    let mut worst = 0.0f64;
    for e in eqs {
        for p in points {
            let x = &p[..e.lhs.dom()];
            worst = worst.max(relative_gap(&e.lhs.eval(x)?, &e.rhs.eval(x)?));
        }
    }
    Ok(worst)
}

pub fn rd_axiom(k: usize, f: &ExprMap, g: Option<&ExprMap>) -> Result<Vec<Equation<ExprMap>>, AxiomError> {
    crdc::rd_axiom(k, f, g)
}

/// Compares `R[f](x, 1)` with central differences, `h = 1e-6`; returns the
/// largest relative error over the coordinates, against `max(|grad_i|, 1)`.
pub fn fd_gradient_check(f: &ExprMap, point: &[f64]) -> Result<f64, SmoothError> {
    if f.cod() != 1 {
        return Err(SmoothError::Arity { expected: 1, got: f.cod() });
    }
    const H: f64 = 1e-6;
    let grad = r_expr(f).eval(&point.iter().copied().chain([1.0]).collect::<Vec<_>>())?;
    let mut worst = 0.0f64;
    for (i, g) in grad.iter().enumerate() {
        let mut up = point.to_vec();
        let mut down = point.to_vec();
        up[i] += H;
        down[i] -= H;
        let fd = (f.eval(&up)?[0] - f.eval(&down)?[0]) / (2.0 * H);
        worst = worst.max((fd - g).abs() / g.abs().max(1.0));
    }
    Ok(worst)
}

/// One recorded step of gradient descent.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub step: usize,
    pub x: Vec<f64>,
    pub loss: f64,
}

/// `x ← x − lr · R[loss](x, 1)`; step 0 is the initial point.
pub fn gradient_descent(loss: &ExprMap, init: &[f64], lr: f64, steps: usize) -> Result<Vec<Step>, SmoothError> {
    if loss.cod() != 1 {
        return Err(SmoothError::Arity { expected: 1, got: loss.cod() });
    }
    if init.len() != loss.dom() {
        return Err(SmoothError::Arity { expected: loss.dom(), got: init.len() });
    }
    if !lr.is_finite() || lr < 0.0 {
        return Err(SmoothError::BadRate(lr));
    }
    let grad = r_expr(loss);
    let diverged = |step: usize, e: SmoothError| match e {
        SmoothError::NonFinite { detail, .. } => SmoothError::NonFinite { step: Some(step), detail },
        e => e,
    };
    let mut x = init.to_vec();
    let mut out = vec![Step { step: 0, x: x.clone(), loss: loss.eval(&x).map_err(|e| diverged(0, e))?[0] }];
    for step in 1..=steps {
        let g = grad.eval(&x.iter().copied().chain([1.0]).collect::<Vec<_>>()).map_err(|e| diverged(step, e))?;
        for (xi, gi) in x.iter_mut().zip(&g) {
            *xi -= lr * gi;
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(SmoothError::NonFinite { step: Some(step), detail: format!("point {x:?}") });
        }
        let l = loss.eval(&x).map_err(|e| diverged(step, e))?[0];
        out.push(Step { step, x: x.clone(), loss: l });
    }
    Ok(out)
}

/// One line per step: `step<TAB>x1 x2 …<TAB>loss`, shortest round-trip floats.
pub fn trajectory_text(steps: &[Step]) -> String {
    steps
        .iter()
        .map(|s| {
            let xs: Vec<String> = s.x.iter().map(|v| format!("{v:?}")).collect();
            format!("{}\t{}\t{:?}\n", s.step, xs.join(" "), s.loss)
        })
        .collect()
}

/// A random scalar expression of depth at most `depth` in `n` variables.
pub fn random_expr<R: Rng>(rng: &mut R, n: usize, depth: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if n > 0 && rng.gen_bool(0.7) {
            Expr::var(rng.gen_range(0..n))
        } else {
            Expr::constant(BigRational::new(BigInt::from(rng.gen_range(-4i64..=4)), BigInt::from(2)))
        };
    }
    let sub = |rng: &mut R| random_expr(rng, n, depth - 1);
    match rng.gen_range(0..8) {
        0 | 1 => sub(rng).add(&sub(rng)),
        2 | 3 => sub(rng).mul(&sub(rng)),
        4 => sub(rng).neg(),
        5 => sub(rng).sin(),
        6 => sub(rng).cos(),
        _ => {
            // keep exp arguments small so nothing overflows on [-2, 2]^n
            if rng.gen_bool(0.5) {
                sub(rng).sin().exp()
            } else {
                sub(rng).pow(rng.gen_range(2..=3))
            }
        }
    }
}

pub fn random_expr_map<R: Rng>(rng: &mut R, dom: usize, cod: usize, depth: usize) -> ExprMap {
    ExprMap { dom, comps: (0..cod).map(|_| random_expr(rng, dom, depth)).collect() }
}

/// A point in `[-2, 2]^n`.
pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-2.0..=2.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intro() -> ExprMap {
        parse_expr("x1^2*x2 + sin(x2)").unwrap()
    }

    #[test]
    fn parse_examples() {
        let f = intro();
        assert_eq!((f.dom(), f.cod()), (2, 1));
        assert_eq!(f.to_string(), "x1^2*x2 + sin(x2)");
        assert!(matches!(parse_expr("sin"), Err(SmoothError::Parse(PolyError::Syntax { .. }))));
        assert_eq!(parse_expr("exp(0)").unwrap().components()[0], Expr::int(1));
        assert!(parse_poly_rejects_functions());
    }

    fn parse_poly_rejects_functions() -> bool {
        crate::polycrdc::parse_poly("sin(x1)").is_err()
    }

    #[test]
    fn partials_of_the_intro_map() {
        let f = intro();
        let e = &f.components()[0];
        assert_eq!(partial(e, 0).to_string(), "2*x1*x2");
        assert_eq!(partial(e, 1).to_string(), "x1^2 + cos(x2)");
        assert_eq!(partial(&Expr::int(4), 0), Expr::int(0));
    }

    #[test]
    fn derivatives_of_the_intro_map() {
        let f = intro();
        assert_eq!(d_expr(&f).to_string(), "2*x1*x2*x3 + (x1^2 + cos(x2))*x4");
        assert_eq!(r_expr(&f).to_string(), "(2*x1*x2*x3, (x1^2 + cos(x2))*x3)");
        assert_eq!(r_expr(&ExprMap::identity(2)), ExprMap::proj1(2, 2));
        // against J^T t evaluated directly
        let (x1, x2, t) = (1.0f64, 0.5f64, 2.0);
        let r = r_expr(&f).eval(&[x1, x2, t]).unwrap();
        let want = [2.0 * x1 * x2 * t, (x1 * x1 + x2.cos()) * t];
        assert!(relative_gap(&r, &want) <= 1e-12);
    }

    #[test]
    fn evaluation() {
        assert_eq!(intro().eval(&[1.0, 0.0]).unwrap(), vec![0.0]);
        assert_eq!(parse_expr("7/2").unwrap().eval(&[]).unwrap(), vec![3.5]);
        let e = parse_expr("exp(x1)").unwrap().eval(&[1.0]).unwrap()[0];
        assert!((e - std::f64::consts::E).abs() <= 1e-12);
        assert!(matches!(intro().eval(&[1.0]), Err(SmoothError::Arity { expected: 2, got: 1 })));
    }

    #[test]
    fn finite_differences() {
        assert!(fd_gradient_check(&intro(), &[1.0, 0.5]).unwrap() <= 1e-5);
        assert!(fd_gradient_check(&parse_expr("3*x1 - 2*x2 + 1").unwrap(), &[0.3, -1.2]).unwrap() <= 1e-9);
        assert!(fd_gradient_check(&parse_expr("exp(x1)").unwrap(), &[0.0]).unwrap() <= 1e-5);
    }

    #[test]
    fn descent() {
        let loss = parse_expr("(x1 - 3)^2 + (x2 + 1)^2").unwrap();
        let t = gradient_descent(&loss, &[0.0, 0.0], 0.1, 500).unwrap();
        let end = &t.last().unwrap().x;
        assert!((end[0] - 3.0).abs() <= 1e-6 && (end[1] + 1.0).abs() <= 1e-6);
        // the error contracts by exactly 0.8 per step
        assert!((t[1].x[0] - 0.6).abs() < 1e-15 && (t[1].x[1] + 0.2).abs() < 1e-15);
        let still = gradient_descent(&loss, &[1.0, 1.0], 0.0, 5).unwrap();
        assert!(still.iter().all(|s| s.x == [1.0, 1.0]));
        let flat = gradient_descent(&parse_expr_in("4", 2).unwrap(), &[1.0, 2.0], 0.1, 5).unwrap();
        assert!(flat.iter().all(|s| s.x == [1.0, 2.0]));
        assert!(matches!(gradient_descent(&loss, &[0.0, 0.0], -1.0, 5), Err(SmoothError::BadRate(_))));
        let blowup = gradient_descent(&parse_expr("x1^4").unwrap(), &[10.0], 10.0, 50).unwrap_err();
        assert!(matches!(blowup, SmoothError::NonFinite { step: Some(_), .. }), "{blowup:?}");
    }

    #[test]
    fn polynomial_maps_agree_with_poly() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = crate::polycrdc::random_poly_map(&mut rng, 3, 2, 3, 5);
            let e = ExprMap::from_poly(&p);
            assert_eq!(r_expr(&e).to_poly().unwrap(), crate::polycrdc::r_poly(&p));
        }
    }
}
