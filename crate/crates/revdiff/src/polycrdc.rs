//! Polynomial maps with exact rational coefficients: the Cartesian reverse
//! differential category of tuples of polynomials, with D the Jacobian
//! action and R its transpose.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::crdc::{self, AxiomError, Cartesian, Differential, Equation};

/// Exponent vector, one entry per variable.
pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    arity: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

impl Poly {
    pub fn zero(arity: usize) -> Poly {
        Poly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: BigRational) -> Poly {
        let mut p = Poly::zero(arity);
        p.add_term(vec![0; arity], c);
        p
    }

    /// The variable `x_{i+1}`.
    pub fn var(arity: usize, i: usize) -> Poly {
        assert!(i < arity, "variable {i} out of arity {arity}");
        let mut e = vec![0; arity];
        e[i] = 1;
        let mut p = Poly::zero(arity);
        p.add_term(e, BigRational::one());
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Exponents, BigRational)>) -> Poly {
        let mut p = Poly::zero(arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, q: &Poly) -> Poly {
        assert_eq!(self.arity, q.arity, "arity mismatch in addition");
        let mut p = self.clone();
        for (e, c) in &q.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Poly {
        Poly { arity: self.arity, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, q: &Poly) -> Poly {
        self.add(&q.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        Poly::from_terms(self.arity, self.terms.iter().map(|(e, c)| (e.clone(), c * k)))
    }

    pub fn mul(&self, q: &Poly) -> Poly {
        assert_eq!(self.arity, q.arity, "arity mismatch in product");
        let mut p = Poly::zero(self.arity);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &q.terms {
                p.add_term(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::constant(self.arity, BigRational::one()), |acc, _| acc.mul(self))
    }

    /// Formal partial derivative in variable i.
    pub fn partial(&self, i: usize) -> Poly {
        Poly::from_terms(
            self.arity,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (e2, c * BigRational::from_integer(BigInt::from(e[i])))
            }),
        )
    }

    /// Substitutes `args[i]` for variable i; the result has the arguments' arity.
    pub fn substitute(&self, args: &[Poly], arity: usize) -> Poly {
        assert_eq!(args.len(), self.arity, "one argument per variable");
        let mut powers: Vec<Vec<Poly>> = args.iter().map(|a| vec![Poly::constant(arity, BigRational::one()), a.clone()]).collect();
        let mut out = Poly::zero(arity);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(arity, c.clone());
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().expect("nonempty").mul(&args[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    t = t.mul(&powers[i][k]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.arity, "point length");
        self.terms.iter().fold(BigRational::zero(), |acc, (e, c)| {
            acc + e.iter().zip(point).fold(c.clone(), |t, (&k, x)| t * num_traits::pow(x.clone(), k as usize))
        })
    }

    /// Total degree of every term in the given variables is exactly one.
    pub fn is_linear_in(&self, vars: std::ops::Range<usize>) -> bool {
        self.terms.keys().all(|e| e[vars.clone()].iter().sum::<u32>() == 1)
    }

    /// Same polynomial in more variables, appended after the existing ones.
    pub fn widen(&self, arity: usize) -> Poly {
        assert!(arity >= self.arity);
        Poly::from_terms(
            arity,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = e.clone();
                e2.resize(arity, 0);
                (e2, c.clone())
            }),
        )
    }
}

fn fmt_monomial(e: &[u32]) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
        .collect::<Vec<_>>()
        .join("*")
}

/// Highest total degree first, then reverse lexicographic on exponents.
fn display_order(p: &Poly) -> Vec<(&Exponents, &BigRational)> {
    let mut t: Vec<_> = p.terms.iter().collect();
    t.sort_by(|(a, _), (b, _)| {
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        db.cmp(&da).then_with(|| b.cmp(a))
    });
    t
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in display_order(self).into_iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let mono = fmt_monomial(e);
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => f.write_str(&mono)?,
                (false, false) => write!(f, "{a}*{mono}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMap {
    dom: usize,
    comps: Vec<Poly>,
}

impl PolyMap {
    pub fn new(dom: usize, comps: Vec<Poly>) -> Result<PolyMap, PolyError> {
        if let Some(p) = comps.iter().find(|p| p.arity != dom) {
            return Err(PolyError::Arity(format!("component {p} has arity {}, expected {dom}", p.arity)));
        }
        Ok(PolyMap { dom, comps })
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    /// `self - g`, componentwise.
    pub fn difference(&self, g: &PolyMap) -> PolyMap {
        assert_eq!((self.dom, self.comps.len()), (g.dom, g.comps.len()), "parallel maps");
        PolyMap { dom: self.dom, comps: self.comps.iter().zip(&g.comps).map(|(p, q)| p.sub(q)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn eval(&self, point: &[BigRational]) -> Vec<BigRational> {
        self.comps.iter().map(|p| p.eval(point)).collect()
    }

    pub fn degree(&self) -> u32 {
        self.comps.iter().map(Poly::degree).max().unwrap_or(0)
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.len() == 1 {
            return write!(f, "{}", self.comps[0]);
        }
        let parts: Vec<String> = self.comps.iter().map(Poly::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `J[i][j] = ∂f_i/∂x_j`.
pub fn jacobian(f: &PolyMap) -> Vec<Vec<Poly>> {
    f.comps.iter().map(|p| (0..f.dom).map(|j| p.partial(j)).collect()).collect()
}

/// `D[f](x, v) = J(x) v`, in variables x1..xn, then v1..vn.
pub fn d_poly(f: &PolyMap) -> PolyMap {
    let n = f.dom;
    let comps = jacobian(f)
        .into_iter()
        .map(|row| {
            row.into_iter().enumerate().fold(Poly::zero(2 * n), |acc, (j, dj)| acc.add(&dj.widen(2 * n).mul(&Poly::var(2 * n, n + j))))
        })
        .collect();
    PolyMap { dom: 2 * n, comps }
}

/// `R[f](x, t) = J(x)ᵀ t`, in variables x1..xn, then t1..tm.
pub fn r_poly(f: &PolyMap) -> PolyMap {
    let (n, m) = (f.dom, f.comps.len());
    let j = jacobian(f);
    let comps = (0..n)
        .map(|c| (0..m).fold(Poly::zero(n + m), |acc, i| acc.add(&j[i][c].widen(n + m).mul(&Poly::var(n + m, n + i)))))
        .collect();
    PolyMap { dom: n + m, comps }
}

impl Cartesian for PolyMap {
    fn dom(&self) -> usize {
        self.dom
    }

    fn cod(&self) -> usize {
        self.comps.len()
    }

    fn identity(n: usize) -> Self {
        PolyMap::select(n, 0, n)
    }

    fn zero(n: usize, m: usize) -> Self {
        PolyMap { dom: n, comps: vec![Poly::zero(n); m] }
    }

    fn select(n: usize, start: usize, len: usize) -> Self {
        assert!(start + len <= n, "selection out of range");
        PolyMap { dom: n, comps: (start..start + len).map(|i| Poly::var(n, i)).collect() }
    }

    fn pair(&self, g: &Self) -> Self {
        assert_eq!(self.dom, g.dom, "pairing needs a common domain");
        PolyMap { dom: self.dom, comps: self.comps.iter().chain(&g.comps).cloned().collect() }
    }

    fn then(&self, g: &Self) -> Self {
        assert_eq!(self.comps.len(), g.dom, "composite arity mismatch");
        PolyMap { dom: self.dom, comps: g.comps.iter().map(|p| p.substitute(&self.comps, self.dom)).collect() }
    }

    fn plus(&self, g: &Self) -> Self {
        assert_eq!((self.dom, self.comps.len()), (g.dom, g.comps.len()), "sum of non-parallel maps");
        PolyMap { dom: self.dom, comps: self.comps.iter().zip(&g.comps).map(|(p, q)| p.add(q)).collect() }
    }
}

impl Differential for PolyMap {
    fn deriv(&self) -> Self {
        d_poly(self)
    }

    fn rderiv(&self) -> Self {
        r_poly(self)
    }
}

/// The outcome of a symbolic axiom check: each equation with lhs − rhs.
#[derive(Clone, Debug)]
pub struct AxiomCheck {
    pub axiom: String,
    pub differences: Vec<(String, PolyMap)>,
}

impl AxiomCheck {
    pub fn holds(&self) -> bool {
        self.differences.iter().all(|(_, d)| d.is_zero())
    }

    fn from(axiom: String, eqs: Vec<Equation<PolyMap>>) -> AxiomCheck {
        AxiomCheck { axiom, differences: eqs.into_iter().map(|e| (e.name, e.lhs.difference(&e.rhs))).collect() }
    }
}

impl fmt::Display for AxiomCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, d) in &self.differences {
            let v = if d.is_zero() { "holds".to_string() } else { format!("lhs - rhs = {d}") };
            writeln!(f, "{name}: {v}")?;
        }
        Ok(())
    }
}

/// RD.k on f; g is the second map of RD.1, RD.4 and RD.5.
pub fn check_rd_axiom(k: usize, f: &PolyMap, g: Option<&PolyMap>) -> Result<AxiomCheck, AxiomError> {
    Ok(AxiomCheck::from(format!("RD.{k}"), crdc::rd_axiom(k, f, g)?))
}

/// CD.k on f, for the Jacobian forward derivative.
pub fn check_cd_axiom(k: usize, f: &PolyMap, g: Option<&PolyMap>) -> Result<AxiomCheck, AxiomError> {
    Ok(AxiomCheck::from(format!("CD.{k}"), crdc::cd_axiom(k, f, g)?))
}

/// `(ι0 × 1);R[R[f]];π1 = D_poly(f)`.
pub fn cdc_from_crdc_check(f: &PolyMap) -> AxiomCheck {
    AxiomCheck::from("crdc_to_cdc".into(), vec![crdc::crdc_to_cdc(f)])
}

/// A seeded random map: at most `max_terms` terms per component, total
/// degree at most `degree`, nonzero integer coefficients in -3..=3.
pub fn random_poly_map<R: Rng>(rng: &mut R, dom: usize, cod: usize, degree: u32, max_terms: usize) -> PolyMap {
    let comps = (0..cod)
        .map(|_| {
            let k = rng.gen_range(0..=max_terms);
            Poly::from_terms(
                dom,
                (0..k).map(|_| {
                    let mut e = vec![0u32; dom];
                    let total = rng.gen_range(0..=degree);
                    for _ in 0..total {
                        if dom > 0 {
                            e[rng.gen_range(0..dom)] += 1;
                        }
                    }
                    let mut c = 0i64;
                    while c == 0 {
                        c = rng.gen_range(-3..=3);
                    }
                    (e, BigRational::from_integer(c.into()))
                }),
            )
        })
        .collect();
    PolyMap { dom, comps }
}

// ---- parsing ----

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    Syntax { line: usize, col: usize, msg: String },
    UnknownVariable { name: String, line: usize, col: usize },
    Arity(String),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::Syntax { line, col, msg } => write!(f, "syntax error at line {line}, column {col}: {msg}"),
            PolyError::UnknownVariable { name, line, col } => write!(f, "unknown variable {name} at line {line}, column {col}"),
            PolyError::Arity(m) => write!(f, "arity error: {m}"),
        }
    }
}

impl std::error::Error for PolyError {}

/// Parse tree shared by the polynomial and expression grammars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Syntax {
    Num(BigRational),
    /// Zero-based variable index.
    Var(usize),
    Add(Box<Syntax>, Box<Syntax>),
    Sub(Box<Syntax>, Box<Syntax>),
    Mul(Box<Syntax>, Box<Syntax>),
    Neg(Box<Syntax>),
    Pow(Box<Syntax>, u32),
    Call(String, Box<Syntax>),
}

impl Syntax {
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Syntax::Num(_) => None,
            Syntax::Var(i) => Some(*i),
            Syntax::Add(a, b) | Syntax::Sub(a, b) | Syntax::Mul(a, b) => a.max_var().max(b.max_var()),
            Syntax::Neg(a) | Syntax::Pow(a, _) | Syntax::Call(_, a) => a.max_var(),
        }
    }
}

/// Which function names the grammar accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grammar {
    Poly,
    Expr,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    grammar: Grammar,
    arity: Option<usize>,
}

const FUNCTIONS: [&str; 3] = ["sin", "cos", "exp"];

impl<'a> Parser<'a> {
    fn loc(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(before.chars().count(), |i| before[i + 1..].chars().count()) + 1;
        (line, col)
    }

    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T, PolyError> {
        let (line, col) = self.loc(pos);
        Err(PolyError::Syntax { line, col, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), PolyError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |c| format!("{c:?}"));
            self.err(self.pos, format!("expected {c:?}, found {found}"))
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let s = &self.src[self.pos..];
        let n = s.bytes().take_while(u8::is_ascii_digit).count();
        if n == 0 {
            return None;
        }
        self.pos += n;
        Some(&s[..n])
    }

    fn natural(&mut self) -> Result<u32, PolyError> {
        let at = self.pos;
        match self.digits() {
            Some(d) => d.parse().or_else(|_| self.err(at, "exponent too large")),
            None => self.err(at, "expected a natural number"),
        }
    }

    fn map(&mut self) -> Result<Vec<Syntax>, PolyError> {
        let start = self.pos;
        if self.eat('(') {
            if self.eat(')') {
                return self.finish(Vec::new());
            }
            let tuple = (|| {
                let mut comps = vec![self.poly()?];
                while self.eat(',') {
                    comps.push(self.poly()?);
                }
                self.expect(')')?;
                self.finish(comps)
            })();
            match tuple {
                Ok(t) => return Ok(t),
                Err(tuple_err) => {
                    // maybe a parenthesised polynomial such as (x1+1)^2
                    self.pos = start;
                    let single = self.poly().and_then(|p| self.finish(vec![p]));
                    return single.map_err(|e| if matches!(e, PolyError::UnknownVariable { .. }) { e } else { tuple_err });
                }
            }
        }
        let p = self.poly()?;
        self.finish(vec![p])
    }

    fn finish(&mut self, comps: Vec<Syntax>) -> Result<Vec<Syntax>, PolyError> {
        match self.peek() {
            None => Ok(comps),
            Some(c) => self.err(self.pos, format!("unexpected {c:?}")),
        }
    }

    fn poly(&mut self) -> Result<Syntax, PolyError> {
        let mut acc = if self.eat('-') {
            Syntax::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = Syntax::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Syntax::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Syntax, PolyError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = Syntax::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn power(&mut self, base: Syntax) -> Result<Syntax, PolyError> {
        if self.eat('^') {
            Ok(Syntax::Pow(Box::new(base), self.natural()?))
        } else {
            Ok(base)
        }
    }

    fn factor(&mut self) -> Result<Syntax, PolyError> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits().expect("digit");
                let mut q = BigRational::from_integer(num.parse::<BigInt>().expect("digits"));
                self.skip_ws();
                if self.src[self.pos..].starts_with('.') {
                    self.pos += 1;
                    let frac = self.digits().unwrap_or("");
                    let scale = num_traits::pow(BigInt::from(10), frac.len());
                    let f = if frac.is_empty() { BigInt::zero() } else { frac.parse::<BigInt>().expect("digits") };
                    q += BigRational::new(f, scale);
                } else if self.eat('/') {
                    let at = self.pos;
                    let den = self.digits().map(|d| d.parse::<BigInt>().expect("digits"));
                    match den {
                        Some(d) if !d.is_zero() => q /= BigRational::from_integer(d),
                        _ => return self.err(at, "expected a nonzero denominator"),
                    }
                }
                Ok(Syntax::Num(q))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.poly()?;
                self.expect(')')?;
                self.power(inner)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let s = &self.src[self.pos..];
                let n = s.bytes().take_while(u8::is_ascii_alphanumeric).count();
                let word = &s[..n];
                self.pos += n;
                if self.grammar == Grammar::Expr && FUNCTIONS.contains(&word) {
                    if self.peek() != Some('(') {
                        return self.err(self.pos, format!("{word} needs an argument in parentheses"));
                    }
                    self.pos += 1;
                    let arg = self.poly()?;
                    self.expect(')')?;
                    return self.power(Syntax::Call(word.to_string(), Box::new(arg)));
                }
                let idx = word.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()).filter(|&i| i >= 1);
                let (line, col) = self.loc(at);
                let Some(i) = idx else {
                    return Err(PolyError::UnknownVariable { name: word.to_string(), line, col });
                };
                if self.arity.is_some_and(|a| i > a) {
                    return Err(PolyError::UnknownVariable { name: word.to_string(), line, col });
                }
                self.power(Syntax::Var(i - 1))
            }
            Some(c) => self.err(at, format!("unexpected {c:?}")),
            None => self.err(at, "unexpected end of input"),
        }
    }
}

/// Parses a map in the given grammar; `arity` bounds the variable indices.
pub fn parse_syntax(text: &str, grammar: Grammar, arity: Option<usize>) -> Result<Vec<Syntax>, PolyError> {
    Parser { src: text, pos: 0, grammar, arity }.map()
}

fn to_poly(s: &Syntax, n: usize) -> Result<Poly, PolyError> {
    Ok(match s {
        Syntax::Num(q) => Poly::constant(n, q.clone()),
        Syntax::Var(i) => Poly::var(n, *i),
        Syntax::Add(a, b) => to_poly(a, n)?.add(&to_poly(b, n)?),
        Syntax::Sub(a, b) => to_poly(a, n)?.sub(&to_poly(b, n)?),
        Syntax::Mul(a, b) => to_poly(a, n)?.mul(&to_poly(b, n)?),
        Syntax::Neg(a) => to_poly(a, n)?.neg(),
        Syntax::Pow(a, k) => to_poly(a, n)?.pow(*k),
        Syntax::Call(name, _) => return Err(PolyError::Arity(format!("{name} is not a polynomial"))),
    })
}

/// Parses a polynomial map; the arity is the largest variable index.
pub fn parse_poly(text: &str) -> Result<PolyMap, PolyError> {
    let comps = parse_syntax(text, Grammar::Poly, None)?;
    let n = comps.iter().filter_map(Syntax::max_var).max().map_or(0, |i| i + 1);
    PolyMap::new(n, comps.iter().map(|s| to_poly(s, n)).collect::<Result<_, _>>()?)
}

/// Parses a polynomial map in exactly `arity` variables.
pub fn parse_poly_in(text: &str, arity: usize) -> Result<PolyMap, PolyError> {
    let comps = parse_syntax(text, Grammar::Poly, Some(arity))?;
    PolyMap::new(arity, comps.iter().map(|s| to_poly(s, arity)).collect::<Result<_, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn parse_examples() {
        let f = parse_poly("x1^2*x2").unwrap();
        assert_eq!((f.dom(), f.cod()), (2, 1));
        assert_eq!(f.components()[0].terms().iter().collect::<Vec<_>>(), [(&vec![2, 1], &q(1))]);
        assert_eq!(parse_poly("(x1+ x2, 2*x1)").unwrap().cod(), 2);
        assert!(matches!(parse_poly("x1^-1"), Err(PolyError::Syntax { line: 1, col: 4, .. })));
        assert!(matches!(parse_poly_in("x3", 2), Err(PolyError::UnknownVariable { .. })));
        assert!(matches!(parse_poly("y"), Err(PolyError::UnknownVariable { .. })));
        assert_eq!(parse_poly("(x1+1)^2").unwrap(), parse_poly("x1^2 + 2*x1 + 1").unwrap());
        assert_eq!(parse_poly("3/2*x1 - 0.5").unwrap().to_string(), "3/2*x1 - 1/2");
    }

    #[test]
    fn compose_expands() {
        // x+1 then x^2 is (x+1)^2; oracle: binomial expansion
        let f = parse_poly("x1 + 1").unwrap();
        let g = parse_poly("x1^2").unwrap();
        let fg = f.then(&g);
        assert_eq!(fg.components()[0].coeff(&[2]), q(1));
        assert_eq!(fg.components()[0].coeff(&[1]), q(2));
        assert_eq!(fg.components()[0].coeff(&[0]), q(1));
        let id = PolyMap::proj0(1, 1).pair(&PolyMap::proj1(1, 1));
        assert_eq!(id, PolyMap::identity(2));
        assert_eq!(f.plus(&PolyMap::zero(1, 1)), f);
    }

    #[test]
    fn jacobian_and_derivatives() {
        let f = parse_poly("x1^2*x2").unwrap();
        let j = jacobian(&f);
        assert_eq!(j[0][0], parse_poly_in("2*x1*x2", 2).unwrap().components()[0]);
        assert_eq!(j[0][1], parse_poly_in("x1^2", 2).unwrap().components()[0]);
        assert!(jacobian(&parse_poly_in("5", 2).unwrap())[0].iter().all(Poly::is_zero));
        assert_eq!(r_poly(&f), parse_poly_in("(2*x1*x2*x3, x1^2*x3)", 3).unwrap());
        // R[π0] on (x1, x2; t) is (t, 0)
        assert_eq!(PolyMap::proj0(1, 1).rderiv(), parse_poly_in("(x3, 0)", 3).unwrap());
        assert!(r_poly(&f).components().iter().all(|p| p.is_linear_in(2..3)));
    }

    #[test]
    fn forward_derivative_matches_linear_term() {
        // oracle: coefficient of h in f(x + h v), by substitution into (x, v, h)
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in [parse_poly("x1^2").unwrap(), random_poly_map(&mut rng, 2, 1, 3, 5)] {
            let n = f.dom();
            let args: Vec<Poly> = (0..n).map(|i| Poly::var(2 * n + 1, i).add(&Poly::var(2 * n + 1, 2 * n).mul(&Poly::var(2 * n + 1, n + i)))).collect();
            let shifted = f.components()[0].substitute(&args, 2 * n + 1);
            let df = d_poly(&f);
            for k in 0..10 {
                let pt: Vec<BigRational> = (0..2 * n).map(|i| BigRational::new(((k * 3 + i * 5) as i64 % 7 - 3).into(), 2.into())).collect();
                let linear = shifted.partial(2 * n).eval(&pt.iter().cloned().chain([q(0)]).collect::<Vec<_>>());
                assert_eq!(df.eval(&pt)[0], linear);
            }
        }
    }

    #[test]
    fn axiom_examples() {
        let f = parse_poly("x1^2").unwrap();
        let g = parse_poly("x1 + 1").unwrap();
        assert!(check_rd_axiom(5, &f, Some(&g)).unwrap().holds());
        assert!(check_rd_axiom(7, &parse_poly("x1*x2").unwrap(), None).unwrap().holds());
        for f in ["x1^3", "x1", "x1*x2 + x2"] {
            assert!(cdc_from_crdc_check(&parse_poly(f).unwrap()).holds(), "{f}");
        }
        assert_eq!(check_rd_axiom(1, &f, None).unwrap_err(), AxiomError::MissingSecondMap("RD.1".into()));
        assert!(matches!(check_rd_axiom(5, &f, Some(&parse_poly("x1*x2").unwrap())), Err(AxiomError::Arity(_))));
    }

    #[test]
    fn print_parse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let f = random_poly_map(&mut rng, 3, 2, 3, 5);
            let back = parse_poly_in(&f.to_string(), 3).unwrap();
            assert_eq!(back, f, "{f}");
        }
    }
}
