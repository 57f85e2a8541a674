//! Commutative semirings and finite-multiset combinatorics.
//!
//! Every weighted relation in the crate carries values from one of four
//! carriers. Multisets are kept as sorted sequences so they can be used
//! directly as ordered map keys.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(usize, usize),
    #[error("element {elem} outside alphabet of size {size}")]
    OutOfAlphabet { elem: usize, size: usize },
}

/// The four coefficient carriers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semiring {
    Boolean,
    Natural,
    Gf2,
    Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bool(bool),
    Nat(BigUint),
    Gf2(bool),
    Rat(BigRational),
}

impl Semiring {
    pub fn id(self) -> &'static str {
        match self {
            Semiring::Boolean => "boolean",
            Semiring::Natural => "natural",
            Semiring::Gf2 => "gf2",
            Semiring::Rational => "rational",
        }
    }

    pub fn zero(self) -> Value {
        match self {
            Semiring::Boolean => Value::Bool(false),
            Semiring::Natural => Value::Nat(BigUint::zero()),
            Semiring::Gf2 => Value::Gf2(false),
            Semiring::Rational => Value::Rat(BigRational::zero()),
        }
    }

    pub fn one(self) -> Value {
        self.from_u64(1)
    }

    /// Image of a natural number under the unique semiring map from N.
    /// A random nonzero element: small naturals, or small signed fractions.
    pub fn sample_nonzero<R: rand::Rng>(self, rng: &mut R) -> Value {
        match self {
            Semiring::Boolean | Semiring::Gf2 => self.one(),
            Semiring::Natural => self.from_u64(rng.gen_range(1..=3)),
            Semiring::Rational => {
                let n: i64 = [-2, -1, 1, 2, 3][rng.gen_range(0..5)];
                Value::Rat(BigRational::new(n.into(), rng.gen_range(1i64..=2).into()))
            }
        }
    }

    pub fn from_u64(self, n: u64) -> Value {
        self.from_nat(&BigUint::from(n))
    }

    pub fn from_nat(self, n: &BigUint) -> Value {
        match self {
            Semiring::Boolean => Value::Bool(!n.is_zero()),
            Semiring::Natural => Value::Nat(n.clone()),
            Semiring::Gf2 => Value::Gf2((n % 2u32).is_one()),
            Semiring::Rational => Value::Rat(BigRational::from_integer(n.clone().into())),
        }
    }

    pub fn is_idempotent(self) -> bool {
        matches!(self, Semiring::Boolean)
    }

    pub fn is_zero(self, v: &Value) -> bool {
        match v {
            Value::Bool(b) | Value::Gf2(b) => !b,
            Value::Nat(n) => n.is_zero(),
            Value::Rat(q) => q.is_zero(),
        }
    }

    /// True when `v` belongs to this carrier.
    pub fn owns(self, v: &Value) -> bool {
        matches!(
            (self, v),
            (Semiring::Boolean, Value::Bool(_))
                | (Semiring::Natural, Value::Nat(_))
                | (Semiring::Gf2, Value::Gf2(_))
                | (Semiring::Rational, Value::Rat(_))
        )
    }

    pub fn add(self, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Bool(x), Value::Bool(y)) => Value::Bool(*x || *y),
            (Value::Gf2(x), Value::Gf2(y)) => Value::Gf2(x ^ y),
            (Value::Nat(x), Value::Nat(y)) => Value::Nat(x + y),
            (Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            _ => panic!("mixed carriers in {} addition: {a:?} + {b:?}", self.id()),
        }
    }

    pub fn mul(self, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Bool(x), Value::Bool(y)) => Value::Bool(*x && *y),
            (Value::Gf2(x), Value::Gf2(y)) => Value::Gf2(*x && *y),
            (Value::Nat(x), Value::Nat(y)) => Value::Nat(x * y),
            (Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
            _ => panic!("mixed carriers in {} product: {a:?} * {b:?}", self.id()),
        }
    }

    /// Parses a carrier element; the CLI and report readers use this.
    pub fn parse_value(self, s: &str) -> Option<Value> {
        let s = s.trim();
        match self {
            Semiring::Boolean | Semiring::Gf2 => {
                let b = match s {
                    "0" => false,
                    "1" => true,
                    _ => return None,
                };
                Some(if self == Semiring::Boolean { Value::Bool(b) } else { Value::Gf2(b) })
            }
            Semiring::Natural => s.parse::<BigUint>().ok().map(Value::Nat),
            Semiring::Rational => s.parse::<BigRational>().ok().map(Value::Rat),
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) | Value::Gf2(b) => write!(f, "{}", u8::from(*b)),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Rat(q) => write!(f, "{q}"),
        }
    }
}

impl Value {
    /// Small-value view used by tests and reports.
    pub fn as_u64(&self) -> Option<u64> {
        match self {
            Value::Bool(b) | Value::Gf2(b) => Some(u64::from(*b)),
            Value::Nat(n) => n.to_u64(),
            Value::Rat(q) if q.is_integer() => q.to_integer().to_u64(),
            Value::Rat(_) => None,
        }
    }
}

/// A finite multiset over `{0, .., alphabet-1}`, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bag {
    elems: Vec<usize>,
    alphabet: usize,
}

impl Bag {
    pub fn new(alphabet: usize, mut elems: Vec<usize>) -> Result<Bag, AlgebraError> {
        if let Some(&e) = elems.iter().find(|&&e| e >= alphabet) {
            return Err(AlgebraError::OutOfAlphabet { elem: e, size: alphabet });
        }
        elems.sort_unstable();
        Ok(Bag { elems, alphabet })
    }

    pub fn empty(alphabet: usize) -> Bag {
        Bag { elems: Vec::new(), alphabet }
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn degree(&self) -> usize {
        self.elems.len()
    }

    pub fn multiplicity(&self, x: usize) -> usize {
        self.elems.iter().filter(|&&e| e == x).count()
    }

    fn wrap(&self, elems: Vec<usize>) -> Bag {
        Bag { elems, alphabet: self.alphabet }
    }
}

impl fmt::Display for Bag {
    /// Renders with letters `a`, `b`, ... as in `[a,a,b]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems.iter().map(|&e| letter(e)).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Default display name of the i-th alphabet element.
pub fn letter(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("a{i}")
    }
}

pub fn bag_union(b1: &Bag, b2: &Bag) -> Result<Bag, AlgebraError> {
    if b1.alphabet != b2.alphabet {
        return Err(AlgebraError::AlphabetMismatch(b1.alphabet, b2.alphabet));
    }
    Ok(b1.wrap(ms_union(&b1.elems, &b2.elems)))
}

/// One entry per distinct element: (element, bag minus one copy, multiplicity).
pub fn bag_removals(b: &Bag) -> Vec<(usize, Bag, usize)> {
    ms_removals(&b.elems)
        .into_iter()
        .map(|(x, rest, m)| (x, b.wrap(rest), m))
        .collect()
}

pub fn bag_splits(b: &Bag) -> Vec<(Bag, Bag)> {
    ms_splits(&b.elems)
        .into_iter()
        .map(|(l, r)| (b.wrap(l), b.wrap(r)))
        .collect()
}

pub fn shuffle_coeff(b1: &Bag, b2: &Bag) -> BigUint {
    ms_shuffle(&b1.elems, &b2.elems)
}

/// Degree-major, then lexicographic.
pub fn enumerate_bags(alphabet_size: usize, max_degree: usize) -> Vec<Bag> {
    let atoms: Vec<usize> = (0..alphabet_size).collect();
    ms_enumerate(&atoms, max_degree)
        .into_iter()
        .map(|elems| Bag { elems, alphabet: alphabet_size })
        .collect()
}

/// Multisets of (possibly empty) bags with at most `max_parts` parts whose union is `b`.
pub fn bag_partitions(b: &Bag, max_parts: usize) -> Vec<Vec<Bag>> {
    ms_partitions(&b.elems, max_parts, true)
        .into_iter()
        .map(|parts| parts.into_iter().map(|p| b.wrap(p)).collect())
        .collect()
}

// Generic multiset helpers. Nested bags (bags of bags) reuse these with
// arbitrary ordered element types.

pub fn ms_union<T: Ord + Clone>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i].clone());
            i += 1;
        } else {
            out.push(b[j].clone());
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Distinct elements with their counts, in order.
pub fn ms_counts<T: Ord + Clone>(a: &[T]) -> Vec<(T, usize)> {
    let mut out: Vec<(T, usize)> = Vec::new();
    for x in a {
        match out.last_mut() {
            Some((y, c)) if y == x => *c += 1,
            _ => out.push((x.clone(), 1)),
        }
    }
    out
}

pub fn ms_multiplicity<T: Ord>(a: &[T], x: &T) -> usize {
    a.iter().filter(|y| *y == x).count()
}

pub fn ms_removals<T: Ord + Clone>(a: &[T]) -> Vec<(T, Vec<T>, usize)> {
    ms_counts(a)
        .into_iter()
        .map(|(x, m)| {
            let pos = a.iter().position(|y| *y == x).expect("present");
            let mut rest = a.to_vec();
            rest.remove(pos);
            (x, rest, m)
        })
        .collect()
}

/// `a` minus one copy of `x`, if present.
pub fn ms_remove_one<T: Ord + Clone>(a: &[T], x: &T) -> Option<Vec<T>> {
    let pos = a.iter().position(|y| y == x)?;
    let mut rest = a.to_vec();
    rest.remove(pos);
    Some(rest)
}

pub fn ms_insert<T: Ord + Clone>(a: &[T], x: T) -> Vec<T> {
    let pos = a.partition_point(|y| *y <= x);
    let mut out = a.to_vec();
    out.insert(pos, x);
    out
}

/// All sub-multisets, each paired with its complement.
pub fn ms_splits<T: Ord + Clone>(a: &[T]) -> Vec<(Vec<T>, Vec<T>)> {
    let counts = ms_counts(a);
    let mut out = Vec::new();
    let mut chosen = vec![0usize; counts.len()];
    loop {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for ((x, m), &c) in counts.iter().zip(&chosen) {
            left.extend(std::iter::repeat_n(x.clone(), c));
            right.extend(std::iter::repeat_n(x.clone(), m - c));
        }
        out.push((left, right));
        // odometer over the count vector
        let mut i = 0;
        loop {
            if i == counts.len() {
                return out;
            }
            if chosen[i] < counts[i].1 {
                chosen[i] += 1;
                break;
            }
            chosen[i] = 0;
            i += 1;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Product over elements of binomial(m1 + m2, m1).
pub fn ms_shuffle<T: Ord + Clone>(a: &[T], b: &[T]) -> BigUint {
    let mut acc = BigUint::one();
    for (x, m1) in ms_counts(a) {
        let m2 = ms_multiplicity(b, &x);
        acc *= binomial(m1 + m2, m1);
    }
    acc
}

/// Multinomial coefficient |a|! / prod m_x! of a multiset.
pub fn ms_multinomial<T: Ord + Clone>(a: &[T]) -> BigUint {
    let mut acc = BigUint::one();
    let mut total = 0;
    for (_, m) in ms_counts(a) {
        total += m;
        acc *= binomial(total, m);
    }
    acc
}

/// All multisets over `atoms` (assumed sorted, distinct) of size at most `max_degree`.
pub fn ms_enumerate<T: Ord + Clone>(atoms: &[T], max_degree: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    for deg in 0..=max_degree {
        let mut cur = Vec::with_capacity(deg);
        enumerate_rec(atoms, 0, deg, &mut cur, &mut out);
    }
    out
}

fn enumerate_rec<T: Clone>(atoms: &[T], from: usize, left: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    for i in from..atoms.len() {
        cur.push(atoms[i].clone());
        enumerate_rec(atoms, i, left - 1, cur, out);
        cur.pop();
    }
}

/// Multisets of sub-multisets of `a` whose union is `a`, with at most
/// `max_parts` parts. Empty parts are allowed only when `allow_empty`.
/// Each partition is returned with its parts sorted.
pub fn ms_partitions<T: Ord + Clone>(a: &[T], max_parts: usize, allow_empty: bool) -> Vec<Vec<Vec<T>>> {
    let mut seen = BTreeSet::new();
    nonempty_partitions(a, max_parts, &mut Vec::new(), &mut seen);
    let mut out = Vec::new();
    for parts in seen {
        let extra = if allow_empty { max_parts - parts.len() } else { 0 };
        for k in 0..=extra {
            let mut p: Vec<Vec<T>> = std::iter::repeat_n(Vec::new(), k).collect();
            p.extend(parts.iter().cloned());
            out.push(p);
        }
    }
    out.sort();
    out
}

fn nonempty_partitions<T: Ord + Clone>(rest: &[T], max_parts: usize, acc: &mut Vec<Vec<T>>, seen: &mut BTreeSet<Vec<Vec<T>>>) {
    if rest.is_empty() {
        let mut parts = acc.clone();
        parts.sort();
        seen.insert(parts);
        return;
    }
    if acc.len() == max_parts {
        return;
    }
    // the part holding the smallest remaining element is chosen next
    let first = rest[0].clone();
    let tail = &rest[1..];
    for (sub, comp) in ms_splits(tail) {
        let part = ms_insert(&sub, first.clone());
        acc.push(part);
        nonempty_partitions(&comp, max_parts, acc, seen);
        acc.pop();
    }
}
