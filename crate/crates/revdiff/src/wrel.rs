//! Weighted relations: finite labelled objects and sparse semiring matrices.
//!
//! Labels carry their own structure (tuples, tags, bags, sets) so a basis
//! element of `!(A×B) ⊗ A` is a value like `([a.0,b.1],a)`. The tensor is
//! strict: factors are flattened and the unit `k` disappears, so
//! `A⊗(B⊗C)` and `(A⊗B)⊗C` are the same object with the same labels.
//! The order on labels is the canonical basis order: bags and sets compare
//! by size first, tuples lexicographically, tags left block first.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::algebra::{ms_enumerate, Semiring, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WrelError {
    #[error("object mismatch: expected {expected}, found {found}")]
    ObjMismatch { expected: String, found: String },
    #[error("semiring mismatch: {0} vs {1}")]
    SemiringMismatch(Semiring, Semiring),
    #[error("label {label} is not in the basis of {obj}")]
    NotInBasis { label: String, obj: String },
    #[error("value {0} does not belong to the {1} carrier")]
    WrongCarrier(String, Semiring),
    #[error("unknown map {0}")]
    UnknownMap(String),
}

pub type WrelResult<T> = Result<T, WrelError>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Label {
    Unit,
    Atom(u32, Arc<str>),
    /// Element of a tensor of two or more non-unit factors.
    Tuple(Vec<Label>),
    Tag(u8, Box<Label>),
    /// Sorted multiset.
    Bag(Vec<Label>),
    /// Strictly increasing set.
    Set(Vec<Label>),
}

impl Label {
    pub fn atom(idx: usize, name: &str) -> Label {
        Label::Atom(idx as u32, Arc::from(name))
    }

    /// Tensor of two labels, flattened.
    pub fn pair(a: Label, b: Label) -> Label {
        let mut parts = a.into_factors();
        parts.extend(b.into_factors());
        Label::from_factors(parts)
    }

    pub fn from_factors(mut parts: Vec<Label>) -> Label {
        match parts.len() {
            0 => Label::Unit,
            1 => parts.pop().expect("one factor"),
            _ => Label::Tuple(parts),
        }
    }

    pub fn into_factors(self) -> Vec<Label> {
        match self {
            Label::Unit => Vec::new(),
            Label::Tuple(v) => v,
            other => vec![other],
        }
    }

    pub fn factors(&self) -> Vec<Label> {
        self.clone().into_factors()
    }

    /// Splits a tensor label after its first `k` factors.
    pub fn split_at(&self, k: usize) -> (Label, Label) {
        let mut parts = self.factors();
        let right = parts.split_off(k.min(parts.len()));
        (Label::from_factors(parts), Label::from_factors(right))
    }

    pub fn tag(side: u8, x: Label) -> Label {
        Label::Tag(side, Box::new(x))
    }

    pub fn bag(mut elems: Vec<Label>) -> Label {
        elems.sort();
        Label::Bag(elems)
    }

    /// Sorted set; `None` when an element repeats.
    pub fn set(mut elems: Vec<Label>) -> Option<Label> {
        elems.sort();
        if elems.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Label::Set(elems))
    }

    pub fn as_tag(&self) -> Option<(u8, &Label)> {
        match self {
            Label::Tag(i, x) => Some((*i, x)),
            _ => None,
        }
    }

    /// Elements of a bag or a set.
    pub fn elems(&self) -> Option<&[Label]> {
        match self {
            Label::Bag(e) | Label::Set(e) => Some(e),
            _ => None,
        }
    }

    /// Number of base atoms inside the label.
    pub fn atoms(&self) -> usize {
        match self {
            Label::Unit => 0,
            Label::Atom(..) => 1,
            Label::Tuple(v) => v.iter().map(Label::atoms).sum(),
            Label::Tag(_, x) => x.atoms(),
            Label::Bag(e) | Label::Set(e) => e.iter().map(Label::atoms).sum(),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Label::Unit => 0,
            Label::Atom(..) => 1,
            Label::Tuple(..) => 2,
            Label::Tag(..) => 3,
            Label::Bag(_) => 4,
            Label::Set(_) => 5,
        }
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Label::Atom(i, n), Label::Atom(j, m)) => i.cmp(j).then_with(|| n.cmp(m)),
            (Label::Tuple(x), Label::Tuple(y)) => x.cmp(y),
            (Label::Tag(i, x), Label::Tag(j, y)) => i.cmp(j).then_with(|| x.cmp(y)),
            (Label::Bag(x), Label::Bag(y)) | (Label::Set(x), Label::Set(y)) => {
                x.len().cmp(&y.len()).then_with(|| x.cmp(y))
            }
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Unit => f.write_str("*"),
            Label::Atom(_, n) => f.write_str(n),
            Label::Tuple(v) => {
                f.write_str("(")?;
                for (k, x) in v.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            Label::Tag(i, x) => write!(f, "{x}.{i}"),
            Label::Bag(e) => {
                f.write_str("[")?;
                for (k, x) in e.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
            Label::Set(e) => {
                f.write_str("{")?;
                for (k, x) in e.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    match x {
                        // vectors of the base basis print as their 1-based index
                        Label::Atom(i, _) => write!(f, "{}", i + 1)?,
                        other => write!(f, "{other}")?,
                    }
                }
                f.write_str("}")
            }
        }
    }
}

/// Truncation caps for multiset objects: `degree` bounds the number of base
/// atoms, `parts` bounds the number of bags at every nested level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Caps {
    pub degree: usize,
    pub parts: usize,
}

impl Caps {
    pub fn new(degree: usize, parts: usize) -> Caps {
        Caps { degree, parts }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Shape {
    Unit,
    Base(Vec<Arc<str>>),
    /// Two or more non-unit, non-tensor factors.
    Tensor(Vec<Obj>),
    Sum(Obj, Obj),
    /// Finite bags, truncated by the caps.
    Bang(Obj, Caps),
    /// Exterior algebra: finite subsets, never truncated.
    Ext(Obj),
}

#[derive(Debug)]
struct ObjData {
    shape: Shape,
    name: String,
    basis: OnceLock<Vec<Label>>,
}

/// An object: a finite labelled basis described structurally.
#[derive(Clone, Debug)]
pub struct Obj(Arc<ObjData>);

impl PartialEq for Obj {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.shape == other.0.shape
    }
}

impl Eq for Obj {}

impl std::hash::Hash for Obj {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.shape.hash(state)
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.name)
    }
}

impl Obj {
    fn make(shape: Shape, name: String) -> Obj {
        Obj(Arc::new(ObjData { shape, name, basis: OnceLock::new() }))
    }

    pub fn unit() -> Obj {
        Obj::make(Shape::Unit, "k".into())
    }

    pub fn base(name: &str, labels: &[&str]) -> Obj {
        Obj::make(Shape::Base(labels.iter().map(|s| Arc::from(*s)).collect()), name.into())
    }

    /// Object with basis `a, b, c, ...`.
    pub fn letters(name: &str, n: usize) -> Obj {
        let names: Vec<String> = (0..n).map(crate::algebra::letter).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Obj::base(name, &refs)
    }

    /// Object with basis `v1, .., vn`.
    pub fn vectors(name: &str, n: usize) -> Obj {
        let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Obj::base(name, &refs)
    }

    pub fn tensor(a: &Obj, b: &Obj) -> Obj {
        let mut parts = a.factors();
        parts.extend(b.factors());
        Obj::from_factors(parts)
    }

    pub fn from_factors(mut parts: Vec<Obj>) -> Obj {
        match parts.len() {
            0 => Obj::unit(),
            1 => parts.pop().expect("one factor"),
            _ => {
                let name = parts.iter().map(paren).collect::<Vec<_>>().join("⊗");
                Obj::make(Shape::Tensor(parts), name)
            }
        }
    }

    /// Tensor factors; empty for the unit.
    pub fn factors(&self) -> Vec<Obj> {
        match &self.0.shape {
            Shape::Unit => Vec::new(),
            Shape::Tensor(v) => v.clone(),
            _ => vec![self.clone()],
        }
    }

    pub fn arity(&self) -> usize {
        match &self.0.shape {
            Shape::Unit => 0,
            Shape::Tensor(v) => v.len(),
            _ => 1,
        }
    }

    pub fn sum(a: &Obj, b: &Obj) -> Obj {
        Obj::make(Shape::Sum(a.clone(), b.clone()), format!("{}×{}", paren(a), paren(b)))
    }

    pub fn bang(a: &Obj, caps: Caps) -> Obj {
        Obj::make(Shape::Bang(a.clone(), caps), format!("!{}", paren(a)))
    }

    pub fn ext(a: &Obj) -> Obj {
        Obj::make(Shape::Ext(a.clone()), format!("!{}", paren(a)))
    }

    pub fn tensor_all(objs: &[Obj]) -> Obj {
        Obj::from_factors(objs.iter().flat_map(Obj::factors).collect())
    }

    pub fn shape(&self) -> &Shape {
        &self.0.shape
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.0.shape, Shape::Unit)
    }

    /// True when some factor is a bang or exterior object.
    pub fn has_modality(&self) -> bool {
        match &self.0.shape {
            Shape::Unit | Shape::Base(_) => false,
            Shape::Tensor(v) => v.iter().any(Obj::has_modality),
            Shape::Sum(a, b) => a.has_modality() || b.has_modality(),
            Shape::Bang(..) | Shape::Ext(_) => true,
        }
    }

    /// True when some factor is a truncated bag object.
    pub fn has_bags(&self) -> bool {
        match &self.0.shape {
            Shape::Unit | Shape::Base(_) => false,
            Shape::Tensor(v) => v.iter().any(Obj::has_bags),
            Shape::Sum(a, b) => a.has_bags() || b.has_bags(),
            Shape::Bang(..) => true,
            Shape::Ext(a) => a.has_bags(),
        }
    }

    /// The two summands of a biproduct object.
    pub fn summands(&self) -> Option<(&Obj, &Obj)> {
        match &self.0.shape {
            Shape::Sum(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// The object under a bang or exterior modality.
    pub fn inner(&self) -> Option<&Obj> {
        match &self.0.shape {
            Shape::Bang(a, _) | Shape::Ext(a) => Some(a),
            _ => None,
        }
    }

    pub fn caps(&self) -> Option<Caps> {
        match &self.0.shape {
            Shape::Bang(_, c) => Some(*c),
            _ => None,
        }
    }

    /// Same object with every bang cap replaced.
    pub fn with_caps(&self, caps: Caps) -> Obj {
        match &self.0.shape {
            Shape::Unit | Shape::Base(_) => self.clone(),
            Shape::Tensor(v) => Obj::from_factors(v.iter().map(|a| a.with_caps(caps)).collect()),
            Shape::Sum(a, b) => Obj::sum(&a.with_caps(caps), &b.with_caps(caps)),
            Shape::Bang(a, _) => Obj::bang(&a.with_caps(caps), caps),
            Shape::Ext(a) => Obj::ext(&a.with_caps(caps)),
        }
    }

    /// Canonically ordered basis.
    pub fn basis(&self) -> &[Label] {
        self.0.basis.get_or_init(|| {
            let mut b = self.enumerate();
            b.sort();
            b
        })
    }

    pub fn dim(&self) -> usize {
        self.basis().len()
    }

    fn enumerate(&self) -> Vec<Label> {
        match &self.0.shape {
            Shape::Unit => vec![Label::Unit],
            Shape::Base(names) => names.iter().enumerate().map(|(i, n)| Label::Atom(i as u32, n.clone())).collect(),
            Shape::Tensor(v) => {
                let mut out: Vec<Vec<Label>> = vec![Vec::new()];
                for a in v {
                    let mut next = Vec::with_capacity(out.len() * a.dim());
                    for prefix in &out {
                        for x in a.basis() {
                            let mut p = prefix.clone();
                            p.push(x.clone());
                            next.push(p);
                        }
                    }
                    out = next;
                }
                out.into_iter().map(Label::Tuple).collect()
            }
            Shape::Sum(a, b) => a
                .basis()
                .iter()
                .map(|x| Label::tag(0, x.clone()))
                .chain(b.basis().iter().map(|y| Label::tag(1, y.clone())))
                .collect(),
            Shape::Bang(a, caps) => {
                let max_len = if a.has_modality() { caps.parts } else { caps.degree };
                ms_enumerate(a.basis(), max_len)
                    .into_iter()
                    .map(Label::Bag)
                    .filter(|l| within_caps(l, *caps))
                    .collect()
            }
            Shape::Ext(a) => {
                let atoms = a.basis();
                let mut out = Vec::new();
                for mask in 0u64..(1u64 << atoms.len()) {
                    let elems = (0..atoms.len()).filter(|i| mask >> i & 1 == 1).map(|i| atoms[i].clone()).collect();
                    out.push(Label::Set(elems));
                }
                out
            }
        }
    }

    /// Structural membership test; never enumerates the basis.
    pub fn contains(&self, l: &Label) -> bool {
        match (&self.0.shape, l) {
            (Shape::Unit, Label::Unit) => true,
            (Shape::Base(names), Label::Atom(i, n)) => names.get(*i as usize).is_some_and(|m| m == n),
            (Shape::Tensor(v), Label::Tuple(x)) => v.len() == x.len() && v.iter().zip(x).all(|(a, y)| a.contains(y)),
            (Shape::Sum(a, _), Label::Tag(0, x)) => a.contains(x),
            (Shape::Sum(_, b), Label::Tag(1, y)) => b.contains(y),
            (Shape::Bang(a, caps), Label::Bag(e)) => {
                e.windows(2).all(|w| w[0] <= w[1]) && e.iter().all(|x| a.contains(x)) && within_caps(l, *caps)
            }
            (Shape::Ext(a), Label::Set(e)) => e.windows(2).all(|w| w[0] < w[1]) && e.iter().all(|x| a.contains(x)),
            _ => false,
        }
    }
}

fn paren(a: &Obj) -> String {
    match a.shape() {
        Shape::Tensor(..) | Shape::Sum(..) => format!("({})", a.name()),
        _ => a.name().to_string(),
    }
}

/// Atom count within the degree cap and, at every nested level of bags of
/// bags, the flattened number of parts within the parts cap.
pub fn within_caps(l: &Label, caps: Caps) -> bool {
    if l.atoms() > caps.degree {
        return false;
    }
    let mut level: Vec<&Label> = vec![l];
    loop {
        let next: Vec<&Label> = level
            .iter()
            .filter_map(|x| match x {
                Label::Bag(e) => Some(e.iter().filter(|y| matches!(y, Label::Bag(_)))),
                _ => None,
            })
            .flatten()
            .collect();
        if next.is_empty() {
            return true;
        }
        if next.len() > caps.parts {
            return false;
        }
        level = next;
    }
}

pub type Vector = BTreeMap<Label, Value>;

/// Adds `coeff * w` into `acc`, keeping `acc` free of zeros.
pub fn axpy(sr: Semiring, acc: &mut Vector, coeff: &Value, w: &Vector) {
    for (l, v) in w {
        add_entry(sr, acc, l.clone(), sr.mul(coeff, v));
    }
}

pub fn add_entry(sr: Semiring, acc: &mut Vector, l: Label, v: Value) {
    if sr.is_zero(&v) {
        return;
    }
    match acc.get_mut(&l) {
        Some(old) => {
            let s = sr.add(old, &v);
            if sr.is_zero(&s) {
                acc.remove(&l);
            } else {
                *old = s;
            }
        }
        None => {
            acc.insert(l, v);
        }
    }
}

/// A first differing entry between two morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub row: Label,
    pub col: Label,
    pub lhs: Value,
    pub rhs: Value,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at ({}, {}): lhs {} vs rhs {}", self.row, self.col, self.lhs, self.rhs)
    }
}

/// A sparse matrix `dom → cod` over a semiring.
#[derive(Clone, Debug)]
pub struct Mor {
    dom: Obj,
    cod: Obj,
    sr: Semiring,
    rows: BTreeMap<Label, Vector>,
    /// Rows whose image was cut by a cap.
    truncated: BTreeSet<Label>,
}

impl PartialEq for Mor {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.sr == other.sr && self.rows == other.rows
    }
}

impl Mor {
    pub fn zero(dom: &Obj, cod: &Obj, sr: Semiring) -> Mor {
        Mor { dom: dom.clone(), cod: cod.clone(), sr, rows: BTreeMap::new(), truncated: BTreeSet::new() }
    }

    /// Builds from `(row, col, value)` triples; repeated keys accumulate.
    pub fn from_entries<I>(dom: &Obj, cod: &Obj, sr: Semiring, entries: I) -> WrelResult<Mor>
    where
        I: IntoIterator<Item = (Label, Label, Value)>,
    {
        let mut m = Mor::zero(dom, cod, sr);
        for (a, c, v) in entries {
            m.add_at(a, c, v)?;
        }
        Ok(m)
    }

    /// A relation: every listed pair gets coefficient one.
    pub fn relation<I>(dom: &Obj, cod: &Obj, sr: Semiring, pairs: I) -> WrelResult<Mor>
    where
        I: IntoIterator<Item = (Label, Label)>,
    {
        Mor::from_entries(dom, cod, sr, pairs.into_iter().map(|(a, c)| (a, c, sr.one())))
    }

    pub fn add_at(&mut self, a: Label, c: Label, v: Value) -> WrelResult<()> {
        if !self.sr.owns(&v) {
            return Err(WrelError::WrongCarrier(v.to_string(), self.sr));
        }
        if !self.dom.contains(&a) {
            return Err(WrelError::NotInBasis { label: a.to_string(), obj: self.dom.to_string() });
        }
        if !self.cod.contains(&c) {
            return Err(WrelError::NotInBasis { label: c.to_string(), obj: self.cod.to_string() });
        }
        let row = self.rows.entry(a.clone()).or_default();
        add_entry(self.sr, row, c, v);
        if row.is_empty() {
            self.rows.remove(&a);
        }
        Ok(())
    }

    /// Installs a computed row, dropping entries outside the codomain. Rows
    /// that lose mass this way are recorded as truncated.
    pub fn set_row(&mut self, a: Label, v: Vector) {
        let before = v.len();
        let kept: Vector = v.into_iter().filter(|(c, _)| self.cod.contains(c)).collect();
        if kept.len() < before {
            self.truncated.insert(a.clone());
        }
        if kept.is_empty() {
            self.rows.remove(&a);
        } else {
            self.rows.insert(a, kept);
        }
    }

    pub fn mark_truncated(&mut self, a: Label) {
        self.truncated.insert(a);
    }

    pub fn dom(&self) -> &Obj {
        &self.dom
    }

    pub fn cod(&self) -> &Obj {
        &self.cod
    }

    pub fn semiring(&self) -> Semiring {
        self.sr
    }

    pub fn row(&self, a: &Label) -> Option<&Vector> {
        self.rows.get(a)
    }

    pub fn rows(&self) -> &BTreeMap<Label, Vector> {
        &self.rows
    }

    pub fn get(&self, a: &Label, c: &Label) -> Value {
        self.rows.get(a).and_then(|r| r.get(c)).cloned().unwrap_or_else(|| self.sr.zero())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Label, &Label, &Value)> {
        self.rows.iter().flat_map(|(a, r)| r.iter().map(move |(c, v)| (a, c, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.values().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn truncated_rows(&self) -> &BTreeSet<Label> {
        &self.truncated
    }

    pub fn is_truncated(&self) -> bool {
        !self.truncated.is_empty()
    }

    /// Reinterprets the entries over other objects (e.g. wider caps).
    pub fn retype(&self, dom: &Obj, cod: &Obj) -> WrelResult<Mor> {
        let mut m = Mor::from_entries(dom, cod, self.sr, self.entries().map(|(a, c, v)| (a.clone(), c.clone(), v.clone())))?;
        m.truncated = self.truncated.clone();
        Ok(m)
    }

    fn check_sr(&self, other: &Mor) -> WrelResult<()> {
        if self.sr != other.sr {
            return Err(WrelError::SemiringMismatch(self.sr, other.sr));
        }
        Ok(())
    }

    /// Diagrammatic composite `self ; g`.
    pub fn compose(&self, g: &Mor) -> WrelResult<Mor> {
        self.check_sr(g)?;
        expect_obj(&g.dom, &self.cod)?;
        let mut out = Mor::zero(&self.dom, &g.cod, self.sr);
        for (a, row) in &self.rows {
            let mut acc = Vector::new();
            let mut trunc = self.truncated.contains(a);
            for (b, v) in row {
                if let Some(grow) = g.rows.get(b) {
                    axpy(self.sr, &mut acc, v, grow);
                }
                trunc |= g.truncated.contains(b);
            }
            if trunc {
                out.truncated.insert(a.clone());
            }
            if !acc.is_empty() {
                out.rows.insert(a.clone(), acc);
            }
        }
        for a in &self.truncated {
            out.truncated.insert(a.clone());
        }
        Ok(out)
    }

    pub fn tensor(&self, g: &Mor) -> WrelResult<Mor> {
        self.check_sr(g)?;
        let dom = Obj::tensor(&self.dom, &g.dom);
        let cod = Obj::tensor(&self.cod, &g.cod);
        let mut out = Mor::zero(&dom, &cod, self.sr);
        for (a, r1) in &self.rows {
            for (b, r2) in &g.rows {
                let mut acc = Vector::new();
                for (c, v) in r1 {
                    for (d, w) in r2 {
                        add_entry(self.sr, &mut acc, Label::pair(c.clone(), d.clone()), self.sr.mul(v, w));
                    }
                }
                if !acc.is_empty() {
                    out.rows.insert(Label::pair(a.clone(), b.clone()), acc);
                }
            }
        }
        for a in &self.truncated {
            for b in g.dom.basis() {
                out.truncated.insert(Label::pair(a.clone(), b.clone()));
            }
        }
        for b in &g.truncated {
            for a in self.dom.basis() {
                out.truncated.insert(Label::pair(a.clone(), b.clone()));
            }
        }
        Ok(out)
    }

    pub fn add(&self, g: &Mor) -> WrelResult<Mor> {
        self.check_sr(g)?;
        expect_obj(&g.dom, &self.dom)?;
        expect_obj(&g.cod, &self.cod)?;
        let mut out = self.clone();
        for (a, c, v) in g.entries() {
            let row = out.rows.entry(a.clone()).or_default();
            add_entry(self.sr, row, c.clone(), v.clone());
            if row.is_empty() {
                out.rows.remove(a);
            }
        }
        out.truncated.extend(g.truncated.iter().cloned());
        Ok(out)
    }

    pub fn scale(&self, s: &Value) -> Mor {
        let mut out = Mor::zero(&self.dom, &self.cod, self.sr);
        for (a, row) in &self.rows {
            let mut acc = Vector::new();
            axpy(self.sr, &mut acc, s, row);
            if !acc.is_empty() {
                out.rows.insert(a.clone(), acc);
            }
        }
        out.truncated = self.truncated.clone();
        out
    }

    /// Transpose.
    pub fn star(&self) -> Mor {
        let mut out = Mor::zero(&self.cod, &self.dom, self.sr);
        for (a, c, v) in self.entries() {
            out.rows.entry(c.clone()).or_default().insert(a.clone(), v.clone());
        }
        out
    }

    /// Equality of objects and entries, with the first differing entry.
    pub fn mor_equal(&self, g: &Mor) -> (bool, Option<Counterexample>) {
        if self.dom != g.dom || self.cod != g.cod || self.sr != g.sr {
            return (false, None);
        }
        match first_difference(self.sr, &self.rows, &g.rows) {
            None => (true, None),
            Some(cx) => (false, Some(cx)),
        }
    }

    /// Tab-separated dump in canonical order.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (a, c, v) in self.entries() {
            s.push_str(&format!("{a}\t{c}\t{v}\n"));
        }
        s
    }
}

pub fn first_difference(sr: Semiring, l: &BTreeMap<Label, Vector>, r: &BTreeMap<Label, Vector>) -> Option<Counterexample> {
    let rows: BTreeSet<&Label> = l.keys().chain(r.keys()).collect();
    let empty = Vector::new();
    for a in rows {
        let lr = l.get(a).unwrap_or(&empty);
        let rr = r.get(a).unwrap_or(&empty);
        if let Some((c, lv, rv)) = first_vector_difference(sr, lr, rr) {
            return Some(Counterexample { row: a.clone(), col: c, lhs: lv, rhs: rv });
        }
    }
    None
}

pub fn first_vector_difference(sr: Semiring, l: &Vector, r: &Vector) -> Option<(Label, Value, Value)> {
    let cols: BTreeSet<&Label> = l.keys().chain(r.keys()).collect();
    for c in cols {
        let lv = l.get(c).cloned().unwrap_or_else(|| sr.zero());
        let rv = r.get(c).cloned().unwrap_or_else(|| sr.zero());
        if lv != rv {
            return Some((c.clone(), lv, rv));
        }
    }
    None
}

pub fn expect_obj(found: &Obj, expected: &Obj) -> WrelResult<()> {
    if found != expected {
        return Err(WrelError::ObjMismatch { expected: expected.to_string(), found: found.to_string() });
    }
    Ok(())
}

pub fn identity(a: &Obj, sr: Semiring) -> Mor {
    let mut m = Mor::zero(a, a, sr);
    for x in a.basis() {
        m.rows.insert(x.clone(), [(x.clone(), sr.one())].into_iter().collect());
    }
    m
}

/// The swap `A⊗B → B⊗A`.
pub fn symmetry(a: &Obj, b: &Obj, sr: Semiring) -> Mor {
    let dom = Obj::tensor(a, b);
    let cod = Obj::tensor(b, a);
    let mut m = Mor::zero(&dom, &cod, sr);
    for x in a.basis() {
        for y in b.basis() {
            m.rows.insert(
                Label::pair(x.clone(), y.clone()),
                [(Label::pair(y.clone(), x.clone()), sr.one())].into_iter().collect(),
            );
        }
    }
    m
}

pub fn zero(a: &Obj, b: &Obj, sr: Semiring) -> Mor {
    Mor::zero(a, b, sr)
}

pub struct Biproduct {
    pub obj: Obj,
    pub proj0: Mor,
    pub proj1: Mor,
    pub inj0: Mor,
    pub inj1: Mor,
}

pub fn biproduct(a: &Obj, b: &Obj, sr: Semiring) -> Biproduct {
    let obj = Obj::sum(a, b);
    let mut proj0 = Mor::zero(&obj, a, sr);
    let mut proj1 = Mor::zero(&obj, b, sr);
    for x in a.basis() {
        proj0.rows.insert(Label::tag(0, x.clone()), [(x.clone(), sr.one())].into_iter().collect());
    }
    for y in b.basis() {
        proj1.rows.insert(Label::tag(1, y.clone()), [(y.clone(), sr.one())].into_iter().collect());
    }
    let inj0 = proj0.star();
    let inj1 = proj1.star();
    Biproduct { obj, proj0, proj1, inj0, inj1 }
}

/// `A⊗A → k`, pairing equal basis elements.
pub fn cup(a: &Obj, sr: Semiring) -> Mor {
    let dom = Obj::tensor(a, a);
    let mut m = Mor::zero(&dom, &Obj::unit(), sr);
    for x in a.basis() {
        m.rows.insert(Label::pair(x.clone(), x.clone()), [(Label::Unit, sr.one())].into_iter().collect());
    }
    m
}

pub fn cap(a: &Obj, sr: Semiring) -> Mor {
    cup(a, sr).star()
}

/// Each entry of `dom × cod` is nonzero with probability `density`.
pub fn random_mor<R: rand::Rng>(dom: &Obj, cod: &Obj, sr: Semiring, density: f64, rng: &mut R) -> Mor {
    let mut m = Mor::zero(dom, cod, sr);
    for a in dom.basis() {
        for c in cod.basis() {
            if rng.gen_bool(density) {
                m.add_at(a.clone(), c.clone(), sr.sample_nonzero(rng)).expect("basis labels");
            }
        }
    }
    m
}

/// Dense rendering for small matrices in tests: rows and columns in basis order.
pub fn to_dense(m: &Mor) -> Vec<Vec<String>> {
    m.dom()
        .basis()
        .iter()
        .map(|a| m.cod().basis().iter().map(|c| m.get(a, c).to_string()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Obj {
        Obj::letters("A", 2)
    }

    fn lab(o: &Obj, i: usize) -> Label {
        o.basis()[i].clone()
    }

    #[test]
    fn compose_examples() {
        let sr = Semiring::Boolean;
        let a = Obj::base("X", &["a"]);
        let b = Obj::base("Y", &["b", "b'"]);
        let c = Obj::base("Z", &["c"]);
        let f = Mor::relation(&a, &b, sr, [(lab(&a, 0), lab(&b, 0))]).unwrap();
        let g = Mor::relation(&b, &c, sr, [(lab(&b, 0), lab(&c, 0))]).unwrap();
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg.get(&lab(&a, 0), &lab(&c, 0)), sr.one());
        let g2 = Mor::relation(&b, &c, sr, [(lab(&b, 1), lab(&c, 0))]).unwrap();
        assert!(f.compose(&g2).unwrap().is_zero());

        let n = Semiring::Natural;
        let k = Obj::unit();
        let two = Mor::from_entries(&k, &k, n, [(Label::Unit, Label::Unit, n.from_u64(2))]).unwrap();
        let three = Mor::from_entries(&k, &k, n, [(Label::Unit, Label::Unit, n.from_u64(3))]).unwrap();
        assert_eq!(two.compose(&three).unwrap().get(&Label::Unit, &Label::Unit).as_u64(), Some(6));
    }

    #[test]
    fn monoidal_examples() {
        let sr = Semiring::Natural;
        let a = ab();
        let b = Obj::letters("B", 3);
        let f = Mor::from_entries(&a, &b, sr, [(lab(&a, 0), lab(&b, 2), sr.from_u64(4))]).unwrap();
        assert_eq!(f.add(&zero(&a, &b, sr)).unwrap(), f);
        let s = symmetry(&a, &b, sr).compose(&symmetry(&b, &a, sr)).unwrap();
        assert_eq!(s, identity(&Obj::tensor(&a, &b), sr));
        assert_eq!(identity(&a, sr).tensor(&identity(&b, sr)).unwrap(), identity(&Obj::tensor(&a, &b), sr));
        // tensor basis is lexicographic in (left, right)
        let t = Obj::tensor(&a, &b);
        assert_eq!(t.basis()[1], Label::pair(lab(&a, 0), lab(&b, 1)));
    }

    #[test]
    fn biproduct_examples() {
        let sr = Semiring::Boolean;
        let a = Obj::base("A", &["a"]);
        let b = Obj::base("B", &["b"]);
        let bp = biproduct(&a, &b, sr);
        assert_eq!(bp.inj0.compose(&bp.proj0).unwrap(), identity(&a, sr));
        assert!(bp.inj0.compose(&bp.proj1).unwrap().is_zero());
        let e: Vec<String> = bp.proj0.entries().map(|(r, c, _)| format!("{r}->{c}")).collect();
        assert_eq!(e, ["a.0->a"]);
        let sum = bp.proj0.compose(&bp.inj0).unwrap().add(&bp.proj1.compose(&bp.inj1).unwrap()).unwrap();
        assert_eq!(sum, identity(&bp.obj, sr));
        assert_eq!(bp.proj0.star(), bp.inj0);
    }

    #[test]
    fn cup_cap_examples() {
        let sr = Semiring::Boolean;
        let a = ab();
        let c = cup(&a, sr);
        let rows: Vec<String> = c.entries().map(|(r, _, _)| r.to_string()).collect();
        assert_eq!(rows, ["(a,a)", "(b,b)"]);
        let k = Obj::unit();
        // the cup on k pairs the single label with itself
        assert_eq!(cup(&k, sr).entries().count(), 1);
        // snake (1⊗∩);(∪⊗1) and (∩⊗1);(1⊗∪)
        let id = identity(&a, sr);
        let left = id.tensor(&cap(&a, sr)).unwrap().compose(&c.tensor(&id).unwrap()).unwrap();
        assert_eq!(left, id);
        let right = cap(&a, sr).tensor(&id).unwrap().compose(&id.tensor(&c).unwrap()).unwrap();
        assert_eq!(right, id);
    }

    #[test]
    fn star_examples() {
        let sr = Semiring::Boolean;
        let a = Obj::base("A", &["a"]);
        let b = Obj::base("B", &["b"]);
        let f = Mor::relation(&a, &b, sr, [(lab(&a, 0), lab(&b, 0))]).unwrap();
        let fs = f.star();
        assert_eq!(fs.get(&lab(&b, 0), &lab(&a, 0)), sr.one());
        assert_eq!(identity(&a, sr).star(), identity(&a, sr));

        let q = Semiring::Rational;
        let x = ab();
        let m = Mor::from_entries(
            &x,
            &x,
            q,
            [
                (lab(&x, 0), lab(&x, 0), q.from_u64(2)),
                (lab(&x, 1), lab(&x, 0), q.from_u64(1)),
                (lab(&x, 1), lab(&x, 1), q.from_u64(3)),
            ],
        )
        .unwrap();
        assert_eq!(to_dense(&m.star()), vec![vec!["2", "1"], vec!["0", "3"]]);
    }

    #[test]
    fn equality_examples() {
        let a = ab();
        for (sr, expect) in [(Semiring::Natural, false), (Semiring::Boolean, true)] {
            let f = Mor::relation(&a, &a, sr, [(lab(&a, 0), lab(&a, 1))]).unwrap();
            let ff = f.add(&f).unwrap();
            let (eq, cx) = f.mor_equal(&ff);
            assert_eq!(eq, expect);
            if let Some(cx) = cx {
                assert_eq!(cx.rhs.as_u64(), Some(2));
                assert_eq!(cx.lhs.as_u64(), Some(1));
            }
        }
    }

    #[test]
    fn bang_basis_and_caps() {
        let a = Obj::letters("A", 1);
        let ba = Obj::bang(&a, Caps::new(2, 2));
        let shown: Vec<String> = ba.basis().iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["[]", "[a]", "[a,a]"]);
        assert_eq!(Obj::bang(&ab(), Caps::new(2, 2)).dim(), 6);
        assert_eq!(Obj::bang(&Obj::letters("E", 0), Caps::new(3, 2)).dim(), 1);
        let bba = Obj::bang(&ba, Caps::new(2, 2));
        // bags of at most two bags with at most two atoms in total
        assert!(bba.contains(&Label::bag(vec![Label::Bag(vec![]), Label::Bag(vec![])])));
        assert!(!bba.contains(&Label::bag(vec![Label::Bag(vec![]); 3])));
        let ext = Obj::ext(&Obj::vectors("V", 2));
        let shown: Vec<String> = ext.basis().iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["{}", "{1}", "{2}", "{1,2}"]);
    }

    #[test]
    fn dump_format() {
        let sr = Semiring::Natural;
        let a = Obj::letters("A", 1);
        let ba = Obj::bang(&a, Caps::new(2, 2));
        let m = Mor::from_entries(&ba, &a, sr, [(ba.basis()[1].clone(), lab(&a, 0), sr.from_u64(3))]).unwrap();
        assert_eq!(m.dump(), "[a]\ta\t3\n");
    }
}
