//! Lazily evaluated morphisms.
//!
//! A [`Map`] is a memoised row function `label -> sparse vector`. Rows are
//! computed from formulas on any label, including labels beyond the caps
//! of the domain object, so composites are exact; caps only limit which
//! rows get enumerated. A row records whether it touched a generator with
//! infinite fan-out (the cap on a bag object, or the parts cap of δ).

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::algebra::{ms_enumerate, Semiring};
use crate::wrel::{add_entry, axpy, within_caps, Caps, Label, Mor, Obj, Shape, Vector, WrelError, WrelResult};

/// Why a row may be missing terms: the first generator on the way that
/// cut an infinite fan-out, and where.
pub type Cut = Option<Arc<str>>;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Row {
    pub v: Vector,
    pub trunc: Cut,
}

impl Row {
    pub fn exact(v: Vector) -> Row {
        Row { v, trunc: None }
    }

    pub fn cut(v: Vector, why: String) -> Row {
        Row { v, trunc: Some(why.into()) }
    }

    pub fn is_cut(&self) -> bool {
        self.trunc.is_some()
    }
}

pub(crate) fn join(a: &mut Cut, b: &Cut) {
    if a.is_none() {
        a.clone_from(b);
    }
}

type RowFn = dyn Fn(&Label) -> Row + Send + Sync;

/// How the transpose of a map can be computed exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dual {
    /// Every entry preserves the atom count, so preimages of a label have
    /// the same number of atoms.
    Graded,
    /// Rows vanish on bags of more than this many atoms.
    Support(usize),
    /// Domain is finite and plain.
    Finite,
    Unknown,
}

#[derive(Clone)]
pub struct Map {
    dom: Obj,
    cod: Obj,
    sr: Semiring,
    dual: Dual,
    f: Arc<RowFn>,
    memo: Arc<Mutex<HashMap<Label, Row>>>,
}

impl std::fmt::Debug for Map {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Map({} → {})", self.dom, self.cod)
    }
}

/// Objects that differ only in their caps describe the same morphisms.
pub fn compatible(a: &Obj, b: &Obj) -> bool {
    let c = Caps::new(1, 1);
    a.with_caps(c) == b.with_caps(c)
}

pub fn expect_compatible(found: &Obj, expected: &Obj) -> WrelResult<()> {
    if !compatible(found, expected) {
        return Err(WrelError::ObjMismatch { expected: expected.to_string(), found: found.to_string() });
    }
    Ok(())
}

/// Domain labels that may reach a given codomain label.
type Candidates = Arc<dyn Fn(&Label) -> Vec<Label> + Send + Sync>;

impl Map {
    pub fn new<F>(dom: &Obj, cod: &Obj, sr: Semiring, dual: Dual, f: F) -> Map
    where
        F: Fn(&Label) -> Row + Send + Sync + 'static,
    {
        Map { dom: dom.clone(), cod: cod.clone(), sr, dual, f: Arc::new(f), memo: Arc::new(Mutex::new(HashMap::new())) }
    }

    /// Map with exact rows given as `label -> [(label, coefficient)]`.
    pub fn from_fn<F>(dom: &Obj, cod: &Obj, sr: Semiring, dual: Dual, f: F) -> Map
    where
        F: Fn(&Label) -> Vector + Send + Sync + 'static,
    {
        Map::new(dom, cod, sr, dual, move |l| Row::exact(f(l)))
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

    pub fn dual(&self) -> Dual {
        self.dual
    }

    pub fn with_dual(mut self, dual: Dual) -> Map {
        self.dual = dual;
        self
    }

    /// Same rows, viewed between other (cap-compatible) objects.
    pub fn retype(&self, dom: &Obj, cod: &Obj) -> Map {
        let mut m = self.clone();
        m.dom = dom.clone();
        m.cod = cod.clone();
        m
    }

    pub fn row(&self, l: &Label) -> Row {
        if let Some(r) = self.memo.lock().expect("memo lock").get(l) {
            return r.clone();
        }
        let r = (self.f)(l);
        self.memo.lock().expect("memo lock").insert(l.clone(), r.clone());
        r
    }

    /// Wraps a finite matrix; rows outside its support are zero.
    pub fn from_mor(m: &Mor) -> Map {
        let rows = m.rows().clone();
        let trunc = m.truncated_rows().clone();
        let dual = if m.entries().all(|(a, c, _)| a.atoms() == c.atoms()) {
            Dual::Graded
        } else if m.dom().has_modality() {
            let s = rows.keys().map(Label::atoms).max().unwrap_or(0);
            Dual::Support(s)
        } else {
            Dual::Finite
        };
        Map::new(m.dom(), m.cod(), m.semiring(), dual, move |l| Row {
            v: rows.get(l).cloned().unwrap_or_default(),
            trunc: trunc.contains(l).then(|| Arc::from(format!("stored row {l} was cut"))),
        })
    }

    pub fn identity(a: &Obj, sr: Semiring) -> Map {
        Map::from_fn(a, a, sr, Dual::Graded, move |l| [(l.clone(), sr.one())].into_iter().collect())
    }

    pub fn zero(a: &Obj, b: &Obj, sr: Semiring) -> Map {
        Map::from_fn(a, b, sr, Dual::Graded, |_| Vector::new())
    }

    /// The swap `A⊗B → B⊗A`.
    pub fn symmetry(a: &Obj, b: &Obj, sr: Semiring) -> Map {
        let k = a.arity();
        let dom = Obj::tensor(a, b);
        let cod = Obj::tensor(b, a);
        Map::from_fn(&dom, &cod, sr, Dual::Graded, move |l| {
            let (x, y) = l.split_at(k);
            [(Label::pair(y, x), sr.one())].into_iter().collect()
        })
    }

    /// Diagrammatic composite `self ; g`.
    pub fn then(&self, g: &Map) -> WrelResult<Map> {
        expect_compatible(&g.dom, &self.cod)?;
        if self.sr != g.sr {
            return Err(WrelError::SemiringMismatch(self.sr, g.sr));
        }
        let (f, g2) = (self.clone(), g.clone());
        let sr = self.sr;
        let dual = match (self.dual, g.dual) {
            (Dual::Graded, Dual::Graded) => Dual::Graded,
            (Dual::Support(s), _) => Dual::Support(s),
            (Dual::Finite, _) => Dual::Finite,
            _ => Dual::Unknown,
        };
        Ok(Map::new(&self.dom, &g.cod, sr, dual, move |l| {
            let r = f.row(l);
            let mut acc = Vector::new();
            let mut trunc = r.trunc;
            for (b, v) in &r.v {
                let rb = g2.row(b);
                join(&mut trunc, &rb.trunc);
                axpy(sr, &mut acc, v, &rb.v);
            }
            Row { v: acc, trunc }
        }))
    }

    /// Composite of a non-empty chain.
    pub fn chain(maps: &[Map]) -> WrelResult<Map> {
        let (first, rest) = maps.split_first().expect("non-empty chain");
        rest.iter().try_fold(first.clone(), |acc, m| acc.then(m))
    }

    pub fn tensor(&self, g: &Map) -> WrelResult<Map> {
        if self.sr != g.sr {
            return Err(WrelError::SemiringMismatch(self.sr, g.sr));
        }
        let k = self.dom.arity();
        let (f, g2) = (self.clone(), g.clone());
        let sr = self.sr;
        let dual = match (self.dual, g.dual) {
            (Dual::Graded, Dual::Graded) => Dual::Graded,
            (Dual::Finite, Dual::Finite) => Dual::Finite,
            _ => Dual::Unknown,
        };
        Ok(Map::new(&Obj::tensor(&self.dom, &g.dom), &Obj::tensor(&self.cod, &g.cod), sr, dual, move |l| {
            let (x, y) = l.split_at(k);
            let rx = f.row(&x);
            if rx.v.is_empty() {
                return Row { v: Vector::new(), trunc: rx.trunc };
            }
            let ry = g2.row(&y);
            let mut acc = Vector::new();
            for (c, v) in &rx.v {
                for (d, w) in &ry.v {
                    add_entry(sr, &mut acc, Label::pair(c.clone(), d.clone()), sr.mul(v, w));
                }
            }
            let mut trunc = rx.trunc;
            join(&mut trunc, &ry.trunc);
            Row { v: acc, trunc }
        }))
    }

    pub fn add(&self, g: &Map) -> WrelResult<Map> {
        expect_compatible(&g.dom, &self.dom)?;
        expect_compatible(&g.cod, &self.cod)?;
        let (f, g2) = (self.clone(), g.clone());
        let sr = self.sr;
        let dual = if self.dual == g.dual { self.dual } else { Dual::Unknown };
        let dual = match (self.dual, g.dual) {
            (Dual::Support(a), Dual::Support(b)) => Dual::Support(a.max(b)),
            _ => dual,
        };
        Ok(Map::new(&self.dom, &self.cod, sr, dual, move |l| {
            let a = f.row(l);
            let b = g2.row(l);
            let mut acc = a.v;
            for (c, v) in b.v {
                add_entry(sr, &mut acc, c, v);
            }
            let mut trunc = a.trunc;
            join(&mut trunc, &b.trunc);
            Row { v: acc, trunc }
        }))
    }

    /// Exact transpose, when the dual kind allows one.
    pub fn transpose(&self) -> WrelResult<Map> {
        let dom = self.dom.clone();
        let f = self.clone();
        let sr = self.sr;
        let candidates: Candidates = match self.dual {
            Dual::Graded => {
                let parts = parts_cap(&dom);
                let d2 = dom.clone();
                Arc::new(move |c: &Label| graded_labels(&d2, c.atoms(), parts))
            }
            Dual::Support(s) => {
                let all = dom.with_caps(Caps::new(s, parts_cap(&dom))).basis().to_vec();
                Arc::new(move |_: &Label| all.clone())
            }
            Dual::Finite => {
                let all = dom.basis().to_vec();
                Arc::new(move |_: &Label| all.clone())
            }
            Dual::Unknown => {
                return Err(WrelError::ObjMismatch {
                    expected: "a map with a computable transpose".into(),
                    found: format!("{} → {}", self.dom, self.cod),
                })
            }
        };
        let dual = match self.dual {
            Dual::Graded => Dual::Graded,
            _ => Dual::Unknown,
        };
        Ok(Map::new(&self.cod, &self.dom, sr, dual, move |c| {
            let mut acc = Vector::new();
            let mut trunc = None;
            for a in candidates(c) {
                let r = f.row(&a);
                join(&mut trunc, &r.trunc);
                if let Some(v) = r.v.get(c) {
                    add_entry(sr, &mut acc, a, v.clone());
                }
            }
            Row { v: acc, trunc }
        }))
    }

    /// Rows over the whole basis of the domain; entries outside the
    /// codomain's caps are dropped and those rows flagged.
    pub fn materialize(&self) -> Mor {
        self.materialize_on(&self.dom.clone(), &self.cod.clone())
    }

    pub fn materialize_on(&self, dom: &Obj, cod: &Obj) -> Mor {
        let mut m = Mor::zero(dom, cod, self.sr);
        for a in dom.basis() {
            let r = self.row(a);
            if r.is_cut() {
                m.mark_truncated(a.clone());
            }
            m.set_row(a.clone(), r.v);
        }
        m
    }
}

/// The parts cap of the first bag object found inside `o`.
pub fn parts_cap(o: &Obj) -> usize {
    match o.shape() {
        Shape::Bang(_, c) => c.parts,
        Shape::Tensor(v) => v.iter().map(parts_cap).max().unwrap_or(1),
        Shape::Sum(a, b) => parts_cap(a).max(parts_cap(b)),
        Shape::Ext(a) => parts_cap(a),
        _ => 1,
    }
}

/// All labels of `o` with exactly `n` atoms. Bags of zero-atom labels are
/// bounded by `parts` elements.
pub fn graded_labels(o: &Obj, n: usize, parts: usize) -> Vec<Label> {
    match o.shape() {
        Shape::Unit => {
            if n == 0 {
                vec![Label::Unit]
            } else {
                vec![]
            }
        }
        Shape::Base(_) => {
            if n == 1 {
                o.basis().to_vec()
            } else {
                vec![]
            }
        }
        Shape::Tensor(v) => {
            let mut out: Vec<(Vec<Label>, usize)> = vec![(Vec::new(), n)];
            for (i, a) in v.iter().enumerate() {
                let last = i + 1 == v.len();
                let mut next = Vec::new();
                for (prefix, left) in &out {
                    let range: Vec<usize> = if last { vec![*left] } else { (0..=*left).collect() };
                    for m in range {
                        for x in graded_labels(a, m, parts) {
                            let mut p = prefix.clone();
                            p.push(x);
                            next.push((p, left - m));
                        }
                    }
                }
                out = next;
            }
            out.into_iter().map(|(p, _)| Label::Tuple(p)).collect()
        }
        Shape::Sum(a, b) => graded_labels(a, n, parts)
            .into_iter()
            .map(|x| Label::tag(0, x))
            .chain(graded_labels(b, n, parts).into_iter().map(|y| Label::tag(1, y)))
            .collect(),
        Shape::Bang(a, caps) => {
            let caps = Caps::new(n, caps.parts.max(parts));
            let mut cands: Vec<Label> = (0..=n).flat_map(|m| graded_labels(a, m, parts)).collect();
            cands.sort();
            let max_len = if a.has_modality() { caps.parts } else { n };
            ms_enumerate(&cands, max_len)
                .into_iter()
                .map(Label::Bag)
                .filter(|l| l.atoms() == n && within_caps(l, caps))
                .collect()
        }
        Shape::Ext(a) => {
            let cands: Vec<Label> = (0..=n).flat_map(|m| graded_labels(a, m, parts)).collect();
            let mut out = Vec::new();
            subsets_with_atoms(&cands, 0, n, &mut Vec::new(), &mut out);
            out
        }
    }
}

fn subsets_with_atoms(c: &[Label], from: usize, left: usize, cur: &mut Vec<Label>, out: &mut Vec<Label>) {
    if from == c.len() {
        if left == 0 {
            out.push(Label::Set(cur.clone()));
        }
        return;
    }
    subsets_with_atoms(c, from + 1, left, cur, out);
    let k = c[from].atoms();
    if k <= left {
        cur.push(c[from].clone());
        subsets_with_atoms(c, from + 1, left - k, cur, out);
        cur.pop();
    }
}
