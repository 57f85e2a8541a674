//! The exterior-algebra modality on finite-basis GF(2) vector spaces.
//!
//! `!V` has one basis vector per subset of the basis of V; wedges with a
//! repeated vector vanish and, in characteristic two, no signs appear.
//! Everything here is exact: δ has finitely many terms since a set of
//! subsets contains the empty subset at most once.

use crate::algebra::Semiring;
use crate::map::{Map, Row};
use crate::model::Model;
use crate::wrel::{add_entry, Label, Mor, Obj, Vector, WrelError};

pub(crate) fn set_elems(l: &Label) -> &[Label] {
    match l {
        Label::Set(e) => e,
        other => panic!("expected a set label, got {other}"),
    }
}

fn single(l: Label) -> Vector {
    [(l, Semiring::Gf2.one())].into_iter().collect()
}

fn disjoint_union(a: &[Label], b: &[Label]) -> Option<Label> {
    Label::set(a.iter().chain(b).cloned().collect())
}

pub(crate) fn epsilon_row(s: &Label) -> Vector {
    match set_elems(s) {
        [x] => single(x.clone()),
        _ => Vector::new(),
    }
}

pub(crate) fn counit_row(s: &Label) -> Vector {
    if set_elems(s).is_empty() {
        single(Label::Unit)
    } else {
        Vector::new()
    }
}

pub(crate) fn comult_row(s: &Label) -> Vector {
    let e = set_elems(s);
    let mut v = Vector::new();
    for mask in 0u64..(1 << e.len()) {
        let (l, r): (Vec<_>, Vec<_>) = e.iter().enumerate().partition(|(i, _)| mask >> i & 1 == 1);
        let l = Label::Set(l.into_iter().map(|(_, x)| x.clone()).collect());
        let r = Label::Set(r.into_iter().map(|(_, x)| x.clone()).collect());
        v.insert(Label::pair(l, r), Semiring::Gf2.one());
    }
    v
}

pub(crate) fn nabla_row(st: &Label) -> Vector {
    let (s, t) = st.split_at(1);
    match disjoint_union(set_elems(&s), set_elems(&t)) {
        Some(u) => single(u),
        None => Vector::new(),
    }
}

pub(crate) fn unit_row() -> Vector {
    single(Label::Set(Vec::new()))
}

/// Set partitions of S into nonempty blocks; the empty wedge also goes to
/// the one-block family {{}}.
pub(crate) fn delta_row(s: &Label) -> Vector {
    let mut v = Vector::new();
    if set_elems(s).is_empty() {
        v.insert(Label::Set(vec![Label::Set(Vec::new())]), Semiring::Gf2.one());
    }
    for blocks in set_partitions(set_elems(s)) {
        let blocks: Vec<Label> = blocks.into_iter().map(Label::Set).collect();
        add_entry(Semiring::Gf2, &mut v, Label::set(blocks).expect("distinct blocks"), Semiring::Gf2.one());
    }
    v
}

fn set_partitions(e: &[Label]) -> Vec<Vec<Vec<Label>>> {
    let Some((first, rest)) = e.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first.clone());
            out.push(q);
        }
        let mut q = p;
        q.push(vec![first.clone()]);
        out.push(q);
    }
    out
}

pub(crate) fn d_row(sv: &Label) -> Vector {
    let (s, x) = sv.split_at(1);
    match disjoint_union(set_elems(&s), std::slice::from_ref(&x)) {
        Some(u) => single(u),
        None => Vector::new(),
    }
}

pub(crate) fn dcirc_row(s: &Label) -> Vector {
    let e = set_elems(s);
    let mut v = Vector::new();
    for (i, x) in e.iter().enumerate() {
        let mut rest = e.to_vec();
        rest.remove(i);
        v.insert(Label::pair(Label::Set(rest), x.clone()), Semiring::Gf2.one());
    }
    v
}

pub(crate) fn eta_row(x: &Label) -> Vector {
    single(Label::Set(vec![x.clone()]))
}

pub(crate) fn r_row(st: &Label) -> Vector {
    let (s, t) = st.split_at(1);
    let (s, t) = (set_elems(&s), set_elems(&t));
    if t.len() != s.len() + 1 || !s.iter().all(|x| t.contains(x)) {
        return Vector::new();
    }
    let x = t.iter().find(|y| !s.contains(y)).expect("one extra element");
    single(x.clone())
}

pub(crate) fn r_star_row(inner: &Obj, x: &Label) -> Vector {
    let mut v = Vector::new();
    for s in Obj::ext(inner).basis() {
        if let Some(t) = disjoint_union(set_elems(s), std::slice::from_ref(x)) {
            v.insert(Label::pair(s.clone(), t), Semiring::Gf2.one());
        }
    }
    v
}

/// `!f` sends a wedge to the wedge of the images.
pub(crate) fn bang_map_row(f: &Map, s: &Label) -> Row {
    let sr = Semiring::Gf2;
    let mut acc = unit_row();
    let mut trunc = None;
    for x in set_elems(s) {
        let fx = f.row(x);
        crate::map::join(&mut trunc, &fx.trunc);
        let mut next = Vector::new();
        for (p, a) in &acc {
            for (y, c) in &fx.v {
                if let Some(u) = disjoint_union(set_elems(p), std::slice::from_ref(y)) {
                    add_entry(sr, &mut next, u, sr.mul(a, c));
                }
            }
        }
        acc = next;
    }
    Row { v: acc, trunc }
}

/// `!V` for V with basis v1..vn.
pub fn ext_bang_obj(n: usize) -> Obj {
    Obj::ext(&Obj::vectors("V", n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtName {
    Delta,
    Epsilon,
    Comult,
    Counit,
    Nabla,
    Unit,
    D,
    R,
    Cup,
    Cap,
}

impl std::str::FromStr for ExtName {
    type Err = WrelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "delta" => ExtName::Delta,
            "epsilon" => ExtName::Epsilon,
            "comult" => ExtName::Comult,
            "counit" => ExtName::Counit,
            "nabla" => ExtName::Nabla,
            "unit" => ExtName::Unit,
            "d" => ExtName::D,
            "r" => ExtName::R,
            "cup" => ExtName::Cup,
            "cap" => ExtName::Cap,
            _ => return Err(WrelError::UnknownMap(s.to_string())),
        })
    }
}

/// Structure maps on `!V`, dim V = n; `cup` and `cap` are those of `!V`.
pub fn ext_structure(name: ExtName, n: usize) -> Mor {
    let m = Model::exterior();
    let v = Obj::vectors("V", n);
    let bv = m.bang(&v);
    match name {
        ExtName::Delta => m.delta(&v),
        ExtName::Epsilon => m.epsilon(&v),
        ExtName::Comult => m.comult(&v),
        ExtName::Counit => m.counit(&v),
        ExtName::Nabla => m.nabla(&v),
        ExtName::Unit => m.unit(&v),
        ExtName::D => m.d(&v),
        ExtName::R => m.r(&v),
        ExtName::Cup => m.cup(&bv),
        ExtName::Cap => m.cap(&bv),
    }
    .materialize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wrel::identity;

    fn set(v: &Obj, idx: &[usize]) -> Label {
        Label::set(idx.iter().map(|&i| v.basis()[i - 1].clone()).collect()).unwrap()
    }

    #[test]
    fn basis() {
        let names: Vec<String> = ext_bang_obj(2).basis().iter().map(|l| l.to_string()).collect();
        assert_eq!(names, ["{}", "{1}", "{2}", "{1,2}"]);
        assert_eq!(ext_bang_obj(0).dim(), 1);
        assert_eq!(ext_bang_obj(3).dim(), 8);
    }

    #[test]
    fn d_and_r_examples() {
        let v = Obj::vectors("V", 3);
        let one = Semiring::Gf2.one();
        let d = ext_structure(ExtName::D, 3);
        assert_eq!(d.get(&Label::pair(set(&v, &[1]), v.basis()[1].clone()), &set(&v, &[1, 2])), one);
        assert!(d.row(&Label::pair(set(&v, &[1]), v.basis()[0].clone())).is_none());
        let r = ext_structure(ExtName::R, 3);
        assert_eq!(r.get(&Label::pair(set(&v, &[1]), set(&v, &[1, 2])), &v.basis()[1]), one);
        assert!(r.row(&Label::pair(set(&v, &[1]), set(&v, &[2, 3]))).is_none());
    }

    #[test]
    fn delta_is_exact() {
        let d = ext_structure(ExtName::Delta, 2);
        assert!(!d.is_truncated());
        // {1,2}: partitions {{1,2}} and {{1},{2}}
        assert_eq!(d.row(&set(&Obj::vectors("V", 2), &[1, 2])).unwrap().len(), 2);
        // {}: the empty family and {{}}
        assert_eq!(d.row(&Label::Set(vec![])).unwrap().len(), 2);
    }

    #[test]
    fn d_and_r_roundtrip() {
        let m = Model::exterior();
        for n in 0..=3 {
            let v = Obj::vectors("V", n);
            let r = m.r_from_d(&m.d(&v), &v).unwrap().materialize();
            assert_eq!(r, ext_structure(ExtName::R, n));
            let d = m.d_from_r(&m.r(&v), &v).unwrap().materialize();
            assert_eq!(d, ext_structure(ExtName::D, n));
            assert_eq!(m.d(&v).transpose().unwrap().materialize(), m.dcirc(&v).materialize());
        }
    }

    #[test]
    fn seely_roundtrip() {
        let m = Model::exterior();
        for (p, q) in [(1, 1), (2, 1), (2, 2), (3, 1), (0, 2)] {
            let (a, b) = (Obj::vectors("V", p), Obj::vectors("W", q));
            let there = m.chi(&a, &b).then(&m.chi_inv(&a, &b)).unwrap().materialize();
            assert_eq!(there, identity(there.dom(), Semiring::Gf2));
            let back = m.chi_inv(&a, &b).then(&m.chi(&a, &b)).unwrap().materialize();
            assert_eq!(back, identity(back.dom(), Semiring::Gf2));
        }
    }

    #[test]
    fn cup_cap_snake() {
        let m = Model::exterior();
        let bv = m.bang(&Obj::vectors("V", 2));
        let snake = m
            .id(&bv)
            .tensor(&m.cap(&bv))
            .unwrap()
            .then(&m.cup(&bv).tensor(&m.id(&bv)).unwrap())
            .unwrap()
            .materialize();
        assert_eq!(snake, identity(&bv, Semiring::Gf2));
        assert_eq!(ext_structure(ExtName::Cap, 2).nnz(), 4);
    }
}
