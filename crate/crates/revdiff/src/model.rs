//! A model of the modality: a semiring together with either the truncated
//! bag exponential or the exterior algebra. Every generator is a lazy
//! [`Map`] built from the row formulas in `bang` and `ext2`.

use serde::{Deserialize, Serialize};

use crate::algebra::Semiring;
use crate::bang::{self, BangConfig, CoeffPolicy};
use crate::ext2;
use crate::map::{Dual, Map, Row};
use crate::wrel::{Caps, Label, Obj, Vector, WrelResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modality {
    Bags(BangConfig),
    Exterior,
}

/// A deliberate defect in one structure map, for checking that the law
/// harness notices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// d forgets the rows `([], x)`.
    DropEmptyD,
    /// ε also sends two-element bags to their first element.
    EpsilonOnPairs,
    /// r forgets the rows with an empty first bag.
    REmptyFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Model {
    pub sr: Semiring,
    pub modality: Modality,
    pub fault: Option<Fault>,
}

fn single(sr: Semiring, l: Label) -> Vector {
    [(l, sr.one())].into_iter().collect()
}

impl Model {
    pub fn bags(sr: Semiring, cfg: BangConfig) -> Model {
        Model { sr, modality: Modality::Bags(cfg), fault: None }
    }

    pub fn exterior() -> Model {
        Model { sr: Semiring::Gf2, modality: Modality::Exterior, fault: None }
    }

    pub fn with_fault(self, fault: Option<Fault>) -> Model {
        Model { fault, ..self }
    }

    pub fn is_exterior(&self) -> bool {
        matches!(self.modality, Modality::Exterior)
    }

    pub fn config(&self) -> Option<BangConfig> {
        match self.modality {
            Modality::Bags(c) => Some(c),
            Modality::Exterior => None,
        }
    }

    pub fn policy(&self) -> CoeffPolicy {
        self.config().map(|c| c.policy).unwrap_or_default()
    }

    /// Caps of bag objects; the exterior model has none, these only bound
    /// the nested part counts reported in windows.
    pub fn caps(&self) -> Caps {
        match self.modality {
            Modality::Bags(c) => c.caps(),
            Modality::Exterior => Caps::new(usize::MAX, usize::MAX),
        }
    }

    /// The same model with both caps raised by one.
    pub fn bumped(&self) -> Model {
        match self.modality {
            Modality::Bags(c) => Model::bags(self.sr, c.bumped()).with_fault(self.fault),
            Modality::Exterior => *self,
        }
    }

    pub fn bang(&self, a: &Obj) -> Obj {
        match self.modality {
            Modality::Bags(c) => Obj::bang(a, c.caps()),
            Modality::Exterior => Obj::ext(a),
        }
    }

    fn graded<F>(&self, dom: &Obj, cod: &Obj, f: F) -> Map
    where
        F: Fn(&Label) -> Vector + Send + Sync + 'static,
    {
        Map::from_fn(dom, cod, self.sr, Dual::Graded, f)
    }

    pub fn id(&self, a: &Obj) -> Map {
        Map::identity(a, self.sr)
    }

    pub fn sym(&self, a: &Obj, b: &Obj) -> Map {
        Map::symmetry(a, b, self.sr)
    }

    pub fn zero(&self, a: &Obj, b: &Obj) -> Map {
        Map::zero(a, b, self.sr)
    }

    pub fn epsilon(&self, a: &Obj) -> Map {
        let sr = self.sr;
        let row: fn(Semiring, &Label) -> Vector = match self.modality {
            Modality::Bags(_) => bang::epsilon_row,
            Modality::Exterior => |_, l| ext2::epsilon_row(l),
        };
        if self.fault == Some(Fault::EpsilonOnPairs) {
            return self.graded(&self.bang(a), a, move |l| match l.elems() {
                Some([x, _]) => single(sr, x.clone()),
                _ => row(sr, l),
            });
        }
        self.graded(&self.bang(a), a, move |l| row(sr, l))
    }

    pub fn counit(&self, a: &Obj) -> Map {
        let sr = self.sr;
        match self.modality {
            Modality::Bags(_) => self.graded(&self.bang(a), &Obj::unit(), move |l| bang::counit_row(sr, l)),
            Modality::Exterior => self.graded(&self.bang(a), &Obj::unit(), ext2::counit_row),
        }
    }

    pub fn comult(&self, a: &Obj) -> Map {
        let (sr, p) = (self.sr, self.policy());
        let ba = self.bang(a);
        let cod = Obj::tensor(&ba, &ba);
        match self.modality {
            Modality::Bags(_) => self.graded(&ba, &cod, move |l| bang::comult_row(sr, &p, l)),
            Modality::Exterior => self.graded(&ba, &cod, ext2::comult_row),
        }
    }

    pub fn nabla(&self, a: &Obj) -> Map {
        let (sr, p) = (self.sr, self.policy());
        let ba = self.bang(a);
        let dom = Obj::tensor(&ba, &ba);
        match self.modality {
            Modality::Bags(_) => self.graded(&dom, &ba, move |l| bang::nabla_row(sr, &p, l)),
            Modality::Exterior => self.graded(&dom, &ba, ext2::nabla_row),
        }
    }

    pub fn unit(&self, a: &Obj) -> Map {
        let sr = self.sr;
        match self.modality {
            Modality::Bags(_) => self.graded(&Obj::unit(), &self.bang(a), move |_| bang::unit_row(sr)),
            Modality::Exterior => self.graded(&Obj::unit(), &self.bang(a), |_| ext2::unit_row()),
        }
    }

    pub fn delta(&self, a: &Obj) -> Map {
        let sr = self.sr;
        let ba = self.bang(a);
        let bba = self.bang(&ba);
        match self.modality {
            Modality::Bags(c) => Map::new(&ba, &bba, sr, Dual::Graded, move |l| bang::delta_row(sr, c.outer, l)),
            Modality::Exterior => self.graded(&ba, &bba, ext2::delta_row),
        }
    }

    /// d: !A⊗A → !A.
    pub fn d(&self, a: &Obj) -> Map {
        let (sr, p) = (self.sr, self.policy());
        let ba = self.bang(a);
        let dom = Obj::tensor(&ba, a);
        let (drop_empty, modality) = (self.fault == Some(Fault::DropEmptyD), self.modality);
        let row = move |l: &Label| match modality {
            _ if drop_empty && l.split_at(1).0.elems().is_some_and(<[Label]>::is_empty) => Vector::new(),
            Modality::Bags(_) => bang::d_row(sr, &p, l),
            Modality::Exterior => ext2::d_row(l),
        };
        self.graded(&dom, &ba, row)
    }

    /// d°: !A → !A⊗A.
    pub fn dcirc(&self, a: &Obj) -> Map {
        let (sr, p) = (self.sr, self.policy());
        let ba = self.bang(a);
        let cod = Obj::tensor(&ba, a);
        match self.modality {
            Modality::Bags(_) => self.graded(&ba, &cod, move |l| bang::dcirc_row(sr, &p, l)),
            Modality::Exterior => self.graded(&ba, &cod, ext2::dcirc_row),
        }
    }

    /// η: A → !A.
    pub fn eta(&self, a: &Obj) -> Map {
        let (sr, p) = (self.sr, self.policy());
        match self.modality {
            Modality::Bags(_) => self.graded(a, &self.bang(a), move |l| bang::eta_row(sr, &p, l)),
            Modality::Exterior => self.graded(a, &self.bang(a), ext2::eta_row),
        }
    }

    /// r: !A⊗!A → A.
    pub fn r(&self, a: &Obj) -> Map {
        let (sr, p) = (self.sr, self.policy());
        let ba = self.bang(a);
        let dom = Obj::tensor(&ba, &ba);
        let empty_first = self.fault == Some(Fault::REmptyFirst);
        let modality = self.modality;
        let f = move |l: &Label| match modality {
            _ if empty_first && l.split_at(1).0.elems().is_some_and(<[Label]>::is_empty) => Vector::new(),
            Modality::Bags(_) => bang::r_row(sr, &p, l),
            Modality::Exterior => ext2::r_row(l),
        };
        Map::from_fn(&dom, a, sr, Dual::Unknown, f)
    }

    /// Transpose of r, A → !A⊗!A; cut at the degree cap for bags.
    pub fn r_star(&self, a: &Obj) -> Map {
        let (sr, p) = (self.sr, self.policy());
        let ba = self.bang(a);
        let cod = Obj::tensor(&ba, &ba);
        let inner = a.clone();
        match self.modality {
            Modality::Bags(c) => {
                Map::new(a, &cod, sr, Dual::Unknown, move |l| bang::r_star_row(sr, &p, &inner, c.caps(), l))
            }
            Modality::Exterior => Map::from_fn(a, &cod, sr, Dual::Unknown, move |l| ext2::r_star_row(&inner, l)),
        }
    }

    /// `!f` for `f: A → B`.
    pub fn bang_map(&self, f: &Map) -> Map {
        let (sr, p) = (self.sr, self.policy());
        let dual = if f.dual() == Dual::Graded { Dual::Graded } else { Dual::Unknown };
        let f2 = f.clone();
        let (dom, cod) = (self.bang(f.dom()), self.bang(f.cod()));
        match self.modality {
            Modality::Bags(_) => Map::new(&dom, &cod, sr, dual, move |l| bang::bang_map_row(sr, &p, &f2, l)),
            Modality::Exterior => Map::new(&dom, &cod, sr, dual, move |l| ext2::bang_map_row(&f2, l)),
        }
    }

    pub fn proj(&self, a: &Obj, b: &Obj, side: u8) -> Map {
        let sr = self.sr;
        let cod = if side == 0 { a } else { b };
        self.graded(&Obj::sum(a, b), cod, move |l| match l.as_tag() {
            Some((i, x)) if i == side => single(sr, x.clone()),
            _ => Vector::new(),
        })
    }

    pub fn inj(&self, a: &Obj, b: &Obj, side: u8) -> Map {
        let sr = self.sr;
        let dom = if side == 0 { a } else { b };
        self.graded(dom, &Obj::sum(a, b), move |l| single(sr, Label::tag(side, l.clone())))
    }

    /// χ = Δ;(!π0⊗!π1): !(A⊕B) → !A⊗!B.
    pub fn chi(&self, a: &Obj, b: &Obj) -> Map {
        let ab = Obj::sum(a, b);
        let projs = self.bang_map(&self.proj(a, b, 0)).tensor(&self.bang_map(&self.proj(a, b, 1))).expect("same semiring");
        self.comult(&ab).then(&projs).expect("χ types")
    }

    /// χ⁻¹ = (!ι0⊗!ι1);∇.
    pub fn chi_inv(&self, a: &Obj, b: &Obj) -> Map {
        let ab = Obj::sum(a, b);
        let injs = self.bang_map(&self.inj(a, b, 0)).tensor(&self.bang_map(&self.inj(a, b, 1))).expect("same semiring");
        injs.then(&self.nabla(&ab)).expect("χ⁻¹ types")
    }

    /// ∪_A: A⊗A → k.
    pub fn cup(&self, a: &Obj) -> Map {
        let sr = self.sr;
        let dual = if a.has_bags() { Dual::Unknown } else { Dual::Finite };
        let k = a.arity();
        Map::from_fn(&Obj::tensor(a, a), &Obj::unit(), sr, dual, move |l| {
            let (x, y) = l.split_at(k);
            if x == y {
                single(sr, Label::Unit)
            } else {
                Vector::new()
            }
        })
    }

    /// ∩_A: k → A⊗A; cut at the caps when A holds bags.
    pub fn cap(&self, a: &Obj) -> Map {
        let sr = self.sr;
        let trunc = a.has_bags().then(|| std::sync::Arc::from(format!("∩ on {a}: basis beyond the caps dropped")));
        let a2 = a.clone();
        Map::new(&Obj::unit(), &Obj::tensor(a, a), sr, Dual::Finite, move |_| {
            let v = a2.basis().iter().map(|x| (Label::pair(x.clone(), x.clone()), sr.one())).collect();
            Row { v, trunc: trunc.clone() }
        })
    }

    /// `r = (1⊗∩_A⊗1);(d⊗σ);(∪_{!A}⊗1)` for any `d: !A⊗A → !A`.
    pub fn r_from_d(&self, d: &Map, a: &Obj) -> WrelResult<Map> {
        let ba = self.bang(a);
        Map::chain(&[
            self.id(&ba).tensor(&self.cap(a))?.tensor(&self.id(&ba))?,
            d.tensor(&self.sym(a, &ba))?,
            self.cup(&ba).tensor(&self.id(a))?,
        ])
    }

    /// `d = (1⊗∩_{!A}⊗1);(r⊗σ);(∪_A⊗1)` for any `r: !A⊗!A → A`.
    pub fn d_from_r(&self, r: &Map, a: &Obj) -> WrelResult<Map> {
        let ba = self.bang(a);
        Map::chain(&[
            self.id(&ba).tensor(&self.cap(&ba))?.tensor(&self.id(a))?,
            r.tensor(&self.sym(&ba, a))?,
            self.cup(a).tensor(&self.id(&ba))?,
        ])
    }
}
