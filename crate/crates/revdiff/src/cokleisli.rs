//! The coKleisli category of a model and its context fibration.
//!
//! A [`KlMor`] `A → B` is a lazy body `!A → B`; a [`CtxMor`] over context X
//! is a lazy body `!X⊗A → B`. Both carry a support bound: the body vanishes
//! on bags (or context bags) with more elements. The bound is what keeps
//! composites exact: promotion `δ;!f` never needs more parts than the next
//! map can consume, and transposes only enumerate bags up to the support.

use thiserror::Error;

use crate::algebra::ms_partitions;
use crate::bang::bag_elems;
use crate::map::{expect_compatible, Dual, Map, Row};
use crate::model::{Modality, Model};
use crate::wrel::{add_entry, first_difference, Caps, Counterexample, Label, Mor, Obj, Vector, WrelError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KlError {
    #[error(transparent)]
    Wrel(#[from] WrelError),
    #[error("map is not linear in its context: {0}")]
    NotLinearInContext(Box<Counterexample>),
    #[error("{0}")]
    Shape(String),
}

pub type KlResult<T> = Result<T, KlError>;

#[derive(Clone, Debug)]
pub struct KlMor {
    model: Model,
    dom: Obj,
    cod: Obj,
    map: Map,
    support: usize,
}

/// Largest bag size with a nonzero row.
fn support_of(m: &Mor) -> usize {
    m.rows().keys().map(|l| l.elems().map_or(0, <[Label]>::len)).max().unwrap_or(0)
}

fn cap_support(model: &Model, a: &Obj, s: usize) -> usize {
    match model.modality {
        Modality::Exterior => s.min(a.dim()),
        Modality::Bags(_) => s,
    }
}

impl KlMor {
    pub(crate) fn lazy(model: &Model, dom: &Obj, cod: &Obj, map: Map, support: usize) -> KlMor {
        let support = cap_support(model, dom, support);
        let map = map.retype(&model.bang(dom), cod).with_dual(Dual::Support(support));
        KlMor { model: *model, dom: dom.clone(), cod: cod.clone(), map, support }
    }

    /// A coKleisli map given by its matrix `!A → B`.
    pub fn from_body(model: &Model, dom: &Obj, cod: &Obj, body: &Mor) -> KlResult<KlMor> {
        expect_compatible(body.dom(), &model.bang(dom))?;
        expect_compatible(body.cod(), cod)?;
        if body.semiring() != model.sr {
            return Err(WrelError::SemiringMismatch(body.semiring(), model.sr).into());
        }
        Ok(KlMor::lazy(model, dom, cod, Map::from_mor(body), support_of(body)))
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn dom(&self) -> &Obj {
        &self.dom
    }

    pub fn cod(&self) -> &Obj {
        &self.cod
    }

    pub fn support(&self) -> usize {
        self.support
    }

    pub fn map(&self) -> &Map {
        &self.map
    }

    /// The body on the model's window `!A → B`.
    pub fn body(&self) -> Mor {
        self.map.materialize()
    }

    /// The body on every bag up to the support, whatever the caps.
    pub fn full_body(&self) -> Mor {
        self.map.materialize_on(&self.full_dom(), &self.cod)
    }

    fn full_dom(&self) -> Obj {
        support_obj(&self.model, &self.dom, self.support)
    }

    fn window_dom(&self) -> Obj {
        window_obj(&self.model, &self.dom, self.support)
    }
}

/// `!A` up to `s` elements, but no further than the model's degree cap.
fn window_obj(model: &Model, a: &Obj, s: usize) -> Obj {
    match model.modality {
        Modality::Bags(c) => support_obj(model, a, s.min(c.degree)),
        Modality::Exterior => Obj::ext(a),
    }
}

/// `!A` enumerated up to `s` elements.
fn support_obj(model: &Model, a: &Obj, s: usize) -> Obj {
    match model.modality {
        Modality::Bags(c) => Obj::bang(a, Caps::new(s.max(1), c.outer)),
        Modality::Exterior => Obj::ext(a),
    }
}

/// `δ;!⟦h⟧ : !X → !Y`, exact on everything a consumer of at most `parts`
/// elements can see.
fn promote(h: &KlMor, parts: usize) -> Map {
    let m = h.model;
    let bx = m.bang(&h.dom);
    let delta = match m.modality {
        Modality::Exterior => m.delta(&h.dom),
        Modality::Bags(_) => {
            let (sr, s) = (m.sr, h.support);
            Map::new(&bx, &m.bang(&bx), sr, Dual::Unknown, move |b| {
                let mut v = Vector::new();
                for p in ms_partitions(bag_elems(b), parts, true) {
                    if p.iter().all(|q| q.len() <= s) {
                        add_entry(sr, &mut v, Label::bag(p.into_iter().map(Label::Bag).collect()), sr.one());
                    }
                }
                Row::exact(v)
            })
        }
    };
    delta.then(&m.bang_map(&h.map)).expect("promotion types")
}

fn same_model(f: &Model, g: &Model) -> KlResult<()> {
    if f != g {
        return Err(KlError::Shape("maps come from different models".into()));
    }
    Ok(())
}

/// `⟦f;g⟧ = δ;!⟦f⟧;⟦g⟧`.
pub fn kl_compose(f: &KlMor, g: &KlMor) -> KlResult<KlMor> {
    same_model(&f.model, &g.model)?;
    expect_compatible(&g.dom, &f.cod)?;
    let body = promote(f, g.support).then(&g.map)?;
    Ok(KlMor::lazy(&f.model, &f.dom, &g.cod, body, f.support * g.support))
}

/// `⟦1_A⟧ = ε_A`.
pub fn kl_id(model: &Model, a: &Obj) -> KlMor {
    KlMor::lazy(model, a, a, model.epsilon(a), 1)
}

/// `⟦F(g)⟧ = ε;g` for a base map g.
pub fn kl_lift(model: &Model, g: &Map) -> KlResult<KlMor> {
    let body = model.epsilon(g.dom()).then(g)?;
    Ok(KlMor::lazy(model, g.dom(), g.cod(), body, 1))
}

pub fn kl_zero(model: &Model, a: &Obj, b: &Obj) -> KlMor {
    KlMor::lazy(model, a, b, model.zero(&model.bang(a), b), 0)
}

pub fn kl_add(f: &KlMor, g: &KlMor) -> KlResult<KlMor> {
    same_model(&f.model, &g.model)?;
    let body = f.map.add(&g.map)?;
    Ok(KlMor::lazy(&f.model, &f.dom, &f.cod, body, f.support.max(g.support)))
}

/// `π_i: A×B → A` or `B`.
pub fn kl_proj(model: &Model, a: &Obj, b: &Obj, side: u8) -> KlMor {
    kl_lift(model, &model.proj(a, b, side)).expect("projection types")
}

pub fn kl_inj(model: &Model, a: &Obj, b: &Obj, side: u8) -> KlMor {
    kl_lift(model, &model.inj(a, b, side)).expect("injection types")
}

/// `⟨f, g⟩ = f;ι0 + g;ι1`.
pub fn kl_pair(f: &KlMor, g: &KlMor) -> KlResult<KlMor> {
    same_model(&f.model, &g.model)?;
    expect_compatible(&g.dom, &f.dom)?;
    let m = f.model;
    let l = f.map.then(&m.inj(&f.cod, &g.cod, 0))?;
    let r = g.map.then(&m.inj(&f.cod, &g.cod, 1))?;
    Ok(KlMor::lazy(&m, &f.dom, &Obj::sum(&f.cod, &g.cod), l.add(&r)?, f.support.max(g.support)))
}

/// `f×g = ⟨π0;f, π1;g⟩`.
pub fn kl_product(f: &KlMor, g: &KlMor) -> KlResult<KlMor> {
    let m = f.model;
    let l = kl_compose(&kl_proj(&m, &f.dom, &g.dom, 0), f)?;
    let r = kl_compose(&kl_proj(&m, &f.dom, &g.dom, 1), g)?;
    kl_pair(&l, &r)
}

/// `⟦D[f]⟧ = χ;(1⊗ε);d;⟦f⟧ : !(A×A) → B`.
pub fn forward_d(f: &KlMor) -> KlResult<KlMor> {
    let (m, a) = (f.model, &f.dom);
    let body = Map::chain(&[m.chi(a, a), m.id(&m.bang(a)).tensor(&m.epsilon(a))?, m.d(a), f.map.clone()])?;
    Ok(KlMor::lazy(&m, &Obj::sum(a, a), &f.cod, body, f.support))
}

/// `⟦D[f]⟧ = d°;(!π0⊗π1);d;⟦f⟧`.
pub fn forward_d_via_dcirc(f: &KlMor) -> KlResult<KlMor> {
    let (m, a) = (f.model, &f.dom);
    let aa = Obj::sum(a, a);
    let split = m.bang_map(&m.proj(a, a, 0)).tensor(&m.proj(a, a, 1))?;
    let body = Map::chain(&[m.dcirc(&aa), split, m.d(a), f.map.clone()])?;
    Ok(KlMor::lazy(&m, &aa, &f.cod, body, f.support))
}

/// `⟦R[f]⟧ = χ;(1⊗ε);(1⊗⟦f⟧*);r : !(A×B) → A`.
pub fn reverse_r(f: &KlMor) -> KlResult<KlMor> {
    let (m, a, b) = (f.model, &f.dom, &f.cod);
    let ba = m.bang(a);
    let body = Map::chain(&[
        m.chi(a, b),
        m.id(&ba).tensor(&m.epsilon(b))?,
        m.id(&ba).tensor(&f.map.transpose()?)?,
        m.r(a),
    ])?;
    Ok(KlMor::lazy(&m, &Obj::sum(a, b), a, body, f.support))
}

/// `R[f] = D[f]^{†[A]}`, through the fibration isomorphism.
pub fn reverse_r_via_dagger(f: &KlMor) -> KlResult<KlMor> {
    let df = forward_d(f)?;
    let ctx = e_inv_unchecked(&df)?;
    e_functor(&ctx_dagger(&ctx)?)
}

/// `χ;(1⊗ε);(1⊗∩_A⊗1_B);(d⊗σ_{A,B});(⟦f⟧⊗1⊗1);(∪_B⊗1_A)`.
pub fn reverse_r_via_cupcap(f: &KlMor) -> KlResult<KlMor> {
    let (m, a, b) = (f.model, &f.dom, &f.cod);
    let ba = m.bang(a);
    let body = Map::chain(&[
        m.chi(a, b),
        m.id(&ba).tensor(&m.epsilon(b))?,
        m.id(&ba).tensor(&m.cap(a))?.tensor(&m.id(b))?,
        m.d(a).tensor(&m.sym(a, b))?,
        f.map.tensor(&m.id(b))?.tensor(&m.id(a))?,
        m.cup(b).tensor(&m.id(a))?,
    ])?;
    Ok(KlMor::lazy(&m, &Obj::sum(a, b), a, body, f.support))
}

fn compare(lhs: &Map, rhs: &Map, dom: &Obj, cod: &Obj) -> Option<Counterexample> {
    let l = lhs.materialize_on(dom, cod);
    let r = rhs.materialize_on(dom, cod);
    first_difference(l.semiring(), l.rows(), r.rows())
}

/// Witness against `d°;(!0⊗1);d;⟦f⟧ = ⟦f⟧`.
pub fn linear_witness(f: &KlMor) -> Option<Counterexample> {
    let (m, a) = (f.model, &f.dom);
    let kill = m.bang_map(&m.zero(a, a)).tensor(&m.id(a)).expect("types");
    let lhs = Map::chain(&[m.dcirc(a), kill, m.d(a), f.map.clone()]).expect("types");
    compare(&lhs, &f.map, &f.window_dom(), &f.cod)
}

/// Witness against `⟦f⟧ = ε;η;⟦f⟧`.
pub fn linear_witness_eta(f: &KlMor) -> Option<Counterexample> {
    let (m, a) = (f.model, &f.dom);
    let lhs = Map::chain(&[m.epsilon(a), m.eta(a), f.map.clone()]).expect("types");
    compare(&lhs, &f.map, &f.window_dom(), &f.cod)
}

pub fn is_linear(f: &KlMor) -> bool {
    linear_witness(f).is_none()
}

/// Witness against `d°;(!π0⊗π1);(!ι0⊗ι1);d;⟦f⟧ = ⟦f⟧` for `f: X×A → B`.
pub fn linear_in_context_witness(f: &KlMor) -> KlResult<Option<Counterexample>> {
    let m = f.model;
    let (x, a) = f.dom.summands().ok_or_else(|| KlError::Shape(format!("{} is not a product", f.dom)))?;
    let xa = f.dom.clone();
    let lhs = Map::chain(&[
        m.dcirc(&xa),
        m.bang_map(&m.proj(x, a, 0)).tensor(&m.proj(x, a, 1))?,
        m.bang_map(&m.inj(x, a, 0)).tensor(&m.inj(x, a, 1))?,
        m.d(&xa),
        f.map.clone(),
    ])?;
    Ok(compare(&lhs, &f.map, &f.window_dom(), &f.cod))
}

pub fn is_linear_in_context(f: &KlMor) -> KlResult<bool> {
    Ok(linear_in_context_witness(f)?.is_none())
}

#[derive(Clone, Debug)]
pub struct CtxMor {
    model: Model,
    ctx: Obj,
    dom: Obj,
    cod: Obj,
    map: Map,
    support: usize,
}

impl CtxMor {
    pub(crate) fn lazy(model: &Model, ctx: &Obj, dom: &Obj, cod: &Obj, map: Map, support: usize) -> CtxMor {
        let support = cap_support(model, ctx, support);
        let map = map.retype(&Obj::tensor(&model.bang(ctx), dom), cod);
        CtxMor { model: *model, ctx: ctx.clone(), dom: dom.clone(), cod: cod.clone(), map, support }
    }

    /// A fibre map given by its matrix `!X⊗A → B`.
    pub fn from_body(model: &Model, ctx: &Obj, dom: &Obj, cod: &Obj, body: &Mor) -> KlResult<CtxMor> {
        expect_compatible(body.dom(), &Obj::tensor(&model.bang(ctx), dom))?;
        expect_compatible(body.cod(), cod)?;
        let s = body.rows().keys().map(|l| bag_len(&l.split_at(1).0)).max().unwrap_or(0);
        Ok(CtxMor::lazy(model, ctx, dom, cod, Map::from_mor(body), s))
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn ctx(&self) -> &Obj {
        &self.ctx
    }

    pub fn dom(&self) -> &Obj {
        &self.dom
    }

    pub fn cod(&self) -> &Obj {
        &self.cod
    }

    pub fn support(&self) -> usize {
        self.support
    }

    pub fn map(&self) -> &Map {
        &self.map
    }

    pub fn body(&self) -> Mor {
        self.map.materialize()
    }

    pub fn full_body(&self) -> Mor {
        let dom = Obj::tensor(&support_obj(&self.model, &self.ctx, self.support), &self.dom);
        self.map.materialize_on(&dom, &self.cod)
    }
}

fn bag_len(l: &Label) -> usize {
    l.elems().map_or(0, <[Label]>::len)
}

fn same_ctx(f: &CtxMor, g: &CtxMor) -> KlResult<()> {
    same_model(&f.model, &g.model)?;
    expect_compatible(&g.ctx, &f.ctx)?;
    Ok(())
}

/// `e_X ⊗ 1_A`.
pub fn ctx_id(model: &Model, x: &Obj, a: &Obj) -> CtxMor {
    ctx_lift(model, x, &model.id(a))
}

/// `e_X ⊗ f` for a base map f.
pub fn ctx_lift(model: &Model, x: &Obj, f: &Map) -> CtxMor {
    let body = model.counit(x).tensor(f).expect("same semiring");
    CtxMor::lazy(model, x, f.dom(), f.cod(), body, 0)
}

/// `(Δ_X⊗1_A);(1⊗f);g`.
pub fn ctx_compose(f: &CtxMor, g: &CtxMor) -> KlResult<CtxMor> {
    same_ctx(f, g)?;
    expect_compatible(&g.dom, &f.cod)?;
    let m = f.model;
    let bx = m.bang(&f.ctx);
    let body = Map::chain(&[m.comult(&f.ctx).tensor(&m.id(&f.dom))?, m.id(&bx).tensor(&f.map)?, g.map.clone()])?;
    Ok(CtxMor::lazy(&m, &f.ctx, &f.dom, &g.cod, body, f.support + g.support))
}

/// `(δ;!⟦h⟧ ⊗ 1_A);f` for `h: X → Y` and f over Y.
pub fn ctx_substitute(h: &KlMor, f: &CtxMor) -> KlResult<CtxMor> {
    same_model(&h.model, &f.model)?;
    expect_compatible(&f.ctx, &h.cod)?;
    let m = f.model;
    let body = promote(h, f.support).tensor(&m.id(&f.dom))?.then(&f.map)?;
    Ok(CtxMor::lazy(&m, &h.dom, &f.dom, &f.cod, body, h.support * f.support))
}

/// `(Δ_X⊗1_A⊗1_C);(1⊗σ_{!X,A}⊗1_C);(f⊗g)`.
pub fn ctx_tensor(f: &CtxMor, g: &CtxMor) -> KlResult<CtxMor> {
    same_ctx(f, g)?;
    let m = f.model;
    let bx = m.bang(&f.ctx);
    let body = Map::chain(&[
        m.comult(&f.ctx).tensor(&m.id(&f.dom))?.tensor(&m.id(&g.dom))?,
        m.id(&bx).tensor(&m.sym(&bx, &f.dom))?.tensor(&m.id(&g.dom))?,
        f.map.tensor(&g.map)?,
    ])?;
    let dom = Obj::tensor(&f.dom, &g.dom);
    let cod = Obj::tensor(&f.cod, &g.cod);
    Ok(CtxMor::lazy(&m, &f.ctx, &dom, &cod, body, f.support + g.support))
}

/// `(1⊗∩_A⊗1_B);(f⊗σ_{A,B});(∪_B⊗1_A) : !X⊗B → A`.
pub fn ctx_dagger(f: &CtxMor) -> KlResult<CtxMor> {
    let m = f.model;
    let (a, b) = (&f.dom, &f.cod);
    let bx = m.bang(&f.ctx);
    let body = Map::chain(&[
        m.id(&bx).tensor(&m.cap(a))?.tensor(&m.id(b))?,
        f.map.tensor(&m.sym(a, b))?,
        m.cup(b).tensor(&m.id(a))?,
    ])?;
    Ok(CtxMor::lazy(&m, &f.ctx, b, a, body, f.support))
}

/// Whether f has the form `e_X ⊗ g`: the body vanishes off the empty context.
pub fn is_cartesian(f: &CtxMor) -> bool {
    f.full_body().rows().keys().all(|l| bag_len(&l.split_at(1).0) == 0)
}

/// `E(g) = d°;(!π0⊗π1);g : X×A → B`.
pub fn e_functor(g: &CtxMor) -> KlResult<KlMor> {
    let m = g.model;
    let (x, a) = (&g.ctx, &g.dom);
    let xa = Obj::sum(x, a);
    let body = Map::chain(&[m.dcirc(&xa), m.bang_map(&m.proj(x, a, 0)).tensor(&m.proj(x, a, 1))?, g.map.clone()])?;
    Ok(KlMor::lazy(&m, &xa, &g.cod, body, g.support + 1))
}

fn e_inv_unchecked(f: &KlMor) -> KlResult<CtxMor> {
    let m = f.model;
    let (x, a) = f.dom.summands().ok_or_else(|| KlError::Shape(format!("{} is not a product", f.dom)))?;
    let body = Map::chain(&[m.bang_map(&m.inj(x, a, 0)).tensor(&m.inj(x, a, 1))?, m.d(&f.dom), f.map.clone()])?;
    Ok(CtxMor::lazy(&m, x, a, &f.cod, body, f.support.saturating_sub(1)))
}

/// `E⁻¹(⟦g⟧) = (!ι0⊗ι1);d;⟦g⟧`; only defined on maps linear in context.
pub fn e_inv(f: &KlMor) -> KlResult<CtxMor> {
    if let Some(w) = linear_in_context_witness(f)? {
        return Err(KlError::NotLinearInContext(Box::new(w)));
    }
    e_inv_unchecked(f)
}

/// First entry where two coKleisli maps differ, over bags up to the larger
/// support and the degree cap.
pub fn kl_difference(f: &KlMor, g: &KlMor) -> KlResult<Option<Counterexample>> {
    same_model(&f.model, &g.model)?;
    expect_compatible(&g.dom, &f.dom)?;
    expect_compatible(&g.cod, &f.cod)?;
    let dom = window_obj(&f.model, &f.dom, f.support.max(g.support));
    Ok(compare(&f.map, &g.map, &dom, &f.cod))
}

pub fn ctx_difference(f: &CtxMor, g: &CtxMor) -> KlResult<Option<Counterexample>> {
    same_ctx(f, g)?;
    expect_compatible(&g.dom, &f.dom)?;
    expect_compatible(&g.cod, &f.cod)?;
    let dom = Obj::tensor(&window_obj(&f.model, &f.ctx, f.support.max(g.support)), &f.dom);
    Ok(compare(&f.map, &g.map, &dom, &f.cod))
}

/// The Cartesian left additive structure maps on A, as coKleisli maps.
#[derive(Clone, Debug)]
pub struct ClaOps {
    pub inj0: KlMor,
    pub inj1: KlMor,
    pub sum_map: KlMor,
    pub lift_ell: KlMor,
    pub interchange_c: KlMor,
}

pub fn cartesian_left_additive_ops(model: &Model, a: &Obj) -> ClaOps {
    let m = model;
    let aa = Obj::sum(a, a);
    let aaaa = Obj::sum(&aa, &aa);
    let sr = m.sr;
    let plus = m.proj(a, a, 0).add(&m.proj(a, a, 1)).expect("same type");
    // ι0×ι1 sends the first copy into the first pair, the second into the second
    let ell = Map::from_fn(&aa, &aaaa, sr, Dual::Graded, move |l| {
        let (i, x) = l.as_tag().expect("tagged");
        [(Label::tag(i, Label::tag(i, x.clone())), sr.one())].into_iter().collect()
    });
    let c = Map::from_fn(&aaaa, &aaaa, sr, Dual::Graded, move |l| {
        let (i, y) = l.as_tag().expect("tagged");
        let (j, x) = y.as_tag().expect("tagged");
        [(Label::tag(j, Label::tag(i, x.clone())), sr.one())].into_iter().collect()
    });
    let lift = |g: &Map| kl_lift(m, g).expect("base map types");
    ClaOps {
        inj0: kl_inj(m, a, a, 0),
        inj1: kl_inj(m, a, a, 1),
        sum_map: lift(&plus),
        lift_ell: lift(&ell),
        interchange_c: lift(&c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Semiring;
    use crate::bang::BangConfig;
    use crate::wrel::random_mor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn boolean() -> Model {
        Model::bags(Semiring::Boolean, BangConfig::new(3, 2))
    }

    fn random_kl(m: &Model, a: &Obj, b: &Obj, rng: &mut ChaCha8Rng) -> KlMor {
        let body = random_mor(&m.bang(a), b, m.sr, 0.4, rng);
        KlMor::from_body(m, a, b, &body).unwrap()
    }

    fn same(f: &KlMor, g: &KlMor) {
        assert_eq!(kl_difference(f, g).unwrap(), None);
    }

    fn same_ctx_mor(f: &CtxMor, g: &CtxMor) {
        assert_eq!(ctx_difference(f, g).unwrap(), None);
    }

    fn rows(f: &KlMor) -> Vec<String> {
        f.full_body().entries().map(|(a, c, _)| format!("{a}->{c}")).collect()
    }

    #[test]
    fn composition_laws() {
        let m = boolean();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = Obj::letters("A", 2);
        let f = random_kl(&m, &a, &a, &mut rng);
        same(&kl_compose(&kl_id(&m, &a), &f).unwrap(), &f);
        same(&kl_compose(&f, &kl_id(&m, &a)).unwrap(), &f);
        let g = random_kl(&m, &a, &a, &mut rng);
        let h = random_kl(&m, &a, &a, &mut rng);
        let l = kl_compose(&kl_compose(&f, &g).unwrap(), &h).unwrap();
        let r = kl_compose(&f, &kl_compose(&g, &h).unwrap()).unwrap();
        same(&l, &r);
        let b1 = Map::from_mor(&random_mor(&a, &a, m.sr, 0.5, &mut rng));
        let b2 = Map::from_mor(&random_mor(&a, &a, m.sr, 0.5, &mut rng));
        let lifted = kl_compose(&kl_lift(&m, &b1).unwrap(), &kl_lift(&m, &b2).unwrap()).unwrap();
        same(&lifted, &kl_lift(&m, &b1.then(&b2).unwrap()).unwrap());
    }

    #[test]
    fn forward_examples() {
        let m = boolean();
        let a = Obj::base("A", &["a"]);
        let b = Obj::base("B", &["b"]);
        let body = Mor::relation(&m.bang(&a), &b, m.sr, [(Label::Bag(vec![a.basis()[0].clone()]), b.basis()[0].clone())]).unwrap();
        let f = KlMor::from_body(&m, &a, &b, &body).unwrap();
        assert_eq!(rows(&forward_d(&f).unwrap()), ["[a.1]->b"]);
        same(&forward_d(&f).unwrap(), &forward_d_via_dcirc(&f).unwrap());
        same(&forward_d(&kl_id(&m, &a)).unwrap(), &kl_proj(&m, &a, &a, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a2 = Obj::letters("A", 2);
        let f = random_kl(&m, &a2, &b, &mut rng);
        let g = random_kl(&m, &a2, &b, &mut rng);
        let lhs = forward_d(&kl_add(&f, &g).unwrap()).unwrap();
        let rhs = kl_add(&forward_d(&f).unwrap(), &forward_d(&g).unwrap()).unwrap();
        same(&lhs, &rhs);
    }

    #[test]
    fn reverse_examples() {
        let m = boolean();
        let a = Obj::base("A", &["a"]);
        let b = Obj::base("B", &["b"]);
        let body = Mor::relation(&m.bang(&a), &b, m.sr, [(Label::Bag(vec![a.basis()[0].clone()]), b.basis()[0].clone())]).unwrap();
        let f = KlMor::from_body(&m, &a, &b, &body).unwrap();
        assert_eq!(rows(&reverse_r(&f).unwrap()), ["[b.1]->a"]);
        same(&reverse_r(&kl_id(&m, &a)).unwrap(), &kl_proj(&m, &a, &a, 1));
        let a2 = Obj::letters("A", 2);
        let pi0 = kl_proj(&m, &a2, &b, 0);
        let expected = kl_compose(&kl_proj(&m, &Obj::sum(&a2, &b), &a2, 1), &kl_inj(&m, &a2, &b, 0)).unwrap();
        same(&reverse_r(&pi0).unwrap(), &expected);
    }

    #[test]
    fn three_reverse_constructions_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bm = boolean();
        let nm = Model::bags(Semiring::Natural, BangConfig::new(3, 2));
        let em = Model::exterior();
        let cases = [
            (bm, Obj::letters("A", 1), Obj::letters("B", 1)),
            (bm, Obj::letters("A", 2), Obj::letters("B", 1)),
            (nm, Obj::letters("A", 2), Obj::letters("B", 2)),
            (em, Obj::vectors("V", 2), Obj::vectors("W", 2)),
        ];
        for (m, a, b) in cases {
            for _ in 0..3 {
                let f = random_kl(&m, &a, &b, &mut rng);
                let r = reverse_r(&f).unwrap();
                same(&r, &reverse_r_via_dagger(&f).unwrap());
                same(&r, &reverse_r_via_cupcap(&f).unwrap());
            }
            let z = kl_zero(&m, &a, &b);
            assert!(reverse_r_via_dagger(&z).unwrap().full_body().is_zero());
        }
    }

    #[test]
    fn linearity() {
        let m = boolean();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = Obj::letters("A", 2);
        let b = Obj::letters("B", 1);
        let g = Map::from_mor(&random_mor(&a, &b, m.sr, 0.6, &mut rng));
        let lifted = kl_lift(&m, &g).unwrap();
        assert!(is_linear(&lifted));
        assert!(linear_witness_eta(&lifted).is_none());
        let everything = Mor::relation(&m.bang(&a), &b, m.sr, m.bang(&a).basis().iter().map(|l| (l.clone(), b.basis()[0].clone()))).unwrap();
        let constant = KlMor::from_body(&m, &a, &b, &everything).unwrap();
        assert!(!is_linear(&constant));
        assert!(linear_witness_eta(&constant).is_some());
        assert!(is_linear(&kl_zero(&m, &a, &b)));
    }

    #[test]
    fn linearity_in_context() {
        let m = boolean();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = Obj::letters("X", 1);
        let a = Obj::letters("A", 2);
        let b = Obj::letters("B", 1);
        let body = random_mor(&Obj::tensor(&m.bang(&x), &a), &b, m.sr, 0.4, &mut rng);
        let g = CtxMor::from_body(&m, &x, &a, &b, &body).unwrap();
        let eg = e_functor(&g).unwrap();
        assert!(is_linear_in_context(&eg).unwrap());
        same_ctx_mor(&e_inv(&eg).unwrap(), &g);
        let back = e_functor(&e_inv(&eg).unwrap()).unwrap();
        same(&back, &eg);
        assert!(is_linear_in_context(&kl_proj(&m, &x, &a, 1)).unwrap());
        let xa = Obj::sum(&x, &a);
        let c = Mor::relation(&m.bang(&xa), &b, m.sr, [(Label::Bag(vec![]), b.basis()[0].clone())]).unwrap();
        let constant = KlMor::from_body(&m, &xa, &b, &c).unwrap();
        assert!(!is_linear_in_context(&constant).unwrap());
        assert!(matches!(e_inv(&constant), Err(KlError::NotLinearInContext(_))));
        let id = e_functor(&ctx_id(&m, &x, &a)).unwrap();
        same(&id, &kl_proj(&m, &x, &a, 1));
    }

    #[test]
    fn exterior_fibration_roundtrip() {
        let m = Model::exterior();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = Obj::vectors("X", 2);
        let a = Obj::vectors("A", 2);
        let b = Obj::vectors("B", 1);
        let body = random_mor(&Obj::tensor(&m.bang(&x), &a), &b, m.sr, 0.5, &mut rng);
        let g = CtxMor::from_body(&m, &x, &a, &b, &body).unwrap();
        same_ctx_mor(&e_inv(&e_functor(&g).unwrap()).unwrap(), &g);
    }

    #[test]
    fn fibre_structure() {
        let m = boolean();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let x = Obj::letters("X", 1);
        let a = Obj::letters("A", 2);
        let b = Obj::letters("B", 2);
        let body = random_mor(&Obj::tensor(&m.bang(&x), &a), &b, m.sr, 0.3, &mut rng);
        let f = CtxMor::from_body(&m, &x, &a, &b, &body).unwrap();
        same_ctx_mor(&ctx_compose(&ctx_id(&m, &x, &a), &f).unwrap(), &f);
        same_ctx_mor(&ctx_compose(&f, &ctx_id(&m, &x, &b)).unwrap(), &f);
        same_ctx_mor(&ctx_substitute(&kl_id(&m, &x), &f).unwrap(), &f);
        let t = ctx_tensor(&ctx_id(&m, &x, &a), &ctx_id(&m, &x, &b)).unwrap();
        same_ctx_mor(&t, &ctx_id(&m, &x, &Obj::tensor(&a, &b)));
        same_ctx_mor(&ctx_dagger(&ctx_dagger(&f).unwrap()).unwrap(), &f);
        same_ctx_mor(&ctx_dagger(&ctx_id(&m, &x, &a)).unwrap(), &ctx_id(&m, &x, &a));
        let p0 = ctx_lift(&m, &x, &m.proj(&a, &b, 0));
        same_ctx_mor(&ctx_dagger(&p0).unwrap(), &ctx_lift(&m, &x, &m.inj(&a, &b, 0)));
        assert!(is_cartesian(&p0));
        assert!(!is_cartesian(&f) || f.support() == 0);
    }

    #[test]
    fn cartesian_left_additive_structure() {
        let m = boolean();
        let a = Obj::letters("A", 2);
        let ops = cartesian_left_additive_ops(&m, &a);
        same(&kl_compose(&ops.inj0, &kl_proj(&m, &a, &a, 0)).unwrap(), &kl_id(&m, &a));
        same(&ops.sum_map, &kl_add(&kl_proj(&m, &a, &a, 0), &kl_proj(&m, &a, &a, 1)).unwrap());
        let aa = Obj::sum(&a, &a);
        same(&kl_compose(&ops.interchange_c, &ops.interchange_c).unwrap(), &kl_id(&m, &Obj::sum(&aa, &aa)));
        let ell = kl_product(&ops.inj0, &ops.inj1).unwrap();
        same(&ell, &ops.lift_ell);
    }
}
