//! Property tests for the algebraic invariants of each layer.

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use revdiff::algebra::{bag_removals, bag_splits, bag_union, enumerate_bags, shuffle_coeff, Bag, Semiring, Value};
use revdiff::crdc::Cartesian;
use revdiff::polycrdc::{parse_poly_in, r_poly, random_poly_map};
use revdiff::smoothcrdc::{fd_gradient_check, r_expr, random_expr_map, random_point, ExprMap};
use revdiff::wrel::{biproduct, cap, cup, identity, random_mor, zero, Mor, Obj};

const SEMIRINGS: [Semiring; 4] = [Semiring::Boolean, Semiring::Natural, Semiring::Gf2, Semiring::Rational];

fn bag(alphabet: usize) -> impl Strategy<Value = Bag> {
    prop::collection::vec(0..alphabet, 0..6).prop_map(move |e| Bag::new(alphabet, e).unwrap())
}

fn semiring() -> impl Strategy<Value = Semiring> {
    prop::sample::select(SEMIRINGS.to_vec())
}

fn value(sr: Semiring, rng: &mut ChaCha8Rng) -> Value {
    use rand::Rng;
    if rng.gen_bool(0.2) {
        sr.zero()
    } else {
        sr.sample_nonzero(rng)
    }
}

/// Small objects with distinct names, so that mismatched types are caught.
fn objs() -> [Obj; 4] {
    [Obj::letters("A", 2), Obj::base("B", &["p", "q", "r"]), Obj::base("C", &["u"]), Obj::letters("D", 3)]
}

fn rand_mor(dom: &Obj, cod: &Obj, sr: Semiring, rng: &mut ChaCha8Rng) -> Mor {
    random_mor(dom, cod, sr, 0.5, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_count_is_product_of_multiplicities(b in bag(3)) {
        let want: usize = (0..3).map(|x| b.multiplicity(x) + 1).product();
        prop_assert_eq!(bag_splits(&b).len(), want);
    }

    #[test]
    fn union_is_a_commutative_monoid(x in bag(3), y in bag(3), z in bag(3)) {
        let u = |p: &Bag, q: &Bag| bag_union(p, q).unwrap();
        prop_assert_eq!(u(&u(&x, &y), &z), u(&x, &u(&y, &z)));
        prop_assert_eq!(u(&x, &y), u(&y, &x));
        prop_assert_eq!(u(&x, &Bag::empty(3)), x);
    }

    #[test]
    fn shuffles_are_symmetric_and_associative(x in bag(3), y in bag(3), z in bag(3)) {
        let u = |p: &Bag, q: &Bag| bag_union(p, q).unwrap();
        prop_assert_eq!(shuffle_coeff(&x, &y), shuffle_coeff(&y, &x));
        prop_assert_eq!(
            shuffle_coeff(&u(&x, &y), &z) * shuffle_coeff(&x, &y),
            shuffle_coeff(&x, &u(&y, &z)) * shuffle_coeff(&y, &z)
        );
        prop_assert!(shuffle_coeff(&x, &y) >= BigUint::from(1u32));
    }

    #[test]
    fn semiring_laws(sr in semiring(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (value(sr, &mut rng), value(sr, &mut rng), value(sr, &mut rng));
        prop_assert_eq!(sr.add(&sr.add(&a, &b), &c), sr.add(&a, &sr.add(&b, &c)));
        prop_assert_eq!(sr.mul(&sr.mul(&a, &b), &c), sr.mul(&a, &sr.mul(&b, &c)));
        prop_assert_eq!(sr.add(&a, &b), sr.add(&b, &a));
        prop_assert_eq!(sr.mul(&a, &b), sr.mul(&b, &a));
        prop_assert_eq!(sr.mul(&a, &sr.add(&b, &c)), sr.add(&sr.mul(&a, &b), &sr.mul(&a, &c)));
        prop_assert_eq!(sr.add(&a, &sr.zero()), a.clone());
        prop_assert_eq!(sr.mul(&a, &sr.one()), a.clone());
        prop_assert!(sr.is_zero(&sr.mul(&a, &sr.zero())));
    }

    #[test]
    fn enumeration_is_duplicate_free_and_closed(alphabet in 0usize..4, degree in 0usize..5) {
        let all = enumerate_bags(alphabet, degree);
        let set: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        prop_assert_eq!(set.len(), all.len());
        for b in &all {
            prop_assert!(b.degree() <= degree);
            for (_, rest, _) in bag_removals(b) {
                prop_assert!(set.contains(&rest));
            }
        }
    }

    #[test]
    fn category_laws(sr in semiring(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c, d] = objs();
        let f = rand_mor(&a, &b, sr, &mut rng);
        let g = rand_mor(&b, &c, sr, &mut rng);
        let h = rand_mor(&c, &d, sr, &mut rng);
        let fg_h = f.compose(&g).unwrap().compose(&h).unwrap();
        let f_gh = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(fg_h, f_gh);
        prop_assert_eq!(identity(&a, sr).compose(&f).unwrap(), f.clone());
        prop_assert_eq!(f.compose(&identity(&b, sr)).unwrap(), f);
    }

    #[test]
    fn interchange(sr in semiring(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c, d] = objs();
        let f = rand_mor(&a, &b, sr, &mut rng);
        let g = rand_mor(&c, &d, sr, &mut rng);
        let h = rand_mor(&b, &c, sr, &mut rng);
        let k = rand_mor(&d, &a, sr, &mut rng);
        let lhs = f.tensor(&g).unwrap().compose(&h.tensor(&k).unwrap()).unwrap();
        let rhs = f.compose(&h).unwrap().tensor(&g.compose(&k).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_is_bilinear(sr in semiring(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c, _] = objs();
        let f = rand_mor(&a, &b, sr, &mut rng);
        let f2 = rand_mor(&a, &b, sr, &mut rng);
        let g = rand_mor(&b, &c, sr, &mut rng);
        let g2 = rand_mor(&b, &c, sr, &mut rng);
        let left = f.add(&f2).unwrap().compose(&g).unwrap();
        prop_assert_eq!(left, f.compose(&g).unwrap().add(&f2.compose(&g).unwrap()).unwrap());
        let right = f.compose(&g.add(&g2).unwrap()).unwrap();
        prop_assert_eq!(right, f.compose(&g).unwrap().add(&f.compose(&g2).unwrap()).unwrap());
        prop_assert!(zero(&a, &b, sr).compose(&g).unwrap().is_zero());
        prop_assert!(f.compose(&zero(&b, &c, sr)).unwrap().is_zero());
    }

    #[test]
    fn compact_closed_equations(sr in semiring(), seed in any::<u64>(), which in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = objs()[which].clone();
        let b = objs()[(which + 1) % 4].clone();
        let id = identity(&a, sr);
        let snake = id.tensor(&cap(&a, sr)).unwrap().compose(&cup(&a, sr).tensor(&id).unwrap()).unwrap();
        prop_assert_eq!(snake, id.clone());
        // twist: σ;∪ = ∪
        let twist = revdiff::wrel::symmetry(&a, &a, sr).compose(&cup(&a, sr)).unwrap();
        prop_assert_eq!(twist, cup(&a, sr));
        // sliding: (f⊗1);∪_B = (1⊗f*);∪_A
        let f = rand_mor(&a, &b, sr, &mut rng);
        let lhs = f.tensor(&identity(&b, sr)).unwrap().compose(&cup(&b, sr)).unwrap();
        let rhs = identity(&a, sr).tensor(&f.star()).unwrap().compose(&cup(&a, sr)).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.star().star(), f);
    }

    #[test]
    fn projections_transpose_to_injections(sr in semiring(), which in 0usize..4) {
        let a = objs()[which].clone();
        let b = objs()[(which + 2) % 4].clone();
        let bp = biproduct(&a, &b, sr);
        prop_assert_eq!(bp.proj0.star(), bp.inj0);
        prop_assert_eq!(bp.proj1.star(), bp.inj1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reverse_polynomial_is_linear_in_the_cotangent(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly_map(&mut rng, n, m, 3, 5);
        for c in r_poly(&f).components() {
            prop_assert!(c.is_linear_in(n..n + m), "{} is not linear in the cotangent", c);
        }
    }

    #[test]
    fn expression_and_polynomial_reverse_agree(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly_map(&mut rng, n, m, 3, 5);
        let via_expr = r_expr(&ExprMap::from_poly(&f)).to_poly().expect("polynomial");
        prop_assert_eq!(via_expr, r_poly(&f));
    }

    #[test]
    fn polynomials_print_and_parse_back(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly_map(&mut rng, n, m, 3, 5);
        prop_assert_eq!(parse_poly_in(&f.to_string(), f.dom()).unwrap(), f);
    }

    #[test]
    fn reverse_expression_matches_finite_differences(seed in any::<u64>(), n in 1usize..=3, depth in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_expr_map(&mut rng, n, 1, depth);
        let p = random_point(&mut rng, n);
        let err = fd_gradient_check(&f, &p).unwrap();
        prop_assert!(err <= 1e-5, "{} at {:?}: {:e}", f, p, err);
    }
}
