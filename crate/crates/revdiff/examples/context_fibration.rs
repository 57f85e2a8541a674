//! Maps in context: a fibre map g : A → B over context X becomes a coKleisli
//! map E(g) : X×A → B that is linear in A, and E⁻¹ recovers g. The fibre
//! dagger turns g into a map B → A in the same context.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use revdiff::algebra::Semiring;
use revdiff::bang::BangConfig;
use revdiff::cokleisli::{ctx_dagger, ctx_difference, e_functor, e_inv, is_linear_in_context, CtxMor};
use revdiff::model::Model;
use revdiff::wrel::{random_mor, Obj};

fn main() {
    let m = Model::bags(Semiring::Natural, BangConfig::new(3, 2));
    let x = Obj::base("X", &["x"]);
    let a = Obj::letters("A", 1);
    let b = Obj::base("B", &["p"]);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dom = Obj::tensor(&m.bang(&x), &a);
    let body = random_mor(&dom, &b, m.sr, 0.7, &mut rng);
    let g = CtxMor::from_body(&m, &x, &a, &b, &body).expect("well typed");
    println!("== g : !X⊗A -> B");
    print!("{}", g.body().dump());

    let eg = e_functor(&g).expect("E");
    println!("== E(g) : !(X×A) -> B, linear in A: {}", is_linear_in_context(&eg).expect("product domain"));
    print!("{}", eg.body().dump());

    let back = e_inv(&eg).expect("linear in context");
    match ctx_difference(&g, &back).expect("same fibre") {
        None => println!("E⁻¹(E(g)) = g"),
        Some(c) => println!("E⁻¹(E(g)) differs from g: {c}"),
    }

    let gd = ctx_dagger(&g).expect("dagger");
    println!("== g† : !X⊗B -> A");
    print!("{}", gd.body().dump());
}
