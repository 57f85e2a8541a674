//! The reverse derivative of a coKleisli map built three ways: from the
//! reverse deriving transformation r, as the fibre dagger of the forward
//! derivative, and by bending wires with cups and caps. Over the naturals
//! all three agree entry by entry.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use revdiff::algebra::Semiring;
use revdiff::bang::BangConfig;
use revdiff::cokleisli::{kl_difference, reverse_r, reverse_r_via_cupcap, reverse_r_via_dagger, KlMor};
use revdiff::model::Model;
use revdiff::wrel::{random_mor, Obj};

fn main() {
    let m = Model::bags(Semiring::Natural, BangConfig::new(3, 2));
    let a = Obj::letters("A", 1);
    let b = Obj::base("B", &["p"]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..5 {
        let body = random_mor(&m.bang(&a), &b, m.sr, 0.6, &mut rng);
        let f = KlMor::from_body(&m, &a, &b, &body).expect("well typed");
        let r1 = reverse_r(&f).expect("r");
        let r2 = reverse_r_via_dagger(&f).expect("dagger");
        let r3 = reverse_r_via_cupcap(&f).expect("cup/cap");
        println!("== map {i}: body !A -> B");
        print!("{}", body.dump());
        println!("-- R[f] from r");
        print!("{}", r1.body().dump());
        let agree = |g: &KlMor| match kl_difference(&r1, g).expect("comparable") {
            None => "agrees".to_string(),
            Some(c) => format!("differs: {c}"),
        };
        println!("dagger construction {}; cup/cap construction {}", agree(&r2), agree(&r3));
    }
}
