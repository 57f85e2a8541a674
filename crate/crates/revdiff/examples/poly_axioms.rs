//! The reverse and forward differential axioms on random polynomial maps
//! with rational coefficients, compared symbolically.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use revdiff::crdc::{second_map, SecondMap};
use revdiff::polycrdc::{cdc_from_crdc_check, check_cd_axiom, check_rd_axiom, r_poly, random_poly_map, PolyMap};
use revdiff::crdc::Cartesian;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = random_poly_map(&mut rng, 2, 2, 3, 4);
    println!("f    = {f}");
    println!("R[f] = {}", r_poly(&f));
    let partner = |rng: &mut ChaCha8Rng, k: usize| -> Option<PolyMap> {
        match second_map(k) {
            SecondMap::None => None,
            SecondMap::Parallel => Some(random_poly_map(rng, f.dom(), f.cod(), 3, 4)),
            SecondMap::SameDomain => Some(random_poly_map(rng, f.dom(), 1, 3, 4)),
            SecondMap::Composable => Some(random_poly_map(rng, f.cod(), 1, 3, 4)),
        }
    };
    for k in 1..=7 {
        let g = partner(&mut rng, k);
        let rd = check_rd_axiom(k, &f, g.as_ref()).expect("shapes fit");
        let cd = check_cd_axiom(k, &f, g.as_ref()).expect("shapes fit");
        println!("RD.{k}: {}   CD.{k}: {}", verdict(rd.holds()), verdict(cd.holds()));
    }
    println!("D[f] recovered from R[R[f]]: {}", verdict(cdc_from_crdc_check(&f).holds()));
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "FAILS"
    }
}
