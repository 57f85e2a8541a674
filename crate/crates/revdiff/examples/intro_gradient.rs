//! Forward and reverse derivative of f(x1, x2) = x1^2*x2 + sin(x2).
//!
//! R[f] at (x, t) is t times the gradient, so with t = 1 it should match the
//! hand-computed gradient (2*x1*x2, x1^2 + cos(x2)).

use revdiff::smoothcrdc::{d_expr, parse_expr, r_expr};

fn main() {
    let f = parse_expr("x1^2*x2 + sin(x2)").expect("parses");
    let df = d_expr(&f);
    let rf = r_expr(&f);
    println!("f     = {f}");
    println!("D[f]  = {df}   (x3, x4 are the tangent)");
    println!("R[f]  = {rf}   (x3 is the cotangent)");

    for &(x1, x2) in &[(1.0, 0.0), (0.5, 2.0), (-1.5, 1.0)] {
        let got = rf.eval(&[x1, x2, 1.0]).expect("finite");
        let hand = [2.0 * x1 * x2, x1 * x1 + f64::cos(x2)];
        println!("x = ({x1}, {x2}): R[f](x, 1) = {got:?}, by hand {hand:?}");
    }
}
