//! Gradient descent on (x1 - 3)^2 + 2*(x2 + 1)^2, with the step direction
//! read off R[loss] at cotangent 1.

use revdiff::smoothcrdc::{gradient_descent, parse_expr};

fn main() {
    let loss = parse_expr("(x1 - 3)^2 + 2*(x2 + 1)^2").expect("parses");
    let path = gradient_descent(&loss, &[0.0, 0.0], 0.1, 60).expect("converges");
    for s in path.iter().step_by(10) {
        println!("step {:>3}  x = ({:.6}, {:.6})  loss = {:.3e}", s.step, s.x[0], s.x[1], s.loss);
    }
    // too large a rate makes the iterates blow up, which is reported
    match gradient_descent(&loss, &[0.0, 0.0], 2.0, 2000) {
        Ok(_) => println!("lr 2.0 did not diverge"),
        Err(e) => println!("lr 2.0: {e}"),
    }
}
