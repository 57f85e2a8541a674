//! Finite, exactly computable models of reverse differential categories.
//!
//! The crate builds weighted-relation models of the multiset exponential
//! (Boolean, natural-number and GF(2) coefficients) and the exterior
//! algebra over GF(2), the forward and reverse differential combinators on
//! their coKleisli categories, and a harness that evaluates the axioms of
//! differential and reverse differential categories as matrix equalities.
//! Two Cartesian models sit beside them: exact polynomial maps and
//! elementary-function expressions, with reverse-mode derivatives and a
//! small gradient-descent driver.
//!
//! Runnable entry points live in `examples/`:
//!
//! - `cargo run --example intro_gradient`: forward and reverse derivative of
//!   `x1^2*x2 + sin(x2)`.
//! - `cargo run --example structure_maps`: dumps of d, r, δ, χ on bags.
//! - `cargo run --example exterior_model`: the GF(2) exterior algebra model.
//! - `cargo run --example law_suite`: run law suites and print reports.
//! - `cargo run --example reverse_three_ways`: the three coKleisli R constructions.
//! - `cargo run --example context_fibration`: E, E⁻¹ and the fibre dagger.
//! - `cargo run --example poly_axioms`: symbolic RD/CD checks on polynomials.
//! - `cargo run --example descent`: gradient descent on a quadratic bowl.

pub mod algebra;
pub mod bang;
pub mod cli;
pub mod cokleisli;
pub mod crdc;
pub mod ext2;
pub mod laws;
pub mod map;
pub mod model;
pub mod polycrdc;
pub mod smoothcrdc;
pub mod wrel;
