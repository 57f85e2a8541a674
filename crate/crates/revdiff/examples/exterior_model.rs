//! The exterior algebra over GF(2) on a two-dimensional space: structure
//! maps, then the monoidal law suites.
//!
//! Digging splits a wedge into set partitions. At the empty wedge no choice
//! of digging is both counital and a comonoid map, so three laws fail there
//! and the reports show where.

use revdiff::ext2::{ext_structure, ExtName};
use revdiff::laws::{run_suite, LawParams, ModelKind, Suite, SuiteRun};

fn main() {
    for name in ["delta", "d", "r"] {
        let n: ExtName = name.parse().expect("known name");
        let mor = ext_structure(n, 2);
        println!("== {name}: {} -> {}", mor.dom(), mor.cod());
        print!("{}", mor.dump());
    }
    let params = LawParams::new(ModelKind::Ext2, 2);
    for suite in [Suite::Modality, Suite::Bialgebra, Suite::Differential, Suite::Reverse] {
        let reports = run_suite(suite, &params).expect("suite runs on ext2");
        println!();
        print!("{}", SuiteRun { suite, params: params.clone(), reports }.to_text());
    }
}
