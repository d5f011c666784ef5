//! Shared inputs for the benchmarks.

use seshadri_core::rational::{frac, q};
use seshadri_core::{DivClass, LinearSystem};

pub fn six_point_class() -> DivClass {
    DivClass::homogeneous(6, q(1), frac(2, 5))
}

pub fn challenge_class() -> DivClass {
    DivClass::homogeneous(9, q(22), q(7))
}

pub fn challenge_system() -> LinearSystem {
    LinearSystem::new(22, vec![7; 9]).expect("valid system")
}
