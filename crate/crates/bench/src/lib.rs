//! Shared fixtures for the benchmarks.

use monodromy_lab::{Pipeline, Rational};
use num_traits::Zero;

/// Degrees exercised by every benchmark group.
pub const DEGREES: [usize; 4] = [2, 3, 4, 5];

pub fn epsilon() -> Rational {
    Rational::zero()
}

pub fn pipeline(d: usize) -> Pipeline {
    Pipeline::unperturbed(d).expect("family builds")
}
