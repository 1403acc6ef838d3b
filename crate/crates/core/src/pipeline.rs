//! The exact → numeric → exact chain for one degree: arrangement, critical
//! catalog, vanishing cycles and the intersection matrix.

use serde::Serialize;

use crate::arrangement::Arrangement;
use crate::critical::{CriticalCatalog, NewtonOptions};
use crate::cycles::{build_intersection_matrix, enumerate_cycles, SkewIntMatrix, VanishingCycle};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, Serialize)]
pub struct Pipeline {
    pub d: usize,
    #[serde(with = "crate::rational")]
    pub epsilon: Rational,
    pub arrangement: Arrangement,
    pub catalog: CriticalCatalog,
    pub cycles: Vec<VanishingCycle>,
    pub psi: SkewIntMatrix,
}

impl Pipeline {
    pub fn build(d: usize, epsilon: &Rational, opts: &NewtonOptions) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("degree must be at least 1".into()));
        }
        let arrangement = Arrangement::family(d, epsilon)?;
        let catalog = CriticalCatalog::compute(&arrangement, opts)?;
        let cycles = enumerate_cycles(&arrangement, &catalog)?;
        let psi = build_intersection_matrix(&arrangement, &cycles);
        Ok(Self { d, epsilon: epsilon.clone(), arrangement, catalog, cycles, psi })
    }

    /// Unperturbed family with default numerics.
    pub fn unperturbed(d: usize) -> Result<Self> {
        Self::build(d, &num_traits::Zero::zero(), &NewtonOptions::default())
    }
}
