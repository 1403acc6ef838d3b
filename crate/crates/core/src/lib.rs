pub mod arrangement;
pub mod critical;
pub mod cycles;
pub mod error;
pub mod integrals;
pub mod linalg;
pub mod monodromy;
pub mod pipeline;
pub mod rational;
pub mod rational_map;

pub use arrangement::{Arrangement, Face, FaceKind, Line, Side};
pub use critical::{CriticalCatalog, CriticalKind, CriticalPoint, CriticalValue, NewtonOptions};
pub use error::{Error, Result};
pub use rational::Rational;
pub use rational_map::RationalMap;
pub use cycles::{SkewIntMatrix, Symbol, VanishingCycle};
pub use monodromy::{MonodromyOperator, OrbitResult};
pub use pipeline::Pipeline;
