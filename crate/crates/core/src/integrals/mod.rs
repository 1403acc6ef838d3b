//! Abelian integrals of one-forms over real ovals around centers.

pub mod form;
pub mod poly;
pub mod quadrature;
pub mod trace;
pub mod vanishing;

pub use form::{ComplexRational, OneForm, RationalFunction};
pub use poly::Poly2;
pub use quadrature::{integrate, winding_oracle, Integral};
pub use trace::{trace_oval, Chart, OvalTrace, TraceOptions};
pub use vanishing::{check_center_vanishing, IntegralTolerances, VanishingReport};
