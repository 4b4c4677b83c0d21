//! Weighted ordered Bratteli diagrams as adic maps, interval exchanges and
//! flat surfaces, with the shift renormalization and an ergodicity criterion.
//!
//! Everything numeric is generic over [`Scalar`]; exact rationals are the
//! default and floats are for rendering and long flows.

pub mod bdg;
pub mod cas;
pub mod diagram;
pub mod ergodicity;
pub mod error;
pub mod families;
pub mod lazy;
pub mod pathspace;
pub mod renorm;
pub mod scalar;
pub mod surface;
pub mod svg;
pub mod weights;

pub use diagram::{DiagramSpec, Edge, Half, IncidenceMatrix, ValidationReport};
pub use error::{Error, Result};
pub use families::{generate, FamilyParams, Seq};
pub use scalar::{Rational, Scalar};
pub use weights::{HalfWeights, WeightPair, WeightedHalf};

pub type ExactWeights = WeightPair<Rational>;
pub type FloatWeights = WeightPair<f64>;
pub type ExactIet = cas::IntervalExchange<Rational>;
pub type FloatIet = cas::IntervalExchange<f64>;
pub type ExactSurface = surface::FlatSurfaceModel<Rational>;
pub type FloatSurface = surface::FlatSurfaceModel<f64>;
