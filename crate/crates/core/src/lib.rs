pub mod cones;
pub mod error;
pub mod gm_poly;
pub mod gms;
pub mod group;
pub mod hilbert;
pub mod linalg;
pub mod lp;
pub mod model;
pub mod poly;
pub mod reduction;
pub mod saturation;
pub mod stack;

pub use cones::{Cone, Fan};
pub use error::{Error, Result};
pub use group::DiagonalizableGroup;
pub use linalg::{IntMatrix, RationalSubspace};
pub use reduction::{reduce, verify_trace, ReductionTrace, VerificationReport};
pub use saturation::{reichstein_fan, reichstein_transform, saturation, SaturationResult, TransformStep};
pub use stack::{Classification, GerbeClass, MonomialStack, ToricStack, ToricUnion};
