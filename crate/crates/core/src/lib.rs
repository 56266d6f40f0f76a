//! Exact and numerical tools for multicurve statistics on moduli spaces of
//! quadratic differentials and for cycle counts of weighted random
//! permutations.

pub mod asymptotics;
pub mod correlators;
pub mod distribution;
pub mod error;
pub mod exact;
pub mod graphs;
pub mod perm;
pub mod volumes;
pub mod special;

pub use distribution::{Distribution, Masses};
pub use error::{Error, Result};
pub use exact::{PiGraded, Rational, Truncation};
pub use graphs::{GraphClass, StableGraph};
