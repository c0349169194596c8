//! Four-force on a smeared two-level detector moving inertially in free space or
//! parallel to a reflecting plate, with the closed-form limits used to check it.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod correlator;
pub mod force;
pub mod error;
pub mod lorentz;
pub mod params;
pub mod quadrature;
pub mod special;
pub mod upsilon;
pub mod verify;

pub use asymptotics::{asymptote, RegimeKey, CATALOGUE};
pub use error::{Error, Result};
pub use force::{force_free, force_plate, ForceComponents, Normalization, PlateForce, Regime};
pub use params::*;
pub use quadrature::{QuadratureResult, ToleranceSpec};
