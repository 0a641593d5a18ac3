//! Numerical verification of the defining properties: PDE residuals,
//! Möbius covariance, fused-pair asymptotics, dual functionals, and decay
//! exponents.

pub mod asymptotics;
pub mod covariance;
pub mod decay;
pub mod pde;

pub use asymptotics::{asy_limit, dual_functional};
pub use covariance::{covariance_check, random_order_preserving_map, MobiusMap};
pub use decay::{decay_slope, expected_slope, DecayFamily, DecayMode};
pub use pde::{pde_residual, Field, PdeResidualReport};
