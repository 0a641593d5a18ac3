//! Multiple-SLE pure partition functions, conformal blocks, and GFF
//! level-line connection probabilities, with numerical verification of the
//! defining PDE / covariance / asymptotics structure and Monte Carlo
//! validation via Loewner chains.

pub mod analysis;
pub mod combinatorics;
pub mod error;
pub mod loewner;
pub mod params;
pub mod partition;
pub mod probabilities;
pub mod suite;

pub use combinatorics::{DyckPath, LinkPattern, SignedIntMatrix};
pub use error::{Error, Result};
pub use params::{Configuration, SleParams};
