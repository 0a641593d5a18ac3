//! Closed-form partition functions: conformal blocks, pure partition
//! functions at kappa = 4, the symmetric functions at kappa = 2, 3, 4,
//! bound functions, and the general-kappa N <= 2 formulas.

pub mod blocks;
pub mod hypergeometric;
pub mod lerw;
pub mod pairings;
pub mod pfaffian;
pub mod pure;

pub use blocks::{
    bound_function, bound_total, conformal_block, gff_symmetric, log_conformal_block,
    log_gff_symmetric, ThetaTable,
};
pub use hypergeometric::{cross_ratio, gauss_2f1, hypergeometric_f, pure_partition_n2};
pub use lerw::lerw_symmetric;
pub use pfaffian::{ising_symmetric, ising_symmetric_brute, pfaffian};
pub use pure::{grad_log_pure_partition_k4, pure_partition_k4, Evaluation, PureBasis};
