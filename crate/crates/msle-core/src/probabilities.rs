//! Connection probabilities of GFF level lines, marginal terminal-point
//! probabilities, balanced-subset probabilities, and the piecewise-constant
//! boundary data attached to a conformal block.

use serde::{Deserialize, Serialize};

use crate::combinatorics::LinkPattern;
use crate::error::{Error, Result};
use crate::params::Configuration;
use crate::partition::blocks::{log_conformal_block, log_gff_symmetric, ThetaTable};
use crate::partition::pure::PureBasis;

/// The full distribution over link patterns at a configuration, in the
/// canonical pattern order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConnectionDistribution {
    pub n: usize,
    pub config: Configuration,
    pub patterns: Vec<LinkPattern>,
    pub probs: Vec<f64>,
}

impl ConnectionDistribution {
    pub fn prob_of(&self, p: &LinkPattern) -> Option<f64> {
        let i = self.patterns.iter().position(|q| q == p)?;
        Some(self.probs[i])
    }
}

/// P_alpha(x) = Z_alpha(x) / Z_GFF(x) for every pattern, computed as
/// exp(log Z_alpha - log Z_GFF).
pub fn connection_distribution(x: &Configuration) -> Result<ConnectionDistribution> {
    let basis = PureBasis::new(x.n())?;
    connection_distribution_with(&basis, x)
}

pub fn connection_distribution_with(
    basis: &PureBasis,
    x: &Configuration,
) -> Result<ConnectionDistribution> {
    let log_gff = log_gff_symmetric(x);
    let mut probs = Vec::with_capacity(basis.patterns().len());
    for p in basis.patterns() {
        let e = basis.z_alpha(p, x)?;
        probs.push((e.log_value - log_gff).exp());
    }
    Ok(ConnectionDistribution {
        n: x.n(),
        config: x.clone(),
        patterns: basis.patterns().to_vec(),
        probs,
    })
}

fn check_marginal_indices(x: &Configuration, a: usize, b: usize) -> Result<()> {
    let m = 2 * x.n();
    if a < 1 || a > m || b < 1 || b > m || a % 2 != 1 || b % 2 != 0 {
        return Err(Error::ParityViolation { a, b });
    }
    Ok(())
}

/// Probability that the level line from x_a terminates at x_b:
/// prod over j != a, b of |(x_j - x_a)/(x_j - x_b)|^{(-1)^j}.
pub fn marginal_probability(x: &Configuration, a: usize, b: usize) -> Result<f64> {
    check_marginal_indices(x, a, b)?;
    let mut log = 0.0;
    for j in 1..=2 * x.n() {
        if j == a || j == b {
            continue;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        log += sign * ((x.x(j) - x.x(a)) / (x.x(j) - x.x(b))).abs().ln();
    }
    Ok(log.exp())
}

/// F^{(a,b)}(x) = Z_GFF(x) * prod |(x_j - x_a)/(x_j - x_b)|^{(-1)^j};
/// equals the sum of Z_alpha over patterns containing the link {a, b}.
pub fn marginal_weighting_function(x: &Configuration, a: usize, b: usize) -> Result<f64> {
    Ok((log_gff_symmetric(x) + marginal_probability(x, a, b)?.ln()).exp())
}

/// U_alpha(x) / Z_GFF(x), the probability that the level lines are
/// "balanced" in the sense encoded by alpha.
pub fn balanced_subset_probability(p: &LinkPattern, x: &Configuration) -> Result<f64> {
    let log_u = log_conformal_block(&ThetaTable::new(p), x)?;
    Ok((log_u - log_gff_symmetric(x)).exp())
}

/// Piecewise-constant GFF boundary data of a conformal block: the value on
/// the k-th interval (x_k, x_{k+1}) is lambda (2 alpha(k) - 1) where alpha
/// is the Dyck path, and the crossing height at x_k is
/// lambda (alpha(k-1) + alpha(k) - 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub n: usize,
    /// 2N + 1 interval values, outermost intervals both at -lambda.
    pub values: Vec<f64>,
    /// 2N heights, indexed by the marked points; first and last are 0.
    pub heights: Vec<f64>,
}

pub fn conformal_block_boundary(p: &LinkPattern) -> BoundaryData {
    let lambda = std::f64::consts::FRAC_PI_2;
    let d = p.to_dyck();
    let n = p.n();
    let values = (0..=2 * n)
        .map(|k| lambda * (2.0 * f64::from(d.height(k)) - 1.0))
        .collect();
    let heights = (1..=2 * n)
        .map(|k| lambda * (f64::from(d.height(k - 1)) + f64::from(d.height(k)) - 1.0))
        .collect();
    BoundaryData { n, values, heights }
}
