//! Pure partition functions at kappa = 4 as signed combinations of
//! conformal blocks, with cancellation monitoring and the analytic
//! log-gradient used by the drifted Loewner chain.

use crate::combinatorics::{inverse_matrix_with_cap, LinkPattern};
use crate::error::{Error, Result};
use crate::params::Configuration;

use super::blocks::{log_conformal_block, ThetaTable};

/// Threshold below which the signed sum is considered catastrophically
/// cancelled (result over largest summand magnitude).
pub const CANCELLATION_FLOOR: f64 = 1e-12;

/// Result of a signed-sum evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub log_value: f64,
    /// result / max-summand-magnitude; near zero means heavy cancellation.
    pub cancellation_ratio: f64,
}

/// Cached change-of-basis data for a fixed number of links: the canonical
/// pattern order, the integer matrix rows, and the sign tables.
pub struct PureBasis {
    n: usize,
    patterns: Vec<LinkPattern>,
    inverse: Vec<Vec<i64>>,
    thetas: Vec<ThetaTable>,
}

impl PureBasis {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_cap(n, crate::combinatorics::link_pattern::DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(n: usize, cap: usize) -> Result<Self> {
        let inv = inverse_matrix_with_cap(n, cap)?;
        let thetas = inv.order.iter().map(ThetaTable::new).collect();
        Ok(Self {
            n,
            patterns: inv.order,
            inverse: inv.entries,
            thetas,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn patterns(&self) -> &[LinkPattern] {
        &self.patterns
    }

    pub fn index_of(&self, p: &LinkPattern) -> Result<usize> {
        self.patterns
            .iter()
            .position(|q| q == p)
            .ok_or_else(|| Error::InvalidPattern(format!("pattern {p} not of size n = {}", self.n)))
    }

    fn check_config(&self, x: &Configuration) -> Result<()> {
        if x.n() != self.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: x.n(),
            });
        }
        Ok(())
    }

    /// Z_alpha(x) = sum over beta of M^{-1}_{alpha,beta} U_beta(x),
    /// evaluated relative to the largest block to dodge over/underflow.
    pub fn z_alpha(&self, p: &LinkPattern, x: &Configuration) -> Result<Evaluation> {
        self.check_config(x)?;
        let row = &self.inverse[self.index_of(p)?];
        let mut logs = Vec::with_capacity(row.len());
        let mut max_log = f64::NEG_INFINITY;
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                logs.push(f64::NEG_INFINITY);
                continue;
            }
            let lu = log_conformal_block(&self.thetas[j], x)?;
            max_log = max_log.max(lu);
            logs.push(lu);
        }
        let mut sum = 0.0;
        let mut max_term = 0.0f64;
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let t = (c as f64) * (logs[j] - max_log).exp();
            max_term = max_term.max(t.abs());
            sum += t;
        }
        let ratio = sum / max_term;
        if sum <= 0.0 {
            return Err(Error::CatastrophicCancellation(ratio));
        }
        Ok(Evaluation {
            value: sum * max_log.exp(),
            log_value: max_log + sum.ln(),
            cancellation_ratio: ratio,
        })
    }

    /// d/dx_a log Z_alpha(x), computed from the exact block derivatives
    /// d/dx_a U_beta = U_beta * sum_{j != a} theta_beta(a,j) / (2 (x_a - x_j)).
    pub fn grad_log_z_alpha(&self, p: &LinkPattern, x: &Configuration, a: usize) -> Result<f64> {
        self.check_config(x)?;
        if a < 1 || a > 2 * self.n {
            return Err(Error::InvalidConfiguration(format!(
                "index {a} out of range 1..={}",
                2 * self.n
            )));
        }
        let row = &self.inverse[self.index_of(p)?];
        let mut logs = Vec::with_capacity(row.len());
        let mut max_log = f64::NEG_INFINITY;
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                logs.push(f64::NEG_INFINITY);
                continue;
            }
            let lu = log_conformal_block(&self.thetas[j], x)?;
            max_log = max_log.max(lu);
            logs.push(lu);
        }
        let mut sum = 0.0;
        let mut dsum = 0.0;
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let t = (c as f64) * (logs[j] - max_log).exp();
            let theta = &self.thetas[j];
            let mut g = 0.0;
            for i in 1..=2 * self.n {
                if i != a {
                    g += f64::from(theta.theta(a, i)) / (2.0 * (x.x(a) - x.x(i)));
                }
            }
            sum += t;
            dsum += t * g;
        }
        if sum <= 0.0 {
            return Err(Error::CatastrophicCancellation(0.0));
        }
        Ok(dsum / sum)
    }
}

/// Convenience one-shot evaluation of Z_alpha at kappa = 4.
pub fn pure_partition_k4(p: &LinkPattern, x: &Configuration) -> Result<Evaluation> {
    PureBasis::new(p.n())?.z_alpha(p, x)
}

/// Convenience one-shot log-gradient of Z_alpha at kappa = 4.
pub fn grad_log_pure_partition_k4(p: &LinkPattern, x: &Configuration, a: usize) -> Result<f64> {
    PureBasis::new(p.n())?.grad_log_z_alpha(p, x, a)
}
