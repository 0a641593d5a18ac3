//! Conformal blocks, the GFF symmetric partition function, and the bound
//! functions. All products are evaluated in log space: every factor is a
//! positive difference of ordered points raised to a half-integer power.

use crate::combinatorics::LinkPattern;
use crate::error::{Error, Result};
use crate::params::Configuration;

/// The sign table theta(i, j) of a link pattern: +1 when i and j are both
/// openers or both closers, -1 otherwise, 0 on the diagonal.
#[derive(Debug, Clone)]
pub struct ThetaTable {
    n: usize,
    values: Vec<i8>,
}

impl ThetaTable {
    pub fn new(p: &LinkPattern) -> Self {
        let n = p.n();
        let m = 2 * n;
        let opener: Vec<bool> = (1..=m).map(|i| p.is_opener(i)).collect();
        let mut values = vec![0i8; m * m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    values[i * m + j] = if opener[i] == opener[j] { 1 } else { -1 };
                }
            }
        }
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based lookup of theta(i, j).
    pub fn theta(&self, i: usize, j: usize) -> i8 {
        self.values[(i - 1) * 2 * self.n + (j - 1)]
    }
}

fn check_sizes(n: usize, x: &Configuration) -> Result<()> {
    if n != x.n() {
        return Err(Error::SizeMismatch {
            left: n,
            right: x.n(),
        });
    }
    Ok(())
}

/// log U_alpha(x) where U_alpha = prod_{i<j} (x_j - x_i)^{theta(i,j)/2}.
pub fn log_conformal_block(theta: &ThetaTable, x: &Configuration) -> Result<f64> {
    check_sizes(theta.n(), x)?;
    let m = 2 * theta.n();
    let mut log = 0.0;
    for i in 1..=m {
        for j in (i + 1)..=m {
            log += 0.5 * f64::from(theta.theta(i, j)) * (x.x(j) - x.x(i)).ln();
        }
    }
    Ok(log)
}

/// The conformal block U_alpha(x).
pub fn conformal_block(p: &LinkPattern, x: &Configuration) -> Result<f64> {
    Ok(log_conformal_block(&ThetaTable::new(p), x)?.exp())
}

/// log of the kappa = 4 symmetric partition function
/// prod_{k<l} (x_l - x_k)^{(1/2)(-1)^{l-k}}.
pub fn log_gff_symmetric(x: &Configuration) -> f64 {
    let m = 2 * x.n();
    let mut log = 0.0;
    for k in 1..=m {
        for l in (k + 1)..=m {
            let sign = if (l - k) % 2 == 0 { 1.0 } else { -1.0 };
            log += 0.5 * sign * (x.x(l) - x.x(k)).ln();
        }
    }
    log
}

pub fn gff_symmetric(x: &Configuration) -> f64 {
    log_gff_symmetric(x).exp()
}

/// B_alpha(x) = prod over links (a,b) of (x_b - x_a)^{-1}.
pub fn bound_function(p: &LinkPattern, x: &Configuration) -> Result<f64> {
    check_sizes(p.n(), x)?;
    let log: f64 = p
        .links()
        .iter()
        .map(|&(a, b)| -(x.x(b) - x.x(a)).ln())
        .sum();
    Ok(log.exp())
}

/// B^(N)(x) = prod_{k<l} (x_l - x_k)^{(-1)^{l-k}}, the square of the
/// symmetric partition function.
pub fn bound_total(x: &Configuration) -> f64 {
    (2.0 * log_gff_symmetric(x)).exp()
}
