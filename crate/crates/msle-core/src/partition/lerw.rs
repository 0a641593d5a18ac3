//! The kappa = 2 (LERW) symmetric partition function: a signed sum of
//! determinants over all pair partitions.

use crate::error::Result;
use crate::params::Configuration;

use super::pairings::{enumerate_pairings, pairing_sign, DEFAULT_PAIRING_CAP};

/// Determinant by LU with partial pivoting; matrices here are tiny.
fn determinant(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap();
        if m[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        for i in (k + 1)..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    det
}

/// Z_LERW(x) = sum over pairings pi of sgn(pi) det(1/(x_{b_j} - x_{a_i})^2).
pub fn lerw_symmetric(x: &Configuration) -> Result<f64> {
    lerw_symmetric_with_cap(x, DEFAULT_PAIRING_CAP)
}

pub fn lerw_symmetric_with_cap(x: &Configuration, cap: usize) -> Result<f64> {
    let n = x.n();
    let mut total = 0.0;
    for pairing in enumerate_pairings(n, cap)? {
        let mut m: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = x.x(pairing[j].1) - x.x(pairing[i].0);
                        1.0 / (d * d)
                    })
                    .collect()
            })
            .collect();
        total += pairing_sign(&pairing) as f64 * determinant(&mut m);
    }
    Ok(total)
}
