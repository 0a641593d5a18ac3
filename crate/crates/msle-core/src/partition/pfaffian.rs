//! Pfaffian evaluation and the kappa = 3 (Ising) symmetric partition
//! function pf(1 / (x_j - x_i)).

use crate::error::{Error, Result};
use crate::params::Configuration;

use super::pairings::{enumerate_pairings, pairing_sign};

/// Pfaffian of a skew-symmetric matrix by Parlett–Reid style elimination
/// with partial pivoting: congruence transforms with unit lower-triangular
/// factors leave the Pfaffian invariant, row/column swaps flip its sign.
pub fn pfaffian(a: &[Vec<f64>]) -> Result<f64> {
    let n = a.len();
    if n % 2 != 0 {
        return Ok(0.0);
    }
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidConfiguration(
            "pfaffian needs a square matrix".into(),
        ));
    }
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut pf = 1.0;
    for k in (0..n).step_by(2) {
        // Pivot: bring the largest entry of row k into position (k, k+1).
        let p = (k + 1..n)
            .max_by(|&i, &j| m[k][i].abs().total_cmp(&m[k][j].abs()))
            .unwrap();
        if m[k][p] == 0.0 {
            return Ok(0.0);
        }
        if p != k + 1 {
            m.swap(p, k + 1);
            for row in m.iter_mut() {
                row.swap(p, k + 1);
            }
            pf = -pf;
        }
        let pivot = m[k][k + 1];
        pf *= pivot;
        for j in (k + 2)..n {
            let mu = -m[k][j] / pivot;
            if mu == 0.0 {
                continue;
            }
            for l in 0..n {
                let t = m[k + 1][l];
                m[j][l] += mu * t;
            }
            for l in 0..n {
                let t = m[l][k + 1];
                m[l][j] += mu * t;
            }
        }
    }
    Ok(pf)
}

/// Z_Ising(x) = pf(1 / (x_j - x_i)).
pub fn ising_symmetric(x: &Configuration) -> Result<f64> {
    let m = 2 * x.n();
    let a: Vec<Vec<f64>> = (1..=m)
        .map(|i| {
            (1..=m)
                .map(|j| {
                    if i == j {
                        0.0
                    } else {
                        1.0 / (x.x(j) - x.x(i))
                    }
                })
                .collect()
        })
        .collect();
    pfaffian(&a)
}

/// Brute-force oracle: the signed sum over all pairings,
/// sum over pi of sgn(pi) prod 1/(x_b - x_a).
pub fn ising_symmetric_brute(x: &Configuration, cap: usize) -> Result<f64> {
    let mut total = 0.0;
    for pairing in enumerate_pairings(x.n(), cap)? {
        let mut term = pairing_sign(&pairing) as f64;
        for &(a, b) in &pairing {
            term /= x.x(b) - x.x(a);
        }
        total += term;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg(points: &[f64]) -> Configuration {
        Configuration::new(points.to_vec()).unwrap()
    }

    #[test]
    fn n1_fixture() {
        assert_relative_eq!(
            ising_symmetric(&cfg(&[0.5, 3.0])).unwrap(),
            1.0 / 2.5,
            max_relative = 1e-14
        );
    }

    #[test]
    fn n2_hand_expansion() {
        // 1/(1*1) - 1/(2*2) + 1/(3*1) at (0,1,2,3)
        let v = ising_symmetric(&cfg(&[0.0, 1.0, 2.0, 3.0])).unwrap();
        assert_relative_eq!(v, 1.0 - 0.25 + 1.0 / 3.0, max_relative = 1e-13);
    }

    #[test]
    fn elimination_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=4 {
            for _ in 0..25 {
                let mut pts = Vec::new();
                let mut x = rng.gen_range(-1.0..0.0);
                for _ in 0..2 * n {
                    x += rng.gen_range(0.05..1.0);
                    pts.push(x);
                }
                let c = cfg(&pts);
                let fast = ising_symmetric(&c).unwrap();
                let slow = ising_symmetric_brute(&c, 6).unwrap();
                assert_relative_eq!(fast, slow, max_relative = 1e-12);
                assert!(fast > 0.0);
            }
        }
    }

    #[test]
    fn odd_dimension_is_zero() {
        assert_eq!(pfaffian(&vec![vec![0.0; 3]; 3]).unwrap(), 0.0);
    }
}
