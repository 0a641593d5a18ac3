//! Gauss hypergeometric evaluation and the general-kappa N <= 2 pure
//! partition functions.

use statrs::function::gamma::ln_gamma;

use crate::combinatorics::LinkPattern;
use crate::error::{Error, Result};
use crate::params::{Configuration, SleParams};

const SERIES_TOL: f64 = 1e-16;
const SERIES_MAX_TERMS: usize = 10_000;

/// Gamma for real arguments, negative non-integers included
/// (via the reflection formula).
fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        ln_gamma(x).exp()
    } else {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * ln_gamma(1.0 - x).exp())
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && (x - x.round()).abs() < 1e-12
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-12
}

/// Raw power series sum of 2F1(a, b; c; w), |w| < 1 (or terminating).
fn gauss_series(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (1.0 + nf)) * w;
        sum += term;
        if term == 0.0 || term.abs() < SERIES_TOL * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence(format!(
        "2F1 series at w = {w} did not converge in {SERIES_MAX_TERMS} terms"
    )))
}

/// 2F1(a, b; c; w) for w in [0, 1): direct series for small w or
/// terminating cases, otherwise the standard connection to 1 - w.
pub fn gauss_2f1(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&w) {
        return Err(Error::NonConvergence(format!(
            "2F1 argument {w} outside [0, 1)"
        )));
    }
    if w <= 0.5 || is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return gauss_series(a, b, c, w);
    }
    let s = c - a - b;
    if is_integer(s) {
        // Degenerate connection formula; the series still converges on
        // [0, 1) since s > 0 for our parameters, just more slowly.
        return gauss_series(a, b, c, w);
    }
    let w1 = 1.0 - w;
    let t1 = gamma(c) * gamma(s) / (gamma(c - a) * gamma(c - b))
        * gauss_series(a, b, 1.0 - s, w1)?;
    let t2 = gamma(c) * gamma(-s) / (gamma(a) * gamma(b))
        * w1.powf(s)
        * gauss_series(c - a, c - b, 1.0 + s, w1)?;
    Ok(t1 + t2)
}

/// F(w) = 2F1(4/k, 1 - 4/k, 8/k; w), the solution entering the N = 2
/// partition functions.
pub fn hypergeometric_f(kappa: f64, w: f64) -> Result<f64> {
    gauss_2f1(4.0 / kappa, 1.0 - 4.0 / kappa, 8.0 / kappa, w)
}

/// F(1) in closed form by the Gauss summation theorem.
pub fn hypergeometric_f_at_one(kappa: f64) -> f64 {
    let (a, b, c) = (4.0 / kappa, 1.0 - 4.0 / kappa, 8.0 / kappa);
    // c - a - b = 8/kappa - 1 > 0 for kappa < 8, so the value is finite.
    (ln_gamma(c) + ln_gamma(c - a - b) - ln_gamma(c - a) - ln_gamma(c - b)).exp()
}

/// The cross-ratio z = (x21 x43) / (x42 x31) in (0, 1).
pub fn cross_ratio(x: &Configuration) -> Result<f64> {
    if x.n() != 2 {
        return Err(Error::SizeMismatch {
            left: 2,
            right: x.n(),
        });
    }
    let (x1, x2, x3, x4) = (x.x(1), x.x(2), x.x(3), x.x(4));
    Ok(((x2 - x1) * (x4 - x3)) / ((x4 - x2) * (x3 - x1)))
}

/// General-kappa pure partition functions for N <= 2. For N = 2 the two
/// patterns are the rainbow {1-4, 2-3} and the unnested {1-2, 3-4}:
///
///   Z_rainbow  = (x41 x32)^{-2h} z^{2/k} F(z) / F(1)
///   Z_unnested = (x21 x43)^{-2h} (1-z)^{2/k} F(1-z) / F(1)
pub fn pure_partition_n2(p: &LinkPattern, params: SleParams, x: &Configuration) -> Result<f64> {
    if p.n() != x.n() {
        return Err(Error::SizeMismatch {
            left: p.n(),
            right: x.n(),
        });
    }
    let h = params.h();
    let k = params.kappa;
    match p.n() {
        1 => Ok((x.x(2) - x.x(1)).powf(-2.0 * h)),
        2 => {
            let z = cross_ratio(x)?;
            let f1 = hypergeometric_f_at_one(k);
            if p == &LinkPattern::rainbow(2) {
                let pre = ((x.x(4) - x.x(1)) * (x.x(3) - x.x(2))).powf(-2.0 * h);
                Ok(pre * z.powf(2.0 / k) * hypergeometric_f(k, z)? / f1)
            } else if p == &LinkPattern::unnested(2) {
                let pre = ((x.x(2) - x.x(1)) * (x.x(4) - x.x(3))).powf(-2.0 * h);
                Ok(pre * (1.0 - z).powf(2.0 / k) * hypergeometric_f(k, 1.0 - z)? / f1)
            } else {
                Err(Error::InvalidPattern(format!("unexpected N = 2 pattern {p}")))
            }
        }
        n => Err(Error::CapacityExceeded {
            what: "general-kappa pure partition function n",
            value: n,
            cap: 2,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::lerw::lerw_symmetric;
    use crate::partition::pure::pure_partition_k4;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg(points: &[f64]) -> Configuration {
        Configuration::new(points.to_vec()).unwrap()
    }

    fn random_config4(rng: &mut ChaCha8Rng) -> Configuration {
        let mut pts = Vec::new();
        let mut x = rng.gen_range(-2.0..0.0);
        for _ in 0..4 {
            x += rng.gen_range(0.05..2.0);
            pts.push(x);
        }
        cfg(&pts)
    }

    #[test]
    fn f_at_one_matches_series_limit() {
        for kappa in [3.0, 16.0 / 3.0] {
            // The approach to w = 1 is only O((1-w)^{8/kappa - 1}), so this
            // is a loose sanity check of the Gauss summation value.
            let closed = hypergeometric_f_at_one(kappa);
            let near = hypergeometric_f(kappa, 1.0 - 1e-12).unwrap();
            assert_relative_eq!(closed, near, max_relative = 1e-4);
        }
    }

    #[test]
    fn connection_matches_series_at_midpoint() {
        // Both branches are usable near w = 1/2; they must agree.
        for kappa in [3.0, 16.0 / 3.0, 5.0, 7.0] {
            let (a, b, c) = (4.0 / kappa, 1.0 - 4.0 / kappa, 8.0 / kappa);
            for w in [0.51, 0.6, 0.75] {
                let direct = gauss_series(a, b, c, w).unwrap();
                let connected = gauss_2f1(a, b, c, w).unwrap();
                assert_relative_eq!(direct, connected, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn kappa2_algebraic() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let params = SleParams::new(2.0).unwrap();
        for _ in 0..20 {
            let x = random_config4(&mut rng);
            let z = cross_ratio(&x).unwrap();
            let target = (x.x(4) - x.x(1)).powi(-2) * (x.x(3) - x.x(2)).powi(-2) * z * (2.0 - z);
            let got = pure_partition_n2(&LinkPattern::rainbow(2), params, &x).unwrap();
            assert_relative_eq!(got, target, max_relative = 1e-8);
        }
    }

    #[test]
    fn kappa4_matches_block_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let params = SleParams::new(4.0).unwrap();
        for _ in 0..20 {
            let x = random_config4(&mut rng);
            for p in [LinkPattern::rainbow(2), LinkPattern::unnested(2)] {
                let general = pure_partition_n2(&p, params, &x).unwrap();
                let k4 = pure_partition_k4(&p, &x).unwrap().value;
                assert_relative_eq!(general, k4, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn kappa16_3_algebraic() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let params = SleParams::new(16.0 / 3.0).unwrap();
        for _ in 0..20 {
            let x = random_config4(&mut rng);
            let z = cross_ratio(&x).unwrap();
            // Prefactor exponent is -2h = -1/8 at kappa = 16/3.
            let target = ((x.x(4) - x.x(1)) * (x.x(3) - x.x(2))).powf(-0.125)
                * z.powf(3.0 / 8.0)
                * (1.0 + (1.0 - z).sqrt()).powf(-0.5);
            let got = pure_partition_n2(&LinkPattern::rainbow(2), params, &x).unwrap();
            assert_relative_eq!(got, target, max_relative = 1e-8);
        }
    }

    #[test]
    fn kappa2_sum_is_lerw_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let params = SleParams::new(2.0).unwrap();
        for _ in 0..20 {
            let x = random_config4(&mut rng);
            let total = pure_partition_n2(&LinkPattern::rainbow(2), params, &x).unwrap()
                + pure_partition_n2(&LinkPattern::unnested(2), params, &x).unwrap();
            assert_relative_eq!(total, lerw_symmetric(&x).unwrap(), max_relative = 1e-10);
        }
    }

    #[test]
    fn n1_any_kappa() {
        let params = SleParams::new(3.3).unwrap();
        let x = cfg(&[0.0, 2.0]);
        let got = pure_partition_n2(&LinkPattern::unnested(1), params, &x).unwrap();
        assert_relative_eq!(got, 2.0f64.powf(-2.0 * params.h()), max_relative = 1e-14);
    }
}
