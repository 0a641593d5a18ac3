//! Möbius covariance checks:
//!   f(x) = prod_i phi'(x_i)^h * f(phi(x_1), ..., phi(x_2N)).

use rand::Rng;

use crate::error::{Error, Result};
use crate::params::{Configuration, SleParams};

use super::pde::Field;

/// A Möbius transformation x -> (a x + b) / (c x + d), normalized to
/// ad - bc = 1 so that it is orientation preserving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MobiusMap {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::OrderingBroken);
        }
        let s = det.sqrt();
        Ok(Self {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn identity() -> Self {
        Self {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    pub fn apply(&self, x: f64) -> f64 {
        (self.a * x + self.b) / (self.c * x + self.d)
    }

    /// phi'(x) = 1 / (c x + d)^2 with the ad - bc = 1 normalization.
    pub fn derivative(&self, x: f64) -> f64 {
        let q = self.c * x + self.d;
        1.0 / (q * q)
    }

    /// Map a configuration, requiring the image to be increasing with
    /// positive derivative at every point (pole outside the point range).
    pub fn map_configuration(&self, x: &Configuration) -> Result<Configuration> {
        if x.points().iter().any(|&p| self.derivative(p) <= 0.0 || !self.derivative(p).is_finite())
        {
            return Err(Error::OrderingBroken);
        }
        let mapped: Vec<f64> = x.points().iter().map(|&p| self.apply(p)).collect();
        if mapped.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::OrderingBroken);
        }
        Configuration::new(mapped)
    }
}

/// Relative covariance error |f(x) - prod phi'(x_i)^h f(phi(x))| / |f(x)|.
pub fn covariance_check(
    f: &Field,
    params: SleParams,
    x: &Configuration,
    m: &MobiusMap,
) -> Result<f64> {
    let mapped = m.map_configuration(x)?;
    let h = params.h();
    let log_jac: f64 = x.points().iter().map(|&p| h * m.derivative(p).ln()).sum();
    let lhs = f(x)?;
    let rhs = log_jac.exp() * f(&mapped)?;
    Ok((lhs - rhs).abs() / lhs.abs())
}

/// A random order-preserving Möbius map for `x`. Mixes pure affine maps
/// with maps whose pole lies safely outside the point range.
pub fn random_order_preserving_map<R: Rng>(rng: &mut R, x: &Configuration) -> MobiusMap {
    match rng.gen_range(0..3u8) {
        0 => {
            // Affine: dilation + translation.
            let s: f64 = rng.gen_range(0.2..4.0);
            let t: f64 = rng.gen_range(-3.0..3.0);
            MobiusMap::new(s, t, 0.0, 1.0).unwrap()
        }
        _ => {
            // phi(x) = e + s / (p - x) with the pole p outside the range.
            let lo = x.points().first().copied().unwrap_or(0.0);
            let hi = x.points().last().copied().unwrap_or(0.0);
            let width = (hi - lo).max(1.0);
            let margin = rng.gen_range(0.5..3.0) * width;
            let p = if rng.gen_bool(0.5) {
                hi + margin
            } else {
                lo - margin
            };
            let s: f64 = rng.gen_range(0.2..4.0) * width * width;
            let e: f64 = rng.gen_range(-2.0..2.0);
            MobiusMap::new(-e, e * p + s, -1.0, p).unwrap()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::LinkPattern;
    use crate::partition::blocks::conformal_block;
    use crate::partition::pure::PureBasis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_config(n: usize, rng: &mut ChaCha8Rng) -> Configuration {
        let mut pts = Vec::with_capacity(2 * n);
        let mut x = rng.gen_range(-2.0..0.0);
        for _ in 0..2 * n {
            x += rng.gen_range(0.1..1.5);
            pts.push(x);
        }
        Configuration::new(pts).unwrap()
    }

    #[test]
    fn identity_is_exact() {
        let basis = PureBasis::new(2).unwrap();
        let p = LinkPattern::rainbow(2);
        let f = |c: &Configuration| Ok(basis.z_alpha(&p, c)?.value);
        let x = Configuration::new(vec![0.0, 1.0, 2.5, 4.0]).unwrap();
        let err = covariance_check(&f, SleParams::gff(), &x, &MobiusMap::identity()).unwrap();
        assert_eq!(err, 0.0);
    }

    #[test]
    fn pure_partitions_covariant_under_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for n in 1..=4 {
            let basis = PureBasis::new(n).unwrap();
            let x = random_config(n, &mut rng);
            for p in basis.patterns() {
                let f = |c: &Configuration| Ok(basis.z_alpha(p, c)?.value);
                for _ in 0..10 {
                    let m = random_order_preserving_map(&mut rng, &x);
                    let err = covariance_check(&f, SleParams::gff(), &x, &m).unwrap();
                    assert!(err < 1e-9, "p={p} err={err}");
                }
            }
        }
    }

    #[test]
    fn blocks_covariant_with_pole_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for n in 1..=4 {
            let x = random_config(n, &mut rng);
            for p in LinkPattern::enumerate(n).unwrap() {
                let f = |c: &Configuration| conformal_block(&p, c);
                for _ in 0..5 {
                    let m = random_order_preserving_map(&mut rng, &x);
                    let err = covariance_check(&f, SleParams::gff(), &x, &m).unwrap();
                    assert!(err < 1e-9, "p={p} err={err}");
                }
            }
        }
    }

    #[test]
    fn ordering_breaking_map_rejected() {
        // Pole inside the configuration range.
        let x = Configuration::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let m = MobiusMap::new(0.0, 1.0, -1.0, 1.5).unwrap();
        let f = |_: &Configuration| Ok(1.0);
        assert!(covariance_check(&f, SleParams::gff(), &x, &m).is_err());
    }
}
