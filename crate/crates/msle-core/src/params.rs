//! SLE parameters and boundary point configurations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// SLE parameter bundle. The conformal weight `h` and central charge `c`
/// are always derived from `kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SleParams {
    pub kappa: f64,
}

impl SleParams {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa < 8.0) || !kappa.is_finite() {
            return Err(Error::KappaOutOfRange(kappa));
        }
        Ok(Self { kappa })
    }

    pub fn gff() -> Self {
        Self { kappa: 4.0 }
    }

    pub fn ising() -> Self {
        Self { kappa: 3.0 }
    }

    pub fn lerw() -> Self {
        Self { kappa: 2.0 }
    }

    /// Boundary conformal weight h = (6 - kappa) / (2 kappa).
    pub fn h(&self) -> f64 {
        (6.0 - self.kappa) / (2.0 * self.kappa)
    }

    /// Central charge c = (3 kappa - 8)(6 - kappa) / (2 kappa).
    pub fn c(&self) -> f64 {
        (3.0 * self.kappa - 8.0) * (6.0 - self.kappa) / (2.0 * self.kappa)
    }

    /// The GFF height gap constant.
    pub fn lambda(&self) -> f64 {
        std::f64::consts::FRAC_PI_2
    }
}

/// A strictly increasing tuple of 2N finite boundary points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Configuration {
    points: Vec<f64>,
}

impl Configuration {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() % 2 != 0 {
            return Err(Error::InvalidConfiguration(format!(
                "need an even number of points, got {}",
                points.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidConfiguration(
                "points must be finite".into(),
            ));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfiguration(
                "points must be strictly increasing".into(),
            ));
        }
        Ok(Self { points })
    }

    pub fn n(&self) -> usize {
        self.points.len() / 2
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// 1-based access matching the index convention of link patterns.
    pub fn x(&self, i: usize) -> f64 {
        self.points[i - 1]
    }

    /// Smallest gap between consecutive points.
    pub fn min_gap(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Remove points at 1-based positions j and j+1.
    pub fn remove_pair(&self, j: usize) -> Result<Self> {
        if j < 1 || j + 1 > self.points.len() {
            return Err(Error::InvalidConfiguration(format!(
                "pair position {j} out of range"
            )));
        }
        let mut points = self.points.clone();
        points.drain(j - 1..=j);
        Self::new(points)
    }
}

impl TryFrom<Vec<f64>> for Configuration {
    type Error = Error;
    fn try_from(points: Vec<f64>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<Configuration> for Vec<f64> {
    fn from(c: Configuration) -> Self {
        c.points
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_constants() {
        let p = SleParams::new(4.0).unwrap();
        assert_eq!(p.h(), 0.25);
        assert_eq!(p.c(), 1.0);
        let ising = SleParams::new(3.0).unwrap();
        assert_eq!(ising.h(), 0.5);
        assert_eq!(ising.c(), 0.5);
        let lerw = SleParams::new(2.0).unwrap();
        assert_eq!(lerw.h(), 1.0);
        assert_eq!(lerw.c(), -2.0);
        assert!(SleParams::new(0.0).is_err());
        assert!(SleParams::new(8.0).is_err());
    }

    #[test]
    fn configuration_validation() {
        assert!(Configuration::new(vec![0.0, 1.0, 2.0, 3.0]).is_ok());
        assert!(Configuration::new(vec![0.0, 1.0, 1.0, 3.0]).is_err());
        assert!(Configuration::new(vec![0.0, 1.0, 2.0]).is_err());
        assert!(Configuration::new(vec![0.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn remove_pair_shifts() {
        let c = Configuration::new(vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let r = c.remove_pair(3).unwrap();
        assert_eq!(r.points(), &[0.0, 1.0, 4.0, 5.0]);
    }
}
