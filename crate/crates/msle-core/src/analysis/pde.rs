//! Finite-difference residuals of the second-order PDE system
//!   [ kappa/2 d^2_i + sum_{j != i} ( 2/(x_j - x_i) d_j - 2h/(x_j - x_i)^2 ) ] f = 0.

use crate::error::{Error, Result};
use crate::params::{Configuration, SleParams};

/// A scalar field over configurations.
pub type Field<'a> = dyn Fn(&Configuration) -> Result<f64> + 'a;

#[derive(Debug, Clone, Copy)]
pub struct PdeResidualReport {
    pub i: usize,
    pub step: f64,
    pub residual: f64,
    /// Sum of magnitudes of the operator's three term groups; the natural
    /// scale to compare the residual against.
    pub scale: f64,
    pub relative: f64,
}

fn shifted(x: &Configuration, i: usize, delta: f64) -> Result<Configuration> {
    let mut pts = x.points().to_vec();
    pts[i - 1] += delta;
    Configuration::new(pts)
}

/// Central-difference residual of the i-th PDE at `x` with step `step`.
pub fn pde_residual(
    f: &Field,
    params: SleParams,
    x: &Configuration,
    i: usize,
    step: f64,
) -> Result<PdeResidualReport> {
    let margin = 4.0 * step;
    if x.min_gap() <= margin {
        return Err(Error::MarginViolation {
            needed: margin,
            have: x.min_gap(),
        });
    }
    let m = 2 * x.n();
    if i < 1 || i > m {
        return Err(Error::InvalidConfiguration(format!(
            "equation index {i} out of range 1..={m}"
        )));
    }
    let h = params.h();
    let f0 = f(x)?;
    let fp = f(&shifted(x, i, step)?)?;
    let fm = f(&shifted(x, i, -step)?)?;
    let second = (fp - 2.0 * f0 + fm) / (step * step);

    let lead = params.kappa / 2.0 * second;
    let mut drift = 0.0;
    let mut drift_scale = 0.0;
    let mut weight = 0.0;
    let mut weight_scale = 0.0;
    for j in 1..=m {
        if j == i {
            continue;
        }
        let dj = (f(&shifted(x, j, step)?)? - f(&shifted(x, j, -step)?)?) / (2.0 * step);
        let gap = x.x(j) - x.x(i);
        let t = 2.0 / gap * dj;
        drift += t;
        drift_scale += t.abs();
        let w = 2.0 * h / (gap * gap) * f0;
        weight -= w;
        weight_scale += w.abs();
    }
    let residual = lead + drift + weight;
    let scale = lead.abs() + drift_scale + weight_scale;
    // A constant field with h = 0 satisfies the PDE with every term zero.
    let relative = if scale > 0.0 {
        residual.abs() / scale
    } else {
        0.0
    };
    Ok(PdeResidualReport {
        i,
        step,
        residual,
        scale,
        relative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_exact_solution_residual_order() {
        // f(x, y) = (y - x)^{-2h} solves the system for any kappa.
        for kappa in [2.0, 3.0, 4.0, 6.0] {
            let params = SleParams::new(kappa).unwrap();
            let h = params.h();
            let f = move |c: &Configuration| Ok((c.x(2) - c.x(1)).powf(-2.0 * h));
            let x = Configuration::new(vec![0.3, 1.7]).unwrap();
            for i in 1..=2 {
                let r1 = pde_residual(&f, params, &x, i, 1e-3).unwrap();
                let r2 = pde_residual(&f, params, &x, i, 5e-4).unwrap();
                assert!(r1.relative < 1e-6, "kappa={kappa} rel={}", r1.relative);
                // Halving the step should shrink the residual about 4x
                // (skip when the residual is already at roundoff level).
                if r2.relative > 1e-13 {
                    let order = (r1.relative / r2.relative).log2();
                    assert!((1.4..2.6).contains(&order), "order = {order}");
                }
            }
        }
    }

    #[test]
    fn margin_enforced() {
        let f = |_: &Configuration| Ok(1.0);
        let x = Configuration::new(vec![0.0, 1e-3]).unwrap();
        assert!(pde_residual(&f, SleParams::gff(), &x, 1, 1e-3).is_err());
    }
}
