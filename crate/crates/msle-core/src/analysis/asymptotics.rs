//! Numerical asymptotics: the fused-pair limit
//!   lim (x_{j+1} - x_j)^{2h} f(x)  as  x_j, x_{j+1} -> xi,
//! and the dual functionals built from sequences of such limits.

use crate::combinatorics::LinkPattern;
use crate::error::{Error, Result};
use crate::params::{Configuration, SleParams};

use super::pde::Field;

/// Rungs of the geometric epsilon ladder.
const LADDER: usize = 12;
/// Richardson extrapolation depth (the scaled values expand in integer
/// powers of epsilon for the product-form functions handled here).
const RICHARDSON_DEPTH: usize = 4;

/// Insert the pair (xi - eps/2, xi + eps/2) at 1-based slot `j` of `rest`.
fn inserted(rest: &Configuration, j: usize, xi: f64, eps: f64) -> Result<Configuration> {
    let mut pts = rest.points().to_vec();
    pts.insert(j - 1, xi + eps / 2.0);
    pts.insert(j - 1, xi - eps / 2.0);
    Configuration::new(pts)
}

/// Absolute noise floor for the Cauchy gate of a single extrapolation.
const CAUCHY_FLOOR: f64 = 1e-8;

/// Extrapolate (eps^{2h} f)(eps -> 0) with xi strictly between the
/// neighbors rest_{j-1} and rest_j. `rest` holds the 2N - 2 fixed points.
pub fn asy_limit(
    f: &Field,
    params: SleParams,
    rest: &Configuration,
    j: usize,
    xi: f64,
) -> Result<f64> {
    asy_limit_with_floor(f, params, rest, j, xi, CAUCHY_FLOOR)
}

/// The same extrapolation with an explicit noise floor for the Cauchy
/// gate. Nested limits need a looser floor: each recursion level feeds the
/// next one values carrying its own extrapolation noise, which Richardson
/// weights then amplify.
fn asy_limit_with_floor(
    f: &Field,
    params: SleParams,
    rest: &Configuration,
    j: usize,
    xi: f64,
    floor: f64,
) -> Result<f64> {
    if j < 1 || j > rest.points().len() + 1 {
        return Err(Error::InvalidConfiguration(format!(
            "insertion slot {j} out of range"
        )));
    }
    let left = if j >= 2 { Some(rest.x(j - 1)) } else { None };
    let right = rest.points().get(j - 1).copied();
    if left.is_some_and(|l| xi <= l) || right.is_some_and(|r| xi >= r) {
        return Err(Error::InvalidConfiguration(format!(
            "collapse point {xi} not inside the allowed interval"
        )));
    }
    let room = f64::min(
        left.map_or(f64::INFINITY, |l| xi - l),
        right.map_or(f64::INFINITY, |r| r - xi),
    );
    let eps0 = if room.is_finite() { 0.5 * room } else { 0.5 };

    let two_h = 2.0 * params.h();
    let mut values = Vec::with_capacity(LADDER);
    let mut eps = eps0;
    for _ in 0..LADDER {
        let v = eps.powf(two_h) * f(&inserted(rest, j, xi, eps)?)?;
        values.push(v);
        eps /= 2.0;
    }
    // Iterated Richardson on the geometric ladder (ratio 2, integer orders).
    let mut table = values;
    for m in 1..=RICHARDSON_DEPTH {
        let w = 2f64.powi(m as i32);
        for k in (m..table.len()).rev() {
            table[k] = (w * table[k] - table[k - 1]) / (w - 1.0);
        }
    }
    let last = *table.last().unwrap();
    let prev = table[table.len() - 2];
    let scale = last.abs().max(prev.abs()).max(1e-30);
    if (last - prev).abs() / scale > 1e-6 && (last - prev).abs() > floor {
        return Err(Error::NonConvergence(format!(
            "asy ladder not Cauchy: {prev} vs {last}"
        )));
    }
    Ok(last)
}

/// The dual functional L_alpha: collapse the links of `alpha` in an
/// allowable order, each at the midpoint of its currently allowed interval.
/// For the pure partition basis, L_alpha(Z_beta) = delta_{alpha,beta}.
pub fn dual_functional(p: &LinkPattern, f: &Field, params: SleParams) -> Result<f64> {
    // Noise from one level of extrapolation enters the next level's ladder;
    // a floor of 1e-4 accommodates three nested levels while staying an
    // order of magnitude below any tolerance the duality is checked at.
    dual_functional_with_floor(p, f, params, 1e-4)
}

fn dual_functional_with_floor(
    p: &LinkPattern,
    f: &Field,
    params: SleParams,
    floor: f64,
) -> Result<f64> {
    if p.n() == 0 {
        return f(&Configuration::new(Vec::new())?);
    }
    // First link of the innermost-first ordering is consecutive: {j, j+1}.
    let (a, _) = p.allowable_ordering()[0];
    let reduced = p.remove_link(a)?;
    let g = move |rest: &Configuration| {
        let left = if a >= 2 { Some(rest.x(a - 1)) } else { None };
        let right = rest.points().get(a - 1).copied();
        let xi = match (left, right) {
            (Some(l), Some(r)) => 0.5 * (l + r),
            (Some(l), None) => l + 1.0,
            (None, Some(r)) => r - 1.0,
            (None, None) => 0.0,
        };
        asy_limit_with_floor(f, params, rest, a, xi, floor)
    };
    dual_functional_with_floor(&reduced, &g, params, floor)
}
