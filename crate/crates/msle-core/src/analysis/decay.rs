//! Power-law decay exponents of the rainbow pure partition function and the
//! symmetric partition function as marked points fuse.

use crate::combinatorics::LinkPattern;
use crate::error::Result;
use crate::params::Configuration;
use crate::partition::blocks::log_gff_symmetric;
use crate::partition::pure::PureBasis;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayFamily {
    RainbowZ,
    GffZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayMode {
    OneEnd,
    BothEnds,
}

/// The configuration (eps, 2 eps, ..., N eps, 1, ..., N) or its both-ends
/// variant (eps, ..., N eps, 1 + eps, ..., 1 + N eps).
fn decay_configuration(n: usize, mode: DecayMode, eps: f64) -> Result<Configuration> {
    let mut pts: Vec<f64> = (1..=n).map(|j| j as f64 * eps).collect();
    match mode {
        DecayMode::OneEnd => pts.extend((1..=n).map(|j| j as f64)),
        DecayMode::BothEnds => pts.extend((1..=n).map(|j| 1.0 + j as f64 * eps)),
    }
    Configuration::new(pts)
}

/// Expected slope from the decay propositions.
pub fn expected_slope(family: DecayFamily, n: usize, mode: DecayMode) -> f64 {
    let one_end = match family {
        DecayFamily::RainbowZ => (n * (n - 1)) as f64 / 4.0,
        DecayFamily::GffZ => {
            if n % 2 == 0 {
                -(n as f64) / 4.0
            } else {
                -((n - 1) as f64) / 4.0
            }
        }
    };
    match mode {
        DecayMode::OneEnd => one_end,
        DecayMode::BothEnds => 2.0 * one_end,
    }
}

/// Least-squares slope of log f against log eps over eps = 2^-10 ... 2^-18.
/// (Shallower ladders starting at 2^-4 leave an O(eps) bias of ~2e-2 in the
/// fitted slope; this range brings it well under 1e-2.)
pub fn decay_slope(family: DecayFamily, n: usize, mode: DecayMode) -> Result<f64> {
    let basis = match family {
        DecayFamily::RainbowZ => Some(PureBasis::new(n)?),
        DecayFamily::GffZ => None,
    };
    let rainbow = LinkPattern::rainbow(n);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 10..=18 {
        let eps = 2f64.powi(-k);
        let x = decay_configuration(n, mode, eps)?;
        let log_f = match &basis {
            Some(b) => b.z_alpha(&rainbow, &x)?.log_value,
            None => log_gff_symmetric(&x),
        };
        xs.push(eps.ln());
        ys.push(log_f);
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(num / den)
}
