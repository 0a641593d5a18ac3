//! Monte Carlo integration of the GFF level line started from x_1: an
//! SLE_4(-2, +2, ..., -2) process whose driving function satisfies
//!   dW = 2 dB + sum_{i >= 2} -rho_i dt / (V_i - W),   rho_i = 2 (-1)^{i+1},
//! with force points at x_2, ..., x_{2N}. The curve is simple and ends at
//! one of the even-indexed points, and every image between the seed and the
//! terminal collapses onto W only at the terminal time.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Configuration;

use super::state::{
    sample_rng, LoewnerState, McConfig, TerminalHistogram, DEEP_COLLAPSE_RATIO, DT_FLOOR,
    MAX_STEPS,
};

/// What a single integration step did.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    /// Advanced the chain by the given capacity increment.
    Advanced { dt: f64 },
    /// The stopping rule fired; the curve terminates at x_e.
    Terminated { endpoint: usize },
}

/// Step-by-step integrator for one level-line sample.
pub struct LevelLineSampler {
    state: LoewnerState,
    cfg: McConfig,
    deep: f64,
    steps: u64,
}

impl LevelLineSampler {
    pub fn new(x: &Configuration, cfg: &McConfig) -> Result<Self> {
        cfg.validate()?;
        if x.n() == 0 {
            return Err(Error::InvalidConfiguration("no marked points".into()));
        }
        let diameter = x.points()[x.points().len() - 1] - x.points()[0];
        Ok(Self {
            state: LoewnerState::start(x, 1)?,
            cfg: *cfg,
            deep: DEEP_COLLAPSE_RATIO * diameter,
            steps: 0,
        })
    }

    pub fn state(&self) -> &LoewnerState {
        &self.state
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// The even endpoint whose conditional connection probability has risen
    /// above 1 - delta_stop, if any. Stopping on the conditional probability
    /// rather than on raw image gaps matters for the error budget: the gap
    /// ratios of a collapsing cluster form a critical (logarithmically
    /// recurrent) diffusion, so a curve that has squeezed a cluster down by
    /// any fixed gap ratio still backs out and terminates elsewhere with a
    /// probability that decays only logarithmically in that ratio. The
    /// probability itself is a martingale, so firing at 1 - delta_stop
    /// bounds the per-sample misattribution by delta_stop exactly.
    fn terminal_candidate(&self) -> Option<usize> {
        let s = &self.state;
        let q = |e: &usize| s.endpoint_probability(1, *e);
        let evens = (1..=s.g.len()).filter(|&e| e % 2 == 0);
        if let Some(e) = evens.clone().find(|e| q(e) >= 1.0 - self.cfg.delta_stop) {
            return Some(e);
        }
        // Deep-collapse fallback: the gap ratios, and with them the
        // endpoint probabilities, are frozen at their values from the
        // termination time, so the largest one identifies the terminal.
        if s.min_gap() < self.deep {
            return evens.max_by(|a, b| q(a).total_cmp(&q(b)));
        }
        None
    }

    /// One adaptive Euler-Maruyama step for W with the exact image update.
    /// Errors mean the sample must be discarded.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<StepOutcome> {
        if let Some(e) = self.terminal_candidate() {
            for i in 1..e {
                self.state.swallowed[i] = true;
            }
            return Ok(StepOutcome::Terminated { endpoint: e });
        }
        if self.steps >= MAX_STEPS {
            return Err(Error::NonConvergence("step budget exhausted".into()));
        }
        let gap = self.state.min_gap();
        let dt = self.cfg.dt_base * gap.powf(self.cfg.gap_exponent);
        if !(dt > DT_FLOOR) {
            return Err(Error::NonConvergence(format!("capacity step underflow: {dt}")));
        }
        let mut drift = 0.0;
        for i in 2..=self.state.g.len() {
            if self.state.swallowed[i - 1] {
                continue;
            }
            // -rho_i / (V_i - W) with rho_i = 2 (-1)^{i+1}: even-indexed
            // points attract the driving function, odd-indexed ones repel.
            let sign = if i % 2 == 0 { 2.0 } else { -2.0 };
            drift += sign / self.state.g[i - 1];
        }
        let z: f64 = rng.sample(StandardNormal);
        let dw = 2.0 * dt.sqrt() * z + drift * dt;
        self.state.advance(dt, dw)?;
        self.steps += 1;
        Ok(StepOutcome::Advanced { dt })
    }

    /// Run the sample to termination. Returns the terminal endpoint and the
    /// elapsed capacity; an error means the sample is discarded.
    pub fn run<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<(usize, f64)> {
        loop {
            if let StepOutcome::Terminated { endpoint } = self.step(rng)? {
                return Ok((endpoint, self.state.t));
            }
        }
    }
}

/// Run a thunk on a rayon pool with the requested worker count (0 uses the
/// global default pool).
pub(crate) fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfiguration(e.to_string()))?;
    Ok(pool.install(f))
}

/// Sample the terminal endpoint of the level line from x_1, in parallel
/// across samples, and histogram the results.
pub fn level_line_terminal(x: &Configuration, cfg: &McConfig) -> Result<TerminalHistogram> {
    cfg.validate()?;
    let n = x.n();
    if n == 0 {
        return Err(Error::InvalidConfiguration("no marked points".into()));
    }
    with_pool(cfg.workers, || {
        (0..cfg.samples)
            .into_par_iter()
            .fold(
                || TerminalHistogram::new(n),
                |mut h, k| {
                    let mut rng = sample_rng(cfg.seed, k);
                    match LevelLineSampler::new(x, cfg).and_then(|mut s| s.run(&mut rng)) {
                        Ok((e, _)) => h.record(e),
                        Err(_) => h.record_discarded(),
                    }
                    h
                },
            )
            .reduce(|| TerminalHistogram::new(n), |a, b| a.merge(&b))
    })
}

/// Terminal frequencies of the full N = 2 connection pattern, read off the
/// first level line: ending at x_4 nests x_2 and x_3 under the curve (the
/// rainbow pattern), ending at x_2 leaves two side-by-side links.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PatternFrequencies {
    pub rainbow: u64,
    pub unnested: u64,
    pub discarded: u64,
}

impl PatternFrequencies {
    pub fn total(&self) -> u64 {
        self.rainbow + self.unnested
    }

    pub fn rainbow_frequency(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            self.rainbow as f64 / self.total() as f64
        }
    }
}

/// Monte Carlo frequencies of the two N = 2 patterns.
pub fn full_pattern_n2(x: &Configuration, cfg: &McConfig) -> Result<PatternFrequencies> {
    if x.n() != 2 {
        return Err(Error::InvalidConfiguration(format!(
            "need exactly 4 points, got {}",
            2 * x.n()
        )));
    }
    let h = level_line_terminal(x, cfg)?;
    Ok(PatternFrequencies {
        rainbow: h.count(4),
        unnested: h.count(2),
        discarded: h.discarded(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probabilities::marginal_probability;

    fn quick_cfg(samples: u64) -> McConfig {
        McConfig {
            dt_base: 1e-3,
            samples,
            ..McConfig::default()
        }
    }

    #[test]
    fn n1_always_terminates_at_x2() {
        let x = Configuration::new(vec![0.0, 1.0]).unwrap();
        let h = level_line_terminal(&x, &quick_cfg(200)).unwrap();
        assert_eq!(h.count(2), 200);
        assert_eq!(h.discarded(), 0);
    }

    #[test]
    fn histogram_independent_of_worker_count() {
        let x = Configuration::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let mut cfg = quick_cfg(120);
        cfg.workers = 1;
        let h1 = level_line_terminal(&x, &cfg).unwrap();
        cfg.workers = 4;
        let h4 = level_line_terminal(&x, &cfg).unwrap();
        assert_eq!(h1, h4);
        cfg.seed += 1;
        let other = level_line_terminal(&x, &cfg).unwrap();
        assert_ne!(h1, other);
    }

    #[test]
    fn n2_marginal_within_three_sigma() {
        let x = Configuration::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let cfg = quick_cfg(2000);
        let h = level_line_terminal(&x, &cfg).unwrap();
        let p = marginal_probability(&x, 1, 2).unwrap();
        let sigma = (p * (1.0 - p) / h.total() as f64).sqrt();
        let freq = h.frequency(2);
        assert!(
            (freq - p).abs() < 3.0 * sigma,
            "freq {freq} vs exact {p}, sigma {sigma}"
        );
        assert!(h.discard_fraction() < 0.01);
    }

    #[test]
    fn asymmetric_marginal_within_three_sigma() {
        // A lopsided geometry where the x_4 terminal is rare; gap-threshold
        // stopping rules visibly overcount it here, the probability-based
        // rule must not.
        let x = Configuration::new(vec![0.0, 1.0, 10.0, 11.0]).unwrap();
        let cfg = quick_cfg(2000);
        let h = level_line_terminal(&x, &cfg).unwrap();
        let p = marginal_probability(&x, 1, 2).unwrap();
        let sigma = (p * (1.0 - p) / h.total() as f64).sqrt();
        assert!(
            (h.frequency(2) - p).abs() < 3.0 * sigma,
            "freq {} vs exact {p}",
            h.frequency(2)
        );
    }

    #[test]
    fn n3_marginals_within_three_sigma() {
        let x = Configuration::new(vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let cfg = quick_cfg(1000);
        let h = level_line_terminal(&x, &cfg).unwrap();
        for e in [2, 4, 6] {
            let p = marginal_probability(&x, 1, e).unwrap();
            let sigma = (p * (1.0 - p) / h.total() as f64).sqrt();
            assert!(
                (h.frequency(e) - p).abs() < 3.0 * sigma,
                "e={e}: freq {} vs exact {p}",
                h.frequency(e)
            );
        }
        assert!(h.discard_fraction() < 0.01);
    }

    #[test]
    fn capacity_equals_sum_of_steps() {
        let x = Configuration::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let cfg = quick_cfg(1);
        let mut rng = sample_rng(cfg.seed, 0);
        let mut s = LevelLineSampler::new(&x, &cfg).unwrap();
        let mut total = 0.0;
        loop {
            match s.step(&mut rng).unwrap() {
                StepOutcome::Advanced { dt } => total += dt,
                StepOutcome::Terminated { .. } => break,
            }
        }
        assert_eq!(s.state().t, total);
        assert!(s.steps() > 0);
    }

    #[test]
    fn images_stay_ordered_throughout() {
        let x = Configuration::new(vec![0.0, 0.5, 1.5, 4.0]).unwrap();
        let cfg = quick_cfg(1);
        let mut rng = sample_rng(7, 0);
        let mut s = LevelLineSampler::new(&x, &cfg).unwrap();
        while let StepOutcome::Advanced { .. } = s.step(&mut rng).unwrap() {
            let st = s.state();
            for i in 1..4 {
                assert!(st.g[i] > st.g[i - 1]);
                assert!(st.g[i] > 0.0);
            }
        }
    }

    #[test]
    fn n2_pattern_frequencies_sum() {
        let x = Configuration::new(vec![-3.0, -1.0, 1.0, 3.0]).unwrap();
        let cfg = quick_cfg(400);
        let f = full_pattern_n2(&x, &cfg).unwrap();
        assert_eq!(f.total() + f.discarded, 400);
        // Exact rainbow probability at the symmetric configuration is 1/4.
        let sigma = (0.25 * 0.75 / f.total() as f64).sqrt();
        assert!((f.rainbow_frequency() - 0.25).abs() < 4.0 * sigma);
    }
}

