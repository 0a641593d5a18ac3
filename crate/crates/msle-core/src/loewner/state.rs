//! Loewner-chain state, Monte Carlo run configuration, and terminal
//! statistics shared by the level-line and drifted-chain samplers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::params::Configuration;

/// Hard cap on integration steps per sample; exceeding it discards the
/// sample rather than spinning forever.
pub const MAX_STEPS: u64 = 20_000_000;

/// Smallest admissible capacity step; anything below counts as underflow
/// and the sample is discarded. The state is stored in gap coordinates,
/// which keep full relative precision at any scale, so the floor only
/// guards against outright floating-point underflow of the adaptive step.
pub const DT_FLOOR: f64 = 1e-300;

/// Depth of the deep-collapse fallback, as a fraction of the configuration
/// diameter. The probability-based stopping rule can stall on a chain that
/// terminates while the images near the tip keep comparable shares of the
/// harmonic weight: past the termination time every gap and every mutual
/// gap difference decays at a common rate, so the endpoint probabilities
/// freeze below threshold while the gaps shrink without bound. Once the
/// nearest gap is this far below the configuration scale, the sample is
/// resolved by the largest frozen endpoint probability instead.
pub const DEEP_COLLAPSE_RATIO: f64 = 1e-100;

/// State of a chordal Loewner chain with marked boundary points: the
/// driving value W_t together with the gaps G^i_t = g_t(x_i) - W_t between
/// the images of the marked points and the driving value. The chain is
/// integrated entirely in gap coordinates: a terminal collapse squeezes the
/// gaps many orders of magnitude below |W|, where absolute image positions
/// would quantize at the floating-point resolution of W, while the gaps
/// themselves keep full relative precision at any scale.
#[derive(Debug, Clone)]
pub struct LoewnerState {
    /// Elapsed half-plane capacity, the sum of all accepted steps.
    pub t: f64,
    /// Driving value W_t.
    pub w: f64,
    /// Gaps g_t(x_i) - W_t; index i - 1 holds the gap of x_i.
    pub g: Vec<f64>,
    /// Marked points absorbed by the hull (the seed point from the start).
    pub swallowed: Vec<bool>,
}

impl LoewnerState {
    /// Start the chain at the marked point with 1-based index `a`.
    pub fn start(x: &Configuration, a: usize) -> Result<Self> {
        let m = 2 * x.n();
        if a < 1 || a > m {
            return Err(Error::InvalidConfiguration(format!(
                "seed index {a} out of range 1..={m}"
            )));
        }
        let mut swallowed = vec![false; m];
        swallowed[a - 1] = true;
        Ok(Self {
            t: 0.0,
            w: x.x(a),
            g: x.points().iter().map(|p| p - x.x(a)).collect(),
            swallowed,
        })
    }

    /// Smallest gap of an unswallowed image.
    pub fn min_gap(&self) -> f64 {
        self.g
            .iter()
            .zip(&self.swallowed)
            .filter(|(_, s)| !**s)
            .map(|(g, _)| g.abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Advance by `dt`, moving W by `dw` and every unswallowed image by the
    /// exact solution of dV = 2 dt / (V - W) with W frozen at its old value:
    /// the squared gap grows by exactly 4 dt, so images never cross W and
    /// their mutual order is preserved. Fails if the new W overshoots an
    /// image.
    pub fn advance(&mut self, dt: f64, dw: f64) -> Result<()> {
        for (g, s) in self.g.iter_mut().zip(&self.swallowed) {
            if *s {
                continue;
            }
            let next = g.signum() * (*g * *g + 4.0 * dt).sqrt() - dw;
            if next * g.signum() <= 0.0 {
                return Err(Error::OrderingBroken);
            }
            *g = next;
        }
        self.w += dw;
        self.t += dt;
        Ok(())
    }

    /// Whether two unswallowed images have collapsed onto the same
    /// floating-point value. Fused images update identically forever, so
    /// the chain state can no longer separate them; detectors still work
    /// (a fused pair contributes exactly cancelling factors) but drifts
    /// with singular pair interactions can no longer be evaluated.
    pub fn fused(&self) -> bool {
        let mut prev: Option<f64> = None;
        for (g, s) in self.g.iter().zip(&self.swallowed) {
            if *s {
                continue;
            }
            if prev == Some(*g) {
                return true;
            }
            prev = Some(*g);
        }
        false
    }

    /// Conditional probability that the curve grown from x_a ends at x_e,
    /// given the current chain state: the product over the other marked
    /// points of |(V_j - W) / (V_j - V_e)|^{s_j}, with exponent s_j = +1
    /// when j and the seed have opposite parity and -1 otherwise. This is
    /// the closed-form connection probability evaluated on the evolving
    /// configuration with W in the seed's slot, and it is a martingale of
    /// the level-line dynamics; stopping once it exceeds 1 - eps therefore
    /// misattributes the terminal with probability at most eps. It also
    /// behaves as a purely geometric terminal detector: every factor tends
    /// to 1 as W collapses onto V_e, and a pinched bubble between the seed
    /// and x_e cancels out of the product pair by pair, so the detector
    /// fires through pinches instead of stalling on them.
    pub fn endpoint_probability(&self, a: usize, e: usize) -> f64 {
        let mut p = 1.0;
        for j in 1..=self.g.len() {
            if j == a || j == e || self.swallowed[j - 1] {
                continue;
            }
            let r = (self.g[j - 1] / (self.g[j - 1] - self.g[e - 1])).abs();
            if (j + a) % 2 == 1 {
                p *= r;
            } else {
                p /= r;
            }
        }
        p
    }
}

/// Run parameters for the Monte Carlo samplers. A run is deterministic
/// given (seed, samples, workers); in fact each sample owns its own RNG
/// stream, so the histogram does not depend on `workers` at all.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct McConfig {
    /// Base capacity step; the actual step is dt_base * gap^gap_exponent.
    pub dt_base: f64,
    /// Power of the smallest image gap in the adaptive step.
    pub gap_exponent: f64,
    /// Stopping tolerance: a sample terminates at x_e once the conditional
    /// probability of ending there, read off the image configuration,
    /// exceeds 1 - delta_stop. The per-sample misattribution probability
    /// is then at most delta_stop.
    pub delta_stop: f64,
    /// Number of samples.
    pub samples: u64,
    /// Seed for the sample RNG streams.
    pub seed: u64,
    /// Worker threads; 0 picks the global default.
    pub workers: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            dt_base: 1e-4,
            gap_exponent: 2.0,
            delta_stop: 1e-3,
            samples: 10_000,
            seed: 42,
            workers: 0,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt_base > 0.0) {
            return Err(Error::InvalidConfiguration(format!(
                "dt_base must be positive, got {}",
                self.dt_base
            )));
        }
        if !(self.delta_stop > 0.0 && self.delta_stop < 1.0) {
            return Err(Error::InvalidConfiguration(format!(
                "delta_stop must lie in (0, 1), got {}",
                self.delta_stop
            )));
        }
        Ok(())
    }
}

/// RNG stream for one sample: a SplitMix64 finalizer over the run seed and
/// the sample index seeds an independent ChaCha8 generator. Seeding per
/// sample (rather than per worker) makes histograms independent of how
/// samples are sharded across threads.
pub(crate) fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

/// Counts of level-line terminals over the even-indexed endpoints
/// x_2, x_4, ..., x_{2N}, plus the number of discarded samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalHistogram {
    n: usize,
    counts: Vec<u64>,
    discarded: u64,
}

impl TerminalHistogram {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            counts: vec![0; n],
            discarded: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The even 1-based endpoint indices, in order.
    pub fn endpoints(&self) -> impl Iterator<Item = usize> {
        (1..=self.n).map(|k| 2 * k)
    }

    /// Record a terminal at the even endpoint x_e.
    pub fn record(&mut self, e: usize) {
        assert!(e % 2 == 0 && e / 2 <= self.n, "bad endpoint {e}");
        self.counts[e / 2 - 1] += 1;
    }

    pub fn record_discarded(&mut self) {
        self.discarded += 1;
    }

    /// Merge two histograms; elementwise addition, so the merge is
    /// associative and order-independent.
    pub fn merge(mut self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.discarded += other.discarded;
        self
    }

    /// Total recorded (non-discarded) samples.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count(&self, e: usize) -> u64 {
        assert!(e % 2 == 0 && e / 2 <= self.n, "bad endpoint {e}");
        self.counts[e / 2 - 1]
    }

    pub fn discarded(&self) -> u64 {
        self.discarded
    }

    pub fn discard_fraction(&self) -> f64 {
        let all = self.total() + self.discarded;
        if all == 0 {
            0.0
        } else {
            self.discarded as f64 / all as f64
        }
    }

    pub fn frequency(&self, e: usize) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            self.count(e) as f64 / self.total() as f64
        }
    }

    /// Wilson score interval for the terminal frequency at x_e with normal
    /// quantile `z` (1.96 for 95%).
    pub fn wilson_interval(&self, e: usize, z: f64) -> (f64, f64) {
        let n = self.total() as f64;
        if n == 0.0 {
            return (0.0, 1.0);
        }
        let p = self.count(e) as f64 / n;
        let z2 = z * z;
        let center = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
        let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        ((center - half).max(0.0), (center + half).min(1.0))
    }

    /// Pearson chi-square p-value of the counts against the expected
    /// endpoint probabilities (given in endpoint order).
    pub fn chi_square_p_value(&self, probs: &[f64]) -> Result<f64> {
        if probs.len() != self.n {
            return Err(Error::SizeMismatch {
                left: probs.len(),
                right: self.n,
            });
        }
        let total = self.total() as f64;
        if total == 0.0 {
            return Err(Error::InvalidConfiguration("empty histogram".into()));
        }
        let mut stat = 0.0;
        for (c, p) in self.counts.iter().zip(probs) {
            let expect = total * p;
            if expect <= 0.0 {
                return Err(Error::InvalidConfiguration(format!(
                    "nonpositive expected count {expect}"
                )));
            }
            let d = *c as f64 - expect;
            stat += d * d / expect;
        }
        if self.n == 1 {
            return Ok(1.0);
        }
        let dist = ChiSquared::new((self.n - 1) as f64)
            .map_err(|e| Error::InvalidConfiguration(e.to_string()))?;
        Ok(dist.sf(stat))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_start_and_gap() {
        let x = Configuration::new(vec![0.0, 1.0, 2.5, 3.0]).unwrap();
        let s = LoewnerState::start(&x, 1).unwrap();
        assert_eq!(s.w, 0.0);
        assert_eq!(s.min_gap(), 1.0);
        assert!(s.swallowed[0] && !s.swallowed[1]);
    }

    #[test]
    fn advance_preserves_order_and_capacity() {
        let x = Configuration::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let mut s = LoewnerState::start(&x, 1).unwrap();
        let mut total = 0.0;
        for k in 0..100 {
            let dt = 1e-3;
            let dw = if k % 2 == 0 { 5e-3 } else { -4e-3 };
            s.advance(dt, dw).unwrap();
            total += dt;
            for i in 1..4 {
                assert!(s.g[i] > 0.0);
                assert!(s.g[i] > s.g[i - 1]);
            }
        }
        assert_eq!(s.t, total);
    }

    #[test]
    fn advance_rejects_overshoot() {
        let x = Configuration::new(vec![0.0, 1.0]).unwrap();
        let mut s = LoewnerState::start(&x, 1).unwrap();
        assert!(matches!(
            s.advance(1e-6, 2.0),
            Err(Error::OrderingBroken)
        ));
    }

    #[test]
    fn endpoint_probabilities_at_start() {
        let x = Configuration::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let s = LoewnerState::start(&x, 1).unwrap();
        // From x_1 at (0, 1, 2, 3): ending at x_2 has probability 3/4 and
        // ending at x_4 has probability 1/4.
        assert!((s.endpoint_probability(1, 2) - 0.75).abs() < 1e-12);
        assert!((s.endpoint_probability(1, 4) - 0.25).abs() < 1e-12);
        // From x_2 the mirror symmetry gives 3/4 for ending at x_1.
        let s2 = LoewnerState::start(&x, 2).unwrap();
        assert!((s2.endpoint_probability(2, 1) - 0.75).abs() < 1e-12);
        assert!((s2.endpoint_probability(2, 3) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn endpoint_probability_near_collapse() {
        let x = Configuration::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let mut s = LoewnerState::start(&x, 1).unwrap();
        // W just below V_2: the curve is about to close at x_2.
        s.g[1] = 1e-9;
        assert!(s.endpoint_probability(1, 2) > 1.0 - 1e-6);
        // A pinched pair {V_2, V_3} well separated from W cancels out of
        // the product, leaving the x_4 probability near 1.
        let mut p = LoewnerState::start(&x, 1).unwrap();
        p.g[1] = 1.5;
        p.g[2] = 1.5 + 1e-9;
        p.g[3] = 2.5;
        assert!(p.endpoint_probability(1, 4) > 1.0 - 1e-6);
    }

    #[test]
    fn histogram_merge_is_elementwise() {
        let mut a = TerminalHistogram::new(2);
        a.record(2);
        a.record(4);
        a.record_discarded();
        let mut b = TerminalHistogram::new(2);
        b.record(4);
        let m = a.clone().merge(&b);
        assert_eq!(m.count(2), 1);
        assert_eq!(m.count(4), 2);
        assert_eq!(m.total(), 3);
        assert_eq!(m.discarded(), 1);
        assert_eq!(
            a.clone().merge(&b),
            TerminalHistogram::new(2).merge(&b).merge(&a)
        );
    }

    #[test]
    fn wilson_interval_brackets_frequency() {
        let mut h = TerminalHistogram::new(2);
        for _ in 0..750 {
            h.record(2);
        }
        for _ in 0..250 {
            h.record(4);
        }
        let (lo, hi) = h.wilson_interval(2, 1.96);
        assert!(lo < 0.75 && 0.75 < hi);
        assert!(hi - lo < 0.06);
    }

    #[test]
    fn chi_square_uniform_counts_have_large_p() {
        let mut h = TerminalHistogram::new(3);
        for e in [2, 4, 6] {
            for _ in 0..100 {
                h.record(e);
            }
        }
        let p = h
            .chi_square_p_value(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])
            .unwrap();
        assert!(p > 0.99, "p = {p}");
    }

    #[test]
    fn sample_rng_streams_differ() {
        use rand::RngCore;
        let a = sample_rng(42, 0).next_u64();
        let b = sample_rng(42, 1).next_u64();
        let c = sample_rng(43, 0).next_u64();
        assert_ne!(a, b);
        assert_ne!(a, c);
    }
}
