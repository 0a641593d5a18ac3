//! The verification suite: one check per headline claim of the crate, each
//! returning a machine-readable pass/fail record. Every tolerance is pinned
//! here, next to the check that uses it, so a report is reproducible from
//! the code alone.
//!
//! The fast checks are exact or closed-form comparisons and finish in well
//! under a minute together. The Monte Carlo checks integrate Loewner chains
//! and take minutes; they are split out so callers can choose.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{
    asy_limit, covariance_check, decay_slope, dual_functional, expected_slope, pde_residual,
    random_order_preserving_map, DecayFamily, DecayMode, Field,
};
use crate::combinatorics::{
    count_cover_inclusive_tilings, incidence_matrix, inverse_matrix, kw_related, DyckPath,
    LinkPattern, SkewShape,
};
use crate::error::Result;
use crate::loewner::{level_line_terminal, zalpha_driven_curve, McConfig};
use crate::params::{Configuration, SleParams};
use crate::partition::{
    conformal_block, cross_ratio, gff_symmetric, ising_symmetric, ising_symmetric_brute,
    lerw_symmetric, pure_partition_k4, pure_partition_n2, PureBasis,
};
use crate::probabilities::{marginal_probability, marginal_weighting_function};

/// Outcome of a single suite check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    /// Human-readable statement of the pinned tolerance / pass condition.
    pub tolerance: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn run_check(
    id: u32,
    name: &'static str,
    tolerance: &'static str,
    time_budget: Option<f64>,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CheckResult {
    let t0 = Instant::now();
    let outcome = body();
    let seconds = t0.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match outcome {
        Ok(o) => o,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(budget) = time_budget {
        if seconds > budget {
            passed = false;
            let _ = write!(detail, "; exceeded time budget of {budget} s");
        }
    }
    CheckResult {
        id,
        name,
        tolerance,
        passed,
        detail,
        seconds,
    }
}

fn pat(s: &str) -> LinkPattern {
    s.parse().expect("fixture pattern parses")
}

/// Random configuration with gaps in [0.1, 1.5), matching the scale the
/// closed forms are well-conditioned on.
fn random_config<R: Rng>(n: usize, rng: &mut R) -> Configuration {
    random_config_spaced(n, rng, 0.1, 1.5)
}

/// Like `random_config` with a chosen gap range. The finite-difference
/// residual check needs gaps well above the step size: the relative
/// discretization error grows like (step / gap)^2.
fn random_config_spaced<R: Rng>(n: usize, rng: &mut R, lo: f64, hi: f64) -> Configuration {
    let mut pts = Vec::with_capacity(2 * n);
    let mut x = rng.gen_range(-2.0..0.0);
    for _ in 0..2 * n {
        x += rng.gen_range(lo..hi);
        pts.push(x);
    }
    Configuration::new(pts).expect("increasing by construction")
}

/// Hand-checkable change-of-basis tables at N = 2, 3, plus the exact
/// inverse identity M Minv = I up to N = 5.
pub fn check_matrix_tables() -> CheckResult {
    run_check(
        1,
        "matrix-tables",
        "exact integer equality; runtime < 1 s",
        Some(1.0),
        || {
            let m2 = incidence_matrix(2)?;
            let inv2 = inverse_matrix(2)?;
            let order2 = vec![pat("1-4,2-3"), pat("1-2,3-4")];
            let mut ok = m2.order == order2
                && m2.entries == vec![vec![1, 0], vec![1, 1]]
                && inv2.order == order2
                && inv2.entries == vec![vec![1, 0], vec![-1, 1]];

            let m3 = incidence_matrix(3)?;
            let inv3 = inverse_matrix(3)?;
            let order3 = vec![
                pat("1-6,2-5,3-4"),
                pat("1-6,2-3,4-5"),
                pat("1-4,2-3,5-6"),
                pat("1-2,3-6,4-5"),
                pat("1-2,3-4,5-6"),
            ];
            ok &= m3.order == order3
                && m3.entries
                    == vec![
                        vec![1, 0, 0, 0, 0],
                        vec![1, 1, 0, 0, 0],
                        vec![0, 1, 1, 0, 0],
                        vec![0, 1, 0, 1, 0],
                        vec![1, 1, 1, 1, 1],
                    ]
                && inv3.order == order3
                && inv3.entries
                    == vec![
                        vec![1, 0, 0, 0, 0],
                        vec![-1, 1, 0, 0, 0],
                        vec![1, -1, 1, 0, 0],
                        vec![1, -1, 0, 1, 0],
                        vec![-2, 1, -1, -1, 1],
                    ];

            for n in 0..=5 {
                let m = incidence_matrix(n)?;
                let inv = inverse_matrix(n)?;
                let id = crate::combinatorics::SignedIntMatrix::identity(n, m.order.clone());
                ok &= m.multiply(&inv) == id && inv.multiply(&m) == id;
            }
            Ok((ok, "N = 2, 3 tables and M Minv = I up to N = 5".into()))
        },
    )
}

/// Signed cover-inclusive Dyck tiling counts reproduce every entry of the
/// inverse incidence matrix.
pub fn check_tiling_counts() -> CheckResult {
    run_check(
        2,
        "tiling-counts",
        "exact for every comparable pair, N <= 4; runtime < 30 s",
        Some(30.0),
        || {
            let mut pairs = 0u64;
            for n in 0..=4 {
                let inv = inverse_matrix(n)?;
                for (i, a) in inv.order.iter().enumerate() {
                    for (j, b) in inv.order.iter().enumerate() {
                        let (da, db) = (a.to_dyck(), b.to_dyck());
                        if !da.leq(&db)? {
                            if inv.entries[i][j] != 0 {
                                return Ok((false, format!("nonzero entry off order at {a}, {b}")));
                            }
                            continue;
                        }
                        let shape = SkewShape::new(da, db)?;
                        let count = count_cover_inclusive_tilings(&shape)? as i64;
                        let sign = if shape.area() % 2 == 0 { 1 } else { -1 };
                        if sign * count != inv.entries[i][j] {
                            return Ok((
                                false,
                                format!(
                                    "mismatch at {a}, {b}: signed count {} vs entry {}",
                                    sign * count,
                                    inv.entries[i][j]
                                ),
                            ));
                        }
                        pairs += 1;
                    }
                }
            }
            Ok((true, format!("{pairs} comparable pairs verified")))
        },
    )
}

/// Catalan enumeration counts and the partial order: the binary relation
/// implies the nesting order, and its transitive closure equals it.
pub fn check_catalan_and_order() -> CheckResult {
    run_check(
        3,
        "catalan-and-order",
        "exact; counts to n = 8, order structure to N = 5",
        None,
        || {
            for n in 0..=8u64 {
                let mut catalan = 1u64;
                for k in 0..n {
                    catalan = catalan * 2 * (2 * k + 1) / (k + 2);
                }
                let listed = DyckPath::enumerate(n as usize).len() as u64;
                if listed != catalan {
                    return Ok((false, format!("C_{n}: enumerated {listed}, expected {catalan}")));
                }
            }
            for n in 0..=5 {
                let ps = LinkPattern::enumerate_with_cap(n, 5)?;
                let d = ps.len();
                let mut reach = vec![vec![false; d]; d];
                for i in 0..d {
                    for j in 0..d {
                        if kw_related(&ps[i], &ps[j])? {
                            if !ps[i].to_dyck().leq(&ps[j].to_dyck())? {
                                return Ok((
                                    false,
                                    format!("relation without order: {} vs {}", ps[i], ps[j]),
                                ));
                            }
                            reach[i][j] = true;
                        }
                    }
                }
                for k in 0..d {
                    for i in 0..d {
                        if reach[i][k] {
                            for j in 0..d {
                                reach[i][j] |= reach[k][j];
                            }
                        }
                    }
                }
                for i in 0..d {
                    for j in 0..d {
                        if reach[i][j] != ps[i].to_dyck().leq(&ps[j].to_dyck())? {
                            return Ok((
                                false,
                                format!("closure mismatch at {} vs {}", ps[i], ps[j]),
                            ));
                        }
                    }
                }
            }
            Ok((true, "counts and order structure verified".into()))
        },
    )
}

/// The pure partition functions sum to the symmetric partition function.
pub fn check_basis_sum() -> CheckResult {
    const TOL: f64 = 1e-10;
    run_check(
        4,
        "basis-sum",
        "relative error <= 1e-10 at 50 random configurations per N <= 5",
        None,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(1004);
            let mut worst = 0.0f64;
            for n in 1..=5 {
                let basis = PureBasis::new(n)?;
                for _ in 0..50 {
                    let x = random_config(n, &mut rng);
                    let mut sum = 0.0;
                    for p in basis.patterns() {
                        sum += basis.z_alpha(p, &x)?.value;
                    }
                    let target = gff_symmetric(&x);
                    worst = worst.max((sum - target).abs() / target);
                }
            }
            Ok((worst <= TOL, format!("max relative error {worst:.3e}")))
        },
    )
}

/// Small-N closed forms: the explicit N = 2 products and the N = 3 signed
/// block combinations.
pub fn check_closed_forms() -> CheckResult {
    const TOL: f64 = 1e-10;
    run_check(
        5,
        "closed-forms",
        "relative error <= 1e-10 at 20 random configurations for N = 2 and 3",
        None,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(1005);
            let mut worst = 0.0f64;
            let basis2 = PureBasis::new(2)?;
            for _ in 0..20 {
                let x = random_config(2, &mut rng);
                let (x1, x2, x3, x4) = (x.x(1), x.x(2), x.x(3), x.x(4));
                let rainbow = ((x4 - x3) * (x2 - x1)
                    / ((x4 - x1) * (x3 - x1) * (x4 - x2) * (x3 - x2)))
                    .sqrt();
                let unnested = ((x4 - x1) * (x3 - x2)
                    / ((x3 - x1) * (x2 - x1) * (x4 - x3) * (x4 - x2)))
                    .sqrt();
                let zr = basis2.z_alpha(&pat("1-4,2-3"), &x)?.value;
                let zu = basis2.z_alpha(&pat("1-2,3-4"), &x)?.value;
                worst = worst.max((zr - rainbow).abs() / rainbow);
                worst = worst.max((zu - unnested).abs() / unnested);
            }

            // N = 3: each pure partition function as a signed combination of
            // blocks, with the blocks evaluated independently.
            let basis3 = PureBasis::new(3)?;
            let order: Vec<LinkPattern> = vec![
                pat("1-6,2-5,3-4"),
                pat("1-6,2-3,4-5"),
                pat("1-4,2-3,5-6"),
                pat("1-2,3-6,4-5"),
                pat("1-2,3-4,5-6"),
            ];
            let coeffs: [[i64; 5]; 5] = [
                [1, 0, 0, 0, 0],
                [-1, 1, 0, 0, 0],
                [1, -1, 1, 0, 0],
                [1, -1, 0, 1, 0],
                [-2, 1, -1, -1, 1],
            ];
            for _ in 0..20 {
                let x = random_config(3, &mut rng);
                let blocks: Vec<f64> = order
                    .iter()
                    .map(|p| conformal_block(p, &x))
                    .collect::<Result<_>>()?;
                for (p, row) in order.iter().zip(&coeffs) {
                    let combo: f64 = row
                        .iter()
                        .zip(&blocks)
                        .map(|(&c, &u)| c as f64 * u)
                        .sum();
                    let z = basis3.z_alpha(p, &x)?.value;
                    worst = worst.max((z - combo).abs() / z.abs());
                }
            }
            Ok((worst <= TOL, format!("max relative error {worst:.3e}")))
        },
    )
}

const PDE_STEP: f64 = 1e-3;
const PDE_TOL: f64 = 1e-5;
const PDE_ORDER_BAND: (f64, f64) = (1.8, 2.2);
/// The order is observed between these two steps, not at PDE_STEP: at step
/// 1e-3 the residual of the well-conditioned fields is already within an
/// order of magnitude of the roundoff floor, which buries the step-halving
/// signal. Larger steps trade a little truncation bias (O(step^2), ~1e-5
/// on the observed order here) for a clean signal-to-roundoff ratio.
const PDE_ORDER_STEPS: (f64, f64) = (4e-3, 2e-3);
/// Below this relative residual at the smaller order step the leading
/// error coefficient is degenerate and the ratio carries no convergence
/// information; such cases are already two orders of magnitude inside the
/// tolerance and pass outright.
const PDE_ORDER_FLOOR: f64 = 1e-8;

struct PdeTally {
    worst_residual: f64,
    worst_order_dev: f64,
    failures: Vec<String>,
}

fn pde_check_field(
    label: &str,
    f: &Field,
    params: SleParams,
    configs: &[Configuration],
    tally: &mut PdeTally,
) -> Result<()> {
    for x in configs {
        for i in 1..=2 * x.n() {
            let r = pde_residual(f, params, x, i, PDE_STEP)?;
            tally.worst_residual = tally.worst_residual.max(r.relative);
            if r.relative > PDE_TOL {
                tally
                    .failures
                    .push(format!("{label} i={i}: residual {:.3e}", r.relative));
                continue;
            }
            let r1 = pde_residual(f, params, x, i, PDE_ORDER_STEPS.0)?;
            let r2 = pde_residual(f, params, x, i, PDE_ORDER_STEPS.1)?;
            if r2.relative < PDE_ORDER_FLOOR {
                continue;
            }
            let order = (r1.relative / r2.relative).log2();
            tally.worst_order_dev = tally.worst_order_dev.max((order - 2.0).abs());
            if !(PDE_ORDER_BAND.0..=PDE_ORDER_BAND.1).contains(&order) {
                tally.failures.push(format!(
                    "{label} i={i}: order {order:.2} (r={:.3e} r1={:.3e} r2={:.3e})",
                    r.relative, r1.relative, r2.relative
                ));
            }
        }
    }
    Ok(())
}

/// Finite-difference residuals of the second-order PDE system for every
/// implemented solution family.
pub fn check_pde_residuals() -> CheckResult {
    run_check(
        6,
        "pde-residuals",
        "relative residual < 1e-5 at step 1e-3, observed order 2.0 +- 0.2, \
         all equations, N <= 4, 10 random configurations per field",
        None,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(1006);
            let mut tally = PdeTally {
                worst_residual: 0.0,
                worst_order_dev: 0.0,
                failures: Vec::new(),
            };
            let gff = SleParams::gff();
            for n in 1..=4 {
                let basis = PureBasis::new(n)?;
                let configs: Vec<Configuration> =
                    (0..10).map(|_| random_config_spaced(n, &mut rng, 0.5, 2.0)).collect();
                for p in basis.patterns() {
                    let f = |c: &Configuration| Ok(basis.z_alpha(p, c)?.value);
                    pde_check_field(&format!("Z[{p}]"), &f, gff, &configs, &mut tally)?;
                    let u = |c: &Configuration| conformal_block(p, c);
                    pde_check_field(&format!("U[{p}]"), &u, gff, &configs, &mut tally)?;
                }
                let g = |c: &Configuration| Ok(gff_symmetric(c));
                pde_check_field("Z_gff", &g, gff, &configs, &mut tally)?;
                for a in (1..=2 * n).step_by(2) {
                    for b in (2..=2 * n).step_by(2) {
                        let f = |c: &Configuration| marginal_weighting_function(c, a, b);
                        pde_check_field(&format!("F[{a},{b}]"), &f, gff, &configs, &mut tally)?;
                    }
                }
                let ising = |c: &Configuration| ising_symmetric(c);
                pde_check_field("Z_ising", &ising, SleParams::ising(), &configs, &mut tally)?;
                let lerw = |c: &Configuration| lerw_symmetric(c);
                pde_check_field("Z_lerw", &lerw, SleParams::lerw(), &configs, &mut tally)?;
            }
            let detail = if tally.failures.is_empty() {
                format!(
                    "max residual {:.3e}, max order deviation {:.2}",
                    tally.worst_residual, tally.worst_order_dev
                )
            } else {
                format!(
                    "{} violations: {}",
                    tally.failures.len(),
                    tally.failures.join(" | ")
                )
            };
            Ok((tally.failures.is_empty(), detail))
        },
    )
}

/// Covariance of every family under random order-preserving Mobius maps.
pub fn check_covariance() -> CheckResult {
    const TOL: f64 = 1e-9;
    run_check(
        7,
        "mobius-covariance",
        "relative error < 1e-9 over 100 random order-preserving maps per family, N <= 4",
        None,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(1007);
            let mut worst = 0.0f64;
            let gff = SleParams::gff();
            for family in 0..6 {
                for _ in 0..100 {
                    let n = rng.gen_range(1..=4usize);
                    let x = random_config(n, &mut rng);
                    let m = random_order_preserving_map(&mut rng, &x);
                    let basis = PureBasis::new(n)?;
                    let patterns = basis.patterns();
                    let p = patterns[rng.gen_range(0..patterns.len())].clone();
                    let a = 2 * rng.gen_range(0..n) + 1;
                    let b = 2 * rng.gen_range(1..=n);
                    let err = match family {
                        0 => {
                            let f = |c: &Configuration| Ok(basis.z_alpha(&p, c)?.value);
                            covariance_check(&f, gff, &x, &m)?
                        }
                        1 => {
                            let f = |c: &Configuration| conformal_block(&p, c);
                            covariance_check(&f, gff, &x, &m)?
                        }
                        2 => {
                            let f = |c: &Configuration| Ok(gff_symmetric(c));
                            covariance_check(&f, gff, &x, &m)?
                        }
                        3 => {
                            let f = |c: &Configuration| marginal_weighting_function(c, a, b);
                            covariance_check(&f, gff, &x, &m)?
                        }
                        4 => {
                            let f = |c: &Configuration| ising_symmetric(c);
                            covariance_check(&f, SleParams::ising(), &x, &m)?
                        }
                        _ => {
                            let f = |c: &Configuration| lerw_symmetric(c);
                            covariance_check(&f, SleParams::lerw(), &x, &m)?
                        }
                    };
                    worst = worst.max(err);
                }
            }
            Ok((worst < TOL, format!("max relative error {worst:.3e}")))
        },
    )
}

/// Fused-pair limits: collapsing a linked pair reduces the pattern, any
/// other pair kills the function.
pub fn check_asymptotics() -> CheckResult {
    const TOL: f64 = 1e-4;
    run_check(
        8,
        "fused-pair-limits",
        "limits match reduced targets (or 0) within 1e-4, all slots and patterns, N <= 4",
        None,
        || {
            let params = SleParams::gff();
            let mut worst = 0.0f64;

            // N = 1: the limit normalizes to 1.
            let basis1 = PureBasis::new(1)?;
            let f1 = |c: &Configuration| Ok(basis1.z_alpha(&LinkPattern::unnested(1), c)?.value);
            let empty = Configuration::new(Vec::new())?;
            worst = worst.max((asy_limit(&f1, params, &empty, 1, 0.0)? - 1.0).abs());

            for n in 2..=4 {
                let basis = PureBasis::new(n)?;
                let reduced_basis = PureBasis::new(n - 1)?;
                let rest =
                    Configuration::new((0..2 * n - 2).map(|k| k as f64).collect())?;
                for p in basis.patterns() {
                    for j in 1..=2 * n - 1 {
                        let xi = if j == 1 {
                            rest.x(1) - 1.0
                        } else if j == 2 * n - 1 {
                            rest.x(2 * n - 2) + 1.0
                        } else {
                            0.5 * (rest.x(j - 1) + rest.x(j))
                        };
                        let f = |c: &Configuration| Ok(basis.z_alpha(p, c)?.value);
                        let v = asy_limit(&f, params, &rest, j, xi)?;
                        let target = if p.contains_link(j, j + 1) {
                            reduced_basis.z_alpha(&p.remove_link(j)?, &rest)?.value
                        } else {
                            0.0
                        };
                        let err = (v - target).abs() / target.abs().max(1.0);
                        if err > worst {
                            worst = err;
                        }
                    }
                }
            }
            Ok((worst <= TOL, format!("max deviation {worst:.3e}")))
        },
    )
}

/// The collapse functionals are dual to the pure partition basis.
pub fn check_dual_basis() -> CheckResult {
    const TOL: f64 = 1e-3;
    run_check(
        9,
        "dual-basis",
        "|L_a(Z_b) - delta_ab| < 1e-3 for all 25 pairs at N = 3",
        None,
        || {
            let params = SleParams::gff();
            let basis = PureBasis::new(3)?;
            let mut worst = 0.0f64;
            for a in basis.patterns() {
                for b in basis.patterns() {
                    let f = |c: &Configuration| Ok(basis.z_alpha(b, c)?.value);
                    let v = dual_functional(a, &f, params)?;
                    let target = if a == b { 1.0 } else { 0.0 };
                    worst = worst.max((v - target).abs());
                }
            }
            Ok((worst < TOL, format!("max deviation {worst:.3e}")))
        },
    )
}

/// Fitted power-law decay slopes against their predicted exponents.
pub fn check_decay_slopes() -> CheckResult {
    const TOL: f64 = 1e-2;
    run_check(
        10,
        "decay-slopes",
        "fitted slope within 1e-2 of the predicted exponent, N <= 5, both families and modes",
        None,
        || {
            let mut worst = 0.0f64;
            for n in 1..=5 {
                for family in [DecayFamily::RainbowZ, DecayFamily::GffZ] {
                    for mode in [DecayMode::OneEnd, DecayMode::BothEnds] {
                        let slope = decay_slope(family, n, mode)?;
                        let expect = expected_slope(family, n, mode);
                        worst = worst.max((slope - expect).abs());
                    }
                }
            }
            Ok((worst < TOL, format!("max slope deviation {worst:.3e}")))
        },
    )
}

/// The general-kappa N = 2 formula against its algebraic special cases.
pub fn check_general_kappa_n2() -> CheckResult {
    const TOL: f64 = 1e-8;
    run_check(
        11,
        "general-kappa-n2",
        "relative error <= 1e-8 against the kappa = 2, 4, 16/3 special cases, 20 random configurations",
        None,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(1011);
            let mut worst = 0.0f64;
            let rainbow = LinkPattern::rainbow(2);
            let unnested = LinkPattern::unnested(2);
            let k2 = SleParams::lerw();
            let k4 = SleParams::gff();
            let k163 = SleParams::new(16.0 / 3.0)?;
            for _ in 0..20 {
                let x = random_config(2, &mut rng);
                let z = cross_ratio(&x)?;
                let (x1, x2, x3, x4) = (x.x(1), x.x(2), x.x(3), x.x(4));

                let target2 = (x4 - x1).powi(-2) * (x3 - x2).powi(-2) * z * (2.0 - z);
                let got2 = pure_partition_n2(&rainbow, k2, &x)?;
                worst = worst.max((got2 - target2).abs() / target2);

                let target163 = ((x4 - x1) * (x3 - x2)).powf(-0.125)
                    * z.powf(3.0 / 8.0)
                    * (1.0 + (1.0 - z).sqrt()).powf(-0.5);
                let got163 = pure_partition_n2(&rainbow, k163, &x)?;
                worst = worst.max((got163 - target163).abs() / target163);

                for p in [&rainbow, &unnested] {
                    let general = pure_partition_n2(p, k4, &x)?;
                    let direct = pure_partition_k4(p, &x)?.value;
                    worst = worst.max((general - direct).abs() / direct);
                }

                let total = pure_partition_n2(&rainbow, k2, &x)?
                    + pure_partition_n2(&unnested, k2, &x)?;
                let sym = lerw_symmetric(&x)?;
                worst = worst.max((total - sym).abs() / sym);
            }
            Ok((worst <= TOL, format!("max relative error {worst:.3e}")))
        },
    )
}

/// Pfaffian elimination against the brute-force signed pairing sum, and
/// positivity of the kappa = 2, 3 symmetric functions.
pub fn check_pfaffian_positivity() -> CheckResult {
    const TOL: f64 = 1e-12;
    run_check(
        12,
        "pfaffian-and-positivity",
        "elimination matches brute force to 1e-12, N <= 4; positivity at 100 random configurations",
        None,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(1012);
            let mut worst = 0.0f64;
            for n in 1..=4 {
                for _ in 0..5 {
                    let x = random_config(n, &mut rng);
                    let fast = ising_symmetric(&x)?;
                    let brute = ising_symmetric_brute(&x, 6)?;
                    worst = worst.max((fast - brute).abs() / brute.abs());
                }
            }
            if worst > TOL {
                return Ok((false, format!("elimination mismatch {worst:.3e}")));
            }
            for k in 0..100 {
                let n = k % 4 + 1;
                let x = random_config(n, &mut rng);
                if ising_symmetric(&x)? <= 0.0 || lerw_symmetric(&x)? <= 0.0 {
                    return Ok((false, format!("nonpositive symmetric function at n = {n}")));
                }
            }
            Ok((
                true,
                format!("max elimination error {worst:.3e}; all 100 values positive"),
            ))
        },
    )
}

/// Monte Carlo level-line terminal frequencies against the closed-form
/// marginal probabilities.
pub fn check_mc_marginals() -> CheckResult {
    // The 300 s budget is referenced to a 4-core machine; the sampler
    // parallelizes linearly in cores up to that point, so on fewer cores
    // the wall budget scales up accordingly.
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let budget = 300.0 * 4.0 / cores.min(4) as f64;
    run_check(
        13,
        "mc-marginals",
        "terminal frequencies within 3 sigma at 1e4 samples, discard rate < 1%, \
         runtime < 5 min at 4 cores",
        Some(budget),
        || {
            let cfg = McConfig::default();
            let mut worst_z = 0.0f64;
            let mut worst_discard = 0.0f64;
            for pts in [vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]] {
                let x = Configuration::new(pts)?;
                let hist = level_line_terminal(&x, &cfg)?;
                worst_discard = worst_discard.max(hist.discard_fraction());
                let total = hist.total() as f64;
                for e in hist.endpoints() {
                    let p = marginal_probability(&x, 1, e)?;
                    let sigma = (p * (1.0 - p) / total).sqrt();
                    let z = (hist.frequency(e) - p).abs() / sigma;
                    worst_z = worst_z.max(z);
                }
            }
            Ok((
                worst_z <= 3.0 && worst_discard < 0.01,
                format!("max |z| = {worst_z:.2}, max discard fraction {worst_discard:.4}"),
            ))
        },
    )
}

/// Chains driven by a pure partition function land on the paired endpoint.
pub fn check_mc_drive() -> CheckResult {
    run_check(
        14,
        "mc-drive",
        "terminal = paired endpoint in >= 99% of non-discarded runs, 1e3 samples per pattern",
        None,
        || {
            let cfg = McConfig {
                samples: 1_000,
                ..McConfig::default()
            };
            let x4 = Configuration::new(vec![0.0, 1.0, 2.0, 3.0])?;
            let x6 = Configuration::new(vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0])?;
            let runs = [
                ("1-2,3-4", &x4),
                ("1-4,2-3", &x4),
                ("1-2,3-4,5-6", &x6),
                ("1-6,2-5,3-4", &x6),
            ];
            let mut detail = String::new();
            let mut ok = true;
            for (s, x) in runs {
                let report = zalpha_driven_curve(&pat(s), 1, x, &cfg)?;
                let frac = report.paired_fraction();
                ok &= frac >= 0.99;
                let _ = write!(
                    detail,
                    "{s}: {frac:.4} ({} discarded); ",
                    report.discarded
                );
            }
            Ok((ok, detail.trim_end_matches("; ").to_string()))
        },
    )
}

/// The exact and closed-form checks; finishes in well under a minute.
pub fn fast_checks() -> Vec<CheckResult> {
    vec![
        check_matrix_tables(),
        check_tiling_counts(),
        check_catalan_and_order(),
        check_basis_sum(),
        check_closed_forms(),
        check_pde_residuals(),
        check_covariance(),
        check_asymptotics(),
        check_dual_basis(),
        check_decay_slopes(),
        check_general_kappa_n2(),
        check_pfaffian_positivity(),
    ]
}

/// The Monte Carlo checks; these integrate Loewner chains and take minutes.
pub fn monte_carlo_checks() -> Vec<CheckResult> {
    vec![check_mc_marginals(), check_mc_drive()]
}

/// Everything.
pub fn full_checks() -> Vec<CheckResult> {
    let mut all = fast_checks();
    all.extend(monte_carlo_checks());
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_carry_their_metadata() {
        let r = check_matrix_tables();
        assert_eq!(r.id, 1);
        assert!(r.passed, "{}", r.detail);
        assert!(r.seconds < 1.0);
    }
}
