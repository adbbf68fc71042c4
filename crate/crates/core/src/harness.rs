//! Orchestrates Bell experiments: nominal settings with per-run jitter,
//! snap-to-grid exact settings, three disjoint sub-ensembles, exact and
//! Monte Carlo correlations, the Bell statistic, and the measurement
//! independence diagnostics.
//!
//! Nominal directions are what the experimenter controls; the exact setting
//! of a run is the nearest grid-compatible relative angle to the jittered
//! nominal one. The exact layer of a report uses the zero-jitter snap, so
//! the default 0/60/120-degree settings at L = 3600 give correlations of
//! exactly -1/2, +1/2, -1/2 and a Bell statistic of exactly 3/2.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::bitstring::{derive_seed, HiddenPermutation};
use crate::entangle::{joint_measure, make_singlet};
use crate::error::{Error, Result};
use crate::exact::{Rational, RationalAngle};
use crate::geometry::{bell_counterfactuals_defined, Obstruction};

/// A freely chosen polariser direction, known only to within `tolerance`
/// (half-width of the nominal neighbourhood, in turns).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NominalSetting {
    pub direction: RationalAngle,
    pub tolerance: Rational,
}

impl NominalSetting {
    pub fn new(direction: RationalAngle, tolerance: Rational) -> Result<Self> {
        if tolerance.is_zero() || tolerance.is_negative() {
            return Err(Error::InvalidArgument(
                "nominal tolerance must be positive".into(),
            ));
        }
        Ok(NominalSetting {
            direction,
            tolerance,
        })
    }
}

/// The grid-exact relative setting actually realized in a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSetting {
    /// Exact cosine of the relative angle, of the form 1 - 4k/L.
    pub cos_between: Rational,
    /// Offset, in grid steps, from the zero-jitter snap of the nominal.
    pub grid_index: i64,
}

/// The three nominal directions of a Bell experiment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BellSettings {
    pub a: NominalSetting,
    pub b: NominalSetting,
    pub c: NominalSetting,
}

impl Default for BellSettings {
    /// 0, 60 and 120 degrees with a 1-degree tolerance: every pairwise
    /// cosine (+-1/2) is grid-exact at the default L = 3600, so the exact
    /// Bell statistic is 3/2.
    fn default() -> Self {
        let tol = Rational::new(1, 360);
        BellSettings {
            a: NominalSetting {
                direction: RationalAngle::zero(),
                tolerance: tol.clone(),
            },
            b: NominalSetting {
                direction: RationalAngle::from_turns(1, 6),
                tolerance: tol.clone(),
            },
            c: NominalSetting {
                direction: RationalAngle::from_turns(1, 3),
                tolerance: tol,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnsembleTag {
    AB,
    AC,
    BC,
}

impl EnsembleTag {
    pub const ALL: [EnsembleTag; 3] = [EnsembleTag::AB, EnsembleTag::AC, EnsembleTag::BC];

    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleTag::AB => "AB",
            EnsembleTag::AC => "AC",
            EnsembleTag::BC => "BC",
        }
    }

    fn pair(self, s: &BellSettings) -> (&NominalSetting, &NominalSetting) {
        match self {
            EnsembleTag::AB => (&s.a, &s.b),
            EnsembleTag::AC => (&s.a, &s.c),
            EnsembleTag::BC => (&s.b, &s.c),
        }
    }
}

/// One run of one sub-ensemble; outcomes are reproducible from
/// (xi_seed, exact_cos, L).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BellRunLog {
    pub run_id: u64,
    pub ensemble_tag: EnsembleTag,
    pub xi_seed: u64,
    pub jitter_seed: u64,
    pub exact_cos: Rational,
    pub outcomes: (i8, i8),
}

/// Exact and empirical correlations per ensemble plus the Bell statistic
/// |Co(A,B) - Co(A,C)| - Co(B,C), computed exactly at the exact layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BellReport {
    pub level: usize,
    pub runs_per_ensemble: usize,
    pub master_seed: u64,
    pub co_ab_exact: Rational,
    pub co_ac_exact: Rational,
    pub co_bc_exact: Rational,
    pub co_ab_empirical: Rational,
    pub co_ac_empirical: Rational,
    pub co_bc_empirical: Rational,
    pub statistic: Rational,
    pub statistic_empirical: Rational,
}

fn bell_statistic(ab: &Rational, ac: &Rational, bc: &Rational) -> Rational {
    &(ab - ac).abs() - bc
}

/// Grid cosine 1 - 4k/L.
fn grid_cosine(k: i64, level: usize) -> Rational {
    &Rational::one() - &Rational::new(4 * k, level as i64)
}

/// Relative angle of grid step k, in turns, in [0, 1/2].
fn grid_angle_turns(k: i64, level: usize) -> f64 {
    let c = 1.0 - 4.0 * k as f64 / level as f64;
    c.clamp(-1.0, 1.0).acos() / std::f64::consts::TAU
}

/// Snaps a jittered relative angle onto the grid of representable cosines.
///
/// A uniform jitter is drawn inside each nominal neighbourhood; the exact
/// setting is the grid angle nearest the jittered relative angle, kept
/// inside the joint tolerance window. Deterministic per `jitter_seed`.
pub fn snap_to_grid(
    nominal: &NominalSetting,
    partner: &NominalSetting,
    level: usize,
    jitter_seed: u64,
) -> Result<ExactSetting> {
    let mut rng = ChaCha12Rng::seed_from_u64(jitter_seed);
    let tol_a = nominal.tolerance.to_f64();
    let tol_b = partner.tolerance.to_f64();
    let jitter = rng.random_range(-tol_a..=tol_a) - rng.random_range(-tol_b..=tol_b);
    snap_relative_angle(nominal, partner, level, jitter)
}

/// The zero-jitter snap used for a report's exact layer.
pub fn snap_nominal(
    nominal: &NominalSetting,
    partner: &NominalSetting,
    level: usize,
) -> Result<ExactSetting> {
    snap_relative_angle(nominal, partner, level, 0.0)
}

fn snap_relative_angle(
    nominal: &NominalSetting,
    partner: &NominalSetting,
    level: usize,
    jitter: f64,
) -> Result<ExactSetting> {
    if level < 2 || !level.is_multiple_of(2) {
        return Err(Error::GridIncompatible("any".into(), level));
    }
    let theta_nom = nominal
        .direction
        .circular_distance(&partner.direction)
        .to_f64();
    let window = (&nominal.tolerance + &partner.tolerance).to_f64();
    let lo = (theta_nom - window).max(0.0);
    let hi = (theta_nom + window).min(0.5);
    let theta = fold_half_turn(theta_nom + jitter);

    let k_max_grid = (level / 2) as i64;
    let k_lo = lowest_grid_index_at_or_above(lo, level);
    let k_hi = highest_grid_index_at_or_below(hi, level);
    if k_lo > k_hi {
        return Err(Error::NoCompatibleSetting);
    }
    let mut best_k = k_lo;
    let mut best_dist = f64::INFINITY;
    // the nearest admissible grid angle is within a couple of steps of the
    // unconstrained nearest; scan that neighbourhood clamped to the window
    let c = (std::f64::consts::TAU * theta).cos();
    let k_guess = ((1.0 - c) * level as f64 / 4.0).round() as i64;
    for k in (k_guess - 2).max(k_lo)..=(k_guess + 2).min(k_hi) {
        let d = (grid_angle_turns(k, level) - theta).abs();
        if d < best_dist {
            best_dist = d;
            best_k = k;
        }
    }
    if !best_dist.is_finite() {
        // guess fell outside the window: clamp to its nearest edge
        best_k = k_guess.clamp(k_lo, k_hi);
    }
    best_k = best_k.clamp(0, k_max_grid);

    let k_nom_guess = {
        let c = (std::f64::consts::TAU * theta_nom).cos();
        (((1.0 - c) * level as f64 / 4.0).round() as i64).clamp(k_lo, k_hi)
    };
    Ok(ExactSetting {
        cos_between: grid_cosine(best_k, level),
        grid_index: best_k - k_nom_guess,
    })
}

fn fold_half_turn(t: f64) -> f64 {
    let t = t.rem_euclid(1.0);
    if t > 0.5 {
        1.0 - t
    } else {
        t
    }
}

fn lowest_grid_index_at_or_above(angle: f64, level: usize) -> i64 {
    let k = ((1.0 - (std::f64::consts::TAU * angle).cos()) * level as f64 / 4.0).ceil() as i64;
    let mut k = k.clamp(0, (level / 2) as i64);
    while k > 0 && grid_angle_turns(k - 1, level) >= angle - 1e-15 {
        k -= 1;
    }
    while k <= (level / 2) as i64 && grid_angle_turns(k, level) < angle - 1e-15 {
        k += 1;
    }
    k
}

fn highest_grid_index_at_or_below(angle: f64, level: usize) -> i64 {
    let k = ((1.0 - (std::f64::consts::TAU * angle).cos()) * level as f64 / 4.0).floor() as i64;
    let mut k = k.clamp(0, (level / 2) as i64);
    while k < (level / 2) as i64 && grid_angle_turns(k + 1, level) <= angle + 1e-15 {
        k += 1;
    }
    while k >= 0 && grid_angle_turns(k, level) > angle + 1e-15 {
        k -= 1;
    }
    k
}

/// Runs the three sub-ensembles and assembles the report plus one log line
/// per run. Identical (master_seed, settings, L, runs) reproduce identical
/// output.
pub fn run_bell_experiment(
    settings: &BellSettings,
    level: usize,
    runs_per_ensemble: usize,
    master_seed: u64,
) -> Result<(BellReport, Vec<BellRunLog>)> {
    if runs_per_ensemble == 0 {
        return Err(Error::OutOfRange {
            what: "runs_per_ensemble",
            got: 0,
            limit: usize::MAX,
        });
    }
    let mut logs = Vec::with_capacity(3 * runs_per_ensemble);
    let mut empirical = Vec::with_capacity(3);
    let mut exact = Vec::with_capacity(3);
    let mut run_id = 0u64;
    for (idx, tag) in EnsembleTag::ALL.into_iter().enumerate() {
        let (x, y) = tag.pair(settings);
        // an empty window fails here for every run of the ensemble; report
        // it against the first of them
        let nominal_snap = snap_nominal(x, y, level).map_err(|e| Error::RunFailed {
            run_id,
            source: Box::new(e),
        })?;
        exact.push(-&nominal_snap.cos_between);
        let sub_seed = derive_seed(master_seed, idx as u64);
        let mut product_sum = 0i64;
        for i in 0..runs_per_ensemble {
            let jitter_seed = derive_seed(sub_seed, 2 * i as u64);
            let xi_seed = derive_seed(sub_seed, 2 * i as u64 + 1);
            let with_run = |e: Error| Error::RunFailed {
                run_id,
                source: Box::new(e),
            };
            let setting = snap_to_grid(x, y, level, jitter_seed).map_err(with_run)?;
            let xi = HiddenPermutation::from_seed(xi_seed, level).map_err(with_run)?;
            let pair = make_singlet(level, &setting.cos_between, xi).map_err(with_run)?;
            let outcomes = joint_measure(pair.base());
            product_sum += (outcomes.0 * outcomes.1) as i64;
            logs.push(BellRunLog {
                run_id,
                ensemble_tag: tag,
                xi_seed,
                jitter_seed,
                exact_cos: setting.cos_between,
                outcomes,
            });
            run_id += 1;
        }
        empirical.push(Rational::new(product_sum, runs_per_ensemble as i64));
    }
    let report = BellReport {
        level,
        runs_per_ensemble,
        master_seed,
        co_ab_exact: exact[0].clone(),
        co_ac_exact: exact[1].clone(),
        co_bc_exact: exact[2].clone(),
        co_ab_empirical: empirical[0].clone(),
        co_ac_empirical: empirical[1].clone(),
        co_bc_empirical: empirical[2].clone(),
        statistic: bell_statistic(&exact[0], &exact[1], &exact[2]),
        statistic_empirical: bell_statistic(&empirical[0], &empirical[1], &empirical[2]),
    };
    Ok((report, logs))
}

/// An exact triple for the two-counterfactual definedness question: the
/// realized relative cosine, the counterfactual one, and the dihedral angle
/// at the shared vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactTriple {
    pub cos_ab: Rational,
    pub cos_ac: Rational,
    pub phi_a: RationalAngle,
}

/// Samples the exact triple of one run: both relative cosines snapped from
/// fresh jitter, and a dihedral angle that is rational but only
/// approximately coplanar (near 0 or 1/2 turn, denominator up to 10^6).
pub fn jittered_exact_triple(
    settings: &BellSettings,
    level: usize,
    seed: u64,
) -> Result<ExactTriple> {
    let cos_ab = snap_to_grid(&settings.a, &settings.b, level, derive_seed(seed, 0))?.cos_between;
    let cos_ac = snap_to_grid(&settings.a, &settings.c, level, derive_seed(seed, 1))?.cos_between;
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, 2));
    let den = rng.random_range(2_000i64..=1_000_000);
    let num = rng.random_range(1..=den / 1_000) * if rng.random_range(0..2) == 0 { 1 } else { -1 };
    let base = if rng.random_range(0..2) == 0 {
        Rational::zero()
    } else {
        Rational::new(1, 2)
    };
    let phi_a = RationalAngle::new(&base + &Rational::new(num, den));
    Ok(ExactTriple {
        cos_ab,
        cos_ac,
        phi_a,
    })
}

/// Per-run combination |o_AB - o_AC| - o_BC of deterministic outcome
/// products, available only when the whole counterfactual triple is
/// simultaneously defined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellsumOutcome {
    Defined { value: i64, cos_bc: Rational },
    Undefined { obstruction: Obstruction },
}

/// Deterministic per-direction spin values for a hidden-variable seed.
pub fn spin_triple(lambda_seed: u64) -> (i8, i8, i8) {
    let bit = |i: u64| if derive_seed(lambda_seed, i) & 1 == 0 { 1i8 } else { -1 };
    (bit(0), bit(1), bit(2))
}

/// The per-run Bell combination from singlet outcome products
/// o_xy = -u_x u_y; never exceeds 1 for any spin assignment.
pub fn bellsum_value_from_spins(u_a: i8, u_b: i8, u_c: i8) -> i64 {
    let o_ab = -(u_a * u_b) as i64;
    let o_ac = -(u_a * u_c) as i64;
    let o_bc = -(u_b * u_c) as i64;
    (o_ab - o_ac).abs() - o_bc
}

/// Evaluates the per-run Bell combination when the triple's counterfactuals
/// are simultaneously defined; reports the obstruction otherwise. The
/// definedness failure on generic jittered triples is exactly what blocks
/// summing this quantity into the Bell inequality.
pub fn bellsum_evaluate(lambda_seed: u64, triple: &ExactTriple) -> Result<BellsumOutcome> {
    let verdict = bell_counterfactuals_defined(&triple.cos_ab, &triple.cos_ac, &triple.phi_a)?;
    match verdict.cos_ac {
        Some(cos_bc) => {
            let (u_a, u_b, u_c) = spin_triple(lambda_seed);
            Ok(BellsumOutcome::Defined {
                value: bellsum_value_from_spins(u_a, u_b, u_c),
                cos_bc,
            })
        }
        None => Ok(BellsumOutcome::Undefined {
            obstruction: verdict.obstruction.expect("undefined verdicts carry an obstruction"),
        }),
    }
}

/// Measurement-independence diagnostics: a chi-square homogeneity test that
/// the binned distribution of the measured position is identical across the
/// three nominal ensembles, and the fraction of runs whose exact
/// counterfactual triple is simultaneously defined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiReport {
    pub runs_per_ensemble: usize,
    pub bins: usize,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub defined_runs: usize,
    pub sampled_triples: usize,
    pub defined_fraction: Rational,
}

pub const MI_BINS: usize = 30;

pub fn mi_diagnostic(
    settings: &BellSettings,
    level: usize,
    runs: usize,
    master_seed: u64,
) -> Result<MiReport> {
    if runs < 1_000 {
        return Err(Error::OutOfRange {
            what: "runs",
            got: runs,
            limit: usize::MAX,
        });
    }
    let mut table = vec![vec![0usize; MI_BINS]; 3];
    for (idx, _tag) in EnsembleTag::ALL.into_iter().enumerate() {
        let sub_seed = derive_seed(master_seed, idx as u64);
        for i in 0..runs {
            let xi_seed = derive_seed(sub_seed, 2 * i as u64 + 1);
            let xi = HiddenPermutation::from_seed(xi_seed, level)?;
            let bin = xi.measured_index() * MI_BINS / level;
            table[idx][bin] += 1;
        }
    }
    let (chi_square, degrees_of_freedom, p_value) = chi_square_homogeneity(&table);

    let triple_seed = derive_seed(master_seed, 3);
    let mut defined_runs = 0usize;
    for i in 0..runs {
        let triple = jittered_exact_triple(settings, level, derive_seed(triple_seed, i as u64))?;
        if let BellsumOutcome::Defined { .. } =
            bellsum_evaluate(derive_seed(triple_seed, i as u64), &triple)?
        {
            defined_runs += 1;
        }
    }
    Ok(MiReport {
        runs_per_ensemble: runs,
        bins: MI_BINS,
        chi_square,
        degrees_of_freedom,
        p_value,
        defined_runs,
        sampled_triples: runs,
        defined_fraction: Rational::new(defined_runs as i64, runs as i64),
    })
}

/// Pearson chi-square test of homogeneity over a contingency table
/// (rows = ensembles, columns = bins). Columns with zero total are skipped.
pub fn chi_square_homogeneity(table: &[Vec<usize>]) -> (f64, usize, f64) {
    let rows = table.len();
    let cols = table[0].len();
    let row_sums: Vec<f64> = table
        .iter()
        .map(|r| r.iter().sum::<usize>() as f64)
        .collect();
    let col_sums: Vec<f64> = (0..cols)
        .map(|c| table.iter().map(|r| r[c] as f64).sum())
        .collect();
    let total: f64 = row_sums.iter().sum();
    let mut statistic = 0.0;
    let mut nonzero_cols = 0usize;
    for c in 0..cols {
        if col_sums[c] == 0.0 {
            continue;
        }
        nonzero_cols += 1;
        for r in 0..rows {
            let expected = row_sums[r] * col_sums[c] / total;
            if expected > 0.0 {
                let diff = table[r][c] as f64 - expected;
                statistic += diff * diff / expected;
            }
        }
    }
    let df = (rows - 1) * nonzero_cols.saturating_sub(1);
    let p = if df == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(df as f64).expect("positive degrees of freedom");
        1.0 - dist.cdf(statistic)
    };
    (statistic, df, p)
}
