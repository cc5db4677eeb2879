//! Monte-Carlo harness for the row-selection statistics, the uncertainty
//! bound chain, and end-to-end key reproduction.
//!
//! Every experiment is deterministic in (inputs, seed): trial t draws its
//! randomness from an RNG stream keyed by the trial index, so trials are
//! independent, individually replayable, and order-insensitive. Reports
//! use only ordered containers so serialization is byte-stable.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::anchor::select_orthogonal;
use crate::entropy::certify;
use crate::error::Result;
use crate::geometry::BaseMatrixBundle;
use crate::gf2::BitVector;
use crate::puf::{
    anchor_init, anchor_reproduce, code_offset_init, code_offset_reproduce, reextract,
    ChannelModel, Scheme, SelectionPolicy,
};
use crate::rng::trial_rng;

/// Distribution of the selected-row count over uniform responses.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RowCountStats {
    pub mean: f64,
    pub variance: f64,
    /// nrows / 2 under the per-row balance model.
    pub expected_mean: f64,
    /// nrows / 4 under pairwise independence.
    pub expected_variance: f64,
    pub mean_standard_error: f64,
    /// Largest gap between the empirical CDF and Binomial(nrows, 1/2).
    pub ks_distance: f64,
    /// (count, cumulative fraction) for every count 0..=nrows.
    pub cdf: Vec<(u32, f64)>,
}

/// How often the selected rows span enough of the base row space.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuccessStats {
    pub success_rate: f64,
    /// (rank deficit, trial count), ascending by deficit.
    pub deficit_histogram: Vec<(u32, u32)>,
}

/// Certified bound quality over the same trials.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntropyStats {
    pub successful_trials: usize,
    /// Trials whose construction failed; the bound chain says nothing there.
    pub vacuous_trials: usize,
    /// Fraction of successful trials with k - 2 <= lower_bound <= k.
    pub in_bounds_fraction: f64,
    /// (k - lower_bound, trial count) among successful trials.
    pub gap_histogram: Vec<(u32, u32)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower_minus_k_min: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower_minus_k_max: Option<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimulationReport {
    pub seed: u64,
    pub trials: usize,
    pub n: usize,
    pub nrows_base: usize,
    pub rank_base: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub row_count: Option<RowCountStats>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub success: Option<SuccessStats>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub entropy: Option<EntropyStats>,
}

/// Everything one trial contributes; experiments differ only in which
/// fields they aggregate.
struct TrialRecord {
    selected_rows: usize,
    deficit: u32,
    success: bool,
    lower_minus_k: i64,
}

fn run_trial(bundle: &BaseMatrixBundle, seed: u64, t: u64) -> TrialRecord {
    let mut rng = trial_rng(seed, t);
    let r = BitVector::random(bundle.ncols(), &mut rng);
    let res = select_orthogonal(bundle, &r).expect("response length matches the bundle");
    let cert = certify(&res);
    TrialRecord {
        selected_rows: res.selected().nrows(),
        deficit: (res.rank_base() - res.rank_selected()) as u32,
        success: cert.success,
        lower_minus_k: cert.lower_bound as i64 - cert.k as i64,
    }
}

fn run_trials(bundle: &BaseMatrixBundle, trials: usize, seed: u64) -> Vec<TrialRecord> {
    assert!(trials >= 1, "experiments need at least one trial");
    (0..trials as u64).map(|t| run_trial(bundle, seed, t)).collect()
}

fn empty_report(bundle: &BaseMatrixBundle, trials: usize, seed: u64) -> SimulationReport {
    SimulationReport {
        seed,
        trials,
        n: bundle.ncols(),
        nrows_base: bundle.nrows(),
        rank_base: bundle.rank(),
        row_count: None,
        success: None,
        entropy: None,
    }
}

fn row_count_stats(records: &[TrialRecord], nrows: usize) -> RowCountStats {
    let trials = records.len();
    let mean = records.iter().map(|r| r.selected_rows as f64).sum::<f64>() / trials as f64;
    let variance = if trials > 1 {
        records
            .iter()
            .map(|r| (r.selected_rows as f64 - mean).powi(2))
            .sum::<f64>()
            / (trials - 1) as f64
    } else {
        0.0
    };

    let mut hist = vec![0usize; nrows + 1];
    for rec in records {
        hist[rec.selected_rows] += 1;
    }
    let model = binomial_half_cdf(nrows);
    let mut cumulative = 0usize;
    let mut ks = 0.0f64;
    let mut cdf = Vec::with_capacity(nrows + 1);
    for v in 0..=nrows {
        cumulative += hist[v];
        let empirical = cumulative as f64 / trials as f64;
        ks = ks.max((empirical - model[v]).abs());
        cdf.push((v as u32, empirical));
    }

    RowCountStats {
        mean,
        variance,
        expected_mean: nrows as f64 / 2.0,
        expected_variance: nrows as f64 / 4.0,
        mean_standard_error: (variance / trials as f64).sqrt(),
        ks_distance: ks,
        cdf,
    }
}

fn success_stats(records: &[TrialRecord]) -> SuccessStats {
    let mut histogram: BTreeMap<u32, u32> = BTreeMap::new();
    for rec in records {
        *histogram.entry(rec.deficit).or_insert(0) += 1;
    }
    SuccessStats {
        success_rate: records.iter().filter(|r| r.success).count() as f64 / records.len() as f64,
        deficit_histogram: histogram.into_iter().collect(),
    }
}

fn entropy_stats(records: &[TrialRecord]) -> EntropyStats {
    let mut gaps: BTreeMap<u32, u32> = BTreeMap::new();
    let mut successful = 0usize;
    let mut in_bounds = 0usize;
    let mut min_gap: Option<i64> = None;
    let mut max_gap: Option<i64> = None;
    for rec in records.iter().filter(|r| r.success) {
        successful += 1;
        if (-2..=0).contains(&rec.lower_minus_k) {
            in_bounds += 1;
        }
        *gaps.entry((-rec.lower_minus_k) as u32).or_insert(0) += 1;
        min_gap = Some(min_gap.map_or(rec.lower_minus_k, |m| m.min(rec.lower_minus_k)));
        max_gap = Some(max_gap.map_or(rec.lower_minus_k, |m| m.max(rec.lower_minus_k)));
    }
    EntropyStats {
        successful_trials: successful,
        vacuous_trials: records.len() - successful,
        in_bounds_fraction: if successful == 0 {
            1.0
        } else {
            in_bounds as f64 / successful as f64
        },
        gap_histogram: gaps.into_iter().collect(),
        lower_minus_k_min: min_gap,
        lower_minus_k_max: max_gap,
    }
}

/// Samples a uniform response per trial and tabulates how many base rows
/// it keeps, against the Binomial(nrows, 1/2) reference.
pub fn row_count_experiment(bundle: &BaseMatrixBundle, trials: usize, seed: u64) -> SimulationReport {
    let records = run_trials(bundle, trials, seed);
    let mut report = empty_report(bundle, trials, seed);
    report.row_count = Some(row_count_stats(&records, bundle.nrows()));
    report
}

/// Fraction of trials whose selected rows reach rank(base) - 1, with the
/// full rank-deficit histogram.
pub fn success_probability(bundle: &BaseMatrixBundle, trials: usize, seed: u64) -> SimulationReport {
    let records = run_trials(bundle, trials, seed);
    let mut report = empty_report(bundle, trials, seed);
    report.success = Some(success_stats(&records));
    report
}

/// Certifies every trial and measures the bound chain k-2 <= lower <= k
/// on the successful ones. Success and bound statistics come from the
/// same per-trial selections, so the two sections describe one sample.
pub fn entropy_bound_experiment(
    bundle: &BaseMatrixBundle,
    trials: usize,
    seed: u64,
) -> SimulationReport {
    let records = run_trials(bundle, trials, seed);
    let mut report = empty_report(bundle, trials, seed);
    report.success = Some(success_stats(&records));
    report.entropy = Some(entropy_stats(&records));
    report
}

/// Outcome tallies for enroll -> re-extract -> reproduce pipelines.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EndToEndReport {
    pub seed: u64,
    pub trials: usize,
    pub n: usize,
    pub scheme: Scheme,
    pub p: f64,
    /// Half the minimum column weight of the base matrix; the decoder's
    /// guaranteed correction radius when all rows are in play.
    pub radius: usize,
    pub reproduced: usize,
    pub wrong_key: usize,
    pub failed: usize,
    pub failure_rate: f64,
    pub converged_within_radius: usize,
    /// Converged trials with weight(e) <= radius whose key mismatched.
    /// Zero whenever the decoder honors its radius.
    pub wrong_key_within_radius: usize,
    pub mean_error_weight: f64,
}

fn min_column_weight(bundle: &BaseMatrixBundle) -> usize {
    let mut weights = vec![0usize; bundle.ncols()];
    for row in bundle.matrix().rows() {
        for j in row.ones() {
            weights[j] += 1;
        }
    }
    weights.into_iter().min().unwrap_or(0)
}

/// Runs the full key pipeline per trial and tallies outcomes. The
/// failure rate is reported; the wrong-key-within-radius count is the
/// safety property.
pub fn end_to_end_key_experiment(
    bundle: &BaseMatrixBundle,
    scheme: Scheme,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<EndToEndReport> {
    assert!(trials >= 1, "experiments need at least one trial");
    let n = bundle.ncols();
    let radius = min_column_weight(bundle) / 2;

    let mut reproduced = 0usize;
    let mut wrong_key = 0usize;
    let mut failed = 0usize;
    let mut converged_within_radius = 0usize;
    let mut wrong_key_within_radius = 0usize;
    let mut error_weight_total = 0usize;

    for t in 0..trials as u64 {
        let mut rng = trial_rng(seed, t);
        let r = BitVector::random(n, &mut rng);
        let enroll_seed = rng.next_u64();
        let channel = ChannelModel::new(p, rng.next_u64())?;

        let helper = match scheme {
            Scheme::CodeOffset => code_offset_init(&r, bundle.matrix(), enroll_seed)?,
            Scheme::CodewordAnchor => anchor_init(&r, bundle, SelectionPolicy::Full)?.0,
        };
        let r_prime = reextract(&r, &channel);
        let weight = r_prime.xor(&r).weight();
        error_weight_total += weight;

        let outcome = match scheme {
            Scheme::CodeOffset => code_offset_reproduce(&r_prime, &helper),
            Scheme::CodewordAnchor => anchor_reproduce(&r_prime, &helper),
        };
        match outcome {
            Ok(key) if key == r => {
                reproduced += 1;
                if weight <= radius {
                    converged_within_radius += 1;
                }
            }
            Ok(_) => {
                wrong_key += 1;
                if weight <= radius {
                    converged_within_radius += 1;
                    wrong_key_within_radius += 1;
                }
            }
            Err(_) => failed += 1,
        }
    }

    Ok(EndToEndReport {
        seed,
        trials,
        n,
        scheme,
        p,
        radius,
        reproduced,
        wrong_key,
        failed,
        failure_rate: (wrong_key + failed) as f64 / trials as f64,
        converged_within_radius,
        wrong_key_within_radius,
        mean_error_weight: error_weight_total as f64 / trials as f64,
    })
}

/// CDF of Binomial(n, 1/2) at every point 0..=n. Counts accumulate in
/// exact integers; each entry rounds once at the end.
fn binomial_half_cdf(n: usize) -> Vec<f64> {
    let denominator: BigUint = BigUint::one() << n;
    let mut coefficient = BigUint::one();
    let mut cumulative = BigUint::zero();
    let mut table = Vec::with_capacity(n + 1);
    for v in 0..=n {
        if v > 0 {
            coefficient = coefficient * BigUint::from((n - v + 1) as u64) / BigUint::from(v as u64);
        }
        cumulative += &coefficient;
        table.push(ratio_to_f64(&cumulative, &denominator));
    }
    table
}

/// num/den as f64 for 0 <= num <= den, via a 64-bit fixed-point quotient.
fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    let scaled = (num << 64u32) / den;
    scaled.to_f64().expect("quotient fits in 65 bits") / 2.0f64.powi(64)
}
