//! Seeded Monte Carlo studies over random sequence pairs.
//!
//! Every trial owns a private ChaCha stream seeded by [`derive_trial_seed`],
//! and trial results are collected in `(n, trial_index)` order, so outputs
//! do not depend on the number of worker threads.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alignment::{lex_extreme_t, optimal_score_value, Alignment, LetterSequence, Sense};
use crate::error::{Error, Result};
use crate::geometry::{
    averaged_polygon, curvature_at_max_x, hausdorff_distance, support_value, CurvatureEstimate,
    ScorePair, SupportPolygon, DEFAULT_CURVATURE_STEP,
};
use crate::scoring::{sample_unit_sphere, Alphabet, ScoringFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub alphabet: Alphabet,
    pub letter_distribution: Vec<f64>,
    pub n_list: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    /// Deviation levels for the concentration table.
    pub epsilon_grid: Vec<f64>,
    /// Curvature thresholds for the random-pair study.
    pub k_grid: Vec<f64>,
    /// Number of random `(S, T)` pairs in the random-pair study.
    pub pairs: usize,
    /// Sequence pairs averaged per `(S, T)` pair in the random-pair study.
    pub pair_trials: usize,
    /// Size of the equispaced direction grid for averaged polygons.
    pub directions: usize,
    pub curvature_step: f64,
    /// Floor applied to the estimated curvature in the deviation envelope.
    pub k_min: f64,
}

impl ExperimentConfig {
    pub fn new(alphabet: Alphabet) -> Self {
        let m = alphabet.size();
        Self {
            alphabet,
            letter_distribution: vec![1.0 / m as f64; m],
            n_list: vec![32, 64, 128, 256, 512, 1024],
            trials: 200,
            master_seed: 0x5eed,
            epsilon_grid: vec![0.0, 0.025, 0.05, 0.1, 0.2],
            k_grid: vec![0.05, 0.1, 0.2],
            pairs: 200,
            pair_trials: 8,
            directions: 48,
            curvature_step: DEFAULT_CURVATURE_STEP,
            k_min: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        let m = self.alphabet.size();
        if self.letter_distribution.len() != m {
            return bad(format!(
                "letter distribution has {} entries for {m} letters",
                self.letter_distribution.len()
            ));
        }
        if self
            .letter_distribution
            .iter()
            .any(|&p| !p.is_finite() || p < 0.0)
        {
            return bad("letter probabilities must be finite and nonnegative".into());
        }
        let total: f64 = self.letter_distribution.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return bad(format!("letter probabilities sum to {total}, not 1"));
        }
        if self.n_list.is_empty() || self.n_list[0] == 0 {
            return bad("n_list must be nonempty with positive lengths".into());
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return bad("n_list must be strictly increasing".into());
        }
        if self.trials == 0 || self.pair_trials == 0 {
            return bad("trial counts must be at least 1".into());
        }
        if self.epsilon_grid.iter().any(|&e| e.is_nan() || e < 0.0) {
            return bad("epsilon grid values must be nonnegative".into());
        }
        if self.k_grid.iter().any(|&k| !(k > 0.0 && k <= PI / 4.0)) {
            return bad("k grid values must lie in (0, pi/4]".into());
        }
        if self.directions < 3 {
            return bad("need at least 3 grid directions".into());
        }
        if !(self.curvature_step > 0.0 && self.curvature_step < 0.5) {
            return bad("curvature step must lie in (0, 0.5)".into());
        }
        if self.k_min.is_nan() || self.k_min <= 0.0 {
            return bad("k_min must be positive".into());
        }
        Ok(())
    }

    pub fn largest_n(&self) -> usize {
        *self.n_list.last().expect("validated n_list is nonempty")
    }

    pub fn with_n_list(mut self, n_list: Vec<usize>) -> Self {
        self.n_list = n_list;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the private stream for trial `trial_index` at length `n`.
///
/// Nested SplitMix64 finalizers; each stage is a bijection, so distinct
/// trial indices under the same `(master_seed, n)` never collide.
pub fn derive_trial_seed(master_seed: u64, n: u64, trial_index: u64) -> u64 {
    let h = splitmix64(master_seed);
    let h = splitmix64(h ^ n.wrapping_mul(0xD6E8_FEB8_6659_FD93));
    splitmix64(h ^ trial_index.wrapping_mul(0xA076_1D64_78BD_642F))
}

/// Stream label for per-pair scoring draws; never a sequence length.
const PAIR_STREAM: u64 = u64::MAX - 1;

/// Seed of the stream that draws the `pair_index`-th random `(S, T)` pair.
pub fn pair_seed(master_seed: u64, pair_index: u64) -> u64 {
    derive_trial_seed(master_seed, PAIR_STREAM, pair_index)
}

/// Two independent unit-sphere scoring functions for `pair_index`.
pub fn sample_pair(
    alphabet: &Alphabet,
    master_seed: u64,
    pair_index: u64,
) -> (ScoringFunction, ScoringFunction) {
    let mut rng = ChaCha8Rng::seed_from_u64(pair_seed(master_seed, pair_index));
    let s = sample_unit_sphere(alphabet, &mut rng);
    let t = sample_unit_sphere(alphabet, &mut rng);
    (s, t)
}

/// Two i.i.d. letter sequences of length `n` from the trial's stream.
pub fn random_sequences(
    config: &ExperimentConfig,
    seed: u64,
    n: usize,
) -> Result<(LetterSequence, LetterSequence)> {
    let law = WeightedIndex::new(&config.letter_distribution)
        .map_err(|e| Error::InvalidConfig(format!("letter distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> Result<LetterSequence> {
        LetterSequence::from_indices(
            &config.alphabet,
            (0..n).map(|_| law.sample(&mut rng)).collect(),
        )
    };
    let x = draw()?;
    let y = draw()?;
    Ok((x, y))
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mu = mean(values);
    (values.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Binomial standard error of an empirical frequency over `count` draws.
pub fn binomial_std_error(p: f64, count: usize) -> f64 {
    (p * (1.0 - p) / count as f64).sqrt()
}

/// `sqrt(ln(n e) / n)`, the rate shared by the mean-convergence bounds.
pub fn log_rate(n: usize) -> f64 {
    let n = n as f64;
    ((n.ln() + 1.0) / n).sqrt()
}

/// `1 - n^(-ln n)`.
pub fn single_event_floor(n: usize) -> f64 {
    let n = n as f64;
    1.0 - n.powf(-n.ln())
}

/// `1 - 3 n^(-ln n)`.
pub fn three_event_floor(n: usize) -> f64 {
    let n = n as f64;
    1.0 - 3.0 * n.powf(-n.ln())
}

/// `2 exp(-eps^2 n / (2 a^2))`; vacuous (2) at `eps = 0`.
pub fn azuma_hoeffding_bound(epsilon: f64, n: usize, change_norm: f64) -> f64 {
    if epsilon == 0.0 {
        return 2.0;
    }
    2.0 * (-(epsilon * epsilon) * n as f64 / (2.0 * change_norm * change_norm)).exp()
}

/// Envelope `(5|T| + 2 sqrt(30 |S|)) / k * (ln(n e) / n)^(1/4)` with change norms.
pub fn deviation_envelope(s_change_norm: f64, t_change_norm: f64, k: f64, n: usize) -> f64 {
    (5.0 * t_change_norm + 2.0 * (30.0 * s_change_norm).sqrt()) / k * log_rate(n).sqrt()
}

/// Optimal scores `L_{n,R}` for every trial at length `n`, in trial order.
pub fn optimal_scores(
    r: &ScoringFunction,
    config: &ExperimentConfig,
    n: usize,
) -> Result<Vec<f64>> {
    (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let (x, y) = random_sequences(
                config,
                derive_trial_seed(config.master_seed, n as u64, i as u64),
                n,
            )?;
            optimal_score_value(r, &x, &y)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaEstimate {
    pub n: usize,
    pub trials: usize,
    pub lambda_hat: f64,
    pub std_err: f64,
}

/// Mean and standard error of `L_{n,R} / n` at the largest configured `n`.
pub fn estimate_lambda(r: &ScoringFunction, config: &ExperimentConfig) -> Result<LambdaEstimate> {
    config.validate()?;
    let n = config.largest_n();
    let rescaled: Vec<f64> = optimal_scores(r, config, n)?
        .into_iter()
        .map(|l| l / n as f64)
        .collect();
    Ok(LambdaEstimate {
        n,
        trials: rescaled.len(),
        lambda_hat: mean(&rescaled),
        std_err: sample_std(&rescaled) / (rescaled.len() as f64).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationRow {
    pub n: usize,
    pub epsilon: f64,
    pub trials: usize,
    pub empirical_prob: f64,
    pub std_error: f64,
    pub ah_bound: f64,
}

/// Empirical `P[|L - mean| >= eps n]` against the Azuma-Hoeffding tail.
pub fn concentration_study(
    r: &ScoringFunction,
    config: &ExperimentConfig,
) -> Result<Vec<ConcentrationRow>> {
    config.validate()?;
    let a = r.change_norm();
    let mut rows = Vec::new();
    for &n in &config.n_list {
        let scores = optimal_scores(r, config, n)?;
        let mu = mean(&scores);
        for &epsilon in &config.epsilon_grid {
            let hits = scores
                .iter()
                .filter(|&&l| (l - mu).abs() >= epsilon * n as f64)
                .count();
            let p = hits as f64 / scores.len() as f64;
            rows.push(ConcentrationRow {
                n,
                epsilon,
                trials: scores.len(),
                empirical_prob: p,
                std_error: binomial_std_error(p, scores.len()),
                ah_bound: azuma_hoeffding_bound(epsilon, n, a),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub n: usize,
    pub trials: usize,
    pub mean_rescaled: f64,
    pub std_rescaled: f64,
    /// `|lambda_hat - mean_rescaled|`.
    pub lambda_gap: f64,
    /// `3|R| sqrt(ln(n e) / n)`.
    pub mean_gap_bound: f64,
    /// `5|R| sqrt(ln(n e) / n)`.
    pub a_n_bound: f64,
    /// Fraction of trials with `|lambda_hat - L/n| <= a_n_bound`.
    pub within_bound_fraction: f64,
    pub single_event_floor: f64,
    pub three_event_floor: f64,
}

/// Per-length means of `L/n` against the mean-convergence bound and the
/// fraction of trials inside the `5|R|` envelope around `lambda_hat`.
pub fn convergence_study(
    r: &ScoringFunction,
    config: &ExperimentConfig,
) -> Result<(LambdaEstimate, Vec<ConvergenceRecord>)> {
    config.validate()?;
    if config.n_list.len() < 3 {
        return Err(Error::InvalidConfig(
            "convergence study needs at least 3 lengths".into(),
        ));
    }
    let a = r.change_norm();
    let lambda = estimate_lambda(r, config)?;
    let mut out = Vec::with_capacity(config.n_list.len());
    for &n in &config.n_list {
        let rescaled: Vec<f64> = optimal_scores(r, config, n)?
            .into_iter()
            .map(|l| l / n as f64)
            .collect();
        let mu = mean(&rescaled);
        let a_n_bound = 5.0 * a * log_rate(n);
        let inside = rescaled
            .iter()
            .filter(|&&v| (lambda.lambda_hat - v).abs() <= a_n_bound)
            .count();
        out.push(ConvergenceRecord {
            n,
            trials: rescaled.len(),
            mean_rescaled: mu,
            std_rescaled: sample_std(&rescaled),
            lambda_gap: (lambda.lambda_hat - mu).abs(),
            mean_gap_bound: 3.0 * a * log_rate(n),
            a_n_bound,
            within_bound_fraction: inside as f64 / rescaled.len() as f64,
            single_event_floor: single_event_floor(n),
            three_event_floor: three_event_floor(n),
        });
    }
    Ok((lambda, out))
}

/// One Monte Carlo draw of the extreme T-scores among S-optimal alignments.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub n: usize,
    pub trial_index: usize,
    pub l_s: f64,
    pub t_max: f64,
    pub t_min: f64,
    /// Support values `L_{n, R_theta} / n` at the requested angles.
    pub r_theta: Vec<f64>,
    /// S-optimal alignment attaining `t_max`.
    pub witness: Alignment,
    /// Not part of any emitted file; timings are not reproducible.
    pub wall_time: Duration,
}

/// Curvature sample angles `-step, -step/2, 0, step/2, step`.
pub fn curvature_angles(step: f64) -> [f64; 5] {
    [-step, -0.5 * step, 0.0, 0.5 * step, step]
}

struct Trial {
    record: TrialRecord,
    support_points: Vec<ScorePair>,
}

fn run_extremes_trial(
    s: &ScoringFunction,
    t: &ScoringFunction,
    config: &ExperimentConfig,
    n: usize,
    trial_index: usize,
    angles: &[f64],
) -> Result<Trial> {
    let start = Instant::now();
    let seed = derive_trial_seed(config.master_seed, n as u64, trial_index as u64);
    let (x, y) = random_sequences(config, seed, n)?;
    let hi = lex_extreme_t(s, t, &x, &y, Sense::Max)?;
    let lo = lex_extreme_t(s, t, &x, &y, Sense::Min)?;
    let mut r_theta = Vec::with_capacity(angles.len());
    let mut support_points = Vec::with_capacity(angles.len());
    for &theta in angles {
        let v = support_value(s, t, &x, &y, theta)?;
        r_theta.push(v.h);
        support_points.push(v.witness_point);
    }
    Ok(Trial {
        record: TrialRecord {
            n,
            trial_index,
            l_s: hi.s_opt,
            t_max: hi.t_extreme,
            t_min: lo.t_extreme,
            r_theta,
            witness: hi.witness,
            wall_time: start.elapsed(),
        },
        support_points,
    })
}

/// Support function of the average of the per-trial sampled polygons.
///
/// At a sampled angle each trial's maximum is its own DP witness, so this
/// reproduces the averaged support values there and stays a genuine support
/// function in between.
fn averaged_support(per_trial: &[Vec<ScorePair>]) -> impl Fn(f64) -> f64 + '_ {
    move |theta| {
        per_trial
            .iter()
            .map(|pts| {
                pts.iter()
                    .map(|p| p.dot_dir(theta))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .sum::<f64>()
            / per_trial.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Row {
    pub n: usize,
    pub trials: usize,
    pub max_deviation: f64,
    pub mean_deviation: f64,
    pub envelope: f64,
    pub fraction_within: f64,
    pub probability_floor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Report {
    pub y0_hat: f64,
    pub curvature: CurvatureEstimate,
    /// Estimated curvature, `+inf` when the estimate is a vertex or unreliable.
    pub k_hat: f64,
    /// `max(k_hat, k_min)`; the envelope is 0 when `k_hat` is infinite.
    pub k_used: f64,
    pub s_change_norm: f64,
    pub t_change_norm: f64,
    pub rows: Vec<Theorem1Row>,
    pub trials: Vec<TrialRecord>,
}

/// Deviation of the extreme T-scores of S-optimal alignments from the
/// estimated limit `y0_hat`, against the curvature-dependent envelope.
pub fn theorem1_study(
    s: &ScoringFunction,
    t: &ScoringFunction,
    config: &ExperimentConfig,
) -> Result<Theorem1Report> {
    config.validate()?;
    if s.alphabet() != &config.alphabet || t.alphabet() != &config.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let angles = curvature_angles(config.curvature_step);
    let largest = config.largest_n();
    let mut trials = Vec::new();
    let mut largest_points = Vec::new();
    for &n in &config.n_list {
        let wanted: &[f64] = if n == largest { &angles } else { &[] };
        let batch: Vec<Trial> = (0..config.trials)
            .into_par_iter()
            .map(|i| run_extremes_trial(s, t, config, n, i, wanted))
            .collect::<Result<_>>()?;
        for trial in batch {
            if n == largest {
                largest_points.push(trial.support_points);
            }
            trials.push(trial.record);
        }
    }
    let at_largest: Vec<&TrialRecord> = trials.iter().filter(|r| r.n == largest).collect();
    let y0_hat = at_largest
        .iter()
        .map(|r| (r.t_max + r.t_min) / (2.0 * largest as f64))
        .sum::<f64>()
        / at_largest.len() as f64;
    let curvature = curvature_at_max_x(averaged_support(&largest_points), config.curvature_step);
    let k_hat = if curvature.vertex_detected || !curvature.reliable {
        f64::INFINITY
    } else {
        curvature.kappa
    };
    let k_used = k_hat.max(config.k_min);
    let (s_norm, t_norm) = (s.change_norm(), t.change_norm());
    let rows = config
        .n_list
        .iter()
        .map(|&n| {
            let deviations: Vec<f64> = trials
                .iter()
                .filter(|r| r.n == n)
                .map(|r| {
                    let nf = n as f64;
                    (r.t_max / nf - y0_hat)
                        .abs()
                        .max((r.t_min / nf - y0_hat).abs())
                })
                .collect();
            let envelope = if k_used.is_finite() {
                deviation_envelope(s_norm, t_norm, k_used, n)
            } else {
                0.0
            };
            Theorem1Row {
                n,
                trials: deviations.len(),
                max_deviation: deviations.iter().copied().fold(0.0, f64::max),
                mean_deviation: mean(&deviations),
                envelope,
                fraction_within: deviations.iter().filter(|&&d| d <= envelope).count() as f64
                    / deviations.len() as f64,
                probability_floor: three_event_floor(n),
            }
        })
        .collect();
    Ok(Theorem1Report {
        y0_hat,
        curvature,
        k_hat,
        k_used,
        s_change_norm: s_norm,
        t_change_norm: t_norm,
        rows,
        trials,
    })
}

/// Equispaced grid `2 pi k / count` merged with the curvature angles, sorted
/// in `[0, 2 pi)`.
pub fn study_angles(count: usize, step: f64) -> Vec<f64> {
    let mut angles: Vec<f64> = (0..count).map(|k| TAU * k as f64 / count as f64).collect();
    for a in curvature_angles(step) {
        if a != 0.0 {
            angles.push(a);
        }
    }
    angles
}

/// Per-trial support points of the rescaled score set on `angles`.
fn support_points_on(
    s: &ScoringFunction,
    t: &ScoringFunction,
    config: &ExperimentConfig,
    seed: u64,
    n: usize,
    angles: &[f64],
) -> Result<Vec<ScorePair>> {
    let (x, y) = random_sequences(config, seed, n)?;
    angles
        .iter()
        .map(|&theta| Ok(support_value(s, t, &x, &y, theta)?.witness_point))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub pair_index: usize,
    pub kappa: f64,
    pub rho: f64,
    pub vertex_detected: bool,
    pub reliable: bool,
    pub perimeter: f64,
    pub x0: f64,
    pub y0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Row {
    pub k: f64,
    pub pairs: usize,
    pub empirical_prob: f64,
    pub std_error: f64,
    /// `4k / pi`.
    pub kappa_bound: f64,
    /// `k * l_max / (2 pi)` with the largest observed perimeter.
    pub perimeter_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem2Report {
    pub n: usize,
    pub rows: Vec<Theorem2Row>,
    pub pairs: Vec<PairRecord>,
    pub max_perimeter: f64,
}

/// Averaged polygon and its curvature at the x-maximizer for one random pair.
pub fn analyze_pair(
    s: &ScoringFunction,
    t: &ScoringFunction,
    config: &ExperimentConfig,
    pair_index: usize,
) -> Result<(SupportPolygon, CurvatureEstimate)> {
    let n = config.largest_n();
    let angles = study_angles(config.directions, config.curvature_step);
    let base = pair_seed(config.master_seed, pair_index as u64);
    let per_trial = (0..config.pair_trials)
        .map(|i| {
            support_points_on(
                s,
                t,
                config,
                derive_trial_seed(base, n as u64, i as u64),
                n,
                &angles,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let polygon = averaged_polygon(&angles, &per_trial)?;
    let curvature = curvature_at_max_x(averaged_support(&per_trial), config.curvature_step);
    Ok((polygon, curvature))
}

/// Empirical law of the curvature at the x-maximizer for random unit-sphere
/// pairs, against `4k/pi`, with every averaged polygon's perimeter.
pub fn theorem2_study(
    alphabet: &Alphabet,
    config: &ExperimentConfig,
    k_grid: &[f64],
) -> Result<Theorem2Report> {
    config.validate()?;
    if alphabet != &config.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    if k_grid.iter().any(|&k| !(k > 0.0 && k <= PI / 4.0)) {
        return Err(Error::InvalidConfig(
            "k grid values must lie in (0, pi/4]".into(),
        ));
    }
    let pairs: Vec<PairRecord> = (0..config.pairs)
        .into_par_iter()
        .map(|p| {
            let (s, t) = sample_pair(alphabet, config.master_seed, p as u64);
            let (polygon, c) = analyze_pair(&s, &t, config, p)?;
            let x0 = polygon
                .vertices()
                .iter()
                .zip(polygon.directions())
                .find(|(_, &d)| d == 0.0)
                .map(|(v, _)| *v)
                .unwrap_or(ScorePair::new(f64::NAN, f64::NAN));
            Ok(PairRecord {
                pair_index: p,
                kappa: c.kappa,
                rho: c.rho,
                vertex_detected: c.vertex_detected,
                reliable: c.reliable,
                perimeter: polygon.perimeter(),
                x0: x0.x,
                y0: x0.y,
            })
        })
        .collect::<Result<_>>()?;
    let max_perimeter = pairs.iter().map(|p| p.perimeter).fold(0.0, f64::max);
    let rows = k_grid
        .iter()
        .map(|&k| {
            let below = pairs.iter().filter(|p| p.kappa < k).count();
            let p = below as f64 / pairs.len() as f64;
            Theorem2Row {
                k,
                pairs: pairs.len(),
                empirical_prob: p,
                std_error: binomial_std_error(p, pairs.len()),
                kappa_bound: 4.0 * k / PI,
                perimeter_bound: k * max_perimeter / TAU,
            }
        })
        .collect();
    Ok(Theorem2Report {
        n: config.largest_n(),
        rows,
        pairs,
        max_perimeter,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HausdorffRow {
    pub n: usize,
    pub trials: usize,
    pub median_distance: f64,
    pub mean_distance: f64,
}

/// Hausdorff distance of per-trial grid polygons to the averaged polygon at
/// the largest `n`, which stands in for the deterministic limit set.
pub fn hausdorff_study(
    s: &ScoringFunction,
    t: &ScoringFunction,
    config: &ExperimentConfig,
) -> Result<(SupportPolygon, Vec<HausdorffRow>)> {
    config.validate()?;
    let angles: Vec<f64> = (0..config.directions)
        .map(|k| TAU * k as f64 / config.directions as f64)
        .collect();
    let mut per_n = Vec::with_capacity(config.n_list.len());
    for &n in &config.n_list {
        let pts: Vec<Vec<ScorePair>> = (0..config.trials)
            .into_par_iter()
            .map(|i| {
                support_points_on(
                    s,
                    t,
                    config,
                    derive_trial_seed(config.master_seed, n as u64, i as u64),
                    n,
                    &angles,
                )
            })
            .collect::<Result<_>>()?;
        per_n.push((n, pts));
    }
    let reference = averaged_polygon(&angles, &per_n.last().expect("validated").1)?;
    let mut rows = Vec::with_capacity(per_n.len());
    for (n, pts) in &per_n {
        let distances = pts
            .iter()
            .map(|p| {
                hausdorff_distance(
                    &averaged_polygon(&angles, std::slice::from_ref(p))?,
                    &reference,
                )
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(HausdorffRow {
            n: *n,
            trials: distances.len(),
            median_distance: median(&distances),
            mean_distance: mean(&distances),
        });
    }
    Ok((reference, rows))
}
