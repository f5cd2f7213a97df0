//! Statistical comparison of techniques: Welch's t-test and percentile
//! bootstrap confidence intervals over paired per-trial metrics.
//!
//! Conventions, pinned for reproducibility:
//!
//! - `welch_t` computes the unequal-variance t statistic, the
//!   Welch–Satterthwaite degrees of freedom, and a two-sided p-value via
//!   the regularized incomplete beta function (continued fraction, absolute
//!   tolerance 1e-10). Degenerate samples: when both variances are zero the
//!   p-value is 1 for equal means and 0 otherwise.
//! - `bootstrap_ci` is the percentile bootstrap of the difference of means:
//!   each group is resampled independently with replacement using the
//!   counter streams of [`crate::simulate::rng`], the observed difference
//!   is included in the pool (so the interval always brackets the point
//!   estimate), and quantiles interpolate linearly between order statistics.
//! - `compare` runs both techniques with the same seed and protocol, so
//!   trials are paired: the same input vectors and label positions feed
//!   both pipelines.

use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use crate::netlist::{parse_bench_with, Circuit, Diagnostic, ParseOptions};
use crate::rules::Technique;
use crate::simulate::{self, rng, LabelProtocol};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("each sample needs at least {need} observations, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("significance level must lie strictly between 0 and 1, got {0}")]
    BadAlpha(f64),
    #[error("confidence level must lie strictly between 0 and 1, got {0}")]
    BadLevel(f64),
}

#[derive(Debug, Error)]
pub enum CompareError {
    #[error("failed to read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("`{path}` has {count} parse error(s); first: {first}")]
    Parse {
        path: String,
        count: usize,
        first: Diagnostic,
    },
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Sim(#[from] simulate::SimError),
}

/// Everything needed to reproduce one technique comparison exactly.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub circuit_path: PathBuf,
    pub technique_a: Technique,
    pub technique_b: Technique,
    pub trials: usize,
    pub protocol: LabelProtocol,
    pub seed: u64,
    pub alpha: f64,
    pub ci_level: f64,
    pub bootstrap_resamples: usize,
}

impl ExperimentConfig {
    pub fn new(path: impl Into<PathBuf>, a: Technique, b: Technique) -> Self {
        ExperimentConfig {
            circuit_path: path.into(),
            technique_a: a,
            technique_b: b,
            trials: 1000,
            protocol: LabelProtocol::default(),
            seed: 0,
            alpha: 0.05,
            ci_level: 0.95,
            bootstrap_resamples: 10_000,
        }
    }

    fn check(&self) -> Result<(), StatsError> {
        if self.trials < 2 {
            return Err(StatsError::TooFewSamples {
                need: 2,
                got: self.trials,
            });
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(StatsError::BadAlpha(self.alpha));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(StatsError::BadLevel(self.ci_level));
        }
        Ok(())
    }
}

/// Outcome of one paired comparison.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub metrics_a: Vec<f64>,
    pub metrics_b: Vec<f64>,
    pub mean_a: f64,
    pub mean_b: f64,
    pub diff: f64,
    pub t_stat: f64,
    pub df: f64,
    pub p_value: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub significant: bool,
}

/// Welch's t-test outputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    pub p: f64,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_variance(xs: &[f64], m: f64) -> f64 {
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Welch's unequal-variance t-test, two-sided.
pub fn welch_t(samples_a: &[f64], samples_b: &[f64]) -> Result<TTest, StatsError> {
    for s in [samples_a, samples_b] {
        if s.len() < 2 {
            return Err(StatsError::TooFewSamples {
                need: 2,
                got: s.len(),
            });
        }
    }
    let (na, nb) = (samples_a.len() as f64, samples_b.len() as f64);
    let (ma, mb) = (mean(samples_a), mean(samples_b));
    let (va, vb) = (sample_variance(samples_a, ma), sample_variance(samples_b, mb));
    let (sa, sb) = (va / na, vb / nb);
    let se = (sa + sb).sqrt();
    if se == 0.0 {
        // Both samples constant: identical means are maximally insignificant,
        // different means maximally significant.
        return Ok(if ma == mb {
            TTest {
                t: 0.0,
                df: na + nb - 2.0,
                p: 1.0,
            }
        } else {
            TTest {
                t: if ma > mb { f64::INFINITY } else { f64::NEG_INFINITY },
                df: na + nb - 2.0,
                p: 0.0,
            }
        });
    }
    let t = (ma - mb) / se;
    let df = (sa + sb) * (sa + sb)
        / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let p = students_t_two_sided_p(t, df);
    Ok(TTest { t, df, p })
}

/// Two-sided p-value of a Student's t statistic with `df` degrees of
/// freedom: the regularized incomplete beta `I_{df/(df+t^2)}(df/2, 1/2)`.
pub fn students_t_two_sided_p(t: f64, df: f64) -> f64 {
    if !t.is_finite() {
        return 0.0;
    }
    let x = df / (df + t * t);
    regularized_incomplete_beta(x, df / 2.0, 0.5).clamp(0.0, 1.0)
}

/// Regularized incomplete beta function `I_x(a, b)` by the Lentz continued
/// fraction, absolute tolerance 1e-10 or better over the t-test range.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    assert!((0.0..=1.0).contains(&x), "x must lie in [0, 1]");
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    // The prefactor is symmetric under (x, a, b) -> (1 - x, b, a).
    let front = (a * x.ln() + b * (1.0 - x).ln() + ln_gamma(a + b)
        - ln_gamma(a)
        - ln_gamma(b))
        .exp();
    // Evaluate the continued fraction on whichever side converges fast,
    // using I_x(a, b) = 1 - I_{1-x}(b, a) for the other.
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b
    }
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const MAX_ITER: usize = 400;
    const EPS: f64 = 1e-14;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Natural log of the gamma function (Lanczos, g = 7, 9 coefficients).
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection for the left half plane.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEFFS[0];
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Linear-interpolation quantile of a sorted slice.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Percentile bootstrap interval for `mean(a) - mean(b)`.
///
/// Deterministic for a fixed seed: resample `r` draws its indices from
/// `child(child(child(seed, DOMAIN_BOOTSTRAP), r), j)`, so the result does
/// not depend on evaluation order or worker count.
pub fn bootstrap_ci(
    samples_a: &[f64],
    samples_b: &[f64],
    level: f64,
    resamples: usize,
    seed: u64,
) -> Result<(f64, f64), StatsError> {
    for s in [samples_a, samples_b] {
        if s.len() < 2 {
            return Err(StatsError::TooFewSamples {
                need: 2,
                got: s.len(),
            });
        }
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(StatsError::BadLevel(level));
    }
    use rayon::prelude::*;
    let root = rng::child(seed, rng::DOMAIN_BOOTSTRAP);
    let (na, nb) = (samples_a.len(), samples_b.len());
    let mut stats: Vec<f64> = (0..resamples)
        .into_par_iter()
        .map(|r| {
            let stream = rng::child(root, r as u64);
            let mut sum_a = 0.0;
            for j in 0..na {
                sum_a += samples_a[(rng::child(stream, j as u64) % na as u64) as usize];
            }
            let mut sum_b = 0.0;
            for j in 0..nb {
                sum_b +=
                    samples_b[(rng::child(stream, (na + j) as u64) % nb as u64) as usize];
            }
            sum_a / na as f64 - sum_b / nb as f64
        })
        .collect();
    stats.push(mean(samples_a) - mean(samples_b));
    stats.sort_by(|x, y| x.partial_cmp(y).expect("bootstrap stats are finite"));
    let tail = (1.0 - level) / 2.0;
    Ok((
        quantile_sorted(&stats, tail),
        quantile_sorted(&stats, 1.0 - tail),
    ))
}

/// Runs one paired comparison on an already-parsed circuit.
pub fn compare_on(c: &Circuit, cfg: &ExperimentConfig) -> Result<ExperimentResult, CompareError> {
    cfg.check()?;
    let (ra, rb) = rayon::join(
        || simulate::run_trials(c, cfg.technique_a, &cfg.protocol, cfg.trials, cfg.seed),
        || simulate::run_trials(c, cfg.technique_b, &cfg.protocol, cfg.trials, cfg.seed),
    );
    let metrics_a = ra?;
    let metrics_b = rb?;
    let test = welch_t(&metrics_a, &metrics_b)?;
    let (ci_lo, ci_hi) = bootstrap_ci(
        &metrics_a,
        &metrics_b,
        cfg.ci_level,
        cfg.bootstrap_resamples,
        cfg.seed,
    )?;
    let mean_a = mean(&metrics_a);
    let mean_b = mean(&metrics_b);
    Ok(ExperimentResult {
        mean_a,
        mean_b,
        diff: mean_a - mean_b,
        t_stat: test.t,
        df: test.df,
        p_value: test.p,
        ci_lo,
        ci_hi,
        significant: test.p < cfg.alpha,
        metrics_a,
        metrics_b,
    })
}

/// Loads the configured circuit and runs [`compare_on`].
pub fn compare(cfg: &ExperimentConfig) -> Result<ExperimentResult, CompareError> {
    let path = cfg.circuit_path.display().to_string();
    let text = std::fs::read_to_string(&cfg.circuit_path).map_err(|source| CompareError::Io {
        path: path.clone(),
        source,
    })?;
    let name = cfg
        .circuit_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "top".to_string());
    let opts = ParseOptions {
        name,
        ..Default::default()
    };
    let circuit = parse_bench_with(&text, &opts)
        .into_result()
        .map_err(|diags| CompareError::Parse {
            path,
            count: diags.iter().filter(|d| d.is_error()).count(),
            first: diags
                .iter()
                .find(|d| d.is_error())
                .cloned()
                .expect("parse failure carries at least one error"),
        })?;
    compare_on(&circuit, cfg)
}
