use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};
use crate::runner::SeedDistribution;

pub const BUCKETS: usize = 50;
pub const DEFAULT_TRIM: f64 = 0.05;
pub const DEFAULT_CONFIDENCE: f64 = 0.99;

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("{name} must be in [0, 1], got {p}")));
    }
    Ok(())
}

fn check_confidence(confidence: f64) -> Result<()> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "confidence must be in (0, 1), got {confidence}"
        )));
    }
    Ok(())
}

/// Central `confidence` interval of a Binomial(n, p) count, divided by `n`.
///
/// The bounds are the `α/2` and `1 − α/2` quantiles (smallest `k` with
/// `CDF(k) ≥ q`) found by summing the exact pmf.
pub fn binomial_interval(n: u64, p: f64, confidence: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidArgument("binomial_interval needs n >= 1".into()));
    }
    check_probability("p", p)?;
    check_confidence(confidence)?;
    if p == 0.0 {
        return Ok((0.0, 0.0));
    }
    if p == 1.0 {
        return Ok((1.0, 1.0));
    }
    let alpha = 1.0 - confidence;
    let (lo_q, hi_q) = (alpha / 2.0, 1.0 - alpha / 2.0);
    let (ln_p, ln_q) = (p.ln(), (1.0 - p).ln());
    let mut cdf = 0.0;
    let mut lo = None;
    for k in 0..=n {
        cdf += (ln_binomial(n, k) + k as f64 * ln_p + (n - k) as f64 * ln_q).exp();
        if lo.is_none() && cdf >= lo_q {
            lo = Some(k);
        }
        if cdf >= hi_q {
            return Ok((lo.unwrap_or(k) as f64 / n as f64, k as f64 / n as f64));
        }
    }
    // Rounding left the total a hair below 1.
    Ok((lo.unwrap_or(n) as f64 / n as f64, 1.0))
}

fn bucket(v: f64) -> usize {
    ((v * BUCKETS as f64 + 1e-9).floor() as usize).min(BUCKETS - 1)
}

/// Counts per 2% bucket `[0, 0.02), …, [0.98, 1.0]`.
pub fn histogram(values: &[f64]) -> Result<[usize; BUCKETS]> {
    let mut counts = [0usize; BUCKETS];
    for &v in values {
        check_probability("win rate", v)?;
        counts[bucket(v)] += 1;
    }
    Ok(counts)
}

/// `bucket_lo,bucket_hi,count`, one row per bucket.
pub fn histogram_csv(values: &[f64]) -> Result<String> {
    let counts = histogram(values)?;
    let mut out = String::from("bucket_lo,bucket_hi,count\n");
    for (i, c) in counts.iter().enumerate() {
        out.push_str(&format!(
            "{:.2},{:.2},{}\n",
            i as f64 / BUCKETS as f64,
            (i + 1) as f64 / BUCKETS as f64,
            c
        ));
    }
    Ok(out)
}

/// Shannon entropy, in nats, of the 50-bucket histogram.
pub fn entropy(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("entropy of an empty sample".into()));
    }
    let n = values.len() as f64;
    Ok(histogram(values)?
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum())
}

fn sorted(values: &[f64]) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 values, got {}",
            values.len()
        )));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("NaN in sample".into()));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

pub fn span(values: &[f64]) -> Result<f64> {
    let v = sorted(values)?;
    Ok(v[v.len() - 1] - v[0])
}

/// Values dropped from each tail by [`trimmed_span`].
pub fn trim_count(n: usize, trim: f64) -> usize {
    (trim / 2.0 * n as f64 + 1e-9).floor() as usize
}

/// Span after dropping `floor(trim/2 · n)` values from each end.
pub fn trimmed_span(values: &[f64], trim: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&trim) {
        return Err(Error::InvalidArgument(format!("trim must be in [0, 1), got {trim}")));
    }
    let v = sorted(values)?;
    let k = trim_count(v.len(), trim);
    Ok(v[v.len() - 1 - k] - v[k])
}

/// Fraction of `rates` strictly outside the Binomial(n_games, p_mu) null
/// interval.
pub fn outlier_fraction_of(rates: &[f64], n_games: u64, p_mu: f64, confidence: f64) -> Result<f64> {
    if rates.is_empty() {
        return Err(Error::InvalidArgument("outlier_fraction of an empty sample".into()));
    }
    let (lo, hi) = binomial_interval(n_games, p_mu, confidence)?;
    // Rates are multiples of 1/(2n); the slack only absorbs rounding.
    let eps = 1e-9 / n_games as f64;
    let outside = rates.iter().filter(|&&r| r < lo - eps || r > hi + eps).count();
    Ok(outside as f64 / rates.len() as f64)
}

pub fn outlier_fraction(dist: &SeedDistribution, confidence: f64) -> Result<f64> {
    outlier_fraction_of(&dist.win_rates, dist.n_games as u64, dist.grand_mean, confidence)
}

/// The four randomness metrics of one seed distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub entropy: f64,
    pub span: f64,
    pub trimmed_span: f64,
    pub outlier_fraction: f64,
    pub grand_mean: f64,
    pub n_seeds: usize,
    pub n_games: usize,
    pub confidence: f64,
    pub trim: f64,
    pub null_interval: [f64; 2],
    /// Fraction of all games that ended drawn (scored 0.5).
    pub draw_fraction: f64,
    pub forced_draws: usize,
}

impl MetricsReport {
    pub fn compute(dist: &SeedDistribution) -> Result<Self> {
        Self::with_params(dist, DEFAULT_CONFIDENCE, DEFAULT_TRIM)
    }

    pub fn with_params(dist: &SeedDistribution, confidence: f64, trim: f64) -> Result<Self> {
        let (lo, hi) = binomial_interval(dist.n_games as u64, dist.grand_mean, confidence)?;
        Ok(MetricsReport {
            entropy: entropy(&dist.win_rates)?,
            span: span(&dist.win_rates)?,
            trimmed_span: trimmed_span(&dist.win_rates, trim)?,
            outlier_fraction: outlier_fraction(dist, confidence)?,
            grand_mean: dist.grand_mean,
            n_seeds: dist.win_rates.len(),
            n_games: dist.n_games,
            confidence,
            trim,
            null_interval: [lo, hi],
            draw_fraction: dist.draw_fraction,
            forced_draws: dist.forced_draws,
        })
    }
}
