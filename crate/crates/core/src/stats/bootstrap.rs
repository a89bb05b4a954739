use crate::engine::derive_stream;
use crate::error::{Error, Result};

/// Type-7 (linear interpolation) quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Percentile bootstrap interval of `statistic`. Deterministic in
/// `boot_seed`.
pub fn bootstrap_ci<F>(
    statistic: F,
    sample: &[f64],
    n_boot: usize,
    confidence: f64,
    boot_seed: u64,
) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> f64,
{
    if sample.is_empty() {
        return Err(Error::InvalidArgument("bootstrap of an empty sample".into()));
    }
    if n_boot == 0 {
        return Err(Error::InvalidArgument("bootstrap needs n_boot >= 1".into()));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "confidence must be in (0, 1), got {confidence}"
        )));
    }
    let mut rng = derive_stream(boot_seed, "bootstrap")?;
    let n = sample.len() as u64;
    let mut resample = vec![0.0; sample.len()];
    let mut stats = Vec::with_capacity(n_boot);
    for _ in 0..n_boot {
        for slot in resample.iter_mut() {
            *slot = sample[rng.below(n) as usize];
        }
        stats.push(statistic(&resample));
    }
    stats.sort_by(f64::total_cmp);
    let alpha = 1.0 - confidence;
    Ok((
        quantile_sorted(&stats, alpha / 2.0),
        quantile_sorted(&stats, 1.0 - alpha / 2.0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean(v: &[f64]) -> f64 {
        v.iter().sum::<f64>() / v.len() as f64
    }

    #[test]
    fn constant_sample_gives_zero_width() {
        let sample = [0.3; 40];
        let (lo, hi) = bootstrap_ci(mean, &sample, 500, 0.95, 1).unwrap();
        assert_eq!((lo, hi), (mean(&sample), mean(&sample)));
    }

    #[test]
    fn single_resample() {
        let sample = [0.1, 0.2, 0.9];
        let (lo, hi) = bootstrap_ci(mean, &sample, 1, 0.95, 4).unwrap();
        assert_eq!(lo, hi);
        // The value is the mean of some resample of three elements.
        assert!((lo * 3.0 * 10.0).round() > 0.0);
    }

    #[test]
    fn same_seed_same_interval() {
        let sample: Vec<f64> = (0..50).map(|i| (i % 7) as f64 / 7.0).collect();
        let a = bootstrap_ci(mean, &sample, 300, 0.9, 9).unwrap();
        assert_eq!(a, bootstrap_ci(mean, &sample, 300, 0.9, 9).unwrap());
        assert_ne!(a, bootstrap_ci(mean, &sample, 300, 0.9, 10).unwrap());
    }

    #[test]
    fn quantile_interpolates() {
        let v = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(quantile_sorted(&v, 0.5), 1.5);
        assert_eq!(quantile_sorted(&v, 1.0), 3.0);
        assert_eq!(quantile_sorted(&[5.0], 0.3), 5.0);
    }
}
