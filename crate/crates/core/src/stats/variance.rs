use crate::error::{Error, Result};
use crate::runner::SeedDistribution;

fn non_empty(dist: &SeedDistribution) -> Result<()> {
    if dist.win_rates.is_empty() {
        return Err(Error::InvalidArgument("empty seed distribution".into()));
    }
    Ok(())
}

/// Per-game outcome variance when seeds are drawn afresh: the outcome is a
/// Bernoulli draw with the grand mean, whatever the spread of seeds.
pub fn single_game_variance(dist: &SeedDistribution) -> Result<f64> {
    non_empty(dist)?;
    Ok(bernoulli_variance(dist.grand_mean))
}

/// Per-game variance when each seed is played as a position-swapped pair:
/// the mean of `p_i (1 − p_i)` over seeds (half the per-pair variance).
pub fn mirrored_game_variance(dist: &SeedDistribution) -> Result<f64> {
    non_empty(dist)?;
    Ok(mirrored_variance_of(&dist.win_rates))
}

pub fn bernoulli_variance(p: f64) -> f64 {
    p * (1.0 - p)
}

pub fn mirrored_variance_of(rates: &[f64]) -> f64 {
    rates.iter().map(|&p| p * (1.0 - p)).sum::<f64>() / rates.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(bernoulli_variance(0.5), 0.25);
        assert_eq!(bernoulli_variance(0.0), 0.0);
        assert!((bernoulli_variance(0.1) - 0.09).abs() < 1e-15);
        assert_eq!(mirrored_variance_of(&[0.5, 0.5]), 0.25);
        assert_eq!(mirrored_variance_of(&[0.0, 1.0, 1.0]), 0.0);
        assert!((mirrored_variance_of(&[0.2, 0.8]) - 0.16).abs() < 1e-15);
    }
}
