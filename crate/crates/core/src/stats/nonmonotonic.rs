use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::runner::SkillSweep;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonotonicFlag {
    AboveBoth,
    BelowBoth,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetFlags {
    pub budget: u32,
    pub flags: Vec<MonotonicFlag>,
    pub above_fraction: f64,
    pub below_fraction: f64,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonMonotonicReport {
    pub seed_ids: Vec<u64>,
    pub confidence: f64,
    pub z_critical: f64,
    /// One entry per interior budget of the ladder.
    pub interior: Vec<BudgetFlags>,
    /// Seeds flagged at one budget or more, counted once.
    pub total_fraction: f64,
    pub note: String,
}

/// One-sided critical value of the standard normal.
pub fn z_critical(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "confidence must be in (0, 1), got {confidence}"
        )));
    }
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf(confidence))
}

/// Pooled two-proportion z statistic for `x1/n1 − x2/n2`. `None` when the
/// pooled proportion is 0 or 1 (no variance, nothing to test).
pub fn two_proportion_z(x1: u64, n1: u64, x2: u64, n2: u64) -> Option<f64> {
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    let pooled = (x1 + x2) as f64 / (n1f + n2f);
    if pooled <= 0.0 || pooled >= 1.0 {
        return None;
    }
    let se = (pooled * (1.0 - pooled) * (1.0 / n1f + 1.0 / n2f)).sqrt();
    Some((x1 as f64 / n1f - x2 as f64 / n2f) / se)
}

/// Win count behind a rate, with half-wins from draws rounded up.
pub fn win_count(rate: f64, n_games: usize) -> u64 {
    (rate * n_games as f64 - 1e-9).ceil().max(0.0) as u64
}

/// Flags seeds whose win rate at an interior budget is significantly above
/// (or below) the rates at both neighbouring budgets.
pub fn nonmonotonic_seeds(sweep: &SkillSweep, confidence: f64) -> Result<NonMonotonicReport> {
    if sweep.rows.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "non-monotonic detection needs at least 3 budgets, got {}",
            sweep.rows.len()
        )));
    }
    let seed_ids = sweep.rows[0].seed_ids.clone();
    if sweep
        .rows
        .iter()
        .any(|r| r.seed_ids != seed_ids || r.win_rates.len() != seed_ids.len())
    {
        return Err(Error::Contract("skill sweep rows use different seed lists".into()));
    }
    let z = z_critical(confidence)?;
    let n_seeds = seed_ids.len();
    let mut any = vec![false; n_seeds];
    let mut interior = Vec::new();
    for b in 1..sweep.rows.len() - 1 {
        let (prev, cur, next) = (&sweep.rows[b - 1], &sweep.rows[b], &sweep.rows[b + 1]);
        let count = |row: &crate::runner::SeedDistribution, i: usize| {
            (win_count(row.win_rates[i], row.n_games), row.n_games as u64)
        };
        let flags: Vec<MonotonicFlag> = (0..n_seeds)
            .map(|i| {
                let (xc, nc) = count(cur, i);
                let (xp, np) = count(prev, i);
                let (xn, nn) = count(next, i);
                let zp = two_proportion_z(xc, nc, xp, np);
                let zn = two_proportion_z(xc, nc, xn, nn);
                match (zp, zn) {
                    (Some(a), Some(b)) if a > z && b > z => MonotonicFlag::AboveBoth,
                    (Some(a), Some(b)) if a < -z && b < -z => MonotonicFlag::BelowBoth,
                    _ => MonotonicFlag::None,
                }
            })
            .collect();
        let frac = |f: MonotonicFlag| flags.iter().filter(|&&x| x == f).count() as f64 / n_seeds as f64;
        for (hit, f) in any.iter_mut().zip(&flags) {
            *hit |= *f != MonotonicFlag::None;
        }
        let (above, below) = (frac(MonotonicFlag::AboveBoth), frac(MonotonicFlag::BelowBoth));
        interior.push(BudgetFlags {
            budget: sweep.budgets[b],
            flags,
            above_fraction: above,
            below_fraction: below,
            fraction: above + below,
        });
    }
    Ok(NonMonotonicReport {
        seed_ids,
        confidence,
        z_critical: z,
        interior,
        total_fraction: any.iter().filter(|&&x| x).count() as f64 / n_seeds as f64,
        note: "one-sided pooled two-proportion z-tests; draw half-wins rounded up to whole wins".into(),
    })
}
