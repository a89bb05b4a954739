//! Monte-Carlo check of the single-game and mirrored-pair variance results
//! on a catalogue of seed mixtures.

use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::engine::{derive_stream, ChanceStream};
use crate::error::{Error, Result};

/// Distribution of a seed's first-player win probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Mixture {
    PointMass {
        p: f64,
    },
    /// `a` and `b` with probability 1/2 each.
    TwoPoint {
        a: f64,
        b: f64,
    },
    Beta {
        alpha: f64,
        beta: f64,
    },
}

impl Mixture {
    /// Parses `point:0.5`, `two-point:0.2,0.8` or `beta:2,5`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || {
            Error::Config(format!(
                "unknown mixture {spec:?}; expected point:P, two-point:A,B or beta:ALPHA,BETA"
            ))
        };
        let (name, args) = spec.split_once(':').ok_or_else(bad)?;
        let nums = args
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        let m = match (name, nums.as_slice()) {
            ("point", &[p]) => Mixture::PointMass { p },
            ("two-point", &[a, b]) => Mixture::TwoPoint { a, b },
            ("beta", &[alpha, beta]) => Mixture::Beta { alpha, beta },
            _ => return Err(bad()),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |x: f64| (0.0..=1.0).contains(&x);
        let ok = match *self {
            Mixture::PointMass { p } => prob(p),
            Mixture::TwoPoint { a, b } => prob(a) && prob(b),
            Mixture::Beta { alpha, beta } => alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid mixture parameters {self:?}")))
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Mixture::PointMass { p } => format!("point:{p}"),
            Mixture::TwoPoint { a, b } => format!("two-point:{a},{b}"),
            Mixture::Beta { alpha, beta } => format!("beta:{alpha},{beta}"),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Mixture::PointMass { p } => p,
            Mixture::TwoPoint { a, b } => (a + b) / 2.0,
            Mixture::Beta { alpha, beta } => alpha / (alpha + beta),
        }
    }

    /// `E[p (1 − p)]` under the mixture.
    pub fn mean_pq(&self) -> f64 {
        match *self {
            Mixture::PointMass { p } => p * (1.0 - p),
            Mixture::TwoPoint { a, b } => (a * (1.0 - a) + b * (1.0 - b)) / 2.0,
            Mixture::Beta { alpha, beta } => {
                let s = alpha + beta;
                alpha * beta / (s * (s + 1.0))
            }
        }
    }

    fn sampler(&self) -> Result<Sampler> {
        Ok(match *self {
            Mixture::PointMass { p } => Sampler::Point(p),
            Mixture::TwoPoint { a, b } => Sampler::Two(a, b),
            Mixture::Beta { alpha, beta } => {
                Sampler::Beta(Beta::new(alpha, beta).map_err(|e| Error::Config(format!("beta mixture: {e}")))?)
            }
        })
    }
}

enum Sampler {
    Point(f64),
    Two(f64, f64),
    Beta(Beta<f64>),
}

impl Sampler {
    fn sample(&self, rng: &mut ChanceStream) -> f64 {
        match self {
            Sampler::Point(p) => *p,
            Sampler::Two(a, b) => {
                if rng.below(2) == 0 {
                    *a
                } else {
                    *b
                }
            }
            Sampler::Beta(d) => d.sample(rng),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceCheck {
    pub name: String,
    pub expected: f64,
    pub observed: f64,
    /// Standard deviation of the estimator; 0 means the check is exact.
    pub sigma: f64,
    pub tolerance_sigmas: f64,
    pub pass: bool,
}

impl VarianceCheck {
    fn new(name: &str, expected: f64, observed: f64, sigma: f64) -> Self {
        let tol = 3.0;
        let pass = if sigma == 0.0 {
            (observed - expected).abs() <= 1e-12
        } else {
            (observed - expected).abs() <= tol * sigma
        };
        VarianceCheck {
            name: name.into(),
            expected,
            observed,
            sigma,
            tolerance_sigmas: tol,
            pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub mixture: Mixture,
    pub n_draws: usize,
    pub seed: u64,
    pub checks: Vec<VarianceCheck>,
    pub pass: bool,
}

/// Unbiased sample mean and variance.
fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Standard deviation of the sample variance of `n` i.i.d. draws with
/// variance `var` and fourth central moment `mu4`.
fn sample_variance_sd(var: f64, mu4: f64, n: usize) -> f64 {
    let n = n as f64;
    ((mu4 - var * var * (n - 3.0) / (n - 1.0)) / n).max(0.0).sqrt()
}

/// Simulates `n_draws` single games and `n_draws` mirrored pairs, each on a
/// freshly drawn seed probability, and compares the empirical moments with
/// the closed forms.
pub fn verify_variance(mixture: &Mixture, n_draws: usize, seed: u64) -> Result<VarianceReport> {
    mixture.validate()?;
    if n_draws < 4 {
        return Err(Error::InvalidArgument("verify_variance needs at least 4 draws".into()));
    }
    let sampler = mixture.sampler()?;
    let mut rng = derive_stream(seed, "verify-variance")?;
    let bern = |p: f64, rng: &mut ChanceStream| if rng.unit_f64() < p { 1.0 } else { 0.0 };

    let single: Vec<f64> = (0..n_draws)
        .map(|_| {
            let p = sampler.sample(&mut rng);
            bern(p, &mut rng)
        })
        .collect();
    // Reference player: first seat in game one, second seat after the swap.
    let pairs: Vec<f64> = (0..n_draws)
        .map(|_| {
            let p = sampler.sample(&mut rng);
            bern(p, &mut rng) + (1.0 - bern(p, &mut rng))
        })
        .collect();

    let p_mu = mixture.mean();
    let pq = mixture.mean_pq();
    let (s_mean, s_var) = mean_var(&single);
    let (m_mean, m_var) = mean_var(&pairs);

    let var1 = p_mu * (1.0 - p_mu);
    let mu4_1 = var1 * ((1.0 - p_mu).powi(3) + p_mu.powi(3));
    // X₂ − 1 takes ±1 with probability E[p(1−p)] each, 0 otherwise.
    let var2 = 2.0 * pq;
    let mu4_2 = 2.0 * pq;
    let n = n_draws as f64;
    let checks = vec![
        VarianceCheck::new("single_mean", p_mu, s_mean, (var1 / n).sqrt()),
        VarianceCheck::new("single_variance", var1, s_var, sample_variance_sd(var1, mu4_1, n_draws)),
        VarianceCheck::new("mirrored_pair_mean", 1.0, m_mean, (var2 / n).sqrt()),
        VarianceCheck::new(
            "mirrored_pair_variance",
            var2,
            m_var,
            sample_variance_sd(var2, mu4_2, n_draws),
        ),
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(VarianceReport {
        mixture: *mixture,
        n_draws,
        seed,
        checks,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_catalogue() {
        assert_eq!(Mixture::parse("point:0.5").unwrap(), Mixture::PointMass { p: 0.5 });
        assert_eq!(
            Mixture::parse("two-point:0,1").unwrap(),
            Mixture::TwoPoint { a: 0.0, b: 1.0 }
        );
        assert_eq!(
            Mixture::parse("beta:2,5").unwrap(),
            Mixture::Beta { alpha: 2.0, beta: 5.0 }
        );
        assert!(Mixture::parse("gamma:1").is_err());
        assert!(Mixture::parse("point:2").is_err());
        assert!(Mixture::parse("beta:0,1").is_err());
    }

    #[test]
    fn beta_moments() {
        let m = Mixture::Beta { alpha: 2.0, beta: 5.0 };
        assert!((m.mean() - 2.0 / 7.0).abs() < 1e-15);
        let pm = m.mean();
        assert!((pm * (1.0 - pm) - 0.2041).abs() < 1e-4);
        // E[p(1-p)] = ab / ((a+b)(a+b+1)) = 10/56.
        assert!((m.mean_pq() - 10.0 / 56.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_pairs_have_zero_variance() {
        let r = verify_variance(&Mixture::TwoPoint { a: 0.0, b: 1.0 }, 1000, 3).unwrap();
        let pair = r.checks.iter().find(|c| c.name == "mirrored_pair_variance").unwrap();
        assert_eq!(pair.observed, 0.0);
        assert!(r.pass, "{r:?}");
    }
}
