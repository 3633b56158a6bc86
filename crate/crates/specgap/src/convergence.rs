//! Empirical verification of the two consequences of a spectral gap:
//! geometric decay of total-variation distance and of L²(π) moments under
//! the certified rate `1 - beta`.
//!
//! Iteration is exact matrix-vector multiplication, not Monte Carlo, so the
//! decay inequalities can be checked without statistical noise.

use std::io::Write;

use serde::Serialize;

use crate::chain::{FiniteChain, Measure, Observable};
use crate::error::{Error, Result};

/// Default step cap when none is requested.
pub const DEFAULT_STEPS: usize = 500;
/// Early-stop threshold: iteration ends once values drop below this.
const FLOOR: f64 = 1e-14;

/// A decay trace together with its certified geometric envelope.
#[derive(Debug, Clone, Serialize)]
pub struct DecaySeries {
    pub steps: Vec<usize>,
    /// Observed TV distance or L²(π) norm per step.
    pub values: Vec<f64>,
    /// The certified rate `1 - beta`.
    pub rate_bound: f64,
    /// `constant * rate_bound^k`; for TV decay the constant is
    /// `||dmu/dpi - 1||_{2,pi}`, for moment decay it is `values[0]`.
    pub envelope: Vec<f64>,
}

impl DecaySeries {
    /// Largest amount by which a value exceeds its envelope (negative when
    /// the envelope dominates everywhere).
    pub fn max_violation(&self) -> f64 {
        self.values
            .iter()
            .zip(self.envelope.iter())
            .map(|(v, e)| v - e)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Writes `step,value,envelope` lines.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "step,value,envelope")?;
        for ((k, v), e) in self.steps.iter().zip(&self.values).zip(&self.envelope) {
            writeln!(w, "{k},{v},{e}")?;
        }
        Ok(())
    }
}

fn check_beta(beta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::InvalidInput {
            context: format!("beta = {beta} outside [0, 1)"),
        });
    }
    Ok(1.0 - beta)
}

/// Total-variation decay `||mu P^k - pi||_TV` against the envelope
/// `(1-beta)^k ||dmu/dpi - 1||_{2,pi}`.
///
/// With `n_steps = None` the trace runs to [`DEFAULT_STEPS`] or until the
/// values fall below 1e-14, whichever comes first.
pub fn tv_decay(
    chain: &FiniteChain,
    mu0: &Measure,
    beta: f64,
    n_steps: Option<usize>,
) -> Result<DecaySeries> {
    let rate = check_beta(beta)?;
    let pi = chain.stationary_measure()?;
    if let Some(i) = (0..chain.n()).find(|&i| pi.get(i) <= 0.0) {
        return Err(Error::ZeroMassState { state: i });
    }
    if mu0.len() != chain.n() {
        return Err(Error::DimensionMismatch {
            context: format!("mu0 has {} states, chain has {}", mu0.len(), chain.n()),
        });
    }
    // ||h - 1||_{2,pi} with h = dmu/dpi.
    let constant = (0..chain.n())
        .map(|i| {
            let d = mu0.get(i) / pi.get(i) - 1.0;
            pi.get(i) * d * d
        })
        .sum::<f64>()
        .max(0.0)
        .sqrt();

    let cap = n_steps.unwrap_or(DEFAULT_STEPS);
    let early_stop = n_steps.is_none();
    let mut steps = Vec::with_capacity(cap + 1);
    let mut values = Vec::with_capacity(cap + 1);
    let mut envelope = Vec::with_capacity(cap + 1);
    let mut mu = mu0.clone();
    let mut rate_pow = 1.0;
    for k in 0..=cap {
        let tv = mu.tv_distance(&pi)?;
        steps.push(k);
        values.push(tv);
        envelope.push(constant * rate_pow);
        if early_stop && tv < FLOOR {
            break;
        }
        if k < cap {
            mu = chain.apply_to_measure(&mu)?;
            rate_pow *= rate;
        }
    }
    Ok(DecaySeries {
        steps,
        values,
        rate_bound: rate,
        envelope,
    })
}

/// Moment decay `||P^k f - pi(f)||_{2,pi}` against the envelope
/// `(1-beta)^k ||f - pi(f)||_{2,pi}`.
pub fn moment_decay(
    chain: &FiniteChain,
    f: &Observable,
    beta: f64,
    n_steps: Option<usize>,
) -> Result<DecaySeries> {
    let rate = check_beta(beta)?;
    let pi = chain.stationary_measure()?;
    if f.len() != chain.n() {
        return Err(Error::DimensionMismatch {
            context: format!("observable has {} entries, chain has {}", f.len(), chain.n()),
        });
    }
    // P preserves the mean, so iterate on the centered function.
    let mut g = pi.center(f)?;
    let constant = pi.norm2(&g)?;

    let cap = n_steps.unwrap_or(DEFAULT_STEPS);
    let early_stop = n_steps.is_none();
    let mut steps = Vec::with_capacity(cap + 1);
    let mut values = Vec::with_capacity(cap + 1);
    let mut envelope = Vec::with_capacity(cap + 1);
    let mut rate_pow = 1.0;
    for k in 0..=cap {
        let norm = pi.norm2(&g)?;
        steps.push(k);
        values.push(norm);
        envelope.push(constant * rate_pow);
        if early_stop && norm < FLOOR {
            break;
        }
        if k < cap {
            g = chain.apply_to_function(&g)?;
            rate_pow *= rate;
        }
    }
    Ok(DecaySeries {
        steps,
        values,
        rate_bound: rate,
        envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1(eps: f64) -> FiniteChain {
        FiniteChain::from_rows(&[vec![eps, 1.0 - eps], vec![1.0 - eps, eps]]).unwrap()
    }

    #[test]
    fn stationary_start_stays_at_zero() {
        let c = example1(0.1);
        let pi = c.stationary_measure().unwrap();
        let series = tv_decay(&c, &pi, 0.2, Some(50)).unwrap();
        assert!(series.values.iter().all(|&v| v <= 1e-12));
    }

    #[test]
    fn delta_start_follows_closed_form() {
        // mu_k - pi lies along the eigenvector (1, -1)/2 with eigenvalue
        // -0.8, so TV(k) = 0.5 * 0.8^k exactly.
        let c = example1(0.1);
        let series = tv_decay(&c, &Measure::delta(2, 0), 0.2, Some(40)).unwrap();
        for (k, &v) in series.values.iter().enumerate() {
            let expected = 0.5 * 0.8f64.powi(k as i32);
            assert!((v - expected).abs() <= 1e-12, "step {k}: {v} vs {expected}");
        }
        // ||h - 1|| = 1, so the envelope is 0.8^k and dominates with slack.
        assert!((series.envelope[0] - 1.0).abs() <= 1e-12);
        assert!(series.max_violation() <= 1e-9);
    }

    #[test]
    fn loose_certified_rate_still_dominates() {
        let c = example1(0.1);
        let series = tv_decay(&c, &Measure::delta(2, 0), 1.0 / 14.0, Some(100)).unwrap();
        assert!(series.max_violation() <= 1e-9);
    }

    #[test]
    fn constant_observable_decays_to_zero_immediately() {
        let c = example1(0.1);
        let series = moment_decay(&c, &Observable::constant(2, 7.0), 0.2, Some(20)).unwrap();
        assert!(series.values.iter().all(|&v| v <= 1e-12));
    }

    #[test]
    fn eigenfunction_decay_is_tight() {
        let c = example1(0.1);
        let pi = c.stationary_measure().unwrap();
        let f = crate::spectrum::second_eigenfunction(&c, &pi, 1e-8).unwrap();
        let series = moment_decay(&c, &f, 0.2, Some(60)).unwrap();
        for (k, &v) in series.values.iter().enumerate() {
            let expected = 0.8f64.powi(k as i32);
            assert!((v - expected).abs() <= 1e-9, "step {k}");
        }
        assert!(series.max_violation() <= 1e-9);
    }

    #[test]
    fn tv_is_monotone_under_the_kernel() {
        let c = example1(0.3);
        let series = tv_decay(&c, &Measure::delta(2, 1), 0.4, Some(100)).unwrap();
        for w in series.values.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn csv_shape() {
        let c = example1(0.1);
        let series = tv_decay(&c, &Measure::delta(2, 0), 0.2, Some(3)).unwrap();
        let mut buf = Vec::new();
        series.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "step,value,envelope");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0,0.5,"));
    }

    #[test]
    fn invalid_beta_is_rejected() {
        let c = example1(0.1);
        assert!(tv_decay(&c, &Measure::delta(2, 0), 1.0, Some(5)).is_err());
        assert!(tv_decay(&c, &Measure::delta(2, 0), -0.1, Some(5)).is_err());
    }
}
