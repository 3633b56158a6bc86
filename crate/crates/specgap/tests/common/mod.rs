//! Shared corpus builders for the integration suites: Metropolis chains with
//! known targets (reversible by construction), mode-pulled non-reversible
//! chains, and level-set certificate sweeps.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use specgap::certificates::{
    fit_drift, fit_minorization, level_set, verify_drift, verify_minorization,
};
use specgap::{DriftCertificate, FiniteChain, Measure, MinorizationCertificate, Observable};

#[allow(unused_imports)]
pub use specgap::certificates::AdjointCertificates;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn example1(eps: f64) -> FiniteChain {
    FiniteChain::from_rows(&[vec![eps, 1.0 - eps], vec![1.0 - eps, eps]]).unwrap()
}

/// Metropolis chain with the uniform full proposal targeting the given
/// positive weights; detailed balance holds exactly by construction and the
/// normalized target is the stationary measure.
pub fn metropolis_from_target(weights: &[f64]) -> (FiniteChain, Measure) {
    let n = weights.len();
    let q = 1.0 / n as f64;
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut off_mass = 0.0;
        for j in 0..n {
            if i != j {
                rows[i][j] = q * (weights[j] / weights[i]).min(1.0);
                off_mass += rows[i][j];
            }
        }
        rows[i][i] = 1.0 - off_mass;
    }
    let total: f64 = weights.iter().sum();
    let pi = Measure::new(weights.iter().map(|w| w / total).collect()).unwrap();
    (FiniteChain::from_rows(&rows).unwrap(), pi)
}

/// Random Metropolis chain with target weights bounded away from zero.
pub fn metropolis_chain(n: usize, rng: &mut ChaCha8Rng) -> (FiniteChain, Measure) {
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..1.0)).collect();
    metropolis_from_target(&weights)
}

/// Strictly positive random row-stochastic chain; generically non-reversible.
pub fn random_positive_chain(n: usize, rng: &mut ChaCha8Rng) -> FiniteChain {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let mut row: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
            let sum: f64 = row.iter().sum();
            row.iter_mut().for_each(|v| *v /= sum);
            row
        })
        .collect();
    FiniteChain::from_rows(&rows).unwrap()
}

/// Non-reversible chain whose rows concentrate near state 0 (Gaussian pull
/// of width `tau` plus an asymmetric noise floor). The strong pull keeps the
/// drift bump small relative to the Lyapunov range, which is what the
/// level-set radius condition needs.
pub fn mode_pulled_chain(n: usize, tau: f64, rng: &mut ChaCha8Rng) -> FiniteChain {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let mut row: Vec<f64> = (0..n)
                .map(|j| {
                    let z = j as f64 / tau;
                    (-0.5 * z * z).exp() + rng.gen_range(0.0..0.1 / n as f64)
                })
                .collect();
            let sum: f64 = row.iter().sum();
            row.iter_mut().for_each(|v| *v /= sum);
            row
        })
        .collect();
    FiniteChain::from_rows(&rows).unwrap()
}

/// `V_i = 1 + (i - mode)²` with the mode at the heaviest state of `pi`.
pub fn mode_distance_lyapunov(pi: &Measure) -> Observable {
    let mode = (0..pi.len())
        .max_by(|&a, &b| pi.get(a).total_cmp(&pi.get(b)))
        .unwrap();
    Observable::new(
        (0..pi.len())
            .map(|i| 1.0 + (i as f64 - mode as f64).powi(2))
            .collect(),
    )
}

/// A fitted certificate pair together with the set it was fitted on.
pub struct FittedPair {
    pub drift: DriftCertificate,
    pub minor: MinorizationCertificate,
}

/// Sweeps level-set small sets of `v` (including the full space) and returns
/// every certificate pair that fits and verifies.
pub fn fit_certificates_by_level_sets(chain: &FiniteChain, v: &Observable) -> Vec<FittedPair> {
    let mut thresholds: Vec<f64> = (0..v.len()).map(|i| v.get(i)).collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();

    let mut seen: Vec<BTreeSet<usize>> = Vec::new();
    let mut out = Vec::new();
    for &r in &thresholds {
        let Ok(k) = level_set(v, r) else { continue };
        if seen.contains(&k) {
            continue;
        }
        seen.push(k.clone());
        let Ok(drift) = fit_drift(chain, v, &k, None) else {
            continue;
        };
        let Ok(minor) = fit_minorization(chain, &k) else {
            continue;
        };
        let drift_ok = verify_drift(chain, &drift, 1e-10).is_ok_and(|r| r.pass);
        let minor_ok = verify_minorization(chain, &minor, 1e-12).is_ok_and(|r| r.pass);
        if drift_ok && minor_ok {
            out.push(FittedPair { drift, minor });
        }
    }
    out
}

/// Matched certificate quadruple for (chain, adjoint), verified on both.
pub fn harmonized_adjoint_certificates(
    chain: &FiniteChain,
    adjoint: &FiniteChain,
    v: &Observable,
    k: &BTreeSet<usize>,
) -> Option<specgap::certificates::AdjointCertificates> {
    let certs =
        specgap::certificates::fit_matching_adjoint_certificates(chain, adjoint, v, k).ok()?;
    let all_pass = verify_drift(chain, &certs.drift, 1e-10).is_ok_and(|r| r.pass)
        && verify_drift(adjoint, &certs.drift_adjoint, 1e-10).is_ok_and(|r| r.pass)
        && verify_minorization(chain, &certs.minor, 1e-12).is_ok_and(|r| r.pass)
        && verify_minorization(adjoint, &certs.minor_adjoint, 1e-12).is_ok_and(|r| r.pass);
    all_pass.then_some(certs)
}
