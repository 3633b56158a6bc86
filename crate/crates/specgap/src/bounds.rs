//! Certified spectral-gap bounds.
//!
//! Every route turns verified certificates into an upper bound on the
//! operator norm of P restricted to mean-zero functions:
//!
//! * `poincare_bound`: the Poincaré constant `beta_+ = lambda / (1 + 2b/alpha)`
//!   from a drift/minorization pair on the same small set.
//! * `psd_gap`: for positive semi-definite P the Poincaré constant alone is
//!   the gap, `||P|| <= 1 - beta_+`.
//! * `squared_gap`: for a level-set small set with radius above `2b/lambda`,
//!   P² inherits certificates with constants `(lambda', b', alpha')` and the
//!   PSD route applies to it, giving `||P|| <= sqrt(1 - beta_+')`.
//! * `nonreversible_gap`: same mechanism through the reversible, PSD product
//!   P†P when P and P† carry matching certificates.
//! * `doeblin_gap`: minorization on the full space gives `||P|| <= 1 - alpha/2`.
//!
//! Soundness — certified bound never below the exact norm — is the central
//! property and is exercised against the eigenvalue oracle in the test suite.

use serde::Serialize;

use crate::certificates::{feasible_level_set_radius, DriftCertificate, MinorizationCertificate};
use crate::error::{Error, Result};

/// Which mechanism produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundRoute {
    /// Poincaré constant plus a positive semi-definiteness witness.
    #[serde(rename = "drift_poincare_psd")]
    DriftPoincarePsd,
    /// Certificates pushed through P² under the level-set condition.
    #[serde(rename = "squared_chain")]
    SquaredChain,
    /// Certificates pushed through the adjoint product P†P.
    #[serde(rename = "adjoint_product")]
    AdjointProduct,
    /// Minorization on the full state space.
    #[serde(rename = "doeblin")]
    Doeblin,
    /// Exact eigenvalue oracle (for comparison rows, not a certificate).
    #[serde(rename = "exact_spectrum")]
    ExactSpectrum,
}

/// The certificate constants a bound was computed from, for auditability.
#[derive(Debug, Clone, Default, Serialize)]
pub struct BoundInputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_k: Option<f64>,
    /// Derived constants for the squared/product operator, when applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_derived: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_derived: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_derived: Option<f64>,
}

/// A certified bound with provenance.
#[derive(Debug, Clone, Serialize)]
pub struct GapBound {
    pub route: BoundRoute,
    /// Poincaré constant for `I - P` (of the operator the route certifies).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_plus: Option<f64>,
    /// Poincaré constant for `I + P`, when the route yields one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_minus: Option<f64>,
    /// Certified upper bound on `||P||` restricted to mean-zero functions.
    pub norm_bound: f64,
    pub inputs: BoundInputs,
}

/// `beta_+ = lambda / (1 + 2b/alpha)` from a verified certificate pair
/// sharing the same small set.
pub fn poincare_bound(
    drift: &DriftCertificate,
    minor: &MinorizationCertificate,
) -> Result<f64> {
    if drift.k() != minor.k() {
        return Err(Error::SetMismatch);
    }
    Ok(drift.lambda() / (1.0 + 2.0 * drift.b() / minor.alpha()))
}

/// Upgrades a Poincaré constant to a gap when P is positive semi-definite.
/// The witness must come from the spectral oracle or from structure (P², P†P,
/// and kernel operators built from positive-definite kernels are PSD).
pub fn psd_gap(beta_plus: f64, psd_witness: bool) -> Result<GapBound> {
    if !psd_witness {
        return Err(Error::NotPsd);
    }
    if !(beta_plus > 0.0 && beta_plus <= 1.0) {
        return Err(Error::InvalidInput {
            context: format!("beta_plus = {beta_plus} outside (0, 1]"),
        });
    }
    Ok(GapBound {
        route: BoundRoute::DriftPoincarePsd,
        beta_plus: Some(beta_plus),
        beta_minus: None,
        norm_bound: 1.0 - beta_plus,
        inputs: BoundInputs::default(),
    })
}

/// Constants inherited by the squared (or adjoint-product) operator:
/// `lambda' = lambda(3/2 - lambda)`, `b' = (2 - lambda) b`,
/// `alpha' = alpha² nu(K)`.
pub fn squared_constants(
    lambda: f64,
    b: f64,
    alpha: f64,
    nu_k: f64,
) -> Result<(f64, f64, f64)> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidInput {
            context: format!("lambda = {lambda} outside (0, 1]"),
        });
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidInput {
            context: format!("alpha = {alpha} outside (0, 1]"),
        });
    }
    if !(0.0..=1.0).contains(&nu_k) {
        return Err(Error::InvalidInput {
            context: format!("nu(K) = {nu_k} outside [0, 1]"),
        });
    }
    if !(b >= 0.0 && b.is_finite()) {
        return Err(Error::InvalidInput {
            context: format!("b = {b} must be finite and nonnegative"),
        });
    }
    Ok((lambda * (1.5 - lambda), (2.0 - lambda) * b, alpha * alpha * nu_k))
}

fn product_route_bound(
    route: BoundRoute,
    lambda: f64,
    b: f64,
    alpha: f64,
    nu_k: f64,
) -> Result<GapBound> {
    let (lambda_d, b_d, alpha_d) = squared_constants(lambda, b, alpha, nu_k)?;
    if alpha_d <= 0.0 {
        return Err(Error::InvalidInput {
            context: "minorization measure puts zero mass on K".into(),
        });
    }
    let beta_plus = lambda_d / (1.0 + 2.0 * b_d / alpha_d);
    Ok(GapBound {
        route,
        beta_plus: Some(beta_plus),
        beta_minus: None,
        norm_bound: (1.0 - beta_plus).max(0.0).sqrt(),
        inputs: BoundInputs {
            lambda: Some(lambda),
            b: Some(b),
            alpha: Some(alpha),
            nu_k: Some(nu_k),
            lambda_derived: Some(lambda_d),
            b_derived: Some(b_d),
            alpha_derived: Some(alpha_d),
        },
    })
}

/// Gap bound through P². Requires the small set to be a sublevel set of V
/// admitting a radius above `2b/lambda` — the condition the inherited drift
/// inequality for P² actually uses.
pub fn squared_gap(
    drift: &DriftCertificate,
    minor: &MinorizationCertificate,
) -> Result<GapBound> {
    if drift.k() != minor.k() {
        return Err(Error::SetMismatch);
    }
    if feasible_level_set_radius(drift).is_none() {
        return Err(Error::LevelSetCondition {
            context: format!(
                "K admits no radius R with max_K V <= R < min_{{K^c}} V and R > 2b/lambda = {}",
                2.0 * drift.b() / drift.lambda()
            ),
        });
    }
    product_route_bound(
        BoundRoute::SquaredChain,
        drift.lambda(),
        drift.b(),
        minor.alpha(),
        minor.nu_of_k(),
    )
}

/// Gap bound for a non-reversible chain through the reversible product P†P.
/// P and P† must carry certificates with identical `(V, K, lambda, b, alpha)`;
/// `nu(K)` is taken as the smaller of the two measures' masses on K, which is
/// sound whichever side of the product the minorization is propagated through.
pub fn nonreversible_gap(
    drift_p: &DriftCertificate,
    drift_adj: &DriftCertificate,
    minor_p: &MinorizationCertificate,
    minor_adj: &MinorizationCertificate,
) -> Result<GapBound> {
    let mismatch = |what: &str| Error::ConstantsMismatch {
        context: what.to_string(),
    };
    if drift_p.k() != drift_adj.k() || drift_p.k() != minor_p.k() || drift_p.k() != minor_adj.k() {
        return Err(mismatch("small set K"));
    }
    if drift_p.v().len() != drift_adj.v().len()
        || (0..drift_p.v().len())
            .any(|i| (drift_p.v().get(i) - drift_adj.v().get(i)).abs() > 1e-12)
    {
        return Err(mismatch("Lyapunov function V"));
    }
    if (drift_p.lambda() - drift_adj.lambda()).abs() > 1e-12 {
        return Err(mismatch("lambda"));
    }
    if (drift_p.b() - drift_adj.b()).abs() > 1e-12 {
        return Err(mismatch("b"));
    }
    if (minor_p.alpha() - minor_adj.alpha()).abs() > 1e-12 {
        return Err(mismatch("alpha"));
    }
    if feasible_level_set_radius(drift_p).is_none() {
        return Err(Error::LevelSetCondition {
            context: format!(
                "K admits no radius R with max_K V <= R < min_{{K^c}} V and R > 2b/lambda = {}",
                2.0 * drift_p.b() / drift_p.lambda()
            ),
        });
    }
    product_route_bound(
        BoundRoute::AdjointProduct,
        drift_p.lambda(),
        drift_p.b(),
        minor_p.alpha(),
        minor_p.nu_of_k().min(minor_adj.nu_of_k()),
    )
}

/// Doeblin route: minorization on the full state space yields
/// `||P|| <= 1 - alpha/2` directly.
pub fn doeblin_gap(minor: &MinorizationCertificate, n_states: usize) -> Result<GapBound> {
    if minor.k().len() != n_states || minor.k().iter().any(|&i| i >= n_states) {
        return Err(Error::NotFullSpace);
    }
    let half = 0.5 * minor.alpha();
    Ok(GapBound {
        route: BoundRoute::Doeblin,
        beta_plus: Some(half),
        beta_minus: Some(half),
        norm_bound: 1.0 - half,
        inputs: BoundInputs {
            alpha: Some(minor.alpha()),
            nu_k: Some(minor.nu_of_k()),
            ..BoundInputs::default()
        },
    })
}

/// Two one-sided Poincaré constants combine into the gap `min(beta_+, beta_-)`.
pub fn combine(beta_plus: f64, beta_minus: f64) -> f64 {
    beta_plus.min(beta_minus)
}
