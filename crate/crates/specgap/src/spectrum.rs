//! Exact spectral oracle for reversible finite chains.
//!
//! Reversibility makes P self-adjoint on L²(π); the similarity transform
//! `S = D_pi^{1/2} P D_pi^{-1/2}` turns that into matrix symmetry, so the
//! whole spectrum is real and a symmetric eigensolver applies. The resulting
//! [`SpectralReport`] is the ground truth every certified bound is checked
//! against.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::chain::{FiniteChain, Measure, Observable};
use crate::error::{Error, Result};

/// Default tolerance on the detailed-balance precondition.
pub const SYMMETRIZE_REV_TOL: f64 = 1e-8;
/// Maximal asymmetry tolerated in the similarity-transformed matrix.
pub const SYMMETRY_TOL: f64 = 1e-8;
/// Per-pair residual `||S v - lambda v||` demanded of the eigensolver.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-9;
/// Default eigenvalue floor for the positive semi-definiteness test.
pub const PSD_TOL: f64 = 1e-10;

/// Full spectrum of the π-symmetrized operator, sorted descending, plus the
/// derived gap quantities on the mean-zero subspace L²₀(π).
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    /// Eigenvalues of P (all real by reversibility), descending.
    pub eigenvalues: Vec<f64>,
    /// Second-largest eigenvalue.
    pub lambda2: f64,
    /// Smallest eigenvalue.
    pub lambda_min: f64,
    /// `max(|lambda2|, |lambda_min|)`, the operator norm on L²₀(π).
    #[serde(rename = "op_norm_L20")]
    pub op_norm_l20: f64,
    /// `1 - lambda2`, reported unclamped (exceeds 1 when `lambda2 < 0`).
    pub beta_plus_exact: f64,
    /// `1 + lambda_min`.
    pub beta_minus_exact: f64,
    /// Whether the smallest eigenvalue clears `-PSD_TOL`.
    pub psd: bool,
}

impl SpectralReport {
    /// `1 - op_norm`, the exact spectral gap on L²₀(π).
    pub fn gap(&self) -> f64 {
        1.0 - self.op_norm_l20
    }
}

fn check_positive_measure(chain: &FiniteChain, pi: &Measure) -> Result<()> {
    if pi.len() != chain.n() {
        return Err(Error::DimensionMismatch {
            context: format!("measure has {} states, chain has {}", pi.len(), chain.n()),
        });
    }
    if let Some(i) = (0..chain.n()).find(|&i| pi.get(i) <= 0.0) {
        return Err(Error::ZeroMassState { state: i });
    }
    Ok(())
}

/// Similarity transform `S_ij = sqrt(pi_i / pi_j) P_ij`, symmetrized as
/// `(S + S^T)/2` after verifying the asymmetry stays below [`SYMMETRY_TOL`].
pub fn symmetrize(chain: &FiniteChain, pi: &Measure, rev_tol: f64) -> Result<DMatrix<f64>> {
    check_positive_measure(chain, pi)?;
    let rep = chain.is_reversible(pi, rev_tol)?;
    if !rep.reversible {
        return Err(Error::NotReversible {
            context: format!(
                "detailed balance violated by {} at pair {:?} (tolerance {rev_tol})",
                rep.max_violation, rep.worst_pair
            ),
        });
    }
    let n = chain.n();
    let sqrt_pi: Vec<f64> = (0..n).map(|i| pi.get(i).sqrt()).collect();
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = sqrt_pi[i] / sqrt_pi[j] * chain.transition(i, j);
        }
    }
    let mut asym: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            asym = asym.max((s[(i, j)] - s[(j, i)]).abs());
        }
    }
    if asym > SYMMETRY_TOL {
        return Err(Error::NotReversible {
            context: format!("symmetrized matrix has asymmetry {asym} > {SYMMETRY_TOL}"),
        });
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (s[(i, j)] + s[(j, i)]);
            s[(i, j)] = avg;
            s[(j, i)] = avg;
        }
    }
    Ok(s)
}

/// Eigenvalues and orthonormal eigenvectors of the symmetrized operator,
/// sorted by eigenvalue descending, with per-pair residuals verified.
pub fn eigen_pairs(
    chain: &FiniteChain,
    pi: &Measure,
    rev_tol: f64,
) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let s = symmetrize(chain, pi, rev_tol)?;
    let eig = nalgebra::linalg::SymmetricEigen::try_new(s.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::EigenFailure {
            context: "symmetric QR iteration did not converge".into(),
        })?;

    let n = chain.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(k));
    }

    for (k, &value) in values.iter().enumerate() {
        let v = vectors.column(k);
        let residual = (&s * v - value * v).norm();
        if residual > EIGEN_RESIDUAL_TOL {
            return Err(Error::EigenFailure {
                context: format!("residual {residual} for eigenvalue {value} (index {k})"),
            });
        }
    }
    Ok((values, vectors))
}

/// The exact oracle: eigenvalues of P together with the derived exact gap
/// quantities. Uses the default detailed-balance tolerance.
pub fn eigen_report(chain: &FiniteChain, pi: &Measure) -> Result<SpectralReport> {
    eigen_report_with(chain, pi, SYMMETRIZE_REV_TOL)
}

/// As [`eigen_report`] with an explicit detailed-balance tolerance.
pub fn eigen_report_with(
    chain: &FiniteChain,
    pi: &Measure,
    rev_tol: f64,
) -> Result<SpectralReport> {
    let (values, _) = eigen_pairs(chain, pi, rev_tol)?;
    report_from_sorted_eigenvalues(values)
}

fn report_from_sorted_eigenvalues(values: Vec<f64>) -> Result<SpectralReport> {
    let n = values.len();
    if (values[0] - 1.0).abs() > 1e-9 {
        return Err(Error::EigenFailure {
            context: format!("leading eigenvalue {} is not 1", values[0]),
        });
    }
    if values.iter().any(|&l| !(-1.0 - 1e-9..=1.0 + 1e-9).contains(&l)) {
        return Err(Error::EigenFailure {
            context: "eigenvalue outside [-1, 1]".into(),
        });
    }
    let lambda2 = if n > 1 { values[1] } else { 1.0 };
    let lambda_min = values[n - 1];
    let op_norm = lambda2.abs().max(lambda_min.abs()).min(1.0 + 1e-9);
    Ok(SpectralReport {
        lambda2,
        lambda_min,
        op_norm_l20: op_norm,
        beta_plus_exact: 1.0 - lambda2,
        beta_minus_exact: 1.0 + lambda_min,
        psd: lambda_min >= -PSD_TOL,
        eigenvalues: values,
    })
}

/// The eigenfunction of P for the second-largest eigenvalue, normalized to
/// unit L²(π) norm; it is automatically mean-zero under π.
pub fn second_eigenfunction(chain: &FiniteChain, pi: &Measure, rev_tol: f64) -> Result<Observable> {
    let (_, vectors) = eigen_pairs(chain, pi, rev_tol)?;
    if chain.n() < 2 {
        return Err(Error::InvalidInput {
            context: "chain has a single state".into(),
        });
    }
    let v = vectors.column(1);
    let f = DVector::from_iterator(
        chain.n(),
        (0..chain.n()).map(|i| v[i] / pi.get(i).sqrt()),
    );
    Ok(Observable::from_vector(f))
}

/// Positive semi-definiteness test: smallest eigenvalue at least `-tol`.
pub fn is_psd(report: &SpectralReport, tol: f64) -> bool {
    report.lambda_min >= -tol
}

/// Exact Poincaré constants `(beta_plus, beta_minus, beta)` derived from the
/// spectrum; `beta = min(beta_plus, beta_minus)` holds algebraically.
pub fn exact_poincare_constants(report: &SpectralReport) -> (f64, f64, f64) {
    let beta_plus = report.beta_plus_exact;
    let beta_minus = report.beta_minus_exact;
    (beta_plus, beta_minus, beta_plus.min(beta_minus))
}

/// Slack of the inequality `<(f-m)²/V, (I-P)V>_pi <= <f, (I-P)f>_pi`, which
/// holds for every reversible chain, Lyapunov function `V >= 1`, and shift
/// `m`. Returns `rhs - lhs`; a negative value beyond roundoff falsifies it.
pub fn drift_form_slack(
    chain: &FiniteChain,
    pi: &Measure,
    v: &Observable,
    f: &Observable,
    m: f64,
) -> Result<f64> {
    check_positive_measure(chain, pi)?;
    let rep = chain.is_reversible(pi, SYMMETRIZE_REV_TOL)?;
    if !rep.reversible {
        return Err(Error::NotReversible {
            context: format!("detailed balance violated by {}", rep.max_violation),
        });
    }
    if let Some(i) = (0..v.len()).find(|&i| v.get(i) < 1.0 - 1e-12) {
        return Err(Error::InvalidLyapunov {
            state: i,
            value: v.get(i),
        });
    }
    let weighted = Observable::from_vector(DVector::from_iterator(
        f.len(),
        (0..f.len()).map(|i| {
            let d = f.get(i) - m;
            d * d / v.get(i)
        }),
    ));
    let pv = chain.apply_to_function(v)?;
    let iv = Observable::from_vector(v.values() - pv.values());
    let lhs = pi.inner_product(&weighted, &iv)?;
    let (rhs, _) = chain.dirichlet_forms(pi, f)?;
    Ok(rhs - lhs)
}

/// Slack of the inequality `||(f-m) 1_K||²_{2,pi} <= (2/alpha) E(f,f)` with
/// `m` the π-conditional mean of `f` on `K`; valid whenever the minorization
/// certificate `(K, alpha, nu)` verifies on the chain.
pub fn small_set_variance_slack(
    chain: &FiniteChain,
    pi: &Measure,
    f: &Observable,
    k: &std::collections::BTreeSet<usize>,
    alpha: f64,
) -> Result<f64> {
    if k.is_empty() {
        return Err(Error::EmptyK);
    }
    if pi.len() != chain.n() || f.len() != chain.n() {
        return Err(Error::DimensionMismatch {
            context: "measure/observable length does not match the chain".into(),
        });
    }
    let pi_k: f64 = k.iter().map(|&i| pi.get(i)).sum();
    if pi_k <= 0.0 {
        return Err(Error::ZeroMassOnK);
    }
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::InvalidInput {
            context: format!("alpha = {alpha} must be positive"),
        });
    }
    let m: f64 = k.iter().map(|&i| pi.get(i) * f.get(i)).sum::<f64>() / pi_k;
    let lhs: f64 = k
        .iter()
        .map(|&i| {
            let d = f.get(i) - m;
            pi.get(i) * d * d
        })
        .sum();
    let (e, _) = chain.dirichlet_forms(pi, f)?;
    Ok(2.0 / alpha * e - lhs)
}
