//! Finite-state Markov chains and their L²(π) algebra.
//!
//! A [`FiniteChain`] is a validated row-stochastic matrix over a labelled
//! state set. [`Measure`] and [`Observable`] are probability vectors and
//! real-valued functions on the states. On top of these the module provides
//! the stationary measure, detailed-balance checks, the action of P on
//! functions and measures, the L²(π) adjoint, matrix products, Dirichlet
//! forms `<f, (I±P)f>_pi`, and the π-weighted inner product.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-sum deviation accepted by the validating constructor.
pub const ROW_SUM_TOL: f64 = 1e-10;
/// Row-sum deviation accepted for products of stochastic matrices.
pub const PRODUCT_ROW_SUM_TOL: f64 = 1e-9;
/// ℓ¹ residual `||pi P - pi||_1` required of a stationary measure.
pub const STATIONARY_TOL: f64 = 1e-10;
/// Default tolerance for detailed-balance checks.
pub const REVERSIBILITY_TOL: f64 = 1e-8;

/// Step-difference threshold for the power-iteration fallback.
const POWER_ITER_TOL: f64 = 1e-12;
/// Iteration cap for the power-iteration fallback.
const POWER_ITER_CAP: usize = 1_000_000;

/// A probability measure on the state set: nonnegative weights summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    weights: DVector<f64>,
}

impl Measure {
    /// Validates nonnegativity and normalization (sum within
    /// [`STATIONARY_TOL`]-scale of 1), then renormalizes exactly.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        Self::from_vector(DVector::from_vec(weights))
    }

    pub fn from_vector(mut weights: DVector<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidMeasure {
                context: "empty weight vector".into(),
            });
        }
        for (i, w) in weights.iter_mut().enumerate() {
            if !w.is_finite() {
                return Err(Error::InvalidMeasure {
                    context: format!("weight {i} is not finite"),
                });
            }
            if *w < -1e-12 {
                return Err(Error::InvalidMeasure {
                    context: format!("weight {i} = {w} is negative"),
                });
            }
            if *w < 0.0 {
                *w = 0.0; // clamp roundoff-level negatives
            }
        }
        let sum = weights.sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidMeasure {
                context: format!("weights sum to {sum}, expected 1"),
            });
        }
        weights /= sum;
        Ok(Self { weights })
    }

    /// Uniform measure on `n` states.
    pub fn uniform(n: usize) -> Self {
        Self {
            weights: DVector::from_element(n, 1.0 / n as f64),
        }
    }

    /// Point mass at `state`.
    pub fn delta(n: usize, state: usize) -> Self {
        let mut w = DVector::zeros(n);
        w[state] = 1.0;
        Self { weights: w }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &DVector<f64> {
        &self.weights
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.weights.iter().copied().collect()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.weights.iter().all(|&w| w > 0.0)
    }

    fn check_dim(&self, other_len: usize, what: &str) -> Result<()> {
        if self.len() != other_len {
            return Err(Error::DimensionMismatch {
                context: format!("measure has {} states, {what} has {other_len}", self.len()),
            });
        }
        Ok(())
    }

    /// `<f, g>_pi = sum_i pi_i f_i g_i`.
    pub fn inner_product(&self, f: &Observable, g: &Observable) -> Result<f64> {
        self.check_dim(f.len(), "f")?;
        self.check_dim(g.len(), "g")?;
        Ok(self
            .weights
            .iter()
            .zip(f.values().iter())
            .zip(g.values().iter())
            .map(|((&w, &a), &b)| w * a * b)
            .sum())
    }

    /// π(f), the mean of `f` under this measure.
    pub fn mean(&self, f: &Observable) -> Result<f64> {
        self.check_dim(f.len(), "f")?;
        Ok(self
            .weights
            .iter()
            .zip(f.values().iter())
            .map(|(&w, &a)| w * a)
            .sum())
    }

    /// `f - pi(f)`, which lies in the mean-zero subspace L²₀(π).
    pub fn center(&self, f: &Observable) -> Result<Observable> {
        let m = self.mean(f)?;
        Ok(Observable::from_vector(f.values().map(|v| v - m)))
    }

    /// The L²(π) norm `||f||_{2,pi} = sqrt(<f, f>_pi)`.
    pub fn norm2(&self, f: &Observable) -> Result<f64> {
        Ok(self.inner_product(f, f)?.max(0.0).sqrt())
    }

    /// Total-variation distance `(1/2) sum_i |self_i - other_i|`.
    pub fn tv_distance(&self, other: &Measure) -> Result<f64> {
        self.check_dim(other.len(), "other measure")?;
        Ok(0.5
            * self
                .weights
                .iter()
                .zip(other.weights.iter())
                .map(|(&a, &b)| (a - b).abs())
                .sum::<f64>())
    }
}

/// A real-valued function on the state set.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    values: DVector<f64>,
}

impl Observable {
    pub fn new(values: Vec<f64>) -> Self {
        Self {
            values: DVector::from_vec(values),
        }
    }

    pub fn from_vector(values: DVector<f64>) -> Self {
        Self { values }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self {
            values: DVector::from_element(n, c),
        }
    }

    /// Indicator observable of a set of state indices.
    pub fn indicator<'a>(n: usize, set: impl IntoIterator<Item = &'a usize>) -> Self {
        let mut v = DVector::zeros(n);
        for &i in set {
            v[i] = 1.0;
        }
        Self { values: v }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.values.iter().copied().collect()
    }
}

/// Outcome of a detailed-balance check (report-style, never an error).
#[derive(Debug, Clone, Serialize)]
pub struct ReversibilityReport {
    pub reversible: bool,
    /// `max_{i,j} |pi_i P_ij - pi_j P_ji|`.
    pub max_violation: f64,
    /// Pair attaining the maximal violation.
    pub worst_pair: (usize, usize),
}

/// On-disk JSON form of a chain: `{"labels": [...], "P": [[...]], "pi": [...]?}`.
#[derive(Debug, Serialize, Deserialize)]
struct ChainJson {
    labels: Vec<String>,
    #[serde(rename = "P")]
    p: Vec<Vec<f64>>,
    #[serde(rename = "pi", skip_serializing_if = "Option::is_none")]
    pi: Option<Vec<f64>>,
}

/// A finite-state Markov chain: validated row-stochastic matrix plus state
/// labels, optionally carrying a stationary measure known by construction.
#[derive(Debug, Clone)]
pub struct FiniteChain {
    labels: Vec<String>,
    p: DMatrix<f64>,
    known_pi: Option<Measure>,
}

impl FiniteChain {
    /// Validating constructor. Rows are renormalized only when every row sum
    /// is within [`ROW_SUM_TOL`] of 1; otherwise the matrix is rejected.
    pub fn new(matrix: DMatrix<f64>, labels: Vec<String>) -> Result<Self> {
        Self::new_with_tol(matrix, labels, ROW_SUM_TOL)
    }

    /// As [`FiniteChain::new`] with an explicit row-sum tolerance (products of
    /// stochastic matrices accumulate roundoff and use a looser bound).
    pub fn new_with_tol(matrix: DMatrix<f64>, labels: Vec<String>, tol: f64) -> Result<Self> {
        let (nr, nc) = matrix.shape();
        if nr == 0 || nr != nc {
            return Err(Error::DimensionMismatch {
                context: format!("transition matrix must be square and nonempty, got {nr}x{nc}"),
            });
        }
        if labels.len() != nr {
            return Err(Error::DimensionMismatch {
                context: format!("{} labels for {nr} states", labels.len()),
            });
        }
        let distinct: HashSet<&str> = labels.iter().map(String::as_str).collect();
        if distinct.len() != nr {
            return Err(Error::InvalidInput {
                context: "state labels are not distinct".into(),
            });
        }
        let mut p = matrix;
        for i in 0..nr {
            for j in 0..nc {
                let v = p[(i, j)];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
            let sum: f64 = p.row(i).sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::NonStochastic { row: i, sum });
            }
            for j in 0..nc {
                p[(i, j)] /= sum;
            }
        }
        Ok(Self {
            labels,
            p,
            known_pi: None,
        })
    }

    /// Constructor from explicit rows with default labels `"0", "1", ...`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                context: "ragged row lengths".into(),
            });
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let m = DMatrix::from_row_slice(n, n, &flat);
        Self::new(m, (0..n).map(|i| i.to_string()).collect())
    }

    /// Attaches a stationary measure known by construction, after validating
    /// `||pi P - pi||_1 <= STATIONARY_TOL`.
    pub fn with_known_pi(mut self, pi: Measure) -> Result<Self> {
        if pi.len() != self.n() {
            return Err(Error::DimensionMismatch {
                context: format!("measure has {} states, chain has {}", pi.len(), self.n()),
            });
        }
        let residual = self.stationary_residual(&pi);
        if residual > STATIONARY_TOL {
            return Err(Error::InvalidMeasure {
                context: format!("||pi P - pi||_1 = {residual} exceeds {STATIONARY_TOL}"),
            });
        }
        self.known_pi = Some(pi);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn transition(&self, i: usize, j: usize) -> f64 {
        self.p[(i, j)]
    }

    /// The stationary measure attached at construction time, if any.
    pub fn known_pi(&self) -> Option<&Measure> {
        self.known_pi.as_ref()
    }

    /// `||pi P - pi||_1` for a candidate measure.
    pub fn stationary_residual(&self, pi: &Measure) -> f64 {
        let prod = self.p.tr_mul(pi.weights());
        (prod - pi.weights()).abs().sum()
    }

    /// The invariant measure `pi` with `pi P = pi`.
    ///
    /// Null-space dimension of `P^T - I` is probed first (a dimension above
    /// one means the chain is reducible and the measure is not unique), then
    /// the measure is obtained from the linear system with a normalization
    /// row, falling back to the SVD null vector and finally to damped power
    /// iteration.
    pub fn stationary_measure(&self) -> Result<Measure> {
        if let Some(pi) = &self.known_pi {
            return Ok(pi.clone());
        }
        let n = self.n();
        let a = self.p.transpose() - DMatrix::<f64>::identity(n, n);

        let svd = a.clone().svd(false, true);
        let sigma_max = svd.singular_values.max();
        let rank_tol = 100.0 * n as f64 * f64::EPSILON * sigma_max.max(1.0);
        let null_dim = svd
            .singular_values
            .iter()
            .filter(|&&s| s <= rank_tol)
            .count();
        if null_dim > 1 {
            return Err(Error::NonUnique { null_dim });
        }

        // Bordered solve: replace the last (redundant) equation with the
        // normalization constraint sum(pi) = 1.
        let mut bordered = a;
        for j in 0..n {
            bordered[(n - 1, j)] = 1.0;
        }
        let mut rhs = DVector::zeros(n);
        rhs[n - 1] = 1.0;
        if let Some(x) = bordered.lu().solve(&rhs) {
            if let Some(m) = self.accept_stationary_candidate(&x) {
                return Ok(m);
            }
        }

        // SVD null vector (singular values are sorted descending, so the
        // null direction is the last row of V^T).
        if let Some(vt) = &svd.v_t {
            let null_vec: DVector<f64> = vt.row(n - 1).transpose();
            let oriented = if null_vec.sum() < 0.0 { -null_vec } else { null_vec };
            if let Some(m) = self.accept_stationary_candidate(&oriented) {
                return Ok(m);
            }
        }

        self.power_iteration_stationary()
    }

    fn accept_stationary_candidate(&self, x: &DVector<f64>) -> Option<Measure> {
        let max_abs = x.abs().max();
        if !max_abs.is_finite() || max_abs == 0.0 {
            return None;
        }
        let mut w = x.clone();
        for v in w.iter_mut() {
            if *v < 0.0 {
                if *v < -1e-8 * max_abs {
                    return None;
                }
                *v = 0.0;
            }
        }
        let sum = w.sum();
        if sum.is_nan() || sum <= 0.0 {
            return None;
        }
        w /= sum;
        let m = Measure { weights: w };
        (self.stationary_residual(&m) <= STATIONARY_TOL).then_some(m)
    }

    /// Damped power iteration `mu <- mu (P + I)/2`; the damping removes
    /// periodicity without changing the fixed point.
    fn power_iteration_stationary(&self) -> Result<Measure> {
        let n = self.n();
        let mut mu = DVector::from_element(n, 1.0 / n as f64);
        for _ in 0..POWER_ITER_CAP {
            let mut next = self.p.tr_mul(&mu);
            next = 0.5 * (next + &mu);
            next /= next.sum();
            let diff = (&next - &mu).abs().sum();
            mu = next;
            if diff < POWER_ITER_TOL {
                let m = Measure { weights: mu };
                return if self.stationary_residual(&m) <= STATIONARY_TOL {
                    Ok(m)
                } else {
                    Err(Error::NoConvergence {
                        cap: POWER_ITER_CAP,
                    })
                };
            }
        }
        Err(Error::NoConvergence {
            cap: POWER_ITER_CAP,
        })
    }

    /// Detailed-balance check `pi_i P_ij = pi_j P_ji` within `tol`.
    pub fn is_reversible(&self, pi: &Measure, tol: f64) -> Result<ReversibilityReport> {
        if pi.len() != self.n() {
            return Err(Error::DimensionMismatch {
                context: format!("measure has {} states, chain has {}", pi.len(), self.n()),
            });
        }
        let mut max_violation = 0.0;
        let mut worst = (0, 0);
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                let v = (pi.get(i) * self.p[(i, j)] - pi.get(j) * self.p[(j, i)]).abs();
                if v > max_violation {
                    max_violation = v;
                    worst = (i, j);
                }
            }
        }
        Ok(ReversibilityReport {
            reversible: max_violation <= tol,
            max_violation,
            worst_pair: worst,
        })
    }

    /// `(P f)_i = sum_j P_ij f_j`.
    pub fn apply_to_function(&self, f: &Observable) -> Result<Observable> {
        if f.len() != self.n() {
            return Err(Error::DimensionMismatch {
                context: format!("observable has {} entries, chain has {}", f.len(), self.n()),
            });
        }
        Ok(Observable::from_vector(&self.p * f.values()))
    }

    /// `(mu P)_j = sum_i mu_i P_ij`, renormalized to a probability measure.
    pub fn apply_to_measure(&self, mu: &Measure) -> Result<Measure> {
        if mu.len() != self.n() {
            return Err(Error::DimensionMismatch {
                context: format!("measure has {} states, chain has {}", mu.len(), self.n()),
            });
        }
        let mut w = self.p.tr_mul(mu.weights());
        w /= w.sum();
        Ok(Measure { weights: w })
    }

    /// The adjoint in L²(π): `(P†)_ij = pi_j P_ji / pi_i`.
    ///
    /// The result is row-stochastic whenever `pi` is invariant for `P`, and
    /// `pi` remains invariant for the adjoint, so it stays attached.
    pub fn adjoint(&self, pi: &Measure) -> Result<FiniteChain> {
        if pi.len() != self.n() {
            return Err(Error::DimensionMismatch {
                context: format!("measure has {} states, chain has {}", pi.len(), self.n()),
            });
        }
        if let Some(i) = (0..self.n()).find(|&i| pi.get(i) <= 0.0) {
            return Err(Error::ZeroMassState { state: i });
        }
        let n = self.n();
        let mut q = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                q[(i, j)] = pi.get(j) * self.p[(j, i)] / pi.get(i);
            }
        }
        FiniteChain::new_with_tol(q, self.labels.clone(), PRODUCT_ROW_SUM_TOL)?
            .with_known_pi(pi.clone())
    }

    /// `P^2`; the known stationary measure, if any, carries over.
    pub fn square(&self) -> Result<FiniteChain> {
        let sq = FiniteChain::new_with_tol(
            &self.p * &self.p,
            self.labels.clone(),
            PRODUCT_ROW_SUM_TOL,
        )?;
        match &self.known_pi {
            Some(pi) => sq.with_known_pi(pi.clone()),
            None => Ok(sq),
        }
    }

    /// Matrix product `self * other` as a chain (labels taken from `self`).
    pub fn multiply(&self, other: &FiniteChain) -> Result<FiniteChain> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                context: format!("{} vs {} states", self.n(), other.n()),
            });
        }
        FiniteChain::new_with_tol(&self.p * &other.p, self.labels.clone(), PRODUCT_ROW_SUM_TOL)
    }

    /// Dirichlet forms `E = <f, (I-P)f>_pi` and `Etilde = <f, (I+P)f>_pi`.
    pub fn dirichlet_forms(&self, pi: &Measure, f: &Observable) -> Result<(f64, f64)> {
        let pf = self.apply_to_function(f)?;
        let ff = pi.inner_product(f, f)?;
        let fpf = pi.inner_product(f, &pf)?;
        Ok((ff - fpf, ff + fpf))
    }

    /// Parses the chain JSON format; a provided `"pi"` is validated, an
    /// absent one is left to be computed on demand.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: ChainJson = serde_json::from_str(s)?;
        let n = raw.labels.len();
        if raw.p.len() != n || raw.p.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                context: format!("matrix shape does not match {n} labels"),
            });
        }
        let flat: Vec<f64> = raw.p.iter().flatten().copied().collect();
        let chain = FiniteChain::new(DMatrix::from_row_slice(n, n, &flat), raw.labels)?;
        match raw.pi {
            Some(pi) => chain.with_known_pi(Measure::new(pi)?),
            None => Ok(chain),
        }
    }

    /// Serializes to the chain JSON format (including `"pi"` when attached).
    pub fn to_json_string(&self) -> Result<String> {
        let raw = ChainJson {
            labels: self.labels.clone(),
            p: (0..self.n())
                .map(|i| self.p.row(i).iter().copied().collect())
                .collect(),
            pi: self.known_pi.as_ref().map(Measure::to_vec),
        };
        Ok(serde_json::to_string_pretty(&raw)?)
    }
}
