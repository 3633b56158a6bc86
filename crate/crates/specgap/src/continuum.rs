//! Grid discretizations of two kernel operators on the real line — the
//! autoregressive Gaussian (Ornstein–Uhlenbeck) chain and the diffusion map
//! built from a potential — together with calculators for their closed-form
//! certificate constants and the dissipativity check that underwrites the
//! diffusion-map certificate.
//!
//! Discretization recipe: trapezoid quadrature on a uniform symmetric grid,
//! rows renormalized to restore exact stochasticity. For both kernels the
//! resulting finite chain is in exact detailed balance with a closed-form
//! measure, which is attached to the chain so downstream symmetrization
//! never has to recover tiny tail masses from a linear solve.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::bounds::{BoundInputs, BoundRoute, GapBound};
use crate::chain::{FiniteChain, Measure, Observable};
use crate::error::{Error, Result};

/// Default cap on the Gaussian mass a kernel row may lose beyond the grid.
pub const TRUNCATION_TOL: f64 = 1e-6;
/// Sub-grid resolution used for extrema of the certificate constants.
const EXTREMA_POINTS: usize = 2001;

/// Uniform symmetric grid on `[-L, L]` with trapezoid quadrature weights.
#[derive(Debug, Clone, Serialize)]
pub struct Grid {
    half_width: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid {
    /// `n` must be odd and at least 3 so the nodes are symmetric about 0.
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidInput {
                context: format!("half-width {half_width} must be positive"),
            });
        }
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::InvalidInput {
                context: format!("grid size {n} must be odd and at least 3"),
            });
        }
        let h = 2.0 * half_width / (n - 1) as f64;
        let mid = ((n - 1) / 2) as f64;
        let nodes: Vec<f64> = (0..n).map(|k| (k as f64 - mid) * h).collect();
        let weights: Vec<f64> = (0..n)
            .map(|k| if k == 0 || k == n - 1 { 0.5 * h } else { h })
            .collect();
        Ok(Self {
            half_width,
            nodes,
            weights,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.len() - 1) as f64
    }

    fn labels(&self) -> Vec<String> {
        self.nodes.iter().map(|x| format!("{x}")).collect()
    }
}

/// Parameters of the autoregressive recursion `X' = (1-a) X + sigma B`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OuParams {
    pub a: f64,
    pub sigma: f64,
}

impl OuParams {
    pub fn new(a: f64, sigma: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidInput {
                context: format!("mean-reversion a = {a} outside (0, 1)"),
            });
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidInput {
                context: format!("noise scale sigma = {sigma} must be positive"),
            });
        }
        Ok(Self { a, sigma })
    }

    /// Stationary variance of the recursion, `sigma² / (a (2 - a))`.
    pub fn stationary_variance(&self) -> f64 {
        self.sigma * self.sigma / (self.a * (2.0 - self.a))
    }

    /// Grid wide enough that every kernel row keeps its Gaussian tail mass
    /// below 1e-8: half-width `6 sigma / a`.
    pub fn default_grid(&self, n: usize) -> Result<Grid> {
        Grid::new(6.0 * self.sigma / self.a, n)
    }
}

/// Closed-form certificate constants for the autoregressive Gaussian chain
/// with Lyapunov function `V(x) = 1 + x²`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OuConstants {
    /// Contraction rate `lambda = a`.
    pub lambda: f64,
    /// Drift bump `b = sigma² + 1`.
    pub b: f64,
    /// Small-set radius `R = sqrt((sigma² + 1) / (a (1 - a)))`.
    pub r: f64,
    /// Minorization constant `alpha = exp(-((sigma²+1)/sigma²)((1-a)/a))`.
    pub alpha: f64,
}

/// The certificate constants admitted by the kernel in closed form.
pub fn ou_certificate_constants(params: &OuParams) -> OuConstants {
    let s2 = params.sigma * params.sigma;
    let b = s2 + 1.0;
    OuConstants {
        lambda: params.a,
        b,
        r: (b / (params.a * (1.0 - params.a))).sqrt(),
        alpha: (-(b / s2) * ((1.0 - params.a) / params.a)).exp(),
    }
}

/// `V(x) = 1 + x²` sampled on the grid.
pub fn ou_lyapunov(grid: &Grid) -> Observable {
    Observable::new(grid.nodes().iter().map(|&x| 1.0 + x * x).collect())
}

fn gaussian_tail_beyond(half_width: f64, mean: f64, sigma: f64) -> f64 {
    let z_hi = (half_width - mean) / (sigma * std::f64::consts::SQRT_2);
    let z_lo = (half_width + mean) / (sigma * std::f64::consts::SQRT_2);
    0.5 * (libm::erfc(z_hi) + libm::erfc(z_lo))
}

/// Discretizes the Gaussian autoregressive kernel on the grid.
///
/// Row `i` is the quadrature of the normal density centered at `(1-a) x_i`;
/// the chain carries its exact discrete stationary measure (proportional to
/// the stationary density times quadrature weight times raw row mass), with
/// which it is in detailed balance to machine precision.
pub fn discretize_ou(params: &OuParams, grid: &Grid) -> Result<FiniteChain> {
    discretize_ou_with_tol(params, grid, TRUNCATION_TOL)
}

/// As [`discretize_ou`] with an explicit truncation-mass tolerance.
pub fn discretize_ou_with_tol(
    params: &OuParams,
    grid: &Grid,
    trunc_tol: f64,
) -> Result<FiniteChain> {
    let n = grid.len();
    let c = 1.0 - params.a;
    let sigma = params.sigma;
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());

    for (i, &x) in grid.nodes().iter().enumerate() {
        let mass = gaussian_tail_beyond(grid.half_width(), c * x, sigma);
        if mass > trunc_tol {
            return Err(Error::GridTooNarrow {
                row: i,
                mass,
                tol: trunc_tol,
            });
        }
    }

    let mut p = DMatrix::zeros(n, n);
    let mut row_mass = vec![0.0; n];
    for i in 0..n {
        let mean = c * grid.nodes()[i];
        let mut sum = 0.0;
        for j in 0..n {
            let d = (grid.nodes()[j] - mean) / sigma;
            let val = norm * (-0.5 * d * d).exp() * grid.weights()[j];
            p[(i, j)] = val;
            sum += val;
        }
        row_mass[i] = sum;
        for j in 0..n {
            p[(i, j)] /= sum;
        }
    }

    // Stationary density of the recursion evaluated on the nodes; the
    // normalization constant cancels.
    let s2 = params.stationary_variance();
    let pi_raw: Vec<f64> = (0..n)
        .map(|i| {
            let x = grid.nodes()[i];
            (-0.5 * x * x / s2).exp() * grid.weights()[i] * row_mass[i]
        })
        .collect();
    let total: f64 = pi_raw.iter().sum();
    let pi = Measure::new(pi_raw.into_iter().map(|w| w / total).collect())?;

    FiniteChain::new_with_tol(p, grid.labels(), 1e-12)?.with_known_pi(pi)
}

/// A potential on the real line with analytic gradient and a bound on its
/// second derivative. Construction shifts the potential so `U >= 1`
/// everywhere; the shift is recorded in the description.
#[derive(Debug, Clone, Serialize)]
pub struct Potential {
    kind: PotentialKind,
    shift: f64,
    pub description: String,
}

#[derive(Debug, Clone, Serialize)]
enum PotentialKind {
    /// `x²/2`.
    Quadratic,
    /// `1 + x²/2`, already at least 1.
    ShiftedQuadratic,
    /// `c sqrt(1 + x²) + (delta/2) x²`: Lipschitz part plus quadratic growth.
    LipschitzPlusQuadratic { c: f64, delta: f64 },
    /// Constant potential; admits no dissipativity radius.
    Flat,
}

impl Potential {
    pub fn quadratic() -> Self {
        Self {
            kind: PotentialKind::Quadratic,
            shift: 1.0,
            description: "x^2/2, shifted by +1 so U >= 1".into(),
        }
    }

    pub fn shifted_quadratic() -> Self {
        Self {
            kind: PotentialKind::ShiftedQuadratic,
            shift: 0.0,
            description: "1 + x^2/2".into(),
        }
    }

    pub fn lipschitz_plus_quadratic(c: f64, delta: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite() && delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidInput {
                context: format!("need c >= 0 and delta > 0, got c = {c}, delta = {delta}"),
            });
        }
        // Minimum value is c, attained at the origin.
        let shift = (1.0 - c).max(0.0);
        Ok(Self {
            kind: PotentialKind::LipschitzPlusQuadratic { c, delta },
            shift,
            description: format!(
                "{c}*sqrt(1+x^2) + {delta}/2*x^2, shifted by +{shift} so U >= 1"
            ),
        })
    }

    pub fn flat() -> Self {
        Self {
            kind: PotentialKind::Flat,
            shift: 1.0,
            description: "constant potential U = 1".into(),
        }
    }

    pub fn u(&self, x: f64) -> f64 {
        self.shift
            + match self.kind {
                PotentialKind::Quadratic => 0.5 * x * x,
                PotentialKind::ShiftedQuadratic => 1.0 + 0.5 * x * x,
                PotentialKind::LipschitzPlusQuadratic { c, delta } => {
                    c * (1.0 + x * x).sqrt() + 0.5 * delta * x * x
                }
                PotentialKind::Flat => 0.0,
            }
    }

    pub fn grad_u(&self, x: f64) -> f64 {
        match self.kind {
            PotentialKind::Quadratic | PotentialKind::ShiftedQuadratic => x,
            PotentialKind::LipschitzPlusQuadratic { c, delta } => {
                c * x / (1.0 + x * x).sqrt() + delta * x
            }
            PotentialKind::Flat => 0.0,
        }
    }

    /// Upper bound on `|U''|` over the line.
    pub fn hess_bound(&self) -> f64 {
        match self.kind {
            PotentialKind::Quadratic | PotentialKind::ShiftedQuadratic => 1.0,
            PotentialKind::LipschitzPlusQuadratic { c, delta } => c + delta,
            PotentialKind::Flat => 0.0,
        }
    }
}

/// Parameters of the diffusion-map operator: kernel bandwidth and potential.
#[derive(Debug, Clone, Serialize)]
pub struct DiffMapParams {
    pub epsilon: f64,
    pub potential: Potential,
}

impl DiffMapParams {
    /// Validates `epsilon > 0` and, when the Hessian bound `m` is positive,
    /// `epsilon < 1/(4m)` — the range in which the certificate constants
    /// below are valid.
    pub fn new(epsilon: f64, potential: Potential) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidInput {
                context: format!("epsilon = {epsilon} must be positive"),
            });
        }
        let m = potential.hess_bound();
        if m > 0.0 {
            let limit = 1.0 / (4.0 * m);
            if epsilon >= limit {
                return Err(Error::EpsilonOutOfRange {
                    epsilon,
                    limit,
                });
            }
        }
        Ok(Self { epsilon, potential })
    }
}

/// Discretizes the diffusion map: row `i` is the quadrature of
/// `g_eps(x_i - y) e^{-U(y)}` renormalized, with `g_eps(z) = exp(-z²/(4 eps))`.
///
/// The attached stationary measure `pi_i ∝ e^{-U(x_i)} r_i w_i` (with `r_i`
/// the raw row mass) is in exact detailed balance with the chain, and the
/// chain is positive semi-definite because the Gaussian kernel matrix is.
pub fn discretize_diffusion_map(params: &DiffMapParams, grid: &Grid) -> Result<FiniteChain> {
    let limit = params.epsilon.sqrt() / 3.0;
    if grid.spacing() > limit {
        return Err(Error::GridTooCoarse {
            spacing: grid.spacing(),
            limit,
        });
    }
    let n = grid.len();
    let inv_4eps = 1.0 / (4.0 * params.epsilon);
    let boltzmann: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&x| (-params.potential.u(x)).exp())
        .collect();

    let mut p = DMatrix::zeros(n, n);
    let mut row_mass = vec![0.0; n];
    for i in 0..n {
        let xi = grid.nodes()[i];
        let mut sum = 0.0;
        for j in 0..n {
            let z = xi - grid.nodes()[j];
            let val = (-z * z * inv_4eps).exp() * boltzmann[j] * grid.weights()[j];
            p[(i, j)] = val;
            sum += val;
        }
        row_mass[i] = sum;
        for j in 0..n {
            p[(i, j)] /= sum;
        }
    }

    let pi_raw: Vec<f64> = (0..n)
        .map(|i| boltzmann[i] * row_mass[i] * grid.weights()[i])
        .collect();
    let total: f64 = pi_raw.iter().sum();
    let pi = Measure::new(pi_raw.into_iter().map(|w| w / total).collect())?;

    FiniteChain::new_with_tol(p, grid.labels(), 1e-12)?.with_known_pi(pi)
}

/// Outcome of the dissipativity check
/// `|U'(x)|²/2 >= lambda0 U(x) + m` for all probe nodes with `|x| >= R`.
#[derive(Debug, Clone, Serialize)]
pub struct DissipativityReport {
    pub pass: bool,
    /// Minimal margin `|U'|²/2 - lambda0 U - m` over the checked nodes.
    pub worst_margin: f64,
    /// Node attaining the minimal margin.
    pub worst_x: f64,
    pub nodes_checked: usize,
}

/// Checks the dissipativity inequality on every probe node beyond the
/// radius. The probe grid should extend to at least `3R`.
pub fn verify_dissipativity(
    potential: &Potential,
    lambda0: f64,
    r: f64,
    probe: &Grid,
) -> DissipativityReport {
    let m = potential.hess_bound();
    let mut worst_margin = f64::INFINITY;
    let mut worst_x = f64::NAN;
    let mut nodes_checked = 0;
    for &x in probe.nodes().iter().filter(|&&x| x.abs() >= r) {
        let g = potential.grad_u(x);
        let margin = 0.5 * g * g - lambda0 * potential.u(x) - m;
        nodes_checked += 1;
        if margin < worst_margin {
            worst_margin = margin;
            worst_x = x;
        }
    }
    DissipativityReport {
        pass: nodes_checked > 0 && worst_margin >= -1e-12,
        worst_margin,
        worst_x,
        nodes_checked,
    }
}

/// Certificate constants of the diffusion map for a dissipativity pair
/// `(lambda0, R)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiffMapConstants {
    /// `b0 = m + max_{|x| <= R} (lambda0 U(x) - |U'(x)|²/2)`.
    pub b0: f64,
    /// `alpha = min_{|x| <= R} 2^{-1/2} exp(-2 eps |U'|² - 3 eps m - (2/s²)(x - s² U')²)`.
    pub alpha: f64,
    /// Proposal variance `s² = 2 eps / (1 + 2 m eps)`.
    pub sigma2: f64,
}

/// Evaluates the closed-form certificate constants, first verifying the
/// dissipativity inequality on a probe grid reaching `3R`. Extrema over the
/// ball `|x| <= R` are taken on a dense sub-grid.
pub fn diffmap_constants(
    params: &DiffMapParams,
    lambda0: f64,
    r: f64,
) -> Result<DiffMapConstants> {
    if !(lambda0 > 0.0 && r > 0.0) {
        return Err(Error::InvalidInput {
            context: format!("need lambda0 > 0 and R > 0, got {lambda0}, {r}"),
        });
    }
    let probe = Grid::new(3.0 * r, EXTREMA_POINTS)?;
    let report = verify_dissipativity(&params.potential, lambda0, r, &probe);
    if !report.pass {
        return Err(Error::Dissipativity {
            context: format!(
                "margin {} at x = {} for lambda0 = {lambda0}, R = {r}",
                report.worst_margin, report.worst_x
            ),
        });
    }

    let m = params.potential.hess_bound();
    let eps = params.epsilon;
    let sigma2 = 2.0 * eps / (1.0 + 2.0 * m * eps);

    let ball = Grid::new(r, EXTREMA_POINTS)?;
    let mut b0_max = f64::NEG_INFINITY;
    let mut alpha_min = f64::INFINITY;
    for &x in ball.nodes() {
        let u = params.potential.u(x);
        let g = params.potential.grad_u(x);
        b0_max = b0_max.max(lambda0 * u - 0.5 * g * g);
        let displaced = x - sigma2 * g;
        let exponent = -2.0 * eps * g * g - 3.0 * eps * m - 2.0 / sigma2 * displaced * displaced;
        alpha_min = alpha_min.min(std::f64::consts::FRAC_1_SQRT_2 * exponent.exp());
    }
    Ok(DiffMapConstants {
        b0: m + b0_max,
        alpha: alpha_min,
        sigma2,
    })
}

/// The certified diffusion-map gap: `||T_eps|| <= 1 - eps lambda0 / (1 + 2 eps b0 / alpha)`.
/// The PSD witness is structural — the operator is built from a positive-
/// definite kernel.
pub fn diffmap_gap_bound(params: &DiffMapParams, lambda0: f64, r: f64) -> Result<GapBound> {
    let constants = diffmap_constants(params, lambda0, r)?;
    let eps = params.epsilon;
    let beta_plus = if constants.alpha > 0.0 {
        eps * lambda0 / (1.0 + 2.0 * eps * constants.b0 / constants.alpha)
    } else {
        0.0
    };
    Ok(GapBound {
        route: BoundRoute::DriftPoincarePsd,
        beta_plus: (beta_plus > 0.0).then_some(beta_plus),
        beta_minus: None,
        norm_bound: 1.0 - beta_plus,
        inputs: BoundInputs {
            lambda: Some(eps * lambda0),
            b: Some(eps * constants.b0),
            alpha: Some(constants.alpha),
            ..BoundInputs::default()
        },
    })
}
