//! Certified spectral-gap bounds for finite Markov chains.
//!
//! The toolkit takes a reversible finite chain together with Foster–Lyapunov
//! drift and minorization certificates and produces explicit, auditable
//! upper bounds on the operator norm of the chain restricted to mean-zero
//! functions — equivalently, lower bounds on its spectral gap. Every bound
//! is checkable against an exact eigenvalue oracle obtained by
//! π-symmetrizing the transition matrix.
//!
//! Modules:
//!
//! * [`chain`] — validated row-stochastic chains, stationary measures,
//!   detailed balance, the L²(π) algebra, and Dirichlet forms.
//! * [`certificates`] — drift (`PV <= (1-lambda)V + b 1_K`) and minorization
//!   (`P(i,.) >= alpha nu` on `K`) certificates: verification and fitting.
//! * [`bounds`] — the certified bound routes: the drift Poincaré constant
//!   `lambda/(1 + 2b/alpha)` with a PSD witness, the squared-chain and
//!   adjoint-product routes, and the Doeblin route.
//! * [`spectrum`] — the exact oracle: full spectrum of the symmetrized
//!   operator, exact Poincaré constants, PSD test.
//! * [`continuum`] — grid discretizations of the autoregressive Gaussian
//!   chain and the diffusion map, with their closed-form certificates.
//! * [`convergence`] — geometric decay of total variation and L²(π) moments
//!   under a certified rate.

pub mod bounds;
pub mod certificates;
pub mod chain;
pub mod continuum;
pub mod convergence;
pub mod error;
pub mod spectrum;

pub use bounds::{BoundInputs, BoundRoute, GapBound};
pub use certificates::{DriftCertificate, DriftReport, MinorizationCertificate, MinorizationReport};
pub use chain::{FiniteChain, Measure, Observable, ReversibilityReport};
pub use continuum::{DiffMapParams, Grid, OuParams, Potential};
pub use convergence::DecaySeries;
pub use error::{Error, Result};
pub use spectrum::SpectralReport;
