//! Structural invariants of the chain algebra, the certificate fitters, and
//! the spectral oracle, exercised on random inputs.

mod common;

use proptest::prelude::*;
use rand::Rng;

use specgap::certificates::{fit_minorization, verify_minorization, MINORIZATION_TOL};
use specgap::spectrum::{eigen_report, second_eigenfunction, SYMMETRIZE_REV_TOL};
use specgap::{FiniteChain, Observable};

fn stochastic_rows() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..7).prop_flat_map(|n| {
        proptest::collection::vec(
            proptest::collection::vec(0.05f64..1.0, n),
            n,
        )
        .prop_map(|raw| {
            raw.into_iter()
                .map(|mut row| {
                    let s: f64 = row.iter().sum();
                    row.iter_mut().for_each(|v| *v /= s);
                    row
                })
                .collect()
        })
    })
}

fn positive_targets() -> impl Strategy<Value = Vec<f64>> {
    (2usize..8).prop_flat_map(|n| proptest::collection::vec(0.2f64..1.0, n))
}

proptest! {
    /// Squaring, products, and adjoints of valid chains stay row-stochastic.
    #[test]
    fn operator_algebra_preserves_stochasticity(rows in stochastic_rows()) {
        let chain = FiniteChain::from_rows(&rows).unwrap();
        let sq = chain.square().unwrap();
        let prod = chain.multiply(&sq).unwrap();
        let pi = chain.stationary_measure().unwrap();
        let adj = chain.adjoint(&pi).unwrap();
        for c in [&sq, &prod, &adj] {
            for i in 0..c.n() {
                let sum: f64 = (0..c.n()).map(|j| c.transition(i, j)).sum();
                prop_assert!((sum - 1.0).abs() <= 1e-9);
            }
        }
    }

    /// The adjoint is an involution when pi is the stationary measure.
    #[test]
    fn adjoint_is_an_involution(rows in stochastic_rows()) {
        let chain = FiniteChain::from_rows(&rows).unwrap();
        let pi = chain.stationary_measure().unwrap();
        let back = chain.adjoint(&pi).unwrap().adjoint(&pi).unwrap();
        for i in 0..chain.n() {
            for j in 0..chain.n() {
                prop_assert!((back.transition(i, j) - chain.transition(i, j)).abs() <= 1e-12);
            }
        }
    }

    /// The adjoint satisfies <f, Pg>_pi = <P†f, g>_pi.
    #[test]
    fn adjoint_moves_across_the_inner_product(rows in stochastic_rows(), seed in 0u64..1000) {
        let chain = FiniteChain::from_rows(&rows).unwrap();
        let pi = chain.stationary_measure().unwrap();
        let adj = chain.adjoint(&pi).unwrap();
        let mut r = common::rng(seed);
        for _ in 0..20 {
            let f = Observable::new((0..chain.n()).map(|_| r.gen_range(-1.0..1.0)).collect());
            let g = Observable::new((0..chain.n()).map(|_| r.gen_range(-1.0..1.0)).collect());
            let lhs = pi.inner_product(&f, &chain.apply_to_function(&g).unwrap()).unwrap();
            let rhs = pi.inner_product(&adj.apply_to_function(&f).unwrap(), &g).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10);
        }
    }

    /// The adjoint product P†P is reversible for pi.
    #[test]
    fn adjoint_product_is_reversible(rows in stochastic_rows()) {
        let chain = FiniteChain::from_rows(&rows).unwrap();
        let pi = chain.stationary_measure().unwrap();
        let adj = chain.adjoint(&pi).unwrap();
        let prod = adj.multiply(&chain).unwrap();
        let rep = prod.is_reversible(&pi, 1e-10).unwrap();
        prop_assert!(rep.reversible, "violation {}", rep.max_violation);
    }

    /// Metropolis chains are reversible for their target and the solver
    /// recovers the target to tight tolerance.
    #[test]
    fn metropolis_target_is_stationary(weights in positive_targets()) {
        let (chain, target) = common::metropolis_from_target(&weights);
        let rep = chain.is_reversible(&target, 1e-12).unwrap();
        prop_assert!(rep.reversible);
        let solved = chain.stationary_measure().unwrap();
        for i in 0..chain.n() {
            prop_assert!((solved.get(i) - target.get(i)).abs() <= 1e-10);
        }
    }

    /// Both Dirichlet forms are nonnegative for reversible chains, and the
    /// first matches its double-sum representation.
    #[test]
    fn dirichlet_forms_nonnegative_and_match_double_sum(
        weights in positive_targets(),
        seed in 0u64..1000,
    ) {
        let (chain, pi) = common::metropolis_from_target(&weights);
        let mut r = common::rng(seed);
        let f = Observable::new((0..chain.n()).map(|_| r.gen_range(-2.0..2.0)).collect());
        let (e, etilde) = chain.dirichlet_forms(&pi, &f).unwrap();
        prop_assert!(e >= -1e-10);
        prop_assert!(etilde >= -1e-10);

        let mut double_sum = 0.0;
        for i in 0..chain.n() {
            for j in 0..chain.n() {
                let d = f.get(i) - f.get(j);
                double_sum += 0.5 * pi.get(i) * chain.transition(i, j) * d * d;
            }
        }
        prop_assert!((e - double_sum).abs() <= 1e-10);
    }

    /// The column-minima fit yields the maximal alpha for its set: any other
    /// measure's best feasible alpha cannot beat it.
    #[test]
    fn fitted_minorization_alpha_is_maximal(
        weights in positive_targets(),
        seed in 0u64..1000,
    ) {
        let (chain, _) = common::metropolis_from_target(&weights);
        let mut r = common::rng(seed);
        let k: std::collections::BTreeSet<usize> =
            (0..chain.n()).filter(|_| r.gen_bool(0.5)).collect();
        prop_assume!(!k.is_empty());
        let fitted = fit_minorization(&chain, &k).unwrap();

        for _ in 0..10 {
            let raw: Vec<f64> = (0..chain.n()).map(|_| r.gen_range(0.01..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let nu: Vec<f64> = raw.into_iter().map(|x| x / total).collect();
            // Best alpha available to this measure on the same set.
            let alpha_best = (0..chain.n())
                .map(|j| {
                    k.iter()
                        .map(|&i| chain.transition(i, j) / nu[j])
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(f64::INFINITY, f64::min);
            prop_assert!(alpha_best <= fitted.alpha() + 1e-12);
        }
    }

    /// Growing the small set can only shrink the fitted overlap constant.
    #[test]
    fn fitted_alpha_is_monotone_in_k(weights in positive_targets()) {
        let (chain, _) = common::metropolis_from_target(&weights);
        let mut prev = f64::INFINITY;
        let mut k = std::collections::BTreeSet::new();
        for i in 0..chain.n() {
            k.insert(i);
            let alpha = fit_minorization(&chain, &k).unwrap().alpha();
            prop_assert!(alpha <= prev + 1e-12);
            prev = alpha;
        }
    }
}

#[test]
fn fitted_drift_always_verifies_across_corpus() {
    use specgap::certificates::{fit_drift, level_set, verify_drift, DRIFT_TOL};
    let mut r = common::rng(40);
    let mut fitted = 0usize;
    for _ in 0..25 {
        let n = r.gen_range(4..25);
        let (chain, pi) = common::metropolis_chain(n, &mut r);
        let v = common::mode_distance_lyapunov(&pi);
        let radius = 1.0 + r.gen_range(0.0..(n * n) as f64);
        let Ok(k) = level_set(&v, radius) else { continue };
        let Ok(cert) = fit_drift(&chain, &v, &k, None) else {
            continue;
        };
        fitted += 1;
        let report = verify_drift(&chain, &cert, DRIFT_TOL).unwrap();
        assert!(report.pass, "fit produced a non-verifying certificate");
    }
    assert!(fitted >= 10, "only {fitted} drift fits succeeded");
}

#[test]
fn fitted_minorization_always_verifies_across_corpus() {
    let mut r = common::rng(41);
    for _ in 0..25 {
        let n = r.gen_range(3..20);
        let (chain, _) = common::metropolis_chain(n, &mut r);
        let k: std::collections::BTreeSet<usize> = (0..n).filter(|_| r.gen_bool(0.4)).collect();
        if k.is_empty() {
            continue;
        }
        let cert = fit_minorization(&chain, &k).unwrap();
        assert!(verify_minorization(&chain, &cert, MINORIZATION_TOL)
            .unwrap()
            .pass);
    }
}

#[test]
fn squared_spectrum_is_the_square_of_the_spectrum() {
    let mut r = common::rng(42);
    for _ in 0..10 {
        let n = r.gen_range(3..15);
        let (chain, pi) = common::metropolis_chain(n, &mut r);
        let rep = eigen_report(&chain, &pi).unwrap();
        let sq_rep = eigen_report(&chain.square().unwrap(), &pi).unwrap();
        let mut squared: Vec<f64> = rep.eigenvalues.iter().map(|l| l * l).collect();
        squared.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in squared.iter().zip(sq_rep.eigenvalues.iter()) {
            assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
        }
    }
}

#[test]
fn exact_poincare_constant_is_the_variational_minimum() {
    let mut r = common::rng(43);
    for _ in 0..5 {
        let n = r.gen_range(4..12);
        let (chain, pi) = common::metropolis_chain(n, &mut r);
        let rep = eigen_report(&chain, &pi).unwrap();

        // Rayleigh quotients of random mean-zero functions never dip below
        // the spectral constant...
        let mut min_quotient = f64::INFINITY;
        for _ in 0..500 {
            let f0 = Observable::new((0..n).map(|_| r.gen_range(-1.0..1.0)).collect());
            let f = pi.center(&f0).unwrap();
            let norm2 = pi.inner_product(&f, &f).unwrap();
            if norm2 < 1e-12 {
                continue;
            }
            let (e, _) = chain.dirichlet_forms(&pi, &f).unwrap();
            min_quotient = min_quotient.min(e / norm2);
        }
        assert!(min_quotient >= rep.beta_plus_exact - 1e-6);

        // ...and the second eigenfunction attains it.
        let f2 = second_eigenfunction(&chain, &pi, SYMMETRIZE_REV_TOL).unwrap();
        let (e, _) = chain.dirichlet_forms(&pi, &f2).unwrap();
        let norm2 = pi.inner_product(&f2, &f2).unwrap();
        assert!((e / norm2 - rep.beta_plus_exact).abs() <= 1e-9);
    }
}

#[test]
fn operator_norm_dominates_random_rayleigh_quotients() {
    let mut r = common::rng(44);
    for _ in 0..5 {
        let n = r.gen_range(4..12);
        let (chain, pi) = common::metropolis_chain(n, &mut r);
        let rep = eigen_report(&chain, &pi).unwrap();
        for _ in 0..500 {
            let f0 = Observable::new((0..n).map(|_| r.gen_range(-1.0..1.0)).collect());
            let f = pi.center(&f0).unwrap();
            let denom = pi.norm2(&f).unwrap();
            if denom < 1e-9 {
                continue;
            }
            let pf = chain.apply_to_function(&f).unwrap();
            let ratio = pi.norm2(&pf).unwrap() / denom;
            assert!(ratio <= rep.op_norm_l20 + 1e-9);
        }
    }
}

#[test]
fn reversibility_as_inner_product_symmetry() {
    let mut r = common::rng(45);
    let (chain, pi) = common::metropolis_chain(9, &mut r);
    for _ in 0..50 {
        let f = Observable::new((0..9).map(|_| r.gen_range(-1.0..1.0)).collect());
        let g = Observable::new((0..9).map(|_| r.gen_range(-1.0..1.0)).collect());
        let lhs = pi
            .inner_product(&f, &chain.apply_to_function(&g).unwrap())
            .unwrap();
        let rhs = pi
            .inner_product(&chain.apply_to_function(&f).unwrap(), &g)
            .unwrap();
        assert!((lhs - rhs).abs() <= 1e-10);
    }
}

#[test]
fn doubly_stochastic_measure_round_trip() {
    // A measure pushed through a chain and the stationary fixed point agree
    // with the dedicated solver on a mid-sized Metropolis chain.
    let mut r = common::rng(46);
    let (chain, pi) = common::metropolis_chain(25, &mut r);
    let pushed = chain.apply_to_measure(&pi).unwrap();
    assert!(pi.tv_distance(&pushed).unwrap() <= 1e-12);
    let solved = chain.stationary_measure().unwrap();
    assert!(pi.tv_distance(&solved).unwrap() <= 1e-10);
}
