use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavefem::eigen::{cholesky, DEFAULT_TOL};
use wavefem::{solve_gen_sym, GeneralizedEigenProblem, ModeSet};

fn random_pair(n: usize, seed: u64) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let a = (&r + r.transpose()) * 0.5;
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let b = m.transpose() * &m + DMatrix::identity(n, n);
    (a, b)
}

fn solve(a: &DMatrix<f64>, b: &DMatrix<f64>) -> ModeSet {
    solve_gen_sym(
        &GeneralizedEigenProblem::new(a.clone(), b.clone()).unwrap(),
        DEFAULT_TOL,
    )
    .unwrap()
}

#[test]
fn random_50_residuals_and_reference_eigenvalues() {
    let (a, b) = random_pair(50, 3);
    let modes = solve(&a, &b);
    let norm = |m: &DMatrix<f64>| m.norm();
    for (i, &lambda) in modes.lambdas.iter().enumerate() {
        let v: DVector<f64> = modes.vectors.column(i).into_owned();
        let r = (&a * &v - &b * &v * lambda).norm();
        assert!(
            r <= DEFAULT_TOL * (norm(&a) + lambda.abs() * norm(&b)) * v.norm(),
            "pair {i}: {r:e}"
        );
    }

    // independent path: library Cholesky and symmetric eigensolver
    let l = b.clone().cholesky().unwrap().l();
    let li = l.clone().try_inverse().unwrap();
    let c = &li * &a * li.transpose();
    let mut reference: Vec<f64> = c.symmetric_eigen().eigenvalues.iter().copied().collect();
    reference.sort_by(f64::total_cmp);
    for (got, want) in modes.lambdas.iter().zip(&reference) {
        assert!((got - want).abs() <= 1e-10 * (1.0 + want.abs()), "{got} vs {want}");
    }
}

#[test]
fn determinant_changes_sign_across_smallest_eigenvalues() {
    let (a, b) = random_pair(50, 5);
    let modes = solve(&a, &b);
    let det = |mu: f64| (&a - &b * mu).lu().determinant();
    for i in 0..3 {
        let gap = (modes.lambdas[i + 1] - modes.lambdas[i]).min(if i == 0 {
            f64::INFINITY
        } else {
            modes.lambdas[i] - modes.lambdas[i - 1]
        });
        let d = 0.25 * gap;
        let (lo, hi) = (det(modes.lambdas[i] - d), det(modes.lambdas[i] + d));
        assert!(lo.signum() != hi.signum(), "eigenvalue {i}: det {lo:e} / {hi:e}");
    }
}

#[test]
fn b_orthonormal_vectors() {
    let (a, b) = random_pair(30, 9);
    let modes = solve(&a, &b);
    let g = modes.vectors.transpose() * &b * &modes.vectors;
    assert!((g - DMatrix::identity(30, 30)).amax() < 1e-10);
}

#[test]
fn indefinite_mass_is_rejected() {
    let (a, mut b) = random_pair(8, 1);
    b[(3, 3)] = -50.0;
    assert!(cholesky(&b).is_err());
    assert!(solve_gen_sym(&GeneralizedEigenProblem::new(a, b).unwrap(), DEFAULT_TOL).is_err());
}

fn rel_close(x: &[f64], y: &[f64], tol: f64) -> bool {
    let scale = x.iter().chain(y).fold(1.0f64, |m, v| m.max(v.abs()));
    x.iter().zip(y).all(|(p, q)| (p - q).abs() <= tol * scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn permutation_invariance(seed in any::<u64>(), n in 2usize..20, shuffle in any::<u64>()) {
        let (a, b) = random_pair(n, seed);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(shuffle);
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let pa = DMatrix::from_fn(n, n, |i, j| a[(perm[i], perm[j])]);
        let pb = DMatrix::from_fn(n, n, |i, j| b[(perm[i], perm[j])]);
        prop_assert!(rel_close(&solve(&a, &b).lambdas, &solve(&pa, &pb).lambdas, 1e-10));
    }

    #[test]
    fn spectrum_scales_with_stiffness(seed in any::<u64>(), n in 1usize..20, c in 0.01f64..100.0) {
        let (a, b) = random_pair(n, seed);
        let base: Vec<f64> = solve(&a, &b).lambdas.iter().map(|l| l * c).collect();
        prop_assert!(rel_close(&base, &solve(&(&a * c), &b).lambdas, 1e-12));
    }

    #[test]
    fn residuals_within_tolerance(seed in any::<u64>(), n in 1usize..25) {
        let (a, b) = random_pair(n, seed);
        let m = solve(&a, &b);
        prop_assert!(m.max_residual() <= DEFAULT_TOL);
        prop_assert!(m.lambdas.windows(2).all(|w| w[0] <= w[1]));
    }
}
