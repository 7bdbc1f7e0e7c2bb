use bandlab::linalg::*;
use bandlab::rng::rng_from_seed;
use bandlab::stats::summarize;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn to_na(h: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(h.rows(), h.cols(), |i, j| h.get(i, j))
}

fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = rng_from_seed(seed);
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

fn sym_eigenvalues(h: &SymMatrix) -> Vec<f64> {
    to_na(h.as_matrix())
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect()
}

#[test]
fn operator_norm_matches_eigen_oracle() {
    for seed in 0..50 {
        let h = random_matrix(8, 8, seed);
        let hth = to_na(&h).transpose() * to_na(&h);
        let top = hth.symmetric_eigen().eigenvalues.max().sqrt();
        assert!((h.operator_norm() - top).abs() <= 1e-8 * top, "seed {seed}");
    }
}

#[test]
fn operator_norm_of_symmetric_is_spectral_radius() {
    let mut rng = rng_from_seed(3);
    for m in [2, 5, 16, 40] {
        let g = sample_goe_block(m, &mut rng);
        let radius = sym_eigenvalues(&g)
            .iter()
            .fold(0.0f64, |a, &x| a.max(x.abs()));
        assert!((g.operator_norm() - radius).abs() <= 1e-10 * radius);
    }
}

#[test]
fn norm_sandwich() {
    let mut rng = rng_from_seed(4);
    for m in 1..20 {
        let e = sample_gaussian_block(m, &mut rng);
        let (op, fro) = (e.operator_norm(), frobenius_norm(&e));
        assert!(op <= fro * (1.0 + 1e-12));
        assert!(fro <= (m as f64).sqrt() * op * (1.0 + 1e-12));
        let tp = trace_product(e.transpose(), &e);
        assert!((fro - tp.sqrt()).abs() <= 1e-12 * fro);
    }
}

#[test]
fn trace_product_elementwise() {
    let (g, h) = (random_matrix(6, 6, 10), random_matrix(6, 6, 11));
    let direct: f64 = (0..6)
        .flat_map(|i| (0..6).map(move |j| (i, j)))
        .map(|(i, j)| g.get(i, j) * h.get(j, i))
        .sum();
    assert!((trace_product(&g, &h) - direct).abs() < 1e-12);
    assert_eq!(trace_product(Matrix::identity(4), Matrix::identity(4)), 4.0);
}

#[test]
fn frobenius_orthogonal_invariance() {
    let mut rng = rng_from_seed(5);
    let g = sample_goe_block(12, &mut rng);
    let q = to_na(&random_matrix(12, 12, 6)).qr().q();
    let rotated = &q * to_na(g.as_matrix()) * q.transpose();
    assert!((rotated.norm() - g.frobenius_norm()).abs() < 1e-12 * g.frobenius_norm());
}

#[test]
fn goe_blocks_symmetric_with_expected_variances() {
    let mut rng = rng_from_seed(7);
    let m = 4;
    let (mut diag, mut off) = (Vec::new(), Vec::new());
    for _ in 0..100_000 / m {
        let g = sample_goe_block(m, &mut rng);
        for i in 0..m {
            for j in 0..m {
                assert_eq!(g.get(i, j), g.get(j, i));
            }
            diag.push(g.get(i, i).powi(2));
            for j in (i + 1)..m {
                off.push(g.get(i, j).powi(2));
            }
        }
    }
    let (d, o) = (summarize(&diag), summarize(&off));
    assert!((d.mean - 2.0 / m as f64).abs() <= 3.0 * d.stderr, "{d:?}");
    assert!((o.mean - 1.0 / m as f64).abs() <= 3.0 * o.stderr, "{o:?}");
}

#[test]
fn gaussian_block_moments() {
    let mut rng = rng_from_seed(8);
    let frob: Vec<f64> = (0..10_000)
        .map(|_| sample_gaussian_block(4, &mut rng).frobenius_norm_sq())
        .collect();
    let s = summarize(&frob);
    assert!((s.mean - 4.0).abs() <= 3.0 * s.stderr, "{s:?}");
    let entries: Vec<f64> = (0..2_000)
        .flat_map(|_| sample_gaussian_block(4, &mut rng).as_slice().to_vec())
        .collect();
    let e = summarize(&entries);
    assert!(e.mean.abs() <= 3.0 * e.stderr);
}

#[test]
fn goe_frobenius_mean_is_m_plus_one() {
    let mut rng = rng_from_seed(9);
    let xs: Vec<f64> = (0..10_000)
        .map(|_| sample_goe_block(16, &mut rng).frobenius_norm_sq())
        .collect();
    let s = summarize(&xs);
    assert!((s.mean - 17.0).abs() <= 3.0 * s.stderr, "{s:?}");
}

#[test]
fn dot_product_identity_for_identity_h() {
    let mut rng = rng_from_seed(10);
    let xs: Vec<f64> = (0..10_000)
        .map(|_| sample_goe_block(4, &mut rng).trace().powi(2))
        .collect();
    let s = summarize(&xs);
    assert!((s.mean - 2.0).abs() <= 3.0 * s.stderr, "{s:?}");
}

#[test]
fn wegner_count_near_semicircle() {
    let mut rng = rng_from_seed(11);
    let interval = Interval::new(-0.2, 0.2).unwrap();
    let counts: Vec<f64> = (0..400)
        .map(|_| eigen_count_in_interval(&sample_goe_block(64, &mut rng), interval).unwrap() as f64)
        .collect();
    let expected = 64.0 * 0.4 / std::f64::consts::PI;
    let mean = summarize(&counts).mean;
    assert!(
        (mean - expected).abs() <= 0.1 * expected,
        "{mean} vs {expected}"
    );
}

#[test]
fn eigen_count_matches_eigendecomposition() {
    let mut rng = rng_from_seed(12);
    for _ in 0..50 {
        let m = rng.random_range(1..20);
        let h = sample_goe_block(m, &mut rng);
        let lo = rng.random_range(-2.0..1.0);
        let hi = lo + rng.random_range(0.0..2.0);
        let eig = sym_eigenvalues(&h);
        let expected = eig.iter().filter(|&&x| lo <= x && x <= hi).count();
        assert_eq!(
            eigen_count_in_interval(&h, Interval::new(lo, hi).unwrap()).unwrap(),
            expected
        );
        // partition of the spectrum
        let top = h.operator_norm() + 1.0;
        // no eigenvalue sits exactly on `hi` for continuous draws
        let above = if hi < top {
            eigen_count_in_interval(&h, Interval::new(hi, top).unwrap()).unwrap()
        } else {
            0
        };
        assert_eq!(expected + above + count_below(&h, lo).unwrap(), m);
    }
}

#[test]
fn operator_tail_at_m32() {
    let mut rng = rng_from_seed(13);
    let hits = (0..10_000)
        .filter(|_| sample_gaussian_block(32, &mut rng).operator_norm() >= 3.0)
        .count();
    assert!((hits as f64) / 1e4 <= 0.01, "{hits}");
}

#[test]
fn inverse_residual_and_involution() {
    let mut rng = rng_from_seed(14);
    for m in [1, 3, 8, 32] {
        let h = sample_goe_block(m, &mut rng).shifted(-3.0);
        let inv = sym_inverse(&h).unwrap();
        let residual = h
            .as_matrix()
            .matmul(inv.as_matrix())
            .sub(&Matrix::identity(m))
            .operator_norm();
        assert!(residual <= 1e-10);
        let back = sym_inverse(&inv).unwrap();
        assert!(back.as_matrix().sub(h.as_matrix()).max_abs() <= 1e-8 * h.as_matrix().max_abs());
        for i in 0..m {
            for j in 0..m {
                assert_eq!(inv.get(i, j), inv.get(j, i));
            }
        }
    }
}

proptest! {
    #[test]
    fn inertia_matches_eigenvalue_signs(values in prop::collection::vec(-5.0f64..5.0, 1..10), seed in 0u64..1000) {
        let m = values.len();
        // H = Q diag(values) Qᵀ with a random orthogonal Q
        let q = to_na(&random_matrix(m, m, seed)).qr().q();
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(values.clone()));
        let full = &q * d * q.transpose();
        let h = SymMatrix::symmetrize(&Matrix::from_fn(m, m, |i, j| full[(i, j)]));
        prop_assume!(values.iter().all(|v| v.abs() > 1e-3));
        let inertia = Ldlt::factor(&h).unwrap().inertia();
        prop_assert_eq!(inertia.negative, values.iter().filter(|&&v| v < 0.0).count());
        prop_assert_eq!(inertia.positive, values.iter().filter(|&&v| v > 0.0).count());
    }

    #[test]
    fn symmetric_inverse_residual(seed in 0u64..10_000, m in 1usize..24) {
        let mut rng = rng_from_seed(seed);
        let h = sample_goe_block(m, &mut rng);
        if let Ok(inv) = sym_inverse(&h) {
            let cond = h.operator_norm() * inv.operator_norm();
            prop_assume!(cond < 1e6);
            let residual = h.as_matrix().matmul(inv.as_matrix()).sub(&Matrix::identity(m)).operator_norm();
            prop_assert!(residual <= 1e-10 * cond.max(1.0), "residual {} cond {}", residual, cond);
        }
    }
}
