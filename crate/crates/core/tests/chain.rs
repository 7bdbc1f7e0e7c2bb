use bandlab::chain::*;
use bandlab::linalg::{dense_inverse, Matrix, SymMatrix};
use bandlab::rng::rng_from_seed;
use bandlab::stats::{ks_critical_1pct, ks_statistic};
use statrs::function::erf::erf;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

#[test]
fn corner_matches_dense_oracle_grid() {
    for n in 2..=8 {
        for m in [1usize, 2, 4, 8] {
            for seed in 0..20 {
                let a = BlockTridiagonal::sample(n, m, &mut rng_from_seed(seed)).unwrap();
                let chain = corner_log_norm(&a, 0.3, false).unwrap().log_norm;
                let direct = corner_direct(&a, 0.3).unwrap().operator_norm().ln();
                assert!(
                    rel(chain, direct) <= 1e-8,
                    "N={n} M={m} seed={seed}: {chain} vs {direct}"
                );
            }
        }
    }
}

#[test]
fn corner_n4_m3_both_paths() {
    for seed in 0..100 {
        let a = BlockTridiagonal::sample(4, 3, &mut rng_from_seed(1000 + seed)).unwrap();
        let chain = corner_log_norm(&a, 0.0, false).unwrap().log_norm;
        let direct = corner_direct(&a, 0.0).unwrap().operator_norm().ln();
        assert!(rel(chain, direct) <= 1e-8);
    }
}

#[test]
fn second_schur_complement_matches_dense() {
    let a = BlockTridiagonal::sample(2, 3, &mut rng_from_seed(21)).unwrap();
    let lambda = 0.1;
    let states = run_chain(&a, lambda).unwrap();
    // the (2,2) block of (A − λ)⁻¹ is D₂⁻¹
    let full_inv = dense_inverse(a.flatten().shifted(lambda).as_matrix()).unwrap();
    let block = full_inv.block(3, 3, 3, 3);
    let d2 = dense_inverse(&block).unwrap();
    assert!(d2.sub(states[1].d.as_matrix()).max_abs() <= 1e-8);
}

#[test]
fn direct_corner_inverts() {
    let a = BlockTridiagonal::sample(3, 2, &mut rng_from_seed(22)).unwrap();
    let shifted = a.flatten().shifted(0.2);
    let inv = dense_inverse(shifted.as_matrix()).unwrap();
    let residual = shifted
        .as_matrix()
        .matmul(&inv)
        .sub(&Matrix::identity(6))
        .max_abs();
    assert!(residual <= 1e-9);
    let corner = corner_direct(&a, 0.2).unwrap();
    assert!(corner.sub(&inv.block(0, 4, 2, 2)).max_abs() <= 1e-12);
}

#[test]
fn single_block_corner_is_inverse() {
    let a = BlockTridiagonal::sample(1, 4, &mut rng_from_seed(23)).unwrap();
    let direct = corner_direct(&a, 0.0).unwrap();
    let expected = dense_inverse(a.diag(0).as_matrix()).unwrap();
    assert!(direct.sub(&expected).max_abs() <= 1e-10 * expected.max_abs());
    let ln = corner_log_norm(&a, 0.0, false).unwrap().log_norm;
    assert!((ln - expected.operator_norm().ln()).abs() <= 1e-10);
}

#[test]
fn state_invariants_and_determinism() {
    let a = BlockTridiagonal::sample(30, 5, &mut rng_from_seed(24)).unwrap();
    let states = run_chain(&a, -0.4).unwrap();
    for st in &states {
        assert!(st.s > 0.0);
        assert!((st.d_bar.operator_norm() - 1.0).abs() <= 1e-10);
        assert!(
            st.d_bar
                .scaled(st.s)
                .as_matrix()
                .sub(st.d.as_matrix())
                .max_abs()
                <= 1e-10 * st.s
        );
        assert!((st.scaled_product.operator_norm() - 1.0).abs() <= 1e-10);
        assert!(st.log_norm.is_finite());
    }
    let again = corner_log_norm(&a, -0.4, false).unwrap();
    assert_eq!(
        again.log_norm.to_bits(),
        states.last().unwrap().log_norm.to_bits()
    );
    assert_eq!(again.trace.len(), 30);
    let verbose = corner_log_norm(&a, -0.4, true).unwrap();
    assert_eq!(verbose.states.unwrap().len(), 30);
}

#[test]
fn zero_coupling_step() {
    let a_next = SymMatrix::diag(&[1.0, 2.0]);
    let st = chain_init(&SymMatrix::diag(&[3.0, -1.0]), 0.5).unwrap();
    let next = chain_step(&st, &a_next, &Matrix::zeros(2, 2), 0.5).unwrap();
    assert_eq!(next.d, a_next.shifted(0.5));
}

#[test]
fn sampled_flattening_is_symmetric() {
    let a = BlockTridiagonal::sample(5, 3, &mut rng_from_seed(25)).unwrap();
    let f = a.flatten();
    for i in 0..15 {
        for j in 0..15 {
            assert_eq!(f.get(i, j), f.get(j, i));
        }
    }
}

#[test]
fn oracle_rejects_large_instances() {
    let small = BlockTridiagonal::new(
        vec![SymMatrix::identity(1); DENSE_ORACLE_LIMIT + 1],
        vec![Matrix::zeros(1, 1); DENSE_ORACLE_LIMIT],
    )
    .unwrap();
    assert!(corner_direct(&small, 0.5).is_err());
}

#[test]
fn s1_is_half_normal_with_variance_two() {
    // M = 1: A₁₁ ~ N(0, 2), S₁ = |A₁₁|
    let mut rng = rng_from_seed(27);
    let s1: Vec<f64> = (0..10_000)
        .map(|_| {
            chain_init(
                BlockTridiagonal::sample(1, 1, &mut rng).unwrap().diag(0),
                0.0,
            )
            .unwrap()
            .s
        })
        .collect();
    let d = ks_statistic(&s1, |x| erf(x / 2.0));
    assert!(d < ks_critical_1pct(s1.len()), "KS {d}");
}
