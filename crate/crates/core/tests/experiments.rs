use bandlab::experiments::*;
use bandlab::rng::rng_from_seed;
use bandlab::stats::{fit_exponent, summarize};
use bandlab::BandError;
use rand::Rng;
use rand_distr::{Distribution, Normal};

fn cfg(kind: ExperimentKind, replicas: u64) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(kind, replicas);
    c.master_seed = 77;
    c
}

#[test]
fn mid_index_examples() {
    assert_eq!(mid_index(4).unwrap(), 2);
    assert_eq!(mid_index(8).unwrap(), 4);
    assert_eq!(mid_index(13).unwrap(), 6);
    assert!(mid_index(3).is_err());
    assert_eq!(even_interior(4), vec![2]);
    assert_eq!(even_interior(9), vec![2, 4, 6, 8]);
}

#[test]
fn records_identical_across_worker_counts() {
    for kind in [
        ExperimentKind::Fluctuations,
        ExperimentKind::Decay,
        ExperimentKind::Lemma21,
    ] {
        let mut c = cfg(kind, 12);
        c.m_list = vec![2, 4];
        if kind == ExperimentKind::Decay {
            c.n_list = vec![5, 10, 15];
        }
        let one = run_experiment(&c, 1).unwrap();
        let three = run_experiment(&c, 3).unwrap();
        assert_eq!(one, three, "{kind:?}");
    }
}

#[test]
fn replica_seeds_differ_between_cells() {
    let mut c = cfg(ExperimentKind::Sample, 4);
    c.m_list = vec![2, 3];
    let out = run_experiment(&c, 1).unwrap();
    let mut seeds: Vec<u64> = out.records.iter().map(|r| r.seed.unwrap()).collect();
    seeds.sort_unstable();
    seeds.dedup();
    assert_eq!(seeds.len(), 8);
}

#[test]
fn dot_product_ratio_near_one() {
    let mut c = cfg(ExperimentKind::Lemma21, 4000);
    c.m_list = vec![8];
    let out = run_experiment(&c, 0).unwrap();
    for h in ["identity", "goe", "rank1"] {
        let mean = out.summary_stat(8, 1, &format!("dot_{h}_mean")).unwrap();
        let se = out.summary_stat(8, 1, &format!("dot_{h}_se")).unwrap();
        assert!((mean - 1.0).abs() <= 3.0 * se, "{h}: {mean} ± {se}");
    }
}

#[test]
fn conjugated_small_values_rare_at_m32() {
    let mut c = cfg(ExperimentKind::Lemma21, 300);
    c.m_list = vec![32];
    let out = run_experiment(&c, 0).unwrap();
    assert!(
        out.summary_stat(32, 1, "conjugated_small_identity")
            .unwrap()
            < 0.01
    );
}

#[test]
fn lemma22_events_monotone_in_epsilon() {
    let mut c = cfg(ExperimentKind::Lemma22, 200);
    c.m_list = vec![16];
    let out = run_experiment(&c, 0).unwrap();
    let quantities: Vec<SizeQuantities> = out
        .records
        .iter()
        .filter_map(SizeQuantities::from_record)
        .collect();
    assert_eq!(quantities.len(), 200);
    let freq = |eps: f64, i: usize| quantities.iter().filter(|q| q.events(16, eps)[i]).count();
    for (i, name) in EVENT_NAMES.iter().enumerate() {
        let mut last = 0;
        for eps in [0.05, 0.25, 0.5, 0.75, 0.99] {
            let f = freq(eps, i);
            assert!(f >= last, "{name} at eps={eps}");
            last = f;
        }
    }
}

#[test]
fn fluctuations_positive_and_ordered() {
    let mut c = cfg(ExperimentKind::Fluctuations, 60);
    c.m_list = vec![4, 8, 16];
    let out = run_experiment(&c, 0).unwrap();
    assert!(out.records.iter().all(|r| r.stat("var_log").unwrap() > 0.0));
    let mean = |m| out.summary_stat(m, 8, "var_log_mean").unwrap();
    assert!(mean(4) > mean(8) && mean(8) > mean(16));
}

#[test]
fn exact_power_law_slope() {
    let pts: Vec<(f64, f64)> = [8.0, 16.0, 32.0, 64.0]
        .iter()
        .map(|&m: &f64| (m, m.powi(-3)))
        .collect();
    assert!((fit_exponent(&pts).unwrap().slope + 3.0).abs() <= 1e-12);
}

#[test]
fn fitter_calibration() {
    // noisy slope −3: the 3σ band covers the truth in at least 95% of trials
    let mut rng = rng_from_seed(300);
    let noise = Normal::new(0.0, 0.1).unwrap();
    let trials = 400;
    let covered = (0..trials)
        .filter(|_| {
            let pts: Vec<(f64, f64)> = (1..=10)
                .map(|i| {
                    let x = i as f64;
                    (x, 2.0 - 3.0 * x + noise.sample(&mut rng))
                })
                .collect();
            let f = bandlab::stats::fit_line(&pts).unwrap();
            (f.slope + 3.0).abs() <= 3.0 * f.stderr
        })
        .count();
    assert!(covered as f64 >= 0.95 * trials as f64, "{covered}");
}

fn synthetic_cells(replicas: usize, seed: u64) -> Vec<(usize, Vec<f64>)> {
    let mut rng = rng_from_seed(seed);
    [8usize, 16, 32, 64]
        .iter()
        .map(|&m| {
            let xs = (0..replicas)
                .map(|_| (m as f64).powi(-3) * (rng.random::<f64>() * 2.0).exp())
                .collect();
            (m, xs)
        })
        .collect()
}

#[test]
fn bootstrap_band_shrinks_on_doubling() {
    let widths = |replicas: usize| -> f64 {
        (0..8)
            .map(|s| {
                let band = bootstrap_slope(
                    &synthetic_cells(replicas, 400 + s),
                    1000,
                    &mut rng_from_seed(s),
                )
                .unwrap();
                band.hi - band.lo
            })
            .sum::<f64>()
    };
    let ratio = widths(800) / widths(400);
    assert!(
        (ratio - std::f64::consts::FRAC_1_SQRT_2).abs() <= 0.1,
        "{ratio}"
    );
}

#[test]
fn standard_errors_shrink_on_doubling() {
    let se = |replicas| {
        let mut c = cfg(ExperimentKind::Sample, replicas);
        c.m_list = vec![4];
        run_experiment(&c, 0)
            .unwrap()
            .summary_stat(4, 4, "a11_frobenius_sq_se")
            .unwrap()
    };
    let ratio = se(4000) / se(2000);
    assert!(
        (ratio - std::f64::consts::FRAC_1_SQRT_2).abs() <= 0.1,
        "{ratio}"
    );
}

#[test]
fn conjecture_scan_reports_band() {
    let mut c = cfg(ExperimentKind::ConjectureScan, 40);
    c.m_list = vec![4, 8, 16];
    c.bootstrap_resamples = 200;
    let out = run_experiment(&c, 0).unwrap();
    let slope = out.summary_stat(0, 8, "slope").unwrap();
    let (lo, hi) = (
        out.summary_stat(0, 8, "ci_lo").unwrap(),
        out.summary_stat(0, 8, "ci_hi").unwrap(),
    );
    assert!(lo < hi && slope < 0.0);
}

#[test]
fn decay_rate_positive_with_cross_check() {
    let mut c = cfg(ExperimentKind::Decay, 50);
    c.m_list = vec![2];
    c.n_list = vec![10, 20, 40];
    c.cross_check = true;
    let out = run_experiment(&c, 0).unwrap();
    assert!(out.summary_stat(2, 0, "decay_rate").unwrap() > 0.0);
    assert!(out.summary_stat(2, 0, "cross_check_max_rel_err").unwrap() <= 1e-8);
}

#[test]
fn decomposition_rhs_nonnegative_and_scaling() {
    let mut c = cfg(ExperimentKind::Decomposition, 300);
    c.m_list = vec![2];
    c.n_list = vec![6, 12];
    let out = run_experiment(&c, 0).unwrap();
    for n in [6, 12] {
        assert!(out.summary_stat(2, n, "rhs").unwrap() >= 0.0);
        assert_eq!(out.summary_stat(2, n, "holds"), Some(1.0));
    }
    let (a, b) = (
        out.summary_stat(2, 6, "rhs_over_n").unwrap(),
        out.summary_stat(2, 12, "rhs_over_n").unwrap(),
    );
    assert!(a / b > 0.5 && a / b < 2.0, "{a} {b}");
}

#[test]
fn persistent_flags_abort_the_run() {
    let runner = Runner::new(1).unwrap();
    let res = runner.run(1, 1, 4, 4, 100, |rng| {
        if rng.random::<f64>() < 0.5 {
            Err(BandError::NearSingular {
                pivot: 0.0,
                floor: 1e-12,
            })
        } else {
            Ok(())
        }
    });
    assert!(matches!(res, Err(BandError::ExclusionRate { m: 4, .. })));
    // M < 4 tolerates flags and reports them
    let (reps, excl) = runner
        .run(1, 1, 2, 4, 100, |rng| {
            if rng.random::<f64>() < 0.5 {
                Err(BandError::NearSingular {
                    pivot: 0.0,
                    floor: 1e-12,
                })
            } else {
                Ok(())
            }
        })
        .unwrap();
    assert!(excl.flagged > 0);
    assert_eq!(
        excl.flagged,
        reps.iter().filter(|r| r.flags > 0).count() as u64
    );
}

#[test]
fn selftest_passes() {
    let out = run_experiment(&cfg(ExperimentKind::Selftest, 1), 1).unwrap();
    assert!(out.selftest_passed(), "{:?}", out.summary);
}

#[test]
fn sample_summary_matches_expectation() {
    let mut c = cfg(ExperimentKind::Sample, 2000);
    c.m_list = vec![6];
    let out = run_experiment(&c, 0).unwrap();
    let xs = out.replica_values(6, 4, "a12_frobenius_sq");
    let s = summarize(&xs);
    assert!((s.mean - 6.0).abs() <= 3.0 * s.stderr);
}
