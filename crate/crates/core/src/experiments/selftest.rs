//! Oracle and analytic checks of the numerical layers: trigamma, the chi
//! and generalized-gamma variances, the dense corner oracle, the
//! coefficient expansion against direct evaluation, and finite
//! differences of the derivatives.

use rand::Rng;

use crate::chain::{corner_direct, corner_log_norm, BlockTridiagonal};
use crate::density::{
    log_moments, norm_direction_selftest, phi, phi_direct, phi_double_prime, phi_prime,
    AlphaCoefficients,
};
use crate::error::Result;
use crate::rng::{mix, rng_from_seed};
use crate::special::trigamma;

use super::conditional::{sample_conditional, Conditional};
use super::config::ExperimentConfig;
use super::record::{ExperimentOutput, ResultRecord};

/// Relative step of the central differences.
pub const FD_STEP: f64 = 1e-6;

/// `|a − b| / max(1, |b|)`.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// `(expansion, direct)` values of `φ_k(s S_k)` for one conditional state.
pub fn expansion_and_direct(c: &Conditional, s: f64, lambda: f64) -> Result<(f64, f64)> {
    let expansion = phi(s, &c.alpha)?;
    let direct = phi_direct(s, &c.d_k, &c.d_next, &c.prev_coupling, &c.coupling, lambda)?;
    Ok((expansion, direct))
}

/// Relative errors of the analytic first and second derivatives against
/// central differences of `φ` and `φ′` with step `FD_STEP · s`.
pub fn finite_difference_errors(alpha: &AlphaCoefficients, s: f64) -> Result<(f64, f64)> {
    let h = FD_STEP * s;
    let fd1 = (phi(s + h, alpha)? - phi(s - h, alpha)?) / (2.0 * h);
    let fd2 = (phi_prime(s + h, alpha)? - phi_prime(s - h, alpha)?) / (2.0 * h);
    Ok((
        rel_err(fd1, phi_prime(s, alpha)?),
        rel_err(fd2, phi_double_prime(s, alpha)?),
    ))
}

/// Log-uniform draw from `[lo, hi]`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp()
}

pub fn run_selftest(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let id = cfg.kind.id();
    let mut out = ExperimentOutput::new(id);
    let mut rec = ResultRecord::summary(id, 0, 0, 0);
    let mut passes = Vec::new();
    let mut check = |rec: &mut ResultRecord, name: &str, err: f64, tol: f64| {
        rec.push(format!("{name}_err"), err);
        rec.push_bool(format!("{name}_pass"), err <= tol);
        passes.push(err <= tol);
    };

    use std::f64::consts::PI;
    check(
        &mut rec,
        "trigamma_1",
        (trigamma(1.0) - PI * PI / 6.0).abs(),
        1e-13,
    );
    check(
        &mut rec,
        "trigamma_half",
        (trigamma(0.5) - PI * PI / 2.0).abs(),
        1e-13,
    );

    for n in [1usize, 2, 5] {
        let r = norm_direction_selftest(n)?;
        check(&mut rec, &format!("chi_n{n}"), r.abs_error, 1e-6);
        check(
            &mut rec,
            &format!("chi_n{n}_normalization"),
            (r.normalization - 1.0).abs(),
            1e-9,
        );
    }

    let gg = AlphaCoefficients::from_values([2.5, 0.0, 0.0, 0.0, 0.0, 0.0], 4, 1.0)?;
    check(
        &mut rec,
        "generalized_gamma",
        (log_moments(&gg)?.var_log - 0.25 * trigamma(5.0)).abs(),
        1e-6,
    );

    let mut rng = rng_from_seed(mix(cfg.master_seed, 0x5e1f_7e57));
    let mut corner_worst: f64 = 0.0;
    for n in 2..=5 {
        for m in [1usize, 2, 4] {
            for _ in 0..5 {
                let a = BlockTridiagonal::sample(n, m, &mut rng)?;
                let chain = corner_log_norm(&a, cfg.lambda, false)?.log_norm;
                let direct = corner_direct(&a, cfg.lambda)?.operator_norm().ln();
                corner_worst = corner_worst.max(rel_err(chain, direct));
            }
        }
    }
    check(&mut rec, "corner_oracle", corner_worst, 1e-8);

    let (mut expansion_worst, mut fd1_worst, mut fd2_worst): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for m in [4usize, 8] {
        for _ in 0..10 {
            let c = sample_conditional(m, 2, cfg.lambda, &mut rng)?;
            for _ in 0..5 {
                let s = log_uniform(&mut rng, 0.2, 5.0);
                let (e, d) = expansion_and_direct(&c, s, cfg.lambda)?;
                expansion_worst = expansion_worst.max((e - d).abs() / (1.0 + d.abs()));
                let (e1, e2) = finite_difference_errors(&c.alpha, s)?;
                fd1_worst = fd1_worst.max(e1);
                fd2_worst = fd2_worst.max(e2);
            }
        }
    }
    check(&mut rec, "expansion_vs_direct", expansion_worst, 1e-8);
    check(&mut rec, "fd_phi_prime", fd1_worst, 1e-5);
    check(&mut rec, "fd_phi_double_prime", fd2_worst, 1e-5);

    let all = passes.iter().all(|&p| p);
    rec.push_bool("all_pass", all);
    out.summary.push(rec);
    Ok(out)
}

impl ExperimentOutput {
    /// `all_pass` of a self-test output.
    pub fn selftest_passed(&self) -> bool {
        self.summary.iter().any(|r| r.stat("all_pass") == Some(1.0))
    }
}
