//! The chain variables around an interior index `k` and the coefficients
//! of the conditional law of `S_k` they determine.

use rand::Rng;

use crate::chain::{run_chain, BlockTridiagonal, ChainState};
use crate::density::AlphaCoefficients;
use crate::error::{BandError, Result};
use crate::linalg::SymMatrix;

/// Mid-chain index: the largest even `k <= N/2`.
pub fn mid_index(n: usize) -> Result<usize> {
    if n < 4 {
        return Err(BandError::Config(format!(
            "mid-chain index needs N >= 4, got {n}"
        )));
    }
    Ok((n / 2) & !1)
}

/// Everything the conditional law of `S_k` depends on.
#[derive(Clone, Debug)]
pub struct Conditional {
    /// One-based index.
    pub k: usize,
    pub alpha: AlphaCoefficients,
    pub d_k: SymMatrix,
    pub d_next: SymMatrix,
    /// `B_{k−1}ᵀ D_{k−1}⁻¹ B_{k−1}`.
    pub prev_coupling: SymMatrix,
    /// `B_kᵀ D_k⁻¹ B_k`.
    pub coupling: SymMatrix,
    /// `A_{k+1,k+1}`.
    pub a_next: SymMatrix,
}

/// Conditional data at one-based `k`, `1 < k < N`, from the states of
/// [`run_chain`].
pub fn conditional_at(
    a: &BlockTridiagonal,
    states: &[ChainState],
    k: usize,
    lambda: f64,
) -> Result<Conditional> {
    if k < 2 || k >= a.n() || states.len() < k + 1 {
        return Err(BandError::Domain(format!(
            "need 1 < k < N with states through k+1; k={k}, N={}",
            a.n()
        )));
    }
    let (here, next) = (&states[k - 1], &states[k]);
    let alpha = AlphaCoefficients::from_couplings(
        a.diag(k - 1),
        a.diag(k),
        &here.coupling,
        &next.coupling,
        here.s,
        lambda,
    )?;
    Ok(Conditional {
        k,
        alpha,
        d_k: here.d.clone(),
        d_next: next.d.clone(),
        prev_coupling: here.coupling.clone(),
        coupling: next.coupling.clone(),
        a_next: a.diag(k).clone(),
    })
}

/// Samples the `k + 1` blocks the conditional law at `k` depends on and
/// runs the chain over them.
pub fn sample_conditional<R: Rng + ?Sized>(
    m: usize,
    k: usize,
    lambda: f64,
    rng: &mut R,
) -> Result<Conditional> {
    let a = BlockTridiagonal::sample(k + 1, m, rng)?;
    let states = run_chain(&a, lambda)?;
    conditional_at(&a, &states, k, lambda)
}
