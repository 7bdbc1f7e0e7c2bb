//! The Schur-complement transfer recursion and the corner block of the
//! resolvent.
//!
//! With `B_k = −A_{k,k+1}`, block Gaussian elimination of `A − λ` gives
//!
//! ```text
//! D_1     = A_{1,1} − λ
//! D_{k+1} = A_{k+1,k+1} − λ − B_kᵀ D_k⁻¹ B_k
//! ((A − λ)⁻¹)_{1,N} = D_1⁻¹ B_1 D_2⁻¹ B_2 ⋯ D_{N−1}⁻¹ B_{N−1} D_N⁻¹
//! ```
//!
//! The product decays exponentially in `N`, so it is carried as a matrix of
//! unit operator norm plus an accumulated log-scale.

use rand::Rng;

use crate::error::{BandError, Result};
use crate::linalg::{sample_gaussian_block, sample_goe_block, sym_inverse, Lu, Matrix, SymMatrix};

/// Largest flattened dimension accepted by the dense oracle.
pub const DENSE_ORACLE_LIMIT: usize = 2048;

/// Symmetric block-tridiagonal matrix with `N` diagonal blocks `A_{k,k}`
/// and `N − 1` superdiagonal blocks `A_{k,k+1}`, all `M×M`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockTridiagonal {
    m: usize,
    diag: Vec<SymMatrix>,
    offdiag: Vec<Matrix>,
}

impl BlockTridiagonal {
    pub fn new(diag: Vec<SymMatrix>, offdiag: Vec<Matrix>) -> Result<Self> {
        let m = diag
            .first()
            .map(SymMatrix::dim)
            .ok_or_else(|| BandError::Dimension("need at least one diagonal block".into()))?;
        if offdiag.len() + 1 != diag.len() {
            return Err(BandError::Dimension(format!(
                "{} diagonal blocks need {} off-diagonal blocks, got {}",
                diag.len(),
                diag.len() - 1,
                offdiag.len()
            )));
        }
        if diag.iter().any(|d| d.dim() != m)
            || offdiag.iter().any(|b| b.rows() != m || b.cols() != m)
        {
            return Err(BandError::Dimension(format!("all blocks must be {m}x{m}")));
        }
        Ok(Self { m, diag, offdiag })
    }

    /// Samples the Gaussian block model. Blocks are drawn in chain order
    /// `A_{1,1}, A_{1,2}, A_{2,2}, A_{2,3}, …`, so for a fixed stream the
    /// `N`-block sample is a leading section of any longer one.
    pub fn sample<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(BandError::Dimension(format!(
                "need N, M >= 1, got N={n}, M={m}"
            )));
        }
        let mut diag = Vec::with_capacity(n);
        let mut offdiag = Vec::with_capacity(n - 1);
        diag.push(sample_goe_block(m, rng));
        for _ in 1..n {
            offdiag.push(sample_gaussian_block(m, rng));
            diag.push(sample_goe_block(m, rng));
        }
        Ok(Self { m, diag, offdiag })
    }

    /// Number of diagonal blocks `N`.
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Block size `M`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `A_{k,k}`, zero-based.
    pub fn diag(&self, k: usize) -> &SymMatrix {
        &self.diag[k]
    }

    /// `A_{k,k+1}`, zero-based.
    pub fn offdiag(&self, k: usize) -> &Matrix {
        &self.offdiag[k]
    }

    pub fn diag_blocks(&self) -> &[SymMatrix] {
        &self.diag
    }

    pub fn offdiag_blocks(&self) -> &[Matrix] {
        &self.offdiag
    }

    /// The `NM×NM` symmetric matrix.
    pub fn flatten(&self) -> SymMatrix {
        let (n, m) = (self.n(), self.m);
        let mut out = Matrix::zeros(n * m, n * m);
        for (k, d) in self.diag.iter().enumerate() {
            out.set_block(k * m, k * m, d.as_matrix());
        }
        for (k, b) in self.offdiag.iter().enumerate() {
            out.set_block(k * m, (k + 1) * m, b);
            out.set_block((k + 1) * m, k * m, &b.transpose());
        }
        SymMatrix::try_from_matrix(out).expect("block assembly is symmetric")
    }
}

/// State of the recursion after processing block `k`.
#[derive(Clone, Debug)]
pub struct ChainState {
    /// One-based block index.
    pub k: usize,
    /// `D_k`.
    pub d: SymMatrix,
    pub d_inv: SymMatrix,
    /// `S_k = ‖D_k‖`.
    pub s: f64,
    /// `D_k / S_k`.
    pub d_bar: SymMatrix,
    /// `B_{k−1}ᵀ D_{k−1}⁻¹ B_{k−1}`; zero at `k = 1`.
    pub coupling: SymMatrix,
    /// `D_1⁻¹ B_1 ⋯ D_k⁻¹` divided by its operator norm.
    pub scaled_product: Matrix,
    /// Log of the operator norm of the unscaled product.
    pub log_norm: f64,
}

impl ChainState {
    fn from_d(k: usize, d: SymMatrix, coupling: SymMatrix) -> Result<Self> {
        let d_inv = sym_inverse(&d)?;
        let s = d.operator_norm();
        let d_bar = d.scaled(1.0 / s);
        Ok(Self {
            k,
            d,
            d_inv,
            s,
            d_bar,
            coupling,
            scaled_product: Matrix::zeros(1, 1),
            log_norm: 0.0,
        })
    }

    pub fn summary(&self) -> StepSummary {
        StepSummary {
            k: self.k,
            s: self.s,
            log_norm: self.log_norm,
            d_frobenius: self.d.frobenius_norm(),
            coupling_frobenius: self.coupling.frobenius_norm(),
        }
    }
}

/// Per-step record kept by [`corner_log_norm`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepSummary {
    pub k: usize,
    pub s: f64,
    pub log_norm: f64,
    pub d_frobenius: f64,
    pub coupling_frobenius: f64,
}

pub fn chain_init(a11: &SymMatrix, lambda: f64) -> Result<ChainState> {
    if !lambda.is_finite() {
        return Err(BandError::Domain(format!(
            "lambda must be finite, got {lambda}"
        )));
    }
    let m = a11.dim();
    let mut state = ChainState::from_d(1, a11.shifted(lambda), SymMatrix::zeros(m))?;
    let norm = state.d_inv.operator_norm();
    state.scaled_product = state.d_inv.as_matrix().scaled(1.0 / norm);
    state.log_norm = norm.ln();
    Ok(state)
}

pub fn chain_step(
    state: &ChainState,
    a_next: &SymMatrix,
    a_off: &Matrix,
    lambda: f64,
) -> Result<ChainState> {
    let b = a_off.scaled(-1.0);
    let coupling = state.d_inv.congruence(&b);
    let d_next = a_next.shifted(lambda).sub(&coupling);
    let mut next = ChainState::from_d(state.k + 1, d_next, coupling)?;
    let raw = state
        .scaled_product
        .matmul(&b)
        .matmul(next.d_inv.as_matrix());
    let norm = raw.operator_norm();
    next.scaled_product = raw.scaled(1.0 / norm);
    next.log_norm = state.log_norm + norm.ln();
    Ok(next)
}

/// Runs the recursion over all blocks and returns every state.
pub fn run_chain(a: &BlockTridiagonal, lambda: f64) -> Result<Vec<ChainState>> {
    let mut states = Vec::with_capacity(a.n());
    let mut state = chain_init(a.diag(0), lambda)?;
    for k in 1..a.n() {
        let next = chain_step(&state, a.diag(k), a.offdiag(k - 1), lambda)?;
        states.push(std::mem::replace(&mut state, next));
    }
    states.push(state);
    Ok(states)
}

#[derive(Clone, Debug)]
pub struct CornerLogNorm {
    /// `log ‖((A − λ)⁻¹)_{1,N}‖`.
    pub log_norm: f64,
    pub trace: Vec<StepSummary>,
    /// Full states, only when requested.
    pub states: Option<Vec<ChainState>>,
}

/// Log operator norm of the corner block through the running renormalized
/// product.
pub fn corner_log_norm(a: &BlockTridiagonal, lambda: f64, verbose: bool) -> Result<CornerLogNorm> {
    let mut state = chain_init(a.diag(0), lambda)?;
    let mut trace = vec![state.summary()];
    let mut states = verbose.then(Vec::new);
    for k in 1..a.n() {
        let next = chain_step(&state, a.diag(k), a.offdiag(k - 1), lambda)?;
        trace.push(next.summary());
        let prev = std::mem::replace(&mut state, next);
        if let Some(s) = states.as_mut() {
            s.push(prev);
        }
    }
    let log_norm = state.log_norm;
    if let Some(s) = states.as_mut() {
        s.push(state);
    }
    Ok(CornerLogNorm {
        log_norm,
        trace,
        states,
    })
}

/// The `(1, N)` block of `(A − λ)⁻¹` from a dense LU of the flattened matrix.
pub fn corner_direct(a: &BlockTridiagonal, lambda: f64) -> Result<Matrix> {
    let (n, m) = (a.n(), a.m());
    if n * m > DENSE_ORACLE_LIMIT {
        return Err(BandError::Dimension(format!(
            "dense oracle limited to NM <= {DENSE_ORACLE_LIMIT}, got {}",
            n * m
        )));
    }
    let shifted = a.flatten().shifted(lambda);
    let lu = Lu::factor(shifted.as_matrix())?;
    let rhs = Matrix::from_fn(
        n * m,
        m,
        |i, j| if i == (n - 1) * m + j { 1.0 } else { 0.0 },
    );
    Ok(lu.solve_matrix(&rhs).block(0, 0, m, m))
}
