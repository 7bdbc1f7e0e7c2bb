//! Symmetric indefinite factorization `P H Pᵀ = L D Lᵀ` with Bunch–Kaufman
//! pivoting. `D` is block diagonal with 1×1 and 2×2 blocks, which gives
//! both the inverse and the inertia (Sylvester's law) of `H`.

use super::dense::{Interval, Matrix, SymMatrix};
use crate::error::{BandError, Result};

/// Relative pivot floor: pivots below `PIVOT_FLOOR · ‖H‖_F` are rejected.
pub const PIVOT_FLOOR: f64 = 1e-12;

const BK_ALPHA: f64 = 0.640_388_203_202_208_4; // (1 + √17) / 8

#[derive(Clone, Copy, Debug, PartialEq)]
enum Pivot {
    One(f64),
    /// Symmetric 2×2 block `[[a, b], [b, c]]`.
    Two {
        a: f64,
        b: f64,
        c: f64,
    },
}

#[derive(Clone, Debug)]
pub struct Ldlt {
    n: usize,
    /// Unit lower factor in the strict lower triangle.
    l: Matrix,
    /// Pivot blocks, indexed by their leading row.
    pivots: Vec<(usize, Pivot)>,
    /// `swaps[k] = p` means rows/columns `k` and `p` were interchanged at step `k`.
    swaps: Vec<usize>,
}

/// Counts of negative, zero and positive eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl Ldlt {
    pub fn factor(h: &SymMatrix) -> Result<Self> {
        Self::factor_with_floor(h, PIVOT_FLOOR)
    }

    /// Factorization rejecting pivots at or below `rel_floor · ‖H‖_F`; a
    /// zero floor rejects only exact zeros.
    pub fn factor_with_floor(h: &SymMatrix, rel_floor: f64) -> Result<Self> {
        let n = h.dim();
        let floor = rel_floor * h.frobenius_norm();
        let mut a = h.as_matrix().clone();
        let mut pivots = Vec::with_capacity(n);
        let mut swaps: Vec<usize> = (0..n).collect();
        let mut k = 0;
        while k < n {
            let abs_akk = a.get(k, k).abs();
            let (imax, colmax) =
                ((k + 1)..n)
                    .map(|i| (i, a.get(i, k).abs()))
                    .fold(
                        (k, 0.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );

            let (kp, two) = if abs_akk.max(colmax) <= floor {
                return Err(BandError::NearSingular {
                    pivot: abs_akk.max(colmax),
                    floor,
                });
            } else if abs_akk >= BK_ALPHA * colmax {
                (k, false)
            } else {
                let rowmax = (k..n)
                    .filter(|&j| j != imax)
                    .map(|j| a.get(imax, j).abs())
                    .fold(0.0, f64::max);
                if abs_akk * rowmax >= BK_ALPHA * colmax * colmax {
                    (k, false)
                } else if a.get(imax, imax).abs() >= BK_ALPHA * rowmax {
                    (imax, false)
                } else {
                    (imax, true)
                }
            };

            let kk = if two { k + 1 } else { k };
            if kp != kk {
                swap_symmetric(&mut a, kk, kp);
                swaps[kk] = kp;
            }

            if two {
                let (pa, pb, pc) = (a.get(k, k), a.get(k + 1, k), a.get(k + 1, k + 1));
                let det = pa * pc - pb * pb;
                let big = 0.5 * ((pa + pc).abs() + ((pa - pc).powi(2) + 4.0 * pb * pb).sqrt());
                let small = if big > 0.0 { det.abs() / big } else { 0.0 };
                if small <= floor {
                    return Err(BandError::NearSingular {
                        pivot: small,
                        floor,
                    });
                }
                // W = A[k+2.., k..k+2], L = W D⁻¹, trailing -= W D⁻¹ Wᵀ
                let mut lcols = Vec::with_capacity(n - k - 2);
                for i in (k + 2)..n {
                    let (w1, w2) = (a.get(i, k), a.get(i, k + 1));
                    let l1 = (pc * w1 - pb * w2) / det;
                    let l2 = (pa * w2 - pb * w1) / det;
                    lcols.push((i, w1, w2, l1, l2));
                }
                for &(i, _, _, l1, l2) in &lcols {
                    for &(j, w1j, w2j, _, _) in lcols.iter().filter(|c| c.0 <= i) {
                        let v = a.get(i, j) - (l1 * w1j + l2 * w2j);
                        a.set(i, j, v);
                        a.set(j, i, v);
                    }
                }
                for &(i, _, _, l1, l2) in &lcols {
                    a.set(i, k, l1);
                    a.set(i, k + 1, l2);
                }
                a.set(k + 1, k, 0.0);
                pivots.push((
                    k,
                    Pivot::Two {
                        a: pa,
                        b: pb,
                        c: pc,
                    },
                ));
                k += 2;
            } else {
                let d = a.get(k, k);
                if d.abs() <= floor {
                    return Err(BandError::NearSingular {
                        pivot: d.abs(),
                        floor,
                    });
                }
                let col: Vec<(usize, f64)> = ((k + 1)..n).map(|i| (i, a.get(i, k))).collect();
                for &(i, wi) in &col {
                    let li = wi / d;
                    for &(j, wj) in col.iter().take_while(|c| c.0 <= i) {
                        let v = a.get(i, j) - li * wj;
                        a.set(i, j, v);
                        a.set(j, i, v);
                    }
                }
                for &(i, wi) in &col {
                    a.set(i, k, wi / d);
                }
                pivots.push((k, Pivot::One(d)));
                k += 1;
            }
        }
        Ok(Self {
            n,
            l: a,
            pivots,
            swaps,
        })
    }

    pub fn inertia(&self) -> Inertia {
        let mut out = Inertia {
            negative: 0,
            zero: 0,
            positive: 0,
        };
        for &(_, p) in &self.pivots {
            match p {
                Pivot::One(d) => {
                    if d < 0.0 {
                        out.negative += 1
                    } else if d > 0.0 {
                        out.positive += 1
                    } else {
                        out.zero += 1
                    }
                }
                Pivot::Two { a, b, c } => {
                    let det = a * c - b * b;
                    if det < 0.0 {
                        out.negative += 1;
                        out.positive += 1;
                    } else if det > 0.0 {
                        if a + c > 0.0 {
                            out.positive += 2
                        } else {
                            out.negative += 2
                        }
                    } else {
                        out.zero += 1;
                        if a + c > 0.0 {
                            out.positive += 1
                        } else {
                            out.negative += 1
                        }
                    }
                }
            }
        }
        out
    }

    /// Solves `H x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        for (k, &p) in self.swaps.iter().enumerate() {
            if p != k {
                b.swap(k, p);
            }
        }
        // forward: L y = b
        for j in 0..n {
            let bj = b[j];
            if bj != 0.0 {
                for (i, bi) in b.iter_mut().enumerate().skip(j + 1) {
                    *bi -= self.l.get(i, j) * bj;
                }
            }
        }
        for &(k, p) in &self.pivots {
            match p {
                Pivot::One(d) => b[k] /= d,
                Pivot::Two { a, b: off, c } => {
                    let det = a * c - off * off;
                    let (x1, x2) = (b[k], b[k + 1]);
                    b[k] = (c * x1 - off * x2) / det;
                    b[k + 1] = (a * x2 - off * x1) / det;
                }
            }
        }
        // backward: Lᵀ x = z
        for j in (0..n).rev() {
            let mut acc = b[j];
            for (i, &bi) in b.iter().enumerate().skip(j + 1) {
                acc -= self.l.get(i, j) * bi;
            }
            b[j] = acc;
        }
        for (k, &p) in self.swaps.iter().enumerate().rev() {
            if p != k {
                b.swap(k, p);
            }
        }
    }

    pub fn inverse(&self) -> SymMatrix {
        let n = self.n;
        let mut inv = Matrix::zeros(n, n);
        let mut col = vec![0.0; n];
        for j in 0..n {
            col.iter_mut().for_each(|v| *v = 0.0);
            col[j] = 1.0;
            self.solve_in_place(&mut col);
            for (i, &v) in col.iter().enumerate() {
                inv.set(i, j, v);
            }
        }
        SymMatrix::symmetrize(&inv)
    }
}

fn swap_symmetric(a: &mut Matrix, p: usize, q: usize) {
    let n = a.rows();
    for j in 0..n {
        let (x, y) = (a.get(p, j), a.get(q, j));
        a.set(p, j, y);
        a.set(q, j, x);
    }
    for i in 0..n {
        let (x, y) = (a.get(i, p), a.get(i, q));
        a.set(i, p, y);
        a.set(i, q, x);
    }
}

/// Inverse of a symmetric matrix through the pivoted `LDLᵀ` factorization,
/// exactly symmetrized.
pub fn sym_inverse(h: &SymMatrix) -> Result<SymMatrix> {
    Ok(Ldlt::factor(h)?.inverse())
}

/// Number of eigenvalues of `h` strictly below `x`. Only the pivot signs
/// matter here, so just exact zero pivots are rejected.
pub fn count_below(h: &SymMatrix, x: f64) -> Result<usize> {
    let inertia = Ldlt::factor_with_floor(&h.shifted(x), 0.0)?.inertia();
    if inertia.zero > 0 {
        return Err(BandError::NearSingular {
            pivot: 0.0,
            floor: PIVOT_FLOOR,
        });
    }
    Ok(inertia.negative)
}

/// Number of eigenvalues of `h` in the closed interval, from the inertia of
/// `h − lo` and `hi − h`. A singular shift is retried once with the endpoint
/// moved outward by `1e-12` (relative to the endpoint magnitude).
pub fn eigen_count_in_interval(h: &SymMatrix, interval: Interval) -> Result<usize> {
    let nudge = |x: f64| 1e-12 * x.abs().max(1.0);
    let below_lo = count_below(h, interval.lo())
        .or_else(|_| count_below(h, interval.lo() - nudge(interval.lo())))?;
    let neg = h.scaled(-1.0);
    let above_hi = count_below(&neg, -interval.hi())
        .or_else(|_| count_below(&neg, -interval.hi() - nudge(interval.hi())))?;
    Ok(h.dim() - above_hi - below_lo)
}
