//! Full dense decompositions by Jacobi iteration: a one-sided (Hestenes)
//! SVD and a two-sided symmetric eigendecomposition.
//!
//! These are the workhorses behind trace-norm evaluation, singular-value
//! shrinkage in the proximal baselines, and the brute-force oracles that the
//! power-iteration routines are tested against. They share no code with the
//! power method.

use super::{DenseMatrix, Point};

const EPS: f64 = 1e-14;
const MAX_SWEEPS: usize = 60;

/// Thin singular value decomposition `A = U diag(values) V^T`.
///
/// `u` is `m x k`, `v` is `n x k` with `k = min(m, n)`; `values` are sorted
/// in descending order. Columns associated with zero singular values are
/// left as zero vectors.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: DenseMatrix,
    pub values: Vec<f64>,
    pub v: DenseMatrix,
}

impl Svd {
    /// `U diag(f(sigma)) V^T` for an entrywise map of the singular values.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let m = self.u.rows();
        let n = self.v.rows();
        let mut out = DenseMatrix::zeros(m, n);
        for (j, &s) in self.values.iter().enumerate() {
            let fs = f(s);
            if fs == 0.0 {
                continue;
            }
            for i in 0..m {
                let uij = self.u.get(i, j);
                if uij == 0.0 {
                    continue;
                }
                let c = fs * uij;
                for l in 0..n {
                    let v = out.get(i, l) + c * self.v.get(l, j);
                    out.set(i, l, v);
                }
            }
        }
        out
    }
}

/// Symmetric eigendecomposition; `values` ascending, column `k` of `vectors`
/// is the eigenvector for `values[k]`.
#[derive(Clone, Debug)]
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl SymEig {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Eigenvector of the maximum eigenvalue.
    pub fn top_vector(&self) -> super::DenseVector {
        let n = self.vectors.rows();
        let k = self.values.len() - 1;
        super::DenseVector::from_fn(n, |i| self.vectors.get(i, k))
    }
}

struct ColMajor {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl ColMajor {
    fn from_row_major(a: &DenseMatrix, transpose: bool) -> Self {
        let (rows, cols) = if transpose {
            (a.cols(), a.rows())
        } else {
            (a.rows(), a.cols())
        };
        let mut data = vec![0.0; rows * cols];
        for i in 0..a.rows() {
            for (j, &x) in a.row(i).iter().enumerate() {
                if transpose {
                    data[i * rows + j] = x;
                } else {
                    data[j * rows + i] = x;
                }
            }
        }
        Self { rows, cols, data }
    }

    fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Mutable access to two distinct columns.
    fn col_pair_mut(&mut self, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
        debug_assert!(p < q);
        let (head, tail) = self.data.split_at_mut(q * self.rows);
        (
            &mut head[p * self.rows..(p + 1) * self.rows],
            &mut tail[..self.rows],
        )
    }
}

fn rotate_pair(cp: &mut [f64], cq: &mut [f64], c: f64, s: f64) {
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let xp = *x;
        let xq = *y;
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

fn one_sided_jacobi(a: &DenseMatrix, want_vectors: bool) -> (ColMajor, Option<ColMajor>, bool) {
    // Work on the taller orientation so columns are at least as long as they
    // are many.
    let transpose = a.rows() < a.cols();
    let mut b = ColMajor::from_row_major(a, transpose);
    let n = b.cols;
    let mut v = want_vectors.then(|| ColMajor::identity(n));

    let mut norms2: Vec<f64> = (0..n).map(|j| b.col(j).iter().map(|x| x * x).sum()).collect();

    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq: f64 = b.col(p).iter().zip(b.col(q)).map(|(x, y)| x * y).sum();
                let app = norms2[p];
                let aqq = norms2[q];
                if apq.abs() <= EPS * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                {
                    let (cp, cq) = b.col_pair_mut(p, q);
                    rotate_pair(cp, cq, c, s);
                }
                if let Some(v) = v.as_mut() {
                    let (vp, vq) = v.col_pair_mut(p, q);
                    rotate_pair(vp, vq, c, s);
                }
                norms2[p] = app - t * apq;
                norms2[q] = aqq + t * apq;
            }
        }
        if !rotated {
            break;
        }
        // Refresh cached column norms to shed rotation round-off.
        for (j, n2) in norms2.iter_mut().enumerate() {
            *n2 = b.col(j).iter().map(|x| x * x).sum();
        }
    }

    (b, v, transpose)
}

/// Full (thin) SVD by cyclic one-sided Jacobi orthogonalization.
pub fn jacobi_svd(a: &DenseMatrix) -> Svd {
    let (b, v, transposed) = one_sided_jacobi(a, true);
    let v = v.expect("vectors requested");
    let (mm, nn) = (b.rows, b.cols);

    let mut order: Vec<usize> = (0..nn).collect();
    let sigmas: Vec<f64> = (0..nn)
        .map(|j| b.col(j).iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| sigmas[j].partial_cmp(&sigmas[i]).unwrap());

    let mut values = Vec::with_capacity(nn);
    let mut left = DenseMatrix::zeros(mm, nn);
    let mut right = DenseMatrix::zeros(nn, nn);
    for (k, &j) in order.iter().enumerate() {
        let s = sigmas[j];
        values.push(s);
        if s > 0.0 {
            for (i, &x) in b.col(j).iter().enumerate() {
                left.set(i, k, x / s);
            }
        }
        for (i, &x) in v.col(j).iter().enumerate() {
            right.set(i, k, x);
        }
    }

    if transposed {
        Svd {
            u: right,
            values,
            v: left,
        }
    } else {
        Svd {
            u: left,
            values,
            v: right,
        }
    }
}

/// Singular values only (descending); skips accumulating the rotations.
pub fn singular_values(a: &DenseMatrix) -> Vec<f64> {
    let (b, _, _) = one_sided_jacobi(a, false);
    let mut s: Vec<f64> = (0..b.cols)
        .map(|j| b.col(j).iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Trace norm (sum of singular values).
pub fn trace_norm(a: &DenseMatrix) -> f64 {
    singular_values(a).iter().sum()
}

/// Symmetric eigendecomposition by cyclic two-sided Jacobi rotation.
///
/// The input is symmetrized as `(A + A^T) / 2` before iterating.
pub fn jacobi_eig(a: &DenseMatrix) -> SymEig {
    assert!(a.is_square(), "jacobi_eig: matrix must be square");
    let n = a.rows();
    let mut m = a.symmetrized();
    let mut v = DenseMatrix::identity(n);
    let scale = m.max_abs().max(f64::MIN_POSITIVE);

    for _sweep in 0..MAX_SWEEPS {
        let mut off_max = 0.0f64;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                off_max = off_max.max(apq.abs());
                if apq.abs() <= EPS * scale {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;

                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, c * akp - s * akq);
                    m.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = m.get(p, k);
                    let aqk = m.get(q, k);
                    m.set(p, k, c * apk - s * aqk);
                    m.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
        if off_max <= EPS * scale {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |i, k| v.get(i, order[k]));
    SymEig { values, vectors }
}
