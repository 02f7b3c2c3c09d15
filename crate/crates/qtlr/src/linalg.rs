//! Quaternion matrix linear algebra.
//!
//! The QSVD is computed through the complex adjoint embedding
//! `chi(Q) = [[Q_a, Q_b], [-conj(Q_b), conj(Q_a)]]` of the Cayley-Dickson
//! form: singular values of the adjoint occur in pairs, and every second
//! adjoint singular triplet lifts back to a quaternion one.

use crate::error::{QtError, Result};
use crate::quat::{qmul, Quaternion};
use crate::tensor::QMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Full quaternion SVD `Q = U S V^H` with square unitary `U`, `V`.
#[derive(Debug, Clone)]
pub struct QSVDResult {
    pub u: QMatrix,
    pub s: Vec<f64>,
    pub v: QMatrix,
}

/// Thin quaternion SVD: `U` is `m x r`, `V` is `n x r`, `r = min(m, n)`.
#[derive(Debug, Clone)]
pub struct ThinQSVD {
    pub u: QMatrix,
    pub s: Vec<f64>,
    pub v: QMatrix,
}

/// Complex adjoint `chi(Q)` of an `m x n` quaternion matrix, a `2m x 2n`
/// complex matrix. `chi` is an algebra homomorphism.
pub fn complex_adjoint(q: &QMatrix) -> DMatrix<Complex64> {
    let (m, n) = (q.rows(), q.cols());
    let mut out = DMatrix::zeros(2 * m, 2 * n);
    for j in 0..n {
        for i in 0..m {
            let (a, b) = q.get(i, j).cayley_dickson();
            out[(i, j)] = a;
            out[(i, j + n)] = b;
            out[(i + m, j)] = -b.conj();
            out[(i + m, j + n)] = a.conj();
        }
    }
    out
}

/// Quaternion matrix product with left-to-right Hamilton products.
pub fn qmatmul(p: &QMatrix, q: &QMatrix) -> Result<QMatrix> {
    if p.cols() != q.rows() {
        return Err(QtError::ShapeMismatch(format!(
            "qmatmul: {}x{} times {}x{}",
            p.rows(),
            p.cols(),
            q.rows(),
            q.cols()
        )));
    }
    let (m, kk, n) = (p.rows(), p.cols(), q.cols());
    let mut out = QMatrix::zeros(m, n);
    for j in 0..n {
        for k in 0..kk {
            let b = q.get(k, j);
            for i in 0..m {
                let acc = out.get(i, j) + qmul(p.get(i, k), b);
                out.set(i, j, acc);
            }
        }
    }
    Ok(out)
}

fn adjoint_svd(
    q: &QMatrix,
) -> Result<(DMatrix<Complex64>, Vec<f64>, DMatrix<Complex64>)> {
    let adj = complex_adjoint(q);
    let svd = nalgebra::SVD::try_new(adj, true, true, f64::EPSILON * 8.0, 1000)
        .ok_or_else(|| QtError::NumericalFailure("complex SVD did not converge".into()))?;
    let u = svd.u.unwrap();
    let v_t = svd.v_t.unwrap();
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();

    // Sort descending; nalgebra does not guarantee an order.
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].partial_cmp(&sv[a]).unwrap());
    let s_sorted: Vec<f64> = order.iter().map(|&i| sv[i]).collect();
    let u_sorted = DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, order[j])]);
    // columns of V = conjugated rows of v_t
    let v_sorted = DMatrix::from_fn(v_t.ncols(), v_t.nrows(), |i, j| v_t[(order[j], i)].conj());
    Ok((u_sorted, s_sorted, v_sorted))
}

/// Lifts a complex adjoint column `(top; bottom)` of length `2m` back to a
/// quaternion column: `q_a = top`, `q_b = -conj(bottom)`.
fn lift_column(col: &[Complex64], m: usize) -> Vec<Quaternion> {
    (0..m)
        .map(|i| Quaternion::from_cayley_dickson(col[i], -col[m + i].conj()))
        .collect()
}

/// Thin QSVD. This is the workhorse used by the proximal operators; it skips
/// the basis completion needed for square factors.
pub fn qsvd_thin(q: &QMatrix) -> Result<ThinQSVD> {
    let (m, n) = (q.rows(), q.cols());
    let r = m.min(n);
    let (ua, s, va) = adjoint_svd(q)?;
    let mut u = QMatrix::zeros(m, r);
    let mut v = QMatrix::zeros(n, r);
    let mut sv = Vec::with_capacity(r);
    for t in 0..r {
        let k = 2 * t; // every second adjoint singular triplet
        sv.push(s[k]);
        let ucol: Vec<Complex64> = (0..2 * m).map(|i| ua[(i, k)]).collect();
        let vcol: Vec<Complex64> = (0..2 * n).map(|i| va[(i, k)]).collect();
        for (i, qv) in lift_column(&ucol, m).into_iter().enumerate() {
            u.set(i, t, qv);
        }
        for (i, qv) in lift_column(&vcol, n).into_iter().enumerate() {
            v.set(i, t, qv);
        }
    }
    Ok(ThinQSVD { u, s: sv, v })
}

/// Completes `cols` orthonormal quaternion columns of height `dim` to a full
/// orthonormal basis using modified Gram-Schmidt over the canonical basis.
fn complete_basis(partial: &QMatrix) -> QMatrix {
    let dim = partial.rows();
    let r = partial.cols();
    let mut cols: Vec<Vec<Quaternion>> = (0..r)
        .map(|j| (0..dim).map(|i| partial.get(i, j)).collect())
        .collect();
    let mut e = 0usize;
    while cols.len() < dim && e < dim {
        let mut cand: Vec<Quaternion> = (0..dim)
            .map(|i| if i == e { Quaternion::ONE } else { Quaternion::ZERO })
            .collect();
        // two orthogonalization passes
        for _ in 0..2 {
            for c in &cols {
                // coefficient <c, cand>, subtract c * coeff (right scaling)
                let mut coeff = Quaternion::ZERO;
                for i in 0..dim {
                    coeff = coeff + qmul(c[i].conj(), cand[i]);
                }
                for i in 0..dim {
                    cand[i] = cand[i] - qmul(c[i], coeff);
                }
            }
        }
        let norm: f64 = cand.iter().map(|q| q.modulus_sq()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for q in &mut cand {
                *q = q.scale(1.0 / norm);
            }
            cols.push(cand);
        }
        e += 1;
    }
    let mut out = QMatrix::zeros(dim, dim);
    for (j, c) in cols.iter().enumerate() {
        for (i, &q) in c.iter().enumerate() {
            out.set(i, j, q);
        }
    }
    out
}

/// Full QSVD with square unitary factors.
pub fn qsvd(q: &QMatrix) -> Result<QSVDResult> {
    let thin = qsvd_thin(q)?;
    Ok(QSVDResult {
        u: complete_basis(&thin.u),
        s: thin.s,
        v: complete_basis(&thin.v),
    })
}

impl QSVDResult {
    /// `U S V^H` with `S` the rectangular diagonal of the singular values.
    pub fn reconstruct(&self) -> Result<QMatrix> {
        reconstruct_from_factors(&self.u, &self.s, &self.v)
    }
}

impl ThinQSVD {
    pub fn reconstruct(&self) -> Result<QMatrix> {
        reconstruct_from_factors(&self.u, &self.s, &self.v)
    }

    /// `U diag(d) V^H` with modified singular values `d`.
    pub fn reconstruct_with(&self, d: &[f64]) -> Result<QMatrix> {
        reconstruct_from_factors(&self.u, d, &self.v)
    }
}

fn reconstruct_from_factors(u: &QMatrix, s: &[f64], v: &QMatrix) -> Result<QMatrix> {
    let (m, n) = (u.rows(), v.rows());
    let r = s.len().min(u.cols()).min(v.cols());
    let mut out = QMatrix::zeros(m, n);
    for j in 0..n {
        for t in 0..r {
            let vh = v.get(j, t).conj().scale(s[t]);
            for i in 0..m {
                let acc = out.get(i, j) + qmul(u.get(i, t), vh);
                out.set(i, j, acc);
            }
        }
    }
    Ok(out)
}

/// Sum of the singular values.
pub fn nuclear_norm(q: &QMatrix) -> Result<f64> {
    Ok(qsvd_thin(q)?.s.iter().sum())
}

/// Numerical rank with threshold `sigma_i > tol * sigma_1`.
pub fn qrank(q: &QMatrix, tol: f64) -> Result<usize> {
    let s = qsvd_thin(q)?.s;
    let s1 = s.first().copied().unwrap_or(0.0);
    Ok(s.iter().filter(|&&x| x > tol * s1).count())
}

/// True iff both Gram products are within `tol` of the identity in
/// Frobenius norm. Errors on non-square input.
pub fn is_unitary(q: &QMatrix, tol: f64) -> Result<bool> {
    if q.rows() != q.cols() {
        return Err(QtError::ShapeMismatch(format!(
            "is_unitary requires a square matrix, got {}x{}",
            q.rows(),
            q.cols()
        )));
    }
    let qh = q.conj_transpose();
    let id = QMatrix::identity(q.rows());
    let g1 = qmatmul(&qh, q)?.sub(&id)?;
    let g2 = qmatmul(q, &qh)?.sub(&id)?;
    Ok(g1.fro_norm() <= tol && g2.fro_norm() <= tol)
}

/// Frobenius distance `||U^H U - I||_F` (square or thin `U`).
pub fn unitarity_defect(u: &QMatrix) -> Result<f64> {
    let g = qmatmul(&u.conj_transpose(), u)?;
    let id = QMatrix::identity(u.cols());
    Ok(g.sub(&id)?.fro_norm())
}
