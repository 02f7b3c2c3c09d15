//! The QT-product family: face-wise products in the transformed domain,
//! QT-SVD, Qt-rank, and QT-domain norms.
//!
//! All operations accept order-N tensors (N >= 3): the "frontal slices" are
//! indexed by the trailing N-2 modes, and per-slice work iterates over every
//! trailing multi-index. Per-slice SVDs are independent and run on the rayon
//! pool.

use crate::error::{QtError, Result};
use crate::linalg::{qmatmul, qsvd, qsvd_thin};
use crate::surrogate::Surrogate;
use crate::tensor::{QMatrix, QTensor};
use crate::transform::{Direction, TransformSet};
use rayon::prelude::*;

/// Number of frontal slices = product of the trailing extents.
pub fn slice_count(t: &QTensor) -> usize {
    t.shape()[2..].iter().product()
}

/// Copies frontal slice `s` (column-major contiguous block) out as a matrix.
pub fn get_slice(t: &QTensor, s: usize) -> QMatrix {
    let (rows, cols) = (t.shape()[0], t.shape()[1]);
    let block = rows * cols;
    let off = s * block;
    let mut m = QMatrix::zeros(rows, cols);
    for i in 0..block {
        m.set(i % rows, i / rows, t.get_linear(off + i));
    }
    m
}

/// Writes matrix `m` into frontal slice `s` of `t`.
pub fn set_slice(t: &mut QTensor, s: usize, m: &QMatrix) {
    let (rows, cols) = (t.shape()[0], t.shape()[1]);
    assert_eq!((m.rows(), m.cols()), (rows, cols));
    let off = s * rows * cols;
    for j in 0..cols {
        for i in 0..rows {
            t.set_linear(off + i + j * rows, m.get(i, j));
        }
    }
}

fn check_order(t: &QTensor) -> Result<()> {
    if t.order() < 3 {
        return Err(QtError::ShapeMismatch(format!(
            "QT operations need order >= 3, got {:?}",
            t.shape()
        )));
    }
    Ok(())
}

/// Slice-wise matrix product: slice `i` of the output is the product of the
/// corresponding slices of `a` and `b`.
pub fn facewise_product(a: &QTensor, b: &QTensor) -> Result<QTensor> {
    check_order(a)?;
    check_order(b)?;
    if a.shape()[1] != b.shape()[0] || a.shape()[2..] != b.shape()[2..] {
        return Err(QtError::ShapeMismatch(format!(
            "facewise product: {:?} times {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let mut out_shape = a.shape().to_vec();
    out_shape[1] = b.shape()[1];
    let slices: Vec<QMatrix> = (0..slice_count(a))
        .into_par_iter()
        .map(|s| qmatmul(&get_slice(a, s), &get_slice(b, s)))
        .collect::<Result<_>>()?;
    let mut out = QTensor::zeros(&out_shape);
    for (s, m) in slices.iter().enumerate() {
        set_slice(&mut out, s, m);
    }
    Ok(out)
}

/// QT-product: inverse transform of the face-wise product of the forward
/// transforms.
pub fn qt_product(a: &QTensor, b: &QTensor, set: &TransformSet) -> Result<QTensor> {
    let ah = set.apply(a, Direction::Forward)?;
    let bh = set.apply(b, Direction::Forward)?;
    let prod = facewise_product(&ah, &bh)?;
    set.apply(&prod, Direction::Inverse)
}

/// QT conjugate transpose: slice-wise conjugate transpose in the transformed
/// domain, then inverse transform.
pub fn qt_conj_transpose(a: &QTensor, set: &TransformSet) -> Result<QTensor> {
    check_order(a)?;
    let ah = set.apply(a, Direction::Forward)?;
    let mut out_shape = a.shape().to_vec();
    out_shape.swap(0, 1);
    let mut out = QTensor::zeros(&out_shape);
    for s in 0..slice_count(a) {
        set_slice(&mut out, s, &get_slice(&ah, s).conj_transpose());
    }
    set.apply(&out, Direction::Inverse)
}

/// Identity tensor for the QT-product: every transformed slice is `I_j`.
pub fn qt_identity(j: usize, trailing: &[usize], set: &TransformSet) -> Result<QTensor> {
    let mut shape = vec![j, j];
    shape.extend_from_slice(trailing);
    let mut t = QTensor::zeros(&shape);
    let id = QMatrix::identity(j);
    for s in 0..t.shape()[2..].iter().product() {
        set_slice(&mut t, s, &id);
    }
    set.apply(&t, Direction::Inverse)
}

/// QT-SVD factors, stored in the original (inverse-transformed) domain
/// together with the transform set that defines the product.
#[derive(Debug, Clone)]
pub struct QTSVDResult {
    pub u: QTensor,
    pub s: QTensor,
    pub v: QTensor,
    /// Per-slice singular values in the transformed domain, indexed
    /// `[slice][rank]`, each sorted non-increasing.
    pub slice_singular_values: Vec<Vec<f64>>,
}

/// QT-SVD: forward transform, per-slice QSVD, inverse transform of the three
/// factor stacks. Slices are processed in parallel.
pub fn qt_svd(q: &QTensor, set: &TransformSet) -> Result<QTSVDResult> {
    check_order(q)?;
    let (i1, i2) = (q.shape()[0], q.shape()[1]);
    let trailing = &q.shape()[2..];
    let qh = set.apply(q, Direction::Forward)?;
    let per_slice: Vec<_> = (0..slice_count(q))
        .into_par_iter()
        .map(|s| {
            qsvd(&get_slice(&qh, s))
                .map_err(|e| QtError::NumericalFailure(format!("slice {s}: {e}")))
        })
        .collect::<Result<_>>()?;

    let mut u_shape = vec![i1, i1];
    u_shape.extend_from_slice(trailing);
    let mut v_shape = vec![i2, i2];
    v_shape.extend_from_slice(trailing);
    let mut u = QTensor::zeros(&u_shape);
    let mut sten = QTensor::zeros(q.shape());
    let mut v = QTensor::zeros(&v_shape);
    let mut sv = Vec::with_capacity(per_slice.len());
    for (s, r) in per_slice.into_iter().enumerate() {
        set_slice(&mut u, s, &r.u);
        set_slice(&mut v, s, &r.v);
        let mut diag = QMatrix::zeros(i1, i2);
        for (t, &sigma) in r.s.iter().enumerate() {
            diag.set(t, t, crate::quat::Quaternion::real(sigma));
        }
        set_slice(&mut sten, s, &diag);
        sv.push(r.s);
    }
    Ok(QTSVDResult {
        u: set.apply(&u, Direction::Inverse)?,
        s: set.apply(&sten, Direction::Inverse)?,
        v: set.apply(&v, Direction::Inverse)?,
        slice_singular_values: sv,
    })
}

impl QTSVDResult {
    /// `U x_QT S x_QT V^H` under the given transform set.
    pub fn reconstruct(&self, set: &TransformSet) -> Result<QTensor> {
        let us = qt_product(&self.u, &self.s, set)?;
        qt_product(&us, &qt_conj_transpose(&self.v, set)?, set)
    }
}

/// Per-slice singular values in the transformed domain, without assembling
/// the factor tensors.
pub fn qt_singular_values(q: &QTensor, set: &TransformSet) -> Result<Vec<Vec<f64>>> {
    check_order(q)?;
    let qh = set.apply(q, Direction::Forward)?;
    (0..slice_count(q))
        .into_par_iter()
        .map(|s| {
            qsvd_thin(&get_slice(&qh, s))
                .map(|r| r.s)
                .map_err(|e| QtError::NumericalFailure(format!("slice {s}: {e}")))
        })
        .collect()
}

/// Qt-rank: number of diagonal tubes whose largest singular value exceeds
/// `tol` times the overall largest singular value.
pub fn qt_rank(q: &QTensor, set: &TransformSet, tol: f64) -> Result<usize> {
    let sv = qt_singular_values(q, set)?;
    let r = q.shape()[0].min(q.shape()[1]);
    let overall = sv
        .iter()
        .flat_map(|s| s.iter().copied())
        .fold(0.0f64, f64::max);
    if overall == 0.0 {
        return Ok(0);
    }
    let count = (0..r)
        .filter(|&k| {
            sv.iter()
                .map(|s| s.get(k).copied().unwrap_or(0.0))
                .fold(0.0f64, f64::max)
                > tol * overall
        })
        .count();
    Ok(count)
}

/// Quaternion tensor nuclear norm: sum of all transformed-slice singular
/// values.
pub fn qtnn(q: &QTensor, set: &TransformSet) -> Result<f64> {
    Ok(qt_singular_values(q, set)?
        .iter()
        .flat_map(|s| s.iter())
        .sum())
}

/// QT-phi norm: `sum_{i,j} phi(sigma_j^(i))` over transformed slices.
pub fn qt_phi_norm(q: &QTensor, set: &TransformSet, phi: &Surrogate) -> Result<f64> {
    let sv = qt_singular_values(q, set)?;
    let mut acc = 0.0;
    for s in &sv {
        for (j, &sigma) in s.iter().enumerate() {
            acc += phi.value(sigma, j)?;
        }
    }
    Ok(acc)
}
