//! Mode-k unfolding/folding, mode-n products, TT-style unfoldings, and ket
//! augmentation.
//!
//! The mode-k unfolding maps element `(i_1, ..., i_N)` to matrix cell
//! `(i_k, j)` with `j = 1 + sum_{l != k} (i_l - 1) J_l` and
//! `J_l = prod_{m < l, m != k} I_m` (1-based, empty product = 1).

use crate::error::{QtError, Result};
use crate::linalg::qmatmul;
use crate::tensor::{QMatrix, QTensor};

fn check_mode(mode: usize, order: usize) -> Result<()> {
    if mode == 0 || mode > order {
        return Err(QtError::ModeOutOfRange { mode, order });
    }
    Ok(())
}

/// Column strides `J_l` of the mode-k unfolding (0-based mode `k0`).
fn unfold_strides(shape: &[usize], k0: usize) -> Vec<usize> {
    let mut strides = vec![0; shape.len()];
    let mut acc = 1;
    for l in 0..shape.len() {
        if l == k0 {
            continue;
        }
        strides[l] = acc;
        acc *= shape[l];
    }
    strides
}

/// Mode-k unfolding into an `I_k x prod_{l != k} I_l` matrix. `k` is 1-based.
pub fn unfold(t: &QTensor, k: usize) -> Result<QMatrix> {
    check_mode(k, t.order())?;
    let k0 = k - 1;
    let shape = t.shape();
    let rows = shape[k0];
    let cols = t.len() / rows;
    let col_strides = unfold_strides(shape, k0);
    let mut out = QMatrix::zeros(rows, cols);
    let mut multi = vec![0usize; shape.len()];
    for lin in 0..t.len() {
        let col: usize = multi
            .iter()
            .zip(&col_strides)
            .enumerate()
            .filter(|(l, _)| *l != k0)
            .map(|(_, (&i, &s))| i * s)
            .sum();
        out.set(multi[k0], col, t.get_linear(lin));
        // column-major odometer
        for l in 0..shape.len() {
            multi[l] += 1;
            if multi[l] < shape[l] {
                break;
            }
            multi[l] = 0;
        }
    }
    Ok(out)
}

/// Inverse of [`unfold`]: folds an `I_k x prod` matrix back into `shape`.
pub fn fold(m: &QMatrix, k: usize, shape: &[usize]) -> Result<QTensor> {
    check_mode(k, shape.len())?;
    let k0 = k - 1;
    let len: usize = shape.iter().product();
    if m.rows() != shape[k0] || m.rows() * m.cols() != len {
        return Err(QtError::ShapeMismatch(format!(
            "fold: {}x{} matrix does not match mode {} of {:?}",
            m.rows(),
            m.cols(),
            k,
            shape
        )));
    }
    let col_strides = unfold_strides(shape, k0);
    let mut out = QTensor::zeros(shape);
    let mut multi = vec![0usize; shape.len()];
    for lin in 0..len {
        let col: usize = multi
            .iter()
            .zip(&col_strides)
            .enumerate()
            .filter(|(l, _)| *l != k0)
            .map(|(_, (&i, &s))| i * s)
            .sum();
        out.set_linear(lin, m.get(multi[k0], col));
        for l in 0..shape.len() {
            multi[l] += 1;
            if multi[l] < shape[l] {
                break;
            }
            multi[l] = 0;
        }
    }
    Ok(out)
}

/// Mode-n product `T x_n M`: multiplies the mode-n unfolding by `M` on the
/// left. `M` must have `I_n` columns; mode `n` is 1-based.
pub fn mode_n_product(t: &QTensor, m: &QMatrix, n: usize) -> Result<QTensor> {
    check_mode(n, t.order())?;
    if m.cols() != t.shape()[n - 1] {
        return Err(QtError::ShapeMismatch(format!(
            "mode_n_product: matrix has {} cols, mode {} extent is {}",
            m.cols(),
            n,
            t.shape()[n - 1]
        )));
    }
    let unf = unfold(t, n)?;
    let prod = qmatmul(m, &unf)?;
    let mut new_shape = t.shape().to_vec();
    new_shape[n - 1] = m.rows();
    fold(&prod, n, &new_shape)
}

/// TT-style unfolding grouping the first `k` modes as rows. With column-major
/// linearization this is a pure reshape, so it is exact and cheap.
pub fn tt_unfold(t: &QTensor, k: usize) -> Result<QMatrix> {
    if k == 0 || k >= t.order() {
        return Err(QtError::ModeOutOfRange {
            mode: k,
            order: t.order(),
        });
    }
    let rows: usize = t.shape()[..k].iter().product();
    let cols: usize = t.shape()[k..].iter().product();
    QMatrix::from_tensor(t.reshaped(&[rows, cols])?)
}

/// Inverse of [`tt_unfold`].
pub fn tt_fold(m: &QMatrix, k: usize, shape: &[usize]) -> Result<QTensor> {
    if k == 0 || k >= shape.len() {
        return Err(QtError::ModeOutOfRange {
            mode: k,
            order: shape.len(),
        });
    }
    let rows: usize = shape[..k].iter().product();
    if m.rows() != rows || m.cols() != shape[k..].iter().product::<usize>() {
        return Err(QtError::ShapeMismatch(format!(
            "tt_fold: {}x{} matrix does not match grouping {} of {:?}",
            m.rows(),
            m.cols(),
            k,
            shape
        )));
    }
    m.as_tensor().reshaped(shape)
}

fn log2_exact(v: usize) -> Option<u32> {
    if v.is_power_of_two() {
        Some(v.trailing_zeros())
    } else {
        None
    }
}

/// Ket augmentation of a `2^n x 2^n x I3` tensor into `4 x ... x 4 x I3`
/// (`n` fours). Level `l` (mode `l+1` of the output) holds the base-4 digit
/// `bit_l(row) + 2 * bit_l(col)`, so within each 2x2 cell the order is
/// `(1,1), (2,1), (1,2), (2,2)`.
pub fn ket_augment(t: &QTensor) -> Result<QTensor> {
    if t.order() != 3 {
        return Err(QtError::ShapeMismatch(format!(
            "ket_augment expects an order-3 tensor, got order {}",
            t.order()
        )));
    }
    let (h, w, depth) = (t.shape()[0], t.shape()[1], t.shape()[2]);
    let n = match (log2_exact(h), log2_exact(w)) {
        (Some(a), Some(b)) if a == b && a >= 1 => a,
        _ => return Err(QtError::NotPowerOfTwo(h, w)),
    };
    let mut out_shape = vec![4usize; n as usize];
    out_shape.push(depth);
    let mut out = QTensor::zeros(&out_shape);
    for d in 0..depth {
        for c in 0..w {
            for r in 0..h {
                let mut out_idx = 0usize;
                let mut stride = 1usize;
                for l in 0..n {
                    let digit = ((r >> l) & 1) + 2 * ((c >> l) & 1);
                    out_idx += digit * stride;
                    stride *= 4;
                }
                out_idx += d * stride;
                out.set_linear(out_idx, t.get(&[r, c, d]));
            }
        }
    }
    Ok(out)
}

/// Inverse of [`ket_augment`]; the leading extent-4 modes determine `n`.
pub fn ket_inverse(t: &QTensor) -> Result<QTensor> {
    let order = t.order();
    if order < 2 {
        return Err(QtError::ShapeMismatch(
            "ket_inverse expects at least one extent-4 mode plus a depth mode".into(),
        ));
    }
    let n = order - 1;
    if t.shape()[..n].iter().any(|&e| e != 4) {
        return Err(QtError::ShapeMismatch(format!(
            "ket_inverse expects leading extent-4 modes, got {:?}",
            t.shape()
        )));
    }
    let depth = t.shape()[n];
    let side = 1usize << n;
    let mut out = QTensor::zeros(&[side, side, depth]);
    for lin in 0..t.len() {
        let mut rem = lin;
        let mut r = 0usize;
        let mut c = 0usize;
        for l in 0..n {
            let digit = rem % 4;
            rem /= 4;
            r |= (digit & 1) << l;
            c |= (digit >> 1) << l;
        }
        let d = rem;
        out.set(&[r, c, d], t.get_linear(lin));
    }
    Ok(out)
}
