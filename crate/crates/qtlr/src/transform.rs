//! Invertible per-mode transform matrices defining the QT-product domain.
//!
//! All provided transforms are real-valued (identity, orthonormal DCT-II,
//! seeded random orthogonal), applied along modes `3..=N`. Real matrices act
//! on a quaternion tensor componentwise, so application touches each of the
//! four real planes independently.

use crate::error::{QtError, Result};
use crate::tensor::QTensor;
use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Identity,
    Dct,
    RandomOrthogonal,
    UserSupplied,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone)]
pub struct ModeTransform {
    pub kind: TransformKind,
    pub forward: DMatrix<f64>,
    pub inverse: DMatrix<f64>,
}

/// The matrices `M_3 .. M_N` for one tensor shape.
#[derive(Debug, Clone)]
pub struct TransformSet {
    /// `modes[0]` applies to mode 3, `modes[1]` to mode 4, ...
    modes: Vec<ModeTransform>,
}

/// Orthonormal DCT-II matrix: entry `(p, q)` (1-based) is
/// `c_p cos(pi (2q - 1)(p - 1) / (2n))` with `c_1 = sqrt(1/n)`,
/// `c_p = sqrt(2/n)` otherwise.
pub fn make_dct(n: usize) -> DMatrix<f64> {
    assert!(n >= 1);
    DMatrix::from_fn(n, n, |p, q| {
        let c = if p == 0 {
            (1.0 / n as f64).sqrt()
        } else {
            (2.0 / n as f64).sqrt()
        };
        c * (PI * (2 * q + 1) as f64 * p as f64 / (2 * n) as f64).cos()
    })
}

/// Seeded random orthogonal matrix: QR of a standard-Gaussian matrix with the
/// sign convention that R's diagonal is positive, so the output is a pure
/// function of `(n, seed)`.
pub fn make_random_orthogonal(n: usize, seed: u64) -> DMatrix<f64> {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(n, n, |_, _| {
        // Box-Muller keeps us independent of rand_distr
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

impl TransformSet {
    fn trailing_extents(shape: &[usize]) -> Vec<usize> {
        if shape.len() <= 2 {
            Vec::new()
        } else {
            shape[2..].to_vec()
        }
    }

    pub fn identity(shape: &[usize]) -> Self {
        let modes = Self::trailing_extents(shape)
            .into_iter()
            .map(|e| ModeTransform {
                kind: TransformKind::Identity,
                forward: DMatrix::identity(e, e),
                inverse: DMatrix::identity(e, e),
            })
            .collect();
        Self { modes }
    }

    pub fn dct(shape: &[usize]) -> Self {
        let modes = Self::trailing_extents(shape)
            .into_iter()
            .map(|e| {
                let m = make_dct(e);
                ModeTransform {
                    kind: TransformKind::Dct,
                    inverse: m.transpose(),
                    forward: m,
                }
            })
            .collect();
        Self { modes }
    }

    pub fn random_orthogonal(shape: &[usize], seed: u64) -> Self {
        let modes = Self::trailing_extents(shape)
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                let m = make_random_orthogonal(e, seed.wrapping_add(i as u64));
                ModeTransform {
                    kind: TransformKind::RandomOrthogonal,
                    inverse: m.transpose(),
                    forward: m,
                }
            })
            .collect();
        Self { modes }
    }

    /// Caller-provided invertible matrices for modes `3..=N`.
    pub fn user_supplied(mats: Vec<DMatrix<f64>>) -> Result<Self> {
        let modes = mats
            .into_iter()
            .map(|m| {
                let inv = m.clone().try_inverse().ok_or_else(|| {
                    QtError::InvalidProblem("user-supplied transform matrix is singular".into())
                })?;
                Ok(ModeTransform {
                    kind: TransformKind::UserSupplied,
                    forward: m,
                    inverse: inv,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { modes })
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn mode(&self, i: usize) -> &ModeTransform {
        &self.modes[i]
    }

    pub fn is_identity(&self) -> bool {
        self.modes.iter().all(|m| m.kind == TransformKind::Identity)
    }

    fn check_shape(&self, shape: &[usize]) -> Result<()> {
        let trailing = Self::trailing_extents(shape);
        if trailing.len() != self.modes.len()
            || trailing
                .iter()
                .zip(&self.modes)
                .any(|(&e, m)| m.forward.ncols() != e)
        {
            return Err(QtError::ShapeMismatch(format!(
                "transform set does not match tensor shape {shape:?}"
            )));
        }
        Ok(())
    }

    /// Chained mode-n products over modes `3..=N` with `M_i` (forward) or
    /// `M_i^-1` (inverse).
    pub fn apply(&self, t: &QTensor, dir: Direction) -> Result<QTensor> {
        self.check_shape(t.shape())?;
        if self.is_identity() {
            return Ok(t.clone());
        }
        let mut out = t.clone();
        for (i, m) in self.modes.iter().enumerate() {
            let mode = i + 3;
            let mat = match dir {
                Direction::Forward => &m.forward,
                Direction::Inverse => &m.inverse,
            };
            out = real_mode_product(&out, mat, mode);
        }
        Ok(out)
    }
}

/// Mode-n product with a real square matrix, applied to each of the four
/// component planes. `n` is 1-based and the matrix must be `I_n x I_n`.
pub fn real_mode_product(t: &QTensor, m: &DMatrix<f64>, n: usize) -> QTensor {
    let shape = t.shape();
    let n0 = n - 1;
    let extent = shape[n0];
    assert_eq!(m.ncols(), extent);
    assert_eq!(m.nrows(), extent);
    let before: usize = shape[..n0].iter().product();
    let after: usize = shape[n0 + 1..].iter().product();
    let mut out = QTensor::zeros(shape);
    let plane = |src: &[f64], dst: &mut [f64]| {
        for a in 0..after {
            let base = a * before * extent;
            for ip in 0..extent {
                let mut row_acc = vec![0.0; before];
                for i in 0..extent {
                    let w = m[(ip, i)];
                    if w == 0.0 {
                        continue;
                    }
                    let off = base + i * before;
                    for b in 0..before {
                        row_acc[b] += w * src[off + b];
                    }
                }
                let off = base + ip * before;
                dst[off..off + before].copy_from_slice(&row_acc);
            }
        }
    };
    plane(&t.comp_w, &mut out.comp_w);
    plane(&t.comp_x, &mut out.comp_x);
    plane(&t.comp_y, &mut out.comp_y);
    plane(&t.comp_z, &mut out.comp_z);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor_ops::mode_n_product;
    use crate::tensor::QMatrix;
    use crate::quat::Quaternion;
    use approx::assert_abs_diff_eq;

    fn random_tensor(shape: &[usize], seed: u64) -> QTensor {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = QTensor::zeros(shape);
        for i in 0..t.len() {
            t.set_linear(
                i,
                Quaternion::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ),
            );
        }
        t
    }

    #[test]
    fn dct_small_cases() {
        let d1 = make_dct(1);
        assert_abs_diff_eq!(d1[(0, 0)], 1.0, epsilon = 1e-15);
        let d2 = make_dct(2);
        let s = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(d2[(0, 0)], s, epsilon = 1e-12);
        assert_abs_diff_eq!(d2[(0, 1)], s, epsilon = 1e-12);
        assert_abs_diff_eq!(d2[(1, 0)], s, epsilon = 1e-12);
        assert_abs_diff_eq!(d2[(1, 1)], -s, epsilon = 1e-12);
    }

    #[test]
    fn dct_orthonormal() {
        let d = make_dct(8);
        let g = d.transpose() * &d;
        let id = DMatrix::identity(8, 8);
        assert!((g - id).norm() < 1e-12);
    }

    #[test]
    fn random_orthogonal_deterministic_and_orthonormal() {
        let a = make_random_orthogonal(6, 42);
        let b = make_random_orthogonal(6, 42);
        assert_eq!(a, b);
        let g = a.transpose() * &a;
        assert!((g - DMatrix::identity(6, 6)).norm() < 1e-10);
        let det = a.determinant();
        assert!((det.abs() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn real_mode_product_matches_quaternion_mode_product() {
        let t = random_tensor(&[3, 4, 5], 1);
        let m = make_random_orthogonal(5, 7);
        let fast = real_mode_product(&t, &m, 3);
        let qm = QMatrix::from_fn(5, 5, |i, j| Quaternion::real(m[(i, j)]));
        let slow = mode_n_product(&t, &qm, 3).unwrap();
        assert!(fast.sub(&slow).unwrap().fro_norm() < 1e-12);
    }

    #[test]
    fn identity_set_is_noop() {
        let t = random_tensor(&[4, 5, 6], 2);
        let s = TransformSet::identity(t.shape());
        let out = s.apply(&t, Direction::Forward).unwrap();
        assert_eq!(out, t);
    }

    #[test]
    fn roundtrip_and_isometry() {
        let t = random_tensor(&[4, 5, 6], 3);
        for s in [
            TransformSet::dct(t.shape()),
            TransformSet::random_orthogonal(t.shape(), 9),
        ] {
            let fwd = s.apply(&t, Direction::Forward).unwrap();
            let back = s.apply(&fwd, Direction::Inverse).unwrap();
            assert!(back.sub(&t).unwrap().fro_norm() / t.fro_norm() < 1e-10);
            assert!((fwd.fro_norm() - t.fro_norm()).abs() < 1e-10 * t.fro_norm());
        }
    }

    #[test]
    fn roundtrip_order_four() {
        let t = random_tensor(&[4, 4, 3, 4], 4);
        for s in [
            TransformSet::dct(t.shape()),
            TransformSet::random_orthogonal(t.shape(), 11),
            TransformSet::user_supplied(vec![
                make_random_orthogonal(3, 1).scale(2.0),
                make_random_orthogonal(4, 2).scale(0.5),
            ])
            .unwrap(),
        ] {
            let fwd = s.apply(&t, Direction::Forward).unwrap();
            let back = s.apply(&fwd, Direction::Inverse).unwrap();
            assert!(back.sub(&t).unwrap().fro_norm() / t.fro_norm() < 1e-10);
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        let t = random_tensor(&[4, 5, 6], 5);
        let s = TransformSet::dct(&[4, 5, 7]);
        assert!(s.apply(&t, Direction::Forward).is_err());
    }
}
