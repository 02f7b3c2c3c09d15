//! Seeded synthetic data: observation masks, noise, and low-rank ground
//! truths for benchmarks and recovery tests. Every generator is a pure
//! function of its arguments (including the seed).

use crate::error::{QtError, Result};
use crate::linalg::qmatmul;
use crate::quat::Quaternion;
use crate::qt::{facewise_product, set_slice, slice_count};
use crate::tensor::{MaskTensor, QMatrix, QTensor};
use crate::tensor_ops::mode_n_product;
use crate::transform::{Direction, TransformSet};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Random observation mask (`true` = observed) hiding `missing_fraction` of
/// the entries. With `per_frame` on an order-3 tensor, exactly
/// `floor(fraction * H * W)` entries per frame are hidden, a fresh uniform
/// draw per frame; otherwise the exact count is taken over the whole tensor.
pub fn make_mask(
    shape: &[usize],
    missing_fraction: f64,
    seed: u64,
    per_frame: bool,
) -> Result<MaskTensor> {
    if !(0.0..1.0).contains(&missing_fraction) {
        return Err(QtError::DomainError(format!(
            "missing fraction must be in [0, 1), got {missing_fraction}"
        )));
    }
    let n: usize = shape.iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = vec![true; n];
    let hide = |data: &mut [bool], rng: &mut ChaCha8Rng| {
        let m = data.len();
        let k = (missing_fraction * m as f64).floor() as usize;
        let mut idx: Vec<usize> = (0..m).collect();
        idx.shuffle(rng);
        for &i in &idx[..k] {
            data[i] = false;
        }
    };
    if per_frame && shape.len() == 3 {
        let frame = shape[0] * shape[1];
        for f in 0..shape[2] {
            hide(&mut data[f * frame..(f + 1) * frame], &mut rng);
        }
    } else {
        hide(&mut data, &mut rng);
    }
    MaskTensor::from_data(shape, data)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    Gaussian,
    Salt,
}

/// Corrupt a pure frame stack. `Gaussian` adds iid `N(0, (level*255)^2)` to
/// each imaginary component; `Salt` replaces exactly `floor(level * n)`
/// entries with random extreme pure values (each channel 0 or 255).
pub fn add_noise(t: &QTensor, kind: NoiseKind, level: f64, seed: u64) -> Result<QTensor> {
    Ok(add_noise_with_support(t, kind, level, seed)?.0)
}

/// As [`add_noise`], also returning the corrupted-entry support (`true` where
/// an entry was touched; for Gaussian noise that is every entry when
/// `level > 0`).
pub fn add_noise_with_support(
    t: &QTensor,
    kind: NoiseKind,
    level: f64,
    seed: u64,
) -> Result<(QTensor, Vec<bool>)> {
    if level < 0.0 {
        return Err(QtError::DomainError(format!(
            "noise level must be nonnegative, got {level}"
        )));
    }
    let n = t.len();
    if level == 0.0 {
        return Ok((t.clone(), vec![false; n]));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = t.clone();
    match kind {
        NoiseKind::Gaussian => {
            let s = level * 255.0;
            for i in 0..n {
                out.comp_x[i] += s * gaussian(&mut rng);
                out.comp_y[i] += s * gaussian(&mut rng);
                out.comp_z[i] += s * gaussian(&mut rng);
            }
            Ok((out, vec![true; n]))
        }
        NoiseKind::Salt => {
            let k = (level * n as f64).floor() as usize;
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut rng);
            let mut support = vec![false; n];
            for &i in &idx[..k] {
                let extreme = |rng: &mut ChaCha8Rng| {
                    if rng.gen_bool(0.5) {
                        255.0
                    } else {
                        0.0
                    }
                };
                out.set_linear(
                    i,
                    Quaternion::new(
                        0.0,
                        extreme(&mut rng),
                        extreme(&mut rng),
                        extreme(&mut rng),
                    ),
                );
                support[i] = true;
            }
            Ok((out, support))
        }
    }
}

/// Gross sparse corruption: adds `+-magnitude` (independent random sign per
/// channel) to each imaginary component of exactly `floor(fraction * n)`
/// uniformly chosen entries. Returns the corrupted tensor and the support
/// (`true` where an entry was touched).
pub fn add_gross_corruption(
    t: &QTensor,
    fraction: f64,
    magnitude: f64,
    seed: u64,
) -> Result<(QTensor, Vec<bool>)> {
    if !(0.0..=1.0).contains(&fraction) || magnitude < 0.0 {
        return Err(QtError::DomainError(format!(
            "corruption needs fraction in [0, 1] and nonnegative magnitude, got {fraction}, {magnitude}"
        )));
    }
    let n = t.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = (fraction * n as f64).floor() as usize;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng);
    let mut out = t.clone();
    let mut support = vec![false; n];
    for &i in &idx[..k] {
        let sign = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let e = Quaternion::new(
            0.0,
            magnitude * sign(&mut rng),
            magnitude * sign(&mut rng),
            magnitude * sign(&mut rng),
        );
        out.set_linear(i, out.get_linear(i) + e);
        support[i] = true;
    }
    Ok((out, support))
}

fn random_pure_tensor(shape: &[usize], rng: &mut ChaCha8Rng, scale: f64) -> QTensor {
    let mut t = QTensor::zeros(shape);
    for i in 0..t.len() {
        t.set_linear(
            i,
            Quaternion::new(
                0.0,
                scale * gaussian(rng),
                scale * gaussian(rng),
                scale * gaussian(rng),
            ),
        );
    }
    t
}

fn random_qmatrix(m: usize, n: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    QMatrix::from_fn(m, n, |_, _| {
        Quaternion::new(
            gaussian(rng),
            gaussian(rng),
            gaussian(rng),
            gaussian(rng),
        )
    })
}

/// Pure quaternion tensor with Tucker rank at most `ranks`: a random pure
/// core multiplied by a random real factor matrix along every mode, scaled so
/// the largest entry modulus is `peak`.
pub fn synthetic_tucker(
    shape: &[usize],
    ranks: &[usize],
    peak: f64,
    seed: u64,
) -> Result<QTensor> {
    if shape.len() != ranks.len() || shape.iter().zip(ranks).any(|(&s, &r)| r == 0 || r > s) {
        return Err(QtError::InvalidProblem(format!(
            "tucker ranks {ranks:?} incompatible with shape {shape:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = random_pure_tensor(ranks, &mut rng, 1.0);
    for (k, (&s, &r)) in shape.iter().zip(ranks).enumerate() {
        let f = QMatrix::from_fn(s, r, |_, _| Quaternion::real(gaussian(&mut rng)));
        t = mode_n_product(&t, &f, k + 1)?;
    }
    rescale_to_peak(&mut t, peak);
    Ok(t)
}

/// Order-3 quaternion tensor with TT rank at most `(r1, r2)`, built by
/// contracting three random quaternion cores, scaled to entry peak `peak`.
pub fn synthetic_tt(
    shape: &[usize],
    r1: usize,
    r2: usize,
    peak: f64,
    seed: u64,
) -> Result<QTensor> {
    if shape.len() != 3 || r1 == 0 || r2 == 0 {
        return Err(QtError::InvalidProblem(format!(
            "tt generator needs an order-3 shape, got {shape:?}"
        )));
    }
    let (i1, i2, i3) = (shape[0], shape[1], shape[2]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g1 = random_qmatrix(i1, r1, &mut rng);
    let g2 = random_qmatrix(r1, i2 * r2, &mut rng);
    let g3 = random_qmatrix(r2, i3, &mut rng);
    // (I1 x I2 r2) -> reshape -> (I1 I2 x r2) -> times G3 -> (I1 I2 x I3)
    let a = qmatmul(&g1, &g2)?;
    let a = QMatrix::from_tensor(a.as_tensor().reshaped(&[i1 * i2, r2])?)?;
    let b = qmatmul(&a, &g3)?;
    let mut t = b.as_tensor().reshaped(shape)?;
    rescale_to_peak(&mut t, peak);
    Ok(t)
}

/// Tensor with QT rank at most `rank` under the given transform set: a
/// facewise product of thin random tensors assembled in the transformed
/// domain and mapped back, scaled to entry peak `peak`.
pub fn synthetic_qt_low_rank(
    shape: &[usize],
    rank: usize,
    set: &TransformSet,
    peak: f64,
    seed: u64,
) -> Result<QTensor> {
    if shape.len() < 3 || rank == 0 || rank > shape[0].min(shape[1]) {
        return Err(QtError::InvalidProblem(format!(
            "qt rank {rank} incompatible with shape {shape:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a_shape = shape.to_vec();
    a_shape[1] = rank;
    let mut b_shape = shape.to_vec();
    b_shape[0] = rank;
    let mut a = QTensor::zeros(&a_shape);
    let mut b = QTensor::zeros(&b_shape);
    for sl in 0..slice_count(&a) {
        let ma = random_qmatrix(shape[0], rank, &mut rng);
        let mb = random_qmatrix(rank, shape[1], &mut rng);
        set_slice(&mut a, sl, &ma);
        set_slice(&mut b, sl, &mb);
    }
    let hat = facewise_product(&a, &b)?;
    let mut t = set.apply(&hat, Direction::Inverse)?;
    rescale_to_peak(&mut t, peak);
    Ok(t)
}

fn rescale_to_peak(t: &mut QTensor, peak: f64) {
    let m = t.linf_norm();
    if m > 0.0 && peak > 0.0 {
        let s = peak / m;
        *t = t.scale_real(s);
    }
}
