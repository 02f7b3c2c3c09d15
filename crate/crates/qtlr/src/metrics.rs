//! Reconstruction quality metrics for pure quaternion frame stacks.

use crate::error::{QtError, Result};
use crate::tensor::QTensor;

/// Peak signal-to-noise ratio in dB over a whole `H x W x T` stack:
/// `10 log10(H W T max(truth)^2 / ||truth - estimate||_F^2)` where the peak is
/// the largest entry modulus of the truth. Returns `f64::INFINITY` for an
/// exact match.
pub fn psnr(truth: &QTensor, estimate: &QTensor) -> Result<f64> {
    if truth.shape() != estimate.shape() {
        return Err(QtError::ShapeMismatch(format!(
            "psnr shapes {:?} vs {:?}",
            truth.shape(),
            estimate.shape()
        )));
    }
    let err = truth.sub(estimate)?.fro_norm();
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    let n: usize = truth.shape().iter().product();
    let peak = truth.linf_norm();
    Ok(10.0 * (n as f64 * peak * peak / (err * err)).log10())
}

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;
const SSIM_L: f64 = 255.0;

fn gaussian_kernel() -> [f64; SSIM_WINDOW] {
    let mut k = [0.0; SSIM_WINDOW];
    let c = (SSIM_WINDOW / 2) as f64;
    let mut sum = 0.0;
    for (i, v) in k.iter_mut().enumerate() {
        let d = i as f64 - c;
        *v = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
        sum += *v;
    }
    for v in &mut k {
        *v /= sum;
    }
    k
}

/// Gaussian-filter a `rows x cols` image (column-major), same-size output with
/// zero padding at the borders, normalized by the in-bounds kernel mass.
fn filter2(img: &[f64], rows: usize, cols: usize, k: &[f64; SSIM_WINDOW]) -> Vec<f64> {
    let half = SSIM_WINDOW as isize / 2;
    let mut tmp = vec![0.0; rows * cols];
    let mut wsum_r = vec![0.0; rows * cols];
    // vertical pass
    for c in 0..cols {
        for r in 0..rows {
            let mut acc = 0.0;
            let mut w = 0.0;
            for (t, &kv) in k.iter().enumerate() {
                let rr = r as isize + t as isize - half;
                if rr >= 0 && (rr as usize) < rows {
                    acc += kv * img[rr as usize + c * rows];
                    w += kv;
                }
            }
            tmp[r + c * rows] = acc;
            wsum_r[r + c * rows] = w;
        }
    }
    // horizontal pass
    let mut out = vec![0.0; rows * cols];
    for c in 0..cols {
        for r in 0..rows {
            let mut acc = 0.0;
            let mut w = 0.0;
            for (t, &kv) in k.iter().enumerate() {
                let cc = c as isize + t as isize - half;
                if cc >= 0 && (cc as usize) < cols {
                    acc += kv * tmp[r + cc as usize * rows];
                    w += kv * wsum_r[r + cc as usize * rows];
                }
            }
            out[r + c * rows] = if w > 0.0 { acc / w } else { 0.0 };
        }
    }
    out
}

/// Mean SSIM of one grayscale channel (column-major `rows x cols`).
fn ssim_channel(a: &[f64], b: &[f64], rows: usize, cols: usize) -> f64 {
    let k = gaussian_kernel();
    let c1 = (SSIM_K1 * SSIM_L) * (SSIM_K1 * SSIM_L);
    let c2 = (SSIM_K2 * SSIM_L) * (SSIM_K2 * SSIM_L);
    let mu_a = filter2(a, rows, cols, &k);
    let mu_b = filter2(b, rows, cols, &k);
    let aa: Vec<f64> = a.iter().map(|v| v * v).collect();
    let bb: Vec<f64> = b.iter().map(|v| v * v).collect();
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    let m_aa = filter2(&aa, rows, cols, &k);
    let m_bb = filter2(&bb, rows, cols, &k);
    let m_ab = filter2(&ab, rows, cols, &k);
    let mut total = 0.0;
    for i in 0..rows * cols {
        let var_a = m_aa[i] - mu_a[i] * mu_a[i];
        let var_b = m_bb[i] - mu_b[i] * mu_b[i];
        let cov = m_ab[i] - mu_a[i] * mu_b[i];
        let num = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
        let den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (var_a + var_b + c2);
        total += num / den;
    }
    total / (rows * cols) as f64
}

/// Mean structural similarity between two pure `H x W x T` stacks on the
/// `[0, 255]` scale: SSIM with an 11x11 Gaussian window (sigma 1.5), averaged
/// over the three imaginary channels and all frames.
pub fn ssim(truth: &QTensor, estimate: &QTensor) -> Result<f64> {
    if truth.shape() != estimate.shape() {
        return Err(QtError::ShapeMismatch(format!(
            "ssim shapes {:?} vs {:?}",
            truth.shape(),
            estimate.shape()
        )));
    }
    if truth.order() != 3 {
        return Err(QtError::ShapeMismatch(format!(
            "ssim expects an order-3 stack, got {:?}",
            truth.shape()
        )));
    }
    let (h, w, t) = (truth.shape()[0], truth.shape()[1], truth.shape()[2]);
    if h < SSIM_WINDOW || w < SSIM_WINDOW {
        return Err(QtError::TooSmall(format!(
            "ssim needs frames of at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {h}x{w}"
        )));
    }
    let frame = h * w;
    let mut total = 0.0;
    for f in 0..t {
        let off = f * frame;
        for (pa, pb) in [
            (&truth.comp_x, &estimate.comp_x),
            (&truth.comp_y, &estimate.comp_y),
            (&truth.comp_z, &estimate.comp_z),
        ] {
            total += ssim_channel(&pa[off..off + frame], &pb[off..off + frame], h, w);
        }
    }
    Ok(total / (3 * t) as f64)
}

/// One row of a per-frame metrics report.
#[derive(Debug, Clone)]
pub struct MetricRow {
    pub frame: usize,
    pub psnr_db: f64,
    pub ssim: f64,
    pub method: String,
    pub seconds: f64,
}

/// Render metric rows as CSV with a fixed header and `{:.6}` formatting, so
/// identical inputs produce byte-identical output.
pub fn metrics_csv(rows: &[MetricRow]) -> String {
    let mut out = String::from("frame,psnr_db,ssim,method,seconds\n");
    for r in rows {
        out.push_str(&format!(
            "{},{:.6},{:.6},{},{:.6}\n",
            r.frame, r.psnr_db, r.ssim, r.method, r.seconds
        ));
    }
    out
}

/// Per-frame PSNR/SSIM rows for a reconstructed stack.
pub fn per_frame_metrics(
    truth: &QTensor,
    estimate: &QTensor,
    method: &str,
    seconds: f64,
) -> Result<Vec<MetricRow>> {
    if truth.shape() != estimate.shape() || truth.order() != 3 {
        return Err(QtError::ShapeMismatch(format!(
            "per-frame metrics over {:?} vs {:?}",
            truth.shape(),
            estimate.shape()
        )));
    }
    let (h, w, t) = (truth.shape()[0], truth.shape()[1], truth.shape()[2]);
    let mut rows = Vec::with_capacity(t);
    for f in 0..t {
        let tf = frame_slice(truth, f, h, w);
        let ef = frame_slice(estimate, f, h, w);
        rows.push(MetricRow {
            frame: f,
            psnr_db: psnr(&tf, &ef)?,
            ssim: ssim(&tf, &ef)?,
            method: method.to_string(),
            seconds,
        });
    }
    Ok(rows)
}

fn frame_slice(t: &QTensor, f: usize, h: usize, w: usize) -> QTensor {
    let off = f * h * w;
    QTensor::from_components(
        &[h, w, 1],
        t.comp_w[off..off + h * w].to_vec(),
        t.comp_x[off..off + h * w].to_vec(),
        t.comp_y[off..off + h * w].to_vec(),
        t.comp_z[off..off + h * w].to_vec(),
    )
    .expect("frame slice shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quaternion;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_stack(shape: &[usize], seed: u64, scale: f64) -> QTensor {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = QTensor::zeros(shape);
        for i in 0..t.len() {
            t.set_linear(
                i,
                Quaternion::new(
                    0.0,
                    rng.gen_range(0.0..scale),
                    rng.gen_range(0.0..scale),
                    rng.gen_range(0.0..scale),
                ),
            );
        }
        t
    }

    #[test]
    fn psnr_exact_match_is_infinite() {
        let t = random_stack(&[16, 16, 2], 1, 255.0);
        assert_eq!(psnr(&t, &t).unwrap(), f64::INFINITY);
    }

    #[test]
    fn psnr_known_value() {
        // truth all 100i, estimate all 90i: peak 100, per-entry err 10
        let shape = [8, 8, 2];
        let n: usize = shape.iter().product();
        let mut truth = QTensor::zeros(&shape);
        let mut est = QTensor::zeros(&shape);
        for i in 0..n {
            truth.set_linear(i, Quaternion::I.scale(100.0));
            est.set_linear(i, Quaternion::I.scale(90.0));
        }
        // 10 log10(n * 100^2 / (n * 10^2)) = 20
        assert_abs_diff_eq!(psnr(&truth, &est).unwrap(), 20.0, epsilon = 1e-12);
    }

    #[test]
    fn psnr_decreases_with_noise() {
        let t = random_stack(&[16, 16, 2], 2, 255.0);
        let small = t.add(&random_stack(t.shape(), 3, 1.0)).unwrap();
        let large = t.add(&random_stack(t.shape(), 3, 20.0)).unwrap();
        assert!(psnr(&t, &small).unwrap() > psnr(&t, &large).unwrap());
    }

    #[test]
    fn ssim_self_is_one() {
        let t = random_stack(&[24, 20, 2], 4, 255.0);
        assert_abs_diff_eq!(ssim(&t, &t).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ssim_bounded_and_ordered() {
        let t = random_stack(&[24, 20, 2], 5, 255.0);
        let small = t.add(&random_stack(t.shape(), 6, 5.0)).unwrap();
        let large = t.add(&random_stack(t.shape(), 6, 80.0)).unwrap();
        let s_small = ssim(&t, &small).unwrap();
        let s_large = ssim(&t, &large).unwrap();
        assert!(s_small <= 1.0 + 1e-12 && s_large <= 1.0 + 1e-12);
        assert!(s_small > s_large);
    }

    #[test]
    fn ssim_matches_direct_convolution_oracle() {
        // independent nested-loop implementation on a single channel
        let rows = 16;
        let cols = 14;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a: Vec<f64> = (0..rows * cols).map(|_| rng.gen_range(0.0..255.0)).collect();
        let b: Vec<f64> = a
            .iter()
            .map(|v| (v + rng.gen_range(-20.0..20.0)).clamp(0.0, 255.0))
            .collect();
        let k1 = gaussian_kernel();
        let mut k2 = vec![vec![0.0; SSIM_WINDOW]; SSIM_WINDOW];
        for i in 0..SSIM_WINDOW {
            for j in 0..SSIM_WINDOW {
                k2[i][j] = k1[i] * k1[j];
            }
        }
        let conv = |img: &[f64], r0: usize, c0: usize| {
            let half = SSIM_WINDOW as isize / 2;
            let mut acc = 0.0;
            let mut w = 0.0;
            for i in 0..SSIM_WINDOW {
                for j in 0..SSIM_WINDOW {
                    let rr = r0 as isize + i as isize - half;
                    let cc = c0 as isize + j as isize - half;
                    if rr >= 0 && cc >= 0 && (rr as usize) < rows && (cc as usize) < cols {
                        acc += k2[i][j] * img[rr as usize + cc as usize * rows];
                        w += k2[i][j];
                    }
                }
            }
            acc / w
        };
        let c1 = (SSIM_K1 * SSIM_L) * (SSIM_K1 * SSIM_L);
        let c2c = (SSIM_K2 * SSIM_L) * (SSIM_K2 * SSIM_L);
        let aa: Vec<f64> = a.iter().map(|v| v * v).collect();
        let bb: Vec<f64> = b.iter().map(|v| v * v).collect();
        let ab: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let mut expect = 0.0;
        for c in 0..cols {
            for r in 0..rows {
                let ma = conv(&a, r, c);
                let mb = conv(&b, r, c);
                let va = conv(&aa, r, c) - ma * ma;
                let vb = conv(&bb, r, c) - mb * mb;
                let cov = conv(&ab, r, c) - ma * mb;
                expect += (2.0 * ma * mb + c1) * (2.0 * cov + c2c)
                    / ((ma * ma + mb * mb + c1) * (va + vb + c2c));
            }
        }
        expect /= (rows * cols) as f64;
        let got = ssim_channel(&a, &b, rows, cols);
        assert_abs_diff_eq!(got, expect, epsilon = 1e-10);
    }

    #[test]
    fn too_small_frames_rejected() {
        let t = random_stack(&[8, 8, 1], 8, 255.0);
        assert!(matches!(ssim(&t, &t), Err(crate::QtError::TooSmall(_))));
    }

    #[test]
    fn csv_shape() {
        let rows = vec![MetricRow {
            frame: 0,
            psnr_db: 31.25,
            ssim: 0.95,
            method: "geman".into(),
            seconds: 0.0,
        }];
        let csv = metrics_csv(&rows);
        assert_eq!(
            csv,
            "frame,psnr_db,ssim,method,seconds\n0,31.250000,0.950000,geman,0.000000\n"
        );
    }
}
