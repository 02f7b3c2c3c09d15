//! PNG frame directories as pure quaternion `H x W x T` stacks.
//!
//! A pixel `(R, G, B)` becomes the pure quaternion `R i + G j + B k` with
//! channel values promoted to `f64` in `[0, 255]`.

use crate::error::{QtError, Result};
use crate::tensor::QTensor;
use std::path::{Path, PathBuf};

/// Sorted list of the PNG files in a directory (lexicographic by file name).
fn png_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| QtError::UnreadableFile {
            path: dir.display().to_string(),
            reason: e.to_string(),
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .map(|x| x.eq_ignore_ascii_case("png"))
                .unwrap_or(false)
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(QtError::UnreadableFile {
            path: dir.display().to_string(),
            reason: "no .png files found".into(),
        });
    }
    Ok(files)
}

/// Load a directory of same-sized PNG frames into a pure quaternion tensor,
/// frames ordered lexicographically by file name.
pub fn ingest_frames(dir: &Path) -> Result<QTensor> {
    let files = png_files(dir)?;
    let mut out: Option<QTensor> = None;
    let (mut h, mut w) = (0usize, 0usize);
    for (f, path) in files.iter().enumerate() {
        let img = image::open(path)
            .map_err(|e| QtError::UnreadableFile {
                path: path.display().to_string(),
                reason: e.to_string(),
            })?
            .to_rgb8();
        let (iw, ih) = (img.width() as usize, img.height() as usize);
        let t = match &mut out {
            None => {
                h = ih;
                w = iw;
                out = Some(QTensor::zeros(&[h, w, files.len()]));
                out.as_mut().unwrap()
            }
            Some(t) => {
                if ih != h || iw != w {
                    return Err(QtError::MixedDimensions(format!(
                        "frame {} is {ih}x{iw}, expected {h}x{w}",
                        path.display()
                    )));
                }
                t
            }
        };
        let base = f * h * w;
        for (x, y, px) in img.enumerate_pixels() {
            let idx = base + y as usize + x as usize * h;
            t.comp_x[idx] = px[0] as f64;
            t.comp_y[idx] = px[1] as f64;
            t.comp_z[idx] = px[2] as f64;
        }
    }
    Ok(out.expect("at least one frame"))
}

/// Write a pure `H x W x T` stack as `frame_000.png`, `frame_001.png`, ...
/// Channel values are clamped to `[0, 255]` and rounded to the nearest integer.
pub fn export_frames(t: &QTensor, dir: &Path) -> Result<()> {
    if t.order() != 3 {
        return Err(QtError::ShapeMismatch(format!(
            "export_frames needs an order-3 stack, got {:?}",
            t.shape()
        )));
    }
    let (h, w, frames) = (t.shape()[0], t.shape()[1], t.shape()[2]);
    std::fs::create_dir_all(dir)?;
    let to_u8 = |v: f64| v.clamp(0.0, 255.0).round() as u8;
    for f in 0..frames {
        let base = f * h * w;
        let img = image::RgbImage::from_fn(w as u32, h as u32, |x, y| {
            let idx = base + y as usize + x as usize * h;
            image::Rgb([
                to_u8(t.comp_x[idx]),
                to_u8(t.comp_y[idx]),
                to_u8(t.comp_z[idx]),
            ])
        });
        img.save(dir.join(format!("frame_{f:03}.png")))
            .map_err(|e| QtError::UnreadableFile {
                path: dir.display().to_string(),
                reason: e.to_string(),
            })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn black_frame_is_zero_tensor() {
        let dir = tempfile::tempdir().unwrap();
        image::RgbImage::new(6, 4)
            .save(dir.path().join("a.png"))
            .unwrap();
        let t = ingest_frames(dir.path()).unwrap();
        assert_eq!(t.shape(), &[4, 6, 1]);
        assert_eq!(t.fro_norm(), 0.0);
    }

    #[test]
    fn pure_red_frame_fills_comp_x() {
        let dir = tempfile::tempdir().unwrap();
        image::RgbImage::from_pixel(5, 3, image::Rgb([255, 0, 0]))
            .save(dir.path().join("a.png"))
            .unwrap();
        let t = ingest_frames(dir.path()).unwrap();
        assert!(t.comp_x.iter().all(|&v| v == 255.0));
        assert!(t.comp_y.iter().all(|&v| v == 0.0));
        assert!(t.comp_z.iter().all(|&v| v == 0.0));
        assert!(t.comp_w.iter().all(|&v| v == 0.0));
        assert!(t.is_pure());
    }

    #[test]
    fn roundtrip_is_exact_on_integer_pixels() {
        let dir_in = tempfile::tempdir().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for f in 0..3 {
            let img = image::RgbImage::from_fn(7, 5, |_, _| {
                image::Rgb([rng.gen(), rng.gen(), rng.gen()])
            });
            img.save(dir_in.path().join(format!("f{f}.png"))).unwrap();
        }
        let t = ingest_frames(dir_in.path()).unwrap();
        assert_eq!(t.shape(), &[5, 7, 3]);
        let dir_out = tempfile::tempdir().unwrap();
        export_frames(&t, dir_out.path()).unwrap();
        let back = ingest_frames(dir_out.path()).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn lexicographic_frame_order() {
        let dir = tempfile::tempdir().unwrap();
        for (name, r) in [("b.png", 20u8), ("a.png", 10), ("c.png", 30)] {
            image::RgbImage::from_pixel(2, 2, image::Rgb([r, 0, 0]))
                .save(dir.path().join(name))
                .unwrap();
        }
        let t = ingest_frames(dir.path()).unwrap();
        assert_eq!(t.comp_x[0], 10.0);
        assert_eq!(t.comp_x[4], 20.0);
        assert_eq!(t.comp_x[8], 30.0);
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let dir = tempfile::tempdir().unwrap();
        image::RgbImage::new(4, 4)
            .save(dir.path().join("a.png"))
            .unwrap();
        image::RgbImage::new(5, 4)
            .save(dir.path().join("b.png"))
            .unwrap();
        assert!(matches!(
            ingest_frames(dir.path()),
            Err(QtError::MixedDimensions(_))
        ));
    }

    #[test]
    fn empty_directory_rejected() {
        let dir = tempfile::tempdir().unwrap();
        assert!(ingest_frames(dir.path()).is_err());
    }
}
