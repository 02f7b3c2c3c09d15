//! Binary quaternion tensor file format.
//!
//! Layout: magic `QTEN1` (5 bytes), `u8` order N, N little-endian `u64`
//! extents, then the four component planes (w, x, y, z) as contiguous
//! little-endian `f64` arrays of length `prod(extents)` each, column-major.
//! Roundtrips are bit-exact.

use crate::error::{QtError, Result};
use crate::tensor::QTensor;
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 5] = b"QTEN1";

pub fn write_qten(t: &QTensor, path: &Path) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&[t.order() as u8])?;
    for &e in t.shape() {
        w.write_all(&(e as u64).to_le_bytes())?;
    }
    for plane in [&t.comp_w, &t.comp_x, &t.comp_y, &t.comp_z] {
        for &v in plane.iter() {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_qten(path: &Path) -> Result<QTensor> {
    let bad = |reason: String| QtError::UnreadableFile {
        path: path.display().to_string(),
        reason,
    };
    let mut r = std::io::BufReader::new(
        std::fs::File::open(path).map_err(|e| bad(e.to_string()))?,
    );
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic).map_err(|e| bad(e.to_string()))?;
    if &magic != MAGIC {
        return Err(bad("bad magic".into()));
    }
    let mut order = [0u8; 1];
    r.read_exact(&mut order).map_err(|e| bad(e.to_string()))?;
    let order = order[0] as usize;
    if order == 0 {
        return Err(bad("zero tensor order".into()));
    }
    let mut shape = Vec::with_capacity(order);
    for _ in 0..order {
        let mut b = [0u8; 8];
        r.read_exact(&mut b).map_err(|e| bad(e.to_string()))?;
        shape.push(u64::from_le_bytes(b) as usize);
    }
    let n: usize = shape.iter().product();
    let mut read_plane = || -> Result<Vec<f64>> {
        let mut bytes = vec![0u8; n * 8];
        r.read_exact(&mut bytes).map_err(|e| bad(e.to_string()))?;
        Ok(bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    };
    let (w, x, y, z) = (read_plane()?, read_plane()?, read_plane()?, read_plane()?);
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing).map_err(|e| bad(e.to_string()))? != 0 {
        return Err(bad("trailing bytes after tensor data".into()));
    }
    QTensor::from_components(&shape, w, x, y, z)
}
