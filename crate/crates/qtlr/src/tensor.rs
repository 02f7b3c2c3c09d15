//! Order-N quaternion tensor storage and elementwise operations.
//!
//! A [`QTensor`] stores the four real component planes as separate arrays
//! (structure-of-arrays) in column-major linearization: the first index is
//! the fastest-varying one. [`QMatrix`] wraps the order-2 case.

use crate::error::{QtError, Result};
use crate::quat::{qmul, Quaternion};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct QTensor {
    shape: Vec<usize>,
    pub comp_w: Vec<f64>,
    pub comp_x: Vec<f64>,
    pub comp_y: Vec<f64>,
    pub comp_z: Vec<f64>,
}

impl QTensor {
    pub fn zeros(shape: &[usize]) -> Self {
        assert!(!shape.is_empty() && shape.iter().all(|&e| e > 0));
        let len: usize = shape.iter().product();
        Self {
            shape: shape.to_vec(),
            comp_w: vec![0.0; len],
            comp_x: vec![0.0; len],
            comp_y: vec![0.0; len],
            comp_z: vec![0.0; len],
        }
    }

    pub fn from_components(
        shape: &[usize],
        comp_w: Vec<f64>,
        comp_x: Vec<f64>,
        comp_y: Vec<f64>,
        comp_z: Vec<f64>,
    ) -> Result<Self> {
        let len: usize = shape.iter().product();
        if [&comp_w, &comp_x, &comp_y, &comp_z]
            .iter()
            .any(|c| c.len() != len)
        {
            return Err(QtError::ShapeMismatch(format!(
                "component arrays must all have length {len}"
            )));
        }
        Ok(Self {
            shape: shape.to_vec(),
            comp_w,
            comp_x,
            comp_y,
            comp_z,
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.comp_w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comp_w.is_empty()
    }

    /// Column-major strides: `stride[l] = prod(shape[..l])`.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = Vec::with_capacity(self.shape.len());
        let mut acc = 1;
        for &e in &self.shape {
            s.push(acc);
            acc *= e;
        }
        s
    }

    pub fn get_linear(&self, idx: usize) -> Quaternion {
        Quaternion::new(
            self.comp_w[idx],
            self.comp_x[idx],
            self.comp_y[idx],
            self.comp_z[idx],
        )
    }

    pub fn set_linear(&mut self, idx: usize, q: Quaternion) {
        self.comp_w[idx] = q.w;
        self.comp_x[idx] = q.x;
        self.comp_y[idx] = q.y;
        self.comp_z[idx] = q.z;
    }

    pub fn linear_index(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.shape.len());
        let mut idx = 0;
        let mut stride = 1;
        for (l, &i) in multi.iter().enumerate() {
            debug_assert!(i < self.shape[l]);
            idx += i * stride;
            stride *= self.shape[l];
        }
        idx
    }

    pub fn get(&self, multi: &[usize]) -> Quaternion {
        self.get_linear(self.linear_index(multi))
    }

    pub fn set(&mut self, multi: &[usize], q: Quaternion) {
        let idx = self.linear_index(multi);
        self.set_linear(idx, q);
    }

    /// True iff the real component plane is all zeros.
    pub fn is_pure(&self) -> bool {
        self.comp_w.iter().all(|&v| v == 0.0)
    }

    fn check_same_shape(&self, other: &QTensor) -> Result<()> {
        if self.shape != other.shape {
            return Err(QtError::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &QTensor) -> Result<QTensor> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &QTensor) -> Result<QTensor> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    /// Entrywise Hamilton product.
    pub fn hadamard(&self, other: &QTensor) -> Result<QTensor> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, qmul))
    }

    pub fn scale_real(&self, s: f64) -> QTensor {
        self.map(|q| q.scale(s))
    }

    /// Left-multiplies every entry by `s` (the side matters).
    pub fn scale_quat_left(&self, s: Quaternion) -> QTensor {
        self.map(|q| qmul(s, q))
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> QTensor {
        let mut out = QTensor::zeros(&self.shape);
        for i in 0..self.len() {
            out.set_linear(i, f(self.get_linear(i)));
        }
        out
    }

    fn zip(&self, other: &QTensor, f: impl Fn(Quaternion, Quaternion) -> Quaternion) -> QTensor {
        let mut out = QTensor::zeros(&self.shape);
        for i in 0..self.len() {
            out.set_linear(i, f(self.get_linear(i), other.get_linear(i)));
        }
        out
    }

    /// Right inner product `sum conj(a) * b`; the left argument is conjugated.
    pub fn inner(&self, other: &QTensor) -> Result<Quaternion> {
        self.check_same_shape(other)?;
        let mut acc = Quaternion::ZERO;
        for i in 0..self.len() {
            acc = acc + qmul(self.get_linear(i).conj(), other.get_linear(i));
        }
        Ok(acc)
    }

    /// Frobenius norm `sqrt(sum |q|^2)`.
    pub fn fro_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.len() {
            acc += self.get_linear(i).modulus_sq();
        }
        acc.sqrt()
    }

    /// Maximum entry modulus.
    pub fn linf_norm(&self) -> f64 {
        (0..self.len())
            .map(|i| self.get_linear(i).modulus())
            .fold(0.0, f64::max)
    }

    /// Entrywise L1 norm `sum |q|`.
    pub fn l1_norm(&self) -> f64 {
        (0..self.len()).map(|i| self.get_linear(i).modulus()).sum()
    }

    /// Cayley-Dickson split: `Q = Q_a + Q_b j` with complex planes
    /// `Q_a = w + x i`, `Q_b = y + z i`.
    pub fn cayley_dickson_split(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let qa = self
            .comp_w
            .iter()
            .zip(&self.comp_x)
            .map(|(&w, &x)| Complex64::new(w, x))
            .collect();
        let qb = self
            .comp_y
            .iter()
            .zip(&self.comp_z)
            .map(|(&y, &z)| Complex64::new(y, z))
            .collect();
        (qa, qb)
    }

    pub fn cayley_dickson_join(shape: &[usize], qa: &[Complex64], qb: &[Complex64]) -> Result<Self> {
        let len: usize = shape.iter().product();
        if qa.len() != len || qb.len() != len {
            return Err(QtError::ShapeMismatch(format!(
                "complex arrays must have length {len}"
            )));
        }
        Ok(Self {
            shape: shape.to_vec(),
            comp_w: qa.iter().map(|c| c.re).collect(),
            comp_x: qa.iter().map(|c| c.im).collect(),
            comp_y: qb.iter().map(|c| c.re).collect(),
            comp_z: qb.iter().map(|c| c.im).collect(),
        })
    }

    /// Reinterprets the buffer under a new shape with the same total length.
    pub fn reshaped(&self, shape: &[usize]) -> Result<QTensor> {
        let len: usize = shape.iter().product();
        if len != self.len() {
            return Err(QtError::ShapeMismatch(format!(
                "cannot reshape {:?} to {:?}",
                self.shape, shape
            )));
        }
        let mut out = self.clone();
        out.shape = shape.to_vec();
        Ok(out)
    }
}

/// Quaternion matrix: an order-2 [`QTensor`].
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix(QTensor);

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(QTensor::zeros(&[rows, cols]))
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Quaternion::ONE);
        }
        m
    }

    pub fn from_tensor(t: QTensor) -> Result<Self> {
        if t.order() != 2 {
            return Err(QtError::ShapeMismatch(format!(
                "expected order-2 tensor, got order {}",
                t.order()
            )));
        }
        Ok(Self(t))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.0.shape()[0]
    }

    pub fn cols(&self) -> usize {
        self.0.shape()[1]
    }

    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.0.get_linear(i + j * self.rows())
    }

    pub fn set(&mut self, i: usize, j: usize, q: Quaternion) {
        let idx = i + j * self.rows();
        self.0.set_linear(idx, q);
    }

    pub fn as_tensor(&self) -> &QTensor {
        &self.0
    }

    pub fn into_tensor(self) -> QTensor {
        self.0
    }

    pub fn fro_norm(&self) -> f64 {
        self.0.fro_norm()
    }

    pub fn conj_transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.cols(), self.rows(), |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, other: &QMatrix) -> Result<QMatrix> {
        Ok(QMatrix(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &QMatrix) -> Result<QMatrix> {
        Ok(QMatrix(self.0.sub(&other.0)?))
    }

    pub fn scale_real(&self, s: f64) -> QMatrix {
        QMatrix(self.0.scale_real(s))
    }
}

/// Boolean tensor marking observed entries (`true` = observed).
#[derive(Debug, Clone, PartialEq)]
pub struct MaskTensor {
    shape: Vec<usize>,
    pub data: Vec<bool>,
}

impl MaskTensor {
    pub fn all_true(shape: &[usize]) -> Self {
        let len = shape.iter().product();
        Self {
            shape: shape.to_vec(),
            data: vec![true; len],
        }
    }

    pub fn from_data(shape: &[usize], data: Vec<bool>) -> Result<Self> {
        let len: usize = shape.iter().product();
        if data.len() != len {
            return Err(QtError::ShapeMismatch(format!(
                "mask data length {} does not match shape {:?}",
                data.len(),
                shape
            )));
        }
        Ok(Self {
            shape: shape.to_vec(),
            data,
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn observed_count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn seq_tensor(shape: &[usize]) -> QTensor {
        let mut t = QTensor::zeros(shape);
        for i in 0..t.len() {
            let v = i as f64;
            t.set_linear(i, Quaternion::new(v, v * 0.5, -v, v + 1.0));
        }
        t
    }

    #[test]
    fn add_zero_identity() {
        let a = seq_tensor(&[3, 2, 2]);
        let z = QTensor::zeros(&[3, 2, 2]);
        assert_eq!(a.add(&z).unwrap(), a);
        assert_eq!(a.scale_real(1.0), a);
    }

    #[test]
    fn hadamard_with_ones() {
        let a = seq_tensor(&[2, 3]);
        let mut ones = QTensor::zeros(&[2, 3]);
        for i in 0..ones.len() {
            ones.set_linear(i, Quaternion::ONE);
        }
        assert_eq!(a.hadamard(&ones).unwrap(), a);
    }

    #[test]
    fn shape_mismatch_rejected() {
        let a = QTensor::zeros(&[2, 3]);
        let b = QTensor::zeros(&[3, 2]);
        assert!(matches!(a.add(&b), Err(QtError::ShapeMismatch(_))));
        assert!(matches!(a.inner(&b), Err(QtError::ShapeMismatch(_))));
    }

    #[test]
    fn inner_single_entry() {
        let mut a = QTensor::zeros(&[1]);
        a.set_linear(0, Quaternion::ONE + Quaternion::I);
        let p = a.inner(&a).unwrap();
        assert_eq!(p, Quaternion::real(2.0));
    }

    #[test]
    fn fro_norm_all_unit_entries() {
        let mut a = QTensor::zeros(&[2, 2]);
        for i in 0..4 {
            a.set_linear(i, Quaternion::new(1.0, 1.0, 1.0, 1.0));
        }
        assert_abs_diff_eq!(a.fro_norm(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn fro_norm_equals_component_norms() {
        let a = seq_tensor(&[4, 3, 2]);
        let comp_sq: f64 = [&a.comp_w, &a.comp_x, &a.comp_y, &a.comp_z]
            .iter()
            .map(|c| c.iter().map(|v| v * v).sum::<f64>())
            .sum();
        assert_abs_diff_eq!(a.fro_norm() * a.fro_norm(), comp_sq, epsilon = 1e-9);
    }

    #[test]
    fn inner_conjugate_symmetry() {
        // brute-force on a fixed pseudo-random 3x3 pair
        let a = seq_tensor(&[3, 3]);
        let b = a.map(|q| Quaternion::new(q.x - 1.0, q.w, q.z, -q.y));
        let ab = a.inner(&b).unwrap();
        let ba = b.inner(&a).unwrap();
        assert!((ab - ba.conj()).modulus() < 1e-10);
    }

    #[test]
    fn cayley_dickson_split_basis() {
        let mut t = QTensor::zeros(&[1]);
        t.set_linear(0, Quaternion::J);
        let (qa, qb) = t.cayley_dickson_split();
        assert_eq!(qa[0], Complex64::new(0.0, 0.0));
        assert_eq!(qb[0], Complex64::new(1.0, 0.0));
    }

    proptest! {
        #[test]
        fn cayley_dickson_roundtrip_bitexact(vals in proptest::collection::vec(-100.0..100.0f64, 24)) {
            let t = QTensor::from_components(
                &[2, 3],
                vals[0..6].to_vec(),
                vals[6..12].to_vec(),
                vals[12..18].to_vec(),
                vals[18..24].to_vec(),
            ).unwrap();
            let (qa, qb) = t.cayley_dickson_split();
            let back = QTensor::cayley_dickson_join(&[2, 3], &qa, &qb).unwrap();
            prop_assert_eq!(back, t);
        }
    }

    #[test]
    fn qmatrix_indexing_column_major() {
        let mut m = QMatrix::zeros(2, 3);
        m.set(1, 2, Quaternion::K);
        assert_eq!(m.as_tensor().get_linear(1 + 2 * 2), Quaternion::K);
        assert_eq!(m.get(1, 2), Quaternion::K);
    }
}
