//! Quaternion scalar arithmetic.
//!
//! A quaternion `q = w + x i + y j + z k` with real coefficients and the
//! Hamilton rules `i^2 = j^2 = k^2 = -1`, `ij = -ji = k`, `jk = -kj = i`,
//! `ki = -ik = j`. Multiplication is associative but not commutative.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// Conjugate: negates the three imaginary coefficients.
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Modulus `sqrt(w^2 + x^2 + y^2 + z^2)`.
    pub fn modulus(self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn modulus_sq(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn is_pure(self) -> bool {
        self.w == 0.0
    }

    /// Cayley-Dickson form `q = a + b j` with complex `a = w + x i`,
    /// `b = y + z i`.
    pub fn cayley_dickson(self) -> (Complex64, Complex64) {
        (
            Complex64::new(self.w, self.x),
            Complex64::new(self.y, self.z),
        )
    }

    pub fn from_cayley_dickson(a: Complex64, b: Complex64) -> Self {
        Self::new(a.re, a.im, b.re, b.im)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Unit-modulus direction `q / |q|`, or zero for the zero quaternion.
    pub fn sign(self) -> Self {
        let m = self.modulus();
        if m == 0.0 {
            Self::ZERO
        } else {
            self.scale(1.0 / m)
        }
    }
}

/// Hamilton product.
pub fn qmul(a: Quaternion, b: Quaternion) -> Quaternion {
    Quaternion::new(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        qmul(self, rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w + rhs.w, self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w - rhs.w, self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn hamilton_table() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::I, -Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::K, Quaternion::I);
        assert_eq!(Quaternion::K * Quaternion::I, Quaternion::J);
        assert_eq!(Quaternion::I * Quaternion::I, -Quaternion::ONE);
        assert_eq!(Quaternion::J * Quaternion::J, -Quaternion::ONE);
        assert_eq!(Quaternion::K * Quaternion::K, -Quaternion::ONE);
    }

    #[test]
    fn conjugate_pair_product() {
        let a = Quaternion::ONE + Quaternion::I;
        let b = a.conj();
        assert_eq!(a * b, Quaternion::real(2.0));
    }

    #[test]
    fn conj_and_modulus() {
        let q = Quaternion::new(1.0, 1.0, 1.0, 1.0);
        assert_eq!(q.conj(), Quaternion::new(1.0, -1.0, -1.0, -1.0));
        assert_eq!(q.conj().conj(), q);
        assert_eq!(q.modulus(), 2.0);
        assert_eq!(Quaternion::ZERO.modulus(), 0.0);
        assert_eq!(q.conj().modulus(), q.modulus());
    }

    #[test]
    fn q_times_conj_is_real_modulus_sq() {
        let q = Quaternion::new(0.3, -1.2, 0.7, 2.0);
        let p = q * q.conj();
        assert_abs_diff_eq!(p.w, q.modulus_sq(), epsilon = 1e-12);
        assert_abs_diff_eq!(p.x, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.z, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn cayley_dickson_basis() {
        let (a, b) = Quaternion::J.cayley_dickson();
        assert_eq!(a, Complex64::new(0.0, 0.0));
        assert_eq!(b, Complex64::new(1.0, 0.0));
        let (a, b) = (Quaternion::ONE + Quaternion::I).cayley_dickson();
        assert_eq!(a, Complex64::new(1.0, 1.0));
        assert_eq!(b, Complex64::new(0.0, 0.0));
    }

    fn arb_quat() -> impl Strategy<Value = Quaternion> {
        (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64)
            .prop_map(|(w, x, y, z)| Quaternion::new(w, x, y, z))
    }

    proptest! {
        #[test]
        fn associativity(a in arb_quat(), b in arb_quat(), c in arb_quat()) {
            let lhs = (a * b) * c;
            let rhs = a * (b * c);
            prop_assert!((lhs - rhs).modulus() <= 1e-11 * (1.0 + lhs.modulus()));
        }

        #[test]
        fn modulus_multiplicative(a in arb_quat(), b in arb_quat()) {
            let lhs = (a * b).modulus();
            let rhs = a.modulus() * b.modulus();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
        }

        #[test]
        fn cayley_dickson_roundtrip(q in arb_quat()) {
            let (a, b) = q.cayley_dickson();
            prop_assert_eq!(Quaternion::from_cayley_dickson(a, b), q);
        }
    }
}
