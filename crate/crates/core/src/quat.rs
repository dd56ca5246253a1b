//! Real quaternions `a + bi + cj + dk` and their similarity classes.
//!
//! Two quaternions are similar (`p = u⁻¹qu` for some nonzero `u`) exactly when
//! they share the real part and the length of the imaginary part. Each class
//! meets the complex line `ℂ = ℝ + ℝi` in `a ± ri`; the representative with
//! `r ≥ 0` is the canonical one used throughout the crate.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Imaginary parts shorter than this (relative to `1 + |q|`) count as zero.
pub const REAL_AXIS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion { a: 0.0, b: 0.0, c: 0.0, d: 0.0 };
    pub const ONE: Quaternion = Quaternion { a: 1.0, b: 0.0, c: 0.0, d: 0.0 };
    pub const I: Quaternion = Quaternion { a: 0.0, b: 1.0, c: 0.0, d: 0.0 };
    pub const J: Quaternion = Quaternion { a: 0.0, b: 0.0, c: 1.0, d: 0.0 };
    pub const K: Quaternion = Quaternion { a: 0.0, b: 0.0, c: 0.0, d: 1.0 };

    /// Panics on non-finite components; use [`Quaternion::try_new`] for untrusted input.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::try_new(a, b, c, d).expect("quaternion components must be finite")
    }

    pub fn try_new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite() {
            Ok(Self { a, b, c, d })
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn real(a: f64) -> Self {
        Self::new(a, 0.0, 0.0, 0.0)
    }

    /// The embedding `ℂ → ℍ`, `x + yi ↦ x + yi + 0j + 0k`.
    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.re, z.im, 0.0, 0.0)
    }

    /// Builds `x + y·j` from two complex numbers, the coordinate convention
    /// shared by the complex adjoint.
    pub fn from_pair(x: Complex64, y: Complex64) -> Self {
        Self::new(x.re, x.im, y.re, y.im)
    }

    /// Splits `q = x + y·j` into `(x, y)`.
    pub fn to_pair(self) -> (Complex64, Complex64) {
        (Complex64::new(self.a, self.b), Complex64::new(self.c, self.d))
    }

    /// The complex part `a + bi`.
    pub fn complex_part(self) -> Complex64 {
        Complex64::new(self.a, self.b)
    }

    pub fn conj(self) -> Self {
        Self { a: self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn norm_sqr(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn imag_norm(self) -> f64 {
        (self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self { a: self.a * s, b: self.b * s, c: self.c * s, d: self.d * s }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0.0 && self.b == 0.0 && self.c == 0.0 && self.d == 0.0
    }

    pub fn inv(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroDivision);
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    /// Complex representative `a + ri` of the similarity class, `r = |Im q| ≥ 0`.
    pub fn canonical_rep(self) -> Complex64 {
        let r = self.imag_norm();
        if r < REAL_AXIS_TOL * (1.0 + self.norm()) {
            Complex64::new(self.a, 0.0)
        } else {
            Complex64::new(self.a, r)
        }
    }

    /// A unit quaternion `p` with `p⁻¹ q p = canonical_rep(q)`.
    ///
    /// The unit imaginary direction `u` of `q` is carried onto `i` by the
    /// half-angle rotor `p ∝ 1 − u·i`; the antipodal direction `u = −i`
    /// uses `p = j`.
    pub fn similarity_witness(self) -> Self {
        let r = self.imag_norm();
        if r < REAL_AXIS_TOL * (1.0 + self.norm()) {
            return Self::ONE;
        }
        let (ub, uc, ud) = (self.b / r, self.c / r, self.d / r);
        let w = 1.0 + ub;
        if w < 1e-12 {
            return Self::J;
        }
        // 1 − u·i = (1 + u_b) − u_d j + u_c k
        let p = Self::new(w, 0.0, -ud, uc);
        p.scale(1.0 / p.norm())
    }

    pub fn max_abs_component(self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }
}

/// True iff `p` and `q` lie in the same similarity class up to `tol`.
pub fn is_similar(p: Quaternion, q: Quaternion, tol: f64) -> bool {
    (p.a - q.a).abs() <= tol && (p.imag_norm() - q.imag_norm()).abs() <= tol
}

impl From<f64> for Quaternion {
    fn from(a: f64) -> Self {
        Self::real(a)
    }
}

impl From<Complex64> for Quaternion {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { a: self.a + o.a, b: self.b + o.b, c: self.c + o.c, d: self.d + o.d }
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { a: self.a - o.a, b: self.b - o.b, c: self.c - o.c, d: self.d - o.d }
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a1, b1, c1, d1) = (self.a, self.b, self.c, self.d);
        let (a2, b2, c2, d2) = (o.a, o.b, o.c, o.d);
        Self {
            a: a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            b: a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            c: a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            d: a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        }
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        self.scale(1.0 / s)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(4);
        write!(
            f,
            "{:.p$}{:+.p$}i{:+.p$}j{:+.p$}k",
            self.a,
            self.b,
            self.c,
            self.d,
            p = prec
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(p: Quaternion, q: Quaternion, tol: f64) -> bool {
        (p - q).norm() <= tol
    }

    #[test]
    fn multiplication_table() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
        assert_eq!(i * i, Quaternion::real(-1.0));
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(q * Quaternion::ONE, q);
    }

    #[test]
    fn complex_times_j_is_j_times_conjugate() {
        let z = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(z * Quaternion::J, Quaternion::new(0.0, 0.0, 1.0, 1.0));
        assert_eq!(z * Quaternion::J, Quaternion::J * z.conj());
    }

    #[test]
    fn inverses() {
        assert_eq!(Quaternion::I.inv().unwrap(), -Quaternion::I);
        let q = Quaternion::new(1.0, 1.0, 1.0, 1.0);
        assert!(close(q.inv().unwrap(), Quaternion::new(0.25, -0.25, -0.25, -0.25), 1e-15));
        assert_eq!(Quaternion::real(2.0).inv().unwrap(), Quaternion::real(0.5));
        assert!(matches!(Quaternion::ZERO.inv(), Err(Error::ZeroDivision)));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Quaternion::try_new(f64::NAN, 0.0, 0.0, 0.0).is_err());
        assert!(Quaternion::try_new(0.0, f64::INFINITY, 0.0, 0.0).is_err());
    }

    #[test]
    fn canonical_representatives() {
        assert_eq!(Quaternion::J.canonical_rep(), Complex64::new(0.0, 1.0));
        let z = Quaternion::new(1.0, 1.0, 1.0, 1.0).canonical_rep();
        assert!((z - Complex64::new(1.0, 3f64.sqrt())).norm() < 1e-15);
        assert_eq!(Quaternion::real(5.0).canonical_rep(), Complex64::new(5.0, 0.0));
    }

    #[test]
    fn witnesses() {
        let p = Quaternion::J.similarity_witness();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(p, Quaternion::new(s, 0.0, 0.0, s), 1e-15));
        assert!(close(p.inv().unwrap() * Quaternion::J * p, Quaternion::I, 1e-15));

        assert_eq!(Quaternion::I.similarity_witness(), Quaternion::ONE);

        let m = -Quaternion::I;
        let p = m.similarity_witness();
        assert!(close(p.inv().unwrap() * m * p, Quaternion::I, 1e-15));
    }

    #[test]
    fn similarity_predicate() {
        assert!(is_similar(Quaternion::I, Quaternion::J, 1e-12));
        assert!(is_similar(Quaternion::I, -Quaternion::I, 1e-12));
        assert!(!is_similar(
            Quaternion::new(1.0, 1.0, 0.0, 0.0),
            Quaternion::new(2.0, 1.0, 0.0, 0.0),
            1e-12
        ));
    }

    fn quat() -> impl Strategy<Value = Quaternion> {
        (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64)
            .prop_map(|(a, b, c, d)| Quaternion::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn conjugation_preserves_class(q in quat(), p in quat()) {
            prop_assume!(p.norm() > 1e-3);
            let r = p.inv().unwrap() * q * p;
            prop_assert!(is_similar(q, r, 1e-9 * (1.0 + q.norm())));
            let u = p.scale(1.0 / p.norm());
            let r = u.conj() * q * u;
            prop_assert!((r.canonical_rep() - q.canonical_rep()).norm() <= 1e-9);
        }

        #[test]
        fn witness_lands_on_canonical_rep(q in quat()) {
            let p = q.similarity_witness();
            prop_assert!((p.norm() - 1.0).abs() < 1e-12);
            let r = p.conj() * q * p;
            let z = q.canonical_rep();
            prop_assert!(close(r, Quaternion::from_complex(z), 1e-9 * (1.0 + q.norm())));
        }

        #[test]
        fn norm_and_conjugate_are_multiplicative(p in quat(), q in quat()) {
            prop_assert!(close((p * q).conj(), q.conj() * p.conj(), 1e-12 * (1.0 + p.norm() * q.norm())));
            let lhs = (p * q).norm();
            prop_assert!((lhs - p.norm() * q.norm()).abs() <= 1e-12 * (1.0 + lhs));
            let qq = q * q.conj();
            prop_assert!(qq.imag_norm() <= 1e-12 * (1.0 + qq.a));
            prop_assert!((qq.a - q.norm_sqr()).abs() <= 1e-12 * (1.0 + qq.a));
        }

        #[test]
        fn associative(p in quat(), q in quat(), r in quat()) {
            prop_assert!(close((p * q) * r, p * (q * r), 1e-10));
        }

        #[test]
        fn complex_roundtrip(x in -5.0..5.0f64, y in -5.0..5.0f64) {
            let z = Complex64::new(x, y);
            prop_assert_eq!(Quaternion::from_complex(z).complex_part(), z);
        }
    }
}
