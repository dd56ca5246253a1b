//! Matrix exponential and logarithm over the quaternions.
//!
//! `hexp` works on the complex adjoint; `hlog` goes through the Jordan form
//! and takes the principal logarithm of each block on its canonical
//! eigenvalue, so negative real eigenvalues get a logarithm in `ℂ ⊂ ℍ`.

use num_complex::Complex64;

use crate::cmat::CMatrix;
use crate::error::{Error, Result};
use crate::hmat::HMatrix;
use crate::jcd::{additive_jcd, multiplicative_jcd};
use crate::jordan::jordan_form;
use crate::quat::Quaternion;
use crate::Tolerances;

const TAYLOR_TERMS: usize = 18;

/// `exp` of a complex matrix by scaling and squaring a truncated series.
pub fn cexp(m: &CMatrix) -> CMatrix {
    let norm = m.norm_one();
    let mut squarings = 0;
    while norm / 2f64.powi(squarings) > 0.5 {
        squarings += 1;
    }
    let x = m.scale(Complex64::new(2f64.powi(-squarings), 0.0));
    let n = m.rows();
    let mut term = CMatrix::identity(n);
    let mut sum = CMatrix::identity(n);
    for k in 1..=TAYLOR_TERMS {
        term = (&term * &x).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn hexp(a: &HMatrix) -> HMatrix {
    HMatrix::project_from_adjoint(&cexp(a.complex_adjoint().matrix()))
}

/// A logarithm of an invertible matrix, principal on every Jordan block.
pub fn hlog(a: &HMatrix, tol: &Tolerances) -> Result<HMatrix> {
    let jr = jordan_form(a, tol)?;
    let n = a.n();
    if jr.spec.blocks().iter().any(|b| b.value.norm() <= tol.eig) {
        return Err(Error::Singular);
    }
    let mut log_j = HMatrix::zeros(n);
    let mut start = 0;
    for b in jr.spec.blocks() {
        let lambda = b.value;
        // log(λ + N) = log λ + Σ_t (−1)^{t+1} N^t / (t λ^t)
        let mut diag = vec![Quaternion::from_complex(lambda.ln())];
        let mut inv_pow = Complex64::new(1.0, 0.0);
        for t in 1..b.size {
            inv_pow /= lambda;
            let sign = if t % 2 == 1 { 1.0 } else { -1.0 };
            diag.push(Quaternion::from_complex(inv_pow * (sign / t as f64)));
        }
        for i in 0..b.size {
            for (t, v) in diag.iter().enumerate().take(b.size - i) {
                log_j[(start + i, start + i + t)] = *v;
            }
        }
        start += b.size;
    }
    let pinv = jr.p.hinverse(tol.rank)?;
    let log = &(&jr.p * &log_j) * &pinv;
    let residual = (&hexp(&log) - a).norm_max();
    let bound = tol.residual * (1.0 + a.norm_max());
    if !(residual <= bound) {
        return Err(Error::VerificationFailed { what: "exp(log A) = A", residual, bound });
    }
    Ok(log)
}

/// Compares `exp` of the additive parts of `A` with the multiplicative parts
/// of `exp A`.
#[derive(Debug, Clone)]
pub struct ExpJcdReport {
    pub a: HMatrix,
    pub exp_a: HMatrix,
    pub s: HMatrix,
    pub n: HMatrix,
    pub s_exp: HMatrix,
    pub u_exp: HMatrix,
    /// `‖exp(S) − S′‖`.
    pub semisimple_residual: f64,
    /// `‖exp(N) − U′‖`.
    pub unipotent_residual: f64,
    /// `1 + ‖exp A‖`, the scale the residuals are judged against.
    pub scale: f64,
}

impl ExpJcdReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.semisimple_residual <= tol * self.scale && self.unipotent_residual <= tol * self.scale
    }
}

pub fn exp_jcd_relation(a: &HMatrix, tol: &Tolerances) -> Result<ExpJcdReport> {
    let add = additive_jcd(a, tol)?;
    let exp_a = hexp(a);
    let mul = multiplicative_jcd(&exp_a, tol)?;
    let semisimple_residual = (&hexp(&add.s) - &mul.s).norm_max();
    let unipotent_residual = (&hexp(&add.n) - &mul.u).norm_max();
    let scale = 1.0 + exp_a.norm_max();
    Ok(ExpJcdReport {
        a: a.clone(),
        exp_a,
        s: add.s,
        n: add.n,
        s_exp: mul.s,
        u_exp: mul.u,
        semisimple_residual,
        unipotent_residual,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn q(a: f64, b: f64, c: f64, d: f64) -> Quaternion {
        Quaternion::new(a, b, c, d)
    }

    fn one(x: Quaternion) -> HMatrix {
        HMatrix::diagonal(&[x])
    }

    fn shift_block(n: usize, value: f64) -> HMatrix {
        HMatrix::from_fn(n, |i, j| {
            if i == j {
                q(value, 0.0, 0.0, 0.0)
            } else if j == i + 1 {
                q(1.0, 0.0, 0.0, 0.0)
            } else {
                q(0.0, 0.0, 0.0, 0.0)
            }
        })
    }

    #[test]
    fn exp_examples() {
        assert_eq!(hexp(&HMatrix::zeros(3)), HMatrix::identity(3));
        assert!((&hexp(&one(q(0.0, PI, 0.0, 0.0))) - &one(q(-1.0, 0.0, 0.0, 0.0))).norm_max() < 1e-13);
        assert!((&hexp(&shift_block(2, 0.0)) - &shift_block(2, 1.0)).norm_max() < 1e-14);
        // j·π is similar to i·π
        assert!((&hexp(&one(q(0.0, 0.0, PI, 0.0))) - &one(q(-1.0, 0.0, 0.0, 0.0))).norm_max() < 1e-13);
    }

    #[test]
    fn exp_of_large_matrix_is_scaled() {
        let a = one(q(3.0, 4.0, 0.0, 0.0));
        let want = Complex64::new(3.0, 4.0).exp();
        assert!((hexp(&a)[(0, 0)] - Quaternion::from_complex(want)).norm() < 1e-10 * want.norm());
    }

    #[test]
    fn log_examples() {
        let t = Tolerances::default();
        assert!(hlog(&HMatrix::identity(2), &t).unwrap().norm_max() < 1e-12);
        let l = hlog(&one(q(-1.0, 0.0, 0.0, 0.0)), &t).unwrap();
        assert!((&l - &one(q(0.0, PI, 0.0, 0.0))).norm_max() < 1e-12);
        let a = HMatrix::from_rows(&[vec![q(E, 0.0, 0.0, 0.0), q(E, 0.0, 0.0, 0.0)], vec![q(0.0, 0.0, 0.0, 0.0), q(E, 0.0, 0.0, 0.0)]]).unwrap();
        let l = hlog(&a, &t).unwrap();
        assert!((&l - &shift_block(2, 1.0)).norm_max() < 1e-10);
    }

    #[test]
    fn log_rejects_singular() {
        assert!(matches!(hlog(&shift_block(2, 0.0), &Tolerances::default()), Err(Error::Singular)));
    }

    #[test]
    fn exp_relation_examples() {
        let t = Tolerances::default();
        let r = exp_jcd_relation(&HMatrix::zeros(2), &t).unwrap();
        assert_eq!(r.exp_a, HMatrix::identity(2));
        assert!(r.semisimple_residual < 1e-14 && r.unipotent_residual < 1e-14);

        let r = exp_jcd_relation(&shift_block(2, 0.0), &t).unwrap();
        assert!((&r.u_exp - &shift_block(2, 1.0)).norm_max() < 1e-9);
        assert!((&r.s_exp - &HMatrix::identity(2)).norm_max() < 1e-9);
        assert!(r.holds(1e-6));

        let a = HMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => q(0.0, 1.0, 0.0, 0.0),
            (0, 1) => q(1.0, 0.0, 0.0, 0.0),
            _ => q(0.0, 0.0, 0.0, 0.0),
        });
        let r = exp_jcd_relation(&a, &t).unwrap();
        let ei = Quaternion::from_complex(Complex64::new(0.0, 1.0).exp());
        assert!((&r.s_exp - &HMatrix::scalar(2, ei)).norm_max() < 1e-9);
        assert!((&r.u_exp - &shift_block(2, 1.0)).norm_max() < 1e-9);
        assert!(r.holds(1e-6));
    }
}
