//! Additive and multiplicative Jordan–Chevalley decompositions with the real
//! polynomials realizing them.
//!
//! The semisimple part acts as `λ` on each generalized eigenspace, so it is
//! `f(A)` for any `f ≡ λ (mod (x − λ)^{m(λ)})` over all eigenvalues, where
//! `m(λ)` is the size of the largest Jordan block for `λ`, with
//! `f ≡ 0 (mod x)` added to force a zero constant term. Because the system is
//! closed under conjugation, `(h₀ + h̄₀)/2` of any complex solution `h₀` is
//! again a solution, now with real coefficients.
//!
//! The unipotent part is `h(A)` for the `h` with `h(0) = 1` and
//! `h ≡ x/λ (mod (x − λ)^{m(λ)})`: on each generalized eigenspace
//! `S⁻¹A = A/λ`. This agrees with `1 + (q∘f)·g` modulo the minimal
//! polynomial times `x`, where `q(x)·x ≡ 1`, but it is interpolated directly
//! since the composition loses most of the working precision.
//!
//! `S = f(A)`-style checks evaluate the interpolant in Newton form on the
//! Jordan matrix and conjugate back by `P`. Horner on `A` itself is reported
//! as an advisory residual, since on badly non-normal input it loses digits
//! even when `f` is exact. The monomial coefficients are checked separately
//! against the Hermite data.

use num_complex::Complex64;

use crate::check::Residual;
use crate::error::{Error, Result};
use crate::hmat::HMatrix;
use crate::jordan::{jordan_form, JordanResult};
use crate::poly::{crt_solve, hermite_interpolant, realify, Congruence, CongruenceSystem, HermiteNode, NewtonForm, RealPoly};
use crate::quat::Quaternion;
use crate::spectral::spectral_data;
use crate::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveJcd {
    /// Semisimple part.
    pub s: HMatrix,
    /// Nilpotent part, `A − S`.
    pub n: HMatrix,
    /// `S = f(A)`, `f(0) = 0`.
    pub f: RealPoly,
    /// `N = g(A)`, `g = x − f`.
    pub g: RealPoly,
    pub residuals: Vec<Residual>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeJcd {
    pub s: HMatrix,
    /// Unipotent part, `I + S⁻¹N`.
    pub u: HMatrix,
    pub f: RealPoly,
    /// `U = h(A)`, `h(0) = 1`.
    pub h: RealPoly,
    pub residuals: Vec<Residual>,
}

/// Distinct eigenvalues (closed upper half plane), each with the size of its
/// largest Jordan block: the exponent of `x − λ` in the minimal polynomial.
pub(crate) fn eigen_indices(jr: &JordanResult, tol_eig: f64) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for b in jr.spec.blocks() {
        let mut value = b.value;
        if value.norm() <= tol_eig {
            value = Complex64::new(0.0, 0.0);
        }
        match out.iter_mut().find(|(z, _)| (*z - value).norm() <= tol_eig * (1.0 + value.norm())) {
            Some(entry) => entry.1 = entry.1.max(b.size),
            None => out.push((value, b.size)),
        }
    }
    out
}

/// `f ≡ λ (mod (x − λ)^m)` for every eigenvalue and its conjugate, plus
/// `f ≡ 0 (mod x)` unless `0` is itself an eigenvalue.
pub fn semisimple_congruences(eigs: &[(Complex64, usize)]) -> CongruenceSystem {
    let mut cs = Vec::new();
    for &(z, m) in eigs {
        cs.push(Congruence { target: z, root: z, mult: m });
        if z.im != 0.0 {
            cs.push(Congruence { target: z.conj(), root: z.conj(), mult: m });
        }
    }
    CongruenceSystem::new(cs, true)
}

/// `P · diag(λ) · P⁻¹` for the Jordan data, the semisimple part.
fn semisimple_from_jordan(jr: &JordanResult, pinv: &HMatrix) -> HMatrix {
    let diag: Vec<Quaternion> = jr
        .spec
        .blocks()
        .iter()
        .flat_map(|b| std::iter::repeat_n(Quaternion::from_complex(b.value), b.size))
        .collect();
    &(&jr.p * &HMatrix::diagonal(&diag)) * pinv
}

/// `p(A)` evaluated as `P · p(J) · P⁻¹`, which stays accurate when `A` is far
/// from normal and the interpolant has large divided differences.
fn eval_in_jordan_basis(nf: &NewtonForm, jr: &JordanResult, pinv: &HMatrix) -> HMatrix {
    &(&jr.p * &eval_newton(nf, &jr.spec.to_hmatrix())) * pinv
}

/// Evaluates a Newton form with conjugation-closed nodes on the adjoint of
/// `a` and pulls the result back.
fn eval_newton(nf: &NewtonForm, a: &HMatrix) -> HMatrix {
    HMatrix::project_from_adjoint(&nf.eval_at_cmatrix(a.complex_adjoint().matrix()))
}

/// Largest deviation of `p`'s Taylor coefficients from the Hermite data,
/// relative to `Σ |p_k| · max(1, |z|)^k`.
fn congruence_defect(p: &RealPoly, data: &[HermiteNode]) -> f64 {
    let cp = p.to_complex();
    let mut worst = 0.0f64;
    for d in data {
        let scale = p.eval_scale(d.point.norm().max(1.0)).max(f64::MIN_POSITIVE);
        let taylor = cp.taylor_at(d.point);
        for (t, want) in d.taylor.iter().enumerate() {
            let got = taylor.get(t).copied().unwrap_or_default();
            worst = worst.max((got - want).norm() / scale);
        }
    }
    worst
}

fn nilpotency_residual(n: &HMatrix, scale_norm: f64, tol: f64, name: &'static str) -> Residual {
    let k = n.n();
    Residual::new(name, n.pow(k).norm_max(), tol * (1.0 + scale_norm).powi(k as i32))
}

/// Hermite data `f ≡ λ (mod (x − λ)^m)` at every eigenvalue and conjugate,
/// plus `f(0) = 0`.
fn semisimple_data(eigs: &[(Complex64, usize)]) -> Vec<HermiteNode> {
    congruence_nodes(eigs, |z, m| {
        let mut t = vec![Complex64::new(0.0, 0.0); m];
        t[0] = z;
        t
    }, Complex64::new(0.0, 0.0))
}

/// Hermite data `h ≡ x/λ (mod (x − λ)^m)` at every eigenvalue and
/// conjugate, plus `h(0) = 1`: on each generalized eigenspace `U = S⁻¹A`
/// with `S = λ`.
fn unipotent_data(eigs: &[(Complex64, usize)]) -> Vec<HermiteNode> {
    congruence_nodes(eigs, |z, m| {
        let mut t = vec![Complex64::new(0.0, 0.0); m];
        t[0] = Complex64::new(1.0, 0.0);
        if m > 1 {
            t[1] = z.inv();
        }
        t
    }, Complex64::new(1.0, 0.0))
}

fn congruence_nodes(
    eigs: &[(Complex64, usize)],
    taylor: impl Fn(Complex64, usize) -> Vec<Complex64>,
    at_zero: Complex64,
) -> Vec<HermiteNode> {
    let mut out = Vec::new();
    for &(z, m) in eigs {
        out.push(HermiteNode { point: z, taylor: taylor(z, m) });
        if z.im != 0.0 {
            out.push(HermiteNode { point: z.conj(), taylor: taylor(z.conj(), m) });
        }
    }
    if !eigs.iter().any(|(z, _)| *z == Complex64::new(0.0, 0.0)) {
        out.push(HermiteNode { point: Complex64::new(0.0, 0.0), taylor: vec![at_zero] });
    }
    out
}

pub fn additive_jcd(a: &HMatrix, tol: &Tolerances) -> Result<AdditiveJcd> {
    let jr = jordan_form(a, tol)?;
    additive_from_jordan(a, &jr, tol)
}

pub(crate) fn additive_from_jordan(a: &HMatrix, jr: &JordanResult, tol: &Tolerances) -> Result<AdditiveJcd> {
    let dim = a.n() as f64;
    let eigs = eigen_indices(jr, tol.eig);
    let sys = semisimple_congruences(&eigs);
    let mut fc = realify(&crt_solve(&sys)?).coeffs().to_vec();
    if !fc.is_empty() {
        fc[0] = 0.0;
    }
    let f = RealPoly::new(fc);
    let g = RealPoly::x().sub(&f);

    let pinv = jr.p.hinverse(tol.rank)?;
    let s = semisimple_from_jordan(jr, &pinv);
    let n = a - &s;
    let norm_a = a.norm_max();
    let (ns, nn) = (s.norm_max(), n.norm_max());

    let data = semisimple_data(&eigs);
    let f_newton = hermite_interpolant(&data)?;
    let fa = eval_in_jordan_basis(&f_newton, jr, &pinv);
    let fa_direct = eval_newton(&f_newton, a);
    let comm = (&(&s * &n) - &(&n * &s)).norm_max();
    let residuals = vec![
        Residual::new("A = S + N", (&(&s + &n) - a).norm_max(), tol.residual * (1.0 + norm_a)),
        Residual::new("SN = NS", comm, tol.residual * (1.0 + dim * ns * nn)),
        nilpotency_residual(&n, dim * norm_a, tol.residual, "N^n = 0"),
        Residual::new("S = f(A)", (&fa - &s).norm_max(), tol.residual * (1.0 + norm_a)),
        Residual::new("N = g(A)", (&(a - &fa) - &n).norm_max(), tol.residual * (1.0 + norm_a)),
        Residual::new("f congruences", congruence_defect(&f, &data), tol.residual),
        Residual::advisory("S = f(A) direct", (&fa_direct - &s).norm_max(), tol.residual * (1.0 + norm_a)),
    ];
    for r in &residuals {
        r.gate()?;
    }
    if !is_semisimple(&s, tol)? {
        return Err(Error::VerificationFailed { what: "semisimple part is diagonalizable", residual: 1.0, bound: 0.0 });
    }
    Ok(AdditiveJcd { s, n, f, g, residuals })
}

pub fn multiplicative_jcd(a: &HMatrix, tol: &Tolerances) -> Result<MultiplicativeJcd> {
    let jr = jordan_form(a, tol)?;
    let eigs = eigen_indices(&jr, tol.eig);
    if eigs.iter().any(|(z, _)| *z == Complex64::new(0.0, 0.0)) {
        return Err(Error::Singular);
    }
    let add = additive_from_jordan(a, &jr, tol)?;
    let pinv = jr.p.hinverse(tol.rank)?;
    let s_inv = add.s.hinverse(tol.rank)?;
    let id = HMatrix::identity(a.n());
    let u = &id + &(&s_inv * &add.n);

    let data = unipotent_data(&eigs);
    let h_newton = hermite_interpolant(&data)?;
    let mut hc = realify(&h_newton.to_monomial()).coeffs().to_vec();
    hc[0] = 1.0;
    let h = RealPoly::new(hc);

    let dim = a.n() as f64;
    let norm_a = a.norm_max();
    let ha = eval_in_jordan_basis(&h_newton, &jr, &pinv);
    let ha_direct = eval_newton(&h_newton, a);
    let (ns, nu) = (add.s.norm_max(), u.norm_max());
    let unip = &u - &id;
    let residuals = vec![
        Residual::new("A = SU", (&(&add.s * &u) - a).norm_max(), tol.residual * (1.0 + dim * ns * nu)),
        Residual::new("SU = US", (&(&add.s * &u) - &(&u * &add.s)).norm_max(), tol.residual * (1.0 + dim * ns * nu)),
        nilpotency_residual(&unip, dim * unip.norm_max(), tol.residual, "(U - I)^n = 0"),
        Residual::new("U = h(A)", (&ha - &u).norm_max(), tol.residual * (1.0 + norm_a.max(nu))),
        Residual::new("h congruences", congruence_defect(&h, &data), tol.residual),
        Residual::advisory("U = h(A) direct", (&ha_direct - &u).norm_max(), tol.residual * (1.0 + norm_a.max(nu))),
    ];
    for r in &residuals {
        r.gate()?;
    }
    Ok(MultiplicativeJcd { s: add.s, u, f: add.f, h, residuals })
}

/// True iff the adjoint is diagonalizable: `rank(M − λI) = 2n − m(λ)` for
/// every eigenvalue.
pub fn is_semisimple(a: &HMatrix, tol: &Tolerances) -> Result<bool> {
    let data = spectral_data(a, tol)?;
    let size = data.adjoint.rows();
    Ok(data.spectrum.entries().iter().all(|e| data.adjoint.shift(e.value).rank(tol.rank) + e.mult == size))
}
