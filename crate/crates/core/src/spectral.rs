//! Characteristic polynomial, spectrum and generalized eigenspaces of the
//! complex adjoint.
//!
//! The spectrum of a quaternionic matrix is read off the real polynomial
//! `p(x) = det(xI − M)` of its complex adjoint `M`. Roots come in conjugate
//! pairs with equal multiplicity and real roots have even multiplicity, since
//! `J` maps the generalized eigenspace of `λ` onto that of `λ̄`.
//!
//! The eigenvalues themselves come from a Schur form of `M`. Defective
//! eigenvalues split into clusters there, so each cluster is moved to the
//! front of a reordered Schur form, whose leading vectors span the
//! generalized eigenspace, and the eigenvalue becomes the mean of the
//! cluster's diagonal entries.

use num_complex::Complex64;

use crate::cmat::CMatrix;
use crate::error::{Error, Result};
use crate::hmat::HMatrix;
use crate::poly::{cluster_spectrum, ClusterOptions, RealPoly};
use crate::schur::SchurForm;
use crate::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EigenKind {
    /// A real eigenvalue `μ` of the adjoint.
    Real,
    /// A conjugate pair `λ, λ̄` reported once with `Im λ > 0`.
    Pair,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEntry {
    pub value: Complex64,
    /// Algebraic multiplicity of `value` (for a pair, of each member).
    pub mult: usize,
    pub kind: EigenKind,
}

impl SpectralEntry {
    /// Dimension contributed to `ℂ²ⁿ`.
    pub fn weight(&self) -> usize {
        match self.kind {
            EigenKind::Real => self.mult,
            EigenKind::Pair => 2 * self.mult,
        }
    }
}

/// Canonical eigenvalue multiset of a complex adjoint, sorted by `(re, im)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    entries: Vec<SpectralEntry>,
}

impl Spectrum {
    pub fn new(mut entries: Vec<SpectralEntry>) -> Self {
        entries.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
        Self { entries }
    }

    pub fn entries(&self) -> &[SpectralEntry] {
        &self.entries
    }

    pub fn total_weight(&self) -> usize {
        self.entries.iter().map(SpectralEntry::weight).sum()
    }

    /// Every eigenvalue of the adjoint with its multiplicity, conjugates listed separately.
    pub fn adjoint_eigenvalues(&self) -> Vec<(Complex64, usize)> {
        let mut out = Vec::new();
        for e in &self.entries {
            out.push((e.value, e.mult));
            if e.kind == EigenKind::Pair {
                out.push((e.value.conj(), e.mult));
            }
        }
        out
    }

    /// Entry whose eigenvalue (or its conjugate) lies within `tol` of `z`.
    pub fn find(&self, z: Complex64, tol: f64) -> Option<(SpectralEntry, bool)> {
        self.entries.iter().find_map(|e| {
            if (e.value - z).norm() <= tol {
                Some((*e, false))
            } else if e.kind == EigenKind::Pair && (e.value.conj() - z).norm() <= tol {
                Some((*e, true))
            } else {
                None
            }
        })
    }

    /// Checks the structure forced by `J`: total dimension `2n`, even real multiplicities.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.total_weight() != 2 * n {
            return Err(Error::StructureViolation(format!(
                "multiplicities sum to {} instead of {}",
                self.total_weight(),
                2 * n
            )));
        }
        if let Some(e) = self.entries.iter().find(|e| e.kind == EigenKind::Real && e.mult % 2 == 1) {
            return Err(Error::StructureViolation(format!(
                "real eigenvalue {} has odd multiplicity {}",
                e.value.re, e.mult
            )));
        }
        if let Some(e) = self.entries.iter().find(|e| e.kind == EigenKind::Pair && e.value.im <= 0.0) {
            return Err(Error::StructureViolation(format!("pair representative {} not in upper half plane", e.value)));
        }
        Ok(())
    }
}

/// Generalized eigenspace `ker (M − λI)^{2n}` with an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedEigenspace {
    pub value: Complex64,
    pub basis: CMatrix,
}

impl GeneralizedEigenspace {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

/// Faddeev–LeVerrier on a square complex matrix: coefficients of `det(xI − M)`, ascending.
pub fn faddeev_leverrier(m: &CMatrix) -> Vec<Complex64> {
    let n = m.rows();
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let mut mk = CMatrix::identity(n);
    for k in 1..=n {
        let am = m.matmul(&mk);
        let ck = -am.trace() / k as f64;
        c[n - k] = ck;
        mk = am;
        for i in 0..n {
            mk[(i, i)] += ck;
        }
    }
    c
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Characteristic polynomial of the complex adjoint, with real coefficients.
pub fn char_poly(a: &HMatrix, tol: &Tolerances) -> Result<RealPoly> {
    let m = a.complex_adjoint().into_matrix();
    let c = faddeev_leverrier(&m);
    let size = m.rows();
    let norm = 1.0 + m.norm_one();
    for (k, z) in c.iter().enumerate() {
        let scale = binomial(size, k) * norm.powi((size - k) as i32);
        if z.im.abs() > tol.residual * scale {
            return Err(Error::NonRealCoefficients { residue: z.im.abs() });
        }
    }
    Ok(RealPoly::new(c.iter().map(|z| z.re).collect()))
}

/// `‖p(A)‖_max` for the characteristic polynomial `p`.
pub fn verify_cayley_hamilton(a: &HMatrix, tol: &Tolerances) -> Result<f64> {
    let p = char_poly(a, tol)?;
    Ok(p.eval_at_hmatrix(a).norm_max())
}

/// Assigns to every spectrum entry the `mult` Schur eigenvalues closest to
/// it (closest pairs first) and returns, per entry, the selected positions.
fn assign_schur_eigenvalues(entries: &[SpectralEntry], eigs: &[Complex64]) -> Vec<Vec<usize>> {
    let mut candidates: Vec<(f64, usize, usize)> = Vec::with_capacity(entries.len() * eigs.len());
    for (i, e) in entries.iter().enumerate() {
        for (j, z) in eigs.iter().enumerate() {
            candidates.push(((z - e.value).norm(), i, j));
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut taken = vec![false; eigs.len()];
    let mut out = vec![Vec::new(); entries.len()];
    for (_, i, j) in candidates {
        if !taken[j] && out[i].len() < entries[i].mult {
            taken[j] = true;
            out[i].push(j);
        }
    }
    out
}

/// A spectrum together with the refined invariant subspaces of the adjoint.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub adjoint: CMatrix,
    pub spectrum: Spectrum,
    /// One orthonormal basis per spectrum entry (for pairs, of the `Im > 0` member).
    pub subspaces: Vec<CMatrix>,
}

/// Spectrum and refined generalized eigenspaces of `a`'s adjoint.
pub fn spectral_data(a: &HMatrix, tol: &Tolerances) -> Result<SpectralData> {
    let n = a.n();
    let adjoint = a.complex_adjoint().into_matrix();
    let schur = SchurForm::new(&adjoint)?;
    let opts = ClusterOptions { tol_cluster: tol.cluster, adjoint_eigenvalues: true, ..ClusterOptions::default() };
    let raw = cluster_spectrum(&schur.eigenvalues(), &opts, None)?;
    raw.validate(n)?;

    let assignment = assign_schur_eigenvalues(raw.entries(), &schur.eigenvalues());

    let mut entries = Vec::with_capacity(raw.entries().len());
    let mut subspaces = Vec::with_capacity(raw.entries().len());
    for (e, picked) in raw.entries().iter().zip(&assignment) {
        let mut select = vec![false; adjoint.rows()];
        for &j in picked {
            select[j] = true;
        }
        let mut local = schur.clone();
        local.reorder(&select);
        let q = local.q.col_range(0, e.mult);
        let mean = local.t.submatrix(0, 0, e.mult, e.mult).trace() / e.mult as f64;
        let value = match e.kind {
            EigenKind::Real => Complex64::new(mean.re, 0.0),
            EigenKind::Pair => {
                if mean.im <= 0.0 {
                    return Err(Error::StructureViolation(format!(
                        "pair {} refined onto the real axis",
                        e.value
                    )));
                }
                mean
            }
        };
        entries.push(SpectralEntry { value, ..*e });
        subspaces.push(q);
    }
    // keep subspaces aligned with the sorted entries
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&i, &j| {
        entries[i].value.re.total_cmp(&entries[j].value.re).then(entries[i].value.im.total_cmp(&entries[j].value.im))
    });
    let spectrum = Spectrum::new(order.iter().map(|&i| entries[i]).collect());
    let subspaces = order.iter().map(|&i| subspaces[i].clone()).collect();
    spectrum.validate(n)?;
    Ok(SpectralData { adjoint, spectrum, subspaces })
}

pub fn spectrum(a: &HMatrix, tol: &Tolerances) -> Result<Spectrum> {
    Ok(spectral_data(a, tol)?.spectrum)
}

/// Nested kernels `K_t = ker (M − λI)^t`, `t = 1, 2, …`, each as an
/// orthonormal basis, until the dimension stops growing or reaches `cap`.
///
/// `K_t = ker(Π_{t−1}·(M − λI))` with `Π_{t−1}` the orthogonal projector onto
/// the complement of `K_{t−1}`, which keeps every rank decision on a matrix of
/// the size of `M` instead of its powers.
pub fn nested_kernels(m: &CMatrix, lambda: Complex64, cap: usize, tol_rank: f64) -> Vec<CMatrix> {
    let size = m.rows();
    let nmat = m.shift(lambda);
    let threshold_scale = nmat.norm_max();
    let mut out: Vec<CMatrix> = Vec::new();
    let mut prev_dim = 0;
    loop {
        let step = match out.last() {
            None => nmat.clone(),
            Some(k) => &nmat - &k.matmul(&k.adjoint().matmul(&nmat)),
        };
        let qr = step.adjoint().pivoted_qr();
        let r = qr.rank(tol_rank * (1.0 + threshold_scale));
        let kernel = qr.q().col_range(r, size);
        let dim = kernel.cols();
        if dim <= prev_dim {
            break;
        }
        prev_dim = dim;
        out.push(kernel);
        if dim >= cap {
            break;
        }
    }
    out
}

/// Generalized eigenspace of `a`'s adjoint for `λ` (either member of a pair).
pub fn generalized_eigenspace(a: &HMatrix, lambda: Complex64, tol: &Tolerances) -> Result<GeneralizedEigenspace> {
    let data = spectral_data(a, tol)?;
    let (entry, conjugated) = data
        .spectrum
        .find(lambda, tol.eig * (1.0 + lambda.norm()))
        .ok_or_else(|| Error::NotAnEigenvalue(format!("{lambda}")))?;
    let value = if conjugated { entry.value.conj() } else { entry.value };
    let idx = data.spectrum.entries().iter().position(|e| *e == entry).expect("entry from this spectrum");
    let q = data.subspaces[idx].clone();
    let basis = if conjugated { crate::jordan::mirror_basis(&q) } else { q };
    if basis.cols() == 0 {
        return Err(Error::NotAnEigenvalue(format!("{lambda}")));
    }
    Ok(GeneralizedEigenspace { value, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quaternion;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn one_by_one(q: Quaternion) -> HMatrix {
        HMatrix::from_rows(&[vec![q]]).unwrap()
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&one_by_one(Quaternion::J), &tol()).unwrap().coeffs(), &[1.0, 0.0, 1.0]);
        assert_eq!(char_poly(&one_by_one(Quaternion::I), &tol()).unwrap().coeffs(), &[1.0, 0.0, 1.0]);
        let p = char_poly(&HMatrix::zeros(3), &tol()).unwrap();
        assert_eq!(p.coeffs(), &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn spectrum_examples() {
        let s = spectrum(&one_by_one(Quaternion::J), &tol()).unwrap();
        assert_eq!(s.entries().len(), 1);
        assert_eq!((s.entries()[0].mult, s.entries()[0].kind), (1, EigenKind::Pair));
        assert!((s.entries()[0].value - c(0.0, 1.0)).norm() < 1e-12);

        let s = spectrum(&HMatrix::identity(2), &tol()).unwrap();
        assert_eq!(s.entries().len(), 1);
        assert_eq!((s.entries()[0].mult, s.entries()[0].kind), (4, EigenKind::Real));
        assert!((s.entries()[0].value - c(1.0, 0.0)).norm() < 1e-12);

        let d = HMatrix::diagonal(&[Quaternion::I, Quaternion::new(1.0, 1.0, 0.0, 0.0)]);
        let s = spectrum(&d, &tol()).unwrap();
        assert_eq!(s.entries().len(), 2);
        assert!((s.entries()[0].value - c(0.0, 1.0)).norm() < 1e-12);
        assert!((s.entries()[1].value - c(1.0, 1.0)).norm() < 1e-12);
        assert!(s.entries().iter().all(|e| e.mult == 1 && e.kind == EigenKind::Pair));
    }

    #[test]
    fn generalized_eigenspace_examples() {
        let g = generalized_eigenspace(&one_by_one(Quaternion::J), c(0.0, 1.0), &tol()).unwrap();
        assert_eq!(g.dim(), 1);
        let m = one_by_one(Quaternion::J).complex_adjoint().into_matrix();
        let v = g.basis.col(0);
        let mv = m.mat_vec(&v);
        assert!(mv.iter().zip(&v).all(|(a, b)| (a - b * c(0.0, 1.0)).norm() < 1e-12));

        let g = generalized_eigenspace(&HMatrix::identity(2), c(1.0, 0.0), &tol()).unwrap();
        assert_eq!(g.dim(), 4);

        let nil = HMatrix::from_rows(&[vec![Quaternion::ZERO, Quaternion::ONE], vec![Quaternion::ZERO, Quaternion::ZERO]])
            .unwrap();
        let g = generalized_eigenspace(&nil, c(0.0, 0.0), &tol()).unwrap();
        assert_eq!(g.dim(), 4);

        assert!(matches!(
            generalized_eigenspace(&HMatrix::identity(2), c(3.0, 0.0), &tol()),
            Err(Error::NotAnEigenvalue(_))
        ));
    }

    #[test]
    fn cayley_hamilton_examples() {
        assert_eq!(verify_cayley_hamilton(&one_by_one(Quaternion::J), &tol()).unwrap(), 0.0);
        assert_eq!(verify_cayley_hamilton(&HMatrix::zeros(2), &tol()).unwrap(), 0.0);
    }
}
