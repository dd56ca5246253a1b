//! Jordan canonical form over ℍ through `J`-paired Jordan chains of the
//! complex adjoint.
//!
//! For a non-real eigenvalue `λ` the ordinary Jordan chains inside the
//! generalized eigenspace of `λ` are mirrored by `J` onto chains for `λ̄`.
//! For a real eigenvalue `μ` the generalized eigenspace is `J`-invariant and
//! the chains are built pairwise by [`paired_nilpotent_jordan`], which
//! recurses on the image of the nilpotent part. Keeping one chain of every
//! pair and pulling it back along `[x; y] ↦ x + j·y` gives the columns of the
//! transition matrix `P` with `P⁻¹AP` in Jordan form.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::cmat::CMatrix;
use crate::error::{Error, Result};
use crate::hmat::{apply_j, j_commutator_norm, pull_back_vector, HMatrix, HVector};
use crate::quat::Quaternion;
use crate::spectral::{nested_kernels, spectral_data, EigenKind};
use crate::Tolerances;

/// A single Jordan block `J_size(value)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanBlock {
    pub value: Complex64,
    pub size: usize,
}

fn canonical(z: Complex64) -> Complex64 {
    Complex64::new(z.re, z.im.abs())
}

fn block_order(a: &JordanBlock, b: &JordanBlock) -> Ordering {
    a.value
        .re
        .total_cmp(&b.value.re)
        .then(a.value.im.total_cmp(&b.value.im))
        .then(b.size.cmp(&a.size))
}

/// Multiset of Jordan blocks with eigenvalues in the closed upper half plane,
/// sorted by `(Re λ, Im λ, −size)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct JordanSpec {
    blocks: Vec<JordanBlock>,
}

impl JordanSpec {
    /// Canonicalizes every eigenvalue (`Im ≥ 0`) and sorts the blocks.
    pub fn new(blocks: Vec<JordanBlock>) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(|b| b.size == 0) {
            return Err(Error::Dimension("Jordan spec needs at least one block of positive size".into()));
        }
        if blocks.iter().any(|b| !b.value.re.is_finite() || !b.value.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut blocks: Vec<JordanBlock> =
            blocks.into_iter().map(|b| JordanBlock { value: canonical(b.value), size: b.size }).collect();
        blocks.sort_by(block_order);
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[JordanBlock] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.size).sum()
    }

    /// The block-diagonal Jordan matrix, blocks in canonical order.
    pub fn to_hmatrix(&self) -> HMatrix {
        let n = self.dim();
        let mut m = HMatrix::zeros(n);
        let mut at = 0;
        for b in &self.blocks {
            for t in 0..b.size {
                m[(at + t, at + t)] = Quaternion::from_complex(b.value);
                if t + 1 < b.size {
                    m[(at + t, at + t + 1)] = Quaternion::ONE;
                }
            }
            at += b.size;
        }
        m
    }
}

/// True iff the two block multisets agree after canonicalizing eigenvalues
/// (quaternionic similarity) and up to permutation, eigenvalues within `tol`.
pub fn spec_equivalent(s1: &JordanSpec, s2: &JordanSpec, tol: f64) -> bool {
    if s1.blocks.len() != s2.blocks.len() {
        return false;
    }
    let mut used = vec![false; s2.blocks.len()];
    for a in &s1.blocks {
        let za = canonical(a.value);
        let hit = s2
            .blocks
            .iter()
            .enumerate()
            .filter(|(j, b)| !used[*j] && b.size == a.size)
            .map(|(j, b)| (j, (canonical(b.value) - za).norm()))
            .filter(|&(_, d)| d <= tol)
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match hit {
            Some((j, _)) => used[j] = true,
            None => return false,
        }
    }
    true
}

/// Transition matrix and Jordan data with `P⁻¹·A·P = Jordan(spec)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanResult {
    pub p: HMatrix,
    pub spec: JordanSpec,
    /// `‖P⁻¹AP − Jordan(spec)‖_max`.
    pub residual: f64,
}

/// A Jordan chain `v₁, …, v_m` (`(M − λ)v₁ = 0`, `(M − λ)v_{t+1} = v_t`)
/// together with its image under `J`, a chain for `λ̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedChain {
    pub value: Complex64,
    pub chain: Vec<Vec<Complex64>>,
    pub mirror: Vec<Vec<Complex64>>,
}

impl PairedChain {
    fn from_chain(value: Complex64, chain: Vec<Vec<Complex64>>) -> Self {
        let mirror = chain.iter().map(|v| apply_j(v)).collect();
        Self { value, chain, mirror }
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    fn map(&self, basis: &CMatrix, value: Complex64) -> Self {
        Self::from_chain(value, self.chain.iter().map(|c| basis.mat_vec(c)).collect())
    }
}

/// Applies `J` to every column.
pub fn mirror_basis(q: &CMatrix) -> CMatrix {
    CMatrix::from_columns(q.rows(), &q.columns().iter().map(|c| apply_j(c)).collect::<Vec<_>>())
}

fn vnorm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn vscale(v: &[Complex64], s: f64) -> Vec<Complex64> {
    v.iter().map(|z| z * s).collect()
}

/// Orthonormal `J`-closed basis `u₁, Ju₁, u₂, Ju₂, …` of the span of the
/// orthonormal columns of `q` (a `J`-invariant subspace).
fn j_basis_interleaved(q: &CMatrix) -> Vec<Vec<Complex64>> {
    let project_out = |v: &mut Vec<Complex64>, basis: &[Vec<Complex64>]| {
        // two passes keep the result orthogonal to working precision
        for _ in 0..2 {
            for u in basis {
                let s: Complex64 = u.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= ui * s;
                }
            }
        }
    };
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    let mut rest = q.columns();
    while out.len() < q.cols() {
        for v in rest.iter_mut() {
            project_out(v, &out[out.len().saturating_sub(2)..]);
        }
        let Some((best, norm)) =
            rest.iter().enumerate().map(|(i, v)| (i, vnorm(v))).max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            break;
        };
        if norm < 1e-6 {
            break;
        }
        let mut v = vscale(&rest.swap_remove(best), 1.0 / norm);
        project_out(&mut v, &out);
        let v = vscale(&v, 1.0 / vnorm(&v));
        let mut jv = apply_j(&v);
        project_out(&mut jv, &out);
        let jv = vscale(&jv, 1.0 / vnorm(&jv));
        out.push(v);
        out.push(jv);
    }
    out
}

/// `[u₁ … u_k  Ju₁ … Ju_k]`: in these coordinates `J` is the standard structure.
fn j_basis_standard(q: &CMatrix) -> CMatrix {
    let inter = j_basis_interleaved(q);
    let (u, ju): (Vec<_>, Vec<_>) = inter.chunks(2).map(|p| (p[0].clone(), p[1].clone())).unzip();
    let cols: Vec<Vec<Complex64>> = u.into_iter().chain(ju).collect();
    CMatrix::from_columns(q.rows(), &cols)
}

/// `J`-paired Jordan chains of a nilpotent `J`-commuting matrix whose vectors
/// together form a basis of `ℂ²ᵐ`.
///
/// Recursion on `U₁ = N(U)`: the chains of `U₁` are lifted by one vector each
/// (`N w = top`, `w ∈ U`), and the rest of `U` is filled with pairs `(u, Ju)`
/// where `u = v − w` is a kernel vector obtained from any `v ∉ Y` and
/// `w ∈ Y` with `N w = N v`.
pub fn paired_nilpotent_jordan(m: &CMatrix, tol: &Tolerances) -> Result<Vec<PairedChain>> {
    if !m.is_square() || !m.rows().is_multiple_of(2) || m.rows() == 0 {
        return Err(Error::Dimension(format!("expected a 2m x 2m matrix, got {}x{}", m.rows(), m.cols())));
    }
    let scale = 1.0 + m.norm_max();
    let jres = j_commutator_norm(m);
    if jres > tol.residual * scale {
        return Err(Error::NotJCommuting { residual: jres });
    }
    let size = m.rows();
    let power = m.scale(Complex64::new(1.0 / scale, 0.0)).pow(size);
    let nres = power.norm_max();
    if nres > tol.eig {
        return Err(Error::NotNilpotent { residual: nres });
    }
    let chains = paired_recursion(m, &CMatrix::identity(size), tol.rank)?;
    Ok(chains.into_iter().map(|c| PairedChain { value: Complex64::new(0.0, 0.0), ..c }).collect())
}

fn paired_recursion(nmat: &CMatrix, u: &CMatrix, tol_rank: f64) -> Result<Vec<PairedChain>> {
    let zero = Complex64::new(0.0, 0.0);
    if u.cols() == 0 {
        return Ok(Vec::new());
    }
    let image = nmat.matmul(u);
    let u1 = image.range_basis(tol_rank);
    if u1.cols() == 0 {
        return Ok(j_basis_interleaved(u)
            .chunks(2)
            .map(|p| PairedChain { value: zero, chain: vec![p[0].clone()], mirror: vec![p[1].clone()] })
            .collect());
    }
    let u1 = CMatrix::from_columns(u.rows(), &j_basis_interleaved(&u1));
    if u1.cols() >= u.cols() || !u1.cols().is_multiple_of(2) {
        return Err(Error::StructureViolation(format!(
            "image of a {}-dimensional invariant subspace has dimension {}",
            u.cols(),
            u1.cols()
        )));
    }
    let lower = paired_recursion(nmat, &u1, tol_rank)?;

    let mut chains = Vec::with_capacity(lower.len());
    for c in &lower {
        let top = c.chain.last().expect("chains are nonempty");
        let coeffs = image.lstsq_min_norm(top, tol_rank);
        let w = u.mat_vec(&coeffs);
        chains.push(chain_from_top(nmat, &w, c.len() + 1));
    }

    let mut y_vectors: Vec<Vec<Complex64>> = Vec::new();
    for c in &chains {
        y_vectors.extend(c.chain.iter().cloned());
        y_vectors.extend(c.mirror.iter().cloned());
    }
    loop {
        let y = CMatrix::from_columns(u.rows(), &y_vectors).range_basis(tol_rank);
        if y.cols() >= u.cols() {
            break;
        }
        let rest = CMatrix::complement_within(u, &y, 1e-6);
        if rest.cols() == 0 {
            break;
        }
        let v = rest.col(0);
        let nv = nmat.mat_vec(&v);
        let ny = nmat.matmul(&y);
        let coeffs = ny.lstsq_min_norm(&nv, tol_rank);
        let w = y.mat_vec(&coeffs);
        let u1: Vec<Complex64> = v.iter().zip(&w).map(|(a, b)| a - b).collect();
        let u1 = vscale(&u1, 1.0 / vnorm(&u1));
        let pair = PairedChain::from_chain(zero, vec![u1]);
        y_vectors.push(pair.chain[0].clone());
        y_vectors.push(pair.mirror[0].clone());
        chains.push(pair);
    }
    Ok(chains)
}

/// The chain `N^{len−1}w, …, Nw, w`, rescaled so its longest vector has unit norm.
fn chain_from_top(nmat: &CMatrix, top: &[Complex64], len: usize) -> PairedChain {
    let mut chain = vec![top.to_vec()];
    for _ in 1..len {
        let next = nmat.mat_vec(chain.last().unwrap());
        chain.push(next);
    }
    chain.reverse();
    let biggest = chain.iter().map(|v| vnorm(v)).fold(0.0, f64::max);
    let chain = chain.iter().map(|v| vscale(v, 1.0 / biggest)).collect();
    PairedChain::from_chain(Complex64::new(0.0, 0.0), chain)
}

/// Jordan chains of `N = B` (nilpotent, `d × d`) by greedy top selection:
/// at height `t` (largest first) the new tops complete `K_{t−1} + (vectors of
/// longer chains at height t)` inside `K_t`.
fn standard_chains(b: &CMatrix, tol_rank: f64) -> Result<Vec<PairedChain>> {
    let d = b.rows();
    let kernels = nested_kernels(b, Complex64::new(0.0, 0.0), d, tol_rank);
    if kernels.last().map_or(0, CMatrix::cols) != d {
        return Err(Error::StructureViolation(format!(
            "nilpotent part has a kernel chain of dimension {} instead of {d}",
            kernels.last().map_or(0, CMatrix::cols)
        )));
    }
    let mut tops: Vec<(Vec<Complex64>, usize)> = Vec::new();
    for t in (1..=kernels.len()).rev() {
        let kt = &kernels[t - 1];
        let below = if t >= 2 { kernels[t - 2].clone() } else { CMatrix::zeros(d, 0) };
        let fresh = CMatrix::complement_within(kt, &below, 1e-6);
        // vectors of longer chains that sit at height t
        let existing: Vec<Vec<Complex64>> = tops
            .iter()
            .map(|(top, len)| {
                let mut v = top.clone();
                for _ in 0..len - t {
                    v = b.mat_vec(&v);
                }
                v
            })
            .collect();
        let mut taken = below.clone();
        if !existing.is_empty() {
            let e = CMatrix::from_columns(d, &existing);
            let e = if below.cols() > 0 { &e - &below.matmul(&below.adjoint().matmul(&e)) } else { e };
            let e = e.range_basis(1e-6);
            taken = taken.hstack(&e);
        }
        let new_tops = CMatrix::complement_within(&fresh, &taken, 1e-6);
        for top in new_tops.columns() {
            tops.push((top, t));
        }
    }
    Ok(tops.iter().map(|(top, len)| chain_from_top(b, top, *len)).collect())
}

/// Jordan chains for a non-real eigenvalue `λ` of a `J`-commuting matrix,
/// each mirrored by `J` into a chain for `λ̄`.
pub fn complex_chains_for(m: &CMatrix, lambda: Complex64, tol: &Tolerances) -> Result<Vec<PairedChain>> {
    if lambda.im <= 0.0 {
        return Err(Error::NotAnEigenvalue(format!("{lambda} (need Im > 0)")));
    }
    let kernels = nested_kernels(m, lambda, m.rows(), tol.rank);
    let q = match kernels.last() {
        Some(k) if k.cols() > 0 => k.clone(),
        _ => return Err(Error::NotAnEigenvalue(format!("{lambda}"))),
    };
    chains_in_subspace(m, lambda, &q, tol)
}

fn chains_in_subspace(m: &CMatrix, lambda: Complex64, q: &CMatrix, tol: &Tolerances) -> Result<Vec<PairedChain>> {
    let b = q.adjoint().matmul(&m.matmul(q)).shift(lambda);
    let local = standard_chains(&b, tol.rank)?;
    Ok(local.iter().map(|c| c.map(q, lambda)).collect())
}

/// `J`-paired chains for a real eigenvalue `μ` whose generalized eigenspace
/// has the orthonormal basis `q`.
fn real_chains_in_subspace(m: &CMatrix, mu: f64, q: &CMatrix, tol: &Tolerances) -> Result<Vec<PairedChain>> {
    let basis = j_basis_standard(q);
    if basis.cols() != q.cols() {
        return Err(Error::StructureViolation("generalized eigenspace of a real eigenvalue is not J-invariant".into()));
    }
    let b = basis.adjoint().matmul(&m.matmul(&basis)).shift(Complex64::new(mu, 0.0));
    // exact adjoint form in these coordinates
    let b = HMatrix::project_from_adjoint(&b).complex_adjoint().into_matrix();
    let local = paired_nilpotent_jordan(&b, tol)?;
    Ok(local.iter().map(|c| c.map(&basis, Complex64::new(mu, 0.0))).collect())
}

/// All chains of the adjoint, both members of every pair.
pub fn all_paired_chains(a: &HMatrix, tol: &Tolerances) -> Result<Vec<PairedChain>> {
    let data = spectral_data(a, tol)?;
    let mut out = Vec::new();
    for (e, q) in data.spectrum.entries().iter().zip(&data.subspaces) {
        let chains = match e.kind {
            EigenKind::Pair => chains_in_subspace(&data.adjoint, e.value, q, tol)?,
            EigenKind::Real => real_chains_in_subspace(&data.adjoint, e.value.re, q, tol)?,
        };
        out.extend(chains);
    }
    Ok(out)
}

/// Quaternionic Jordan canonical form with transition matrix.
pub fn jordan_form(a: &HMatrix, tol: &Tolerances) -> Result<JordanResult> {
    let n = a.n();
    let chains = all_paired_chains(a, tol)?;
    let mut blocks: Vec<(JordanBlock, Vec<HVector>)> = chains
        .iter()
        .map(|c| {
            let cols = c.chain.iter().map(|v| pull_back_vector(v)).collect();
            (JordanBlock { value: c.value, size: c.len() }, cols)
        })
        .collect();
    blocks.sort_by(|x, y| block_order(&x.0, &y.0));
    let columns: Vec<HVector> = blocks.iter().flat_map(|(_, cols)| cols.iter().cloned()).collect();
    if columns.len() != n {
        return Err(Error::StructureViolation(format!("found {} chain vectors for dimension {n}", columns.len())));
    }
    let spec = JordanSpec::new(blocks.iter().map(|(b, _)| *b).collect())?;
    let p = HMatrix::from_columns(&columns)?;
    let pinv = p.hinverse(tol.rank).map_err(|_| Error::VerificationFailed {
        what: "jordan transition matrix invertibility",
        residual: f64::INFINITY,
        bound: 0.0,
    })?;
    let residual = (&(&(&pinv * a) * &p) - &spec.to_hmatrix()).norm_max();
    let bound = tol.residual * (1.0 + a.norm_max());
    if !(residual <= bound) {
        return Err(Error::VerificationFailed { what: "jordan form P^-1 A P", residual, bound });
    }
    Ok(JordanResult { p, spec, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmat::push_forward_vector;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn q(a: f64, b: f64, c: f64, d: f64) -> Quaternion {
        Quaternion::new(a, b, c, d)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn spec(blocks: &[(Complex64, usize)]) -> JordanSpec {
        JordanSpec::new(blocks.iter().map(|&(value, size)| JordanBlock { value, size }).collect()).unwrap()
    }

    fn check_chain(m: &CMatrix, ch: &PairedChain) {
        for (t, v) in ch.chain.iter().enumerate() {
            let lhs = m.shift(ch.value).mat_vec(v);
            let rhs: Vec<Complex64> = if t == 0 { vec![c(0.0, 0.0); v.len()] } else { ch.chain[t - 1].clone() };
            assert!(lhs.iter().zip(&rhs).all(|(a, b)| (a - b).norm() < 1e-9), "chain relation broken");
        }
        for (t, v) in ch.mirror.iter().enumerate() {
            let lhs = m.shift(ch.value.conj()).mat_vec(v);
            let rhs: Vec<Complex64> = if t == 0 { vec![c(0.0, 0.0); v.len()] } else { ch.mirror[t - 1].clone() };
            assert!(lhs.iter().zip(&rhs).all(|(a, b)| (a - b).norm() < 1e-9), "mirror relation broken");
        }
    }

    fn sizes(chains: &[PairedChain]) -> Vec<usize> {
        let mut s: Vec<usize> = chains.iter().map(PairedChain::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    #[test]
    fn nilpotent_base_case() {
        let chains = paired_nilpotent_jordan(&CMatrix::zeros(2, 2), &tol()).unwrap();
        assert_eq!(sizes(&chains), vec![1]);
        let basis = CMatrix::from_columns(2, &[chains[0].chain[0].clone(), chains[0].mirror[0].clone()]);
        assert_eq!(basis.rank(1e-9), 2);
    }

    #[test]
    fn nilpotent_single_block() {
        let j2 = spec(&[(c(0.0, 0.0), 2)]).to_hmatrix();
        let m = j2.complex_adjoint().into_matrix();
        let chains = paired_nilpotent_jordan(&m, &tol()).unwrap();
        assert_eq!(sizes(&chains), vec![2]);
        check_chain(&m, &chains[0]);
    }

    #[test]
    fn nilpotent_mixed_blocks() {
        let a = spec(&[(c(0.0, 0.0), 2), (c(0.0, 0.0), 1)]).to_hmatrix();
        let m = a.complex_adjoint().into_matrix();
        let chains = paired_nilpotent_jordan(&m, &tol()).unwrap();
        // complex chain sizes {2,2,1,1} → one chain of each pair kept
        assert_eq!(sizes(&chains), vec![2, 1]);
        let all: Vec<Vec<Complex64>> =
            chains.iter().flat_map(|c| c.chain.iter().chain(&c.mirror).cloned()).collect();
        assert_eq!(CMatrix::from_columns(6, &all).rank(1e-9), 6);
        for ch in &chains {
            check_chain(&m, ch);
        }
    }

    #[test]
    fn nilpotent_rejects_bad_input() {
        let m = HMatrix::identity(1).complex_adjoint().into_matrix();
        assert!(matches!(paired_nilpotent_jordan(&m, &tol()), Err(Error::NotNilpotent { .. })));
        let bad = CMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        assert!(matches!(paired_nilpotent_jordan(&bad, &tol()), Err(Error::NotJCommuting { .. })));
    }

    #[test]
    fn complex_chain_examples() {
        let m = HMatrix::from_rows(&[vec![Quaternion::J]]).unwrap().complex_adjoint().into_matrix();
        let chains = complex_chains_for(&m, c(0.0, 1.0), &tol()).unwrap();
        assert_eq!(sizes(&chains), vec![1]);
        check_chain(&m, &chains[0]);

        let m = spec(&[(c(0.0, 1.0), 2)]).to_hmatrix().complex_adjoint().into_matrix();
        let chains = complex_chains_for(&m, c(0.0, 1.0), &tol()).unwrap();
        assert_eq!(sizes(&chains), vec![2]);
        check_chain(&m, &chains[0]);

        let m = HMatrix::diagonal(&[Quaternion::I, Quaternion::I]).complex_adjoint().into_matrix();
        let chains = complex_chains_for(&m, c(0.0, 1.0), &tol()).unwrap();
        assert_eq!(sizes(&chains), vec![1, 1]);

        assert!(matches!(complex_chains_for(&m, c(0.0, -1.0), &tol()), Err(Error::NotAnEigenvalue(_))));
        assert!(matches!(complex_chains_for(&m, c(3.0, 1.0), &tol()), Err(Error::NotAnEigenvalue(_))));
    }

    #[test]
    fn jordan_of_j() {
        let a = HMatrix::from_rows(&[vec![Quaternion::J]]).unwrap();
        let r = jordan_form(&a, &tol()).unwrap();
        assert!(spec_equivalent(&r.spec, &spec(&[(c(0.0, 1.0), 1)]), 1e-12));
        let p = r.p[(0, 0)];
        let back = p.inv().unwrap() * Quaternion::J * p;
        assert!((back - Quaternion::I).norm() < 1e-12);
    }

    #[test]
    fn jordan_of_upper_triangular_example() {
        // P·diag(i, 1+i)·P⁻¹ with P = [[1, j], [0, 1]]
        let a = HMatrix::from_rows(&[vec![Quaternion::I, q(0.0, 0.0, 1.0, -2.0)], vec![
            Quaternion::ZERO,
            q(1.0, 1.0, 0.0, 0.0),
        ]])
        .unwrap();
        let pm = HMatrix::from_rows(&[vec![Quaternion::ONE, Quaternion::J], vec![Quaternion::ZERO, Quaternion::ONE]])
            .unwrap();
        let d = HMatrix::diagonal(&[Quaternion::I, q(1.0, 1.0, 0.0, 0.0)]);
        let built = &(&pm * &d) * &pm.hinverse(1e-12).unwrap();
        assert!((&built - &a).norm_max() < 1e-14);

        let r = jordan_form(&a, &tol()).unwrap();
        assert!(spec_equivalent(&r.spec, &spec(&[(c(0.0, 1.0), 1), (c(1.0, 1.0), 1)]), 1e-9));
        assert!(r.residual < 1e-10);
    }

    #[test]
    fn jordan_of_jordan_block_is_itself() {
        let j3 = spec(&[(c(0.0, 0.0), 3)]).to_hmatrix();
        let r = jordan_form(&j3, &tol()).unwrap();
        assert!(spec_equivalent(&r.spec, &spec(&[(c(0.0, 0.0), 3)]), 1e-12));
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn spec_equivalence() {
        let s = spec(&[(c(0.0, 1.0), 2)]);
        assert!(spec_equivalent(&s, &s, 1e-12));
        let a = spec(&[(c(0.0, 1.0), 1), (c(1.0, 1.0), 1)]);
        let b = spec(&[(c(1.0, 1.0), 1), (c(0.0, 1.0), 1)]);
        assert!(spec_equivalent(&a, &b, 1e-12));
        let neg = JordanSpec { blocks: vec![JordanBlock { value: c(0.0, -1.0), size: 2 }] };
        assert!(spec_equivalent(&s, &neg, 1e-12));
        assert!(!spec_equivalent(&s, &spec(&[(c(0.0, 1.0), 1), (c(0.0, 1.0), 1)]), 1e-12));
    }

    #[test]
    fn prefixes_of_chains_are_invariant() {
        let a = spec(&[(c(1.0, 0.0), 3), (c(0.0, 1.0), 2)]).to_hmatrix();
        let pm = HMatrix::from_fn(5, |i, j| if i == j { Quaternion::ONE } else if j == i + 1 { Quaternion::K } else { Quaternion::ZERO });
        let a = &(&pm * &a) * &pm.hinverse(1e-12).unwrap();
        let m = a.complex_adjoint().into_matrix();
        for ch in all_paired_chains(&a, &tol()).unwrap() {
            for i in 1..=ch.len() {
                let span = CMatrix::from_columns(m.rows(), &ch.chain[..i]);
                let img = m.shift(ch.value).matmul(&span);
                assert_eq!(span.hstack(&img).rank(1e-8), i);
            }
        }
        let _ = push_forward_vector(&[Quaternion::ONE]);
    }
}
