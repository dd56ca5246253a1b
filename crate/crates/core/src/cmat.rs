//! Dense complex matrices and the handful of factorizations the crate needs.
//!
//! Rank decisions go through Householder QR with column pivoting: a diagonal
//! entry of `R` counts as zero when `|r_kk| < tol · (1 + max |a_ij|)`.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Complex64>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[Complex64]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    /// Columns `start..end`.
    pub fn col_range(&self, start: usize, end: usize) -> Self {
        Self::from_fn(self.rows, end - start, |i, j| self[(i, start + j)])
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn hstack(&self, other: &CMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    /// `self − λ·I`.
    pub fn shift(&self, lambda: Complex64) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] -= lambda;
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mat_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> CMatrix {
        let mut out = CMatrix::identity(self.rows);
        for _ in 0..e {
            out = out.matmul(self);
        }
        out
    }

    /// Threshold below which a pivot counts as zero.
    pub fn rank_threshold(&self, tol: f64) -> f64 {
        tol * (1.0 + self.norm_max())
    }

    pub fn pivoted_qr(&self) -> PivotedQr {
        PivotedQr::new(self)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.pivoted_qr().rank(self.rank_threshold(tol))
    }

    /// Orthonormal basis of the column space, as columns.
    pub fn range_basis(&self, tol: f64) -> CMatrix {
        let qr = self.pivoted_qr();
        let r = qr.rank(self.rank_threshold(tol));
        qr.q().col_range(0, r)
    }

    /// Orthonormal basis of `{x : self·x = 0}`, as columns.
    pub fn kernel_basis(&self, tol: f64) -> CMatrix {
        let qr = self.adjoint().pivoted_qr();
        let r = qr.rank(self.rank_threshold(tol));
        qr.q().col_range(r, self.cols)
    }

    /// Minimal-norm least-squares solution of `self·x = b`.
    pub fn lstsq_min_norm(&self, b: &[Complex64], tol: f64) -> Vec<Complex64> {
        assert_eq!(b.len(), self.rows);
        let qr = self.adjoint().pivoted_qr();
        let r = qr.rank(self.rank_threshold(tol));
        if r == 0 {
            return vec![ZERO; self.cols];
        }
        // x = Q₁·y with Q₁ spanning the row space, so x is orthogonal to the kernel.
        let q1 = qr.q().col_range(0, r);
        let aq = self.matmul(&q1);
        let y = PivotedQr::new(&aq).solve_full_rank(b);
        q1.mat_vec(&y)
    }

    /// LU with partial pivoting; `Singular` when a pivot falls below the rank threshold.
    pub fn lu(&self, tol: f64) -> Result<Lu> {
        Lu::new(self, self.rank_threshold(tol))
    }

    pub fn inverse(&self, tol: f64) -> Result<CMatrix> {
        Ok(self.lu(tol)?.inverse())
    }

    /// Orthonormal basis of the part of `span(space)` orthogonal to the
    /// orthonormal columns of `sub`.
    pub fn complement_within(space: &CMatrix, sub: &CMatrix, tol: f64) -> CMatrix {
        let projected = if sub.cols() == 0 {
            space.clone()
        } else {
            space - &sub.matmul(&sub.adjoint().matmul(space))
        };
        // The threshold is taken relative to the unprojected basis scale.
        let qr = projected.pivoted_qr();
        let r = qr.rank(tol * (1.0 + space.norm_max()));
        qr.q().col_range(0, r)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, o: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, o: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale(-ONE)
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, o: &CMatrix) -> CMatrix {
        self.matmul(o)
    }
}

/// Householder QR with column pivoting, `A·Π = Q·R`.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    rows: usize,
    cols: usize,
    /// Householder vectors, one per eliminated column, each of length `rows - k`.
    reflectors: Vec<Vec<Complex64>>,
    r: CMatrix,
    perm: Vec<usize>,
}

impl PivotedQr {
    fn new(a: &CMatrix) -> Self {
        let (m, n) = (a.rows, a.cols);
        let mut r = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut reflectors = Vec::new();
        for k in 0..m.min(n) {
            // pivot on the largest remaining column norm
            let (best, best_norm) = (k..n)
                .map(|j| (j, (k..m).map(|i| r[(i, j)].norm_sqr()).sum::<f64>()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best != k {
                for i in 0..m {
                    let t = r[(i, k)];
                    r[(i, k)] = r[(i, best)];
                    r[(i, best)] = t;
                }
                perm.swap(k, best);
            }
            let norm = best_norm.sqrt();
            let mut v: Vec<Complex64> = (k..m).map(|i| r[(i, k)]).collect();
            if norm == 0.0 {
                reflectors.push(vec![ZERO; m - k]);
                continue;
            }
            let x0 = v[0];
            let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
            let alpha = -phase * norm;
            v[0] -= alpha;
            let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if vn == 0.0 {
                reflectors.push(vec![ZERO; m - k]);
                continue;
            }
            for z in &mut v {
                *z /= vn;
            }
            apply_reflector(&mut r, &v, k, k);
            for i in k + 1..m {
                r[(i, k)] = ZERO;
            }
            reflectors.push(v);
        }
        Self { rows: m, cols: n, reflectors, r, perm }
    }

    pub fn r(&self) -> &CMatrix {
        &self.r
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Number of diagonal entries of `R` with modulus at least `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        (0..self.rows.min(self.cols))
            .take_while(|&k| self.r[(k, k)].norm() >= threshold)
            .count()
    }

    /// The full unitary factor `Q` (rows × rows).
    pub fn q(&self) -> CMatrix {
        let mut q = CMatrix::identity(self.rows);
        for (k, v) in self.reflectors.iter().enumerate().rev() {
            apply_reflector(&mut q, v, k, 0);
        }
        q
    }

    /// Least-squares solve assuming `A` has full column rank.
    fn solve_full_rank(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.cols;
        let mut y = b.to_vec();
        for (k, v) in self.reflectors.iter().enumerate() {
            let s: Complex64 = v.iter().zip(&y[k..]).map(|(vi, yi)| vi.conj() * yi).sum();
            for (vi, yi) in v.iter().zip(y[k..].iter_mut()) {
                *yi -= vi * s * 2.0;
            }
        }
        let mut z = vec![ZERO; n];
        for k in (0..n).rev() {
            let mut s = y[k];
            for j in k + 1..n {
                s -= self.r[(k, j)] * z[j];
            }
            z[k] = s / self.r[(k, k)];
        }
        let mut x = vec![ZERO; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        x
    }
}

/// Applies `I − 2vv*` to rows `k..` of `a`, touching columns `c0..`.
fn apply_reflector(a: &mut CMatrix, v: &[Complex64], k: usize, c0: usize) {
    for j in c0..a.cols {
        let s: Complex64 = v.iter().enumerate().map(|(t, vt)| vt.conj() * a[(k + t, j)]).sum();
        if s == ZERO {
            continue;
        }
        for (t, vt) in v.iter().enumerate() {
            a[(k + t, j)] -= vt * s * 2.0;
        }
    }
}

/// `P·A = L·U` with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    fn new(a: &CMatrix, threshold: f64) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension("LU needs a square matrix".into()));
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| lu[(x, k)].norm().total_cmp(&lu[(y, k)].norm()))
                .unwrap();
            if lu[(p, k)].norm() < threshold || lu[(p, k)].norm() == 0.0 {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
            }
            let piv = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                if f == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.rows;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                x[i] = x[i] - u * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn solve_matrix(&self, b: &CMatrix) -> CMatrix {
        let cols: Vec<Vec<Complex64>> = b.columns().iter().map(|c| self.solve(c)).collect();
        CMatrix::from_columns(b.rows(), &cols)
    }

    pub fn inverse(&self) -> CMatrix {
        self.solve_matrix(&CMatrix::identity(self.lu.rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> CMatrix {
        CMatrix::from_rows(&[
            vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 2.0), c(1.0, -1.0), c(3.0, 0.0)],
            vec![c(-1.0, 0.0), c(0.5, 0.5), c(2.0, 2.0)],
        ])
        .unwrap()
    }

    #[test]
    fn qr_reconstructs() {
        let a = sample();
        let qr = a.pivoted_qr();
        let q = qr.q();
        let qa = q.matmul(qr.r());
        for (k, &p) in qr.perm().iter().enumerate() {
            for i in 0..3 {
                assert!((qa[(i, k)] - a[(i, p)]).norm() < 1e-12);
            }
        }
        let qq = q.adjoint().matmul(&q);
        assert!((&qq - &CMatrix::identity(3)).norm_max() < 1e-12);
    }

    #[test]
    fn kernel_of_rank_deficient() {
        let a = sample();
        // append a column equal to col0 + i·col1
        let extra: Vec<Complex64> = (0..3).map(|i| a[(i, 0)] + c(0.0, 1.0) * a[(i, 1)]).collect();
        let b = a.hstack(&CMatrix::from_columns(3, &[extra]));
        assert_eq!(b.rank(1e-9), 3);
        let k = b.kernel_basis(1e-9);
        assert_eq!(k.cols(), 1);
        assert!(b.matmul(&k).norm_max() < 1e-12);
    }

    #[test]
    fn min_norm_solution() {
        // x + y = 2 has minimal-norm solution (1, 1)
        let a = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)]]).unwrap();
        let x = a.lstsq_min_norm(&[c(2.0, 0.0)], 1e-12);
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((x[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn inverse_and_singular() {
        let a = sample();
        let inv = a.inverse(1e-12).unwrap();
        assert!((&a.matmul(&inv) - &CMatrix::identity(3)).norm_max() < 1e-12);
        let s = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(4.0, 0.0)]])
            .unwrap();
        assert!(matches!(s.inverse(1e-12), Err(Error::Singular)));
    }
}
