//! Square quaternionic matrices and the complex adjoint.
//!
//! A quaternion vector `x + j·y` (with `x, y ∈ ℂⁿ`) is identified with the
//! complex vector `[x; y] ∈ ℂ²ⁿ`. Under this identification right
//! multiplication by `j` becomes the standard quaternionic structure
//! `J(x, y) = (−ȳ, x̄) = S·conj(v)` with `S = [[0, −I], [I, 0]]`, and a matrix
//! `A = Y + Z·j` acts by the block matrix `[[Y, −Z], [Z̄, Ȳ]]`.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::cmat::CMatrix;
use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Default relative threshold for rank decisions.
pub const TOL_RANK: f64 = 1e-9;

/// A quaternion column vector.
pub type HVector = Vec<Quaternion>;

/// Row-major `n × n` quaternionic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HMatrix {
    n: usize,
    entries: Vec<Quaternion>,
}

impl HMatrix {
    pub fn new(n: usize, entries: Vec<Quaternion>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("matrix dimension must be at least 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", entries.len())));
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows(rows: &[Vec<Quaternion>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix must be square".into()));
        }
        Self::new(n, rows.concat())
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![Quaternion::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Quaternion::ONE)
    }

    pub fn scalar(n: usize, q: Quaternion) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = q;
        }
        m
    }

    pub fn diagonal(d: &[Quaternion]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &q) in d.iter().enumerate() {
            m[(i, i)] = q;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self { n, entries }
    }

    /// Matrix with the given vectors as columns.
    pub fn from_columns(columns: &[HVector]) -> Result<Self> {
        let n = columns.len();
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::Dimension("need n columns of length n".into()));
        }
        if n == 0 {
            return Err(Error::Dimension("matrix dimension must be at least 1".into()));
        }
        Ok(Self::from_fn(n, |i, j| columns[j][i]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Quaternion] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn col(&self, j: usize) -> HVector {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    /// Largest entry norm `max |a_ij|`.
    pub fn norm_max(&self) -> f64 {
        self.entries.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|&q| q.scale(s)).collect() }
    }

    /// Left multiplication of every entry by `q` (the matrix `q·I·A`).
    pub fn left_scalar(&self, q: Quaternion) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|&e| q * e).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|q| q.b == 0.0 && q.c == 0.0 && q.d == 0.0)
    }

    pub fn mat_vec(&self, v: &[Quaternion]) -> HVector {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).fold(Quaternion::ZERO, |acc, (&a, &x)| acc + a * x))
            .collect()
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::identity(self.n);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// `A = Y + Z·j` with entry `a + bi + cj + dk` split as `a + bi` and `c + di`.
    pub fn split(&self) -> (CMatrix, CMatrix) {
        let n = self.n;
        let y = CMatrix::from_fn(n, n, |i, j| self[(i, j)].to_pair().0);
        let z = CMatrix::from_fn(n, n, |i, j| self[(i, j)].to_pair().1);
        (y, z)
    }

    /// The `2n × 2n` complex adjoint `[[Y, −Z], [Z̄, Ȳ]]`.
    pub fn complex_adjoint(&self) -> AdjointMatrix {
        let n = self.n;
        let m = CMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let (y, z) = self[(i % n, j % n)].to_pair();
            match (i < n, j < n) {
                (true, true) => y,
                (true, false) => -z,
                (false, true) => z.conj(),
                (false, false) => y.conj(),
            }
        });
        AdjointMatrix { n, m }
    }

    /// Inverse of [`HMatrix::complex_adjoint`]; fails with `NotJCommuting`
    /// when `m` is not of adjoint block form within `tol·(1 + ‖m‖)`.
    pub fn from_complex_adjoint(m: &CMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() || !m.rows().is_multiple_of(2) || m.rows() == 0 {
            return Err(Error::Dimension(format!(
                "complex adjoint must be 2n x 2n, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let residual = j_commutator_norm(m);
        if residual > tol * (1.0 + m.norm_max()) {
            return Err(Error::NotJCommuting { residual });
        }
        Ok(Self::project_from_adjoint(m))
    }

    /// Pulls back the nearest adjoint-form matrix without checking the
    /// block condition.
    pub fn project_from_adjoint(m: &CMatrix) -> Self {
        let n = m.rows() / 2;
        Self::from_fn(n, |i, j| {
            let y = (m[(i, j)] + m[(i + n, j + n)].conj()) * 0.5;
            let z = (m[(i + n, j)].conj() - m[(i, j + n)]) * 0.5;
            Quaternion::from_pair(y, z)
        })
    }

    /// Inverse computed through the complex adjoint.
    pub fn hinverse(&self, tol: f64) -> Result<Self> {
        let adj = self.complex_adjoint();
        let inv = adj.matrix().inverse(tol)?;
        Ok(Self::project_from_adjoint(&inv))
    }

    /// Reduced row echelon form over ℍ. Rows are combined by left
    /// multiplication only, so solution sets of `A·v = 0` with `v` a right
    /// ℍ-vector are preserved. Returns the reduced matrix and pivot columns.
    pub fn row_echelon(&self, tol: f64) -> (Vec<Vec<Quaternion>>, Vec<usize>) {
        let n = self.n;
        let threshold = tol * (1.0 + self.norm_max());
        let mut rows: Vec<Vec<Quaternion>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..n {
            if r == n {
                break;
            }
            let (p, mag) = (r..n)
                .map(|i| (i, rows[i][col].norm()))
                .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if mag < threshold {
                for row in rows.iter_mut().skip(r) {
                    row[col] = Quaternion::ZERO;
                }
                continue;
            }
            rows.swap(r, p);
            let inv = rows[r][col].inv().expect("pivot above threshold is nonzero");
            for x in rows[r].iter_mut() {
                *x = inv * *x;
            }
            rows[r][col] = Quaternion::ONE;
            for i in 0..n {
                if i == r {
                    continue;
                }
                let f = rows[i][col];
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = f * rows[r][j];
                    rows[i][j] -= t;
                }
                rows[i][col] = Quaternion::ZERO;
            }
            pivots.push(col);
            r += 1;
        }
        (rows, pivots)
    }

    pub fn rank_h(&self, tol: f64) -> usize {
        self.row_echelon(tol).1.len()
    }

    /// Right ℍ-basis of `{v : A·v = 0}`.
    pub fn hkernel(&self, tol: f64) -> Vec<HVector> {
        let n = self.n;
        let (rows, pivots) = self.row_echelon(tol);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Quaternion::ZERO; n];
                v[f] = Quaternion::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -rows[r][f];
                }
                v
            })
            .collect()
    }
}

/// `‖S·conj(M) − M·S‖_max`, zero exactly for adjoint-form matrices.
pub fn j_commutator_norm(m: &CMatrix) -> f64 {
    let n = m.rows() / 2;
    let mut worst = 0.0f64;
    for i in 0..2 * n {
        for j in 0..2 * n {
            let lhs = if i < n { -m[(i + n, j)].conj() } else { m[(i - n, j)].conj() };
            let rhs = if j < n { m[(i, j + n)] } else { -m[(i, j - n)] };
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// The standard quaternionic structure `J(x, y) = (−ȳ, x̄)` on `ℂ²ⁿ`.
pub fn apply_j(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len() / 2;
    let mut out = Vec::with_capacity(v.len());
    out.extend(v[n..].iter().map(|z| -z.conj()));
    out.extend(v[..n].iter().map(|z| z.conj()));
    out
}

/// `[x; y] ↦ x + j·y`.
pub fn pull_back_vector(v: &[Complex64]) -> HVector {
    let n = v.len() / 2;
    (0..n).map(|t| Quaternion::new(v[t].re, v[t].im, v[t + n].re, -v[t + n].im)).collect()
}

/// `x + j·y ↦ [x; y]`.
pub fn push_forward_vector(v: &[Quaternion]) -> Vec<Complex64> {
    let (x, y): (Vec<_>, Vec<_>) =
        v.iter().map(|q| (Complex64::new(q.a, q.b), Complex64::new(q.c, -q.d))).unzip();
    x.into_iter().chain(y).collect()
}

/// A complex `2n × 2n` matrix commuting with `J`, i.e. the image of an
/// [`HMatrix`] under the complex adjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointMatrix {
    n: usize,
    m: CMatrix,
}

impl AdjointMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }
}

impl Index<(usize, usize)> for HMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.entries[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for HMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.entries[i * self.n + j]
    }
}

impl Add for &HMatrix {
    type Output = HMatrix;
    fn add(self, o: &HMatrix) -> HMatrix {
        assert_eq!(self.n, o.n);
        HMatrix { n: self.n, entries: self.entries.iter().zip(&o.entries).map(|(&a, &b)| a + b).collect() }
    }
}

impl Sub for &HMatrix {
    type Output = HMatrix;
    fn sub(self, o: &HMatrix) -> HMatrix {
        assert_eq!(self.n, o.n);
        HMatrix { n: self.n, entries: self.entries.iter().zip(&o.entries).map(|(&a, &b)| a - b).collect() }
    }
}

impl Neg for &HMatrix {
    type Output = HMatrix;
    fn neg(self) -> HMatrix {
        self.scale(-1.0)
    }
}

impl Mul for &HMatrix {
    type Output = HMatrix;
    fn mul(self, o: &HMatrix) -> HMatrix {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = HMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = a * o[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }
}
