//! Complex Schur form `M = Q·T·Q*` with reordering of the diagonal.

use num_complex::Complex64;

use crate::cmat::CMatrix;
use crate::error::{Error, Result};

const SCHUR_MAX_ITER: usize = 10_000;

/// Unitary `q` and upper triangular `t` with `m = q·t·q*`.
#[derive(Debug, Clone)]
pub struct SchurForm {
    pub q: CMatrix,
    pub t: CMatrix,
}

fn rotation(x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    if r == 0.0 {
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        (x / r, y / r)
    }
}

/// Applies `G* = [[c̄, s̄], [−s, c]]` to rows `k, k+1`.
fn rotate_rows(m: &mut CMatrix, k: usize, c: Complex64, s: Complex64) {
    for j in 0..m.cols() {
        let (u, v) = (m[(k, j)], m[(k + 1, j)]);
        m[(k, j)] = c.conj() * u + s.conj() * v;
        m[(k + 1, j)] = -s * u + c * v;
    }
}

/// Applies `G = [[c, −s̄], [s, c̄]]` to columns `k, k+1`.
fn rotate_cols(m: &mut CMatrix, k: usize, c: Complex64, s: Complex64) {
    for i in 0..m.rows() {
        let (u, v) = (m[(i, k)], m[(i, k + 1)]);
        m[(i, k)] = u * c + v * s;
        m[(i, k + 1)] = -u * s.conj() + v * c.conj();
    }
}

/// Householder reduction to upper Hessenberg form, accumulating into `q`.
fn hessenberg(h: &mut CMatrix, q: &mut CMatrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let phase = if x[0] == Complex64::new(0.0, 0.0) { Complex64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let mut v = x;
        v[0] += phase * norm;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= vn);
        // H ← (I − 2vv*) H (I − 2vv*)
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| vt.conj() * h[(k + 1 + t, j)]).sum();
            for (t, vt) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= vt * dot * 2.0;
            }
        }
        for target in [&mut *h, &mut *q] {
            for i in 0..n {
                let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| target[(i, k + 1 + t)] * vt).sum();
                for (t, vt) in v.iter().enumerate() {
                    target[(i, k + 1 + t)] -= dot * vt.conj() * 2.0;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (r1, r2) = (mean + disc, mean - disc);
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

impl SchurForm {
    /// Hessenberg reduction followed by single-shift QR iteration.
    pub fn new(m: &CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("Schur form of a {}x{} matrix", m.rows(), m.cols())));
        }
        let n = m.rows();
        let mut t = m.clone();
        let mut q = CMatrix::identity(n);
        hessenberg(&mut t, &mut q);
        let tiny = f64::EPSILON * m.norm_fro().max(f64::MIN_POSITIVE);
        let zero = Complex64::new(0.0, 0.0);
        let mut hi = n.saturating_sub(1);
        let mut iter = 0;
        let mut total = 0;
        while hi > 0 {
            let mut lo = hi;
            while lo > 0 {
                let sub = t[(lo, lo - 1)].norm();
                if sub <= f64::EPSILON * (t[(lo, lo)].norm() + t[(lo - 1, lo - 1)].norm()) || sub <= tiny {
                    t[(lo, lo - 1)] = zero;
                    break;
                }
                lo -= 1;
            }
            if lo == hi {
                hi -= 1;
                iter = 0;
                continue;
            }
            iter += 1;
            total += 1;
            if total > SCHUR_MAX_ITER {
                return Err(Error::NoConvergence { iterations: SCHUR_MAX_ITER });
            }
            let mu = if iter % 10 == 0 {
                // exceptional shift to break cycles
                t[(hi, hi)] + Complex64::new(0.75, 0.5) * t[(hi, hi - 1)].norm()
            } else {
                wilkinson_shift(t[(hi - 1, hi - 1)], t[(hi - 1, hi)], t[(hi, hi - 1)], t[(hi, hi)])
            };
            for k in lo..=hi {
                t[(k, k)] -= mu;
            }
            let mut rotations = Vec::with_capacity(hi - lo);
            for k in lo..hi {
                let (c, s) = rotation(t[(k, k)], t[(k + 1, k)]);
                rotate_rows(&mut t, k, c, s);
                t[(k + 1, k)] = zero;
                rotations.push((k, c, s));
            }
            for &(k, c, s) in &rotations {
                rotate_cols(&mut t, k, c, s);
                rotate_cols(&mut q, k, c, s);
            }
            for k in lo..=hi {
                t[(k, k)] += mu;
            }
        }
        for i in 0..n {
            for j in 0..i {
                t[(i, j)] = zero;
            }
        }
        Ok(Self { q, t })
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }

    /// Exchanges the diagonal entries at `k` and `k + 1`.
    fn swap(&mut self, k: usize) {
        let n = self.t.rows();
        let a = self.t[(k, k)];
        let b = self.t[(k, k + 1)];
        let d = self.t[(k + 1, k + 1)];
        // eigenvector of the 2 × 2 block for the eigenvalue d
        let (x1, x2) = (b, d - a);
        let norm = (x1.norm_sqr() + x2.norm_sqr()).sqrt();
        if norm == 0.0 {
            return;
        }
        let (g11, g21) = (x1 / norm, x2 / norm);
        let (g12, g22) = (-g21.conj(), g11.conj());
        for j in 0..n {
            let (u, v) = (self.t[(k, j)], self.t[(k + 1, j)]);
            self.t[(k, j)] = g11.conj() * u + g21.conj() * v;
            self.t[(k + 1, j)] = g12.conj() * u + g22.conj() * v;
        }
        for i in 0..n {
            let (u, v) = (self.t[(i, k)], self.t[(i, k + 1)]);
            self.t[(i, k)] = u * g11 + v * g21;
            self.t[(i, k + 1)] = u * g12 + v * g22;
            let (u, v) = (self.q[(i, k)], self.q[(i, k + 1)]);
            self.q[(i, k)] = u * g11 + v * g21;
            self.q[(i, k + 1)] = u * g12 + v * g22;
        }
        self.t[(k + 1, k)] = Complex64::new(0.0, 0.0);
        self.t[(k, k)] = d;
        self.t[(k + 1, k + 1)] = a;
    }

    /// Moves the selected diagonal positions to the front, keeping their order.
    pub fn reorder(&mut self, select: &[bool]) {
        let mut flags = select.to_vec();
        let mut front = 0;
        for j in 0..flags.len() {
            if !flags[j] {
                continue;
            }
            for k in (front..j).rev() {
                self.swap(k);
                flags.swap(k, k + 1);
            }
            front += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn decomposition_and_reordering() {
        let m = CMatrix::from_fn(5, 5, |i, j| c((i * 3 + j) as f64 % 7.0 - 3.0, (i as f64 - j as f64) * 0.5));
        let mut s = SchurForm::new(&m).unwrap();
        let back = s.q.matmul(&s.t).matmul(&s.q.adjoint());
        assert!((&back - &m).norm_max() < 1e-12);
        let ev = s.eigenvalues();
        s.reorder(&[false, false, true, false, true]);
        let moved = s.eigenvalues();
        assert!((moved[0] - ev[2]).norm() < 1e-10 && (moved[1] - ev[4]).norm() < 1e-10);
        let back = s.q.matmul(&s.t).matmul(&s.q.adjoint());
        assert!((&back - &m).norm_max() < 1e-12);
        assert!((&s.q.adjoint().matmul(&s.q) - &CMatrix::identity(5)).norm_max() < 1e-13);
        // leading columns span an invariant subspace
        let q2 = s.q.col_range(0, 2);
        let h = q2.adjoint().matmul(&m.matmul(&q2));
        assert!((&m.matmul(&q2) - &q2.matmul(&h)).norm_max() < 1e-12);
    }
}
