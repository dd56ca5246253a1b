//! Univariate polynomials over ℝ and ℂ, the Chinese-remainder (Hermite)
//! construction, and a clustering root finder.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cmat::CMatrix;
use crate::error::{Error, Result};
use crate::hmat::HMatrix;
use crate::spectral::{EigenKind, SpectralEntry, Spectrum};

const CZERO: Complex64 = Complex64::new(0.0, 0.0);
const CONE: Complex64 = Complex64::new(1.0, 0.0);

/// Real polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl RealPoly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(CZERO, |acc, &c| acc * z + c)
    }

    pub fn add(&self, o: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RealPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RealPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &RealPoly) -> RealPoly {
        if self.is_zero() || o.is_zero() {
            return RealPoly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RealPoly::new(out)
    }

    pub fn scale(&self, s: f64) -> RealPoly {
        RealPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Remainder of division by `m` (nonzero).
    pub fn rem(&self, m: &RealPoly) -> RealPoly {
        assert!(!m.is_zero(), "division by the zero polynomial");
        let dm = m.degree();
        let lead = m.leading();
        let mut r = self.coeffs.clone();
        while r.len() > dm && !r.is_empty() {
            let k = r.len() - 1;
            let f = r[k] / lead;
            for (j, &mc) in m.coeffs.iter().enumerate() {
                r[k - dm + j] -= f * mc;
            }
            r.pop();
        }
        RealPoly::new(r)
    }

    /// `self(inner(x)) mod modulus`, by Horner's rule in the quotient ring.
    pub fn compose_mod(&self, inner: &RealPoly, modulus: &RealPoly) -> RealPoly {
        let inner = inner.rem(modulus);
        self.coeffs
            .iter()
            .rev()
            .fold(RealPoly::zero(), |acc, &c| acc.mul(&inner).add(&RealPoly::constant(c)).rem(modulus))
    }

    pub fn to_complex(&self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Horner evaluation at a quaternionic matrix; real coefficients are central in ℍ.
    pub fn eval_at_hmatrix(&self, a: &HMatrix) -> HMatrix {
        let n = a.n();
        let mut acc = HMatrix::zeros(n);
        for &c in self.coeffs.iter().rev() {
            acc = &acc * a;
            for i in 0..n {
                acc[(i, i)].a += c;
            }
        }
        acc
    }

    pub fn eval_at_cmatrix(&self, m: &CMatrix) -> CMatrix {
        self.to_complex().eval_at_cmatrix(m)
    }

    /// Forward error scale for Horner evaluation at a matrix of norm `norm`.
    pub fn eval_scale(&self, norm: f64) -> f64 {
        self.coeffs.iter().enumerate().map(|(k, c)| c.abs() * norm.powi(k as i32)).sum()
    }
}

/// Complex polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&CZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(CZERO)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(CZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    /// Coefficients of the Taylor expansion about `z0`: `p(x) = Σ t_k (x − z0)^k`.
    pub fn taylor_at(&self, z0: Complex64) -> Vec<Complex64> {
        // repeated synthetic division
        let mut c = self.coeffs.clone();
        let mut out = Vec::with_capacity(c.len());
        while !c.is_empty() {
            let mut acc = CZERO;
            let mut q = vec![CZERO; c.len() - 1];
            for k in (0..c.len()).rev() {
                acc = acc * z0 + c[k];
                if k > 0 {
                    q[k - 1] = acc;
                }
            }
            out.push(acc);
            c = q;
        }
        out
    }

    pub fn conj(&self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn eval_at_cmatrix(&self, m: &CMatrix) -> CMatrix {
        let n = m.rows();
        let mut acc = CMatrix::zeros(n, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.matmul(m);
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }
}

/// One congruence `h ≡ target (mod (x − root)^mult)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Congruence {
    pub target: Complex64,
    pub root: Complex64,
    pub mult: usize,
}

/// A system of congruences with pairwise coprime moduli, optionally
/// together with `h ≡ 0 (mod x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceSystem {
    congruences: Vec<Congruence>,
    mod_x: bool,
}

impl CongruenceSystem {
    /// The `mod x` congruence is dropped when 0 is already a modulus root.
    pub fn new(congruences: Vec<Congruence>, with_mod_x: bool) -> Self {
        let zero_is_root = congruences.iter().any(|c| c.root == CZERO);
        Self { congruences, mod_x: with_mod_x && !zero_is_root }
    }

    pub fn congruences(&self) -> &[Congruence] {
        &self.congruences
    }

    pub fn has_mod_x(&self) -> bool {
        self.mod_x
    }

    /// Degree of the product of all moduli.
    pub fn modulus_degree(&self) -> usize {
        self.congruences.iter().map(|c| c.mult).sum::<usize>() + usize::from(self.mod_x)
    }

    /// All congruences including `0 mod x`, as Hermite data.
    fn hermite_data(&self) -> Vec<Congruence> {
        let mut all = self.congruences.clone();
        if self.mod_x {
            all.push(Congruence { target: CZERO, root: CZERO, mult: 1 });
        }
        all
    }

    fn check_distinct(&self) -> Result<()> {
        let all = self.hermite_data();
        for (i, a) in all.iter().enumerate() {
            if a.mult == 0 {
                return Err(Error::Dimension("congruence multiplicity must be positive".into()));
            }
            for b in &all[i + 1..] {
                let scale = 1.0 + a.root.norm().max(b.root.norm());
                if (a.root - b.root).norm() <= 1e-12 * scale {
                    return Err(Error::DuplicateModulus(format!("{}", a.root)));
                }
            }
        }
        Ok(())
    }
}

/// Confluent Newton form `h(x) = Σ c_k Π_{j<k} (x − z_j)` of a Hermite interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonForm {
    pub nodes: Vec<Complex64>,
    pub coeffs: Vec<Complex64>,
}

impl NewtonForm {
    pub fn to_monomial(&self) -> ComplexPoly {
        let k = self.coeffs.len();
        if k == 0 {
            return ComplexPoly::zero();
        }
        let mut acc = vec![self.coeffs[k - 1]];
        for t in (0..k - 1).rev() {
            // acc ← acc·(x − z_t) + c_t
            let z = self.nodes[t];
            let mut next = vec![CZERO; acc.len() + 1];
            for (i, &a) in acc.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * z;
            }
            next[0] += self.coeffs[t];
            acc = next;
        }
        ComplexPoly::new(acc)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        let k = self.coeffs.len();
        (0..k).rev().fold(CZERO, |acc, t| acc * (x - self.nodes[t]) + self.coeffs[t])
    }

    /// Nested evaluation at a matrix.
    pub fn eval_at_cmatrix(&self, m: &CMatrix) -> CMatrix {
        let n = m.rows();
        let mut acc = CMatrix::zeros(n, n);
        for t in (0..self.coeffs.len()).rev() {
            acc = acc.matmul(&m.shift(self.nodes[t]));
            for i in 0..n {
                acc[(i, i)] += self.coeffs[t];
            }
        }
        acc
    }
}

/// Orders distinct points so each maximizes the product of distances to the
/// ones before it (Leja order), starting from the largest modulus.
fn leja_order(points: &[Complex64]) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..points.len()).collect();
    let mut order = Vec::with_capacity(points.len());
    while !remaining.is_empty() {
        let score = |i: usize| -> f64 {
            if order.is_empty() {
                points[i].norm()
            } else {
                order.iter().map(|&j: &usize| (points[i] - points[j]).norm().max(1e-300).ln()).sum()
            }
        };
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .map(|(pos, &i)| (pos, score(i)))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        order.push(remaining.remove(pos));
    }
    order
}

/// Interpolation data at one point: the Taylor coefficients
/// `h(z), h'(z), h''(z)/2!, …` the interpolant must reproduce.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteNode {
    pub point: Complex64,
    pub taylor: Vec<Complex64>,
}

/// Confluent divided differences for general Hermite data at distinct points.
pub fn hermite_interpolant(data: &[HermiteNode]) -> Result<NewtonForm> {
    let order = leja_order(&data.iter().map(|d| d.point).collect::<Vec<_>>());
    let mut nodes = Vec::new();
    let mut owner = Vec::new();
    for &i in &order {
        for _ in 0..data[i].taylor.len() {
            nodes.push(data[i].point);
            owner.push(i);
        }
    }
    let n = nodes.len();
    // column t of the table holds f[z_i .. z_{i+t}]
    let mut table: Vec<Complex64> = owner.iter().map(|&i| data[i].taylor[0]).collect();
    let mut coeffs = Vec::with_capacity(n);
    if n > 0 {
        coeffs.push(table[0]);
    }
    for t in 1..n {
        let mut next = Vec::with_capacity(n - t);
        for i in 0..n - t {
            let (za, zb) = (nodes[i], nodes[i + t]);
            if za == zb {
                // t + 1 copies of one node: the t-th Taylor coefficient
                next.push(data[owner[i]].taylor[t]);
            } else {
                next.push((table[i + 1] - table[i]) / (zb - za));
            }
        }
        table = next;
        coeffs.push(table[0]);
    }
    Ok(NewtonForm { nodes, coeffs })
}

/// Confluent divided differences for the congruence system.
pub fn hermite_newton(sys: &CongruenceSystem) -> Result<NewtonForm> {
    sys.check_distinct()?;
    let data: Vec<HermiteNode> = sys
        .hermite_data()
        .iter()
        .map(|c| {
            let mut taylor = vec![CZERO; c.mult];
            taylor[0] = c.target;
            HermiteNode { point: c.root, taylor }
        })
        .collect();
    hermite_interpolant(&data)
}

/// Minimal-degree solution of the congruence system.
pub fn crt_solve(sys: &CongruenceSystem) -> Result<ComplexPoly> {
    Ok(hermite_newton(sys)?.to_monomial())
}

/// Coefficientwise average of `h₀` with its conjugate.
pub fn realify(h0: &ComplexPoly) -> RealPoly {
    RealPoly::new(h0.coeffs().iter().map(|c| c.re).collect())
}

/// Clustering parameters for [`roots_with_multiplicity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterOptions {
    /// Smallest merge radius, relative to `max(1, max |root|)`.
    pub tol_cluster: f64,
    /// Relative perturbation level assumed for the coefficients; a root of
    /// multiplicity `k` may scatter over a radius of about `noise^(1/k)`.
    pub noise: f64,
    pub max_iter: usize,
    /// The points are eigenvalues of a complex adjoint rather than roots of
    /// a polynomial: `k` folded points then come from Jordan blocks of size
    /// at most `k/2`, which bounds the scatter by `noise^(2/k)`.
    pub adjoint_eigenvalues: bool,
}

impl Default for ClusterOptions {
    fn default() -> Self {
        Self { tol_cluster: 1e-6, noise: 1e-12, max_iter: 500, adjoint_eigenvalues: false }
    }
}

impl ClusterOptions {
    fn radius(&self, k: usize, scale: f64) -> f64 {
        let block = if self.adjoint_eigenvalues { (k / 2).max(1) } else { k };
        self.tol_cluster.max(self.noise.powf(1.0 / block as f64)) * scale
    }
}

/// Aberth–Ehrlich simultaneous iteration. Returns all `deg p` roots.
pub fn aberth_roots(p: &RealPoly, max_iter: usize) -> Result<Vec<Complex64>> {
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    // exact zero roots are split off first
    let low = p.coeffs().iter().take_while(|&&c| c == 0.0).count();
    let q = RealPoly::new(p.coeffs()[low..].to_vec());
    let mut roots = vec![CZERO; low];
    let d = q.degree();
    if d == 0 {
        return Ok(roots);
    }
    let lead = q.leading();
    let monic: Vec<Complex64> = q.coeffs().iter().map(|&c| Complex64::new(c / lead, 0.0)).collect();
    let poly = ComplexPoly::new(monic);
    let dpoly = poly.derivative();
    if d == 1 {
        roots.push(-poly.coeff(0));
        return Ok(roots);
    }
    let radius = 1.0 + poly.coeffs()[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / d as f64 + 0.4))
        .collect();
    let abs_coeffs = RealPoly::new(poly.coeffs().iter().map(|c| c.norm()).collect());
    let backward = |z: Complex64| poly.eval(z).norm() / abs_coeffs.eval(z.norm()).max(f64::MIN_POSITIVE);

    let mut converged = false;
    for _ in 0..max_iter {
        let mut biggest = 0.0f64;
        for k in 0..d {
            let pk = poly.eval(z[k]);
            if pk == CZERO {
                continue;
            }
            let ratio = pk / dpoly.eval(z[k]);
            let sum: Complex64 = (0..d).filter(|&j| j != k).map(|j| CONE / (z[k] - z[j])).sum();
            let w = ratio / (CONE - ratio * sum);
            if w.re.is_finite() && w.im.is_finite() {
                z[k] -= w;
                biggest = biggest.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if biggest <= 4.0 * f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged && z.iter().any(|&r| backward(r) > 1e-8) {
        return Err(Error::NoConvergence { iterations: max_iter });
    }
    roots.extend(z);
    Ok(roots)
}

/// A root of multiplicity `k` is a simple root of the `(k−1)`-th derivative;
/// Newton on that derivative sharpens the cluster centroid. The centroid is
/// kept when the iteration leaves the cluster.
fn polish_multiple_root(p: &ComplexPoly, center: Complex64, k: usize, radius: f64) -> Complex64 {
    if k < 2 {
        return center;
    }
    let mut d = p.clone();
    for _ in 1..k {
        d = d.derivative();
    }
    let dd = d.derivative();
    let mut z = center;
    for _ in 0..50 {
        let slope = dd.eval(z);
        if slope == CZERO {
            break;
        }
        let step = d.eval(z) / slope;
        z -= step;
        if !(z.re.is_finite() && z.im.is_finite()) || (z - center).norm() > radius {
            return center;
        }
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Groups points (already folded into the closed upper half plane) into
/// clusters. Returns `(centroid, members)` pairs.
fn cluster_points(points: &[Complex64], opts: &ClusterOptions) -> Vec<(Complex64, usize)> {
    let scale = points.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut unassigned: Vec<Complex64> = points.to_vec();
    let mut out = Vec::new();
    while let Some(&seed) = unassigned.first() {
        let mut best: Vec<usize> = vec![0];
        let mut best_center = seed;
        for k in 2..=unassigned.len() {
            let mut center = seed;
            let mut members = Vec::new();
            for _ in 0..4 {
                let mut idx: Vec<usize> = (0..unassigned.len()).collect();
                idx.sort_by(|&a, &b| {
                    (unassigned[a] - center).norm().total_cmp(&(unassigned[b] - center).norm())
                });
                idx.truncate(k);
                center = idx.iter().map(|&i| unassigned[i]).sum::<Complex64>() / k as f64;
                members = idx;
            }
            let spread = members.iter().map(|&i| (unassigned[i] - center).norm()).fold(0.0, f64::max);
            // re-centering may drift onto a neighbouring cluster
            if members.contains(&0) && spread <= opts.radius(k, scale) {
                best = members;
                best_center = center;
            }
        }
        out.push((best_center, best.len()));
        best.sort_unstable_by(|a, b| b.cmp(a));
        for i in best {
            unassigned.remove(i);
        }
    }
    out
}

/// All roots of `p` with multiplicities, as a conjugation-closed spectrum.
pub fn roots_with_multiplicity(p: &RealPoly, opts: &ClusterOptions) -> Result<Spectrum> {
    if p.degree() == 0 {
        return Err(Error::Dimension("root finding needs degree at least 1".into()));
    }
    let roots = aberth_roots(p, opts.max_iter)?;
    cluster_spectrum(&roots, opts, Some(&p.to_complex()))
}

/// Groups a conjugation-closed (up to rounding) point set into a spectrum.
///
/// Points are folded into the upper half plane before clustering, so a
/// non-real cluster always contains a point together with its conjugate
/// partner; near-real clusters are snapped onto the real axis. When the
/// points are roots of `poly`, multiple roots are sharpened on it.
pub fn cluster_spectrum(points: &[Complex64], opts: &ClusterOptions, poly: Option<&ComplexPoly>) -> Result<Spectrum> {
    let folded: Vec<Complex64> = points.iter().map(|z| Complex64::new(z.re, z.im.abs())).collect();
    let scale = folded.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let polish = |z: Complex64, k: usize, radius: f64| match poly {
        Some(p) => polish_multiple_root(p, z, k, radius),
        None => z,
    };
    let mut entries = Vec::new();
    for (center, k) in cluster_points(&folded, opts) {
        let radius = opts.radius(k, scale);
        if center.im <= radius {
            let re = polish(Complex64::new(center.re, 0.0), k, radius).re;
            entries.push(SpectralEntry { value: Complex64::new(re, 0.0), mult: k, kind: EigenKind::Real });
        } else if k % 2 == 0 {
            let value = polish(center, k / 2, radius);
            entries.push(SpectralEntry { value, mult: k / 2, kind: EigenKind::Pair });
        } else {
            return Err(Error::StructureViolation(format!("odd cluster of {k} points near non-real {center}")));
        }
    }
    Ok(Spectrum::new(entries))
}
