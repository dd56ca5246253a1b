//! Random test instances with known Jordan structure.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hmat::HMatrix;
use crate::jordan::{JordanBlock, JordanSpec};
use crate::quat::Quaternion;

const MAX_ATTEMPTS: usize = 200;

/// `A = P · Jordan(spec) · P⁻¹` together with the ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedInstance {
    pub a: HMatrix,
    pub p: HMatrix,
    pub spec: JordanSpec,
    /// 1-norm condition number of the adjoint of `p`.
    pub cond: f64,
}

/// Eigenvalues used by [`random_spec`] unless told otherwise.
pub const DEFAULT_GRID: [(f64, f64); 6] = [(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 0.0)];

/// A random partition of `n` into Jordan blocks, eigenvalues drawn from `grid`.
pub fn random_spec(n: usize, grid: &[Complex64], rng: &mut impl Rng) -> Result<JordanSpec> {
    if n == 0 || grid.is_empty() {
        return Err(Error::Dimension("need n >= 1 and a nonempty eigenvalue grid".into()));
    }
    let mut left = n;
    let mut blocks = Vec::new();
    while left > 0 {
        let size = rng.gen_range(1..=left);
        let value = grid[rng.gen_range(0..grid.len())];
        blocks.push(JordanBlock { value, size });
        left -= size;
    }
    JordanSpec::new(blocks)
}

pub fn default_grid() -> Vec<Complex64> {
    DEFAULT_GRID.iter().map(|&(re, im)| Complex64::new(re, im)).collect()
}

fn random_p(n: usize, rng: &mut ChaCha8Rng) -> HMatrix {
    HMatrix::from_fn(n, |_, _| {
        let mut c = || rng.gen_range(-1i32..=1) as f64;
        Quaternion::new(c(), c(), c(), c())
    })
}

/// 1-norm condition number of the adjoint of `a`, `None` if it is singular.
pub fn condition_number(a: &HMatrix) -> Option<f64> {
    condition_and_inverse(a).map(|(c, _)| c)
}

fn condition_and_inverse(a: &HMatrix) -> Option<(f64, HMatrix)> {
    let m = a.complex_adjoint().into_matrix();
    let inv = m.inverse(1e-12).ok()?;
    Some((m.norm_one() * inv.norm_one(), HMatrix::project_from_adjoint(&inv)))
}

/// Conjugates `Jordan(spec)` by a random matrix with integer components in
/// `{-1, 0, 1}`, redrawing until its condition number is at most `cond_bound`.
/// The same `(spec, seed, cond_bound)` always produces the same instance.
pub fn generate(spec: &JordanSpec, seed: u64, cond_bound: f64) -> Result<GeneratedInstance> {
    let n = spec.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jm = spec.to_hmatrix();
    for _ in 0..MAX_ATTEMPTS {
        let p = random_p(n, &mut rng);
        let Some((cond, pinv)) = condition_and_inverse(&p) else { continue };
        if cond > cond_bound {
            continue;
        }
        let a = &(&p * &jm) * &pinv;
        return Ok(GeneratedInstance { a, p, spec: spec.clone(), cond });
    }
    Err(Error::GenerationFailed(format!(
        "no transition matrix with condition number <= {cond_bound} after {MAX_ATTEMPTS} draws"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> JordanSpec {
        JordanSpec::new(vec![
            JordanBlock { value: Complex64::new(0.0, 1.0), size: 2 },
            JordanBlock { value: Complex64::new(1.0, 0.0), size: 1 },
        ])
        .unwrap()
    }

    #[test]
    fn deterministic() {
        let a = generate(&spec(), 7, 1e3).unwrap();
        let b = generate(&spec(), 7, 1e3).unwrap();
        assert_eq!(a, b);
        assert!(a.cond <= 1e3);
        let c = generate(&spec(), 8, 1e3).unwrap();
        assert_ne!(a.a, c.a);
    }

    #[test]
    fn conjugation_holds() {
        let g = generate(&spec(), 3, 1e3).unwrap();
        let lhs = &g.a * &g.p;
        let rhs = &g.p * &g.spec.to_hmatrix();
        assert!((&lhs - &rhs).norm_max() < 1e-10);
    }

    #[test]
    fn impossible_bound_fails() {
        assert!(matches!(generate(&spec(), 1, 0.5), Err(Error::GenerationFailed(_))));
    }
}
