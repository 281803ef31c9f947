//! Seeded random instances used by property suites, restarts and the CLI.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::{op_sign, Operator, Vector};

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Operator with i.i.d. standard complex Gaussian entries.
pub fn gaussian_operator<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    Operator::from_fn(dim, |_, _| gaussian(rng))
}

pub fn hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    gaussian_operator(dim, rng).hermitian_part()
}

pub fn unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vector {
    loop {
        let v = Vector::new((0..dim).map(|_| gaussian(rng)).collect());
        if let Ok(u) = v.normalized() {
            return u;
        }
    }
}

/// Haar-ish unitary from Gram–Schmidt on Gaussian columns.
pub fn unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let mut cols: Vec<Vector> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = unit_vector(dim, rng);
        for _ in 0..2 {
            for u in &cols {
                let p = u.inner(&v);
                v = &v - &u.scale(p);
            }
        }
        if v.norm() > 1e-6 {
            cols.push(v.normalized().expect("nonzero after check"));
        }
    }
    Operator::from_fn(dim, |i, j| cols[j][i])
}

/// Density matrix `G G* / tr(G G*)` for Gaussian `G` (full rank almost surely).
pub fn density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let g = gaussian_operator(dim, rng);
    let w = &g * &g.adjoint();
    let t = w.trace().re;
    w.scale_real(1.0 / t).hermitian_part()
}

/// Density matrix of a random pure state.
pub fn pure_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    unit_vector(dim, rng).projector()
}

/// Self-adjoint unitary `op_sign(H)` for a Gaussian Hermitian `H`.
pub fn sign_contraction<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    op_sign(&hermitian(dim, rng)).expect("Hermitian by construction")
}

/// Random nonzero partial isometry with `V² = 0` on `C^dim` (`dim ≥ 2`):
/// maps the first `r` columns of a random unitary onto the next `r`.
pub fn nilpotent_isometry<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    assert!(dim >= 2, "nilpotent partial isometries need dim >= 2");
    let rank = rng.random_range(1..=dim / 2);
    let u = unitary(dim, rng);
    let col = |k: usize| Vector::new((0..dim).map(|i| u.get(i, k)).collect());
    let mut v = Operator::zeros(dim);
    for k in 0..rank {
        v = v + Operator::outer(&col(rank + k), &col(k));
    }
    v
}
