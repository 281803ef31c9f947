//! Finite-dimensional *-algebras: generation, commutants, membership, and the
//! hypothesis checks used by the constructions (Schlieder property, cyclic and
//! separating vectors).
//!
//! Tensor-factor algebras `M_d1 ⊗ I` and `I ⊗ M_d2` are kept structural so
//! that large ambient spaces never materialize a `d²`-element basis. Every
//! other algebra carries an explicit Hilbert–Schmidt orthonormal basis.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, column_rank, eigh, partial_trace, Factor, Operator, Vector};

/// Gram–Schmidt acceptance threshold for new basis elements.
pub const CLOSURE_TOL: f64 = 1e-10;

/// Singular values above this count toward the rank in cyclicity checks.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
enum Repr {
    /// `M_d1 ⊗ I_d2` for `Factor::Left`, `I_d1 ⊗ M_d2` for `Factor::Right`.
    TensorFactor { side: Factor, dims: (usize, usize) },
    Span { generators: Vec<Operator>, basis: Vec<Operator> },
}

/// A unital *-subalgebra of `M_dim`.
#[derive(Clone, Debug)]
pub struct VnAlgebra {
    dim: usize,
    repr: Repr,
}

impl VnAlgebra {
    /// The *-algebra generated by `generators` and the identity.
    pub fn generated_by(dim: usize, generators: Vec<Operator>) -> Result<Self> {
        for g in &generators {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.dim(),
                });
            }
        }
        let basis = close_under_products(dim, &generators);
        Ok(VnAlgebra {
            dim,
            repr: Repr::Span { generators, basis },
        })
    }

    /// `M_d1 ⊗ I` (left) or `I ⊗ M_d2` (right) on `C^d1 ⊗ C^d2`.
    pub fn tensor_factor(side: Factor, dims: (usize, usize)) -> Self {
        VnAlgebra {
            dim: dims.0 * dims.1,
            repr: Repr::TensorFactor { side, dims },
        }
    }

    /// All of `M_dim`.
    pub fn full(dim: usize) -> Self {
        Self::tensor_factor(Factor::Left, (dim, 1))
    }

    /// Scalar multiples of the identity.
    pub fn scalars(dim: usize) -> Self {
        Self::tensor_factor(Factor::Left, (1, dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Some((side, dims))` when the algebra is a recognized tensor factor.
    pub fn tensor_factor_of(&self) -> Option<(Factor, (usize, usize))> {
        match self.repr {
            Repr::TensorFactor { side, dims } => Some((side, dims)),
            Repr::Span { .. } => None,
        }
    }

    fn factor_dim(side: Factor, dims: (usize, usize)) -> usize {
        match side {
            Factor::Left => dims.0,
            Factor::Right => dims.1,
        }
    }

    /// Dimension of the algebra as a complex vector space.
    pub fn linear_dim(&self) -> usize {
        match &self.repr {
            Repr::TensorFactor { side, dims } => Self::factor_dim(*side, *dims).pow(2),
            Repr::Span { basis, .. } => basis.len(),
        }
    }

    pub fn generators(&self) -> Vec<Operator> {
        match &self.repr {
            Repr::TensorFactor { .. } => self.basis(),
            Repr::Span { generators, .. } => generators.clone(),
        }
    }

    /// Hilbert–Schmidt orthonormal basis.
    pub fn basis(&self) -> Vec<Operator> {
        match &self.repr {
            Repr::TensorFactor { side, dims } => {
                let d = Self::factor_dim(*side, *dims);
                let other = self.dim / d;
                let norm = 1.0 / (other as f64).sqrt();
                let mut out = Vec::with_capacity(d * d);
                for i in 0..d {
                    for j in 0..d {
                        out.push(
                            Operator::matrix_unit(d, i, j)
                                .embed(*side, other)
                                .scale_real(norm),
                        );
                    }
                }
                out
            }
            Repr::Span { basis, .. } => basis.clone(),
        }
    }

    /// Hilbert–Schmidt orthogonal projection of `x` onto the algebra.
    pub fn project(&self, x: &Operator) -> Result<Operator> {
        self.check_dim(x.dim())?;
        Ok(match &self.repr {
            Repr::TensorFactor { side, dims } => {
                let d = Self::factor_dim(*side, *dims);
                let other = self.dim / d;
                let traced = match side {
                    Factor::Left => Factor::Right,
                    Factor::Right => Factor::Left,
                };
                partial_trace(x, *dims, traced)?
                    .scale_real(1.0 / other as f64)
                    .embed(*side, other)
            }
            Repr::Span { basis, .. } => {
                let mut acc = Operator::zeros(self.dim);
                for b in basis {
                    acc = acc + b.scale(b.hs_inner(x));
                }
                acc
            }
        })
    }

    /// Frobenius norm of `x` minus its projection onto the algebra.
    pub fn residual(&self, x: &Operator) -> Result<f64> {
        Ok(x.distance(&self.project(x)?))
    }

    /// Membership: projection residual below `tol`.
    pub fn contains(&self, x: &Operator, tol: f64) -> Result<bool> {
        Ok(self.residual(x)? < tol)
    }

    /// The commutant `{X : XG = GX for every generator G}`.
    pub fn commutant(&self) -> VnAlgebra {
        match &self.repr {
            Repr::TensorFactor { side, dims } => {
                let other = match side {
                    Factor::Left => Factor::Right,
                    Factor::Right => Factor::Left,
                };
                VnAlgebra::tensor_factor(other, *dims)
            }
            Repr::Span { basis, .. } => {
                let basis = commutant_basis(self.dim, basis);
                VnAlgebra {
                    dim: self.dim,
                    repr: Repr::Span {
                        generators: basis.clone(),
                        basis,
                    },
                }
            }
        }
    }

    /// True iff every basis element commutes with every other.
    pub fn is_abelian(&self) -> bool {
        if let Some((side, dims)) = self.tensor_factor_of() {
            return Self::factor_dim(side, dims) == 1;
        }
        let basis = self.basis();
        basis.iter().enumerate().all(|(i, a)| {
            basis[i + 1..]
                .iter()
                .all(|b| a.commutator(b).frobenius_norm() <= CLOSURE_TOL)
        })
    }

    /// Whether the two algebras span the same subspace of `M_dim`.
    pub fn same_span(&self, other: &VnAlgebra, tol: f64) -> Result<bool> {
        if self.dim != other.dim || self.linear_dim() != other.linear_dim() {
            return Ok(false);
        }
        for b in self.basis() {
            if other.residual(&b)? > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The vectors `{B_j x}` over the basis.
    fn orbit(&self, x: &Vector) -> Vec<Vector> {
        match &self.repr {
            Repr::TensorFactor { side, dims } => {
                let (d1, d2) = *dims;
                let mut cols = Vec::new();
                match side {
                    Factor::Left => {
                        // (E_ij ⊗ I) x moves block j of x into block i
                        for i in 0..d1 {
                            for j in 0..d1 {
                                let mut v = vec![Complex64::new(0.0, 0.0); self.dim];
                                v[i * d2..(i + 1) * d2].copy_from_slice(&x.as_slice()[j * d2..(j + 1) * d2]);
                                cols.push(Vector::new(v));
                            }
                        }
                    }
                    Factor::Right => {
                        for k in 0..d2 {
                            for l in 0..d2 {
                                let mut v = vec![Complex64::new(0.0, 0.0); self.dim];
                                for i in 0..d1 {
                                    v[i * d2 + k] = x[i * d2 + l];
                                }
                                cols.push(Vector::new(v));
                            }
                        }
                    }
                }
                cols
            }
            Repr::Span { basis, .. } => basis.iter().map(|b| b.apply(x)).collect(),
        }
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }
}

/// Adds `cand` to the orthonormal `basis` if it is independent of it.
fn try_extend(basis: &mut Vec<Operator>, cand: &Operator) -> bool {
    let scale = cand.frobenius_norm();
    if scale == 0.0 {
        return false;
    }
    let mut r = cand.clone();
    for _ in 0..2 {
        for b in basis.iter() {
            r = &r - &b.scale(b.hs_inner(&r));
        }
    }
    let n = r.frobenius_norm();
    if n <= CLOSURE_TOL * scale.max(1.0) {
        return false;
    }
    basis.push(r.scale_real(1.0 / n));
    true
}

fn close_under_products(dim: usize, generators: &[Operator]) -> Vec<Operator> {
    let mut letters: Vec<Operator> = Vec::with_capacity(2 * generators.len());
    for g in generators {
        letters.push(g.clone());
        if !g.is_selfadjoint(0.0) {
            letters.push(g.adjoint());
        }
    }
    let mut basis = Vec::new();
    try_extend(&mut basis, &Operator::identity(dim));
    let mut next = 0;
    // every word in the letters is reached by left multiplication from I
    while next < basis.len() && basis.len() < dim * dim {
        let current = basis[next].clone();
        for g in &letters {
            let cand = g * &current;
            try_extend(&mut basis, &cand);
            if basis.len() == dim * dim {
                break;
            }
        }
        next += 1;
    }
    basis
}

/// Null space of `X ↦ ([X, G])_G` over the given elements.
///
/// With row-major vectorization, `vec(XG − GX) = (I ⊗ Gᵀ − G ⊗ I) vec(X)`, so
/// the Gram matrix `Σ L*L` has the closed form
/// `I ⊗ (Ḡ Gᵀ) − G ⊗ Ḡ − G* ⊗ Gᵀ + G*G ⊗ I` per element.
fn commutant_basis(dim: usize, elements: &[Operator]) -> Vec<Operator> {
    let id = Operator::identity(dim);
    let mut gram = Operator::zeros(dim * dim);
    for g in elements {
        let gt = g.transpose();
        let gbar = g.adjoint().transpose();
        let gstar = g.adjoint();
        gram = gram + id.kron(&(&gbar * &gt)) - g.kron(&gbar) - gstar.kron(&gt)
            + (&gstar * g).kron(&id);
    }
    let gram = gram.hermitian_part();
    let eig = eigh(&gram).expect("Gram matrix is Hermitian");
    let top = eig.values().last().copied().unwrap_or(0.0).max(1.0);
    let mut basis = Vec::new();
    for (k, &lambda) in eig.values().iter().enumerate() {
        if lambda > 1e-9 * top {
            break;
        }
        let v = eig.vector(k);
        let x = Operator::from_row_major(dim, v.as_slice()).expect("length d²");
        try_extend(&mut basis, &x);
    }
    basis
}

/// `R₁ ⊆ R₂′`: two algebras on the same space whose generators commute.
#[derive(Clone, Debug)]
pub struct CommutingPair {
    left: VnAlgebra,
    right: VnAlgebra,
}

impl CommutingPair {
    pub fn new(left: VnAlgebra, right: VnAlgebra) -> Result<Self> {
        if left.dim != right.dim {
            return Err(Error::DimensionMismatch {
                expected: left.dim,
                found: right.dim,
            });
        }
        let pair = CommutingPair { left, right };
        if pair.tensor_dims().is_none() {
            let rg = pair.right.generators();
            for a in pair.left.generators() {
                for b in &rg {
                    let residual = a.commutator(b).frobenius_norm();
                    if residual > matrix::DEFAULT_TOL {
                        return Err(Error::NonCommuting { residual });
                    }
                }
            }
        }
        Ok(pair)
    }

    /// `(M_d1 ⊗ I, I ⊗ M_d2)`.
    pub fn tensor_split(d1: usize, d2: usize) -> Self {
        CommutingPair {
            left: VnAlgebra::tensor_factor(Factor::Left, (d1, d2)),
            right: VnAlgebra::tensor_factor(Factor::Right, (d1, d2)),
        }
    }

    pub fn left(&self) -> &VnAlgebra {
        &self.left
    }

    pub fn right(&self) -> &VnAlgebra {
        &self.right
    }

    pub fn dim(&self) -> usize {
        self.left.dim
    }

    /// Factor dimensions when the pair is recognized as `(M_d1 ⊗ I, I ⊗ M_d2)`.
    pub fn tensor_dims(&self) -> Option<(usize, usize)> {
        match (self.left.tensor_factor_of(), self.right.tensor_factor_of()) {
            (Some((Factor::Left, a)), Some((Factor::Right, b))) if a == b => Some(a),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchliederMode {
    Structural,
    Search,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Certainty {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug)]
pub struct SchliederReport {
    pub holds: bool,
    /// Nonzero `(A, B)` with `AB ≈ 0`, when one was found.
    pub witness: Option<(Operator, Operator)>,
    pub certainty: Certainty,
}

/// Checks the Schlieder property (`AB = 0` forces `A = 0` or `B = 0`).
///
/// Structural mode gives an exact verdict for recognized tensor splits and
/// otherwise falls back to the search. The search first tries generator pairs
/// (and complements of projection generators) exactly, then `trials` random
/// spectral projections `A` of the left algebra, solving for `B` in the right
/// algebra with `AB = 0`. Not finding a witness is only heuristic evidence.
pub fn schlieder_check(
    pair: &CommutingPair,
    mode: SchliederMode,
    trials: usize,
    seed: u64,
) -> Result<SchliederReport> {
    if mode == SchliederMode::Structural && pair.tensor_dims().is_some() {
        return Ok(SchliederReport {
            holds: true,
            witness: None,
            certainty: Certainty::Exact,
        });
    }
    let annihilates = |a: &Operator, b: &Operator| {
        let (na, nb) = (a.frobenius_norm(), b.frobenius_norm());
        na > 0.0 && nb > 0.0 && (a * b).frobenius_norm() < 1e-10 * na * nb
    };

    let with_complements = |alg: &VnAlgebra| {
        let id = Operator::identity(alg.dim());
        let mut out = Vec::new();
        for g in alg.generators() {
            if g.is_projection(matrix::DEFAULT_TOL) {
                out.push(&id - &g);
            }
            out.push(g);
        }
        out
    };
    let lc = with_complements(&pair.left);
    let rc = with_complements(&pair.right);
    for a in &lc {
        for b in &rc {
            if annihilates(a, b) {
                return Ok(SchliederReport {
                    holds: false,
                    witness: Some((a.clone(), b.clone())),
                    certainty: Certainty::Exact,
                });
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let left_basis = pair.left.basis();
    let right_basis = pair.right.basis();
    for _ in 0..trials {
        let mut h = Operator::zeros(pair.dim());
        for b in &left_basis {
            let c: f64 = rng.sample(StandardNormal);
            h = h + b.hermitian_part().scale_real(c);
        }
        let Ok(terms) = matrix::spectral(&h) else {
            continue;
        };
        for term in terms {
            let p = term.projector;
            if let Some(b) = annihilated_element(&p, &right_basis) {
                if annihilates(&p, &b) {
                    return Ok(SchliederReport {
                        holds: false,
                        witness: Some((p, b)),
                        certainty: Certainty::Heuristic,
                    });
                }
            }
        }
    }
    Ok(SchliederReport {
        holds: true,
        witness: None,
        certainty: Certainty::Heuristic,
    })
}

/// The element `B = Σ c_k R_k` minimizing `‖P B‖` over unit coefficient vectors.
fn annihilated_element(p: &Operator, basis: &[Operator]) -> Option<Operator> {
    let m = basis.len();
    if m == 0 {
        return None;
    }
    let images: Vec<Operator> = basis.iter().map(|r| p * r).collect();
    let gram = Operator::from_fn(m, |j, k| images[j].hs_inner(&images[k]));
    let eig = eigh(&gram.hermitian_part()).ok()?;
    let c = eig.vector(0);
    let mut b = Operator::zeros(p.dim());
    for (k, r) in basis.iter().enumerate() {
        b = b + r.scale(c[k]);
    }
    Some(b)
}

/// `x` is cyclic for `alg` iff `{B_j x}` spans the ambient space.
pub fn cyclic_check(x: &Vector, alg: &VnAlgebra) -> Result<bool> {
    alg.check_dim(x.dim())?;
    let cols = alg.orbit(x);
    Ok(column_rank(&cols, RANK_TOL) == alg.dim())
}

/// `x` is separating for `alg` iff it is cyclic for the commutant.
pub fn separating_check(x: &Vector, alg: &VnAlgebra) -> Result<bool> {
    alg.check_dim(x.dim())?;
    cyclic_check(x, &alg.commutant())
}

/// Maximally entangled unit vector `Σ_i e_i ⊗ e_i / √d` in `C^d ⊗ C^d`.
pub fn maximally_entangled(d: usize) -> Vector {
    let s = 1.0 / (d as f64).sqrt();
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        entries[i * d + i] = Complex64::new(s, 0.0);
    }
    Vector::new(entries)
}
