//! Dense complex matrices and vectors.
//!
//! [`Operator`] is a square complex matrix backed by `faer`. Everything in the
//! crate (observables, projections, density matrices, Bell operators) is an
//! `Operator`. Tensor products use the Kronecker convention with the left
//! factor as the slow index: `(a ⊗ b)[(i, k), (j, l)] = a[i, j] * b[k, l]`
//! with row `i * db + k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for structural predicates.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Eigenvalues closer than this merge into one spectral projector.
pub const CLUSTER_TOL: f64 = 1e-8;

#[inline]
fn to_c64(z: Complex64) -> c64 {
    c64::new(z.re, z.im)
}

#[inline]
fn from_c64(z: c64) -> Complex64 {
    Complex64::new(z.re, z.im)
}

/// One tensor factor of a bipartite space `C^d1 ⊗ C^d2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Factor {
    Left,
    Right,
}

/// Square complex matrix.
#[derive(Clone)]
pub struct Operator {
    mat: Mat<c64>,
}

impl Operator {
    fn wrap(mat: Mat<c64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Operator { mat }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::wrap(Mat::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::wrap(Mat::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self::wrap(Mat::from_fn(dim, dim, |i, j| to_c64(f(i, j))))
    }

    /// Builds an operator from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self::from_fn(dim, |i, j| entries[i * dim + j]))
    }

    /// Builds an operator with real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        let entries: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_row_major(dim, &entries)
    }

    pub fn diag(values: &[f64]) -> Self {
        let d = values.len();
        Self::from_fn(d, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// The matrix unit `|i⟩⟨j|` (zero based).
    pub fn matrix_unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Mat::<c64>::zeros(dim, dim);
        m.write(i, j, c64::new(1.0, 0.0));
        Self::wrap(m)
    }

    /// The rank-one operator `|u⟩⟨v|`.
    pub fn outer(u: &Vector, v: &Vector) -> Self {
        assert_eq!(u.dim(), v.dim(), "outer product of vectors with different dimensions");
        Self::from_fn(u.dim(), |i, j| u[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        from_c64(self.mat.read(i, j))
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push(self.get(i, j));
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::wrap(self.mat.adjoint().to_owned())
    }

    pub fn transpose(&self) -> Self {
        Self::wrap(self.mat.transpose().to_owned())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::wrap(faer::scale(to_c64(k)) * &self.mat)
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(Complex64::new(k, 0.0))
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Operator) -> Self {
        &(self * other) - &(other * self)
    }

    /// Hilbert–Schmidt inner product `tr(self* · other)`.
    pub fn hs_inner(&self, other: &Operator) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        let d = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..d {
            for i in 0..d {
                acc += self.get(i, j).conj() * other.get(i, j);
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm_l2()
    }

    /// Operator (spectral) norm: the largest singular value.
    pub fn op_norm(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        if self.selfadjoint_residual() <= 1e-14 * self.frobenius_norm().max(1.0) {
            return self
                .hermitian_part()
                .mat
                .selfadjoint_eigenvalues(faer::Side::Lower)
                .into_iter()
                .fold(0.0_f64, |m, x| m.max(x.abs()));
        }
        self.mat
            .singular_values()
            .into_iter()
            .fold(0.0_f64, f64::max)
    }

    /// Frobenius distance `‖self − other‖_F`.
    pub fn distance(&self, other: &Operator) -> f64 {
        (self - other).frobenius_norm()
    }

    pub fn selfadjoint_residual(&self) -> f64 {
        (&self.mat - self.mat.adjoint()).norm_l2()
    }

    /// `(self + self*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::wrap(faer::scale(c64::new(0.5, 0.0)) * (&self.mat + self.mat.adjoint()))
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        assert_eq!(self.dim(), v.dim(), "operator/vector dimension mismatch");
        let col = Mat::<c64>::from_fn(v.dim(), 1, |i, _| to_c64(v[i]));
        let out = &self.mat * &col;
        Vector((0..v.dim()).map(|i| from_c64(out.read(i, 0))).collect())
    }

    /// `⟨v, self v⟩`.
    pub fn expectation(&self, v: &Vector) -> Complex64 {
        v.inner(&self.apply(v))
    }

    /// Kronecker product, left factor slow.
    pub fn kron(&self, other: &Operator) -> Self {
        let db = other.dim();
        Self::from_fn(self.dim() * db, |r, c| {
            self.get(r / db, c / db) * other.get(r % db, c % db)
        })
    }

    /// `self ⊗ I` (for [`Factor::Left`]) or `I ⊗ self` (for [`Factor::Right`]).
    pub fn embed(&self, side: Factor, other_dim: usize) -> Self {
        let id = Operator::identity(other_dim);
        match side {
            Factor::Left => self.kron(&id),
            Factor::Right => id.kron(self),
        }
    }

    pub fn is_selfadjoint(&self, tol: f64) -> bool {
        is_selfadjoint(self, tol)
    }

    pub fn is_contraction(&self, tol: f64) -> bool {
        is_contraction(self, tol)
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        is_projection(self, tol)
    }

    pub fn is_partial_isometry(&self, tol: f64) -> bool {
        is_partial_isometry(self, tol)
    }
}

impl PartialEq for Operator {
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && (0..self.dim())
                .all(|j| (0..self.dim()).all(|i| self.mat.read(i, j) == other.mat.read(i, j)))
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim();
        if d > 8 {
            return write!(f, "Operator({d}x{d}, |·|_F = {:e})", self.frobenius_norm());
        }
        writeln!(f, "Operator({d}x{d}) [")?;
        for i in 0..d {
            write!(f, "  ")?;
            for j in 0..d {
                let z = self.get(i, j);
                write!(f, "{:>8.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Operator> for &Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
                Operator::wrap((&self.mat).$method(&rhs.mat))
            }
        }
        impl $trait<Operator> for Operator {
            type Output = Operator;
            fn $method(self, rhs: Operator) -> Operator {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Operator> for Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                (&self).$method(rhs)
            }
        }
        impl $trait<Operator> for &Operator {
            type Output = Operator;
            fn $method(self, rhs: Operator) -> Operator {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator::wrap(-&self.mat)
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        -&self
    }
}

impl Mul<&Vector> for &Operator {
    type Output = Vector;
    fn mul(self, rhs: &Vector) -> Vector {
        self.apply(rhs)
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for Operator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorRepr {
            dim: self.dim(),
            entries: self.to_row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = OperatorRepr::deserialize(d)?;
        let entries: Vec<Complex64> = repr
            .entries
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        Operator::from_row_major(repr.dim, &entries).map_err(serde::de::Error::custom)
    }
}

/// Column vector in `C^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(Vec<Complex64>);

impl Vector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Vector(entries)
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Vector(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// Standard basis vector `e_i` (zero based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale_real(1.0 / n))
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Vector) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Vector(self.0.iter().map(|z| z * k).collect())
    }

    pub fn scale_real(&self, k: f64) -> Self {
        Vector(self.0.iter().map(|z| z * k).collect())
    }

    pub fn kron(&self, other: &Vector) -> Self {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.0 {
            for b in &other.0 {
                out.push(a * b);
            }
        }
        Vector(out)
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> Operator {
        Operator::outer(self, self)
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        (self - other).norm()
    }

    /// Multiplies by a unit phase so that the first entry of largest modulus is real and positive.
    pub fn phase_fixed(&self) -> Self {
        let mut best = 0;
        let mut best_abs = -1.0;
        for (i, z) in self.0.iter().enumerate() {
            // strict comparison keeps the first maximal index
            if z.norm() > best_abs + 1e-12 {
                best = i;
                best_abs = z.norm();
            }
        }
        if best_abs <= 0.0 {
            return self.clone();
        }
        let z = self.0[best];
        self.scale(z.conj() / z.norm())
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Serialize for Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.0.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(Vector(
            pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
        ))
    }
}

/// `a ⊗ b`.
pub fn tensor(a: &Operator, b: &Operator) -> Operator {
    a.kron(b)
}

/// Singular values (nonincreasing) of the `dim × n` matrix whose columns are `cols`.
pub fn column_singular_values(cols: &[Vector]) -> Vec<f64> {
    let Some(first) = cols.first() else {
        return Vec::new();
    };
    let rows = first.dim();
    let m = Mat::<c64>::from_fn(rows, cols.len(), |i, j| to_c64(cols[j][i]));
    m.singular_values()
}

/// Number of singular values above `tol` for the matrix with columns `cols`.
pub fn column_rank(cols: &[Vector], tol: f64) -> usize {
    column_singular_values(cols)
        .into_iter()
        .filter(|&s| s > tol)
        .count()
}

/// Eigendecomposition of a self-adjoint operator, eigenvalues ascending.
pub struct Eigen {
    values: Vec<f64>,
    vectors: Mat<c64>,
}

/// Diagonalizes `h`. Fails with `NotSelfAdjoint` when `‖h − h*‖_F > 1e-10`.
pub fn eigh(h: &Operator) -> Result<Eigen> {
    let residual = h.selfadjoint_residual();
    if residual > DEFAULT_TOL {
        return Err(Error::NotSelfAdjoint { residual });
    }
    let sym = h.hermitian_part();
    let evd = sym.mat.selfadjoint_eigendecomposition(faer::Side::Lower);
    let s = evd.s().column_vector();
    let u = evd.u();
    let d = h.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| s.read(a).re.total_cmp(&s.read(b).re));
    let values = order.iter().map(|&k| s.read(k).re).collect();
    let vectors = Mat::from_fn(d, d, |i, j| u.read(i, order[j]));
    Ok(Eigen { values, vectors })
}

impl Eigen {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vector {
        Vector(
            (0..self.dim())
                .map(|i| from_c64(self.vectors.read(i, k)))
                .collect(),
        )
    }

    /// Groups consecutive eigenvalues whose gap is at most [`CLUSTER_TOL`].
    /// Returns `(mean eigenvalue, index range)` per cluster.
    pub fn clusters(&self) -> Vec<(f64, std::ops::Range<usize>)> {
        let mut out = Vec::new();
        let mut start = 0;
        for k in 1..=self.values.len() {
            if k == self.values.len() || self.values[k] - self.values[k - 1] > CLUSTER_TOL {
                let mean = self.values[start..k].iter().sum::<f64>() / (k - start) as f64;
                out.push((mean, start..k));
                start = k;
            }
        }
        out
    }

    /// Orthogonal projector onto the span of eigenvectors `range`.
    pub fn projector(&self, range: std::ops::Range<usize>) -> Operator {
        let cols = self.vectors.as_ref().subcols(range.start, range.len());
        Operator::wrap(&cols * cols.adjoint())
    }

    /// `Σ f(λ_k) |u_k⟩⟨u_k|`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> Operator {
        let d = self.dim();
        let weighted = Mat::from_fn(d, d, |i, j| {
            let w = f(self.values[j]);
            self.vectors.read(i, j) * c64::new(w, 0.0)
        });
        Operator::wrap(&weighted * self.vectors.adjoint())
    }

    /// Orthonormal eigenvectors whose eigenvalue lies within [`CLUSTER_TOL`] of `target`.
    pub fn eigenspace(&self, target: f64) -> Vec<Vector> {
        (0..self.dim())
            .filter(|&k| (self.values[k] - target).abs() <= CLUSTER_TOL)
            .map(|k| self.vector(k))
            .collect()
    }
}

/// One term of a spectral decomposition.
#[derive(Clone, Debug)]
pub struct SpectralTerm {
    pub eigenvalue: f64,
    pub projector: Operator,
}

/// Spectral decomposition `h = Σ λ_i P_i` with eigenvalues merged at [`CLUSTER_TOL`].
pub fn spectral(h: &Operator) -> Result<Vec<SpectralTerm>> {
    let eig = eigh(h)?;
    Ok(eig
        .clusters()
        .into_iter()
        .map(|(eigenvalue, range)| SpectralTerm {
            eigenvalue,
            projector: eig.projector(range),
        })
        .collect())
}

/// Operator sign `Σ sgn(λ_i) P_i` with `sgn(0) = 0`. Eigenvalues within
/// [`CLUSTER_TOL`] of zero count as zero.
pub fn op_sign(h: &Operator) -> Result<Operator> {
    let eig = eigh(h)?;
    Ok(eig.apply_fn(|x| {
        if x.abs() <= CLUSTER_TOL {
            0.0
        } else {
            x.signum()
        }
    }))
}

/// Traces out `traced` from an operator on `C^d1 ⊗ C^d2`.
pub fn partial_trace(rho: &Operator, dims: (usize, usize), traced: Factor) -> Result<Operator> {
    let (d1, d2) = dims;
    check_dims(rho, dims)?;
    Ok(match traced {
        Factor::Right => Operator::from_fn(d1, |i, j| {
            (0..d2).map(|k| rho.get(i * d2 + k, j * d2 + k)).sum()
        }),
        Factor::Left => Operator::from_fn(d2, |k, l| {
            (0..d1).map(|i| rho.get(i * d2 + k, i * d2 + l)).sum()
        }),
    })
}

/// Partial transpose on one factor of `C^d1 ⊗ C^d2`.
pub fn partial_transpose(rho: &Operator, dims: (usize, usize), side: Factor) -> Result<Operator> {
    let (_, d2) = dims;
    check_dims(rho, dims)?;
    Ok(Operator::from_fn(rho.dim(), |r, c| {
        let (i, k) = (r / d2, r % d2);
        let (j, l) = (c / d2, c % d2);
        match side {
            Factor::Right => rho.get(i * d2 + l, j * d2 + k),
            Factor::Left => rho.get(j * d2 + k, i * d2 + l),
        }
    }))
}

fn check_dims(rho: &Operator, (d1, d2): (usize, usize)) -> Result<()> {
    if rho.dim() != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            found: rho.dim(),
        });
    }
    Ok(())
}

pub fn is_selfadjoint(a: &Operator, tol: f64) -> bool {
    a.selfadjoint_residual() <= tol
}

pub fn is_contraction(a: &Operator, tol: f64) -> bool {
    a.op_norm() <= 1.0 + tol
}

pub fn is_projection(a: &Operator, tol: f64) -> bool {
    is_selfadjoint(a, tol) && (&(a * a) - a).frobenius_norm() <= tol
}

/// `a` is a partial isometry iff `a*a` is a projection.
pub fn is_partial_isometry(a: &Operator, tol: f64) -> bool {
    is_projection(&(&a.adjoint() * a), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> Operator {
        Operator::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn tensor_identity_and_kronecker_convention() {
        assert_eq!(tensor(&Operator::identity(2), &Operator::identity(2)), Operator::identity(4));
        let z = Operator::diag(&[1.0, -1.0]);
        assert_eq!(tensor(&z, &Operator::identity(2)), Operator::diag(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn tensor_factors_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let a = random::gaussian_operator(2, &mut rng);
            let b = random::gaussian_operator(2, &mut rng);
            let al = a.embed(Factor::Left, 2);
            let br = b.embed(Factor::Right, 2);
            assert_eq!(al.commutator(&br).frobenius_norm(), 0.0);
        }
    }

    #[test]
    fn spectral_of_diagonal() {
        let terms = spectral(&Operator::diag(&[3.0, 3.0, -1.0])).unwrap();
        assert_eq!(terms.len(), 2);
        assert!((terms[0].eigenvalue + 1.0).abs() < 1e-14);
        assert!((terms[0].projector.trace().re - 1.0).abs() < 1e-12);
        assert!((terms[1].eigenvalue - 3.0).abs() < 1e-14);
        assert!((terms[1].projector.trace().re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_of_zero_is_identity_projector() {
        let terms = spectral(&Operator::zeros(3)).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].eigenvalue, 0.0);
        assert!(terms[0].projector.distance(&Operator::identity(3)) < 1e-12);
    }

    #[test]
    fn spectral_of_pauli_x() {
        let terms = spectral(&sigma_x()).unwrap();
        assert_eq!(terms.len(), 2);
        let half_i = Operator::identity(2).scale_real(0.5);
        let half_x = sigma_x().scale_real(0.5);
        assert!((terms[0].eigenvalue + 1.0).abs() < 1e-14);
        assert!(terms[0].projector.distance(&(&half_i - &half_x)) < 1e-12);
        assert!((terms[1].eigenvalue - 1.0).abs() < 1e-14);
        assert!(terms[1].projector.distance(&(&half_i + &half_x)) < 1e-12);
    }

    #[test]
    fn spectral_rejects_non_selfadjoint() {
        let v = Operator::matrix_unit(2, 1, 0);
        assert!(matches!(spectral(&v), Err(Error::NotSelfAdjoint { .. })));
        assert!(matches!(op_sign(&v), Err(Error::NotSelfAdjoint { .. })));
    }

    #[test]
    fn op_sign_examples() {
        assert!(op_sign(&Operator::diag(&[2.0, -3.0, 0.0]))
            .unwrap()
            .distance(&Operator::diag(&[1.0, -1.0, 0.0]))
            < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random::unitary(3, &mut rng);
        let p = &(&u * &Operator::diag(&[1.0, 1.0, 0.0])) * &u.adjoint();
        assert!(op_sign(&p).unwrap().distance(&p) < 1e-12);
    }

    #[test]
    fn op_sign_attains_trace_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [2, 5, 9] {
            let h = random::hermitian(d, &mut rng);
            let s = op_sign(&h).unwrap();
            let abs_sum: f64 = eigh(&h).unwrap().values().iter().map(|x| x.abs()).sum();
            assert!(((&s * &h).trace().re - abs_sum).abs() < 1e-10);
            assert!(s.commutator(&h).frobenius_norm() < 1e-10);
            assert!(s.is_contraction(1e-10));
        }
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r1 = random::density(2, &mut rng);
        let r2 = random::density(3, &mut rng).scale_real(2.0);
        let rho = tensor(&r1, &r2);
        let traced = partial_trace(&rho, (2, 3), Factor::Right).unwrap();
        assert!(traced.distance(&r1.scale(r2.trace())) < 1e-12);
        let traced = partial_trace(&rho, (2, 3), Factor::Left).unwrap();
        assert!(traced.distance(&r2.scale(r1.trace())) < 1e-12);
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let s = 0.5_f64.sqrt();
        let phi = Vector::from_real(&[s, 0.0, 0.0, s]);
        let rho = phi.projector();
        let half = Operator::identity(2).scale_real(0.5);
        for side in [Factor::Left, Factor::Right] {
            assert!(partial_trace(&rho, (2, 2), side).unwrap().distance(&half) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_duality_on_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random::density(6, &mut rng);
        let reduced = partial_trace(&rho, (2, 3), Factor::Right).unwrap();
        assert!((reduced.trace() - rho.trace()).norm() < 1e-12);
        for i in 0..2 {
            for j in 0..2 {
                let x = Operator::matrix_unit(2, i, j);
                let lhs = (&reduced * &x).trace();
                let rhs = (&rho * &x.embed(Factor::Left, 3)).trace();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        let err = partial_trace(&Operator::identity(5), (2, 2), Factor::Right).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 4, found: 5 }));
    }

    #[test]
    fn predicates() {
        let shift = Operator::matrix_unit(2, 1, 0);
        assert!(shift.is_partial_isometry(DEFAULT_TOL));
        assert!(!shift.is_selfadjoint(DEFAULT_TOL));
        let id = Operator::identity(3);
        assert!(id.is_selfadjoint(DEFAULT_TOL));
        assert!(id.is_contraction(DEFAULT_TOL));
        assert!(id.is_projection(DEFAULT_TOL));
        assert!(id.is_partial_isometry(DEFAULT_TOL));
        assert!(!id.scale_real(2.0).is_contraction(DEFAULT_TOL));
    }

    #[test]
    fn op_norm_of_non_normal() {
        let a = Operator::from_row_major(2, &[c(0.0, 0.0), c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!((a.op_norm() - 3.0).abs() < 1e-12);
        assert!((Operator::diag(&[-2.0, 1.0]).op_norm() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let a = Operator::from_row_major(2, &[c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 1e-300), c(3.0, -4.0)])
            .unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"dim":2,"entries":[[1.0,2.0],[-0.5,0.0],[0.0,1e-300],[3.0,-4.0]]}"#);
        let back: Operator = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<Operator>(r#"{"dim":2,"entries":[[1.0,0.0]]}"#).is_err());
    }

    #[test]
    fn phase_fix_makes_largest_entry_positive() {
        let v = Vector::new(vec![c(0.0, 0.1), c(0.0, -0.9), c(0.3, 0.0)]);
        let w = v.phase_fixed();
        assert!((w[1] - c(0.9, 0.0)).norm() < 1e-15);
        assert!((w.norm() - v.norm()).abs() < 1e-15);
    }
}
