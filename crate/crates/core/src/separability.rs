//! States on `C^d1 ⊗ C^d2`, separable decompositions and conditioning.
//!
//! Conditioning by a left operator `A` maps `ρ ↦ AρA*/tr(AρA*)`. Applied to a
//! separable decomposition it conditions each left factor and reweights by
//! `λᵢ ωᵢ(A*A)/ω(A*A)`, so separability survives. Contrapositively, a vector
//! whose conditioned state violates a Bell inequality was entangled to begin
//! with; [`steer_to_violation`] builds such an `A` for cyclic vectors.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{cyclic_check, CommutingPair};
use crate::bell::{gadget_from_isometry, sqrt2_eigenvector, BellPack};
use crate::error::{Error, Result};
use crate::matrix::{eigh, partial_trace, partial_transpose, Factor, Operator, Vector, DEFAULT_TOL};
use crate::random;
use crate::seesaw::{seesaw_beta, SeesawOptions, SeesawResult};

/// Trace tolerance for states and decomposition weights.
pub const TRACE_TOL: f64 = 1e-12;

/// Below this, `ω(A*A)` counts as zero and conditioning falls back to `ω`.
pub const ZERO_EXPECTATION: f64 = 1e-14;

/// Density matrix on `C^d1 ⊗ C^d2`.
#[derive(Clone, Debug, Serialize)]
pub struct State {
    dims: (usize, usize),
    rho: Operator,
}

fn density_defect(rho: &Operator) -> Option<String> {
    let residual = rho.selfadjoint_residual();
    if residual > DEFAULT_TOL {
        return Some(format!("not self-adjoint (residual {residual:e})"));
    }
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
        return Some(format!("trace {} + {}i is not 1", trace.re, trace.im));
    }
    match eigh(rho) {
        Ok(eig) => {
            let min = eig.values().first().copied().unwrap_or(0.0);
            (min < -DEFAULT_TOL).then(|| format!("negative eigenvalue {min:e}"))
        }
        Err(e) => Some(e.to_string()),
    }
}

impl State {
    /// Validates `rho`: self-adjoint and PSD within 1e-10, trace 1 within 1e-12.
    pub fn new(rho: Operator, dims: (usize, usize)) -> Result<Self> {
        if rho.dim() != dims.0 * dims.1 {
            return Err(Error::DimensionMismatch {
                expected: dims.0 * dims.1,
                found: rho.dim(),
            });
        }
        if let Some(reason) = density_defect(&rho) {
            return Err(Error::InvalidState(reason));
        }
        Ok(State {
            dims,
            rho: rho.hermitian_part(),
        })
    }

    /// Vector state `ω_x`; `x` is normalized first.
    pub fn from_vector(x: &Vector, dims: (usize, usize)) -> Result<Self> {
        if x.dim() != dims.0 * dims.1 {
            return Err(Error::DimensionMismatch {
                expected: dims.0 * dims.1,
                found: x.dim(),
            });
        }
        Ok(State {
            dims,
            rho: x.normalized()?.projector(),
        })
    }

    /// `ρ₁ ⊗ ρ₂`.
    pub fn product(rho1: &Operator, rho2: &Operator) -> Result<Self> {
        for (index, r) in [rho1, rho2].into_iter().enumerate() {
            if let Some(reason) = density_defect(r) {
                return Err(Error::InvalidFactor { index, reason });
            }
        }
        Ok(State {
            dims: (rho1.dim(), rho2.dim()),
            rho: rho1.kron(rho2).hermitian_part(),
        })
    }

    pub fn maximally_mixed(d1: usize, d2: usize) -> Self {
        let d = d1 * d2;
        State {
            dims: (d1, d2),
            rho: Operator::identity(d).scale_real(1.0 / d as f64),
        }
    }

    /// `(|01⟩ − |10⟩)/√2`.
    pub fn singlet() -> Self {
        State {
            dims: (2, 2),
            rho: singlet_vector().projector(),
        }
    }

    /// `λω₁ + (1 − λ)ω₂`.
    pub fn mixture(lambda: f64, a: &State, b: &State) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
                lo: 0.0,
                hi: 1.0,
            });
        }
        if a.dims != b.dims {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        Ok(State {
            dims: a.dims,
            rho: a.rho.scale_real(lambda) + b.rho.scale_real(1.0 - lambda),
        })
    }

    pub fn rho(&self) -> &Operator {
        &self.rho
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// `ω(X) = tr(ρX)`.
    pub fn expect(&self, x: &Operator) -> Complex64 {
        let d = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += self.rho.get(i, j) * x.get(j, i);
            }
        }
        acc
    }

    /// Marginal on one factor.
    pub fn reduced(&self, keep: Factor) -> Operator {
        let traced = match keep {
            Factor::Left => Factor::Right,
            Factor::Right => Factor::Left,
        };
        partial_trace(&self.rho, self.dims, traced).expect("dims checked at construction")
    }

    /// Trace distance `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &State) -> Result<f64> {
        let diff = &self.rho - &other.rho;
        Ok(0.5 * eigh(&diff)?.values().iter().map(|v| v.abs()).sum::<f64>())
    }
}

#[derive(Deserialize)]
struct StateRepr {
    dims: (usize, usize),
    rho: Operator,
}

impl<'de> Deserialize<'de> for State {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(d)?;
        State::new(repr.rho, repr.dims).map_err(serde::de::Error::custom)
    }
}

pub fn singlet_vector() -> Vector {
    Vector::from_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0])
}

/// Convex weights with paired factor density matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparableDecomposition {
    pub weights: Vec<f64>,
    pub factors: Vec<(Operator, Operator)>,
}

impl SeparableDecomposition {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Factor dimensions `(d1, d2)` read from the first term.
    pub fn dims(&self) -> Option<(usize, usize)> {
        self.factors.first().map(|(a, b)| (a.dim(), b.dim()))
    }

    pub fn validate(&self) -> Result<(usize, usize)> {
        if self.weights.is_empty() {
            return Err(Error::InvalidWeights("no terms".into()));
        }
        if self.weights.len() != self.factors.len() {
            return Err(Error::InvalidWeights(format!(
                "{} weights for {} factor pairs",
                self.weights.len(),
                self.factors.len()
            )));
        }
        if let Some(w) = self.weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}")));
        }
        let dims = self.dims().expect("nonempty");
        for (index, (a, b)) in self.factors.iter().enumerate() {
            if (a.dim(), b.dim()) != dims {
                return Err(Error::InvalidFactor {
                    index,
                    reason: format!("dims {}x{} differ from {}x{}", a.dim(), b.dim(), dims.0, dims.1),
                });
            }
            if let Some(reason) = density_defect(a).or_else(|| density_defect(b)) {
                return Err(Error::InvalidFactor { index, reason });
            }
        }
        Ok(dims)
    }
}

/// `Σ λᵢ ρ₁ᵢ ⊗ ρ₂ᵢ` after validating the decomposition.
pub fn assemble(decomp: &SeparableDecomposition) -> Result<State> {
    let dims = decomp.validate()?;
    let mut rho = Operator::zeros(dims.0 * dims.1);
    for (w, (a, b)) in decomp.weights.iter().zip(&decomp.factors) {
        rho = rho + a.kron(b).scale_real(*w);
    }
    State::new(rho, dims)
}

/// Random decomposition with `terms` mixed product terms and Dirichlet-like weights.
pub fn random_decomposition<R: Rng + ?Sized>(
    terms: usize,
    dims: (usize, usize),
    rng: &mut R,
) -> SeparableDecomposition {
    let raw: Vec<f64> = (0..terms).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    SeparableDecomposition {
        weights: raw.iter().map(|w| w / total).collect(),
        factors: (0..terms)
            .map(|_| (random::density(dims.0, rng), random::density(dims.1, rng)))
            .collect(),
    }
}

/// Result of conditioning a state.
#[derive(Clone, Debug)]
pub struct Conditioned {
    pub state: State,
    /// `ω(A*A) ≤ 1e-14`, so the input state was returned unchanged.
    pub fallback: bool,
}

/// `ω^A` for an operator `a` on the ambient space.
pub fn condition_operator(omega: &State, a: &Operator) -> Result<Conditioned> {
    if a.dim() != omega.dim() {
        return Err(Error::DimensionMismatch {
            expected: omega.dim(),
            found: a.dim(),
        });
    }
    let num = &(a * omega.rho()) * &a.adjoint();
    let norm = num.trace().re;
    if norm <= ZERO_EXPECTATION {
        return Ok(Conditioned {
            state: omega.clone(),
            fallback: true,
        });
    }
    Ok(Conditioned {
        state: State {
            dims: omega.dims,
            rho: num.scale_real(1.0 / norm).hermitian_part(),
        },
        fallback: false,
    })
}

/// `ω^A` for `A = a ⊗ I` (left) or `I ⊗ a` (right), with `a` on one factor.
pub fn condition(omega: &State, a: &Operator, side: Factor) -> Result<Conditioned> {
    let (d1, d2) = omega.dims;
    let (own, other) = match side {
        Factor::Left => (d1, d2),
        Factor::Right => (d2, d1),
    };
    if a.dim() != own {
        return Err(Error::DimensionMismatch {
            expected: own,
            found: a.dim(),
        });
    }
    condition_operator(omega, &a.embed(side, other))
}

/// Conditions each term of `decomp` by the left operator `a` and reweights.
///
/// Terms with `ωᵢ(A*A) ≤ 1e-14` carry zero weight afterwards and are dropped.
pub fn push_decomposition(decomp: &SeparableDecomposition, a: &Operator) -> Result<SeparableDecomposition> {
    let (d1, _) = decomp.validate()?;
    if a.dim() != d1 {
        return Err(Error::DimensionMismatch {
            expected: d1,
            found: a.dim(),
        });
    }
    let ata = &a.adjoint() * a;
    let local: Vec<f64> = decomp
        .factors
        .iter()
        .map(|(r1, _)| hs_trace(r1, &ata))
        .collect();
    let global: f64 = decomp.weights.iter().zip(&local).map(|(w, e)| w * e).sum();
    if global <= ZERO_EXPECTATION {
        return Err(Error::ZeroExpectation);
    }
    let astar = a.adjoint();
    let mut weights = Vec::new();
    let mut factors = Vec::new();
    for ((w, e), (r1, r2)) in decomp.weights.iter().zip(&local).zip(&decomp.factors) {
        if *e <= ZERO_EXPECTATION {
            continue;
        }
        weights.push(w * e / global);
        let conditioned = (&(a * r1) * &astar).scale_real(1.0 / e).hermitian_part();
        factors.push((conditioned, r2.clone()));
    }
    // dropped terms carry at most 1e-14/global of mass
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    Ok(SeparableDecomposition { weights, factors })
}

fn hs_trace(rho: &Operator, x: &Operator) -> f64 {
    (rho * x).trace().re
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PptVerdict {
    Separable,
    Entangled,
    Inconclusive,
}

impl PptVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            PptVerdict::Separable => "separable",
            PptVerdict::Entangled => "entangled",
            PptVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PptReport {
    pub min_eig: f64,
    pub verdict: PptVerdict,
}

/// Smallest eigenvalue of the right partial transpose. A positive verdict is
/// only conclusive for `2⊗2`, `2⊗3` and `3⊗2`.
pub fn ppt_oracle(state: &State) -> Result<PptReport> {
    let pt = partial_transpose(state.rho(), state.dims, Factor::Right)?;
    let min_eig = eigh(&pt)?.values()[0];
    let verdict = if min_eig < -DEFAULT_TOL {
        PptVerdict::Entangled
    } else if matches!(state.dims, (2, 2) | (2, 3) | (3, 2)) {
        PptVerdict::Separable
    } else {
        PptVerdict::Inconclusive
    };
    Ok(PptReport { min_eig, verdict })
}

/// `p · singlet + (1 − p) · I/4`.
pub fn werner_state(p: f64) -> Result<State> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            lo: 0.0,
            hi: 1.0,
        });
    }
    State::mixture(p, &State::singlet(), &State::maximally_mixed(2, 2))
}

/// Coefficient matrix `X` with `x = Σ X[i][j] eᵢ ⊗ eⱼ`, as `d1` rows of length `d2`.
pub fn coefficient_matrix(x: &Vector, dims: (usize, usize)) -> Vec<Vec<Complex64>> {
    let (d1, d2) = dims;
    (0..d1).map(|i| (0..d2).map(|j| x[i * d2 + j]).collect()).collect()
}

#[derive(Clone, Debug)]
pub struct SteeringResult {
    /// Left-factor operator; `A ⊗ I` belongs to the left algebra.
    pub a: Operator,
    /// Normalized `(A ⊗ I)x`.
    pub steered: Vector,
    pub beta_after: f64,
    /// `ω_{Ax}(R)` for the explicit pack from the shift gadgets, when the exact step succeeded.
    pub certificate: Option<f64>,
    pub deterministic: bool,
    pub seesaw: SeesawResult,
}

/// Options for [`steer_to_violation`].
#[derive(Clone, Copy, Debug)]
pub struct SteerOptions {
    /// Random fallback attempts.
    pub budget: usize,
    pub seed: u64,
    pub seesaw: SeesawOptions,
}

impl Default for SteerOptions {
    fn default() -> Self {
        SteerOptions {
            budget: 50,
            seed: 0,
            seesaw: SeesawOptions::default(),
        }
    }
}

/// Finds a left operator `A` such that `ω_{Ax}` is Bell correlated.
///
/// Exact step: with `X` the coefficient matrix of `x` (rank `d2` when `x` is
/// cyclic for the left factor) and `T` the coefficients of the `√2`
/// eigenvector of the shift-gadget pack on levels 0 and 1, `A = T X⁺` with
/// `X⁺ = (X*X)⁻¹X*` gives `(A ⊗ I)x = y`. Random left operators are tried
/// after that, up to `budget` times.
pub fn steer_to_violation(x: &Vector, pair: &CommutingPair, opts: &SteerOptions) -> Result<SteeringResult> {
    let dims = pair.tensor_dims().ok_or(Error::NotTensorSplit)?;
    if x.dim() != dims.0 * dims.1 {
        return Err(Error::DimensionMismatch {
            expected: dims.0 * dims.1,
            found: x.dim(),
        });
    }
    if !cyclic_check(x, pair.left())? {
        return Err(Error::NotCyclic);
    }
    let beta_of = |a: &Operator, seed: u64| -> Result<(Vector, SeesawResult)> {
        let steered = a.embed(Factor::Left, dims.1).apply(x).normalized()?;
        let state = State::from_vector(&steered, dims)?;
        let opts = SeesawOptions { seed, ..opts.seesaw };
        Ok((steered, seesaw_beta(&state, pair, &opts)?))
    };

    let mut best: Option<SteeringResult> = None;
    if let Some((a, pack)) = exact_steering(x, dims)? {
        let (steered, seesaw) = beta_of(&a, opts.seed)?;
        let certificate = pack.vector_value(&steered);
        let result = SteeringResult {
            a,
            beta_after: seesaw.beta_lower,
            steered,
            certificate: Some(certificate),
            deterministic: true,
            seesaw,
        };
        if result.beta_after > 1.0 + 1e-6 {
            return Ok(result);
        }
        best = Some(result);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for attempt in 0..opts.budget {
        let a = random::gaussian_operator(dims.0, &mut rng);
        let Ok((steered, seesaw)) = beta_of(&a, opts.seed.wrapping_add(attempt as u64 + 1)) else {
            continue;
        };
        let beta = seesaw.beta_lower;
        if best.as_ref().is_none_or(|b| beta > b.beta_after) {
            best = Some(SteeringResult {
                a,
                steered,
                beta_after: beta,
                certificate: None,
                deterministic: false,
                seesaw,
            });
        }
        if beta > 1.0 + 1e-6 {
            break;
        }
    }
    match best {
        Some(b) if b.beta_after > 1.0 + 1e-6 => Ok(b),
        other => Err(Error::BudgetExhausted {
            best: other.map_or(1.0, |b| b.beta_after),
        }),
    }
}

/// The exact step of [`steer_to_violation`]; `None` when `X` lacks full column rank.
fn exact_steering(x: &Vector, dims: (usize, usize)) -> Result<Option<(Operator, BellPack)>> {
    let (d1, d2) = dims;
    if d1 < 2 || d2 < 2 || d2 > d1 {
        return Ok(None);
    }
    let left = gadget_from_isometry(&Operator::matrix_unit(d1, 1, 0))?.embed(Factor::Left, d2);
    let right = gadget_from_isometry(&Operator::matrix_unit(d2, 1, 0))?.embed(Factor::Right, d1);
    let target = sqrt2_eigenvector(&left, &right)?;

    let xm = coefficient_matrix(x, dims);
    // X*X is d2 × d2 and invertible iff X has full column rank
    let gram = Operator::from_fn(d2, |k, l| (0..d1).map(|i| xm[i][k].conj() * xm[i][l]).sum());
    let eig = eigh(&gram.hermitian_part())?;
    if eig.values()[0] <= 1e-12 * eig.values()[d2 - 1].max(1e-300) {
        return Ok(None);
    }
    let gram_inv = eig.apply_fn(|v| 1.0 / v);
    // X⁺ = (X*X)⁻¹ X*, a d2 × d1 matrix
    let pinv: Vec<Vec<Complex64>> = (0..d2)
        .map(|k| {
            (0..d1)
                .map(|i| (0..d2).map(|l| gram_inv.get(k, l) * xm[i][l].conj()).sum())
                .collect()
        })
        .collect();
    let t = coefficient_matrix(&target.y, dims);
    let a = Operator::from_fn(d1, |i, j| (0..d2).map(|k| t[i][k] * pinv[k][j]).sum());
    Ok(Some((a, target.pack)))
}
