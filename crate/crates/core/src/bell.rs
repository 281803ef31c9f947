//! Bell operators built from nilpotent partial isometries.
//!
//! A nonzero partial isometry `V` with `V² = 0` yields the projection
//! `E = V*V + VV*` and three self-adjoint contractions
//!
//! ```text
//! A1 = V + V*,   A2 = i(V* − V),   A3 = [V, V*]
//! ```
//!
//! with `Ai² = E`, `AiE = EAi = Ai` and `[A1, A2] = 2i A3`. Two such gadgets on
//! commuting factors give a Bell operator `R` with `R² = EF + A3B3`, which has
//! a `√2` eigenvector inside `EF`. Lifting the observables by `(I − E)` and
//! `(I − F)` keeps that eigenvector and makes `R̃` act as the identity on
//! `(I − E)(I − F)`.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{eigh, Factor, Operator, Vector, DEFAULT_TOL};
use crate::separability::State;

/// Tolerance for exact operator identities (`V² = 0`, the lift expansion).
pub const IDENTITY_TOL: f64 = 1e-12;

/// The projection and observables derived from one nilpotent partial isometry.
#[derive(Clone, Debug)]
pub struct IsometryGadget {
    v: Operator,
    e: Operator,
    p: Operator,
    a1: Operator,
    a2: Operator,
    a3: Operator,
}

/// Builds the gadget of `v`. Requires `v ≠ 0`, `v*v` a projection and `v² = 0`.
pub fn gadget_from_isometry(v: &Operator) -> Result<IsometryGadget> {
    if v.frobenius_norm() <= DEFAULT_TOL {
        return Err(Error::ZeroIsometry);
    }
    let vstar = v.adjoint();
    let initial = &vstar * v;
    let residual = (&initial * &initial - &initial).frobenius_norm();
    if residual > DEFAULT_TOL {
        return Err(Error::NotPartialIsometry { residual });
    }
    let residual = (v * v).frobenius_norm();
    if residual > IDENTITY_TOL {
        return Err(Error::NotNilpotent { residual });
    }
    let i = Complex64::new(0.0, 1.0);
    let p = v * &vstar;
    Ok(IsometryGadget {
        e: &initial + &p,
        a1: v + &vstar,
        a2: (&vstar - v).scale(i),
        a3: &p - &initial,
        p,
        v: v.clone(),
    })
}

/// Residuals of the gadget identities (Frobenius norms).
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct GadgetResiduals {
    pub nilpotent: f64,
    pub squares: f64,
    pub support: f64,
    pub commutator: f64,
    pub spectral: f64,
}

impl IsometryGadget {
    pub fn v(&self) -> &Operator {
        &self.v
    }
    pub fn e(&self) -> &Operator {
        &self.e
    }
    /// The final space `VV*`.
    pub fn p(&self) -> &Operator {
        &self.p
    }
    pub fn a1(&self) -> &Operator {
        &self.a1
    }
    pub fn a2(&self) -> &Operator {
        &self.a2
    }
    pub fn a3(&self) -> &Operator {
        &self.a3
    }

    pub fn dim(&self) -> usize {
        self.v.dim()
    }

    /// The same gadget on `C^d ⊗ C^other` (left) or `C^other ⊗ C^d` (right).
    pub fn embed(&self, side: Factor, other_dim: usize) -> IsometryGadget {
        let up = |x: &Operator| x.embed(side, other_dim);
        IsometryGadget {
            v: up(&self.v),
            e: up(&self.e),
            p: up(&self.p),
            a1: up(&self.a1),
            a2: up(&self.a2),
            a3: up(&self.a3),
        }
    }

    pub fn residuals(&self) -> Result<GadgetResiduals> {
        let mut r = GadgetResiduals {
            nilpotent: (&self.v * &self.v).frobenius_norm(),
            ..Default::default()
        };
        for a in [&self.a1, &self.a2] {
            r.squares = r.squares.max((a * a).distance(&self.e));
            r.support = r
                .support
                .max((a * &self.e).distance(a))
                .max((&self.e * a).distance(a));
        }
        let two_i = Complex64::new(0.0, 2.0);
        r.commutator = self.a1.commutator(&self.a2).distance(&self.a3.scale(two_i));
        let eig = eigh(&self.a3)?;
        let top = eig
            .clusters()
            .into_iter()
            .find(|(lambda, _)| (lambda - 1.0).abs() <= 1e-8)
            .map(|(_, range)| eig.projector(range))
            .unwrap_or_else(|| Operator::zeros(self.dim()));
        r.spectral = top.distance(&self.p);
        Ok(r)
    }
}

/// CHSH-form Bell operator `R = ½[A1(B1 + B2) + A2(B1 − B2)]` with its observables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BellPack {
    a1: Operator,
    a2: Operator,
    b1: Operator,
    b2: Operator,
    r: Operator,
}

fn assemble(a1: Operator, a2: Operator, b1: Operator, b2: Operator) -> BellPack {
    let r = (&a1 * &(&b1 + &b2) + &a2 * &(&b1 - &b2)).scale_real(0.5);
    BellPack { a1, a2, b1, b2, r }
}

/// Validated Bell operator: self-adjoint contractions whose A's commute with the B's.
pub fn bell_operator(a1: &Operator, a2: &Operator, b1: &Operator, b2: &Operator) -> Result<BellPack> {
    let dim = a1.dim();
    for x in [a2, b1, b2] {
        if x.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: x.dim(),
            });
        }
    }
    for x in [a1, a2, b1, b2] {
        let residual = x.selfadjoint_residual();
        if residual > DEFAULT_TOL {
            return Err(Error::NotSelfAdjoint { residual });
        }
        let norm = x.op_norm();
        if norm > 1.0 + DEFAULT_TOL {
            return Err(Error::NotContraction { norm });
        }
    }
    for a in [a1, a2] {
        for b in [b1, b2] {
            let residual = a.commutator(b).frobenius_norm();
            if residual > DEFAULT_TOL {
                return Err(Error::NonCommuting { residual });
            }
        }
    }
    Ok(assemble(a1.clone(), a2.clone(), b1.clone(), b2.clone()))
}

impl BellPack {
    /// `A1 = A2 = B1 = B2 = I`, so `R = I`.
    pub fn trivial(dim: usize) -> Self {
        let id = Operator::identity(dim);
        assemble(id.clone(), id.clone(), id.clone(), id)
    }

    /// Pack from the `A1, A2` of `left` and the `B1, B2` of `right`.
    ///
    /// The observables are self-adjoint with `Ai² = E`, so no contraction
    /// check is needed; the gadgets must act on commuting factors.
    pub fn from_gadgets(left: &IsometryGadget, right: &IsometryGadget) -> Self {
        assemble(
            left.a1.clone(),
            left.a2.clone(),
            right.a1.clone(),
            right.a2.clone(),
        )
    }

    /// Assembles without checks. Callers guarantee the pack conditions.
    pub(crate) fn assemble_trusted(a1: Operator, a2: Operator, b1: Operator, b2: Operator) -> Self {
        assemble(a1, a2, b1, b2)
    }

    /// Interchanges `B1, B2` and replaces `A1` by `−A1`; the result is exactly `−R`.
    pub fn negated(&self) -> Self {
        assemble(-&self.a1, self.a2.clone(), self.b2.clone(), self.b1.clone())
    }

    pub fn a1(&self) -> &Operator {
        &self.a1
    }
    pub fn a2(&self) -> &Operator {
        &self.a2
    }
    pub fn b1(&self) -> &Operator {
        &self.b1
    }
    pub fn b2(&self) -> &Operator {
        &self.b2
    }

    /// The assembled Bell operator `R`.
    pub fn operator(&self) -> &Operator {
        &self.r
    }

    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    /// Operator norm of `R`; never above `√2` for a valid pack.
    pub fn norm(&self) -> f64 {
        self.r.op_norm()
    }

    /// `⟨x, R x⟩` for a vector state.
    pub fn vector_value(&self, x: &Vector) -> f64 {
        self.r.expectation(x).re
    }

    /// `ω(R) = tr(ρR)`.
    pub fn value(&self, state: &State) -> Result<f64> {
        bell_value(state, self)
    }
}

/// `tr(ρ R)`.
pub fn bell_value(state: &State, pack: &BellPack) -> Result<f64> {
    if state.dim() != pack.dim() {
        return Err(Error::DimensionMismatch {
            expected: pack.dim(),
            found: state.dim(),
        });
    }
    Ok(state.expect(&pack.r).re)
}

/// `‖R² − EF − A3B3‖_F` for the pack assembled from the two gadgets.
pub fn verify_square_identity(left: &IsometryGadget, right: &IsometryGadget) -> f64 {
    let r = BellPack::from_gadgets(left, right).r;
    let rhs = &left.e * &right.e + &left.a3 * &right.a3;
    (&r * &r).distance(&rhs)
}

/// Orthonormal basis of `range(P) ∩ range(Q)`: the eigenvalue-1 eigenvectors of `PQP`.
pub fn range_intersection(p: &Operator, q: &Operator) -> Result<Vec<Vector>> {
    let pqp = (&(p * q) * p).hermitian_part();
    Ok(eigh(&pqp)?.eigenspace(1.0))
}

/// Which sign fix produced the `√2` eigenvector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignFix {
    /// `Ry = √2 y` already.
    Direct,
    /// `Ry = −√2 y`; the negated pack has `y` as its `√2` eigenvector.
    Swap,
    /// `y` mixes both eigenvalues; negated pack with
    /// `y₀ = (√2 y − Ry)/‖√2 y − Ry‖`.
    Mixed,
}

impl SignFix {
    pub fn as_str(self) -> &'static str {
        match self {
            SignFix::Direct => "direct",
            SignFix::Swap => "swap",
            SignFix::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Sqrt2Vector {
    pub pack: BellPack,
    /// Unit vector in `EF` with `R y = √2 y`.
    pub y: Vector,
    pub branch: SignFix,
}

/// Finds a Bell pack and unit `y ∈ EF` with `Ry = √2 y`.
///
/// `y` starts as the first basis vector of `range(P) ∩ range(Q)` (phase fixed so
/// its largest entry is positive). There `A3B3 y = y`, hence `R²y = 2y`.
pub fn sqrt2_eigenvector(left: &IsometryGadget, right: &IsometryGadget) -> Result<Sqrt2Vector> {
    let basis = range_intersection(&left.p, &right.p)?;
    let y = basis.first().ok_or(Error::EmptyIntersection)?.phase_fixed();
    let pack = BellPack::from_gadgets(left, right);
    let ry = pack.r.apply(&y);
    let target = y.scale_real(SQRT_2);
    if ry.distance(&target) <= DEFAULT_TOL {
        return Ok(Sqrt2Vector {
            pack,
            y,
            branch: SignFix::Direct,
        });
    }
    let negated = pack.negated();
    let (y, branch) = if (&ry + &target).norm() <= DEFAULT_TOL {
        (y, SignFix::Swap)
    } else {
        ((&target - &ry).normalized()?, SignFix::Mixed)
    };
    let residual = negated.r.apply(&y).distance(&y.scale_real(SQRT_2));
    if residual > DEFAULT_TOL {
        return Err(Error::IdentityFailed {
            what: "R y = sqrt(2) y",
            residual,
        });
    }
    Ok(Sqrt2Vector {
        pack: negated,
        y,
        branch,
    })
}

/// Residuals recorded while lifting a pack.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct LiftResiduals {
    /// `max ‖Ãi² − I‖, ‖B̃i² − I‖`.
    pub square: f64,
    /// `‖R̃ − [(I−E)(I−F) + (I−E)B1 + A1(I−F) + R]‖`.
    pub expansion: f64,
    /// `‖R̃(I−E)(I−F) − (I−E)(I−F)‖`.
    pub fixed: f64,
}

#[derive(Clone, Debug)]
pub struct LiftedPack {
    pub pack: BellPack,
    pub residuals: LiftResiduals,
}

/// Replaces `Ai` by `(I − E) + Ai` and `Bi` by `(I − F) + Bi`.
pub fn tilde_lift(pack: &BellPack, e: &Operator, f: &Operator) -> Result<LiftedPack> {
    let dim = pack.dim();
    for x in [e, f] {
        if x.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: x.dim(),
            });
        }
    }
    // for self-adjoint X and a projection E, XE = X also gives EX = X
    let mut support = 0.0_f64;
    for a in [&pack.a1, &pack.a2] {
        support = support.max((a * e).distance(a));
    }
    for b in [&pack.b1, &pack.b2] {
        support = support.max((b * f).distance(b));
    }
    if support > DEFAULT_TOL {
        return Err(Error::SupportMismatch { residual: support });
    }

    let id = Operator::identity(dim);
    let ce = &id - e;
    let cf = &id - f;
    let a1 = &ce + &pack.a1;
    let a2 = &ce + &pack.a2;
    let b1 = &cf + &pack.b1;
    let b2 = &cf + &pack.b2;

    let mut residuals = LiftResiduals::default();
    for x in [&a1, &a2, &b1, &b2] {
        residuals.square = residuals.square.max((x * x).distance(&id));
    }
    if residuals.square > DEFAULT_TOL {
        return Err(Error::IdentityFailed {
            what: "lifted observables square to I",
            residual: residuals.square,
        });
    }
    // Ãi self-adjoint with Ãi² = I, so they are contractions
    let lifted = BellPack::assemble_trusted(a1, a2, b1, b2);

    let corner = &ce * &cf;
    let expansion = &corner + &(&ce * &pack.b1) + &pack.a1 * &cf + &pack.r;
    residuals.expansion = lifted.r.distance(&expansion);
    if residuals.expansion > IDENTITY_TOL {
        return Err(Error::IdentityFailed {
            what: "lift expansion",
            residual: residuals.expansion,
        });
    }
    residuals.fixed = (&lifted.r * &corner).distance(&corner);
    if residuals.fixed > IDENTITY_TOL {
        return Err(Error::IdentityFailed {
            what: "lifted operator fixes (I-E)(I-F)",
            residual: residuals.fixed,
        });
    }
    Ok(LiftedPack {
        pack: lifted,
        residuals,
    })
}
