//! Bell correlated vectors approaching an arbitrary vector.
//!
//! Each factor is `C^K` with rank-one level projections `P₀ … P_{K−1}` and
//! shifts `Vₙ = |n+1⟩⟨n|`. Level `n` uses the gadget of `V_{n+1}` on both
//! sides, so `Eₙ = P_{n+1} + P_{n+2}`, and lifts its `√2` pack to `R̃ₙ`. For a
//! unit `x`,
//!
//! ```text
//! xₙ = (I−Eₙ)(I−Fₙ)x / ‖…‖,   zₙ = √(1 − 1/n) xₙ + √(1/n) yₙ
//! ```
//!
//! and `⟨R̃ₙzₙ, zₙ⟩ = (1 − 1/n) + √2/n`, which exceeds 1 at every level.

use std::f64::consts::SQRT_2;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::bell::{gadget_from_isometry, sqrt2_eigenvector, tilde_lift, BellPack, LiftResiduals, SignFix};
use crate::error::{Error, Result};
use crate::matrix::{Factor, Operator, Vector, DEFAULT_TOL};
use crate::random;

/// `⟨xₙ, yₙ⟩` must vanish to this tolerance.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// Truncated halving family on `C^K`.
#[derive(Clone, Debug)]
pub struct ShiftFamily {
    levels: usize,
    projections: Vec<Operator>,
    isometries: Vec<Operator>,
}

/// `K ≥ 5` levels; `Vₙ = |n+1⟩⟨n|` for `n = 1 … K−2`.
pub fn make_shift_family(levels: usize) -> Result<ShiftFamily> {
    if levels < 5 {
        return Err(Error::TooSmall { levels });
    }
    Ok(ShiftFamily {
        levels,
        projections: (0..levels).map(|n| Operator::matrix_unit(levels, n, n)).collect(),
        isometries: (1..levels - 1)
            .map(|n| Operator::matrix_unit(levels, n + 1, n))
            .collect(),
    })
}

impl ShiftFamily {
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Factor dimension; one basis vector per level.
    pub fn dim(&self) -> usize {
        self.levels
    }

    pub fn projection(&self, n: usize) -> &Operator {
        &self.projections[n]
    }

    pub fn projections(&self) -> &[Operator] {
        &self.projections
    }

    /// `Vₙ` for `1 ≤ n ≤ K − 2`.
    pub fn isometry(&self, n: usize) -> Option<&Operator> {
        n.checked_sub(1).and_then(|k| self.isometries.get(k))
    }

    pub fn isometries(&self) -> &[Operator] {
        &self.isometries
    }

    /// Largest usable level `n` (`n + 2 < K`).
    pub fn max_level(&self) -> usize {
        self.levels - 3
    }
}

/// Lifted Bell pack of one level on `C^K ⊗ C^K`.
#[derive(Clone, Debug)]
pub struct LevelPack {
    pub n: usize,
    pub e: Operator,
    pub f: Operator,
    /// `R̃ₙ` with its observables.
    pub pack: BellPack,
    pub y: Vector,
    pub branch: SignFix,
    pub lift: LiftResiduals,
    /// `‖R̃ₙyₙ − √2 yₙ‖`.
    pub eigen_residual: f64,
}

/// Builds level `n` from `V_{n+1}` on each family. Requires `1 ≤ n` and `n + 2 < K`.
pub fn build_level(left: &ShiftFamily, right: &ShiftFamily, n: usize) -> Result<LevelPack> {
    for fam in [left, right] {
        if n == 0 || n > fam.max_level() {
            return Err(Error::LevelOutOfRange { n, levels: fam.levels });
        }
    }
    let v = left.isometry(n + 1).expect("level checked");
    let w = right.isometry(n + 1).expect("level checked");
    let gl = gadget_from_isometry(v)?.embed(Factor::Left, right.dim());
    let gr = gadget_from_isometry(w)?.embed(Factor::Right, left.dim());
    let found = sqrt2_eigenvector(&gl, &gr)?;
    let lifted = tilde_lift(&found.pack, gl.e(), gr.e())?;
    let eigen_residual = lifted
        .pack
        .operator()
        .apply(&found.y)
        .distance(&found.y.scale_real(SQRT_2));
    if eigen_residual > DEFAULT_TOL {
        return Err(Error::IdentityFailed {
            what: "lifted R y = sqrt(2) y",
            residual: eigen_residual,
        });
    }
    Ok(LevelPack {
        n,
        e: gl.e().clone(),
        f: gr.e().clone(),
        pack: lifted.pack,
        y: found.y,
        branch: found.branch,
        lift: lifted.residuals,
        eigen_residual,
    })
}

/// One row of the approach sequence.
#[derive(Clone, Debug, Serialize)]
pub struct ApproachRow {
    pub n: usize,
    #[serde(skip)]
    pub z: Vector,
    /// `⟨R̃ₙzₙ, zₙ⟩`.
    pub value: f64,
    /// `(1 − 1/n) + √2/n`.
    pub bound: f64,
    /// `‖zₙ − x‖`.
    pub dist: f64,
    /// `‖zₙ − xₙ‖`, at most `√(2/n)`.
    pub dist_to_xn: f64,
    /// `‖(I−Eₙ)(I−Fₙ)x − x‖`.
    pub projection_defect: f64,
    /// `|⟨xₙ, yₙ⟩|`.
    pub overlap: f64,
    pub branch: SignFix,
}

/// `(1 − 1/n) + √2/n`.
pub fn level_bound(n: usize) -> f64 {
    let inv = 1.0 / n as f64;
    (1.0 - inv) + SQRT_2 * inv
}

/// Levels `2 ..= n_max` built once and reused for many `x`.
#[derive(Clone, Debug)]
pub struct DensityDemo {
    dims: (usize, usize),
    levels: Vec<LevelPack>,
}

impl DensityDemo {
    /// Requires `n_max ≥ 2` and `n_max + 2 < K` on both families.
    pub fn new(left: &ShiftFamily, right: &ShiftFamily, n_max: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::LevelOutOfRange {
                n: n_max,
                levels: left.levels,
            });
        }
        let levels = (2..=n_max)
            .map(|n| build_level(left, right, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(DensityDemo {
            dims: (left.dim(), right.dim()),
            levels,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn levels(&self) -> &[LevelPack] {
        &self.levels
    }

    pub fn approach(&self, x: &Vector) -> Result<Vec<ApproachRow>> {
        let dim = self.dims.0 * self.dims.1;
        if x.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: x.dim(),
            });
        }
        let x = x.normalized()?;
        self.levels.iter().map(|level| approach_row(&x, level)).collect()
    }
}

fn approach_row(x: &Vector, level: &LevelPack) -> Result<ApproachRow> {
    let n = level.n;
    // (I−E)(I−F)x without forming the product
    let fx = level.f.apply(x);
    let cfx = x - &fx;
    let gx = &cfx - &level.e.apply(&cfx);
    let norm = gx.norm();
    if norm <= 1e-14 {
        return Err(Error::ProjectionAnnihilatesX { n });
    }
    let xn = gx.scale_real(1.0 / norm);
    let overlap = xn.inner(&level.y).norm();
    if overlap > ORTHOGONALITY_TOL {
        return Err(Error::IdentityFailed {
            what: "<x_n, y_n> = 0",
            residual: overlap,
        });
    }
    let inv = 1.0 / n as f64;
    let z = &xn.scale_real((1.0 - inv).sqrt()) + &level.y.scale_real(inv.sqrt());
    Ok(ApproachRow {
        n,
        value: level.pack.vector_value(&z),
        bound: level_bound(n),
        dist: z.distance(x),
        dist_to_xn: z.distance(&xn),
        projection_defect: gx.distance(x),
        overlap,
        branch: level.branch,
        z,
    })
}

/// Builds the levels and runs the sequence for one `x`.
pub fn approach_sequence(
    x: &Vector,
    n_max: usize,
    (left, right): (&ShiftFamily, &ShiftFamily),
) -> Result<Vec<ApproachRow>> {
    DensityDemo::new(left, right, n_max)?.approach(x)
}

/// Random unit vector on `C^K ⊗ C^K` whose coefficients vanish outside the
/// first `support` levels of each factor.
pub fn random_supported_vector<R: Rng + ?Sized>(levels: usize, support: usize, rng: &mut R) -> Vector {
    let support = support.min(levels);
    let mut entries = vec![Complex64::new(0.0, 0.0); levels * levels];
    loop {
        for i in 0..support {
            for j in 0..support {
                entries[i * levels + j] = random::gaussian(rng);
            }
        }
        if let Ok(v) = Vector::new(entries.clone()).normalized() {
            return v;
        }
    }
}

/// Formats `v` with 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV with columns `n,value,bound,dist,branch`.
pub fn rows_to_csv(rows: &[ApproachRow]) -> String {
    let mut out = String::from("n,value,bound,dist,branch\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            fmt_float(r.value),
            fmt_float(r.bound),
            fmt_float(r.dist),
            r.branch.as_str()
        );
    }
    out
}
