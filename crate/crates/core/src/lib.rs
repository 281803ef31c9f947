//! Bell operators built from partial isometries in commuting matrix algebras,
//! Bell correlated vectors approaching any given vector, and the separability
//! machinery around conditioned states.
//!
//! Everything is finite dimensional and dense. The modules build on each other:
//!
//! - [`matrix`]: complex operators, tensor products, partial traces, spectral calculus.
//! - [`algebra`]: *-algebras by generators, commutants, Schlieder, cyclic and separating vectors.
//! - [`bell`]: Bell packs, isometry gadgets, the square identity, `√2` eigenvectors, the lift.
//! - [`density`]: truncated shift families and the approach sequence `zₙ → x`.
//! - [`separability`]: states, separable decompositions, conditioning, PPT, steering.
//! - [`seesaw`]: lower bounds on `β` and the exact two-qubit value.
//! - [`cli`]: the `bellcorr` driver.
//!
//! Runnable walkthroughs live in `examples/`:
//! `square_identity`, `sqrt2_lift`, `density_sequence`, `seesaw_singlet`,
//! `werner_boundary`, `pushforward_lemma`, `steering` and `commutant`.
//!
//! ```
//! use bellcorr::bell::{gadget_from_isometry, sqrt2_eigenvector};
//! use bellcorr::matrix::{Factor, Operator};
//!
//! let v = Operator::matrix_unit(2, 1, 0);
//! let g = gadget_from_isometry(&v).unwrap();
//! let found = sqrt2_eigenvector(&g.embed(Factor::Left, 2), &g.embed(Factor::Right, 2)).unwrap();
//! assert!((found.pack.vector_value(&found.y) - 2f64.sqrt()).abs() < 1e-10);
//! ```

pub mod algebra;
pub mod bell;
pub mod cli;
pub mod density;
pub mod error;
pub mod matrix;
pub mod random;
pub mod seesaw;
pub mod separability;

pub use algebra::{CommutingPair, VnAlgebra};
pub use bell::{BellPack, IsometryGadget, SignFix};
pub use error::{Error, Result};
pub use matrix::{Factor, Operator, Vector};
pub use seesaw::{SeesawOptions, SeesawResult};
pub use separability::{SeparableDecomposition, State};
