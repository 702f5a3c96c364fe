//! Entropy of auto-equivalences of derived categories of orbifold projective
//! lines and hereditary path algebras, computed through their action on
//! numerical Grothendieck lattices.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: exact integer matrices, characteristic polynomials and
//!   certified spectral radii.
//! - [`lattice`]: lattices with an Euler pairing, radicals, numerical
//!   quotients and the growth curve used for the lower bound.
//! - [`quiver`]: Dynkin and extended Dynkin quivers, Coxeter matrices, roots
//!   and the Auslander–Reiten translate.
//! - [`orbifold`]: weighted projective lines, the grading group, Euler
//!   lattices in the `{[O], [S_ij], [S]}` basis and generator matrices.
//! - [`sl2z`]: `SL(2,Z)` arithmetic and positive-word factorization.
//! - [`entropy`]: words of auto-equivalences, entropy reports and the
//!   independent growth estimator on Dynkin path algebras.
//! - [`wire`]: JSON schemas shared by the command-line front-end.
//!
//! ```
//! use cat_entropy::entropy::{entropy, AuteqWord, Context, Generator};
//! use cat_entropy::linalg::default_tolerance;
//! use cat_entropy::orbifold::{OrbifoldLine, WeightData};
//! use cat_entropy::sl2z::SL2Matrix;
//!
//! let w = WeightData::with_default_points(vec![2, 2, 2, 2])?;
//! let line = OrbifoldLine::new(w.clone())?;
//! let f = line.lift(&SL2Matrix::new(2, 1, 1, 1)?)?.into_matrix();
//! let word = AuteqWord::new(Context::orbifold(w)?, vec![Generator::Generic(f)])?;
//! let report = entropy(&word, &default_tolerance())?;
//! assert!((report.h - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
//! # Ok::<(), cat_entropy::Error>(())
//! ```

pub mod entropy;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod orbifold;
pub mod quiver;
pub mod sl2z;
pub mod wire;

pub use error::{Error, Result};
