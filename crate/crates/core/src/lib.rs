//! Structured mapping problems `AX = B` over Jordan and Lie algebras of
//! orthosymmetric scalar products.
//!
//! The crate decides whether a structured solution exists, parametrizes the
//! complete solution set, computes the minimal Frobenius-norm solution and the
//! (non-unique) minimal spectral-norm solutions, and applies these to
//! structured backward errors and structured pseudospectra.
//!
//! ```
//! use structmap::{mapping, structure::Preset, CMat, C64, ToleranceProfile};
//!
//! let spec = Preset::Hermitian.build(2).unwrap();
//! let x = CMat::from_column_slice(2, 1, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
//! let b = CMat::from_column_slice(2, 1, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
//! let prob = mapping::MappingProblem::new(x, b, spec, ToleranceProfile::default()).unwrap();
//! let sol = mapping::solve_frobenius(&prob).unwrap();
//! assert!((sol.norm_value - 2f64.sqrt()).abs() < 1e-12);
//! ```

pub mod backward;
pub mod cli;
pub mod error;
pub mod io;
pub mod kernels;
pub mod linalg;
pub mod mapping;
pub mod pseudospectra;
pub mod structure;

pub use error::{Error, Result};
pub use structure::{Algebra, Form, PrototypeClass, StructureSpec, ToleranceProfile};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;

/// Library version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
