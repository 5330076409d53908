//! Frobenius-power invariants of graded quotient rings over prime fields.
//!
//! Everything is computed by exact linear algebra on degree slices of
//! `F_p[x_0..x_n] / (relations + I^[q])`: Hilbert-Kunz lengths, socle
//! profiles, top socle degrees, colon ideals and low Betti numbers. On top
//! of that sit diagonal F-threshold estimation, the closed-form counting
//! functions for minimal Hilbert-Kunz hypersurfaces, and a semistability
//! classifier for syzygy bundles of `(x^d, y^d, z^d)` on Fermat curves.
//!
//! ```
//! use frobsoc::poly::RingSpec;
//! use frobsoc::quotient::top_socle_degree;
//!
//! let spec = RingSpec::parse(3, &["x", "y", "z"], &["x^4 + y^4 + z^4"]).unwrap();
//! assert_eq!(top_socle_degree(&spec, &spec.maximal_ideal(), 3).unwrap(), 6);
//! ```

pub mod bc;
pub mod error;
pub mod fermat;
pub mod fthreshold;
pub mod grading;
pub mod linalg;
pub mod poly;
pub mod quotient;
pub mod resolutions;
pub mod toric;

pub use error::{Error, Result};
