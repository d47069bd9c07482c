//! Proper colourings of powers of Grassmann graphs `J_q(n,m,t)` from lifted
//! Gabidulin codes, with exact bounds and brute-force verification.
//!
//! Layers, bottom up: [`ff`] finite fields, [`matq`] linear algebra,
//! [`grassmann`] subspaces, [`rankmetric`] MRD codes and lifting,
//! [`johnson`] Johnson-graph colourings, [`colouring`] the construction and
//! its certificates, [`oracle`] exact solvers.

pub mod colouring;
pub mod ff;
pub mod grassmann;
pub mod johnson;
pub mod matq;
pub mod oracle;
pub mod rankmetric;
pub mod selftest;

pub use colouring::{
    bounds_report, full_colouring, make_context, verify_properness, BoundsReport,
    ColourCertificate, ColourContext, ColourError, ColourOptions, Regime, VerificationReport,
};
pub use ff::{FieldElement, FieldError, FieldSpec};
pub use grassmann::{BinaryVector, GrassmannError, GrassmannParams, Grassmannian, Subspace};
pub use johnson::{JohnsonColouring, JohnsonError, JohnsonMethod};
pub use matq::{MatrixError, MatrixFq};
pub use oracle::{DenseGraph, OracleError};
pub use rankmetric::{CodeError, GabidulinCode};
