//! Normalized-Laplacian spectra of iterated subdivision graphs.
//!
//! The spectrum of `s^n(G)` is generated from the spectrum of `G` by the
//! decimation maps `g1(x) = 1 + sqrt(1 - x/2)` and `g2(x) = 1 - sqrt(1 - x/2)`
//! plus an exceptional eigenvalue `1` whose multiplicity depends only on the
//! circuit rank of `G` and on whether `G` has an odd cycle. On top of that the
//! crate evaluates the multiplicative degree-Kirchhoff index, Kemeny's
//! constant and the spanning-tree count by spectral sums, closed forms and
//! dense oracles.
//!
//! Numerical code is generic over [`Scalar`] (`f32`/`f64`); the aliases at the
//! crate root fix it to `f64`.

pub mod error;
pub mod graph;
pub mod invariants;
pub mod linalg;
pub mod scalar;
pub mod spectrum;

pub use error::{Error, Result};
pub use graph::{Graph, GraphMeta};
pub use scalar::Scalar;

pub type SymMatrix = linalg::SymMatrix<f64>;
pub type EigenResult = linalg::EigenResult<f64>;
pub type SpectralValue = spectrum::SpectralValue<f64>;
pub type Spectrum = spectrum::Spectrum<f64>;
pub type MatchReport = spectrum::MatchReport<f64>;
pub type InvariantReport = invariants::InvariantReport<f64>;
pub type LevelReport = invariants::LevelReport<f64>;
pub type WalkEstimate = invariants::walk::WalkEstimate<f64>;
