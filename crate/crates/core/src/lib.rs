//! Viewing-direction recovery for the cryo-EM class averaging problem.
//!
//! Projection images taken from nearby viewing directions look alike once
//! optimally rotated in-plane. Recording those aligning rotations for every
//! similar pair yields a sparse Hermitian matrix whose top three eigenvectors
//! encode, up to a canonical isomorphism, the viewing direction of every
//! image: `(π_i, π_j) = |⟨φ_i, φ_j⟩| − 1`. This crate implements that
//! pipeline end to end, together with the exact spectral theory of the
//! localized parallel transport operator that explains why it works:
//!
//! - [`geometry`] — frames of 3-space, the two commuting group actions,
//!   Haar sampling, geodesic parallel transport on the sphere and the
//!   resulting transport rotations.
//! - [`spectral`] — exact eigenvalue polynomials `λ_n(h)` of the localized
//!   transport operator from its generating functions, the spectral gap,
//!   trace identity, and the supporting Legendre apparatus.
//! - [`operator`] — Monte-Carlo discretization: the sparse Hermitian
//!   transport matrix, its top-k spectrum and eigenvalue clusters.
//! - [`classify`] — the intrinsic classifier: viewing-direction inner
//!   products from the top-3 eigenspace, edge labeling, outlier robustness.
//! - [`imaging`] — synthetic projection images, rotational alignment,
//!   invariant distance and the image graph that feeds the classifier.

pub mod classify;
pub mod geometry;
pub mod imaging;
pub mod operator;
pub mod spectral;

pub use geometry::{ComplexVec3, Frame, GeometryError, Rotation3, UnitComplex};
pub use operator::{SpectrumReport, TransportMatrix};
