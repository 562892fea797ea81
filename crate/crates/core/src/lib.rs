//! Graph signal processing with the companion model.
//!
//! A graph shift `A` with distinct eigenvalues is diagonalized into the graph Fourier transform,
//! its characteristic polynomial yields the companion shift, and signals can be expanded in the
//! vertex impulsive basis `[delta_0, A delta_0, ..., A^{N-1} delta_0]` (the graph z-transform).
//! Convolution of graph signals then reduces to polynomial multiplication modulo the
//! characteristic polynomial, which [`convolution::convolve_fast`] performs with an FFT.
//!
//! ```
//! use gsp_core::{CompanionModel, Graph, GraphSignal, Domain};
//! use gsp_core::convolution::{verify_convolution, FastOptions};
//!
//! let g = Graph::directed_ladder(12).unwrap();
//! let model = CompanionModel::build(&g).unwrap();
//! let s = GraphSignal::from_real(&[1.0; 12], Domain::Vertex);
//! let t = model.decomposition().vertex_impulse();
//! let report = verify_convolution(&model, &s, &t, FastOptions::default()).unwrap();
//! assert!(report.max_crossmethod_diff.unwrap() < 1e-9);
//! ```

pub mod charpoly;
pub mod companion;
pub mod convolution;
mod engine;
pub mod error;
pub mod graph;
pub mod io;
pub mod numeric;
pub mod signal;
pub mod spectral;
pub mod ztransform;

pub use charpoly::{IntPolynomial, Polynomial};
pub use companion::{CharpolySource, CompanionModel, ModelCache, ModelOptions, Precision};
pub use engine::ZSignal;
pub use error::{GspError, Result};
pub use graph::{Graph, GraphKind};
pub use num_complex::Complex64;
pub use signal::{Domain, GraphSignal};
pub use spectral::{decompose, decompose_with, EigenOrdering, SpectralDecomposition};
