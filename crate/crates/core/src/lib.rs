//! Well-signed graph matrices with one negative eigenvalue, the Strong Arnold
//! Property, nullspace embeddings and the plane/hyperplane geometry around
//! them, plus a corpus runner that checks the Strong Arnold Property on
//! 4-connected flat graphs.

pub mod constructions;
pub mod corpus;
pub mod embedding;
pub mod error;
pub mod gmatrix;
pub mod graph;
pub mod io;
pub mod kappa;
pub mod linalg;
pub mod sap;
pub mod spectra;

pub use error::{Error, Result};
pub use gmatrix::WellSignedMatrix;
pub use graph::Graph;
pub use spectra::{SpectralSummary, SymMatrix};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
