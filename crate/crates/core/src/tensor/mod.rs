//! Complex operator algebra on tensor-product Hilbert spaces.

mod density;
mod eigen;
mod layout;
mod operator;

pub use density::DensityMatrix;
pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use layout::{Mode, SubsystemLayout};
pub use operator::{QOperator, SparseOperator};

pub(crate) use eigen::jacobi;
pub(crate) use operator::hermiticity_error;
