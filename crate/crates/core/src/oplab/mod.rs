//! Finite-difference operator laboratory on a fixed-`j` sector.

pub mod analytic;
pub mod bound;
pub mod builders;
pub mod dense;
pub mod dirac;
pub mod eigen;
pub mod sparse;
pub mod report;
pub mod so4;
pub mod space;
pub mod verify;

pub use builders::{build_beta, build_d, build_gamma5, build_h, build_j, build_k, build_sigma_r, nonabelian_term, GaugeProfile, Potential};
pub use dense::CMatrix;
pub use eigen::{eig_hermitian, Eigen, SymTridiagonal};
pub use space::{Component, KBlock, RadialGrid, SectorSpace, Stagger};
pub use sparse::{OperatorMatrix, Triplets};
