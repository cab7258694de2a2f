use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Arguments outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Coupling too strong for a real `sqrt(kappa^2 - a^2)`.
    #[error("supercritical coupling: a = {a} >= |kappa| = {kappa}")]
    SupercriticalCoupling { a: f64, kappa: f64 },
    /// Radial mesh does not reach the decay region of the state.
    #[error("mesh truncation: |f(r_max)|/max|f| = {ratio:e}")]
    MeshTruncation { ratio: f64 },
    /// An integrand or matrix entry was NaN or infinite.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    /// Operator expected to be Hermitian is not.
    #[error("matrix is not hermitian (max |A - A^H| = {0:e})")]
    NotHermitian(f64),
    /// Eigenvalue window selected no states.
    #[error("empty eigenvalue window ({lo}, {hi})")]
    EmptyWindow { lo: f64, hi: f64 },
    /// Operation needs every m_j block of the multiplet.
    #[error("full j multiplet required")]
    FullMultipletRequired,
    /// Iterative eigensolver failed.
    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),
    /// Operands live on different spaces.
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;
