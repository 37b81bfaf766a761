use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Hermite order beyond what double precision can represent.
    #[error("Hermite order {order} exceeds the supported maximum {max}")]
    OrderOutOfRange { order: u32, max: u32 },

    /// The operation is defined only for a restricted class of inputs.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// The requested accuracy cannot be met within the truncation cap.
    #[error("tolerance {tol:e} unreachable within {max_terms} terms")]
    ToleranceUnreachable { tol: f64, max_terms: u32 },

    /// Two coset representatives coincide modulo the lattice.
    #[error("degenerate configuration: {0}")]
    DegenerateConfig(String),

    /// A rigorous enclosure contains zero, so no sign can be certified.
    #[error("cannot certify sign at x = {x}: enclosure [{lo:e}, {hi:e}] contains zero")]
    CannotCertify { x: f64, lo: f64, hi: f64 },

    /// Adaptive quadrature did not converge.
    #[error("quadrature failed on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
