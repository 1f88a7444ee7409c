//! Error taxonomy shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in series arithmetic, map construction,
/// matrix work, or scan execution.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// Mixed exact/approx operands in a single operation.
    #[error("mode mismatch: {0}")]
    Mode(String),

    /// An operation retains no provably correct terms, or the requested
    /// data lies outside the truncation window.
    #[error("truncation: {0}")]
    Truncation(String),

    /// A map violates its class normalization (a0 = 0, a1 = 1, leading
    /// coefficient 1 at infinity, ...).
    #[error("normalization: {0}")]
    Normalization(String),

    /// Parameter outside the operation's domain.
    #[error("domain: {0}")]
    Domain(String),

    /// Division by a series with vanishing leading coefficient, or an
    /// evaluation at a pole.
    #[error("singularity: {0}")]
    Singularity(String),

    /// A grid point is too close to the expansion boundary for the
    /// truncation order to certify the evaluation.
    #[error("tail control: {0}")]
    Tail(String),

    /// Iterative norm computation failed to stabilize.
    #[error("no convergence after {iterations} iterations (last estimates {history:?})")]
    Convergence { iterations: usize, history: Vec<f64> },

    /// ODE integration could not reach the requested tolerance.
    #[error("integration stalled: achieved tolerance {achieved:e}")]
    Integration { achieved: f64 },

    /// Malformed functional specification or scan configuration.
    #[error("spec: {0}")]
    Spec(String),

    /// Operation requires a map with a proof-of-univalence provenance.
    #[error("uncertified input: {0}")]
    Uncertified(String),
}

pub type Result<T> = std::result::Result<T, Error>;
