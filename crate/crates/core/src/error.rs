use thiserror::Error;

/// Errors raised by the numerical kernels and verification pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A Pochhammer factor in a hypergeometric denominator vanished.
    #[error("hypergeometric pole: (c)_k vanishes at k = {k} for c = {c}")]
    Pole { c: f64, k: usize },

    /// A value left the representable floating-point range.
    #[error("magnitude error: {0}")]
    Magnitude(String),

    /// Representations, bases or grids are incompatible.
    #[error("structure error: {0}")]
    Structure(String),

    /// An iterative solver failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The discretization is too coarse for the requested check.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// A sequence expected to be J-orthonormal is not.
    #[error("sequence is not J-orthonormal: {0}")]
    NotJOrthonormal(String),

    /// A function expression could not be parsed or differentiated.
    #[error("grammar error: {0}")]
    Grammar(String),

    /// e^{±Q/2} of a basis vector leaves the decay-safe domain.
    #[error(
        "domain check failed for n = {n}, sign {sign:+}: decay score {score:.3e} below {threshold}"
    )]
    DomainDecay {
        n: usize,
        sign: i8,
        score: f64,
        threshold: f64,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
