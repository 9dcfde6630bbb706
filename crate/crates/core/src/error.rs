use thiserror::Error;

/// Errors raised by the engine.
///
/// Variants fall into two groups: input problems (parse and configuration
/// errors, see [`Error::is_usage`]) and mathematical failures such as a
/// point that is not a zero of the polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at position {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible: {0}")]
    ReducibleModulus(String),
    #[error("only simple extensions of Q, F_p or F_p(t) are supported")]
    TowerTooDeep,
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus shares a nontrivial factor with an element; it is not irreducible")]
    IrreducibilityViolated,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("the point is not a zero of the polynomial")]
    NotVanishing,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("no separable decomposition exists")]
    NotSeparableResidue,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("target field is not an extension of the source field")]
    NotAnExtension,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("leading Hankel entry s_d must be nonzero")]
    ZeroLeading,
    #[error("form is degenerate")]
    Degenerate,
    #[error("`{0}` is not a place of Q")]
    NotAPlace(String),
    #[error("Bezoutian of (0, 0) is undefined")]
    ZeroPair,
    #[error("numerator and denominator share a common factor")]
    NotReduced,
    #[error("zero is not isolated")]
    NotIsolated,
    #[error("extension is inseparable")]
    InseparableExtension,
    #[error("scale must be nonzero")]
    ZeroScale,
    #[error("malformed structure: {0}")]
    Malformed(String),
    #[error("internal identity violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    /// True for errors caused by malformed input or configuration rather
    /// than by the mathematics of a well-formed request.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::UnknownSymbol { .. }
                | Error::CharacteristicTwo
                | Error::NotPrime(_)
                | Error::TowerTooDeep
                | Error::NotAPlace(_)
                | Error::Malformed(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
