use thiserror::Error;

/// Errors shared by the library modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} must be positive")]
    Zero { what: &'static str },

    #[error("{divisor} does not divide {n}")]
    NotDivisible { divisor: usize, n: usize },

    #[error("{0} is not prime")]
    NotPrime(usize),

    #[error("{what} = {value} is out of range [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("expected {expected} tuple entries (one per prime factor), found {found}")]
    Arity { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_divides(divisor: usize, n: usize) -> Result<()> {
    if divisor == 0 || !n.is_multiple_of(divisor) {
        return Err(Error::NotDivisible { divisor, n });
    }
    Ok(())
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::LengthMismatch { expected, found });
    }
    Ok(())
}
