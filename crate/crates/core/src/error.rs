use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {value} is outside the supported range {min}..={max}")]
    OutOfBounds {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    Quadrature { estimate: f64, error_bound: f64 },
    #[error("classification error: {0}")]
    Classification(String),
    #[error("normalization error: squared norm {found} differs from {expected}")]
    Normalization { expected: f64, found: f64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(what: &'static str, value: usize, min: usize, max: usize) -> Result<()> {
    if value < min || value > max {
        Err(Error::OutOfBounds {
            what,
            value,
            min,
            max,
        })
    } else {
        Ok(())
    }
}
