//! Exact linear algebra over the integers and rationals, with modular
//! shortcuts that are always backed by an exact check.

mod cert;
mod intmat;
pub mod modular;
mod poly;
mod rat;

use thiserror::Error;

pub use cert::{
    discover_eigenmatrices, match_rows, verify_eigenmatrices, verify_spectrum, CertReport, Check, Discovery,
    SpectrumCert, Surd,
};
pub use intmat::{exact_sqrt, product_vanishes, to_i64, IntMatrix};
pub use poly::{char_poly, char_poly_bounded, IntPolynomial, CHAR_POLY_BOUND};
pub use rat::{bareiss_rank, rat, ratio, Rat, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: {left:?} against {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("rows have different lengths")]
    Ragged,
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("integer overflow")]
    Overflow,
    #[error("matrix has non-integral entries")]
    NotIntegral,
    #[error("size {size} exceeds bound {bound}")]
    SizeBound { size: usize, bound: usize },
    #[error("no integer combination with simple integral spectrum was found")]
    NoSimpleSpectrum,
}
