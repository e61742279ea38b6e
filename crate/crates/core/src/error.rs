use thiserror::Error;

use crate::representation::Constraint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: sqrt({0}) vs sqrt({1})")]
    FieldMismatch(String, String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("negative radicand {0}")]
    NegativeRadicand(String),
    #[error("radicand {0} is not a square-free integer >= 2")]
    InvalidRadicand(String),
    #[error("rational slope {0}: the sequence would be periodic")]
    RationalSlope(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid letter {0:?}, expected 0 or 1")]
    InvalidLetter(char),
    #[error("morphism has an empty image")]
    EmptyImage,
    #[error("morphism is cyclic")]
    Cyclic,
    #[error("morphism is not primitive")]
    NotPrimitive,
    #[error("no fixed point starting with letter {0}")]
    NoFixedPoint(u8),
    #[error("determinant is {0}, expected 1")]
    Determinant(String),
    #[error("matrix does not have the block shape [[A,B,0],[C,D,0],[E,F,1]]")]
    Shape,
    #[error("membership failed: {0}")]
    Membership(Constraint),
    #[error("generator {0} not allowed here")]
    GeneratorNotAllowed(String),
    #[error("fixed point is not characteristic: {0} fails")]
    NotCharacteristic(&'static str),
    #[error("square-root morphism check failed: {0}")]
    SqrtPostcondition(String),
    #[error("no square prefix within {0} letters")]
    NoSquarePrefix(usize),
    #[error("stream ended after {got} of {wanted} letters")]
    StreamEnded { wanted: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::InvalidLetter(_))
    }
}
