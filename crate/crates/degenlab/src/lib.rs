//! degenlab: exact computations with finite dimensional representations of
//! path algebras modulo relations — top-stable degeneration checks with
//! certificates, flat limits of one-parameter curves, moduli normal forms,
//! Grassmannian chart equations, and compilation of projective varieties
//! into quiver algebras.

pub mod algebra;
pub mod charts;
pub mod check;
pub mod compile;
pub mod curves;
pub mod decompose;
pub mod field;
pub mod format;
pub mod hom;
pub mod linalg;
pub mod poly;
pub mod presentation;
pub mod quiver;
pub mod rep;
pub mod report;

use std::fmt;

#[derive(Debug, Clone)]
pub enum Error {
    /// ambient dimensions disagree
    DimensionMismatch(String),
    /// scalar arithmetic (division by zero, non-prime modulus, bad literal)
    Arithmetic(String),
    /// malformed user input
    BadInput(String),
    /// input parse error with position
    Parse { line: usize, col: usize, msg: String },
    /// a relation has a term of length < 2
    InadmissibleRelation(String),
    /// some path of length max_len+1 does not reduce to zero
    MaxLenTooSmall(String),
    /// splitting the module would need a field extension (or presplit input)
    NeedsSplitInput(String),
    /// operation requires a point with no proper top-stable degenerations
    NotMaximal(String),
    /// a curve that is singular for every parameter value
    DegenerateCurve(String),
    /// two independent computations of the same quantity disagree
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch(s) => write!(f, "dimension mismatch: {s}"),
            Error::Arithmetic(s) => write!(f, "arithmetic error: {s}"),
            Error::BadInput(s) => write!(f, "bad input: {s}"),
            Error::Parse { line, col, msg } => {
                write!(f, "parse error at line {line}, column {col}: {msg}")
            }
            Error::InadmissibleRelation(s) => write!(f, "inadmissible relation: {s}"),
            Error::MaxLenTooSmall(s) => write!(f, "max_len too small: {s}"),
            Error::NeedsSplitInput(s) => write!(f, "NEEDS_SPLIT_INPUT: {s}"),
            Error::NotMaximal(s) => write!(f, "not maximal: {s}"),
            Error::DegenerateCurve(s) => write!(f, "degenerate curve: {s}"),
            Error::Internal(s) => write!(f, "internal inconsistency: {s}"),
        }
    }
}

impl std::error::Error for Error {}
