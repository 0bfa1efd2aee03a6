use std::fmt;

use thiserror::Error;

/// What went wrong while parsing an expression.
#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax { found: String, expected: Vec<String> },
    UnknownIdentifier(String),
    UnknownFunction(String),
    UnexpectedChar(char),
    BadNumber(String),
}

/// A parse failure at a byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: ", self.offset)?;
        match &self.kind {
            ParseErrorKind::Syntax { found, expected } => {
                write!(f, "unexpected {found}, expected one of: {}", expected.join(", "))
            }
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier `{s}`"),
            ParseErrorKind::UnknownFunction(s) => write!(f, "unknown function `{s}`"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::BadNumber(s) => write!(f, "invalid number `{s}`"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error {0}")]
    Parse(#[from] ParseError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate chart: tangent vectors are (nearly) parallel")]
    DegenerateChart,
    #[error("no real envelope: gradient norm {0} exceeds 1")]
    NoRealEnvelope(f64),
    #[error("f'(tau) vanishes")]
    ZeroDerivative,
    #[error("grid has no usable nodes")]
    EmptyGrid,
    #[error("node ({0}, {1}) lacks a full interior stencil")]
    BoundaryNode(usize, usize),
    #[error("normal points straight up; geodesic escapes to infinity")]
    VerticalEscape,
    #[error("invalid null-curve matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
