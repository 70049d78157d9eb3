use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gcd({p}, {q}) != 1")]
    NotCoprime { p: i64, q: i64 },
    #[error("q = 0 is not a surgery coefficient")]
    ZeroDenominator,
    #[error("matrix ({p} {r}; {q} {s}) has determinant {det}, expected 1")]
    NotSl2 {
        p: i64,
        r: i64,
        q: i64,
        s: i64,
        det: i64,
    },
    #[error(
        "component {component}: p + q*framing = 0, the result is not a rational homology sphere"
    )]
    DegenerateSurgery { component: usize },
    #[error("linking matrix is singular: not a rational homology sphere")]
    NotRationalHomologySphere,
    #[error("degenerate phase: f''(0) = 0")]
    DegeneratePhase,
    #[error("series domain error: {0}")]
    SeriesDomain(String),
    #[error(
        "slope bound violated by entry (m = {m}, n = {n}, multi = {multi:?}) for class {class}"
    )]
    SlopeViolation {
        m: u32,
        n: i32,
        multi: Vec<u32>,
        class: String,
    },
    #[error("grid normalization: {0}")]
    GridNormalization(String),
    #[error("incomplete grid data: {0}")]
    IncompleteGrid(String),
    #[error("index {index} out of range for {len} components")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("component count mismatch: expected {expected}, found {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("link class inconsistent with data: {0}")]
    ClassInconsistent(String),
    #[error("inconsistent Milnor/phi_1 data: {0}")]
    MilnorInconsistent(String),
    #[error("missing phi_1 data: {0}")]
    MissingPhi1(String),
    #[error("color out of range: alpha = {alpha}, beta = {beta}, K = {level}")]
    ColorOutOfRange { alpha: i64, beta: i64, level: i64 },
    #[error("level too small: {0}")]
    LevelTooSmall(String),
    #[error("non-finite numeric value in {0}")]
    NonFinite(String),
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    /// True for failed internal consistency checks, as opposed to bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
