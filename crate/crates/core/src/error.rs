use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("site index {site} out of range 1..={n}")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Hamiltonian is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("too many Lindblad operators: {count} > {max}")]
    TooManyLindblads { count: usize, max: usize },

    #[error("dissipator is not trace-normalized: Tr D = {trace:e}, expected {expected:e}")]
    DissipatorNotNormalized { trace: f64, expected: f64 },

    #[error("sector is not invariant: coupling to dropped basis elements is {coupling:e}")]
    SectorNotInvariant { coupling: f64 },

    #[error("invalid basis label ({0}, {1})")]
    InvalidLabel(usize, usize),

    #[error("basis labels are not closed under (j,k) -> (k,j)")]
    LabelsNotSelfAdjoint,

    #[error("operator is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("parity map is not an involution (residual {residual:e})")]
    NotInvolution { residual: f64 },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error(
        "QR iteration failed to converge: {iterations} iterations, \
         active window {lo}..={hi}, last subdiagonal {subdiagonal:e}"
    )]
    ConvergenceFailure {
        iterations: usize,
        lo: usize,
        hi: usize,
        subdiagonal: f64,
    },

    #[error("no zero mode within {tolerance:e} (closest |lambda| = {closest:e})")]
    NoZeroMode { tolerance: f64, closest: f64 },

    #[error("eigenvalue {index} is degenerate at the evaluation point (gap {gap:e})")]
    DegenerateAtEvaluationPoint { index: usize, gap: f64 },

    #[error("energy span is zero; density of states undefined")]
    DegenerateSpectrumSpan,

    #[error("bracket invalid: {0}")]
    BracketInvalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
