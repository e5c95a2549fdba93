use thiserror::Error;

/// Errors raised by group construction, character computations, circuit
/// handling and the simulation pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("close_group: generator {index} is not unitary (residual {residual:.3e})")]
    NotUnitary { index: usize, residual: f64 },

    #[error("close_group: closure exceeded order cap {cap}")]
    GroupNotClosed { cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("character_table: class-sum eigenvectors not separated after {attempts} seeds")]
    DegenerateEigenproblem { attempts: usize },

    #[error("explicit_irrep: commutant splitting of irrep {irrep} degenerate after {attempts} seeds")]
    BlockSplitFailed { irrep: usize, attempts: usize },

    #[error("{op}: needs {required} bytes, budget is {budget}")]
    MemoryBudgetExceeded {
        op: &'static str,
        required: usize,
        budget: usize,
    },

    #[error("natural_multiplicities: irrep {irrep} has non-integral multiplicity {value}")]
    NonIntegralMultiplicity { irrep: usize, value: f64 },

    #[error("character table invariant violated: {0}")]
    InvalidTable(String),

    #[error("abelian_multiplicativity_check: group is not abelian")]
    NotAbelian,

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("compile_circuit: width {n} exceeds the dense limit {max}")]
    WidthExceeded { n: usize, max: usize },

    #[error("qaoa_circuit: invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("element_lookup: matrix is not an element of the group")]
    ElementNotFound,

    #[error("simulate_measurement: observable is not self-adjoint (residual {0:.3e})")]
    NotSelfAdjoint(f64),

    #[error("expectation_value: invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("natural representation unavailable for a projective group")]
    ProjectiveGroup,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for I/O and parse failures, as opposed to mathematical domain errors.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Json(_) | Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
