use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("invalid scalar: {0}")]
    InvalidScalar(String),
    #[error("division by zero")]
    DivisionByZero,

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("coset enumeration exceeded {0} cosets")]
    EnumerationBudget(usize),
    #[error("presentation defines a group of order {realized}, expected {expected}")]
    OrderMismatch { expected: usize, realized: usize },
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("algebra elements belong to different group algebras")]
    AlgebraMismatch,
    #[error("element is not in I^{0}")]
    NotInIdealPower(usize),
    #[error("Jennings series mismatch: {0}")]
    JenningsMismatch(String),

    #[error("basis candidate has {got} elements, expected {expected}")]
    WrongCardinality { expected: usize, got: usize },
    #[error("closure violated at ({0}, {1})")]
    ClosureViolated(usize, usize),
    #[error("construction not applicable: {0}")]
    NotApplicable(String),
    #[error("mu unsuitable: {0}")]
    MuUnsuitable(String),

    #[error("obstruction engine not applicable: {0}")]
    EngineInapplicable(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable identifier, used in CLI error documents.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) | Error::UnsupportedField(_) => "unsupported_field",
            Error::InvalidScalar(_) => "invalid_scalar",
            Error::DivisionByZero => "division_by_zero",
            Error::UnknownGenerator(_) => "unknown_generator",
            Error::InvalidPresentation(_) => "invalid_presentation",
            Error::EnumerationBudget(_) => "enumeration_budget",
            Error::OrderMismatch { .. } => "order_mismatch",
            Error::UnknownGroup(_) => "unknown_group",
            Error::ParameterOutOfRange(_) => "parameter_out_of_range",
            Error::AlgebraMismatch => "algebra_mismatch",
            Error::NotInIdealPower(_) => "not_in_ideal_power",
            Error::JenningsMismatch(_) => "jennings_mismatch",
            Error::WrongCardinality { .. } => "wrong_cardinality",
            Error::ClosureViolated(..) => "closure_violated",
            Error::NotApplicable(_) => "not_applicable",
            Error::MuUnsuitable(_) => "mu_unsuitable",
            Error::EngineInapplicable(_) => "engine_inapplicable",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::Malformed(_) => "malformed_input",
            Error::Io(_) => "io",
            Error::Json(_) => "malformed_json",
        }
    }
}
