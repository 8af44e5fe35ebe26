use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by a jet whose leading coefficient vanishes")]
    DivisionBySingularJet,
    #[error("jet order exhausted: cannot differentiate an order-0 jet")]
    OrderExhausted,
    #[error("AGM did not converge after {0} iterations")]
    AgmNonConvergence(usize),
    #[error("singular modulus: K and E are undefined at k^2 = 1")]
    SingularModulus,
    #[error("series diverges (|z| >= 1); use the analytic right-hand side instead")]
    DivergentSeries,
    #[error("unsupported L-value L_{discriminant}({s})")]
    UnsupportedLValue { discriminant: i64, s: u32 },
    #[error("Newton iteration did not converge after {0} iterations")]
    NewtonNonConvergence(usize),
    #[error("value {value} is not recognised as a rational with denominator <= {bound}")]
    RecognitionFailure { value: String, bound: u64 },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("quadratic form is not the square of a linear form")]
    NotRankOne,
    #[error("no Gosper certificate found: {0}")]
    CertificateNotFound(String),
    #[error("target summand is not a linear combination of the proved summand and the telescoping identity")]
    NoLinearRelation,
    #[error("entry `{0}` has no factorization family and no equivalence chain ending in one")]
    NoFamily(String),
    #[error("operation not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
