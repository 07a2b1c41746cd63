use thiserror::Error;

/// Errors raised by the exact and numeric layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by the zero scalar")]
    DivisionByZero,
    #[error("series are expanded at different base points")]
    BasePointMismatch,
    #[error("series validity exhausted: need order {needed}, have {available}")]
    ValidityExhausted { needed: usize, available: usize },
    #[error("series has zero constant term and is not invertible")]
    NotInvertible,
    #[error("inner series must have zero constant term")]
    NonZeroConstantTerm,
    #[error("series has no invertible linear term")]
    NonUnitLinearTerm,
    #[error("supplied root does not raise to the constant term")]
    WrongRoot,
    #[error("constant term {0} needs an exact evaluation that was not supplied")]
    TranscendentalConstant(String),
    #[error("the zero operator has no order")]
    ZeroOperator,
    #[error("operators do not commute: coefficient of D^{index} is nonzero (checked to order {n_eff})")]
    NonCommuting { index: usize, n_eff: usize },
    #[error("characteristic polynomial depends on t at coefficient lambda^{i} mu^{j}")]
    TDependent { i: usize, j: usize },
    #[error("point is off the curve (residual {residual:e})")]
    OffCurve { residual: f64 },
    #[error("eigenvector cannot be normalized by its first component at this point")]
    NormalizationImpossible,
    #[error("root finder failed: {0}")]
    RootFinding(String),
    #[error("{0} is not representable in the semigroup")]
    NotRepresentable(u64),
    #[error("membership table bound {bound} is too small (need {needed})")]
    InsufficientBound { bound: u64, needed: u64 },
    #[error("base point lies in the degenerate set: {0}")]
    BadBasePoint(String),
    #[error("linear system is singular")]
    SingularSystem,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, stage: &'static str) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
