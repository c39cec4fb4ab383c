use crate::beta::LsParams;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters L={l}, S={s}: both must be at least 1")]
    InvalidParams { l: u32, s: u32 },
    #[error("operands belong to different fields: {left} vs {right}")]
    MismatchedParams { left: LsParams, right: LsParams },
    #[error("division by zero in Q(β)")]
    DivisionByZero,
    #[error("{what}: requested {requested} exceeds the cap of {cap}")]
    ResourceCap {
        what: &'static str,
        requested: String,
        cap: u64,
    },
    #[error("internal consistency fault: {0}")]
    Consistency(String),
    #[error("interval index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("fine level {fine} must be at least {required} (coarse level {coarse})")]
    LevelOrder {
        coarse: u32,
        fine: u32,
        required: u32,
    },
    #[error("invalid refinement template: {0}")]
    InvalidRho(String),
    #[error("refinement produced an interval shorter than 1e-15 at step {step}; depth limit reached")]
    DepthLimit { step: u32 },
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("point set is not sorted at position {index}")]
    Unsorted { index: usize },
    #[error("point {value} at position {index} lies outside [0, 1]")]
    OutOfUnitInterval { index: usize, value: f64 },
    #[error("logarithmic normalization needs t_n >= 2, got {0}")]
    LogUndefined(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap { .. } | Error::DepthLimit { .. })
    }

    pub fn is_consistency(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}
