use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("evaluation at length {len} exceeds generator horizon {horizon}")]
    HorizonExceeded { len: usize, horizon: usize },

    #[error("enumeration of {requested} items exceeds cap {cap}")]
    EnumerationTooLarge { requested: u128, cap: u128 },

    #[error("horizon {horizon} too small, need at least {needed}")]
    HorizonTooSmall { horizon: usize, needed: usize },

    #[error("rate table must start with r(1) = 1, got {0}")]
    RateNotNormalized(u64),

    #[error("invalid rate table: {0}")]
    RateInvalid(String),

    #[error("search cap exceeded: {0}")]
    SearchCapExceeded(String),

    #[error("tree depth {depth} exceeds configured bound {cap}")]
    DepthCapExceeded { depth: usize, cap: usize },

    #[error("sample is not realizable by the class")]
    NotRealizable,

    #[error("inflated example lacks an origin index")]
    OriginMissing,

    #[error("boosting failed: {0}")]
    BoostingFailed(String),

    #[error("inflated sample is not linearly separable")]
    NotSeparable,

    #[error("no sample size up to {cap} meets the (epsilon, delta) target")]
    Unlearnable { cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
