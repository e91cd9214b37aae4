use alloc::string::String;

pub type Result<T> = core::result::Result<T, JetError>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JetError {
    #[error("index entry {value} outside 1..={bound}")]
    IndexOutOfRange { value: usize, bound: usize },
    #[error("cannot split {size} elements into {blocks} nonempty blocks")]
    PartitionArity { size: usize, blocks: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("order mismatch: {0}")]
    OrderMismatch(String),
    #[error(
        "order overflow: function of order {order} has no formal derivative within order {bound}"
    )]
    OrderOverflow { order: usize, bound: usize },
    #[error("singular leading block: {0}")]
    Singular(String),
    #[error("velocity is not regular")]
    NotRegular,
    #[error("base point mismatch between chart and jet")]
    BasePointMismatch,
    #[error("point leaves the target chart domain: {0}")]
    ChartOverlap(String),
    #[error("jet variable {0} not available at this order")]
    MissingVariable(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl JetError {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            JetError::IndexOutOfRange { .. } => "index_out_of_range",
            JetError::PartitionArity { .. } => "partition_arity",
            JetError::DimensionMismatch(_) => "dimension_mismatch",
            JetError::OrderMismatch(_) => "order_mismatch",
            JetError::OrderOverflow { .. } => "order_overflow",
            JetError::Singular(_) => "singular",
            JetError::NotRegular => "not_regular",
            JetError::BasePointMismatch => "base_point_mismatch",
            JetError::ChartOverlap(_) => "chart_overlap",
            JetError::MissingVariable(_) => "missing_variable",
            JetError::Internal(_) => "internal",
        }
    }
}
