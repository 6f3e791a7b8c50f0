use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("unsupported field order {0}")]
    UnsupportedOrder(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("chart mismatch: expected {expected:?}, found {found:?}")]
    ChartMismatch { expected: Vec<String>, found: Vec<String> },
    #[error("zero input")]
    ZeroInput,
}
