use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("matrix is not symmetric: |m[{i}][{j}] - m[{j}][{i}]| = {diff:e}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },
    #[error("expected {expected} values, found {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("non-finite value in component {component} at point {point:?}")]
    NonFinite {
        component: String,
        point: [usize; 3],
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Failure of a pointwise right-hand side evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RhsError {
    #[error("singular conformal metric (det = {det:e})")]
    SingularMetric { det: f64 },
    #[error("non-positive {name} = {value:e}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("non-finite input in component {component}")]
    NonFinite { component: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvolveError {
    #[error("grid axis {axis} has {n} cells; stencils need at least {min}")]
    GridTooSmall { axis: usize, n: usize, min: usize },
    #[error("state has {found} components, system expects {expected}")]
    Layout { expected: usize, found: usize },
    #[error("right-hand side failed at point {point:?}: {source}")]
    Rhs {
        point: [usize; 3],
        #[source]
        source: RhsError,
    },
    #[error("non-finite value after step {step} in component {component} at point {point:?}")]
    NonFinite {
        step: usize,
        component: String,
        point: [usize; 3],
    },
    #[error("invalid time step {0}")]
    InvalidTimeStep(f64),
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic bytes {0:?}")]
    BadMagic([u8; 4]),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("dimension mismatch: file has {file:?}, expected {expected:?}")]
    Dimensions {
        file: [u64; 3],
        expected: [usize; 3],
    },
    #[error("component count mismatch: file has {file}, expected {expected}")]
    ComponentCount { file: u64, expected: usize },
    #[error("file truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: u64, found: u64 },
    #[error("non-finite value in component {component} at point {point:?}")]
    NonFinite {
        component: String,
        point: [usize; 3],
    },
    #[error("{name} must be positive, found {value} at point {point:?}")]
    Positivity {
        name: &'static str,
        value: f64,
        point: [usize; 3],
    },
    #[error(transparent)]
    State(#[from] StateError),
}
