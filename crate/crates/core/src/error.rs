use std::path::PathBuf;

/// Errors raised anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate cell: only {placed} nucleus could be placed")]
    DegenerateCell { placed: usize },

    #[error("voronoi construction failed: {0}")]
    Tessellation(String),

    #[error("degenerate control volume at node {node} (W = {volume:e})")]
    DegenerateControlVolume { node: usize, volume: f64 },

    #[error("invariant violated at {entity} {id}: {message}")]
    Invariant {
        entity: &'static str,
        id: usize,
        message: String,
    },

    #[error("invariant violated: {0}")]
    NetworkInvariant(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("singular RVE: network has {} disconnected components (sizes {:?})", .components.len(), .components.iter().map(Vec::len).collect::<Vec<_>>())]
    SingularRve { components: Vec<Vec<usize>> },

    #[error("linear solver did not converge after {iterations} iterations (relative residual {residual:e}, tolerance {tolerance:e})")]
    NotConverged {
        iterations: usize,
        residual: f64,
        tolerance: f64,
        history: Vec<f64>,
    },

    #[error("singular matrix encountered at row {row}")]
    SingularMatrix { row: usize },

    #[error("effective tensor asymmetry {asymmetry:e} exceeds 1e-6")]
    AsymmetricTensor { asymmetry: f64 },

    #[error("non-finite value in state ({0})")]
    Diverged(String),

    #[error("newton iteration failed at step {step} (t = {time} s) after {halvings} step halvings")]
    NewtonFailed {
        step: usize,
        time: f64,
        halvings: usize,
    },

    #[error("node set `{0}` does not lie on a Dirichlet boundary")]
    NotDirichlet(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
