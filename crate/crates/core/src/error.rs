use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("graph is disconnected: {reached} of {total} vertices reachable from vertex 0")]
    Disconnected { reached: usize, total: usize },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("{what} requires {required}, above the cap of {cap}")]
    ResourceLimit { what: String, required: u128, cap: u128 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {offdiag_norm:e})")]
    Convergence { sweeps: usize, offdiag_norm: f64 },
    #[error("matrix is singular: pivot {pivot:e} in column {column}")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error("matrix dimensions do not match: {0}")]
    Dimension(String),
    #[error("exceptional multiplicity would be negative ({0})")]
    NegativeMultiplicity(i64),
    #[error("multiset sizes differ: analytic {analytic}, numeric {numeric}")]
    CountMismatch { analytic: u64, numeric: usize },
    #[error("log-space value {0} is out of range for the scalar type")]
    OverflowPolicy(f64),
    #[error("cross-check failed at level {level}: {quantity} ({detail})")]
    CrossCheck { level: u32, quantity: String, detail: String },
}
