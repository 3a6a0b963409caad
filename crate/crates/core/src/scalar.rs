use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumCast};

/// Floating point scalar used by the numerical routines: `f32` or `f64`.
///
/// The associated constants are the default tolerances for the precision.
pub trait Scalar:
    Float + FromPrimitive + NumCast + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Jacobi stops once the off-diagonal Frobenius norm is below this times the order.
    const JACOBI_THRESHOLD: f64;
    /// Absolute tolerance used to cluster numerically computed eigenvalues.
    const CLUSTER_TOL: f64;
    /// Smallest pivot magnitude accepted by the LU solver.
    const PIVOT_TOL: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }
}

impl Scalar for f64 {
    const JACOBI_THRESHOLD: f64 = 1e-12;
    const CLUSTER_TOL: f64 = 1e-8;
    const PIVOT_TOL: f64 = 1e-13;
}

impl Scalar for f32 {
    const JACOBI_THRESHOLD: f64 = 1e-5;
    const CLUSTER_TOL: f64 = 1e-3;
    const PIVOT_TOL: f64 = 1e-6;
}
