//! Dense linear algebra used for base spectra and the oracle routes.
//!
//! Cyclic Jacobi eigenvalues, LU with partial pivoting, and a fraction-free
//! (Bareiss) determinant over any integer ring.

use std::ops::Neg;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

/// Default cap on the order of matrices handed to the dense routines.
pub const DEFAULT_ORACLE_CAP: usize = 2000;
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    order: usize,
    entries: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(order: usize) -> Self {
        SymMatrix { order, entries: vec![T::zero(); order * order] }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.set(i, i, T::one());
        }
        m
    }

    /// Builds from the upper triangle: `upper(i, j)` is called for `i <= j`.
    pub fn from_upper(order: usize, mut upper: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in i..order {
                m.set(i, j, upper(i, j));
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.order + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.entries[i * self.order + j] = value;
        self.entries[j * self.order + i] = value;
    }

    pub fn trace(&self) -> T {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        self.entries
            .chunks(self.order.max(1))
            .map(|row| row.iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    fn offdiag_norm(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.order {
            for j in i + 1..self.order {
                let a = self.get(i, j);
                acc = acc + a * a;
            }
        }
        (acc + acc).sqrt()
    }
}

/// `I - D^{-1/2} A D^{-1/2}`.
pub fn normalized_laplacian<T: Scalar>(g: &Graph) -> SymMatrix<T> {
    let n = g.vertex_count();
    let mut m = SymMatrix::identity(n);
    let inv_sqrt: Vec<T> = g.degrees().iter().map(|&d| T::from_count(d as u64).sqrt().recip()).collect();
    for &(u, v) in g.edges() {
        m.set(u, v, -(inv_sqrt[u] * inv_sqrt[v]));
    }
    m
}

/// Combinatorial Laplacian `D - A` with the row and column of `ground` removed.
pub fn grounded_laplacian<T: Scalar>(g: &Graph, ground: usize) -> SymMatrix<T> {
    let n = g.vertex_count();
    let idx = |v: usize| if v < ground { Some(v) } else if v > ground { Some(v - 1) } else { None };
    let mut m = SymMatrix::zeros(n - 1);
    for v in 0..n {
        if let Some(i) = idx(v) {
            m.set(i, i, T::from_count(g.degree(v) as u64));
        }
    }
    for &(u, v) in g.edges() {
        if let (Some(i), Some(j)) = (idx(u), idx(v)) {
            m.set(i, j, -T::one());
        }
    }
    m
}

/// Integer combinatorial Laplacian with row and column 0 removed.
pub fn reduced_integer_laplacian<I: Integer + Clone + Neg<Output = I> + From<i32>>(g: &Graph) -> Vec<Vec<I>> {
    let n = g.vertex_count();
    let mut m = vec![vec![I::zero(); n - 1]; n - 1];
    for v in 1..n {
        m[v - 1][v - 1] = I::from(g.degree(v) as i32);
    }
    for &(u, v) in g.edges() {
        if u > 0 && v > 0 {
            m[u - 1][v - 1] = -I::one();
            m[v - 1][u - 1] = -I::one();
        }
    }
    m
}

/// Eigenvalues from [`jacobi_eigenvalues`] with convergence metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult<T> {
    /// Sorted ascending.
    pub eigenvalues: Vec<T>,
    pub sweeps_used: usize,
    pub offdiag_norm: T,
}

/// Cyclic-by-row Jacobi eigenvalue iteration.
///
/// Converges when the off-diagonal Frobenius norm drops below
/// `T::JACOBI_THRESHOLD * order`; fails after [`MAX_JACOBI_SWEEPS`] sweeps.
pub fn jacobi_eigenvalues<T: Scalar>(m: &SymMatrix<T>) -> Result<EigenResult<T>> {
    jacobi_with(m, T::lit(T::JACOBI_THRESHOLD), MAX_JACOBI_SWEEPS)
}

pub fn jacobi_with<T: Scalar>(m: &SymMatrix<T>, threshold_per_order: T, max_sweeps: usize) -> Result<EigenResult<T>> {
    let n = m.order();
    let mut a = m.clone();
    let threshold = threshold_per_order * T::from_count(n.max(1) as u64);
    let mut sweeps = 0;
    let mut off = a.offdiag_norm();
    while off > threshold {
        if sweeps == max_sweeps {
            return Err(Error::Convergence { sweeps, offdiag_norm: off.to_f64().unwrap_or(f64::NAN) });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
        sweeps += 1;
        off = a.offdiag_norm();
    }
    let mut eigenvalues: Vec<T> = (0..n).map(|i| a.get(i, i)).collect();
    eigenvalues.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(EigenResult { eigenvalues, sweeps_used: sweeps, offdiag_norm: off })
}

// Annihilates a[p][q] with a plane rotation, A <- J^T A J.
fn rotate<T: Scalar>(a: &mut SymMatrix<T>, p: usize, q: usize) {
    let apq = a.get(p, q);
    if apq == T::zero() {
        return;
    }
    let app = a.get(p, p);
    let aqq = a.get(q, q);
    let two = T::lit(2.0);
    let theta = (aqq - app) / (two * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
    let t = if theta == T::zero() { T::one() } else { t };
    let c = (t * t + T::one()).sqrt().recip();
    let s = t * c;
    let n = a.order();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, c * akp - s * akq);
        a.set(k, q, s * akp + c * akq);
    }
    a.set(p, p, app - t * apq);
    a.set(q, q, aqq + t * apq);
    a.set(p, q, T::zero());
}

/// LU factorization with partial pivoting, reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct LuFactorization<T> {
    order: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> LuFactorization<T> {
    pub fn new(m: &SymMatrix<T>) -> Result<Self> {
        let n = m.order();
        let mut lu = m.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let tol = T::lit(T::PIVOT_TOL);
        for k in 0..n {
            let (piv_row, piv_abs) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if piv_abs < tol {
                return Err(Error::SingularMatrix { column: k, pivot: piv_abs.to_f64().unwrap_or(0.0) });
            }
            if piv_row != k {
                for j in 0..n {
                    lu.swap(k * n + j, piv_row * n + j);
                }
                perm.swap(k, piv_row);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                if f != T::zero() {
                    for j in k + 1..n {
                        lu[i * n + j] = lu[i * n + j] - f * lu[k * n + j];
                    }
                }
            }
        }
        Ok(LuFactorization { order: n, lu, perm })
    }

    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let n = self.order;
        if rhs.len() != n {
            return Err(Error::Dimension(format!("rhs has length {}, matrix order {n}", rhs.len())));
        }
        let mut x: Vec<T> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc = acc - self.lu[i * n + j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc = acc - self.lu[i * n + j] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        Ok(x)
    }
}

pub fn solve_linear<T: Scalar>(m: &SymMatrix<T>, rhs: &[T]) -> Result<Vec<T>> {
    LuFactorization::new(m)?.solve(rhs)
}

/// Exact determinant by fraction-free Gaussian elimination.
///
/// Every intermediate division is exact, so any integer ring works
/// (`i64`, `i128`, `BigInt`).
pub fn bareiss_determinant<I>(m: &[Vec<I>]) -> Result<I>
where
    I: Integer + Clone + Neg<Output = I>,
{
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension("bareiss determinant needs a square matrix".into()));
    }
    if n == 0 {
        return Ok(I::one());
    }
    let mut a: Vec<Vec<I>> = m.to_vec();
    let mut negate = false;
    let mut prev = I::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(I::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}
