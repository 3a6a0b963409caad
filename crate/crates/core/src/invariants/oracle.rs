//! Dense oracles on the explicit graph: resistance distances, hitting-time
//! Kemeny constant and matrix-tree spanning-tree counts.

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{bareiss_determinant, grounded_laplacian, reduced_integer_laplacian, LuFactorization};
use crate::scalar::Scalar;

/// All-pairs effective resistance with every edge a unit resistor.
///
/// Grounds vertex 0 and inverts the grounded Laplacian column by column;
/// `r_ij = G_ii + G_jj - 2 G_ij` with the grounded row of `G` equal to zero.
pub fn resistance_matrix<T: Scalar>(g: &Graph) -> Result<Vec<Vec<T>>> {
    let n = g.vertex_count();
    let lu = LuFactorization::new(&grounded_laplacian::<T>(g, 0))?;
    // green[i][j] for vertices i, j (vertex 0 row and column stay zero)
    let mut green = vec![vec![T::zero(); n]; n];
    let mut rhs = vec![T::zero(); n - 1];
    for j in 1..n {
        rhs[j - 1] = T::one();
        let col = lu.solve(&rhs)?;
        rhs[j - 1] = T::zero();
        for i in 1..n {
            green[i][j] = col[i - 1];
        }
    }
    let two = T::lit(2.0);
    Ok((0..n)
        .map(|i| (0..n).map(|j| green[i][i] + green[j][j] - two * green[i][j]).collect())
        .collect())
}

/// Effective resistance between `a` and `b` from a single grounded solve.
pub fn effective_resistance<T: Scalar>(g: &Graph, a: usize, b: usize) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let n = g.vertex_count();
    for v in [a, b] {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, vertex_count: n });
        }
    }
    // ground b, inject unit current at a: r_ab = potential at a
    let m = grounded_laplacian::<T>(g, b);
    let mut rhs = vec![T::zero(); n - 1];
    let ia = if a < b { a } else { a - 1 };
    rhs[ia] = T::one();
    Ok(crate::linalg::solve_linear(&m, &rhs)?[ia])
}

/// `Kf*(G) = sum_{i<j} d_i d_j r_ij` from resistance distances.
pub fn kirchhoff_oracle<T: Scalar>(g: &Graph) -> Result<T> {
    let r = resistance_matrix::<T>(g)?;
    Ok(kirchhoff_from_resistance(g, &r))
}

pub fn kirchhoff_from_resistance<T: Scalar>(g: &Graph, r: &[Vec<T>]) -> T {
    let d: Vec<T> = g.degrees().iter().map(|&x| T::from_count(x as u64)).collect();
    let n = g.vertex_count();
    let mut acc = T::zero();
    for i in 0..n {
        for j in i + 1..n {
            acc = acc + d[i] * d[j] * r[i][j];
        }
    }
    acc
}

/// Kemeny's constant from hitting times out of `start`.
///
/// `H(i, j) = (1/2) sum_k d_k (r_ij + r_jk - r_ik)` and
/// `K = sum_j pi_j H(start, j)` with `pi_j = d_j / 2E`.
pub fn kemeny_from_resistance<T: Scalar>(g: &Graph, r: &[Vec<T>], start: usize) -> T {
    let n = g.vertex_count();
    let d: Vec<T> = g.degrees().iter().map(|&x| T::from_count(x as u64)).collect();
    let two_e = T::from_count(2 * g.edge_count() as u64);
    let weighted: Vec<T> = (0..n).map(|j| (0..n).map(|k| d[k] * r[j][k]).sum()).collect();
    let half = T::lit(0.5);
    (0..n)
        .map(|j| {
            let hit = half * (two_e * r[start][j] + weighted[j] - weighted[start]);
            d[j] / two_e * hit
        })
        .sum()
}

pub fn kemeny_oracle<T: Scalar>(g: &Graph, start: usize) -> Result<T> {
    let r = resistance_matrix::<T>(g)?;
    Ok(kemeny_from_resistance(g, &r, start))
}

/// Spanning-tree count: exact determinant of the Laplacian with vertex 0 grounded.
pub fn spanning_trees_oracle(g: &Graph) -> Result<BigUint> {
    let m: Vec<Vec<BigInt>> = reduced_integer_laplacian(g);
    let det = bareiss_determinant(&m)?;
    det.to_biguint()
        .ok_or_else(|| Error::Dimension(format!("negative Laplacian cofactor {det}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::subdivide;
    use approx::assert_relative_eq;

    #[test]
    fn resistance_examples() {
        let c4 = Graph::cycle(4).unwrap();
        let r = resistance_matrix::<f64>(&c4).unwrap();
        assert_relative_eq!(r[0][1], 0.75, epsilon = 1e-12);
        assert_relative_eq!(r[0][2], 1.0, epsilon = 1e-12);
        assert_relative_eq!(r[1][3], 1.0, epsilon = 1e-12);
        assert_relative_eq!(effective_resistance::<f64>(&c4, 2, 0).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(effective_resistance::<f64>(&c4, 1, 2).unwrap(), 0.75, epsilon = 1e-12);

        let k4 = resistance_matrix::<f64>(&Graph::complete(4).unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_relative_eq!(k4[i][j], if i == j { 0.0 } else { 0.5 }, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn kirchhoff_oracle_examples() {
        assert_relative_eq!(kirchhoff_oracle::<f64>(&Graph::complete(2).unwrap()).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(kirchhoff_oracle::<f64>(&Graph::complete(4).unwrap()).unwrap(), 27.0, epsilon = 1e-12);
        assert_relative_eq!(kirchhoff_oracle::<f64>(&Graph::cycle(4).unwrap()).unwrap(), 20.0, epsilon = 1e-12);
        assert_relative_eq!(kirchhoff_oracle::<f64>(&Graph::path(3).unwrap()).unwrap(), 6.0, epsilon = 1e-12);
        let s1 = subdivide(&Graph::complete(4).unwrap());
        assert_relative_eq!(kirchhoff_oracle::<f64>(&s1).unwrap(), 276.0, max_relative = 1e-12);
    }

    #[test]
    fn kemeny_oracle_is_start_independent() {
        let g = subdivide(&Graph::complete(4).unwrap());
        let r = resistance_matrix::<f64>(&g).unwrap();
        for start in 0..g.vertex_count() {
            assert_relative_eq!(kemeny_from_resistance(&g, &r, start), 11.5, max_relative = 1e-12);
        }
        assert_relative_eq!(kemeny_oracle::<f64>(&Graph::complete(2).unwrap(), 1).unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn spanning_tree_oracle_examples() {
        assert_eq!(spanning_trees_oracle(&Graph::complete(4).unwrap()).unwrap(), BigUint::from(16u32));
        assert_eq!(spanning_trees_oracle(&Graph::cycle(4).unwrap()).unwrap(), BigUint::from(4u32));
        assert_eq!(spanning_trees_oracle(&Graph::star(4).unwrap()).unwrap(), BigUint::from(1u32));
        // Cayley: n^{n-2}
        assert_eq!(spanning_trees_oracle(&Graph::complete(7).unwrap()).unwrap(), BigUint::from(16807u32));
    }
}
