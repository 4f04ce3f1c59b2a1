//! Jacobian `Div_0(G) / PDiv(G)` of an integer graph, read off the Smith
//! normal form of `P_k`, and the weighted spanning-tree count.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linear::ReducedMatrix;
use crate::rational::Rational;

/// A finite abelian group `Z/d_1 x ... x Z/d_m` with `d_i | d_{i+1}`.
/// Factors equal to 1 are kept, so the list has one entry per row of `P_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroupDescription {
    pub invariant_factors: Vec<BigInt>,
    pub order: BigInt,
}

impl AbelianGroupDescription {
    pub fn nontrivial_factors(&self) -> impl Iterator<Item = &BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one())
    }
}

impl fmt::Display for AbelianGroupDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.nontrivial_factors().map(|d| format!("Z/{d}")).collect();
        if parts.is_empty() {
            write!(f, "trivial")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Jacobian of an integer graph, using `k = n - 1`.
pub fn jacobian(graph: &WeightedGraph) -> Result<AbelianGroupDescription> {
    jacobian_at(graph, graph.n() - 1)
}

pub fn jacobian_at(graph: &WeightedGraph, k: usize) -> Result<AbelianGroupDescription> {
    if !graph.is_integral() {
        return Err(Error::NonIntegralWeights);
    }
    let n = graph.n();
    if k >= n {
        return Err(Error::VertexOutOfRange { index: k, n });
    }
    let p = graph.edge_matrix();
    let rows: Vec<Vec<BigInt>> = (0..n)
        .filter(|&i| i != k)
        .map(|i| {
            (0..n)
                .filter(|&j| j != k)
                .map(|j| p.get(i, j).to_integer())
                .collect()
        })
        .collect();
    let invariant_factors = smith_diagonal(rows);
    if invariant_factors.iter().any(|d| d.is_zero()) {
        return Err(Error::SingularMatrix { k });
    }
    let order = invariant_factors.iter().product();
    Ok(AbelianGroupDescription {
        invariant_factors,
        order,
    })
}

/// Diagonal of the Smith normal form of a square integer matrix, each entry
/// nonnegative and dividing the next.
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let dim = a.len();
    for t in 0..dim {
        loop {
            let Some((pi, pj)) = min_nonzero(&a, t) else {
                // Remaining block is zero.
                return (0..dim).map(|i| a[i][i].abs()).collect();
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let pivot = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..dim {
                let q = a[i][t].div_floor(&pivot);
                if !q.is_zero() {
                    for j in t..dim {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..dim {
                let q = a[t][j].div_floor(&pivot);
                if !q.is_zero() {
                    for i in t..dim {
                        let s = &q * &a[i][t];
                        a[i][j] -= s;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // Pivot must divide the rest of the block; if not, fold the
            // offending row into row t and go again.
            let bad = (t + 1..dim).find(|&i| (t + 1..dim).any(|j| !(&a[i][j] % &pivot).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..dim {
                        let s = a[i][j].clone();
                        a[t][j] += s;
                    }
                }
                None => break,
            }
        }
    }
    (0..dim).map(|i| a[i][i].abs()).collect()
}

fn min_nonzero(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let dim = a.len();
    let mut best: Option<(usize, usize)> = None;
    for i in t..dim {
        for j in t..dim {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Sum over spanning trees of the product of their edge weights, by direct
/// enumeration. By the matrix-tree theorem this equals `det(P_k)` for every
/// `k`; it is computed here without any linear algebra.
pub fn spanning_tree_count(graph: &WeightedGraph) -> Rational {
    let n = graph.n();
    let edges = graph.edges();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut total = Rational::zero();
    extend_forest(&edges, 0, n - 1, &mut parent, Rational::one(), &mut total);
    total
}

fn find(parent: &[usize], mut v: usize) -> usize {
    while parent[v] != v {
        v = parent[v];
    }
    v
}

fn extend_forest(
    edges: &[(usize, usize, Rational)],
    from: usize,
    missing: usize,
    parent: &mut Vec<usize>,
    weight: Rational,
    total: &mut Rational,
) {
    if missing == 0 {
        *total += weight;
        return;
    }
    if edges.len() - from < missing {
        return;
    }
    for idx in from..edges.len() {
        let (i, j, w) = &edges[idx];
        let (ri, rj) = (find(parent, *i), find(parent, *j));
        if ri == rj {
            continue;
        }
        parent[ri] = rj;
        extend_forest(edges, idx + 1, missing - 1, parent, &weight * w, total);
        parent[ri] = ri;
    }
}

/// `det(P_k)`, for comparison with [`spanning_tree_count`].
pub fn reduced_determinant(graph: &WeightedGraph, k: usize) -> Result<Rational> {
    Ok(ReducedMatrix::new(graph, k)?.determinant().clone())
}
