//! Weighted graphs, divisors and the quantities derived from them: vertex
//! degree, edge matrix, genus, canonical divisor and the principal generators.
//!
//! Indices are 0-based throughout the library.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

/// A connected, loop-free graph with positive rational edge weights.
///
/// Weights live in a dense symmetric matrix; `weight(i, j) == 0` means no edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    n: usize,
    weights: Vec<Rational>,
}

impl WeightedGraph {
    /// Validates and builds a graph from an edge list.
    pub fn new(n: usize, edges: &[(usize, usize, Rational)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let mut weights = vec![Rational::zero(); n * n];
        for (i, j, w) in edges {
            let (i, j) = (*i, *j);
            for idx in [i, j] {
                if idx >= n {
                    return Err(Error::VertexOutOfRange { index: idx, n });
                }
            }
            if i == j {
                return Err(Error::LoopEdge { vertex: i });
            }
            if !w.is_positive() {
                return Err(Error::NonpositiveWeight {
                    i,
                    j,
                    weight: w.to_string(),
                });
            }
            if !weights[i * n + j].is_zero() {
                return Err(Error::DuplicateEdge {
                    i: i.min(j),
                    j: i.max(j),
                });
            }
            weights[i * n + j] = w.clone();
            weights[j * n + i] = w.clone();
        }
        let graph = WeightedGraph { n, weights };
        graph.check_connected()?;
        Ok(graph)
    }

    fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(unreachable) => Err(Error::Disconnected { unreachable }),
            None => Ok(()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> &Rational {
        &self.weights[i * self.n + j]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| !self.weight(v, u).is_zero())
    }

    /// Edges as `(i, j, w)` with `i < j`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize, Rational)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let w = self.weight(i, j);
                if !w.is_zero() {
                    out.push((i, j, w.clone()));
                }
            }
        }
        out
    }

    pub fn vertex_degree(&self, j: usize) -> Rational {
        (0..self.n).map(|i| self.weight(i, j)).sum()
    }

    pub fn edge_matrix(&self) -> EdgeMatrix {
        let n = self.n;
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = if i == j {
                    self.vertex_degree(i)
                } else {
                    -self.weight(i, j)
                };
            }
        }
        EdgeMatrix { n, entries }
    }

    /// Sum of edge weights minus `n - 1`. May be negative or fractional.
    pub fn genus(&self) -> Rational {
        let total: Rational = self.edges().into_iter().map(|(_, _, w)| w).sum();
        total - int(self.n as i64) + Rational::one()
    }

    pub fn canonical_divisor(&self) -> Divisor {
        Divisor::new(
            (0..self.n)
                .map(|i| self.vertex_degree(i) - int(2))
                .collect(),
        )
    }

    /// `H_j`: the divisor obtained by firing vertex `j`, i.e. column `j` of
    /// the edge matrix.
    pub fn principal_generator(&self, j: usize) -> Divisor {
        Divisor::new(
            (0..self.n)
                .map(|i| {
                    if i == j {
                        self.vertex_degree(j)
                    } else {
                        -self.weight(i, j)
                    }
                })
                .collect(),
        )
    }

    /// Integer combination `sum_j coeffs[j] * H_j` over all `n` generators.
    pub fn principal_divisor(&self, coeffs: &[i64]) -> Divisor {
        assert_eq!(coeffs.len(), self.n);
        let mut out = Divisor::zero(self.n);
        for (j, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                out = out + self.principal_generator(j).scale(&int(c));
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.weights.iter().all(rational::is_integral)
    }

    /// Same vertices, every weight multiplied by `a`.
    pub(crate) fn scaled(&self, a: &Rational) -> WeightedGraph {
        WeightedGraph {
            n: self.n,
            weights: self.weights.iter().map(|w| w * a).collect(),
        }
    }

    pub fn check_divisor(&self, d: &Divisor) -> Result<()> {
        if d.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: d.len(),
            });
        }
        Ok(())
    }
}

/// The symmetric `n x n` matrix with `-p_ij` off the diagonal and vertex
/// degrees on it. Rows and columns sum to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl EdgeMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

/// A rational divisor: one coefficient per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Divisor {
    coeffs: Vec<Rational>,
}

impl Divisor {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Divisor { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Divisor::new(vec![Rational::zero(); n])
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Divisor::new(values.iter().map(|&v| int(v)).collect())
    }

    /// `c * (1, 1, ..., 1)`.
    pub fn constant(n: usize, c: Rational) -> Self {
        Divisor::new(vec![c; n])
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn degree(&self) -> Rational {
        self.coeffs.iter().sum()
    }

    pub fn ceiling(&self) -> Divisor {
        Divisor::new(self.coeffs.iter().map(|c| c.ceil()).collect())
    }

    pub fn scale(&self, a: &Rational) -> Divisor {
        Divisor::new(self.coeffs.iter().map(|c| c * a).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(rational::is_integral)
    }

    /// `D >= 0` coordinatewise.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Add for Divisor {
    type Output = Divisor;
    fn add(self, rhs: Divisor) -> Divisor {
        &self + &rhs
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        assert_eq!(self.len(), rhs.len(), "divisor length mismatch");
        Divisor::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for Divisor {
    type Output = Divisor;
    fn sub(self, rhs: Divisor) -> Divisor {
        &self - &rhs
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        assert_eq!(self.len(), rhs.len(), "divisor length mismatch");
        Divisor::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        Divisor::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Mul<&Rational> for &Divisor {
    type Output = Divisor;
    fn mul(self, a: &Rational) -> Divisor {
        self.scale(a)
    }
}
