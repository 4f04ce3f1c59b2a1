//! Linear equivalence: exact solves against the reduced edge matrix `P_k`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Divisor, WeightedGraph};
use crate::rational::{int, Rational};

/// `P_k`: the edge matrix with row and column `k` deleted, together with its
/// exact inverse. For a connected graph it is nonsingular and its inverse is
/// entrywise nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedMatrix {
    k: usize,
    dim: usize,
    entries: Vec<Rational>,
    inverse: Vec<Rational>,
    determinant: Rational,
}

impl ReducedMatrix {
    pub fn new(graph: &WeightedGraph, k: usize) -> Result<Self> {
        let n = graph.n();
        if k >= n {
            return Err(Error::VertexOutOfRange { index: k, n });
        }
        let p = graph.edge_matrix();
        let idx: Vec<usize> = (0..n).filter(|&i| i != k).collect();
        let dim = idx.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for &i in &idx {
            for &j in &idx {
                entries.push(p.get(i, j).clone());
            }
        }
        let (inverse, determinant) =
            invert(&entries, dim).ok_or(Error::SingularMatrix { k })?;
        Ok(ReducedMatrix {
            k,
            dim,
            entries,
            inverse,
            determinant,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.dim + c]
    }

    pub fn inverse(&self, r: usize, c: usize) -> &Rational {
        &self.inverse[r * self.dim + c]
    }

    pub fn determinant(&self) -> &Rational {
        &self.determinant
    }

    /// Vertex indices other than `k`, in the row order of the matrix.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.dim).filter(move |&i| i != self.k)
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        mat_vec(&self.entries, self.dim, x)
    }

    pub fn solve(&self, y: &[Rational]) -> Vec<Rational> {
        mat_vec(&self.inverse, self.dim, y)
    }

    pub fn inverse_is_nonnegative(&self) -> bool {
        self.inverse.iter().all(|v| !v.is_negative())
    }
}

fn mat_vec(m: &[Rational], dim: usize, x: &[Rational]) -> Vec<Rational> {
    assert_eq!(x.len(), dim);
    (0..dim)
        .map(|r| (0..dim).map(|c| &m[r * dim + c] * &x[c]).sum())
        .collect()
}

/// Gauss-Jordan over the rationals. Returns the inverse and the determinant,
/// or `None` for a singular matrix.
fn invert(m: &[Rational], dim: usize) -> Option<(Vec<Rational>, Rational)> {
    let mut a = m.to_vec();
    let mut inv = vec![Rational::zero(); dim * dim];
    for i in 0..dim {
        inv[i * dim + i] = Rational::one();
    }
    let mut det = Rational::one();
    for col in 0..dim {
        let pivot = (col..dim).find(|&r| !a[r * dim + col].is_zero())?;
        if pivot != col {
            for c in 0..dim {
                a.swap(pivot * dim + c, col * dim + c);
                inv.swap(pivot * dim + c, col * dim + c);
            }
            det = -det;
        }
        let pv = a[col * dim + col].clone();
        det *= &pv;
        let recip = pv.recip();
        for c in 0..dim {
            a[col * dim + c] *= &recip;
            inv[col * dim + c] *= &recip;
        }
        for r in 0..dim {
            if r == col {
                continue;
            }
            let factor = a[r * dim + col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..dim {
                let t = &factor * &a[col * dim + c];
                a[r * dim + c] -= t;
                let t = &factor * &inv[col * dim + c];
                inv[r * dim + c] -= t;
            }
        }
    }
    Some((inv, det))
}

/// Firing coefficients `m_j` (for `j != k`) with `sum_j m_j H_j` equal to a
/// given degree-zero divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceCertificate {
    pub k: usize,
    /// Indexed by vertex; `m[k]` is always zero.
    pub m: Vec<BigInt>,
}

impl EquivalenceCertificate {
    /// Rebuilds `sum_j m_j H_j` at every coordinate, including `k`.
    pub fn principal(&self, graph: &WeightedGraph) -> Divisor {
        let mut out = Divisor::zero(graph.n());
        for (j, m) in self.m.iter().enumerate() {
            if !m.is_zero() {
                let c = Rational::from_integer(m.clone());
                out = out + graph.principal_generator(j).scale(&c);
            }
        }
        out
    }
}

/// Writes `z` as an integer combination of the `H_j`, `j != k`, if possible.
pub fn decompose_principal(
    graph: &WeightedGraph,
    z: &Divisor,
    k: usize,
) -> Result<Option<EquivalenceCertificate>> {
    let reduced = ReducedMatrix::new(graph, k)?;
    decompose_with(&reduced, graph, z)
}

pub(crate) fn decompose_with(
    reduced: &ReducedMatrix,
    graph: &WeightedGraph,
    z: &Divisor,
) -> Result<Option<EquivalenceCertificate>> {
    graph.check_divisor(z)?;
    if !z.degree().is_zero() {
        return Ok(None);
    }
    let k = reduced.k();
    let rhs: Vec<Rational> = reduced.vertices().map(|i| z.get(i).clone()).collect();
    let sol = reduced.solve(&rhs);
    if !sol.iter().all(|v| v.is_integer()) {
        return Ok(None);
    }
    let mut m = vec![BigInt::zero(); graph.n()];
    for (i, v) in reduced.vertices().zip(sol) {
        m[i] = v.to_integer();
    }
    let cert = EquivalenceCertificate { k, m };
    debug_assert_eq!(&cert.principal(graph), z);
    Ok(Some(cert))
}

/// `Some(certificate for D1 - D2)` when `D1 ~ D2`, using `k = n - 1`.
pub fn linearly_equivalent(
    graph: &WeightedGraph,
    d1: &Divisor,
    d2: &Divisor,
) -> Result<Option<EquivalenceCertificate>> {
    graph.check_divisor(d1)?;
    graph.check_divisor(d2)?;
    decompose_principal(graph, &(d1 - d2), graph.n() - 1)
}

/// `ceil(D) >= 0`, i.e. every coordinate is strictly greater than -1.
pub fn ceil_effective(d: &Divisor) -> bool {
    let minus_one = int(-1);
    d.coeffs().iter().all(|c| c > &minus_one)
}

/// Decides `|D| != {}` and returns a member of `|D|` when nonempty.
///
/// Runs through the integer engine on the scaled graph and pulls the
/// q-reduced representative back with the inverse homothety.
pub fn linsys_nonempty(graph: &WeightedGraph, d: &Divisor) -> Result<Option<Divisor>> {
    crate::scaling::linear_system_witness(graph, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(3, &[(0, 1, int(1)), (1, 2, int(1)), (0, 2, int(1))]).unwrap()
    }

    fn two_vertex(p: Rational) -> WeightedGraph {
        WeightedGraph::new(2, &[(0, 1, p)]).unwrap()
    }

    #[test]
    fn triangle_reduced_matrix() {
        let r = ReducedMatrix::new(&triangle(), 0).unwrap();
        assert_eq!(r.get(0, 0), &int(2));
        assert_eq!(r.get(0, 1), &int(-1));
        assert_eq!(r.inverse(0, 0), &frac(2, 3));
        assert_eq!(r.inverse(0, 1), &frac(1, 3));
        assert_eq!(r.inverse(1, 1), &frac(2, 3));
        assert_eq!(r.determinant(), &int(3));
    }

    #[test]
    fn two_vertex_reduced_matrix() {
        let p = frac(5, 7);
        let r = ReducedMatrix::new(&two_vertex(p.clone()), 1).unwrap();
        assert_eq!(r.get(0, 0), &p);
        assert_eq!(r.inverse(0, 0), &p.recip());
    }

    #[test]
    fn decompose_two_vertex() {
        let g = two_vertex(frac(3, 2));
        let z = Divisor::new(vec![frac(3, 2), frac(-3, 2)]);
        let cert = decompose_principal(&g, &z, 1).unwrap().unwrap();
        assert_eq!(cert.m, vec![BigInt::from(1), BigInt::zero()]);
        let z = Divisor::from_ints(&[1, -1]);
        assert_eq!(decompose_principal(&g, &z, 1).unwrap(), None);
        // Nonzero degree is never principal.
        let z = Divisor::from_ints(&[1, 0]);
        assert_eq!(decompose_principal(&g, &z, 1).unwrap(), None);
    }

    #[test]
    fn zero_decomposes_to_zero() {
        let g = triangle();
        for k in 0..3 {
            let cert = decompose_principal(&g, &Divisor::zero(3), k).unwrap().unwrap();
            assert!(cert.m.iter().all(|m| m.is_zero()));
        }
    }

    #[test]
    fn equivalence_examples() {
        let g = two_vertex(frac(3, 2));
        let a = Divisor::new(vec![frac(3, 2), int(0)]);
        let b = Divisor::new(vec![int(0), frac(3, 2)]);
        assert!(linearly_equivalent(&g, &a, &b).unwrap().is_some());
        let a = Divisor::from_ints(&[1, 0]);
        let b = Divisor::from_ints(&[0, 1]);
        assert!(linearly_equivalent(&g, &a, &b).unwrap().is_none());
        assert!(linearly_equivalent(&g, &a, &a).unwrap().is_some());
        assert_eq!(
            linearly_equivalent(&g, &a, &Divisor::zero(3)),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn ceil_effective_edges() {
        assert!(ceil_effective(&Divisor::new(vec![frac(-1, 2), frac(-1, 2)])));
        assert!(!ceil_effective(&Divisor::from_ints(&[-1, 0])));
        assert!(ceil_effective(&Divisor::zero(4)));
        assert!(!ceil_effective(&Divisor::new(vec![frac(-3, 2), int(5)])));
    }

    #[test]
    fn linsys_examples() {
        let g = two_vertex(int(2));
        assert_eq!(linsys_nonempty(&g, &Divisor::from_ints(&[-1, -1])).unwrap(), None);

        let g = two_vertex(frac(1, 2));
        let d = Divisor::new(vec![frac(-1, 2), frac(-1, 2)]);
        assert_eq!(linsys_nonempty(&g, &d).unwrap(), Some(d));

        assert_eq!(
            linsys_nonempty(&triangle(), &Divisor::from_ints(&[-1, 0, 0])).unwrap(),
            None
        );
    }

    #[test]
    fn witness_is_equivalent_and_ceil_effective() {
        let g = WeightedGraph::new(
            3,
            &[(0, 1, frac(3, 2)), (1, 2, frac(2, 3)), (0, 2, frac(1, 4))],
        )
        .unwrap();
        let d = Divisor::new(vec![frac(5, 2), frac(-3, 4), frac(-1, 3)]);
        let w = linsys_nonempty(&g, &d).unwrap().expect("nonempty");
        assert!(ceil_effective(&w));
        assert!(linearly_equivalent(&g, &w, &d).unwrap().is_some());
    }
}
