//! Independent reference computations used to cross-check the engine:
//! exhaustive lattice search on small integer graphs, the closed form for
//! the two-vertex graph, and a checker for the M-matrix property of `P_k`.
//!
//! Nothing here calls into `bn` or `scaling`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Divisor, WeightedGraph};
use crate::linear::ReducedMatrix;
use crate::rational::{self, int, Rational};

/// Size limits for the brute-force searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_n: usize,
    pub max_box_points: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_n: 5,
            max_box_points: 1_000_000,
        }
    }
}

/// Bounds on the firing coefficients `m_j`, `j != k`, of any principal `H`
/// with `D + H >= 0`. `lower[r]`/`upper[r]` refer to the `r`-th vertex other
/// than `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBox {
    pub k: usize,
    pub lower: Vec<BigInt>,
    pub upper: Vec<BigInt>,
}

impl SearchBox {
    pub fn is_empty(&self) -> bool {
        self.lower.iter().zip(&self.upper).any(|(l, u)| l > u)
    }

    pub fn point_count(&self) -> BigInt {
        if self.is_empty() {
            return BigInt::zero();
        }
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l + BigInt::one())
            .product()
    }

    /// Whether the coefficient vector (indexed by vertex, `m[k]` ignored)
    /// lies in the box.
    pub fn contains(&self, m: &[BigInt]) -> bool {
        let rows = (0..m.len()).filter(|&i| i != self.k);
        rows.zip(self.lower.iter().zip(&self.upper))
            .all(|(i, (l, u))| l <= &m[i] && &m[i] <= u)
    }
}

fn require_integral(graph: &WeightedGraph, d: &Divisor) -> Result<()> {
    graph.check_divisor(d)?;
    if !graph.is_integral() {
        return Err(Error::NonIntegralWeights);
    }
    if !d.is_integral() {
        return Err(Error::NonIntegralDivisor);
    }
    Ok(())
}

/// Every effective `D' = D + H` has coordinates in `[0, deg D]`, so the
/// restricted image `P_k m` lies in a known box; since `P_k^{-1} >= 0` that
/// box maps monotonically onto bounds for `m`.
pub fn search_box(graph: &WeightedGraph, d: &Divisor, k: usize) -> Result<SearchBox> {
    require_integral(graph, d)?;
    let reduced = ReducedMatrix::new(graph, k)?;
    box_for(&reduced, d)
}

fn box_for(reduced: &ReducedMatrix, d: &Divisor) -> Result<SearchBox> {
    let deg = d.degree();
    if deg.is_negative() {
        return Err(Error::NegativeDegree);
    }
    let lo: Vec<Rational> = reduced.vertices().map(|i| -d.get(i)).collect();
    let hi: Vec<Rational> = reduced.vertices().map(|i| &deg - d.get(i)).collect();
    let lower = reduced.solve(&lo).iter().map(rational::ceil).collect();
    let upper = reduced.solve(&hi).iter().map(rational::floor).collect();
    Ok(SearchBox {
        k: reduced.k(),
        lower,
        upper,
    })
}

/// Integer edge matrix with `P[i][j]`, used for the lattice walk.
fn int_edge_matrix(graph: &WeightedGraph) -> Result<Vec<Vec<i64>>> {
    let p = graph.edge_matrix();
    (0..graph.n())
        .map(|i| p.row(i).iter().map(rational::rational_to_i64).collect())
        .collect()
}

struct Brute {
    n: usize,
    p: Vec<Vec<i64>>,
    reduced: ReducedMatrix,
    limits: OracleLimits,
}

impl Brute {
    fn new(graph: &WeightedGraph, limits: OracleLimits) -> Result<Self> {
        let n = graph.n();
        if n > limits.max_n {
            return Err(Error::InstanceTooLarge(format!(
                "{n} vertices exceeds the limit of {}",
                limits.max_n
            )));
        }
        Ok(Brute {
            n,
            p: int_edge_matrix(graph)?,
            reduced: ReducedMatrix::new(graph, n - 1)?,
            limits,
        })
    }

    /// Exhaustive search for `m` with `D + sum m_j H_j >= 0`.
    fn is_empty(&self, d: &[i64]) -> Result<bool> {
        let deg: i64 = d.iter().sum();
        if deg < 0 {
            return Ok(true);
        }
        let dd = Divisor::from_ints(d);
        let bx = box_for(&self.reduced, &dd)?;
        if bx.is_empty() {
            return Ok(true);
        }
        let points = bx.point_count();
        if points > BigInt::from(self.limits.max_box_points) {
            return Err(Error::InstanceTooLarge(format!("search box has {points} points")));
        }
        let to_i64 = |v: &BigInt| v.to_i64().ok_or_else(|| Error::Overflow(v.to_string()));
        let lower = bx.lower.iter().map(to_i64).collect::<Result<Vec<_>>>()?;
        let upper = bx.upper.iter().map(to_i64).collect::<Result<Vec<_>>>()?;
        let cols: Vec<usize> = self.reduced.vertices().collect();
        let mut m = lower.clone();
        loop {
            let feasible = (0..self.n).all(|i| {
                let h: i64 = cols.iter().zip(&m).map(|(&j, &mj)| self.p[i][j] * mj).sum();
                d[i] + h >= 0
            });
            if feasible {
                return Ok(false);
            }
            // Odometer step.
            let mut r = 0;
            loop {
                if r == m.len() {
                    return Ok(true);
                }
                if m[r] < upper[r] {
                    m[r] += 1;
                    break;
                }
                m[r] = lower[r];
                r += 1;
            }
        }
    }
}

fn int_coords(d: &Divisor) -> Result<Vec<i64>> {
    d.coeffs().iter().map(rational::rational_to_i64).collect()
}

/// `|D| = {}` by exhaustive search over the firing box (integer data only).
pub fn brute_linsys_empty_int(graph: &WeightedGraph, d: &Divisor) -> Result<bool> {
    brute_linsys_empty_int_with(graph, d, OracleLimits::default())
}

pub fn brute_linsys_empty_int_with(
    graph: &WeightedGraph,
    d: &Divisor,
    limits: OracleLimits,
) -> Result<bool> {
    require_integral(graph, d)?;
    Brute::new(graph, limits)?.is_empty(&int_coords(d)?)
}

/// `h0(D)` by graded enumeration: effective `E` of degree 0, 1, 2, ... in
/// lexicographic order, stopping at the first with `|D - E| = {}`.
pub fn brute_h0_int(graph: &WeightedGraph, d: &Divisor) -> Result<i64> {
    brute_h0_int_with(graph, d, OracleLimits::default())
}

pub fn brute_h0_int_with(graph: &WeightedGraph, d: &Divisor, limits: OracleLimits) -> Result<i64> {
    require_integral(graph, d)?;
    let brute = Brute::new(graph, limits)?;
    let coords = int_coords(d)?;
    let deg: i64 = coords.iter().sum();
    if deg < 0 {
        return Ok(0);
    }
    for t in 0..=deg + 1 {
        let mut found = false;
        let mut err = None;
        for_each_composition(brute.n, t, &mut |e| {
            let rest: Vec<i64> = coords.iter().zip(e).map(|(a, b)| a - b).collect();
            match brute.is_empty(&rest) {
                Ok(true) => {
                    found = true;
                    false
                }
                Ok(false) => true,
                Err(x) => {
                    err = Some(x);
                    false
                }
            }
        });
        if let Some(x) = err {
            return Err(x);
        }
        if found {
            return Ok(t);
        }
    }
    unreachable!("degree {} is already empty", deg + 1)
}

/// Visits all `e >= 0` of length `n` summing to `t`, lexicographically
/// increasing. The callback returns `false` to stop.
pub fn for_each_composition(n: usize, t: i64, f: &mut dyn FnMut(&[i64]) -> bool) {
    fn go(pos: usize, left: i64, e: &mut Vec<i64>, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        let n = e.len();
        if pos + 1 == n {
            e[pos] = left;
            return f(e);
        }
        for v in 0..=left {
            e[pos] = v;
            if !go(pos + 1, left - v, e, f) {
                return false;
            }
        }
        true
    }
    if n == 0 {
        if t == 0 {
            f(&[]);
        }
        return;
    }
    let mut e = vec![0; n];
    go(0, t, &mut e, f);
}

fn check_p(p: &Rational) -> Result<()> {
    if !p.is_positive() {
        return Err(Error::NonpositiveWeight {
            i: 0,
            j: 1,
            weight: p.to_string(),
        });
    }
    Ok(())
}

fn floor_sum(a: &Rational, b: &Rational, p: &Rational) -> BigInt {
    let one = Rational::one();
    rational::floor(&((a + &one) / p)) + rational::floor(&((b + &one) / p))
}

/// Which branch of the two-vertex `h0` formula `(a, b)` falls in: the sign of
/// `floor((a+1)/p) + floor((b+1)/p)`.
pub fn two_vertex_case(a: &Rational, b: &Rational, p: &Rational) -> Result<Ordering> {
    check_p(p)?;
    Ok(floor_sum(a, b, p).cmp(&BigInt::zero()))
}

/// Closed form for `h0((a, b))` on the two-vertex graph with weight `p`.
pub fn two_vertex_h0(a: &Rational, b: &Rational, p: &Rational) -> Result<Rational> {
    check_p(p)?;
    let one = Rational::one();
    Ok(match floor_sum(a, b, p).cmp(&BigInt::zero()) {
        Ordering::Less => Rational::zero(),
        Ordering::Equal => {
            let rem = |x: &Rational| {
                let fl = Rational::from_integer(rational::floor(&((x + &one) / p)));
                x + &one - p * fl
            };
            rem(a).min(rem(b))
        }
        Ordering::Greater => a + b - p + int(2),
    })
}

/// `|(a, b)| != {}` iff `ceil((1+a)/p) + ceil((1+b)/p) >= 2`.
pub fn two_vertex_nonempty(a: &Rational, b: &Rational, p: &Rational) -> Result<bool> {
    check_p(p)?;
    let one = Rational::one();
    let s = rational::ceil(&((&one + a) / p)) + rational::ceil(&((&one + b) / p));
    Ok(s >= BigInt::from(2))
}

/// Checks that `P_k` is invertible with an entrywise nonnegative inverse, and
/// spot-checks `P_k x >= 0 => x >= 0` on random nonnegative right-hand sides.
pub fn check_monotone(graph: &WeightedGraph, k: usize) -> Result<bool> {
    let reduced = match ReducedMatrix::new(graph, k) {
        Ok(r) => r,
        Err(Error::SingularMatrix { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    let dim = reduced.dim();
    for c in 0..dim {
        let col: Vec<Rational> = (0..dim).map(|r| reduced.inverse(r, c).clone()).collect();
        let image = reduced.mul_vec(&col);
        for (r, v) in image.iter().enumerate() {
            let expect = if r == c { Rational::one() } else { Rational::zero() };
            if *v != expect {
                return Ok(false);
            }
        }
    }
    if !reduced.inverse_is_nonnegative() {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f6e6f);
    for _ in 0..16 {
        let y: Vec<Rational> = (0..dim)
            .map(|_| rational::frac(rng.gen_range(0..20), rng.gen_range(1..8)))
            .collect();
        let x = reduced.solve(&y);
        if x.iter().any(|v| v.is_negative()) || reduced.mul_vec(&x) != y {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(3, &[(0, 1, int(1)), (1, 2, int(1)), (0, 2, int(1))]).unwrap()
    }

    fn k2() -> WeightedGraph {
        WeightedGraph::new(2, &[(0, 1, int(1))]).unwrap()
    }

    #[test]
    fn box_examples() {
        let b = search_box(&k2(), &Divisor::zero(2), 1).unwrap();
        assert_eq!(b.lower, vec![BigInt::zero()]);
        assert_eq!(b.upper, vec![BigInt::zero()]);

        // (0,2,0) - H_2 = (1,0,1): m_2 = -1 must be inside the k=0 box.
        let b = search_box(&triangle(), &Divisor::from_ints(&[0, 2, 0]), 0).unwrap();
        let m = vec![BigInt::zero(), BigInt::from(-1), BigInt::zero()];
        assert!(b.contains(&m));

        assert_eq!(
            search_box(&triangle(), &Divisor::from_ints(&[0, -1, 0]), 0),
            Err(Error::NegativeDegree)
        );
    }

    #[test]
    fn brute_emptiness() {
        let t = triangle();
        assert!(!brute_linsys_empty_int(&t, &Divisor::from_ints(&[0, 2, 0])).unwrap());
        assert!(brute_linsys_empty_int(&t, &Divisor::from_ints(&[-1, 0, 0])).unwrap());
        assert!(brute_linsys_empty_int(&t, &Divisor::from_ints(&[-1, 0, -1])).unwrap());
        let g = WeightedGraph::new(2, &[(0, 1, frac(1, 2))]).unwrap();
        assert_eq!(
            brute_linsys_empty_int(&g, &Divisor::zero(2)),
            Err(Error::NonIntegralWeights)
        );
    }

    #[test]
    fn brute_h0() {
        assert_eq!(brute_h0_int(&k2(), &Divisor::from_ints(&[1, 1])).unwrap(), 3);
        assert_eq!(brute_h0_int(&triangle(), &Divisor::zero(3)).unwrap(), 1);
        assert_eq!(brute_h0_int(&triangle(), &Divisor::from_ints(&[0, -2, 1])).unwrap(), 0);
    }

    #[test]
    fn size_limit() {
        let edges: Vec<_> = (0..5).map(|i| (i, i + 1, int(1))).collect();
        let g = WeightedGraph::new(6, &edges).unwrap();
        assert!(matches!(
            brute_h0_int(&g, &Divisor::zero(6)),
            Err(Error::InstanceTooLarge(_))
        ));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(two_vertex_h0(&int(0), &int(0), &int(1)).unwrap(), int(1));
        assert_eq!(two_vertex_h0(&int(0), &int(0), &frac(1, 2)).unwrap(), frac(3, 2));
        for p in [frac(1, 3), int(1), frac(5, 2), int(4)] {
            assert_eq!(two_vertex_h0(&int(-1), &int(-1), &p).unwrap(), int(0));
        }
        assert!(two_vertex_h0(&int(0), &int(0), &int(0)).is_err());
    }

    #[test]
    fn closed_form_emptiness() {
        assert!(two_vertex_nonempty(&int(0), &int(0), &int(1)).unwrap());
        assert!(!two_vertex_nonempty(&int(-1), &int(-1), &int(2)).unwrap());
        let p = frac(7, 3);
        let a = &p - int(1);
        assert!(two_vertex_nonempty(&a, &a, &p).unwrap());
    }

    #[test]
    fn monotone_examples() {
        for k in 0..3 {
            assert!(check_monotone(&triangle(), k).unwrap());
        }
        let path = WeightedGraph::new(3, &[(0, 1, frac(2, 3)), (1, 2, int(5))]).unwrap();
        assert!(check_monotone(&path, 1).unwrap());
        let r = ReducedMatrix::new(&triangle(), 2).unwrap();
        assert_eq!(r.inverse(0, 0), &frac(2, 3));
        assert_eq!(r.inverse(1, 0), &frac(1, 3));
    }

    #[test]
    fn compositions_in_lex_order() {
        let mut seen = Vec::new();
        for_each_composition(3, 2, &mut |e| {
            seen.push(e.to_vec());
            true
        });
        assert_eq!(
            seen,
            vec![
                vec![0, 0, 2],
                vec![0, 1, 1],
                vec![0, 2, 0],
                vec![1, 0, 1],
                vec![1, 1, 0],
                vec![2, 0, 0]
            ]
        );
    }
}
