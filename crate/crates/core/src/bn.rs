//! Baker-Norine machinery on integer-weighted graphs: Dhar's burning
//! algorithm, q-reduced divisors, rank and `h0 = r + 1`.
//!
//! Works in `i64`. Conversions from the exact rational model are checked and
//! fail with [`Error::Overflow`] rather than wrapping.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Divisor, WeightedGraph};
use crate::rational::{self, int};

/// An integer-weighted graph read as a multigraph: `multiplicity(i, j)`
/// parallel edges between `i` and `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    mult: Vec<i64>,
    degree: Vec<i64>,
}

impl Multigraph {
    pub fn from_graph(graph: &WeightedGraph) -> Result<Self> {
        if !graph.is_integral() {
            return Err(Error::NonIntegralWeights);
        }
        let n = graph.n();
        let mut mult = vec![0; n * n];
        for (i, j, w) in graph.edges() {
            let m = rational::rational_to_i64(&w)?;
            mult[i * n + j] = m;
            mult[j * n + i] = m;
        }
        let degree = (0..n)
            .map(|i| mult[i * n..(i + 1) * n].iter().sum())
            .collect();
        Ok(Multigraph { n, mult, degree })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> i64 {
        self.mult[i * self.n + j]
    }

    pub fn degree(&self, v: usize) -> i64 {
        self.degree[v]
    }

    /// Fires every vertex of `set` `times` times: each edge leaving the set
    /// carries `times` chips out of it.
    fn fire_set(&self, d: &mut [i64], set: &[bool], times: i64) {
        if times == 0 {
            return;
        }
        for v in 0..self.n {
            let crossing: i64 = (0..self.n)
                .filter(|&u| set[u] != set[v])
                .map(|u| self.multiplicity(v, u))
                .sum();
            if set[v] {
                d[v] -= times * crossing;
            } else {
                d[v] += times * crossing;
            }
        }
    }

    /// `D - P * script`.
    pub fn apply_script(&self, d: &IntDivisor, script: &[i64]) -> IntDivisor {
        let mut out = d.0.clone();
        for v in 0..self.n {
            let s = script[v];
            if s == 0 {
                continue;
            }
            out[v] -= s * self.degree(v);
            for u in 0..self.n {
                if u != v {
                    out[u] += s * self.multiplicity(u, v);
                }
            }
        }
        IntDivisor(out)
    }

    fn check(&self, d: &IntDivisor, q: usize) -> Result<()> {
        if d.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: d.len(),
            });
        }
        if q >= self.n {
            return Err(Error::VertexOutOfRange {
                index: q,
                n: self.n,
            });
        }
        Ok(())
    }
}

/// A divisor with integer coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntDivisor(pub Vec<i64>);

impl IntDivisor {
    pub fn from_divisor(d: &Divisor) -> Result<Self> {
        if !d.is_integral() {
            return Err(Error::NonIntegralDivisor);
        }
        d.coeffs()
            .iter()
            .map(rational::rational_to_i64)
            .collect::<Result<Vec<_>>>()
            .map(IntDivisor)
    }

    pub fn to_divisor(&self) -> Divisor {
        Divisor::new(self.0.iter().map(|&v| int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }
}

/// Burns from `q` and returns the mask of burnt vertices.
fn burn(m: &Multigraph, d: &[i64], q: usize) -> Vec<bool> {
    let n = m.n;
    let mut burnt = vec![false; n];
    let mut to_burnt = vec![0i64; n];
    let mut queue = VecDeque::from([q]);
    burnt[q] = true;
    while let Some(v) = queue.pop_front() {
        for u in 0..n {
            let e = m.multiplicity(u, v);
            if e == 0 || burnt[u] {
                continue;
            }
            to_burnt[u] += e;
            if to_burnt[u] > d[u] {
                burnt[u] = true;
                queue.push_back(u);
            }
        }
    }
    burnt
}

/// Dhar's burning algorithm. A fire starts at `q`; a vertex catches fire
/// once its number of edges to burnt vertices strictly exceeds its chip
/// count. Returns the unburnt vertices in increasing order; empty exactly
/// when `D` is q-reduced.
pub fn dhar_burn(m: &Multigraph, d: &IntDivisor, q: usize) -> Result<Vec<usize>> {
    m.check(d, q)?;
    if let Some(v) = (0..m.n).find(|&v| v != q && d.0[v] < 0) {
        return Err(Error::NegativeAwayFromQ { vertex: v });
    }
    let burnt = burn(m, &d.0, q);
    Ok((0..m.n).filter(|&v| !burnt[v]).collect())
}

/// Result of [`q_reduce`]: the reduced divisor and the firing script that
/// produced it, `reduced = D - P * script`, normalised so `script[q] == 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QReduction {
    pub divisor: IntDivisor,
    pub script: Vec<i64>,
}

/// The unique q-reduced divisor linearly equivalent to `D`.
pub fn q_reduce(m: &Multigraph, d: &IntDivisor, q: usize) -> Result<QReduction> {
    m.check(d, q)?;
    let mut coeffs = d.0.clone();
    let mut script = vec![0i64; m.n];
    reduce_in_place(m, &mut coeffs, q, Some(&mut script));
    let shift = script[q];
    for s in &mut script {
        *s -= shift;
    }
    Ok(QReduction {
        divisor: IntDivisor(coeffs),
        script,
    })
}

fn record(script: &mut Option<&mut Vec<i64>>, set: &[bool], times: i64) {
    if let Some(s) = script.as_deref_mut() {
        for (v, &inside) in set.iter().enumerate() {
            if inside {
                s[v] += times;
            }
        }
    }
}

fn reduce_in_place(m: &Multigraph, d: &mut [i64], q: usize, mut script: Option<&mut Vec<i64>>) {
    let n = m.n;
    // Lift everything away from q to >= 0 by firing BFS balls around q,
    // deepest layer first. Firing the ball of radius j only feeds layer j+1
    // and only drains layer j, so finished layers stay finished.
    if (0..n).any(|v| v != q && d[v] < 0) {
        let dist = bfs_layers(m, q);
        let depth = dist.iter().copied().max().unwrap_or(0);
        for j in (0..depth).rev() {
            let ball: Vec<bool> = dist.iter().map(|&x| x <= j).collect();
            let mut need = 0i64;
            for u in (0..n).filter(|&u| dist[u] == j + 1 && d[u] < 0) {
                let gain: i64 = (0..n).filter(|&v| ball[v]).map(|v| m.multiplicity(u, v)).sum();
                need = need.max((-d[u] + gain - 1) / gain);
            }
            m.fire_set(d, &ball, need);
            record(&mut script, &ball, need);
        }
    }
    // Dhar loop: fire the unburnt set as many times as stays legal.
    loop {
        let burnt = burn(m, d, q);
        let unburnt: Vec<bool> = burnt.iter().map(|b| !b).collect();
        if !unburnt.iter().any(|&u| u) {
            break;
        }
        let mut times = i64::MAX;
        for v in (0..n).filter(|&v| unburnt[v]) {
            let out: i64 = (0..n).filter(|&u| burnt[u]).map(|u| m.multiplicity(v, u)).sum();
            if out > 0 {
                times = times.min(d[v] / out);
            }
        }
        debug_assert!((1..i64::MAX).contains(&times));
        m.fire_set(d, &unburnt, times);
        record(&mut script, &unburnt, times);
    }
}

fn bfs_layers(m: &Multigraph, q: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; m.n];
    dist[q] = 0;
    let mut queue = VecDeque::from([q]);
    while let Some(v) = queue.pop_front() {
        for u in 0..m.n {
            if m.multiplicity(u, v) > 0 && dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// True when `D - P * script` style reduction has finished: nonnegative away
/// from `q` and Dhar's fire from `q` burns everything.
pub fn is_q_reduced(m: &Multigraph, d: &IntDivisor, q: usize) -> bool {
    (0..m.n).all(|v| v == q || d.0[v] >= 0) && burn(m, &d.0, q).iter().all(|&b| b)
}

/// `|D| != {}` over the integers, read off the sign at `q` of the q-reduced form.
pub fn linsys_nonempty_int(m: &Multigraph, d: &IntDivisor, q: usize) -> Result<bool> {
    if d.degree() < 0 {
        m.check(d, q)?;
        return Ok(false);
    }
    Ok(q_reduce(m, d, q)?.divisor.0[q] >= 0)
}

/// Baker-Norine rank `r(D) >= -1`.
pub fn rank_bn(m: &Multigraph, d: &IntDivisor) -> Result<i64> {
    Ok(h0_int(m, d)? - 1)
}

/// `h0(D) = min { deg E : E >= 0, |D - E| = {} } = r(D) + 1`.
pub fn h0_int(m: &Multigraph, d: &IntDivisor) -> Result<i64> {
    Ok(h0_int_witness(m, d)?.0)
}

/// Like [`h0_int`], also returning an effective `E` attaining the minimum.
///
/// Exact branch and bound. At a state `E`, reduce `D - E` at every vertex.
/// If one of the reduced forms is negative at its root, `D - E` has an empty
/// linear system. Otherwise each reduced form `W` is an effective divisor
/// equivalent to `D - E`, and every feasible `E* >= E` must exceed `W` at
/// some coordinate, so the children `E + (w_i + 1) e_i` cover all of them.
pub fn h0_int_witness(m: &Multigraph, d: &IntDivisor) -> Result<(i64, IntDivisor)> {
    m.check(d, 0)?;
    let n = m.n;
    if d.degree() < 0 {
        return Ok((0, IntDivisor(vec![0; n])));
    }
    let mut witnesses = Vec::with_capacity(n);
    for q in 0..n {
        let mut w = d.0.clone();
        reduce_in_place(m, &mut w, q, None);
        if w[q] < 0 {
            return Ok((0, IntDivisor(vec![0; n])));
        }
        witnesses.push(w);
    }
    let mut search = KillSearch {
        m,
        best: i64::MAX,
        best_e: Vec::new(),
        seen: HashSet::new(),
    };
    let mut e = vec![0i64; n];
    search.visit(&mut e, 0, witnesses);
    Ok((search.best, IntDivisor(search.best_e)))
}

struct KillSearch<'a> {
    m: &'a Multigraph,
    best: i64,
    best_e: Vec<i64>,
    seen: HashSet<Vec<i64>>,
}

impl KillSearch<'_> {
    /// `witnesses[q]` is the q-reduced form of `D - E`, all effective.
    fn visit(&mut self, e: &mut Vec<i64>, deg_e: i64, witnesses: Vec<Vec<i64>>) {
        let n = self.m.n;
        // Removing w_q + 1 chips at q leaves a q-reduced divisor that is
        // negative at q.
        for (q, w) in witnesses.iter().enumerate() {
            let cost = deg_e + w[q] + 1;
            if cost < self.best {
                self.best = cost;
                self.best_e = e.clone();
                self.best_e[q] += w[q] + 1;
            }
        }
        let kill_cost = |w: &Vec<i64>| w.iter().map(|&c| c + 1).min().unwrap_or(0);
        let branch_q = (0..n).max_by_key(|&q| (kill_cost(&witnesses[q]), std::cmp::Reverse(q))).unwrap_or(0);
        if deg_e + hitting_bound(&witnesses) >= self.best {
            return;
        }
        let branch = &witnesses[branch_q];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (branch[i], i));
        for i in order {
            let step = branch[i] + 1;
            let child_deg = deg_e + step;
            if child_deg >= self.best {
                continue;
            }
            e[i] += step;
            match self.child_witnesses(&witnesses, i, step) {
                None => {
                    self.best = child_deg;
                    self.best_e = e.clone();
                }
                // Equivalent remainders have equal degree, hence identical
                // subproblems; key on the 0-reduced form.
                Some(ws) => {
                    if self.seen.insert(ws[0].clone()) {
                        self.visit(e, child_deg, ws);
                    }
                }
            }
            e[i] -= step;
        }
    }

    /// Reduced forms of `D - E - step * e_i`, or `None` if its linear system
    /// is empty.
    fn child_witnesses(&self, parent: &[Vec<i64>], i: usize, step: i64) -> Option<Vec<Vec<i64>>> {
        let mut out = Vec::with_capacity(parent.len());
        for (q, w) in parent.iter().enumerate() {
            let mut c = w.clone();
            c[i] -= step;
            if c.iter().sum::<i64>() < 0 {
                return None;
            }
            reduce_in_place(self.m, &mut c, q, None);
            if c[q] < 0 {
                return None;
            }
            out.push(c);
        }
        Some(out)
    }
}

/// Least total number of chips that must be removed so that every one of
/// the given effective divisors loses more than it holds at some vertex:
/// `min sum_i t_i` such that each `w` has an `i` with `t_i >= w_i + 1`.
/// Any `E* >= E` with `|D - E*|` empty satisfies this for the reduced forms
/// of `D - E`, so it is a valid lower bound on the remaining cost.
fn hitting_bound(witnesses: &[Vec<i64>]) -> i64 {
    let m = witnesses.len();
    if m == 0 {
        return 0;
    }
    let n = witnesses[0].len();
    let full = (1usize << m) - 1;
    let mut best = vec![i64::MAX; full + 1];
    best[0] = 0;
    let mut cost = vec![0i64; full + 1];
    for i in 0..n {
        // cost[T] = chips needed at vertex i to kill every witness in T.
        for t in 1..=full {
            let low = t.trailing_zeros() as usize;
            cost[t] = cost[t & (t - 1)].max(witnesses[low][i] + 1);
        }
        let prev = best.clone();
        for s in 0..=full {
            if prev[s] == i64::MAX {
                continue;
            }
            let rest = full & !s;
            let mut t = rest;
            while t > 0 {
                let v = prev[s] + cost[t];
                if v < best[s | t] {
                    best[s | t] = v;
                }
                t = (t - 1) & rest;
            }
        }
    }
    best[full]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::decompose_principal;
    use crate::rational::frac;

    fn triangle() -> Multigraph {
        let g = WeightedGraph::new(3, &[(0, 1, int(1)), (1, 2, int(1)), (0, 2, int(1))]).unwrap();
        Multigraph::from_graph(&g).unwrap()
    }

    fn two_vertex(p: i64) -> Multigraph {
        Multigraph::from_graph(&WeightedGraph::new(2, &[(0, 1, int(p))]).unwrap()).unwrap()
    }

    fn div(v: &[i64]) -> IntDivisor {
        IntDivisor(v.to_vec())
    }

    #[test]
    fn multigraph_view() {
        let m = two_vertex(3);
        assert_eq!(m.multiplicity(0, 1), 3);
        assert_eq!(m.degree(1), 3);
        let t = triangle();
        assert_eq!(t.multiplicity(0, 2), 1);
        let g = WeightedGraph::new(2, &[(0, 1, frac(3, 2))]).unwrap();
        assert_eq!(Multigraph::from_graph(&g), Err(Error::NonIntegralWeights));
    }

    #[test]
    fn burning_examples() {
        let t = triangle();
        assert_eq!(dhar_burn(&t, &div(&[0, 2, 0]), 0).unwrap(), vec![1]);
        // Neither v2 nor v3 has more burnt edges (1) than chips (1).
        assert_eq!(dhar_burn(&t, &div(&[0, 1, 1]), 0).unwrap(), vec![1, 2]);
        assert_eq!(dhar_burn(&two_vertex(2), &div(&[0, 1]), 0).unwrap(), Vec::<usize>::new());
        assert_eq!(
            dhar_burn(&t, &div(&[0, -1, 3]), 0),
            Err(Error::NegativeAwayFromQ { vertex: 1 })
        );
    }

    #[test]
    fn reduce_triangle() {
        let t = triangle();
        let r = q_reduce(&t, &div(&[0, 2, 0]), 0).unwrap();
        assert_eq!(r.divisor, div(&[1, 0, 1]));
        assert_eq!(r.script, vec![0, 1, 0]);
        assert!(is_q_reduced(&t, &r.divisor, 0));
        let again = q_reduce(&t, &r.divisor, 0).unwrap();
        assert_eq!(again.divisor, r.divisor);
        assert!(again.script.iter().all(|&s| s == 0));
    }

    #[test]
    fn reduce_negative_far_from_q() {
        // Path 0 - 1 - 2 with a debt at the far end.
        let g = WeightedGraph::new(3, &[(0, 1, int(2)), (1, 2, int(3))]).unwrap();
        let m = Multigraph::from_graph(&g).unwrap();
        let d = div(&[1, 0, -7]);
        let r = q_reduce(&m, &d, 0).unwrap();
        assert!(is_q_reduced(&m, &r.divisor, 0));
        assert_eq!(m.apply_script(&d, &r.script), r.divisor);
        let diff = &d.to_divisor() - &r.divisor.to_divisor();
        assert!(decompose_principal(&g, &diff, 0).unwrap().is_some());
    }

    #[test]
    fn emptiness_over_integers() {
        let t = triangle();
        assert!(linsys_nonempty_int(&t, &div(&[0, 2, 0]), 0).unwrap());
        assert!(!linsys_nonempty_int(&t, &div(&[5, -6, 0]), 0).unwrap());
        assert!(linsys_nonempty_int(&t, &div(&[0, 0, 0]), 2).unwrap());
        assert!(!linsys_nonempty_int(&t, &div(&[-1, 0, 0]), 1).unwrap());
    }

    #[test]
    fn rank_examples() {
        let k2 = two_vertex(1);
        assert_eq!(rank_bn(&k2, &div(&[1, 1])).unwrap(), 2);
        assert_eq!(h0_int(&k2, &div(&[0, 0])).unwrap(), 1);
        assert_eq!(h0_int(&k2, &div(&[1, 1])).unwrap(), 3);
        let t = triangle();
        assert_eq!(rank_bn(&t, &div(&[1, 0, 0])).unwrap(), 0);
        assert_eq!(h0_int(&t, &div(&[0, 0, 0])).unwrap(), 1);
        assert_eq!(rank_bn(&t, &div(&[3, -4, 0])).unwrap(), -1);
        assert_eq!(rank_bn(&t, &div(&[2, 0, -1])).unwrap(), 0);
    }

    #[test]
    fn witness_empties_linear_system() {
        let g = WeightedGraph::new(
            4,
            &[(0, 1, int(2)), (1, 2, int(1)), (2, 3, int(3)), (0, 3, int(1)), (0, 2, int(1))],
        )
        .unwrap();
        let m = Multigraph::from_graph(&g).unwrap();
        let d = div(&[3, 0, 2, 1]);
        let (h0, e) = h0_int_witness(&m, &d).unwrap();
        assert!(e.is_effective());
        assert_eq!(e.degree(), h0);
        let rest = IntDivisor(d.0.iter().zip(&e.0).map(|(a, b)| a - b).collect());
        assert!(!linsys_nonempty_int(&m, &rest, 0).unwrap());
    }

    #[test]
    fn hitting_bound_small() {
        assert_eq!(hitting_bound(&[vec![2, 0], vec![0, 2]]), 2);
        assert_eq!(hitting_bound(&[vec![2, 5], vec![4, 0]]), 4);
        assert_eq!(hitting_bound(&[vec![3, 3, 3]]), 4);
        assert_eq!(hitting_bound(&[]), 0);
    }
}
