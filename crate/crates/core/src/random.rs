//! Seeded generators for random connected graphs and divisors.
//!
//! Every generator draws only from the `Rng` it is given, so a fixed seed
//! reproduces the same instance stream on every platform.

use rand::Rng;

use crate::graph::{Divisor, WeightedGraph};
use crate::rational::{frac, Rational};

/// Bounds for random rational instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceParams {
    pub min_n: usize,
    pub max_n: usize,
    pub max_weight_num: i64,
    pub max_weight_den: i64,
    pub max_coeff_num: i64,
    pub max_coeff_den: i64,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            min_n: 1,
            max_n: 5,
            max_weight_num: 10,
            max_weight_den: 10,
            max_coeff_num: 5,
            max_coeff_den: 10,
        }
    }
}

impl InstanceParams {
    /// Integer instances: weights in `1..=max_weight`, coordinates in
    /// `-max_coeff..=max_coeff`.
    pub fn integral(max_n: usize, max_weight: i64, max_coeff: i64) -> Self {
        InstanceParams {
            min_n: 1,
            max_n,
            max_weight_num: max_weight,
            max_weight_den: 1,
            max_coeff_num: max_coeff,
            max_coeff_den: 1,
        }
    }
}

fn weight<R: Rng>(rng: &mut R, p: &InstanceParams) -> Rational {
    frac(
        rng.gen_range(1..=p.max_weight_num.max(1)),
        rng.gen_range(1..=p.max_weight_den.max(1)),
    )
}

/// A random spanning tree on `n` vertices plus each remaining pair with
/// probability 1/2.
pub fn random_graph_with_n<R: Rng>(rng: &mut R, n: usize, p: &InstanceParams) -> WeightedGraph {
    let mut edges = Vec::new();
    let mut present = vec![false; n * n];
    for v in 1..n {
        let u = rng.gen_range(0..v);
        present[u * n + v] = true;
        edges.push((u, v, weight(rng, p)));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !present[i * n + j] && rng.gen_bool(0.5) {
                edges.push((i, j, weight(rng, p)));
            }
        }
    }
    WeightedGraph::new(n, &edges).expect("generated graph is valid")
}

pub fn random_graph<R: Rng>(rng: &mut R, p: &InstanceParams) -> WeightedGraph {
    let n = rng.gen_range(p.min_n.max(1)..=p.max_n.max(p.min_n.max(1)));
    random_graph_with_n(rng, n, p)
}

pub fn random_divisor<R: Rng>(rng: &mut R, n: usize, p: &InstanceParams) -> Divisor {
    Divisor::new(
        (0..n)
            .map(|_| {
                frac(
                    rng.gen_range(-p.max_coeff_num..=p.max_coeff_num),
                    rng.gen_range(1..=p.max_coeff_den.max(1)),
                )
            })
            .collect(),
    )
}

/// An effective integer divisor with coordinates in `0..=max`.
pub fn random_effective<R: Rng>(rng: &mut R, n: usize, max: i64) -> Divisor {
    let v: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
    Divisor::from_ints(&v)
}

/// `sum_j c_j H_j` with `c_j` uniform in `-max..=max`.
pub fn random_principal<R: Rng>(rng: &mut R, graph: &WeightedGraph, max: i64) -> Divisor {
    let c: Vec<i64> = (0..graph.n()).map(|_| rng.gen_range(-max..=max)).collect();
    graph.principal_divisor(&c)
}

/// A positive rational drawn from `choices`.
pub fn pick<'a, R: Rng, T>(rng: &mut R, choices: &'a [T]) -> &'a T {
    &choices[rng.gen_range(0..choices.len())]
}
