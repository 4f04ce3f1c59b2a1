//! The homothety `T_a(D) = aD + (a - 1)I`, the scaled graph `aG`, and the
//! computation of `h0` for rational data by clearing denominators and
//! handing the problem to the integer engine.
//!
//! `h0_{aG}(T_a(D)) = a * h0_G(D)` for every `a > 0`; with `a` chosen to make
//! `aG` and `T_a(D)` integral the right-hand side is what [`bn::h0_int`]
//! computes.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::bn::{self, IntDivisor, Multigraph};
use crate::error::{Error, Result};
use crate::graph::{Divisor, WeightedGraph};
use crate::rational::{self, Rational};

/// A positive integer used to clear denominators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaleFactor(BigInt);

impl ScaleFactor {
    pub fn new(a: BigInt) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::NonpositiveScale(a.to_string()));
        }
        Ok(ScaleFactor(a))
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn as_rational(&self) -> Rational {
        Rational::from_integer(self.0.clone())
    }

    /// `c * a` for a positive integer `c`.
    pub fn times(&self, c: u32) -> ScaleFactor {
        ScaleFactor(&self.0 * BigInt::from(c.max(1)))
    }
}

impl fmt::Display for ScaleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn check_scale(a: &Rational) -> Result<()> {
    if !a.is_positive() {
        return Err(Error::NonpositiveScale(a.to_string()));
    }
    Ok(())
}

/// `aG`: same vertices, every weight multiplied by `a`.
pub fn scale_graph(graph: &WeightedGraph, a: &Rational) -> Result<WeightedGraph> {
    check_scale(a)?;
    Ok(graph.scaled(a))
}

/// `T_a(D) = aD + (a - 1)I`.
pub fn transform(d: &Divisor, a: &Rational) -> Result<Divisor> {
    check_scale(a)?;
    let shift = a - Rational::one();
    Ok(Divisor::new(
        d.coeffs().iter().map(|c| a * c + &shift).collect(),
    ))
}

/// `T_a^{-1}(D) = (D - (a - 1)I) / a`.
pub fn inverse_transform(d: &Divisor, a: &Rational) -> Result<Divisor> {
    check_scale(a)?;
    let shift = a - Rational::one();
    Ok(Divisor::new(
        d.coeffs().iter().map(|c| (c - &shift) / a).collect(),
    ))
}

/// Smallest positive integer `a` with `aG` a Z-graph and `T_a(D)` a
/// Z-divisor: the lcm of every weight and coordinate denominator. This
/// also clears `K - D`, since the entries of `K` have denominators dividing
/// the weight lcm.
pub fn minimal_integer_scale(graph: &WeightedGraph, d: &Divisor) -> ScaleFactor {
    let edges = graph.edges();
    let weights = edges.iter().map(|(_, _, w)| w);
    ScaleFactor(rational::lcm_denominators(weights.chain(d.coeffs())))
}

/// The integer problem `(aG, T_a(D))` for a given scale.
fn integer_instance(
    graph: &WeightedGraph,
    d: &Divisor,
    a: &ScaleFactor,
) -> Result<(Multigraph, IntDivisor)> {
    graph.check_divisor(d)?;
    let ar = a.as_rational();
    let scaled = graph.scaled(&ar);
    let td = transform(d, &ar)?;
    if !scaled.is_integral() || !td.is_integral() {
        return Err(Error::NotAnIntegralScale(a.to_string()));
    }
    Ok((Multigraph::from_graph(&scaled)?, IntDivisor::from_divisor(&td)?))
}

/// `h0(D)` on `G`, exact.
pub fn h0(graph: &WeightedGraph, d: &Divisor) -> Result<Rational> {
    let a = minimal_integer_scale(graph, d);
    h0_with_scale(graph, d, &a)
}

/// `h0_{aG}(T_a(D)) / a` for a caller-chosen `a`, which must clear all
/// denominators. Any valid `a` gives the same value.
pub fn h0_with_scale(graph: &WeightedGraph, d: &Divisor, a: &ScaleFactor) -> Result<Rational> {
    let (m, td) = integer_instance(graph, d, a)?;
    let h = bn::h0_int(&m, &td)?;
    Ok(Rational::new(BigInt::from(h), a.value().clone()))
}

/// Both sides of `h0(D) - h0(K - D) = deg(D) + 1 - g`, with every
/// intermediate value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RRReport {
    pub h0_d: Rational,
    pub h0_k_minus_d: Rational,
    pub deg_d: Rational,
    pub genus: Rational,
    pub lhs: Rational,
    pub rhs: Rational,
    pub scale_used: ScaleFactor,
}

impl RRReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Computes both `h0` values on one scaled graph. `K_{aG} - T_a(D)` equals
/// `T_a(K - D)`, so a single `a` serves both.
pub fn rr_report(graph: &WeightedGraph, d: &Divisor) -> Result<RRReport> {
    let a = minimal_integer_scale(graph, d);
    rr_report_with_scale(graph, d, &a)
}

pub fn rr_report_with_scale(
    graph: &WeightedGraph,
    d: &Divisor,
    a: &ScaleFactor,
) -> Result<RRReport> {
    graph.check_divisor(d)?;
    let k_minus_d = &graph.canonical_divisor() - d;
    let (m, td) = integer_instance(graph, d, a)?;
    let tk = IntDivisor::from_divisor(&transform(&k_minus_d, &a.as_rational())?)?;
    let denom = a.value().clone();
    let h0_d = Rational::new(BigInt::from(bn::h0_int(&m, &td)?), denom.clone());
    let h0_k_minus_d = Rational::new(BigInt::from(bn::h0_int(&m, &tk)?), denom);
    let deg_d = d.degree();
    let genus = graph.genus();
    let lhs = &h0_d - &h0_k_minus_d;
    let rhs = &deg_d + Rational::one() - &genus;
    Ok(RRReport {
        h0_d,
        h0_k_minus_d,
        deg_d,
        genus,
        lhs,
        rhs,
        scale_used: a.clone(),
    })
}

pub(crate) fn linear_system_witness(graph: &WeightedGraph, d: &Divisor) -> Result<Option<Divisor>> {
    let a = minimal_integer_scale(graph, d);
    let (m, td) = integer_instance(graph, d, &a)?;
    let q = graph.n() - 1;
    if td.degree() < 0 {
        return Ok(None);
    }
    let reduced = bn::q_reduce(&m, &td, q)?.divisor;
    if reduced.0[q] < 0 {
        return Ok(None);
    }
    Ok(Some(inverse_transform(&reduced.to_divisor(), &a.as_rational())?))
}
