//! Exact divisor theory on graphs with positive rational edge weights.
//!
//! A divisor assigns a rational number of chips to every vertex. This crate
//! computes `h0(D)` (the weighted analogue of `r(D) + 1`), Baker-Norine rank
//! on integer graphs, genus and canonical divisor, linear equivalence, and
//! the Jacobian of an integer graph, all without rounding. It also checks
//! the weighted Riemann-Roch identity `h0(D) - h0(K - D) = deg(D) + 1 - g`.
//!
//! Rational instances are solved by scaling: `T_a(D) = aD + (a - 1)I` maps
//! the problem on `G` to one on `aG`, and for a suitable integer `a` the
//! latter is a classical chip-firing problem on a multigraph.

pub mod bn;
pub mod error;
pub mod graph;
pub mod jacobian;
pub mod linear;
pub mod oracle;
pub mod random;
pub mod rational;
pub mod scaling;

pub use bn::{dhar_burn, h0_int, linsys_nonempty_int, q_reduce, rank_bn, IntDivisor, Multigraph};
pub use error::{Error, Result};
pub use graph::{Divisor, EdgeMatrix, WeightedGraph};
pub use jacobian::{jacobian, spanning_tree_count, AbelianGroupDescription};
pub use linear::{
    ceil_effective, decompose_principal, linearly_equivalent, linsys_nonempty,
    EquivalenceCertificate, ReducedMatrix,
};
pub use rational::Rational;
pub use scaling::{
    h0, h0_with_scale, inverse_transform, minimal_integer_scale, rr_report, scale_graph,
    transform, RRReport, ScaleFactor,
};
