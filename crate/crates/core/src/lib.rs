//! Exact computation of multiplier ideals, jumping numbers and cluster
//! points of toric plurisubharmonic singularities in dimension two.
//!
//! A toric psh germ is described by its Newton convex body
//! `P ⊆ R²≥0` with `P + R²≥0 ⊆ P`. For such a body:
//!
//! * `z^A ∈ J(cφ)` iff `A + (1,1)` lies in the interior of `c·P`
//!   ([`ideal::multiplier_ideal`]);
//! * the jumping numbers are the closure of the gauge values of positive
//!   lattice points ([`jumping::enumerate_jumping`]);
//! * cluster points are `k/x0` and `k/y0` over the asymptotes not met by the
//!   body ([`jumping::cluster_points`]).
//!
//! Bodies are stored as exact boundary piece lists of segments and hyperbola
//! arcs ([`body::NewtonBody`]), closed under scaling and Minkowski sums, with
//! all breakpoints in quadratic fields ([`number::ExactReal`]).

pub mod body;
pub mod error;
pub mod graded;
pub mod ideal;
pub mod jumping;
pub mod number;
pub mod oracle;
pub mod radical;
pub mod spec;

pub use body::{Asymptotes, BoundaryPiece, HyperbolaArc, NewtonBody, Point};
pub use ideal::MonomialIdeal;
pub use jumping::{JumpReport, JumpSet};
pub use error::{BodyError, GradedError, JumpError, NumberError, OracleError};
pub use number::{rat, ExactReal, LatticePoint, Rational};

pub use spec::BodySpec;
