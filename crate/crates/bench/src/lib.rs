//! Shared fixtures for the benchmarks.

use njump_core::body::minkowski_sum;
use njump_core::{rat, NewtonBody};

pub fn elsv() -> NewtonBody {
    NewtonBody::hyperbola(rat(1, 1), rat(1, 1), rat(1, 1)).unwrap()
}

pub fn staircase() -> NewtonBody {
    NewtonBody::polyhedral(&[(rat(0, 1), rat(3, 1)), (rat(1, 1), rat(1, 1)), (rat(4, 1), rat(0, 1))]).unwrap()
}

/// Arcs and segments alternating.
pub fn mixed_boundary() -> NewtonBody {
    minkowski_sum(&NewtonBody::hyperbola(rat(0, 1), rat(0, 1), rat(2, 1)).unwrap(), &staircase()).unwrap()
}
