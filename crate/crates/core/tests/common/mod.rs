#![allow(dead_code)]

use njump_core::body::minkowski_sum;
use njump_core::{rat, BoundaryPiece, NewtonBody, Rational};
use proptest::prelude::*;

pub fn q() -> impl Strategy<Value = Rational> {
    (0i64..=12, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

pub fn pos_q() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

pub fn polyhedral() -> impl Strategy<Value = NewtonBody> {
    prop::collection::vec((q(), q()), 1..5).prop_map(|v| NewtonBody::polyhedral(&v).unwrap())
}

/// Hyperbola bodies; `s` is a rational square or `2`.
pub fn hyperbola() -> impl Strategy<Value = NewtonBody> {
    (q(), q(), prop_oneof![pos_q().prop_map(|r| &r * &r), Just(rat(2, 1))])
        .prop_map(|(a, b, s)| NewtonBody::hyperbola(a, b, s).unwrap())
}

pub fn simple_body() -> impl Strategy<Value = NewtonBody> {
    prop_oneof![polyhedral(), hyperbola()]
}

/// Simple bodies and sums of two simple bodies whose breakpoints stay quadratic.
pub fn body() -> impl Strategy<Value = NewtonBody> {
    prop_oneof![
        2 => simple_body(),
        1 => (simple_body(), simple_body()).prop_filter_map("sum leaves quadratic fields", |(a, b)| {
            minkowski_sum(&a, &b).ok()
        }),
    ]
}

/// Arcs with rational centers and rational `s`: gauge values stay quadratic.
pub fn quadratic_gauges(b: &NewtonBody) -> bool {
    b.pieces().iter().all(|p| match p {
        BoundaryPiece::Segment { .. } => true,
        BoundaryPiece::Arc(arc) => {
            arc.a.is_rational() && arc.b.is_rational() && arc.s().map(|s| s.is_rational()).unwrap_or(false)
        }
    })
}

/// Bodies with a finite, quadratic gauge at every positive point.
pub fn gauged_body() -> impl Strategy<Value = NewtonBody> {
    body().prop_filter("gauge leaves quadratic fields or is unbounded", |b| {
        let quadrant = b.x0().is_zero() && b.y0().is_zero() && b.pieces().is_empty();
        !quadrant && quadratic_gauges(b)
    })
}
