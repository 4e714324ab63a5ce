//! Mixed jumping numbers: jumps of `c ↦ J(cφ + ψ)`.
//!
//! The body of `cφ + ψ` is `Σ(c) = c·P(φ) ⊕ P(ψ)`. Scaling preserves slopes,
//! so the slope merge of the two boundaries is the same for every `c` and each
//! piece of `Σ(c)` moves affinely in `c`. A lattice point `p` lies on `∂Σ(c)`
//! only at roots of per-piece equations of degree ≤ 2; membership of `p` in
//! `Σ(c)` is monotone in `c`, so the jump is the root where membership flips,
//! located by exact tests at rationals between consecutive roots.

use std::cmp::Ordering;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::{assemble_values, check_args, dedup_residuals, side_residual, JumpReport, JumpValue, ValueKind};
use crate::body::{merge_plan, minkowski_sum, Contribution, MergedPiece, NewtonBody, Point};
use crate::error::{BodyError, JumpError, NumberError};
use crate::number::{ExactReal, LatticePoint, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedValue {
    pub value: ExactReal,
    /// `false` when found by bisection to width `2⁻⁶⁴`.
    pub exact: bool,
}

/// `k·c + m`
#[derive(Clone, Debug)]
struct Aff {
    k: ExactReal,
    m: ExactReal,
}

#[derive(Clone, Debug)]
struct AffPoint {
    x: Aff,
    y: Aff,
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
enum AffPiece {
    Segment { s: AffPoint, e: AffPoint },
    Arc { a: Aff, b: Aff, r: Aff },
}

/// `c·P(φ) ⊕ P(ψ)` as a function of `c`.
struct Family<'a> {
    phi: &'a NewtonBody,
    psi: &'a NewtonBody,
    pieces: Vec<AffPiece>,
    corners: Vec<AffPoint>,
    x0: Aff,
    y0: Aff,
}

enum Outcome {
    Value(MixedValue),
    /// `p ∉ Σ(c)` for every `c > 0`.
    Never,
    /// `p ∈ Σ(c)` for every `c > 0`.
    Always,
}

fn aff_point(phi_side: &Point, psi_side: &Point) -> AffPoint {
    AffPoint {
        x: Aff { k: phi_side.x.clone(), m: psi_side.x.clone() },
        y: Aff { k: phi_side.y.clone(), m: psi_side.y.clone() },
    }
}

fn ends(c: &Contribution<'_>) -> (Point, Point) {
    match c {
        Contribution::Vertex(v) => (v.clone(), v.clone()),
        Contribution::Segment(s, e) => ((*s).clone(), (*e).clone()),
        Contribution::Arc(_) => unreachable!("arcs never sit at a single slope"),
    }
}

fn center_root(c: &Contribution<'_>) -> (Point, ExactReal) {
    match c {
        Contribution::Vertex(v) => (v.clone(), ExactReal::zero()),
        Contribution::Arc(arc) => (Point::new(arc.a.clone(), arc.b.clone()), arc.root.clone()),
        Contribution::Segment(..) => unreachable!("segments never span an interval"),
    }
}

fn arc_point(center: &Point, root: &ExactReal, lambda: &ExactReal) -> Result<Point, NumberError> {
    Ok(Point::new(
        center.x.add(&root.div(lambda)?)?,
        center.y.add(&root.mul(lambda)?)?,
    ))
}

impl<'a> Family<'a> {
    fn new(phi: &'a NewtonBody, psi: &'a NewtonBody) -> Result<Self, BodyError> {
        let mut pieces = Vec::new();
        let mut corners = Vec::new();
        for m in merge_plan(phi, psi)? {
            match m {
                MergedPiece::Segment { lhs, rhs } => {
                    let (s1, e1) = ends(&lhs);
                    let (s2, e2) = ends(&rhs);
                    let s = aff_point(&s1, &s2);
                    let e = aff_point(&e1, &e2);
                    corners.push(s.clone());
                    corners.push(e.clone());
                    pieces.push(AffPiece::Segment { s, e });
                }
                MergedPiece::Arc { hi, lo, lhs, rhs } => {
                    let (c1, r1) = center_root(&lhs);
                    let (c2, r2) = center_root(&rhs);
                    for lam in [hi, lo].into_iter().flatten() {
                        corners.push(aff_point(&arc_point(&c1, &r1, &lam)?, &arc_point(&c2, &r2, &lam)?));
                    }
                    pieces.push(AffPiece::Arc {
                        a: Aff { k: c1.x, m: c2.x },
                        b: Aff { k: c1.y, m: c2.y },
                        r: Aff { k: r1, m: r2 },
                    });
                }
            }
        }
        Ok(Family {
            phi,
            psi,
            pieces,
            corners,
            x0: Aff { k: phi.x0().clone(), m: psi.x0().clone() },
            y0: Aff { k: phi.y0().clone(), m: psi.y0().clone() },
        })
    }

    fn member(&self, p: &Point, c: &Rational) -> Result<bool, BodyError> {
        let body = minkowski_sum(&self.phi.scale(c)?, self.psi)?;
        Ok(body.contains(p, false))
    }

    /// Every `c` at which `p` can sit on some piece, corner or asymptote.
    fn roots(&self, px: &ExactReal, py: &ExactReal) -> Result<Vec<ExactReal>, NumberError> {
        let mut out = Vec::new();
        let mut linear = |a: &Aff, target: &ExactReal| -> Result<(), NumberError> {
            if !a.k.is_zero() {
                out.push(target.sub(&a.m)?.div(&a.k)?);
            }
            Ok(())
        };
        linear(&self.x0, px)?;
        linear(&self.y0, py)?;
        for corner in &self.corners {
            linear(&corner.x, px)?;
            linear(&corner.y, py)?;
        }
        for piece in &self.pieces {
            let (a2, b1, c0) = match piece {
                AffPiece::Segment { s, e } => {
                    // cross(c·D1 + D2, W0 − c·S1) = 0, W0 = p − S2
                    let d1 = (e.x.k.sub(&s.x.k)?, e.y.k.sub(&s.y.k)?);
                    let d2 = (e.x.m.sub(&s.x.m)?, e.y.m.sub(&s.y.m)?);
                    let s1 = (s.x.k.clone(), s.y.k.clone());
                    let w0 = (px.sub(&s.x.m)?, py.sub(&s.y.m)?);
                    let cross = |u: &(ExactReal, ExactReal), v: &(ExactReal, ExactReal)| -> Result<ExactReal, NumberError> {
                        u.0.mul(&v.1)?.sub(&u.1.mul(&v.0)?)
                    };
                    (
                        cross(&d1, &s1)?.neg(),
                        cross(&d1, &w0)?.sub(&cross(&d2, &s1)?)?,
                        cross(&d2, &w0)?,
                    )
                }
                AffPiece::Arc { a, b, r } => {
                    // (u − a1·c)(v − b1·c) = (r1·c + r2)², u = P − a2, v = Q − b2
                    let u = px.sub(&a.m)?;
                    let v = py.sub(&b.m)?;
                    (
                        a.k.mul(&b.k)?.sub(&r.k.mul(&r.k)?)?,
                        u.mul(&b.k)?
                            .add(&v.mul(&a.k)?)?
                            .add(&r.k.mul(&r.m)?.scale(&Rational::from_integer(2.into())))?
                            .neg(),
                        u.mul(&v)?.sub(&r.m.mul(&r.m)?)?,
                    )
                }
            };
            out.extend(solve_quadratic(&a2, &b1, &c0)?);
        }
        out.retain(|c| c.is_positive());
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn solve_exact(&self, p: LatticePoint) -> Result<Outcome, JumpError> {
        let (px, py) = p.to_rational();
        let pt = Point::rational(px.clone(), py.clone());
        let roots = self.roots(&px.into(), &py.into())?;
        // membership is constant between consecutive roots
        let mut probes = Vec::with_capacity(roots.len() + 1);
        let mut below = ExactReal::zero();
        for r in &roots {
            probes.push(rational_between(&below, r));
            below = r.clone();
        }
        probes.push(Rational::from_integer(below.floor() + 1));
        if !self.member(&pt, &probes[0])? {
            return Ok(Outcome::Never);
        }
        if self.member(&pt, &probes[probes.len() - 1])? {
            return Ok(Outcome::Always);
        }
        // first probe outside: binary search on the monotone predicate
        let (mut lo, mut hi) = (0usize, probes.len() - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.member(&pt, &probes[mid])? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Outcome::Value(MixedValue {
            value: roots[lo].clone(),
            exact: true,
        }))
    }

    fn solve_bisect(&self, p: LatticePoint) -> Result<Outcome, JumpError> {
        let (px, py) = p.to_rational();
        let pt = Point::rational(px, py);
        let two = Rational::from_integer(2.into());
        let limit = Rational::from_integer(num_bigint::BigInt::one() << 64u32);
        let mut lo = Rational::one();
        let mut hi = Rational::one();
        if self.member(&pt, &lo)? {
            while self.member(&pt, &hi)? {
                hi = &hi * &two;
                if hi > limit {
                    return Ok(Outcome::Always);
                }
            }
            lo = &hi / &two;
        } else {
            while !self.member(&pt, &lo)? {
                lo = &lo / &two;
                if lo < limit.recip() {
                    return Ok(Outcome::Never);
                }
            }
            hi = &lo * &two;
        }
        let width = limit.recip();
        while &hi - &lo > width {
            let mid = (&lo + &hi) / &two;
            if self.member(&pt, &mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Outcome::Value(MixedValue {
            value: ((lo + hi) / two).into(),
            exact: false,
        }))
    }

    fn solve(&self, p: LatticePoint) -> Result<Outcome, JumpError> {
        match self.solve_exact(p) {
            Err(JumpError::Number(_)) | Err(JumpError::Body(BodyError::Number(_))) => self.solve_bisect(p),
            other => other,
        }
    }
}

/// Real roots of `a·c² + b·c + c0`; a vanishing polynomial has none.
fn solve_quadratic(a: &ExactReal, b: &ExactReal, c0: &ExactReal) -> Result<Vec<ExactReal>, NumberError> {
    if a.is_zero() {
        if b.is_zero() {
            return Ok(vec![]);
        }
        return Ok(vec![c0.neg().div(b)?]);
    }
    let disc = b.mul(b)?.sub(&a.mul(c0)?.scale(&Rational::from_integer(4.into())))?;
    match disc.signum() {
        Ordering::Less => Ok(vec![]),
        _ => {
            let sq = disc.sqrt()?;
            let two_a = a.scale(&Rational::from_integer(2.into()));
            Ok(vec![
                b.neg().sub(&sq)?.div(&two_a)?,
                b.neg().add(&sq)?.div(&two_a)?,
            ])
        }
    }
}

/// A rational strictly between `lo < hi`.
fn rational_between(lo: &ExactReal, hi: &ExactReal) -> Rational {
    if let (Some(a), Some(b)) = (lo.as_rational(), hi.as_rational()) {
        return (a + b) / Rational::from_integer(2.into());
    }
    let mut bits = 32;
    loop {
        let mid = (lo.approx(bits) + hi.approx(bits)) / Rational::from_integer(2.into());
        let m = ExactReal::from(mid.clone());
        if lo < &m && &m < hi {
            return mid;
        }
        bits *= 2;
    }
}

/// The `c > 0` with `p ∈ ∂(c·P(φ) ⊕ P(ψ))`.
pub fn mixed_gauge(phi: &NewtonBody, psi: &NewtonBody, p: LatticePoint) -> Result<MixedValue, JumpError> {
    if !p.is_positive() {
        return Err(BodyError::NonPositivePoint.into());
    }
    let family = Family::new(phi, psi)?;
    match family.solve(p)? {
        Outcome::Value(v) => Ok(v),
        Outcome::Never | Outcome::Always => Err(JumpError::NoSolution),
    }
}

/// `c > 0` with `c·x0(φ) + x0(ψ) ∈ Z>0` on an unattained side of the sum, and likewise for `y0`.
pub fn mixed_cluster_points(phi: &NewtonBody, psi: &NewtonBody, bound: &Rational) -> Vec<ExactReal> {
    let bound = ExactReal::from(bound.clone());
    let mut out = Vec::new();
    let sides = [
        (phi.x0(), psi.x0(), phi.attained_x() && psi.attained_x()),
        (phi.y0(), psi.y0(), phi.attained_y() && psi.attained_y()),
    ];
    for (a, b, attained) in sides {
        if attained || !a.is_positive() {
            continue;
        }
        let mut k = 1u64;
        while let Ok(c) = super::int(k).sub(b).and_then(|d| d.div(a)) {
            if c > bound {
                break;
            }
            if c.is_positive() {
                out.push(c);
            }
            k += 1;
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Mixed jumping numbers from the window `[1, W]²` up to `bound`.
pub fn enumerate_mixed(
    phi: &NewtonBody,
    psi: &NewtonBody,
    bound: &Rational,
    window: u64,
) -> Result<JumpReport, JumpError> {
    check_args(bound, window)?;
    let family = Family::new(phi, psi)?;
    let grid: Vec<Vec<Option<MixedValue>>> = (1..=window)
        .into_par_iter()
        .map(|p| {
            (1..=window)
                .map(|q| match family.solve(LatticePoint::new(p, q))? {
                    Outcome::Value(v) => Ok(Some(v)),
                    _ => Ok(None),
                })
                .collect::<Result<Vec<_>, JumpError>>()
        })
        .collect::<Result<_, _>>()?;
    let bound_e = ExactReal::from(bound.clone());
    let mut raw = Vec::new();
    for (i, col) in grid.iter().enumerate() {
        for (j, v) in col.iter().enumerate() {
            if let Some(v) = v {
                if v.value <= bound_e {
                    raw.push(JumpValue {
                        value: v.value.clone(),
                        witness: Some(LatticePoint::new(i as u64 + 1, j as u64 + 1)),
                        kind: ValueKind::Listed,
                        exact: v.exact,
                    });
                }
            }
        }
    }
    let clusters = mixed_cluster_points(phi, psi, bound);
    let values = assemble_values(raw, &clusters);

    let w = window as usize;
    let lim = |n: u64, a: &ExactReal, b: &ExactReal| -> Result<Option<ExactReal>, NumberError> {
        if !a.is_positive() {
            return Ok(None);
        }
        Ok(Some(super::int(n).sub(b)?.div(a)?))
    };
    let mut residuals = Vec::new();
    // with a zero asymptote on φ, lines at or left of ψ's asymptote never enter the sum
    let never = |n: u64, a: &ExactReal, b: &ExactReal| a.is_zero() && &super::int(n) <= b;
    for n in 1..=window {
        let col_last = grid[n as usize - 1][w - 1].as_ref().map(|v| &v.value);
        let cluster_side = !(phi.attained_x() && psi.attained_x()) && phi.x0().is_positive();
        if !never(n, phi.x0(), psi.x0()) {
            residuals.extend(side_residual(col_last, lim(n, phi.x0(), psi.x0())?, cluster_side, &bound_e));
        }
        let row_last = grid[w - 1][n as usize - 1].as_ref().map(|v| &v.value);
        let cluster_side = !(phi.attained_y() && psi.attained_y()) && phi.y0().is_positive();
        if !never(n, phi.y0(), psi.y0()) {
            residuals.extend(side_residual(row_last, lim(n, phi.y0(), psi.y0())?, cluster_side, &bound_e));
        }
    }
    let complete_below = match family.solve(LatticePoint::new(window + 1, window + 1))? {
        Outcome::Value(v) => v.value.min(bound_e),
        Outcome::Always => bound_e,
        Outcome::Never => ExactReal::zero(),
    };
    Ok(JumpReport {
        bound: bound.clone(),
        window,
        values,
        clusters,
        residuals: dedup_residuals(residuals),
        complete_below,
    })
}
