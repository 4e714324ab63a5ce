//! Newton convex bodies in the plane.
//!
//! A body `P ⊆ R²≥0` with `P + R²≥0 ⊆ P` is the epigraph of a convex,
//! nonincreasing boundary function `y = f(x)` on `[x0, ∞)` (or `(x0, ∞)`),
//! with `f(x) → y0`. The boundary is stored as an ordered list of segments
//! and hyperbola arcs `y = b + s/(x − a)`. A vertical ray at `x = x0` is
//! implicit when `attained_x` holds, and a horizontal ray at `y = y0` when
//! `attained_y` holds.
//!
//! Arcs are parametrized internally by `λ = √(−slope)`: the point of slope
//! `−λ²` on the arc with center `(a, b)` and `r = √s` is `(a + r/λ, b + rλ)`.
//! Scaling leaves every `λ` unchanged, and a Minkowski sum is a merge of the
//! two boundaries by `λ`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::BodyError;
use crate::number::{ExactReal, LatticePoint, Rational};
use crate::radical::RadicalSum;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: ExactReal,
    pub y: ExactReal,
}

impl Point {
    pub fn new(x: ExactReal, y: ExactReal) -> Self {
        Point { x, y }
    }

    pub fn rational(x: Rational, y: Rational) -> Self {
        Point::new(x.into(), y.into())
    }

    pub fn lattice(p: LatticePoint) -> Self {
        let (x, y) = p.to_rational();
        Point::rational(x, y)
    }

    pub fn add(&self, other: &Point) -> Result<Point, BodyError> {
        Ok(Point::new(self.x.add(&other.x)?, self.y.add(&other.y)?))
    }

    pub fn sub(&self, other: &Point) -> Result<Point, BodyError> {
        Ok(Point::new(self.x.sub(&other.x)?, self.y.sub(&other.y)?))
    }

    pub fn scale(&self, c: &Rational) -> Point {
        Point::new(self.x.scale(c), self.y.scale(c))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Graph of `y = b + root²/(x − a)` for `x` between `xlo` and `xhi`.
/// `xlo == a` means the arc climbs to the vertical asymptote; `xhi == None`
/// means it runs out to the horizontal asymptote.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolaArc {
    pub a: ExactReal,
    pub b: ExactReal,
    /// `√s`
    pub root: ExactReal,
    pub xlo: ExactReal,
    pub xhi: Option<ExactReal>,
}

impl HyperbolaArc {
    pub fn s(&self) -> Result<ExactReal, BodyError> {
        Ok(self.root.mul(&self.root)?)
    }

    pub fn y_at(&self, x: &ExactReal) -> Result<ExactReal, BodyError> {
        Ok(self.b.add(&self.s()?.div(&x.sub(&self.a)?)?)?)
    }

    /// `λ` at `xlo`; `None` stands for `+∞`.
    pub fn lambda_hi(&self) -> Result<Option<ExactReal>, BodyError> {
        if self.xlo == self.a {
            return Ok(None);
        }
        Ok(Some(self.root.div(&self.xlo.sub(&self.a)?)?))
    }

    /// `λ` at `xhi`; `None` stands for `0`.
    pub fn lambda_lo(&self) -> Result<Option<ExactReal>, BodyError> {
        match &self.xhi {
            None => Ok(None),
            Some(xhi) => Ok(Some(self.root.div(&xhi.sub(&self.a)?)?)),
        }
    }

    pub fn point_at_lambda(&self, lambda: &ExactReal) -> Result<Point, BodyError> {
        Ok(Point::new(
            self.a.add(&self.root.div(lambda)?)?,
            self.b.add(&self.root.mul(lambda)?)?,
        ))
    }

    pub fn start(&self) -> Result<Option<Point>, BodyError> {
        if self.xlo == self.a {
            return Ok(None);
        }
        Ok(Some(Point::new(self.xlo.clone(), self.y_at(&self.xlo)?)))
    }

    pub fn end(&self) -> Result<Option<Point>, BodyError> {
        match &self.xhi {
            None => Ok(None),
            Some(x) => Ok(Some(Point::new(x.clone(), self.y_at(x)?))),
        }
    }

    fn scale(&self, c: &Rational) -> HyperbolaArc {
        HyperbolaArc {
            a: self.a.scale(c),
            b: self.b.scale(c),
            root: self.root.scale(c),
            xlo: self.xlo.scale(c),
            xhi: self.xhi.as_ref().map(|x| x.scale(c)),
        }
    }

    fn covers_x(&self, x: &ExactReal) -> bool {
        let above_lo = if self.xlo == self.a {
            x > &self.a
        } else {
            x >= &self.xlo
        };
        above_lo && self.xhi.as_ref().is_none_or(|h| x <= h)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryPiece {
    Segment { start: Point, end: Point },
    Arc(HyperbolaArc),
}

impl BoundaryPiece {
    fn end_point(&self) -> Result<Option<Point>, BodyError> {
        match self {
            BoundaryPiece::Segment { end, .. } => Ok(Some(end.clone())),
            BoundaryPiece::Arc(arc) => arc.end(),
        }
    }

    fn start_point(&self) -> Result<Option<Point>, BodyError> {
        match self {
            BoundaryPiece::Segment { start, .. } => Ok(Some(start.clone())),
            BoundaryPiece::Arc(arc) => arc.start(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Asymptotes {
    pub x0: ExactReal,
    pub y0: ExactReal,
    pub attained_x: bool,
    pub attained_y: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBody")]
pub struct NewtonBody {
    pieces: Vec<BoundaryPiece>,
    x0: ExactReal,
    y0: ExactReal,
    attained_x: bool,
    attained_y: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBody {
    pieces: Vec<BoundaryPiece>,
    x0: ExactReal,
    y0: ExactReal,
    attained_x: bool,
    attained_y: bool,
}

impl TryFrom<RawBody> for NewtonBody {
    type Error = BodyError;

    fn try_from(raw: RawBody) -> Result<Self, BodyError> {
        NewtonBody::from_parts(raw.pieces, raw.x0, raw.y0, raw.attained_x, raw.attained_y)
    }
}

fn rs(x: &ExactReal) -> RadicalSum {
    x.to_radical_sum()
}

/// `(a.x − o.x)(b.y − o.y) − (a.y − o.y)(b.x − o.x)` for rational points.
fn cross_q(o: &(Rational, Rational), a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Lower-left staircase hull: the vertices of the boundary of `conv(points) + R²≥0`,
/// ordered by increasing x (and strictly decreasing y).
pub fn staircase_hull(points: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let mut pts: Vec<(Rational, Rational)> = points.to_vec();
    pts.sort();
    pts.dedup();
    let mut pareto: Vec<(Rational, Rational)> = Vec::new();
    for p in pts {
        if pareto.last().is_none_or(|last| p.1 < last.1) {
            pareto.push(p);
        }
    }
    let mut hull: Vec<(Rational, Rational)> = Vec::new();
    for p in pareto {
        while hull.len() >= 2 && cross_q(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= Rational::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

impl NewtonBody {
    /// Body `conv(vertices) + R²≥0`.
    pub fn polyhedral(vertices: &[(Rational, Rational)]) -> Result<Self, BodyError> {
        if vertices.is_empty() {
            return Err(BodyError::EmptyVertices);
        }
        if vertices.iter().any(|(x, y)| x.is_negative() || y.is_negative()) {
            return Err(BodyError::Negative("vertex coordinate"));
        }
        let hull = staircase_hull(vertices);
        let pieces = hull
            .windows(2)
            .map(|w| BoundaryPiece::Segment {
                start: Point::rational(w[0].0.clone(), w[0].1.clone()),
                end: Point::rational(w[1].0.clone(), w[1].1.clone()),
            })
            .collect();
        let first = &hull[0];
        let last = &hull[hull.len() - 1];
        Ok(NewtonBody {
            pieces,
            x0: first.0.clone().into(),
            y0: last.1.clone().into(),
            attained_x: true,
            attained_y: true,
        })
    }

    /// `{(x, y) : x > a, (x − a)(y − b) ≥ s}`.
    pub fn hyperbola(a: Rational, b: Rational, s: Rational) -> Result<Self, BodyError> {
        if !s.is_positive() {
            return Err(BodyError::NonPositive("s"));
        }
        if a.is_negative() || b.is_negative() {
            return Err(BodyError::Negative("hyperbola center"));
        }
        let root = ExactReal::sqrt_rational(&s)?;
        let a: ExactReal = a.into();
        let b: ExactReal = b.into();
        Ok(NewtonBody {
            pieces: vec![BoundaryPiece::Arc(HyperbolaArc {
                a: a.clone(),
                b: b.clone(),
                root,
                xlo: a.clone(),
                xhi: None,
            })],
            x0: a,
            y0: b,
            attained_x: false,
            attained_y: false,
        })
    }

    /// Newton body of `log(|z1|^m1 + |z2|^m2)`.
    pub fn diagonal(m1: Rational, m2: Rational) -> Result<Self, BodyError> {
        if !m1.is_positive() || !m2.is_positive() {
            return Err(BodyError::NonPositive("diagonal exponent"));
        }
        Self::polyhedral(&[(m1, Rational::zero()), (Rational::zero(), m2)])
    }

    /// Builds a body from explicit parts and checks every structural invariant.
    pub fn from_parts(
        pieces: Vec<BoundaryPiece>,
        x0: ExactReal,
        y0: ExactReal,
        attained_x: bool,
        attained_y: bool,
    ) -> Result<Self, BodyError> {
        let body = NewtonBody {
            pieces,
            x0,
            y0,
            attained_x,
            attained_y,
        };
        body.validate()?;
        Ok(body)
    }

    fn validate(&self) -> Result<(), BodyError> {
        let bad = |m: &str| Err(BodyError::Malformed(m.to_string()));
        if self.x0.signum() == Ordering::Less || self.y0.signum() == Ordering::Less {
            return bad("negative asymptote");
        }
        if self.pieces.is_empty() {
            if !(self.attained_x && self.attained_y) {
                return bad("a body without pieces is a translated quadrant");
            }
            return Ok(());
        }
        match (&self.pieces[0], self.attained_x) {
            (BoundaryPiece::Arc(arc), false) => {
                if arc.xlo != arc.a || arc.a != self.x0 {
                    return bad("unattained vertical asymptote needs a leading arc at x0");
                }
            }
            (_, false) => return bad("unattained vertical asymptote needs a leading arc"),
            (piece, true) => match piece.start_point()? {
                Some(p) if p.x == self.x0 => {}
                _ => return bad("first piece must start on x = x0"),
            },
        }
        let last = &self.pieces[self.pieces.len() - 1];
        match (last, self.attained_y) {
            (BoundaryPiece::Arc(arc), false) => {
                if arc.xhi.is_some() || arc.b != self.y0 {
                    return bad("unattained horizontal asymptote needs a trailing arc at y0");
                }
            }
            (_, false) => return bad("unattained horizontal asymptote needs a trailing arc"),
            (piece, true) => match piece.end_point()? {
                Some(p) if p.y == self.y0 => {}
                _ => return bad("last piece must end on y = y0"),
            },
        }
        for piece in &self.pieces {
            match piece {
                BoundaryPiece::Segment { start, end } => {
                    if start.x >= end.x || start.y <= end.y {
                        return bad("segments must strictly decrease");
                    }
                }
                BoundaryPiece::Arc(arc) => {
                    if !arc.root.is_positive() || arc.xlo < arc.a {
                        return bad("arc needs root > 0 and xlo ≥ a");
                    }
                    if let Some(h) = &arc.xhi {
                        if h <= &arc.xlo {
                            return bad("empty arc range");
                        }
                    }
                }
            }
        }
        for w in self.pieces.windows(2) {
            if w[0].end_point()? != w[1].start_point()? || w[0].end_point()?.is_none() {
                return bad("boundary must be continuous");
            }
        }
        let elems = elements(self)?;
        for w in elems.windows(2) {
            let prev_min = w[0].lambda_min();
            let next_max = w[1].lambda_max();
            let ok = match (prev_min, next_max) {
                (_, None) => false,
                (None, Some(_)) => false,
                (Some(a), Some(b)) => a >= b,
            };
            if !ok {
                return bad("boundary must be convex");
            }
        }
        Ok(())
    }

    pub fn pieces(&self) -> &[BoundaryPiece] {
        &self.pieces
    }

    pub fn asymptotes(&self) -> Asymptotes {
        Asymptotes {
            x0: self.x0.clone(),
            y0: self.y0.clone(),
            attained_x: self.attained_x,
            attained_y: self.attained_y,
        }
    }

    pub fn x0(&self) -> &ExactReal {
        &self.x0
    }

    pub fn y0(&self) -> &ExactReal {
        &self.y0
    }

    pub fn attained_x(&self) -> bool {
        self.attained_x
    }

    pub fn attained_y(&self) -> bool {
        self.attained_y
    }

    /// Upper-left corner of the boundary when the vertical asymptote is attained.
    pub fn top(&self) -> Result<Option<Point>, BodyError> {
        if !self.attained_x {
            return Ok(None);
        }
        match self.pieces.first() {
            None => Ok(Some(Point::new(self.x0.clone(), self.y0.clone()))),
            Some(p) => p.start_point(),
        }
    }

    /// Lower-right corner where the horizontal ray starts, when attained.
    pub fn tail(&self) -> Result<Option<Point>, BodyError> {
        if !self.attained_y {
            return Ok(None);
        }
        match self.pieces.last() {
            None => Ok(Some(Point::new(self.x0.clone(), self.y0.clone()))),
            Some(p) => p.end_point(),
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| matches!(p, BoundaryPiece::Segment { .. }))
    }

    /// Vertices of a polyhedral body, top to bottom.
    pub fn vertices(&self) -> Result<Vec<Point>, BodyError> {
        let mut out: Vec<Point> = Vec::new();
        if let Some(t) = self.top()? {
            out.push(t);
        }
        for p in &self.pieces {
            if let Some(e) = p.end_point()? {
                out.push(e);
            }
        }
        Ok(out)
    }

    /// Boundary function `f(x)`; `None` where the vertical line misses the body.
    pub fn boundary_y(&self, x: &ExactReal) -> Result<Option<ExactReal>, BodyError> {
        match x.cmp(&self.x0) {
            Ordering::Less => return Ok(None),
            Ordering::Equal => {
                return Ok(self.top()?.map(|t| t.y));
            }
            Ordering::Greater => {}
        }
        for piece in &self.pieces {
            match piece {
                BoundaryPiece::Segment { start, end } => {
                    if x >= &start.x && x <= &end.x {
                        let slope = end.y.sub(&start.y)?.div(&end.x.sub(&start.x)?)?;
                        return Ok(Some(start.y.add(&slope.mul(&x.sub(&start.x)?)?)?));
                    }
                }
                BoundaryPiece::Arc(arc) => {
                    if arc.covers_x(x) {
                        return Ok(Some(arc.y_at(x)?));
                    }
                }
            }
        }
        Ok(Some(self.y0.clone()))
    }

    /// Inverse boundary function `g(y) = inf{x : (x, y) ∈ P}`.
    pub fn boundary_x(&self, y: &ExactReal) -> Result<Option<ExactReal>, BodyError> {
        match y.cmp(&self.y0) {
            Ordering::Less => return Ok(None),
            Ordering::Equal => return Ok(self.tail()?.map(|t| t.x)),
            Ordering::Greater => {}
        }
        for piece in self.pieces.iter().rev() {
            match piece {
                BoundaryPiece::Segment { start, end } => {
                    if y >= &end.y && y <= &start.y {
                        let inv_slope = end.x.sub(&start.x)?.div(&end.y.sub(&start.y)?)?;
                        return Ok(Some(start.x.add(&inv_slope.mul(&y.sub(&start.y)?)?)?));
                    }
                }
                BoundaryPiece::Arc(arc) => {
                    let below_top = match arc.start()? {
                        None => true,
                        Some(s) => y <= &s.y,
                    };
                    let above_bottom = match arc.end()? {
                        None => y > &arc.b,
                        Some(e) => y >= &e.y,
                    };
                    if below_top && above_bottom {
                        let dy = y.sub(&arc.b)?;
                        return Ok(Some(arc.a.add(&arc.s()?.div(&dy)?)?));
                    }
                }
            }
        }
        Ok(Some(self.x0.clone()))
    }

    /// Exact membership. `strict` tests the interior.
    pub fn contains(&self, p: &Point, strict: bool) -> bool {
        let want = |s: Ordering| {
            if strict {
                s == Ordering::Greater
            } else {
                s != Ordering::Less
            }
        };
        match p.x.cmp(&self.x0) {
            Ordering::Less => return false,
            Ordering::Equal => {
                if strict || !self.attained_x {
                    return false;
                }
                return match self.top() {
                    Ok(Some(t)) => p.y >= t.y,
                    _ => false,
                };
            }
            Ordering::Greater => {}
        }
        for piece in &self.pieces {
            match piece {
                BoundaryPiece::Segment { start, end } => {
                    if p.x >= start.x && p.x <= end.x {
                        // p on the upper-right side of start→end
                        let dx = rs(&end.x).sub(&rs(&start.x));
                        let dy = rs(&end.y).sub(&rs(&start.y));
                        let px = rs(&p.x).sub(&rs(&start.x));
                        let py = rs(&p.y).sub(&rs(&start.y));
                        return want(dx.mul(&py).sub(&dy.mul(&px)).signum());
                    }
                }
                BoundaryPiece::Arc(arc) => {
                    if arc.covers_x(&p.x) {
                        if p.y <= arc.b {
                            return false;
                        }
                        let lhs = rs(&p.x)
                            .sub(&rs(&arc.a))
                            .mul(&rs(&p.y).sub(&rs(&arc.b)));
                        let s = rs(&arc.root).square();
                        return want(lhs.sub(&s).signum());
                    }
                }
            }
        }
        want(p.y.cmp(&self.y0))
    }

    pub fn contains_lattice(&self, p: LatticePoint, strict: bool) -> bool {
        self.contains(&Point::lattice(p), strict)
    }

    pub fn scale(&self, c: &Rational) -> Result<NewtonBody, BodyError> {
        if !c.is_positive() {
            return Err(BodyError::NonPositive("scale factor"));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| match p {
                BoundaryPiece::Segment { start, end } => BoundaryPiece::Segment {
                    start: start.scale(c),
                    end: end.scale(c),
                },
                BoundaryPiece::Arc(arc) => BoundaryPiece::Arc(arc.scale(c)),
            })
            .collect();
        Ok(NewtonBody {
            pieces,
            x0: self.x0.scale(c),
            y0: self.y0.scale(c),
            attained_x: self.attained_x,
            attained_y: self.attained_y,
        })
    }

    /// `sup{t > 0 : p ∈ t·P}` for a point with positive coordinates.
    pub fn gauge(&self, p: LatticePoint) -> Result<ExactReal, BodyError> {
        if !p.is_positive() {
            return Err(BodyError::NonPositivePoint);
        }
        let (px, py) = p.to_rational();
        self.gauge_at(&px, &py)
    }

    /// Gauge at a rational point with positive coordinates.
    ///
    /// Along the boundary, `g = y·P − x·Q` strictly decreases from `+∞` to
    /// `−∞`; the ray through `(P, Q)` crosses the boundary on the piece where
    /// `g` changes sign.
    pub fn gauge_at(&self, px: &Rational, py: &Rational) -> Result<ExactReal, BodyError> {
        if !px.is_positive() || !py.is_positive() {
            return Err(BodyError::NonPositivePoint);
        }
        let g = |pt: &Point| -> Ordering {
            rs(&pt.y)
                .scale(px)
                .sub(&rs(&pt.x).scale(py))
                .signum()
        };
        if let Some(top) = self.top()? {
            if g(&top) != Ordering::Greater {
                // crossing on the vertical ray x = x0
                if self.x0.is_zero() {
                    return Err(BodyError::UnboundedGauge);
                }
                return Ok(ExactReal::from(px.clone()).div(&self.x0)?);
            }
        }
        for piece in &self.pieces {
            let crosses = match piece.end_point()? {
                None => true,
                Some(end) => g(&end) != Ordering::Greater,
            };
            if !crosses {
                continue;
            }
            return match piece {
                BoundaryPiece::Segment { start, end } => {
                    // t = cross(p, D) / cross(S, D)
                    let d = end.sub(start)?;
                    let pp = Point::rational(px.clone(), py.clone());
                    let num = cross(&pp, &d)?;
                    let den = cross(start, &d)?;
                    Ok(num.div(&den)?)
                }
                BoundaryPiece::Arc(arc) => gauge_on_arc(arc, px, py),
            };
        }
        // crossing on the horizontal ray y = y0
        if self.y0.is_zero() {
            return Err(BodyError::UnboundedGauge);
        }
        Ok(ExactReal::from(py.clone()).div(&self.y0)?)
    }

    /// `sup_{λ ∈ P} ⟨λ, u⟩` for `u ≤ 0`, in floating point.
    pub fn support_value(&self, u: (f64, f64)) -> f64 {
        FloatBody::from_body(self).support_value(u)
    }
}

/// `t` with `(P/t, Q/t)` on the arc: `(uP − a)(uQ − b) = s`, `u = 1/t`, larger root.
fn gauge_on_arc(arc: &HyperbolaArc, px: &Rational, py: &Rational) -> Result<ExactReal, BodyError> {
    let p: ExactReal = px.clone().into();
    let q: ExactReal = py.clone().into();
    let pb = p.mul(&arc.b)?;
    let qa = q.mul(&arc.a)?;
    let diff = pb.sub(&qa)?;
    let four_pq_s = arc.s()?.scale(&(px * py * Rational::from_integer(4.into())));
    let disc = diff.mul(&diff)?.add(&four_pq_s)?;
    let denom = pb.add(&qa)?.add(&disc.sqrt()?)?;
    let two_pq: ExactReal = (px * py * Rational::from_integer(2.into())).into();
    Ok(two_pq.div(&denom)?)
}

fn cross(a: &Point, b: &Point) -> Result<ExactReal, BodyError> {
    Ok(a.x.mul(&b.y)?.sub(&a.y.mul(&b.x)?)?)
}

/// One boundary element keyed by `λ = √(−slope)`.
#[derive(Clone, Debug)]
pub(crate) enum Element<'a> {
    Segment {
        lambda: ExactReal,
        start: &'a Point,
        end: &'a Point,
    },
    Arc {
        /// `None` = `+∞`
        hi: Option<ExactReal>,
        /// `None` = `0`
        lo: Option<ExactReal>,
        arc: &'a HyperbolaArc,
    },
}

impl Element<'_> {
    /// Smallest `λ` reached; `None` means `0`.
    fn lambda_min(&self) -> Option<ExactReal> {
        match self {
            Element::Segment { lambda, .. } => Some(lambda.clone()),
            Element::Arc { lo, .. } => lo.clone(),
        }
    }

    /// Largest `λ` reached; `None` means `+∞`.
    fn lambda_max(&self) -> Option<ExactReal> {
        match self {
            Element::Segment { lambda, .. } => Some(lambda.clone()),
            Element::Arc { hi, .. } => hi.clone(),
        }
    }
}

pub(crate) fn elements(body: &NewtonBody) -> Result<Vec<Element<'_>>, BodyError> {
    body.pieces
        .iter()
        .map(|p| match p {
            BoundaryPiece::Segment { start, end } => {
                let slope = end.y.sub(&start.y)?.div(&end.x.sub(&start.x)?)?;
                Ok(Element::Segment {
                    lambda: slope.neg().sqrt()?,
                    start,
                    end,
                })
            }
            BoundaryPiece::Arc(arc) => Ok(Element::Arc {
                hi: arc.lambda_hi()?,
                lo: arc.lambda_lo()?,
                arc,
            }),
        })
        .collect()
}

/// What one summand contributes to a piece of a Minkowski sum.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub(crate) enum Contribution<'a> {
    Vertex(Point),
    Segment(&'a Point, &'a Point),
    Arc(&'a HyperbolaArc),
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub(crate) enum MergedPiece<'a> {
    /// Both summands at the single slope `−λ²`; at least one is a segment.
    Segment {
        lhs: Contribution<'a>,
        rhs: Contribution<'a>,
    },
    /// `λ ∈ (lo, hi)`; at least one summand is an arc there.
    Arc {
        hi: Option<ExactReal>,
        lo: Option<ExactReal>,
        lhs: Contribution<'a>,
        rhs: Contribution<'a>,
    },
}

struct Walker<'a> {
    body: &'a NewtonBody,
    elems: Vec<Element<'a>>,
}

fn ge_opt_hi(a: &Option<ExactReal>, b: &Option<ExactReal>) -> bool {
    // None = +∞
    match (a, b) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x >= y,
    }
}

fn le_opt_lo(a: &Option<ExactReal>, b: &Option<ExactReal>) -> bool {
    // None = 0
    match (a, b) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

impl<'a> Walker<'a> {
    fn new(body: &'a NewtonBody) -> Result<Self, BodyError> {
        Ok(Walker {
            body,
            elems: elements(body)?,
        })
    }

    fn top_vertex(&self) -> Result<Point, BodyError> {
        self.body
            .top()?
            .ok_or_else(|| BodyError::Malformed("unattained top without a covering arc".into()))
    }

    fn vertex_above(&self, lambda: &ExactReal) -> Result<Point, BodyError> {
        let mut vertex = None;
        for (i, e) in self.elems.iter().enumerate() {
            let reaches = match e.lambda_min() {
                None => false,
                Some(m) => &m >= lambda,
            };
            if reaches {
                vertex = Some(i);
            }
        }
        match vertex {
            None => self.top_vertex(),
            Some(i) => self.body.pieces[i]
                .end_point()?
                .ok_or_else(|| BodyError::Malformed("vertex at infinity".into())),
        }
    }

    /// State on the open interval `(lo, hi)`.
    fn on_interval(&self, lo: &Option<ExactReal>, hi: &Option<ExactReal>) -> Result<Contribution<'a>, BodyError> {
        for e in &self.elems {
            if let Element::Arc { hi: ahi, lo: alo, arc } = e {
                if ge_opt_hi(ahi, hi) && le_opt_lo(alo, lo) {
                    return Ok(Contribution::Arc(arc));
                }
            }
        }
        match hi {
            None => Ok(Contribution::Vertex(self.top_vertex()?)),
            Some(h) => Ok(Contribution::Vertex(self.vertex_above(h)?)),
        }
    }

    /// State exactly at a breakpoint `λ`.
    fn at(&self, lambda: &ExactReal) -> Result<Contribution<'a>, BodyError> {
        for e in &self.elems {
            if let Element::Segment { lambda: l, start, end } = e {
                if l == lambda {
                    return Ok(Contribution::Segment(start, end));
                }
            }
        }
        let lam = Some(lambda.clone());
        for e in &self.elems {
            if let Element::Arc { hi, lo, arc } = e {
                if ge_opt_hi(hi, &lam) && le_opt_lo(lo, &lam) {
                    return Ok(Contribution::Vertex(arc.point_at_lambda(lambda)?));
                }
            }
        }
        Ok(Contribution::Vertex(self.vertex_above(lambda)?))
    }

    fn breakpoints(&self) -> Vec<ExactReal> {
        let mut out = Vec::new();
        for e in &self.elems {
            match e {
                Element::Segment { lambda, .. } => out.push(lambda.clone()),
                Element::Arc { hi, lo, .. } => {
                    out.extend(hi.iter().cloned());
                    out.extend(lo.iter().cloned());
                }
            }
        }
        out
    }
}

/// Merges two boundaries by slope. Each output piece records what each
/// summand contributes; the caller decides how to add them.
pub(crate) fn merge_plan<'a>(
    lhs: &'a NewtonBody,
    rhs: &'a NewtonBody,
) -> Result<Vec<MergedPiece<'a>>, BodyError> {
    let wl = Walker::new(lhs)?;
    let wr = Walker::new(rhs)?;
    let mut lambdas = wl.breakpoints();
    lambdas.extend(wr.breakpoints());
    lambdas.sort_by(|a, b| b.cmp(a));
    lambdas.dedup();

    let mut out = Vec::new();
    let mut hi: Option<ExactReal> = None;
    for i in 0..=lambdas.len() {
        let lo = lambdas.get(i).cloned();
        let cl = wl.on_interval(&lo, &hi)?;
        let cr = wr.on_interval(&lo, &hi)?;
        if matches!(cl, Contribution::Arc(_)) || matches!(cr, Contribution::Arc(_)) {
            out.push(MergedPiece::Arc {
                hi: hi.clone(),
                lo: lo.clone(),
                lhs: cl,
                rhs: cr,
            });
        }
        if let Some(l) = &lo {
            let sl = wl.at(l)?;
            let sr = wr.at(l)?;
            if matches!(sl, Contribution::Segment(..)) || matches!(sr, Contribution::Segment(..)) {
                out.push(MergedPiece::Segment { lhs: sl, rhs: sr });
            }
        }
        hi = lo;
    }
    Ok(out)
}

fn contribution_ends(c: &Contribution<'_>) -> (Point, Point) {
    match c {
        Contribution::Vertex(v) => (v.clone(), v.clone()),
        Contribution::Segment(s, e) => ((*s).clone(), (*e).clone()),
        Contribution::Arc(_) => unreachable!("arcs never sit at a single slope"),
    }
}

/// Center and root of a contribution on an interval; a vertex is a degenerate arc.
fn contribution_arc(c: &Contribution<'_>) -> (Point, ExactReal) {
    match c {
        Contribution::Vertex(v) => (v.clone(), ExactReal::zero()),
        Contribution::Arc(arc) => (Point::new(arc.a.clone(), arc.b.clone()), arc.root.clone()),
        Contribution::Segment(..) => unreachable!("segments never span an interval"),
    }
}

pub(crate) fn arc_from_lambda_range(
    center: Point,
    root: ExactReal,
    hi: &Option<ExactReal>,
    lo: &Option<ExactReal>,
) -> Result<HyperbolaArc, BodyError> {
    let xlo = match hi {
        None => center.x.clone(),
        Some(h) => center.x.add(&root.div(h)?)?,
    };
    let xhi = match lo {
        None => None,
        Some(l) => Some(center.x.add(&root.div(l)?)?),
    };
    Ok(HyperbolaArc {
        a: center.x,
        b: center.y,
        root,
        xlo,
        xhi,
    })
}

/// `A ⊕ B`, the Minkowski sum. Its boundary is the infimal convolution of the
/// two boundary functions.
pub fn minkowski_sum(lhs: &NewtonBody, rhs: &NewtonBody) -> Result<NewtonBody, BodyError> {
    let plan = merge_plan(lhs, rhs)?;
    let mut pieces = Vec::with_capacity(plan.len());
    for m in &plan {
        match m {
            MergedPiece::Segment { lhs, rhs } => {
                let (s1, e1) = contribution_ends(lhs);
                let (s2, e2) = contribution_ends(rhs);
                pieces.push(BoundaryPiece::Segment {
                    start: s1.add(&s2)?,
                    end: e1.add(&e2)?,
                });
            }
            MergedPiece::Arc { hi, lo, lhs, rhs } => {
                let (c1, r1) = contribution_arc(lhs);
                let (c2, r2) = contribution_arc(rhs);
                let arc = arc_from_lambda_range(c1.add(&c2)?, r1.add(&r2)?, hi, lo)?;
                pieces.push(BoundaryPiece::Arc(arc));
            }
        }
    }
    let body = NewtonBody {
        pieces: coalesce(pieces)?,
        x0: lhs.x0.add(&rhs.x0)?,
        y0: lhs.y0.add(&rhs.y0)?,
        attained_x: lhs.attained_x && rhs.attained_x,
        attained_y: lhs.attained_y && rhs.attained_y,
    };
    debug_assert!(body.validate().is_ok(), "{:?}\n{}", body.validate(), body);
    Ok(body)
}

/// Fuses adjacent pieces lying on the same line or the same hyperbola.
pub(crate) fn coalesce(pieces: Vec<BoundaryPiece>) -> Result<Vec<BoundaryPiece>, BodyError> {
    let mut out: Vec<BoundaryPiece> = Vec::with_capacity(pieces.len());
    for piece in pieces {
        let merged = match (out.last_mut(), &piece) {
            (
                Some(BoundaryPiece::Segment { start, end }),
                BoundaryPiece::Segment { start: s2, end: e2 },
            ) if end == s2 => {
                let d1 = end.sub(start)?;
                let d2 = e2.sub(s2)?;
                if cross(&d1, &d2)?.is_zero() {
                    *end = e2.clone();
                    true
                } else {
                    false
                }
            }
            (Some(BoundaryPiece::Arc(prev)), BoundaryPiece::Arc(next))
                if prev.a == next.a
                    && prev.b == next.b
                    && prev.root == next.root
                    && prev.xhi.as_ref() == Some(&next.xlo) =>
            {
                prev.xhi = next.xhi.clone();
                true
            }
            _ => false,
        };
        if !merged {
            out.push(piece);
        }
    }
    Ok(out)
}

pub fn equal_bodies(a: &NewtonBody, b: &NewtonBody) -> bool {
    a == b
}

impl fmt::Display for NewtonBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = |attained: bool| if attained { "attained" } else { "not attained" };
        writeln!(f, "vertical asymptote   x = {} ({})", self.x0, tag(self.attained_x))?;
        writeln!(f, "horizontal asymptote y = {} ({})", self.y0, tag(self.attained_y))?;
        if self.pieces.is_empty() {
            writeln!(f, "corner {}", Point::new(self.x0.clone(), self.y0.clone()))?;
        }
        for piece in &self.pieces {
            match piece {
                BoundaryPiece::Segment { start, end } => writeln!(f, "segment {start} -> {end}")?,
                BoundaryPiece::Arc(arc) => {
                    let s = arc.s().map(|s| s.to_string()).unwrap_or_else(|_| format!("({})^2", arc.root));
                    let hi = arc.xhi.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "inf".into());
                    writeln!(
                        f,
                        "arc (x - {})(y - {}) = {} for x in ({}, {})",
                        arc.a, arc.b, s, arc.xlo, hi
                    )?
                }
            }
        }
        Ok(())
    }
}

/// Floating-point copy of a body for repeated support-function evaluation.
#[derive(Clone, Debug)]
pub struct FloatBody {
    x0: f64,
    y0: f64,
    corners: Vec<(f64, f64)>,
    arcs: Vec<FloatArc>,
}

#[derive(Clone, Debug)]
struct FloatArc {
    a: f64,
    b: f64,
    root: f64,
    /// `λ` range; `hi = ∞`, `lo = 0` for unbounded ends
    hi: f64,
    lo: f64,
}

impl FloatBody {
    pub fn from_body(body: &NewtonBody) -> Self {
        let mut corners = Vec::new();
        if let Ok(Some(t)) = body.top() {
            corners.push(t.to_f64());
        }
        let mut arcs = Vec::new();
        for piece in &body.pieces {
            if let Ok(Some(e)) = piece.end_point() {
                corners.push(e.to_f64());
            }
            if let BoundaryPiece::Arc(arc) = piece {
                let hi = arc.lambda_hi().ok().flatten().map_or(f64::INFINITY, |l| l.to_f64());
                let lo = arc.lambda_lo().ok().flatten().map_or(0.0, |l| l.to_f64());
                arcs.push(FloatArc {
                    a: arc.a.to_f64(),
                    b: arc.b.to_f64(),
                    root: arc.root.to_f64(),
                    hi,
                    lo,
                });
            }
        }
        FloatBody {
            x0: body.x0.to_f64(),
            y0: body.y0.to_f64(),
            corners,
            arcs,
        }
    }

    pub fn support_value(&self, u: (f64, f64)) -> f64 {
        let (u1, u2) = u;
        if u1 == 0.0 && u2 == 0.0 {
            return 0.0;
        }
        if u2 == 0.0 {
            return u1 * self.x0;
        }
        if u1 == 0.0 {
            return u2 * self.y0;
        }
        let mut best = f64::NEG_INFINITY;
        for &(x, y) in &self.corners {
            best = best.max(u1 * x + u2 * y);
        }
        for arc in &self.arcs {
            // maximize u1(a + r/λ) + u2(b + rλ): λ* = √(u1/u2)
            let lam = (u1 / u2).sqrt().clamp(arc.lo, arc.hi);
            if lam > 0.0 && lam.is_finite() {
                best = best.max(u1 * (arc.a + arc.root / lam) + u2 * (arc.b + arc.root * lam));
            }
        }
        best
    }
}
