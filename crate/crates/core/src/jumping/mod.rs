//! Jumping numbers of toric psh germs from their Newton bodies.
//!
//! `c` is a jumping number iff `∂(c·P)` meets `Z²>0` or `c` is a limit of
//! such values, so the candidates are gauges `sup{t : p ∈ t·P}` of positive
//! lattice points. Enumeration over a finite window is exact below the
//! reported `complete_below` except on the listed residual intervals.

pub mod mixed;
pub mod sets;

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::body::NewtonBody;
use crate::error::JumpError;
use crate::number::{ExactReal, LatticePoint, Rational};

pub use mixed::{enumerate_mixed, mixed_cluster_points, mixed_gauge, MixedValue};
pub use sets::{
    builtin_jump_set, period_falsify, set_multiples_check, translation_search, AlphaRecord, BuiltinSet, JumpSet,
    MultiplesReport, PeriodEvidence,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    /// Gauge of a lattice point in the window.
    Listed,
    /// Cluster point; a limit of listed values.
    Cluster,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JumpValue {
    pub value: ExactReal,
    pub witness: Option<LatticePoint>,
    pub kind: ValueKind,
    /// `false` only for mixed values found by bisection.
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualKind {
    /// Open interval ending at a cluster point.
    Cluster,
    /// `(lo, hi]`: a column or row still climbing when the window ends.
    Window,
}

/// Interval where jumping numbers outside the window may hide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub lo: ExactReal,
    pub hi: ExactReal,
    pub kind: ResidualKind,
}

impl Residual {
    pub fn contains(&self, v: &ExactReal) -> bool {
        match self.kind {
            ResidualKind::Cluster => &self.lo < v && v < &self.hi,
            ResidualKind::Window => &self.lo < v && v <= &self.hi,
        }
    }

    /// Whether the closed interval `[a, b]` meets the residual.
    fn meets(&self, a: &ExactReal, b: &ExactReal) -> bool {
        match self.kind {
            ResidualKind::Cluster => a < &self.hi && b > &self.lo,
            ResidualKind::Window => a <= &self.hi && b > &self.lo,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JumpReport {
    #[serde(serialize_with = "crate::number::serialize_rational")]
    pub bound: Rational,
    pub window: u64,
    pub values: Vec<JumpValue>,
    pub clusters: Vec<ExactReal>,
    pub residuals: Vec<Residual>,
    /// Every jumping number `≤ complete_below` outside the residuals is listed.
    pub complete_below: ExactReal,
}

impl JumpReport {
    pub fn value_set(&self) -> Vec<ExactReal> {
        self.values.iter().map(|v| v.value.clone()).collect()
    }

    pub fn contains_value(&self, v: &ExactReal) -> bool {
        self.values.binary_search_by(|x| x.value.cmp(v)).is_ok()
    }

    /// Whether membership of `v` is decided by this report.
    pub fn is_certain(&self, v: &ExactReal) -> bool {
        v <= &self.complete_below && !self.residuals.iter().any(|r| r.contains(v))
    }
}

fn check_args(bound: &Rational, window: u64) -> Result<(), JumpError> {
    if *bound <= Rational::from_integer(0.into()) {
        return Err(JumpError::NonPositiveBound);
    }
    if window < 2 {
        return Err(JumpError::WindowTooSmall);
    }
    Ok(())
}

/// Log canonical threshold: the gauge of `(1,1)`.
pub fn lct(body: &NewtonBody) -> Result<ExactReal, JumpError> {
    Ok(body.gauge(LatticePoint::new(1, 1))?)
}

/// `{k/m : m ∈ S, k ≥ 1, k/m ≤ bound}` with `S` the positive asymptotes not met by the body.
pub fn cluster_points(body: &NewtonBody, bound: &Rational) -> Vec<ExactReal> {
    let a = body.asymptotes();
    let mut sides = Vec::new();
    if a.x0.is_positive() && !a.attained_x {
        sides.push(a.x0.clone());
    }
    if a.y0.is_positive() && !a.attained_y {
        sides.push(a.y0.clone());
    }
    let bound = ExactReal::from(bound.clone());
    let mut out = Vec::new();
    for m in sides {
        let step = ExactReal::one().div(&m).expect("m > 0");
        let mut k = 1i64;
        loop {
            let v = step.scale(&Rational::from_integer(k.into()));
            if v > bound {
                break;
            }
            out.push(v);
            k += 1;
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Residual for one column (or row) whose values climb towards `lim`.
pub(crate) fn side_residual(
    last: Option<&ExactReal>,
    lim: Option<ExactReal>,
    cluster_side: bool,
    bound: &ExactReal,
) -> Option<Residual> {
    let lo = last.cloned().unwrap_or_else(ExactReal::zero);
    if &lo >= bound {
        return None;
    }
    if let Some(l) = &lim {
        if &lo >= l || !l.is_positive() {
            return None;
        }
    }
    let (hi, kind) = match lim {
        Some(l) if &l <= bound => {
            let kind = if cluster_side { ResidualKind::Cluster } else { ResidualKind::Window };
            (l, kind)
        }
        _ => (bound.clone(), ResidualKind::Window),
    };
    Some(Residual { lo, hi, kind })
}

/// Sorts candidate values, keeps the smallest witness per value and marks clusters.
pub(crate) fn assemble_values(
    mut raw: Vec<JumpValue>,
    clusters: &[ExactReal],
) -> Vec<JumpValue> {
    let key = |w: &Option<LatticePoint>| w.map(|p| (p.x + p.y, p.x)).unwrap_or((u64::MAX, u64::MAX));
    raw.sort_by(|a, b| a.value.cmp(&b.value).then_with(|| key(&a.witness).cmp(&key(&b.witness))));
    raw.dedup_by(|later, first| later.value == first.value);
    for c in clusters {
        match raw.binary_search_by(|v| v.value.cmp(c)) {
            Ok(i) => raw[i].kind = ValueKind::Cluster,
            Err(i) => raw.insert(
                i,
                JumpValue {
                    value: c.clone(),
                    witness: None,
                    kind: ValueKind::Cluster,
                    exact: true,
                },
            ),
        }
    }
    raw
}

pub(crate) fn dedup_residuals(mut rs: Vec<Residual>) -> Vec<Residual> {
    rs.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| a.hi.cmp(&b.hi)));
    rs.dedup();
    rs
}

/// Gauges of the window `[1, W]²` up to `bound`, with clusters and residuals.
pub fn enumerate_jumping(body: &NewtonBody, bound: &Rational, window: u64) -> Result<JumpReport, JumpError> {
    check_args(bound, window)?;
    let grid: Vec<Vec<ExactReal>> = (1..=window)
        .into_par_iter()
        .map(|p| {
            (1..=window)
                .map(|q| body.gauge(LatticePoint::new(p, q)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let bound_e = ExactReal::from(bound.clone());
    let mut raw = Vec::new();
    for (i, col) in grid.iter().enumerate() {
        for (j, g) in col.iter().enumerate() {
            if g <= &bound_e {
                raw.push(JumpValue {
                    value: g.clone(),
                    witness: Some(LatticePoint::new(i as u64 + 1, j as u64 + 1)),
                    kind: ValueKind::Listed,
                    exact: true,
                });
            }
        }
    }
    let clusters = cluster_points(body, bound);
    let values = assemble_values(raw, &clusters);

    let a = body.asymptotes();
    let w = window as usize;
    let mut residuals = Vec::new();
    for p in 1..=window {
        let lim = a.x0.is_positive().then(|| int(p).div(&a.x0)).transpose()?;
        let cluster_side = !a.attained_x && a.x0.is_positive();
        residuals.extend(side_residual(Some(&grid[p as usize - 1][w - 1]), lim, cluster_side, &bound_e));
        let lim = a.y0.is_positive().then(|| int(p).div(&a.y0)).transpose()?;
        let cluster_side = !a.attained_y && a.y0.is_positive();
        residuals.extend(side_residual(Some(&grid[w - 1][p as usize - 1]), lim, cluster_side, &bound_e));
    }
    let corner = body.gauge(LatticePoint::new(window + 1, window + 1))?;
    Ok(JumpReport {
        bound: bound.clone(),
        window,
        values,
        clusters,
        residuals: dedup_residuals(residuals),
        complete_below: corner.min(bound_e),
    })
}

pub(crate) fn int(n: u64) -> ExactReal {
    ExactReal::from(Rational::from_integer(n.into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MtimesReport {
    pub passed: bool,
    /// `(p, m)` pairs with `gauge(m·p) = m·gauge(p)` listed in the enumeration.
    pub verified: Vec<(LatticePoint, u64)>,
    pub failures: Vec<(LatticePoint, u64)>,
}

/// Checks `gauge(m·p) = m·gauge(p)` and that `m·gauge(p)` is enumerated.
pub fn mtimes_check(body: &NewtonBody, samples: &[LatticePoint], mmax: u64) -> Result<MtimesReport, JumpError> {
    let mut verified = Vec::new();
    let mut failures = Vec::new();
    if samples.is_empty() || mmax == 0 {
        return Ok(MtimesReport {
            passed: true,
            verified,
            failures,
        });
    }
    let window = samples.iter().map(|p| p.x.max(p.y)).max().unwrap_or(1) * mmax;
    let mut top = Rational::from_integer(1.into());
    let mut base = Vec::with_capacity(samples.len());
    for p in samples {
        if !p.is_positive() {
            return Err(crate::error::BodyError::NonPositivePoint.into());
        }
        let g = body.gauge(*p)?;
        let upper = g.scale(&Rational::from_integer(mmax.into())).ceil();
        top = top.max(Rational::from_integer(upper));
        base.push(g);
    }
    let report = enumerate_jumping(body, &top, window.max(2))?;
    for (p, g) in samples.iter().zip(&base) {
        for m in 1..=mmax {
            let mg = g.scale(&Rational::from_integer(m.into()));
            let ok = body.gauge(p.scaled(m))? == mg && report.contains_value(&mg);
            if ok {
                verified.push((*p, m));
            } else {
                failures.push((*p, m));
            }
        }
    }
    Ok(MtimesReport {
        passed: failures.is_empty(),
        verified,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub passed: bool,
    /// Consecutive pairs checked.
    pub checked: usize,
    pub max_gap: f64,
    /// Pairs `(v, next)` with `next − v > lct`; `next = None` means nothing
    /// was listed within `lct` above `v` although the range is certified.
    pub violations: Vec<(ExactReal, Option<ExactReal>)>,
}

/// Checks that consecutive jumping numbers differ by at most the lct on every
/// certified subinterval of the report.
pub fn gap_check(report: &JumpReport, lct_value: &ExactReal) -> GapReport {
    let certified = |a: &ExactReal, b: &ExactReal| {
        b <= &report.complete_below && !report.residuals.iter().any(|r| r.meets(a, b))
    };
    let exceeds = |a: &ExactReal, b: &ExactReal| {
        // b − a > lct, decided across quadratic fields
        b.to_radical_sum()
            .sub(&a.to_radical_sum())
            .sub(&lct_value.to_radical_sum())
            .signum()
            == Ordering::Greater
    };
    let mut checked = 0;
    let mut max_gap: f64 = 0.0;
    let mut violations = Vec::new();
    let vals: Vec<&ExactReal> = report.values.iter().map(|v| &v.value).collect();
    for w in vals.windows(2) {
        if !certified(w[0], w[1]) {
            continue;
        }
        checked += 1;
        max_gap = max_gap.max(w[1].to_f64() - w[0].to_f64());
        if exceeds(w[0], w[1]) {
            violations.push((w[0].clone(), Some(w[1].clone())));
        }
    }
    if let Some(last) = vals.last() {
        let reach = last.to_radical_sum().add(&lct_value.to_radical_sum());
        let reach_in = reach.sub(&report.complete_below.to_radical_sum()).signum() != Ordering::Greater;
        if reach_in {
            if let Ok(end) = ExactReal::from_radical_sum(&reach) {
                if certified(last, &end) {
                    violations.push(((*last).clone(), None));
                }
            }
        }
    }
    GapReport {
        passed: violations.is_empty(),
        checked,
        max_gap,
        violations,
    }
}
