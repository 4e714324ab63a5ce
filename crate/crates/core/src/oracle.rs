//! Floating-point integrability oracle.
//!
//! After `z_i = e^{s_i + iθ_i}` the test integral for `z^A` against
//! `e^{−2cφ}` becomes `∫ exp(2⟨A+1, s⟩ − 2c·φ̂(s)) ds` over `s ≤ 0`. The probe
//! watches how the truncated integral over `(−T, 0]²` grows with `T`.

use rayon::prelude::*;
use serde::Serialize;

use crate::body::{FloatBody, NewtonBody};
use crate::error::{BodyError, OracleError};
use crate::ideal::{multiplier_ideal, MonomialIdeal};
use crate::number::{LatticePoint, Rational};
use crate::radical::rational_to_f64;

#[derive(Clone, Debug)]
pub enum WeightFn {
    SupportOf(FloatBody),
    GuanLi { m: u32, k: u32 },
    Diagonal { m1: f64, m2: f64 },
    MonomialLog(Vec<(f64, f64)>),
}

impl WeightFn {
    pub fn support_of(body: &NewtonBody) -> Self {
        WeightFn::SupportOf(FloatBody::from_body(body))
    }

    pub fn diagonal(m1: &Rational, m2: &Rational) -> Self {
        WeightFn::Diagonal {
            m1: rational_to_f64(m1),
            m2: rational_to_f64(m2),
        }
    }

    pub fn monomial_log(ideal: &MonomialIdeal) -> Self {
        WeightFn::MonomialLog(ideal.gens().iter().map(|g| (g.x as f64, g.y as f64)).collect())
    }

    pub fn eval(&self, s: (f64, f64)) -> f64 {
        weight_eval(self, s)
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

fn log_sum_exp(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::NEG_INFINITY, log_add_exp)
}

/// `log(k^{−b_k} e^{b_k s2}) = b_k (s2 − ln k)` with `b_k = M^{2k}`.
fn guanli_exponent(m: u32, k: u32, s2: f64) -> f64 {
    let d = s2 - (k as f64).ln();
    if d == 0.0 {
        return 0.0;
    }
    (m as f64).powi(2 * k as i32) * d
}

/// `φ̂(s)` for `s ≤ 0`.
pub fn weight_eval(w: &WeightFn, s: (f64, f64)) -> f64 {
    let (s1, s2) = s;
    match w {
        WeightFn::SupportOf(b) => b.support_value(s),
        WeightFn::GuanLi { m, k } => {
            let mut acc = s1;
            let mf = *m as f64;
            for j in 1..=*k {
                acc += mf.powi(-(j as i32)) * log_add_exp(s1, guanli_exponent(*m, j, s2));
            }
            acc
        }
        WeightFn::Diagonal { m1, m2 } => log_add_exp(m1 * s1, m2 * s2),
        WeightFn::MonomialLog(gens) => log_sum_exp(gens.iter().map(|&(a, b)| a * s1 + b * s2)),
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Gradient of the truncated Guan–Li series.
pub fn guanli_gradient(m: u32, k: u32, s: (f64, f64)) -> (f64, f64) {
    let (s1, s2) = s;
    let mf = m as f64;
    let mut g = (1.0, 0.0);
    for j in 1..=k {
        let u = guanli_exponent(m, j, s2);
        g.0 += mf.powi(-(j as i32)) * sigmoid(s1 - u);
        // M^{−j}·b_j = M^j
        g.1 += mf.powi(j as i32) * sigmoid(u - s1);
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeResult {
    pub verdict: Verdict,
    pub slope: f64,
    /// `(T, log I(T))`
    pub samples: Vec<(f64, f64)>,
}

const CONVERGENCE_TOL: f64 = 1e-6;
const DIVERGENCE_SLOPE: f64 = 0.01;

/// Trapezoid weight of node `i` on `[0, n]`, in log form.
fn log_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i == n {
        -std::f64::consts::LN_2
    } else {
        0.0
    }
}

pub fn integrability_probe(w: &WeightFn, c: f64, a: LatticePoint, tmax: f64, grid: usize) -> Result<ProbeResult, OracleError> {
    if c.is_nan() || c <= 0.0 {
        return Err(OracleError::InvalidParams(format!("c must be positive, got {c}")));
    }
    if tmax.is_nan() || tmax < 10.0 {
        return Err(OracleError::InvalidParams(format!("tmax must be at least 10, got {tmax}")));
    }
    if grid < 64 || !grid.is_multiple_of(4) {
        return Err(OracleError::InvalidParams(format!(
            "grid must be a multiple of 4 and at least 64, got {grid}"
        )));
    }
    let h = tmax / grid as f64;
    let (p1, p2) = ((a.x + 1) as f64, (a.y + 1) as f64);
    let ns: Vec<usize> = (1..=4).map(|q| q * grid / 4).collect();
    // rows i = 0..=grid, s1 = −i·h; each row contributes to every square it meets
    let rows: Vec<[f64; 4]> = (0..=grid)
        .into_par_iter()
        .map(|i| {
            let s1 = -(i as f64) * h;
            let vals: Vec<f64> = (0..=grid)
                .map(|j| {
                    let s2 = -(j as f64) * h;
                    2.0 * (p1 * s1 + p2 * s2) - 2.0 * c * weight_eval(w, (s1, s2))
                })
                .collect();
            let mut out = [f64::NEG_INFINITY; 4];
            for (q, &n) in ns.iter().enumerate() {
                if i <= n {
                    let row = log_sum_exp((0..=n).map(|j| vals[j] + log_weight(j, n)));
                    out[q] = row + log_weight(i, n);
                }
            }
            out
        })
        .collect();
    let log_h2 = 2.0 * h.ln();
    let samples: Vec<(f64, f64)> = ns
        .iter()
        .enumerate()
        .map(|(q, &n)| (n as f64 * h, log_sum_exp(rows.iter().map(|r| r[q])) + log_h2))
        .collect();
    let slope = least_squares_slope(&samples);
    let (_, last) = samples[3];
    let (_, prev) = samples[2];
    // (I(T) − I(T')) / I(T)
    let increment = -(prev - last).exp_m1();
    let verdict = if increment < CONVERGENCE_TOL {
        Verdict::Convergent
    } else if slope > DIVERGENCE_SLOPE {
        Verdict::Divergent
    } else {
        Verdict::Inconclusive
    };
    Ok(ProbeResult { verdict, slope, samples })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Grid used by [`agreement_report`].
pub const AGREEMENT_GRID: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgreementRow {
    pub id: usize,
    pub c: String,
    pub a: LatticePoint,
    pub exact_member: bool,
    pub verdict: Verdict,
    pub slope: f64,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgreementReport {
    pub agreed: usize,
    pub total: usize,
    pub inconclusive: usize,
    pub mismatches: Vec<usize>,
    pub rows: Vec<AgreementRow>,
}

/// Largest `t` with `A + (1,1) ∈ t·B`, or `None` when unbounded.
fn gauge_f64(body: &NewtonBody, a: LatticePoint) -> Result<Option<f64>, BodyError> {
    match body.gauge(LatticePoint::new(a.x + 1, a.y + 1)) {
        Ok(g) => Ok(Some(g.to_f64())),
        Err(BodyError::UnboundedGauge) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn agreement_report(
    body: &NewtonBody,
    cases: &[(Rational, LatticePoint)],
    margin: f64,
    tmax: f64,
) -> Result<AgreementReport, OracleError> {
    if margin.is_nan() || margin <= 0.0 {
        return Err(OracleError::InvalidParams(format!("margin must be positive, got {margin}")));
    }
    let mut violations = Vec::new();
    for (i, (c, a)) in cases.iter().enumerate() {
        let cf = rational_to_f64(c);
        if cf <= 0.0 {
            return Err(OracleError::InvalidParams(format!("case {i}: c must be positive")));
        }
        if let Some(g) = gauge_f64(body, *a)? {
            if (g - cf).abs() < margin * cf {
                violations.push(i);
            }
        }
    }
    if !violations.is_empty() {
        return Err(OracleError::MarginViolation(violations));
    }
    let w = WeightFn::support_of(body);
    let rows: Vec<AgreementRow> = cases
        .par_iter()
        .enumerate()
        .map(|(id, (c, a))| -> Result<AgreementRow, OracleError> {
            let exact_member = multiplier_ideal(body, c)?.contains(*a);
            let probe = integrability_probe(&w, rational_to_f64(c), *a, tmax, AGREEMENT_GRID)?;
            let agree = matches!(
                (exact_member, probe.verdict),
                (true, Verdict::Convergent) | (false, Verdict::Divergent)
            );
            Ok(AgreementRow {
                id,
                c: crate::number::format_rational(c),
                a: *a,
                exact_member,
                verdict: probe.verdict,
                slope: probe.slope,
                agree,
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(AgreementReport {
        agreed: rows.iter().filter(|r| r.agree).count(),
        total: rows.len(),
        inconclusive: rows.iter().filter(|r| r.verdict == Verdict::Inconclusive).count(),
        mismatches: rows.iter().filter(|r| !r.agree).map(|r| r.id).collect(),
        rows,
    })
}
