//! Closed-form jump sets: Koike's example, Saito's curve, the `ef/(e+f)`
//! set and diagonal ideals, with periodicity and multiples checks.

use serde::Serialize;

use super::{Residual, ResidualKind};
use crate::error::JumpError;
use crate::ideal::MonomialIdeal;
use crate::number::{rat, ExactReal, LatticePoint, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuiltinSet {
    /// `½(p + √(2a²p² − q²))`, `p > q ≥ 0`, `p ≡ q (mod 2)`.
    Koike { a: u64 },
    /// `x⁵ + y⁴ + x³y²`; periodic with period 1 above `1`.
    Saito,
    /// `{ef/(e+f) : e, f ≥ 1}`.
    Elsv,
    /// `{Σ (eᵢ + 1)/mᵢ : eᵢ ≥ 0}`.
    Diagonal { m: Vec<Rational> },
}

impl BuiltinSet {
    pub fn from_label(label: &str, a: Option<u64>, m: &[Rational]) -> Result<Self, JumpError> {
        let invalid = |reason: &str| JumpError::InvalidParams {
            label: label.to_string(),
            reason: reason.to_string(),
        };
        let set = match label {
            "koike" => BuiltinSet::Koike {
                a: a.ok_or_else(|| invalid("needs an integer a ≥ 2"))?,
            },
            "saito" => BuiltinSet::Saito,
            "elsv" => BuiltinSet::Elsv,
            "diagonal" => BuiltinSet::Diagonal { m: m.to_vec() },
            other => return Err(JumpError::UnknownLabel(other.to_string())),
        };
        set.validate()?;
        Ok(set)
    }

    pub fn label(&self) -> &'static str {
        match self {
            BuiltinSet::Koike { .. } => "koike",
            BuiltinSet::Saito => "saito",
            BuiltinSet::Elsv => "elsv",
            BuiltinSet::Diagonal { .. } => "diagonal",
        }
    }

    fn validate(&self) -> Result<(), JumpError> {
        let invalid = |reason: &str| {
            Err(JumpError::InvalidParams {
                label: self.label().to_string(),
                reason: reason.to_string(),
            })
        };
        match self {
            BuiltinSet::Koike { a } if *a < 2 => invalid("a must be at least 2"),
            BuiltinSet::Diagonal { m } if m.is_empty() => invalid("needs at least one exponent"),
            BuiltinSet::Diagonal { m } if m.iter().any(|x| *x <= rat(0, 1)) => invalid("exponents must be positive"),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JumpSet {
    pub label: String,
    pub values: Vec<ExactReal>,
    pub complete_below: ExactReal,
    pub residuals: Vec<Residual>,
}

impl JumpSet {
    /// Exact membership; `None` where the enumeration certifies nothing.
    pub fn contains(&self, v: &ExactReal) -> Option<bool> {
        if v > &self.complete_below || self.residuals.iter().any(|r| r.contains(v)) {
            return None;
        }
        Some(self.values.binary_search(v).is_ok())
    }
}

fn sorted(mut v: Vec<ExactReal>) -> Vec<ExactReal> {
    v.sort();
    v.dedup();
    v
}

/// One row of Saito's table: `J(cφ)` for `lo ≤ c < hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaitoRow {
    pub lo: Rational,
    pub hi: Rational,
    pub ideal: MonomialIdeal,
}

/// `(lo, hi, generators)` with `lo = a/b`, `hi = c/d`.
type RawRow = (i64, i64, i64, i64, &'static [(u64, u64)]);

pub fn saito_table() -> Vec<SaitoRow> {
    let rows: [RawRow; 7] = [
        (0, 1, 9, 20, &[(0, 0)]),
        (9, 20, 13, 20, &[(1, 0), (0, 1)]),
        (13, 20, 7, 10, &[(2, 0), (0, 1)]),
        (7, 10, 17, 20, &[(2, 0), (1, 1), (0, 2)]),
        (17, 20, 9, 10, &[(3, 0), (1, 1), (0, 2)]),
        (9, 10, 19, 20, &[(3, 0), (2, 1), (0, 2)]),
        (19, 20, 1, 1, &[(3, 0), (2, 1), (1, 2), (0, 3)]),
    ];
    rows.iter()
        .map(|&(ln, ld, hn, hd, gens)| {
            let pts: Vec<LatticePoint> = gens.iter().map(|&(x, y)| LatticePoint::new(x, y)).collect();
            SaitoRow {
                lo: rat(ln, ld),
                hi: rat(hn, hd),
                ideal: MonomialIdeal::from_points(&pts).expect("nonempty"),
            }
        })
        .collect()
}

fn koike(a: u64, bound: &Rational) -> Vec<ExactReal> {
    let bound_e = ExactReal::from(bound.clone());
    // q < p gives a value above p(1 + √(2a² − 1))/2
    let slope = 1.0 + ((2 * a * a - 1) as f64).sqrt();
    let pmax = (2.0 * crate::radical::rational_to_f64(bound) / slope).floor() as i64 + 1;
    let two_a2 = rat(2 * (a * a) as i64, 1);
    let mut out = Vec::new();
    for p in 1..=pmax {
        let mut q = p % 2;
        while q < p {
            let disc = &two_a2 * rat(p * p, 1) - rat(q * q, 1);
            let v = ExactReal::sqrt_rational(&disc)
                .expect("2a²p² − q² > 0")
                .add_rational(&rat(p, 1))
                .scale(&rat(1, 2));
            if v <= bound_e {
                out.push(v);
            }
            q += 2;
        }
    }
    sorted(out)
}

fn saito(bound: &Rational) -> Vec<ExactReal> {
    let base: Vec<Rational> = saito_table().iter().skip(1).map(|r| r.lo.clone()).chain([rat(1, 1)]).collect();
    let mut out = Vec::new();
    let mut shift = rat(0, 1);
    while &shift <= bound {
        out.extend(base.iter().map(|b| b + &shift).filter(|v| v <= bound).map(ExactReal::from));
        shift += rat(1, 1);
    }
    sorted(out)
}

fn diagonal(m: &[Rational], bound: &Rational) -> Vec<ExactReal> {
    fn rec(m: &[Rational], acc: Rational, bound: &Rational, out: &mut Vec<ExactReal>) {
        let Some((first, rest)) = m.split_first() else {
            out.push(acc.into());
            return;
        };
        let mut e = 1i64;
        loop {
            let v = &acc + Rational::from_integer(e.into()) / first;
            // the remaining coordinates add at least Σ 1/mᵢ
            let floor: Rational = rest.iter().map(|x| x.recip()).sum();
            if &(&v + floor) > bound {
                break;
            }
            rec(rest, v, bound, out);
            e += 1;
        }
    }
    let mut out = Vec::new();
    rec(m, rat(0, 1), bound, &mut out);
    sorted(out)
}

/// `ef/(e+f)` over `e, f ≤ W` with window residuals below each integer.
fn elsv(bound: &Rational) -> JumpSet {
    let ceil = bound.ceil().to_integer();
    let w: i64 = i64::try_from(ceil).unwrap_or(i64::MAX / 64).max(1) * 16 + 48;
    let mut values = Vec::new();
    let mut residuals = Vec::new();
    for e in 1..=w {
        for f in 1..=w {
            let v = rat(e * f, e + f);
            if &v <= bound {
                values.push(ExactReal::from(v));
            }
        }
        // column e climbs to e without reaching it
        let last = rat(e * w, e + w);
        if &last < bound {
            let lim = rat(e, 1);
            let (hi, kind) = if &lim <= bound {
                (lim, ResidualKind::Cluster)
            } else {
                (bound.clone(), ResidualKind::Window)
            };
            residuals.push(Residual { lo: last.into(), hi: hi.into(), kind });
        }
    }
    let corner = rat(w + 1, 2);
    JumpSet {
        label: "elsv".into(),
        values: sorted(values),
        complete_below: ExactReal::from(corner.min(bound.clone())),
        residuals,
    }
}

pub fn builtin_jump_set(set: &BuiltinSet, bound: &Rational) -> Result<JumpSet, JumpError> {
    set.validate()?;
    if *bound <= rat(0, 1) {
        return Err(JumpError::NonPositiveBound);
    }
    let complete = |values| JumpSet {
        label: set.label().to_string(),
        values,
        complete_below: bound.clone().into(),
        residuals: vec![],
    };
    Ok(match set {
        BuiltinSet::Koike { a } => complete(koike(*a, bound)),
        BuiltinSet::Saito => complete(saito(bound)),
        BuiltinSet::Diagonal { m } => complete(diagonal(m, bound)),
        BuiltinSet::Elsv => elsv(bound),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaRecord {
    pub alpha: ExactReal,
    /// `m ∈ [1, probes]` with `α + m·c` outside the set.
    pub misses: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodEvidence {
    #[serde(serialize_with = "crate::number::serialize_rational")]
    pub period: Rational,
    pub probes: u64,
    pub records: Vec<AlphaRecord>,
    /// Index of the record with the most misses.
    pub best: usize,
}

impl PeriodEvidence {
    pub fn record_for(&self, alpha: &ExactReal) -> Option<&AlphaRecord> {
        self.records.iter().find(|r| &r.alpha == alpha)
    }

    pub fn best_record(&self) -> &AlphaRecord {
        &self.records[self.best]
    }

    /// Some `α` misses every probe.
    pub fn falsified(&self) -> bool {
        self.best_record().misses.len() as u64 == self.probes
    }

    pub fn total_misses(&self) -> usize {
        self.records.iter().map(|r| r.misses.len()).sum()
    }
}

/// Counts translates `α + m·c` missing from the set, over every `α` whose
/// translates all lie in the certified range.
pub fn period_falsify(set: &JumpSet, c: &Rational, probes: u64) -> Result<PeriodEvidence, JumpError> {
    if *c <= rat(0, 1) || probes == 0 {
        return Err(JumpError::InvalidParams {
            label: set.label.clone(),
            reason: "period and probes must be positive".into(),
        });
    }
    let span = c * Rational::from_integer(probes.into());
    let mut records = Vec::new();
    'alpha: for alpha in &set.values {
        let mut misses = Vec::new();
        if set.contains(alpha) != Some(true) {
            continue;
        }
        for m in 1..=probes {
            let t = alpha.add_rational(&(c * Rational::from_integer(m.into())));
            match set.contains(&t) {
                None => continue 'alpha,
                Some(false) => misses.push(m),
                Some(true) => {}
            }
        }
        records.push(AlphaRecord {
            alpha: alpha.clone(),
            misses,
        });
    }
    if records.is_empty() {
        let needed = set
            .values
            .first()
            .map(|a| a.add_rational(&span).to_string())
            .unwrap_or_else(|| format!("a value plus {}", crate::number::format_rational(&span)));
        return Err(JumpError::InsufficientCompleteness {
            complete_below: set.complete_below.to_string(),
            needed,
        });
    }
    let best = records
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.misses.len().cmp(&b.misses.len()).then(j.cmp(i)))
        .map(|(i, _)| i)
        .expect("nonempty");
    Ok(PeriodEvidence {
        period: c.clone(),
        probes,
        records,
        best,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplesReport {
    pub checked: usize,
    /// `(α, m)` with `m·α` certified absent.
    pub violations: Vec<(ExactReal, u64)>,
}

/// Whether `m·α` belongs to the set for every member `α` and `2 ≤ m ≤ mmax`
/// within the certified range; toric germs always pass.
pub fn set_multiples_check(set: &JumpSet, mmax: u64) -> MultiplesReport {
    let mut checked = 0;
    let mut violations = Vec::new();
    for alpha in &set.values {
        for m in 2..=mmax {
            let v = alpha.scale(&Rational::from_integer(m.into()));
            match set.contains(&v) {
                None => {}
                Some(true) => checked += 1,
                Some(false) => {
                    checked += 1;
                    violations.push((alpha.clone(), m));
                }
            }
        }
    }
    MultiplesReport { checked, violations }
}

/// Pairs `r ≤ s ≤ n` with `rs/(r+s) = e/(e+1) + c`.
pub fn translation_search(e: u64, c: u64, n: u64) -> Vec<(u64, u64)> {
    let target = Rational::new(e.into(), (e + 1).into()) + Rational::from_integer(c.into());
    let mut out = Vec::new();
    for r in 1..=n {
        for s in r..=n {
            if Rational::new((r * s).into(), (r + s).into()) == target {
                out.push((r, s));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::ideal_contains_ideal;

    fn ex(s: &str) -> ExactReal {
        s.parse().unwrap()
    }

    #[test]
    fn koike_smallest_element() {
        let s = builtin_jump_set(&BuiltinSet::Koike { a: 2 }, &rat(10, 1)).unwrap();
        assert_eq!(s.values[0], ex("1 + 2*sqrt(2)"));
        assert!(s.values.iter().all(|v| v <= &ex("10")));
    }

    #[test]
    fn koike_matches_brute_force() {
        let bound = rat(30, 1);
        let s = builtin_jump_set(&BuiltinSet::Koike { a: 3 }, &bound).unwrap();
        let mut brute = Vec::new();
        for p in 1..60i64 {
            for q in 0..p {
                if (p - q) % 2 == 0 {
                    let v = 0.5 * (p as f64 + ((18 * p * p - q * q) as f64).sqrt());
                    if v <= 30.0 {
                        brute.push(v);
                    }
                }
            }
        }
        brute.sort_by(f64::total_cmp);
        brute.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        assert_eq!(s.values.len(), brute.len());
    }

    #[test]
    fn saito_set() {
        let s = builtin_jump_set(&BuiltinSet::Saito, &rat(2, 1)).unwrap();
        let expected: Vec<ExactReal> = [
            "9/20", "13/20", "7/10", "17/20", "9/10", "19/20", "1", "29/20", "33/20", "17/10", "37/20", "19/10",
            "39/20", "2",
        ]
        .iter()
        .map(|v| ex(v))
        .collect();
        assert_eq!(s.values, expected);
    }

    #[test]
    fn saito_table_is_a_decreasing_chain() {
        let t = saito_table();
        assert!(t[0].ideal.is_unit());
        for w in t.windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
            assert!(ideal_contains_ideal(&w[0].ideal, &w[1].ideal));
            assert_ne!(w[0].ideal, w[1].ideal);
        }
        assert_eq!(t[6].ideal.to_string(), "(y^3, x*y^2, x^2*y, x^3)");
    }

    #[test]
    fn diagonal_sets() {
        let s = builtin_jump_set(&BuiltinSet::Diagonal { m: vec![rat(2, 1), rat(3, 1)] }, &rat(1, 1)).unwrap();
        assert_eq!(s.values, vec![ex("5/6")]);
        let s = builtin_jump_set(&BuiltinSet::Diagonal { m: vec![rat(1, 1); 3] }, &rat(5, 1)).unwrap();
        assert_eq!(s.values, vec![ex("3"), ex("4"), ex("5")]);
    }

    #[test]
    fn label_errors() {
        assert_eq!(
            BuiltinSet::from_label("nope", None, &[]),
            Err(JumpError::UnknownLabel("nope".into()))
        );
        assert!(matches!(
            BuiltinSet::from_label("koike", Some(1), &[]),
            Err(JumpError::InvalidParams { .. })
        ));
        assert!(BuiltinSet::from_label("koike", None, &[]).is_err());
        assert!(BuiltinSet::from_label("diagonal", None, &[rat(-1, 1)]).is_err());
    }

    #[test]
    fn koike_has_no_period_one() {
        let s = builtin_jump_set(&BuiltinSet::Koike { a: 2 }, &rat(20, 1)).unwrap();
        let ev = period_falsify(&s, &rat(1, 1), 5).unwrap();
        let r = ev.record_for(&ex("1 + 2*sqrt(2)")).unwrap();
        assert_eq!(r.misses, vec![1, 2, 3, 4, 5]);
        assert!(ev.falsified());
    }

    #[test]
    fn saito_has_period_one() {
        let s = builtin_jump_set(&BuiltinSet::Saito, &rat(4, 1)).unwrap();
        let ev = period_falsify(&s, &rat(1, 1), 1).unwrap();
        assert!(ev.record_for(&ex("9/20")).unwrap().misses.is_empty());
        assert_eq!(ev.total_misses(), 0);
    }

    #[test]
    fn integer_diagonal_has_period_one() {
        let s = builtin_jump_set(&BuiltinSet::Diagonal { m: vec![rat(1, 1), rat(1, 1)] }, &rat(12, 1)).unwrap();
        let ev = period_falsify(&s, &rat(1, 1), 4).unwrap();
        assert_eq!(ev.total_misses(), 0);
    }

    #[test]
    fn period_needs_completeness() {
        let s = builtin_jump_set(&BuiltinSet::Saito, &rat(1, 1)).unwrap();
        assert!(matches!(
            period_falsify(&s, &rat(1, 1), 3),
            Err(JumpError::InsufficientCompleteness { .. })
        ));
    }

    #[test]
    fn saito_breaks_multiples() {
        let s = builtin_jump_set(&BuiltinSet::Saito, &rat(2, 1)).unwrap();
        let r = set_multiples_check(&s, 3);
        assert!(r.violations.contains(&(ex("9/20"), 3)));
        assert!(!r.violations.contains(&(ex("9/20"), 2)));
    }

    #[test]
    fn elsv_membership_is_honest() {
        let s = builtin_jump_set(&BuiltinSet::Elsv, &rat(2, 1)).unwrap();
        assert_eq!(s.contains(&ex("1/2")), Some(true));
        assert_eq!(s.contains(&ex("4/3")), Some(true));
        assert_eq!(s.contains(&ex("3/5")), Some(false));
        // just below the cluster at 1
        assert_eq!(s.contains(&ex("999/1000")), None);
        assert!(set_multiples_check(&s, 4).violations.is_empty());
    }

    #[test]
    fn translation_examples() {
        assert_eq!(translation_search(1, 1, 10), vec![(2, 6), (3, 3)]);
        assert_eq!(translation_search(2, 1, 20), vec![(2, 10)]);
        assert!(translation_search(1, 1, 1).is_empty());
    }
}
