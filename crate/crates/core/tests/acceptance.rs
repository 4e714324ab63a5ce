//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use njump_core::body::minkowski_sum;
use njump_core::graded::{asymptotic_multiplier_ideal, GradedSystem};
use njump_core::jumping::{
    builtin_jump_set, cluster_points, enumerate_jumping, enumerate_mixed, gap_check, lct, mtimes_check,
    period_falsify, set_multiples_check, translation_search, BuiltinSet, ValueKind,
};
use njump_core::oracle::{agreement_report, guanli_gradient};
use njump_core::spec::to_canonical_json;
use njump_core::{rat, ExactReal, LatticePoint, NewtonBody, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hyp(a: Rational, b: Rational, s: Rational) -> NewtonBody {
    NewtonBody::hyperbola(a, b, s).unwrap()
}

fn hyp_i(a: i64, b: i64, s: i64) -> NewtonBody {
    hyp(rat(a, 1), rat(b, 1), rat(s, 1))
}

fn poly(v: &[(i64, i64)]) -> NewtonBody {
    let pts: Vec<_> = v.iter().map(|&(x, y)| (rat(x, 1), rat(y, 1))).collect();
    NewtonBody::polyhedral(&pts).unwrap()
}

fn ints(v: &[i64]) -> Vec<ExactReal> {
    v.iter().map(|&k| ExactReal::from_int(k)).collect()
}

fn sorted(mut v: Vec<ExactReal>) -> Vec<ExactReal> {
    v.sort();
    v.dedup();
    v
}

fn elsv_values() -> Check {
    let r = enumerate_jumping(&hyp_i(1, 1, 1), &rat(3, 1), 60).map_err(|e| e.to_string())?;
    let expected = sorted(
        (1..=60i64)
            .flat_map(|e| (1..=60i64).map(move |f| rat(e * f, e + f)))
            .filter(|v| *v <= rat(3, 1))
            .map(ExactReal::from)
            .collect(),
    );
    ensure(r.value_set() == expected, || format!("{} values, expected {}", r.values.len(), expected.len()))?;
    for v in &r.values {
        if let Some(w) = v.witness {
            let g = ExactReal::from(rat((w.x * w.y) as i64, (w.x + w.y) as i64));
            ensure(g == v.value, || format!("witness {w} gives {g}, listed {}", v.value))?;
        }
    }
    ensure(r.clusters == ints(&[1, 2, 3]), || format!("clusters {:?}", r.clusters))
}

fn cluster_classifier() -> Check {
    let b = rat(5, 1);
    let halves: Vec<ExactReal> = (1..=10).map(|k| ExactReal::ratio(k, 2)).collect();
    let cases = [
        ("hyperbola(1,1,1)", hyp_i(1, 1, 1), ints(&[1, 2, 3, 4, 5])),
        ("hyperbola(0,0,1)", hyp_i(0, 0, 1), vec![]),
        ("polyhedral{(1,2),(3,1)}", poly(&[(1, 2), (3, 1)]), vec![]),
        ("hyperbola(2,1,1)", hyp_i(2, 1, 1), halves),
    ];
    for (name, body, want) in cases {
        let got = cluster_points(&body, &b);
        ensure(got == want, || format!("{name}: {got:?}"))?;
    }
    Ok(())
}

fn mixed_sets() -> Check {
    let r = enumerate_mixed(&hyp_i(0, 0, 1), &hyp_i(1, 1, 1), &rat(39, 10), 25).map_err(|e| e.to_string())?;
    let expected: Vec<ExactReal> = (2..=24)
        .map(|k| ExactReal::sqrt_rational(&rat(k, 1)).unwrap().add_rational(&rat(-1, 1)))
        .collect();
    ensure(r.value_set() == expected, || format!("shifted set {:?}", r.value_set()))?;
    ensure(r.values.iter().all(|v| v.exact), || "inexact mixed value".into())?;

    let quadrant = poly(&[(0, 0)]);
    let phi = hyp_i(2, 1, 1);
    let r = enumerate_mixed(&phi, &quadrant, &rat(4, 1), 10).map_err(|e| e.to_string())?;
    let formula = |p: u64, q: u64| {
        let (p, q) = (p as i64, q as i64);
        ExactReal::sqrt_rational(&rat(p * p + 4 * q * q, 1))
            .unwrap()
            .neg()
            .add_rational(&rat(p + 2 * q, 1))
            .scale(&rat(1, 2))
    };
    for p in 1..=10 {
        for q in 1..=10 {
            let v = formula(p, q);
            ensure(r.contains_value(&v), || format!("missing value at ({p},{q}): {v}"))?;
        }
    }
    for v in &r.values {
        match (v.kind, v.witness) {
            (ValueKind::Listed, Some(w)) => {
                ensure(formula(w.x, w.y) == v.value, || format!("value {} at {w}", v.value))?
            }
            _ => ensure(cluster_points(&phi, &rat(4, 1)).contains(&v.value), || format!("stray {}", v.value))?,
        }
    }
    Ok(())
}

fn minkowski_identities() -> Check {
    let h = hyp_i(1, 1, 1);
    for c in [rat(1, 2), rat(1, 1), rat(7, 3)] {
        let scaled = hyp_i(0, 0, 1).scale(&c).map_err(|e| e.to_string())?;
        let sum = minkowski_sum(&h, &scaled).map_err(|e| e.to_string())?;
        let c1 = &c + rat(1, 1);
        let want = hyp(rat(1, 1), rat(1, 1), &c1 * &c1);
        ensure(to_canonical_json(&sum) == to_canonical_json(&want), || format!("c = {c}: {sum}"))?;
    }
    let sum = minkowski_sum(&h, &poly(&[(1, 0)])).map_err(|e| e.to_string())?;
    ensure(sum == hyp_i(2, 1, 1), || format!("shift gives {sum}"))
}

fn diagonal_sets() -> Check {
    for (m1, m2) in [(2, 3), (1, 1), (5, 2)] {
        let m = vec![rat(m1, 1), rat(m2, 1)];
        let set = builtin_jump_set(&BuiltinSet::Diagonal { m }, &rat(4, 1)).map_err(|e| e.to_string())?;
        let r = enumerate_jumping(&poly(&[(m1, 0), (0, m2)]), &rat(4, 1), 24).map_err(|e| e.to_string())?;
        ensure(r.is_certain(&ExactReal::from_int(4)), || format!("({m1},{m2}): window too small"))?;
        ensure(set.values == r.value_set(), || format!("({m1},{m2}): {:?} vs {:?}", set.values, r.value_set()))?;
    }
    Ok(())
}

fn random_body(rng: &mut ChaCha8Rng) -> NewtonBody {
    let q = |rng: &mut ChaCha8Rng| rat(rng.gen_range(0..=8), rng.gen_range(1..=2));
    if rng.gen_bool(0.5) {
        let s = if rng.gen_bool(0.5) {
            let r = rat(rng.gen_range(1..=6), rng.gen_range(1..=2));
            &r * &r
        } else {
            rat(rng.gen_range(1..=12), 1)
        };
        hyp(q(rng), q(rng), s)
    } else {
        loop {
            let n = rng.gen_range(1..=4);
            let pts: Vec<_> = (0..n).map(|_| (q(rng), q(rng))).collect();
            let b = NewtonBody::polyhedral(&pts).unwrap();
            if !(b.x0().is_zero() && b.y0().is_zero()) {
                return b;
            }
        }
    }
}

fn mtimes_property() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..200 {
        let body = random_body(&mut rng);
        let samples: Vec<LatticePoint> = (0..20)
            .map(|_| LatticePoint::new(rng.gen_range(1..=6), rng.gen_range(1..=6)))
            .collect();
        let r = mtimes_check(&body, &samples, 5).map_err(|e| format!("body {i} ({body}): {e}"))?;
        ensure(r.passed, || format!("body {i} ({body}): {:?}", r.failures))?;
    }
    Ok(())
}

fn gap_bound() -> Check {
    let bodies = [
        hyp_i(1, 1, 1),
        hyp_i(0, 0, 1),
        hyp_i(2, 1, 1),
        hyp_i(1, 2, 4),
        hyp_i(0, 0, 2),
        poly(&[(2, 0), (0, 3)]),
        poly(&[(5, 0), (0, 2)]),
        poly(&[(1, 2), (3, 1)]),
        poly(&[(0, 3), (1, 1), (4, 0)]),
        minkowski_sum(&hyp_i(1, 1, 1), &poly(&[(1, 0), (0, 3)])).unwrap(),
    ];
    for body in &bodies {
        let r = enumerate_jumping(body, &rat(4, 1), 40).map_err(|e| e.to_string())?;
        let l = lct(body).map_err(|e| e.to_string())?;
        let g = gap_check(&r, &l);
        ensure(g.passed && g.checked > 0, || format!("{body}: {:?}", g.violations))?;
    }
    Ok(())
}

fn saito_fixture() -> Check {
    let set = builtin_jump_set(&BuiltinSet::Saito, &rat(6, 1)).map_err(|e| e.to_string())?;
    let m = set_multiples_check(&set, 3);
    let alpha = ExactReal::ratio(9, 20);
    ensure(m.violations.contains(&(alpha.clone(), 3)), || format!("violations {:?}", m.violations))?;
    ensure(set.contains(&ExactReal::ratio(27, 20)) == Some(false), || "27/20 listed".into())?;
    let ev = period_falsify(&set, &rat(1, 1), 4).map_err(|e| e.to_string())?;
    ensure(ev.total_misses() == 0 && !ev.records.is_empty(), || format!("{} misses", ev.total_misses()))
}

fn koike_falsification() -> Check {
    let set = builtin_jump_set(&BuiltinSet::Koike { a: 2 }, &rat(60, 1)).map_err(|e| e.to_string())?;
    let alpha: ExactReal = "1 + 2*sqrt(2)".parse().unwrap();
    for c in [1, 2] {
        let ev = period_falsify(&set, &rat(c, 1), 8).map_err(|e| e.to_string())?;
        let rec = ev.record_for(&alpha).ok_or_else(|| format!("c = {c}: α not probed"))?;
        ensure(rec.misses == (1..=8).collect::<Vec<u64>>(), || format!("c = {c}: misses {:?}", rec.misses))?;
    }
    Ok(())
}

fn graded_crosscheck() -> Check {
    for base in [hyp_i(1, 1, 1), poly(&[(2, 0), (0, 3)])] {
        let g = GradedSystem::new(base.clone(), 16).map_err(|e| e.to_string())?;
        for c in [rat(1, 2), rat(1, 1), rat(3, 2), rat(2, 1)] {
            let r = asymptotic_multiplier_ideal(&g, &c, 64).map_err(|e| e.to_string())?;
            ensure(r.stabilized && r.crosscheck, || {
                format!("{base} at c = {c}: stabilized {}, crosscheck {}, {}", r.stabilized, r.crosscheck, r.ideal)
            })?;
        }
    }
    Ok(())
}

fn guanli_limits() -> Check {
    for (m, alpha) in [(2u32, 2.0), (3, 1.5)] {
        let (gx, gy) = guanli_gradient(m, 40, (0.0, -40.0));
        ensure((gx - alpha).abs() < 1e-6 && gy.abs() < 1e-6, || format!("M = {m}: ({gx}, {gy})"))?;
    }
    Ok(())
}

fn margin_cases(body: &NewtonBody, rng: &mut ChaCha8Rng, n: usize) -> Vec<(Rational, LatticePoint)> {
    let mut out = Vec::new();
    while out.len() < n {
        let c = rat(rng.gen_range(5..=120), 20);
        let a = LatticePoint::new(rng.gen_range(0..=5), rng.gen_range(0..=5));
        let g = body.gauge(LatticePoint::new(a.x + 1, a.y + 1)).unwrap().to_f64();
        let cf = c.numer().to_string().parse::<f64>().unwrap() / c.denom().to_string().parse::<f64>().unwrap();
        if (g - cf).abs() >= 0.05 * cf {
            out.push((c, a));
        }
    }
    out
}

fn oracle_agreement() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut total = 0;
    for body in [hyp_i(1, 1, 1), NewtonBody::diagonal(rat(2, 1), rat(3, 1)).unwrap()] {
        let cases = margin_cases(&body, &mut rng, 50);
        let r = agreement_report(&body, &cases, 0.05, 600.0).map_err(|e| e.to_string())?;
        let members = r.rows.iter().filter(|row| row.exact_member).count();
        ensure(members > 0 && members < r.total, || format!("{body}: one-sided sample"))?;
        ensure(r.mismatches.is_empty() && r.inconclusive == 0, || {
            let bad: Vec<_> = r.rows.iter().filter(|row| !row.agree).collect();
            format!("{body}: {bad:?}")
        })?;
        total += r.agreed;
    }
    ensure(total == 100, || format!("{total}/100"))
}

fn translations() -> Check {
    let a = translation_search(1, 1, 10);
    ensure(a == vec![(2, 6), (3, 3)], || format!("e = 1: {a:?}"))?;
    let b = translation_search(2, 1, 20);
    ensure(b == vec![(2, 10)], || format!("e = 2: {b:?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("ELSV set and clusters", elsv_values),
        ("cluster classifier", cluster_classifier),
        ("mixed jumping sets", mixed_sets),
        ("Minkowski identities", minkowski_identities),
        ("diagonal jump sets", diagonal_sets),
        ("m-multiples on 200 random bodies", mtimes_property),
        ("gap bound on ten bodies", gap_bound),
        ("Saito multiples and period", saito_fixture),
        ("Koike period falsification", koike_falsification),
        ("graded cross-check", graded_crosscheck),
        ("Guan-Li gradient limits", guanli_limits),
        ("oracle agreement", oracle_agreement),
        ("translation search", translations),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.1}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.1}s): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
