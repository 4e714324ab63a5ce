use njump_core::graded::{asymptotic_multiplier_ideal, GradedSystem};
use njump_core::jumping::{
    builtin_jump_set, cluster_points, enumerate_jumping, enumerate_mixed, lct, period_falsify, translation_search,
    BuiltinSet, ResidualKind, ValueKind,
};
use njump_core::oracle::agreement_report;
use njump_core::spec::to_canonical_json;
use njump_core::{
    BodyError, BoundaryPiece, ExactReal, GradedError, JumpError, JumpReport, NewtonBody, OracleError, Point,
};
use thiserror::Error;

use crate::input::{load_body, load_cases};
use crate::output::{approx, yes_no, Table};
use crate::{Cli, Command, Format};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, String),
    #[error("{file}: at `{field}`: {reason}")]
    Json { file: String, field: String, reason: String },
    #[error("{0}: {1}")]
    Body(String, BodyError),
    #[error(transparent)]
    Jump(#[from] JumpError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Other(#[from] BodyError),
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    let f = cli.format;
    match &cli.command {
        Command::Body { input, normalize } => {
            let body = load_body(input)?;
            Ok(if *normalize { format!("{}\n", to_canonical_json(&body)) } else { body_output(&body, f)? })
        }
        Command::Mi { body, c } => {
            let ideal = njump_core::ideal::multiplier_ideal(&load_body(body)?, c)?;
            Ok(match f {
                Format::Table => format!("{ideal}\n"),
                Format::Csv => {
                    let mut t = Table::new(&["x", "y"]);
                    for g in ideal.gens() {
                        t.push(vec![g.x.to_string(), g.y.to_string()]);
                    }
                    t.render(f)
                }
            })
        }
        Command::Jump { body, bound, window } => {
            let report = enumerate_jumping(&load_body(body)?, bound, *window)?;
            Ok(report_output(&report, f))
        }
        Command::Mixed { phi, psi, bound, window } => {
            let report = enumerate_mixed(&load_body(phi)?, &load_body(psi)?, bound, *window)?;
            Ok(report_output(&report, f))
        }
        Command::Clusters { body, bound } => {
            if *bound <= njump_core::rat(0, 1) {
                return Err(JumpError::NonPositiveBound.into());
            }
            let clusters = cluster_points(&load_body(body)?, bound);
            Ok(values_output(&clusters, f))
        }
        Command::Lct { body } => Ok(values_output(&[lct(&load_body(body)?)?], f)),
        Command::Graded { body, c, qmax, xcap } => {
            let g = GradedSystem::new(load_body(body)?, *xcap)?;
            let r = asymptotic_multiplier_ideal(&g, c, *qmax)?;
            let mut t = Table::new(&["q", "generators", "contained_in_next", "equals_howald"]);
            for s in &r.steps {
                t.push(vec![
                    s.q.to_string(),
                    s.ideal.monomials().join(" "),
                    s.contained_in_next.map_or("-".into(), yes_no),
                    yes_no(s.equals_howald),
                ]);
            }
            let mut out = t.render(f);
            if f == Format::Table {
                out.push_str(&format!(
                    "\nideal: {}\nstabilized: {} (from q = {})\ncrosscheck: {}\n",
                    r.ideal,
                    yes_no(r.stabilized),
                    r.q_used,
                    yes_no(r.crosscheck)
                ));
            }
            Ok(out)
        }
        Command::Oracle { body, cases, margin, tmax } => {
            let b = load_body(body)?;
            let cases = load_cases(cases)?;
            let r = agreement_report(&b, &cases, *margin, *tmax)?;
            let mut t = Table::new(&["case", "c", "a", "exact_member", "probe_verdict", "slope", "agree"]);
            for row in &r.rows {
                t.push(vec![
                    row.id.to_string(),
                    row.c.clone(),
                    row.a.to_string(),
                    yes_no(row.exact_member),
                    format!("{:?}", row.verdict).to_lowercase(),
                    format!("{:.6}", row.slope),
                    yes_no(row.agree),
                ]);
            }
            let mut out = t.render(f);
            if f == Format::Table {
                out.push_str(&format!("\nagreement: {}/{}\n", r.agreed, r.total));
            }
            Ok(out)
        }
        Command::Period { set, a, m, bound, period, probes } => {
            let set = BuiltinSet::from_label(set.as_str(), *a, m)?;
            let js = builtin_jump_set(&set, bound)?;
            let ev = period_falsify(&js, period, *probes)?;
            let mut t = Table::new(&["alpha", "approx", "misses", "missed_m"]);
            for r in &ev.records {
                let missed: Vec<String> = r.misses.iter().map(u64::to_string).collect();
                t.push(vec![r.alpha.to_string(), approx(&r.alpha), r.misses.len().to_string(), missed.join(" ")]);
            }
            let mut out = t.render(f);
            if f == Format::Table {
                let best = ev.best_record();
                out.push_str(&format!(
                    "\nbest alpha: {} ({}/{} translates missing)\nfalsified: {}\n",
                    best.alpha,
                    best.misses.len(),
                    ev.probes,
                    yes_no(ev.falsified())
                ));
            }
            Ok(out)
        }
        Command::Search { e, c, n } => {
            let mut t = Table::new(&["r", "s"]);
            for (r, s) in translation_search(*e, *c, *n) {
                t.push(vec![r.to_string(), s.to_string()]);
            }
            Ok(t.render(f))
        }
    }
}

fn values_output(values: &[ExactReal], f: Format) -> String {
    match f {
        Format::Table => {
            let parts: Vec<String> = values.iter().map(ExactReal::to_string).collect();
            format!("{}\n", parts.join(", "))
        }
        Format::Csv => {
            let mut t = Table::new(&["value", "approx"]);
            for v in values {
                t.push(vec![v.to_string(), approx(v)]);
            }
            t.render(f)
        }
    }
}

fn report_output(r: &JumpReport, f: Format) -> String {
    match f {
        Format::Csv => {
            let mut t = Table::new(&["record", "value", "approx", "witness", "kind", "lo", "hi"]);
            for v in &r.values {
                let kind = match (v.kind, v.exact) {
                    (ValueKind::Listed, true) => "listed",
                    (ValueKind::Listed, false) => "approximate",
                    (ValueKind::Cluster, _) => "cluster",
                };
                t.push(vec![
                    "value".into(),
                    v.value.to_string(),
                    approx(&v.value),
                    v.witness.map(|w| w.to_string()).unwrap_or_default(),
                    kind.into(),
                    String::new(),
                    String::new(),
                ]);
            }
            for res in &r.residuals {
                t.push(vec![
                    "residual".into(),
                    String::new(),
                    String::new(),
                    String::new(),
                    residual_kind(res.kind).into(),
                    res.lo.to_string(),
                    res.hi.to_string(),
                ]);
            }
            t.push(vec![
                "complete_below".into(),
                r.complete_below.to_string(),
                approx(&r.complete_below),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ]);
            t.render(f)
        }
        Format::Table => {
            let mut t = Table::new(&["value", "approx", "witness", "kind"]);
            for v in &r.values {
                let mut kind = match v.kind {
                    ValueKind::Listed => "listed".to_string(),
                    ValueKind::Cluster => "cluster".to_string(),
                };
                if !v.exact {
                    kind.push_str(" (approximate)");
                }
                t.push(vec![
                    v.value.to_string(),
                    approx(&v.value),
                    v.witness.map(|w| w.to_string()).unwrap_or_else(|| "-".into()),
                    kind,
                ]);
            }
            let mut out = t.render(f);
            let mut res = Table::new(&["residual", "lo", "hi"]);
            for x in &r.residuals {
                let (open, close) = match x.kind {
                    ResidualKind::Cluster => ("(", ")"),
                    ResidualKind::Window => ("(", "]"),
                };
                res.push(vec![residual_kind(x.kind).into(), format!("{open}{}", x.lo), format!("{}{close}", x.hi)]);
            }
            out.push('\n');
            if res.is_empty() {
                out.push_str("residuals: none\n");
            } else {
                out.push_str(&res.render(f));
            }
            out.push_str(&format!("complete below: {}\n", r.complete_below));
            out
        }
    }
}

fn residual_kind(k: ResidualKind) -> &'static str {
    match k {
        ResidualKind::Cluster => "cluster",
        ResidualKind::Window => "window",
    }
}

fn point_cells(p: Option<Point>) -> [String; 2] {
    match p {
        Some(p) => [p.x.to_string(), p.y.to_string()],
        None => [String::new(), String::new()],
    }
}

fn body_output(body: &NewtonBody, f: Format) -> Result<String, CliError> {
    match f {
        Format::Table => Ok(format!("{body}\n")),
        Format::Csv => {
            let mut t = Table::new(&["kind", "x1", "y1", "x2", "y2", "a", "b", "s"]);
            for piece in body.pieces() {
                let row = match piece {
                    BoundaryPiece::Segment { start, end } => {
                        let [x1, y1] = point_cells(Some(start.clone()));
                        let [x2, y2] = point_cells(Some(end.clone()));
                        vec!["segment".into(), x1, y1, x2, y2, String::new(), String::new(), String::new()]
                    }
                    BoundaryPiece::Arc(arc) => {
                        let [x1, y1] = point_cells(arc.start()?);
                        let [x2, y2] = point_cells(arc.end()?);
                        vec!["arc".into(), x1, y1, x2, y2, arc.a.to_string(), arc.b.to_string(), arc.s()?.to_string()]
                    }
                };
                t.push(row);
            }
            Ok(t.render(f))
        }
    }
}
