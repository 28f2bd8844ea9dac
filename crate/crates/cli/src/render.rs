use std::fmt::Write;
use std::time::Duration;

use polarscheme::exactla::{CertReport, RatMatrix};
use polarscheme::orthograph::OrthoReport;
use polarscheme::regression::{CriterionResult, Status};
use polarscheme::scheme::SchemeReport;
use serde::Serialize;

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn eps(e: i8) -> String {
    if e > 0 {
        format!("+{e}")
    } else {
        e.to_string()
    }
}

fn failures(out: &mut String, r: &CertReport) {
    for c in r.failures() {
        let _ = writeln!(out, "  FAIL {}: {}", c.name, c.detail.as_deref().unwrap_or(""));
    }
}

fn matrix(out: &mut String, name: &str, rows: &[String], cols: &[String], m: &RatMatrix) {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_string()).collect())
        .collect();
    let width = cells
        .iter()
        .flatten()
        .chain(cols)
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(1);
    let lead = rows
        .iter()
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(1)
        .max(name.chars().count());
    let _ = write!(out, "{name:<lead$} |");
    for c in cols {
        let _ = write!(out, " {c:>width$}");
    }
    out.push('\n');
    for (label, row) in rows.iter().zip(&cells) {
        let _ = write!(out, "{label:<lead$} |");
        for c in row {
            let _ = write!(out, " {c:>width$}");
        }
        out.push('\n');
    }
}

pub fn scheme_text(r: &SchemeReport) -> String {
    let mut out = String::new();
    let p = &r.params;
    let _ = writeln!(out, "scheme {} n={} q={} eps={}", p.family, p.n, p.q, eps(p.eps));
    let _ = writeln!(out, "points         {}", r.points);
    let _ = writeln!(out, "relations      {}", r.labels.join(" "));
    if !r.dropped.is_empty() {
        let _ = writeln!(out, "dropped        {}", r.dropped.join(", "));
    }
    let _ = writeln!(
        out,
        "axioms         {}  {}, {} pairs",
        status(r.axioms.passed()),
        format!("{:?}", r.axioms.mode).to_lowercase(),
        r.axioms.pairs_checked
    );
    failures(&mut out, &r.axioms.report);
    if let Some(w) = &r.axioms.witness {
        let _ = writeln!(out, "  witness ({}, {}): {}", w.x, w.y, w.reason);
    }
    if let Some(t) = r.tensor() {
        let n: Vec<String> = t.n.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "valencies      {}", n.join(" "));
    }
    match &r.tensor_diff {
        Some(d) => {
            let _ = writeln!(
                out,
                "tensor         {}  {} mismatches with the closed form",
                status(d.is_empty()),
                d.len()
            );
            for m in d.iter().take(10) {
                let _ = writeln!(
                    out,
                    "  p^{}_{{{},{}}} counted {}, formula {}",
                    m.k, m.i, m.j, m.counted, m.formula
                );
            }
        }
        None => {
            let _ = writeln!(
                out,
                "tensor         {}  invariants only",
                status(r.tensor_checks.passed())
            );
        }
    }
    failures(&mut out, &r.tensor_checks);
    let _ = writeln!(out, "certification  {}", status(r.certification.passed()));
    failures(&mut out, &r.certification);
    let c = &r.closed_form;
    out.push('\n');
    matrix(&mut out, "P", &c.eigenspaces, &c.relations, &c.p);
    out.push('\n');
    matrix(&mut out, "Q", &c.relations, &c.eigenspaces, &c.q);
    out.push('\n');
    let _ = writeln!(out, "result         {}", status(r.passed()));
    out
}

fn csv_rows(rows: Vec<[String; 5]>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["section", "a", "b", "c", "value"]).expect("in memory");
    for row in rows {
        w.write_record(&row).expect("in memory");
    }
    String::from_utf8(w.into_inner().expect("in memory")).expect("utf-8")
}

fn check_rows(rows: &mut Vec<[String; 5]>, prefix: &str, r: &CertReport) {
    for c in &r.checks {
        rows.push([
            "check".into(),
            prefix.into(),
            c.name.clone(),
            status(c.passed).into(),
            c.detail.clone().unwrap_or_default(),
        ]);
    }
}

fn matrix_rows(rows: &mut Vec<[String; 5]>, name: &str, r: &[String], c: &[String], m: &RatMatrix) {
    for (i, ri) in r.iter().enumerate() {
        for (j, cj) in c.iter().enumerate() {
            rows.push([
                name.into(),
                ri.clone(),
                cj.clone(),
                String::new(),
                m.get(i, j).to_string(),
            ]);
        }
    }
}

pub fn scheme_csv(r: &SchemeReport) -> String {
    let mut rows = Vec::new();
    if let Some(t) = r.tensor() {
        for (i, l) in t.labels.iter().enumerate() {
            rows.push([
                "valency".into(),
                l.clone(),
                String::new(),
                String::new(),
                t.n[i].to_string(),
            ]);
        }
        for (k, lk) in t.labels.iter().enumerate() {
            for (i, li) in t.labels.iter().enumerate() {
                for (j, lj) in t.labels.iter().enumerate() {
                    rows.push([
                        "tensor".into(),
                        lk.clone(),
                        li.clone(),
                        lj.clone(),
                        t.p[k][i][j].to_string(),
                    ]);
                }
            }
        }
    }
    let c = &r.closed_form;
    matrix_rows(&mut rows, "P", &c.eigenspaces, &c.relations, &c.p);
    matrix_rows(&mut rows, "Q", &c.relations, &c.eigenspaces, &c.q);
    check_rows(&mut rows, "axioms", &r.axioms.report);
    check_rows(&mut rows, "tensor", &r.tensor_checks);
    if let Some(d) = &r.tensor_diff {
        rows.push([
            "check".into(),
            "tensor".into(),
            "equals the closed form".into(),
            status(d.is_empty()).into(),
            format!("{} mismatches", d.len()),
        ]);
    }
    check_rows(&mut rows, "certification", &r.certification);
    rows.push([
        "result".into(),
        String::new(),
        String::new(),
        String::new(),
        status(r.passed()).into(),
    ]);
    csv_rows(rows)
}

fn case_name(r: &OrthoReport) -> String {
    use polarscheme::formulas::OrthoCase;
    match r.case {
        OrthoCase::Hermitian => format!("hermitian H({},{})", r.n, r.q * r.q),
        OrthoCase::EllHyp => format!("ellhyp Q^{}({},{})", if r.eps > 0 { "+" } else { "-" }, r.n, r.q),
        OrthoCase::Parabolic => format!("parabolic Q({},{})", r.n, r.q),
    }
}

pub fn ortho_text(r: &OrthoReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "orthogonality graph {}", case_name(r));
    let _ = writeln!(out, "points         {}", r.points);
    let degrees: Vec<String> = r.degrees.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "degree         {}", degrees.join(" / "));
    let _ = writeln!(out, "triangle trace {}", r.triangle_trace);
    let spec: Vec<String> = r.claims.iter().map(|(v, m)| format!("{v}:{m}")).collect();
    let _ = writeln!(out, "spectrum       {{{}}}", spec.join(", "));
    if !r.absent.is_empty() {
        let absent: Vec<String> = r.absent.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "absent         {}", absent.join(", "));
    }
    for c in &r.checks.checks {
        let _ = writeln!(out, "  {} {}", status(c.passed), c.name);
    }
    if let Some(s) = &r.spectrum {
        for c in &s.report.checks {
            let _ = writeln!(out, "  {} {}", status(c.passed), c.name);
        }
    }
    failures(&mut out, &r.checks);
    let _ = writeln!(out, "result         {}", status(r.passed()));
    out
}

pub fn ortho_csv(r: &OrthoReport) -> String {
    let mut rows = Vec::new();
    for (v, m) in &r.claims {
        rows.push([
            "eigenvalue".into(),
            v.a.to_string(),
            v.b.to_string(),
            v.rad.to_string(),
            m.to_string(),
        ]);
    }
    for v in &r.absent {
        rows.push([
            "absent".into(),
            v.a.to_string(),
            v.b.to_string(),
            v.rad.to_string(),
            "0".into(),
        ]);
    }
    rows.push([
        "triangle_trace".into(),
        String::new(),
        String::new(),
        String::new(),
        r.triangle_trace.clone(),
    ]);
    check_rows(&mut rows, "graph", &r.checks);
    if let Some(s) = &r.spectrum {
        check_rows(&mut rows, "spectrum", &s.report);
    }
    rows.push([
        "result".into(),
        String::new(),
        String::new(),
        String::new(),
        status(r.passed()).into(),
    ]);
    csv_rows(rows)
}

pub fn criterion_text(c: &CriterionResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "criterion {:>2}  {}", c.number, c.title);
    for x in &c.checks {
        let _ = writeln!(out, "  {:<7} {:<28} {}", x.status.to_string(), x.name, x.detail);
    }
    let _ = writeln!(out, "  => {}", c.status);
    out
}

pub fn summary_text(results: &[CriterionResult], elapsed: Duration) -> String {
    let mut out = String::from("\n");
    for c in results {
        let _ = writeln!(out, "{:>2} {:<7} {}", c.number, c.status.to_string(), c.title);
    }
    let count = |s: Status| results.iter().filter(|c| c.status == s).count();
    let _ = writeln!(
        out,
        "{} passed, {} failed, {} skipped in {:.1?}",
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Skipped),
        elapsed
    );
    out
}
