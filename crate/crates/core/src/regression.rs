//! The full regression matrix: eleven numbered criteria, each a list of
//! named checks with PASS, FAIL or SKIPPED status.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::exactla::{rat, verify_eigenmatrices, Rat, Surd};
use crate::extremal::{delsarte_clique_check, find_s1_space, greedy_totally_isotropic, hoffman_coclique_check};
use crate::formulas::{self, OrthoCase};
use crate::geometry::{FormSpec, LineClass, ProjPoint};
use crate::gf::SquareClass;
use crate::orthograph::analyze_ortho;
use crate::scheme::{
    analyze, build_scheme, rediscover, verify_axioms_with, BuildOptions, Mode, SchemeFamily, SchemeParams,
    SchemeReport, DEFAULT_MAX_POINTS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub number: u8,
    pub title: &'static str,
    pub status: Status,
    pub checks: Vec<CheckLine>,
}

impl CriterionResult {
    fn new(number: u8, checks: Vec<CheckLine>) -> CriterionResult {
        let status = if checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if checks.iter().all(|c| c.status == Status::Skipped) {
            Status::Skipped
        } else {
            Status::Pass
        };
        CriterionResult {
            number,
            title: TITLES[number as usize - 1],
            status,
            checks,
        }
    }
}

const TITLES: [&str; 11] = [
    "scheme axioms, odd q",
    "intersection tensor equals the closed form",
    "P and Q certified",
    "independent rediscovery of P",
    "plane counts",
    "even characteristic schemes",
    "Wilbrink graphs",
    "Hermitian scheme and its fission",
    "orthogonality graph spectra",
    "Delsarte cliques and Hoffman cocliques",
    "negative controls",
];

/// Groups of criteria selectable with `--only`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Schemes,
    Planes,
    Even,
    Wilbrink,
    Hermitian,
    Ortho,
    Extremal,
    Controls,
}

impl Scope {
    pub const ALL: [Scope; 8] = [
        Scope::Schemes,
        Scope::Planes,
        Scope::Even,
        Scope::Wilbrink,
        Scope::Hermitian,
        Scope::Ortho,
        Scope::Extremal,
        Scope::Controls,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scope::Schemes => "schemes",
            Scope::Planes => "planes",
            Scope::Even => "even",
            Scope::Wilbrink => "wilbrink",
            Scope::Hermitian => "hermitian",
            Scope::Ortho => "ortho",
            Scope::Extremal => "extremal",
            Scope::Controls => "controls",
        }
    }

    pub fn criteria(self) -> &'static [u8] {
        match self {
            Scope::Schemes => &[1, 2, 3, 4],
            Scope::Planes => &[5],
            Scope::Even => &[6],
            Scope::Wilbrink => &[7],
            Scope::Hermitian => &[8],
            Scope::Ortho => &[9],
            Scope::Extremal => &[10],
            Scope::Controls => &[11],
        }
    }
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Scope, String> {
        Scope::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown scope {s:?}"))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Instances with more points are skipped.
    pub max_points: usize,
    /// Empty means everything.
    pub only: Vec<Scope>,
}

impl Default for SuiteOptions {
    fn default() -> SuiteOptions {
        SuiteOptions {
            max_points: DEFAULT_MAX_POINTS,
            only: Vec::new(),
        }
    }
}

impl SuiteOptions {
    pub fn criteria(&self) -> Vec<u8> {
        if self.only.is_empty() {
            return (1..=11).collect();
        }
        let mut v: Vec<u8> = self.only.iter().flat_map(|s| s.criteria().iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionResult>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.status != Status::Fail)
    }
}

fn line(name: impl Into<String>, ok: bool, detail: impl Into<String>, elapsed: Duration) -> CheckLine {
    CheckLine {
        name: name.into(),
        status: if ok { Status::Pass } else { Status::Fail },
        detail: detail.into(),
        elapsed,
    }
}

fn skipped(name: impl Into<String>, points: u128, bound: usize) -> CheckLine {
    CheckLine {
        name: name.into(),
        status: Status::Skipped,
        detail: format!("{points} points exceed --max-points {bound}"),
        elapsed: Duration::ZERO,
    }
}

fn failed(name: impl Into<String>, err: impl fmt::Display) -> CheckLine {
    line(name, false, err.to_string(), Duration::ZERO)
}

fn eps_str(e: i8) -> &'static str {
    match e {
        1 => "+1",
        -1 => "-1",
        _ => "0",
    }
}

fn tag(p: &SchemeParams) -> String {
    match p.family {
        SchemeFamily::HermitianNU | SchemeFamily::HermitianFission => {
            format!("{} H({},{})", p.family, p.n, p.q * p.q)
        }
        SchemeFamily::ParabolicWilbrink | SchemeFamily::EvenCharEvenN if p.eps == 0 => {
            format!("{} ({},{})", p.family, p.n, p.q)
        }
        _ => format!("{} ({},{},{})", p.family, p.n, p.q, eps_str(p.eps)),
    }
}

const ODDQ_PARAMS: [(u32, u64, i8); 8] = [
    (3, 3, 1),
    (3, 3, -1),
    (3, 5, 1),
    (3, 5, -1),
    (3, 7, 1),
    (3, 7, -1),
    (5, 3, 1),
    (5, 3, -1),
];

type Analysis = (SchemeParams, Result<SchemeReport, String>, Duration);

/// Runs the selected criteria.
pub struct Suite {
    opts: SuiteOptions,
    oddq: OnceLock<Vec<Option<Analysis>>>,
}

impl Suite {
    pub fn new(opts: SuiteOptions) -> Suite {
        Suite {
            opts,
            oddq: OnceLock::new(),
        }
    }

    pub fn run(&self) -> SuiteReport {
        let start = Instant::now();
        let criteria = self.opts.criteria().into_iter().map(|k| self.criterion(k)).collect();
        SuiteReport {
            criteria,
            elapsed: start.elapsed(),
        }
    }

    pub fn criterion(&self, k: u8) -> CriterionResult {
        let checks = match k {
            1 => self.c1(),
            2 => self.c2(),
            3 => self.c3(),
            4 => self.c4(),
            5 => self.c5(),
            6 => self.c6(),
            7 => self.c7(),
            8 => self.c8(),
            9 => self.c9(),
            10 => self.c10(),
            11 => self.c11(),
            _ => panic!("criteria are numbered 1 to 11"),
        };
        CriterionResult::new(k, checks)
    }

    fn run_analysis(&self, p: SchemeParams) -> Option<Analysis> {
        if p.expected_points() > self.opts.max_points as u128 {
            return None;
        }
        let t = Instant::now();
        let opts = BuildOptions {
            max_points: Some(self.opts.max_points),
        };
        let r = analyze(p, &opts, Mode::Exhaustive).map_err(|e| e.to_string());
        Some((p, r, t.elapsed()))
    }

    fn oddq(&self) -> &[Option<Analysis>] {
        self.oddq.get_or_init(|| {
            ODDQ_PARAMS
                .iter()
                .map(|&(n, q, e)| {
                    let p = SchemeParams::new(SchemeFamily::OddQOddN5, n, q, e).expect("valid parameters");
                    self.run_analysis(p)
                })
                .collect()
        })
    }

    fn per_oddq(&self, f: impl Fn(&SchemeParams, &SchemeReport, Duration) -> CheckLine) -> Vec<CheckLine> {
        ODDQ_PARAMS
            .iter()
            .zip(self.oddq())
            .map(|(&(n, q, e), a)| {
                let p = SchemeParams::new(SchemeFamily::OddQOddN5, n, q, e).expect("valid parameters");
                match a {
                    None => skipped(tag(&p), p.expected_points(), self.opts.max_points),
                    Some((_, Err(err), _)) => failed(tag(&p), err),
                    Some((p, Ok(r), t)) => f(p, r, *t),
                }
            })
            .collect()
    }

    fn c1(&self) -> Vec<CheckLine> {
        self.per_oddq(|p, r, t| {
            let limit = Duration::from_secs(if p.n == 3 { 120 } else { 300 });
            let mut detail = format!("{} points, {} pairs, {:.1?}", r.points, r.axioms.pairs_checked, t);
            if let Some(w) = &r.axioms.witness {
                detail = format!("{detail}; witness {w:?}");
            }
            line(tag(p), r.axioms.passed() && t < limit, detail, t)
        })
    }

    fn c2(&self) -> Vec<CheckLine> {
        self.per_oddq(|p, r, t| {
            let diff = r.tensor_diff.as_ref();
            let ok = r.tensor_checks.passed() && diff.is_some_and(|d| d.is_empty());
            let detail = match diff {
                Some(d) if !d.is_empty() => format!("{} mismatches, first {:?}", d.len(), d[0]),
                Some(_) => format!("{} classes, relations {}", r.labels.len() - 1, r.labels.join(" ")),
                None => "no tensor".into(),
            };
            line(tag(p), ok, detail, t)
        })
    }

    fn c3(&self) -> Vec<CheckLine> {
        self.per_oddq(|p, r, t| {
            let m: Vec<String> = r.closed_form.m_vec.iter().map(|x| x.to_string()).collect();
            let detail = match r.certification.first_failure() {
                Some(c) => format!("{}: {}", c.name, c.detail.clone().unwrap_or_default()),
                None => format!("{} = {}", m.join("+"), r.closed_form.points()),
            };
            line(tag(p), r.certification.passed(), detail, t)
        })
    }

    fn c4(&self) -> Vec<CheckLine> {
        ODDQ_PARAMS
            .iter()
            .zip(self.oddq())
            .filter(|(&(n, q, _), _)| (n, q) == (3, 5))
            .map(|(&(n, q, e), a)| {
                let p = SchemeParams::new(SchemeFamily::OddQOddN5, n, q, e).expect("valid parameters");
                let t = Instant::now();
                match a {
                    None => skipped(tag(&p), p.expected_points(), self.opts.max_points),
                    Some((_, Err(err), _)) => failed(tag(&p), err),
                    Some((_, Ok(r), _)) => match r.tensor() {
                        None => failed(tag(&p), "no tensor"),
                        Some(tensor) => match rediscover(tensor, &r.closed_form, p.seed()) {
                            Ok(perm) => line(
                                tag(&p),
                                true,
                                format!("discovered rows match the closed-form rows via {perm:?}"),
                                t.elapsed(),
                            ),
                            Err(err) => failed(tag(&p), err),
                        },
                    },
                }
            })
            .collect()
    }

    fn c5(&self) -> Vec<CheckLine> {
        let mut out = Vec::new();
        for (n, q) in [(3u32, 5u64), (5, 3)] {
            for e in [1i8, -1] {
                let name = format!("Q^{}({n},{q})", if e > 0 { "+" } else { "-" });
                let t = Instant::now();
                match plane_table(n, q, e) {
                    Ok((ok, detail)) => out.push(line(name, ok, detail, t.elapsed())),
                    Err(err) => out.push(failed(name, err)),
                }
            }
        }
        out
    }

    fn c6(&self) -> Vec<CheckLine> {
        [(3, 2, 1), (3, 2, -1), (3, 4, 1), (3, 4, -1), (5, 2, -1)]
            .into_iter()
            .map(|(n, q, e)| {
                let p = SchemeParams::new(SchemeFamily::EvenCharOddN, n, q, e).expect("valid parameters");
                self.scheme_line(p, |r| {
                    let dropped = if r.dropped.is_empty() {
                        String::new()
                    } else {
                        format!(", dropped {}", r.dropped.join(", "))
                    };
                    (
                        true,
                        format!("{} points, relations {}{dropped}", r.points, r.labels.join(" ")),
                    )
                })
            })
            .collect()
    }

    fn scheme_line(&self, p: SchemeParams, extra: impl Fn(&SchemeReport) -> (bool, String)) -> CheckLine {
        match self.run_analysis(p) {
            None => skipped(tag(&p), p.expected_points(), self.opts.max_points),
            Some((_, Err(e), _)) => failed(tag(&p), e),
            Some((p, Ok(r), t)) => {
                let (ok, detail) = extra(&r);
                let detail = match (r.axioms.report.first_failure(), r.certification.first_failure()) {
                    (Some(c), _) | (None, Some(c)) => {
                        format!("{}: {}", c.name, c.detail.clone().unwrap_or_default())
                    }
                    _ => detail,
                };
                line(tag(&p), r.passed() && ok, detail, t)
            }
        }
    }

    fn c7(&self) -> Vec<CheckLine> {
        [(4, 3, 1), (4, 3, -1), (4, 5, 1), (4, 5, -1)]
            .into_iter()
            .map(|(n, q, e)| {
                let p = SchemeParams::new(SchemeFamily::ParabolicWilbrink, n, q, e).expect("valid parameters");
                let name = format!("{} ({n},{q},{})", p.family, eps_str(e));
                let mut l = self.scheme_line(p, |r| srg_check(r, n, q, e));
                l.name = name;
                l
            })
            .collect()
    }

    fn c8(&self) -> Vec<CheckLine> {
        let mut out = Vec::new();
        for (n, q) in [(2, 3), (3, 3), (2, 5)] {
            let p = SchemeParams::new(SchemeFamily::HermitianNU, n, q, 0).expect("valid parameters");
            out.push(self.scheme_line(p, |r| {
                (true, format!("{} points, relations {}", r.points, r.labels.join(" ")))
            }));
        }
        for (n, q) in [(2, 3), (3, 3), (2, 5), (2, 2), (3, 2)] {
            let p = SchemeParams::new(SchemeFamily::HermitianFission, n, q, 0).expect("valid parameters");
            let want = if q == 2 { 3 } else { 4 };
            out.push(self.scheme_line(p, |r| {
                // counted with the identity relation
                let relations = r.labels.len();
                (
                    relations == want,
                    format!(
                        "{} points, relations {} (expected {want})",
                        r.points,
                        r.labels.join(" ")
                    ),
                )
            }));
        }
        out
    }

    fn c9(&self) -> Vec<CheckLine> {
        let mut cases = vec![(OrthoCase::Hermitian, 2, 3, 0), (OrthoCase::Hermitian, 3, 3, 0)];
        for (n, q) in [(3, 3), (3, 5), (5, 3)] {
            for e in [1, -1] {
                cases.push((OrthoCase::EllHyp, n, q, e));
            }
        }
        cases.push((OrthoCase::Parabolic, 4, 3, 0));
        cases.push((OrthoCase::Parabolic, 4, 5, 0));
        cases
            .into_iter()
            .map(|(case, n, q, e)| {
                let name = match case {
                    OrthoCase::Hermitian => format!("hermitian H({n},{})", q * q),
                    OrthoCase::EllHyp => format!("ellhyp Q^{}({n},{q})", if e > 0 { "+" } else { "-" }),
                    OrthoCase::Parabolic => format!("parabolic Q({n},{q})"),
                };
                let points = formulas::ortho_points(case, n, q, e)
                    .map(|r| r.to_integer().try_into().unwrap_or(u128::MAX))
                    .unwrap_or(0);
                if points > self.opts.max_points as u128 {
                    return skipped(name, points, self.opts.max_points);
                }
                let t = Instant::now();
                match analyze_ortho(case, n, q, e, Some(self.opts.max_points)) {
                    Err(err) => failed(name, err),
                    Ok(r) => {
                        let t = t.elapsed();
                        let anchor = spectrum_anchor(case, n, q).is_none_or(|a| same_spectrum(&a, &r.claims));
                        let spec: Vec<String> = r.claims.iter().map(|(v, m)| format!("{v}:{m}")).collect();
                        let detail = match r.checks.first_failure() {
                            Some(c) => format!("{}: {}", c.name, c.detail.clone().unwrap_or_default()),
                            None if !anchor => format!("spectrum {{{}}} differs from the expected one", spec.join(", ")),
                            None => format!(
                                "{} points, {{{}}}, triangle trace {}, {:.1?}",
                                r.points,
                                spec.join(", "),
                                r.triangle_trace,
                                t
                            ),
                        };
                        line(name, r.passed() && anchor && t < Duration::from_secs(600), detail, t)
                    }
                }
            })
            .collect()
    }

    fn c10(&self) -> Vec<CheckLine> {
        let mut out = Vec::new();
        for (n, q, e) in [(3, 5, 1), (3, 5, -1), (5, 3, 1), (5, 3, -1)] {
            let p = SchemeParams::new(SchemeFamily::OddQOddN5, n, q, e).expect("valid parameters");
            let tag = format!("({n},{q},{})", eps_str(e));
            if p.expected_points() > self.opts.max_points as u128 {
                out.push(skipped(
                    format!("clique {tag}"),
                    p.expected_points(),
                    self.opts.max_points,
                ));
                out.push(skipped(
                    format!("coclique {tag}"),
                    p.expected_points(),
                    self.opts.max_points,
                ));
                continue;
            }
            let t = Instant::now();
            let inst = match build_scheme(p, &BuildOptions::default()) {
                Ok(i) => i,
                Err(err) => {
                    out.push(failed(format!("clique {tag}"), &err));
                    out.push(failed(format!("coclique {tag}"), err));
                    continue;
                }
            };
            let clique = find_s1_space(inst.form()).and_then(|rho| delsarte_clique_check(&inst, &rho));
            out.push(match clique {
                Err(err) => failed(format!("clique {tag}"), err),
                Ok(r) => line(format!("clique {tag}"), r.passed(), bound_detail(&r, "τ"), t.elapsed()),
            });
            let t = Instant::now();
            let coclique = greedy_totally_isotropic(inst.form(), (n as i64 - 3) / 2)
                .and_then(|pi| hoffman_coclique_check(&inst, &pi));
            out.push(match coclique {
                Err(err) => failed(format!("coclique {tag}"), err),
                Ok(r) => line(
                    format!("coclique {tag}"),
                    r.passed(),
                    bound_detail(&r, "λmin"),
                    t.elapsed(),
                ),
            });
        }
        out
    }

    fn c11(&self) -> Vec<CheckLine> {
        let p = SchemeParams::new(SchemeFamily::OddQOddN5, 3, 3, 1).expect("valid parameters");
        let t = Instant::now();
        let inst = match build_scheme(p, &BuildOptions::default()) {
            Ok(i) => i,
            Err(e) => return vec![failed("perturbed relation", &e), failed("perturbed P", e)],
        };
        let d = inst.labels().len() as u8;
        let swapped = |x: usize, y: usize| {
            let r = inst.relation(x, y);
            if (x.min(y), x.max(y)) == (0, 1) {
                r % (d - 1) + 1
            } else {
                r
            }
        };
        let axioms = verify_axioms_with(inst.len(), inst.labels().len(), swapped, Mode::Exhaustive, p.seed());
        let first = line(
            "perturbed relation function",
            !axioms.passed() && axioms.witness.is_some(),
            match &axioms.witness {
                Some(w) => format!("rejected, witness {w:?}"),
                None => "accepted".into(),
            },
            t.elapsed(),
        );

        let t = Instant::now();
        let second = match (inst.verify_axioms(Mode::Exhaustive, p.seed()).tensor, p.closed_form()) {
            (Some(tensor), Ok(mut closed)) => {
                let entry = closed.p.get(1, 1) + rat(1);
                closed.p.set(1, 1, entry);
                let b = tensor.intersection_matrices();
                let n: Vec<Rat> = tensor.n.iter().map(|&x| rat(x as i64)).collect();
                let total: Rat = n.iter().cloned().sum();
                let r = verify_eigenmatrices(&b, &closed.p, &closed.q, &n, &closed.m_vec, &total);
                let b_failed = r.failures().any(|c| c.name.starts_with("(b)"));
                line(
                    "perturbed P entry",
                    b_failed,
                    if b_failed {
                        "identity (b) QP = PQ = N I rejected".to_string()
                    } else {
                        "identity (b) accepted".into()
                    },
                    t.elapsed(),
                )
            }
            (None, _) => failed("perturbed P entry", "no tensor"),
            (_, Err(e)) => failed("perturbed P entry", e),
        };
        vec![first, second]
    }
}

fn bound_detail(r: &crate::extremal::RatioBoundReport, eig: &str) -> String {
    let bound = r.bound.as_ref().map_or_else(|| "undefined".to_string(), Rat::to_string);
    match r.checks.failures().find(|c| c.name != "size meets the bound") {
        Some(c) => format!(
            "size {}, bound {bound}, {eig} = {}; {}: {}",
            r.achieved,
            r.eigenvalue,
            c.name,
            c.detail.clone().unwrap_or_default()
        ),
        None => format!("size {}, bound {bound}, {eig} = {}", r.achieved, r.eigenvalue),
    }
}

fn srg_check(r: &SchemeReport, n: u32, q: u64, e: i8) -> (bool, String) {
    let Ok(srg) = formulas::wilbrink_srg(n, q, e) else {
        return (false, "no closed form".into());
    };
    let Some(t) = r.tensor() else {
        return (false, "no tensor".into());
    };
    let Some(i) = t.labels.iter().position(|l| l == "R1") else {
        return (false, "R1 missing".into());
    };
    let j = 3 - i;
    let found = (r.points as i64, t.n[i] as i64, t.p[i][i][i] as i64, t.p[j][i][i] as i64);
    let params_ok = found == (srg.v, srg.k, srg.lambda, srg.mu);
    let c = &r.closed_form;
    let mut spectrum: Vec<(i64, i64)> = (0..c.eigenspaces.len())
        .map(|row| (as_int(c.p.get(row, i)), as_int(&c.m_vec[row])))
        .collect();
    let mut expected = srg.spectrum.clone();
    spectrum.sort_unstable();
    expected.sort_unstable();
    let detail = format!(
        "SRG({},{},{},{}), spectrum {}",
        found.0,
        found.1,
        found.2,
        found.3,
        srg.spectrum
            .iter()
            .map(|(v, m)| format!("{v}:{m}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    (params_ok && spectrum == expected, detail)
}

fn as_int(r: &Rat) -> i64 {
    i64::try_from(r.to_integer()).unwrap_or(i64::MAX)
}

/// Spectra stated numerically for two instances.
fn spectrum_anchor(case: OrthoCase, n: u32, q: u64) -> Option<Vec<(Surd, u64)>> {
    match (case, n, q) {
        (OrthoCase::Hermitian, 2, 3) => Some(
            [(6, 1), (3, 21), (-3, 14), (-1, 27)]
                .iter()
                .map(|&(v, m)| (Surd::int(v), m))
                .collect(),
        ),
        (OrthoCase::Parabolic, 4, 3) => Some(vec![
            (Surd::int(27), 1),
            (Surd::new(rat(0), rat(3), 3), 20),
            (Surd::new(rat(0), rat(-3), 3), 20),
            (Surd::int(3), 15),
            (Surd::int(-3), 24),
            (Surd::int(0), 1),
        ]),
        _ => None,
    }
}

fn same_spectrum(a: &[(Surd, u64)], b: &[(Surd, u64)]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.contains(x))
}

/// Plane profiles of one line of each type against the closed-form table.
fn plane_table(n: u32, q: u64, e: i8) -> Result<(bool, String), String> {
    let form = FormSpec::quadric(n as usize, q, e).map_err(|x| x.to_string())?;
    let table = formulas::plane_counts(n, q, e).map_err(|x| x.to_string())?;
    let f = form.field().clone();
    let points = form.anisotropic_points().map_err(|x| x.to_string())?;
    let of_type = |c: SquareClass| points.iter().find(|p| f.square_class(form.kappa(p.coords())) == c);
    let partner = |x: &ProjPoint, want: LineClass| {
        points
            .iter()
            .find(|y| *y != x && form.classify_line(x, y).ok() == Some(want))
            .cloned()
    };
    let sq = of_type(SquareClass::Square).ok_or("no square-type point")?;
    let ns = of_type(SquareClass::NonSquare).ok_or("no nonsquare-type point")?;
    let lines = [
        (sq, LineClass::Tangent, "tangent (square type)"),
        (ns, LineClass::Tangent, "tangent (nonsquare type)"),
        (sq, LineClass::Secant, "secant"),
        (sq, LineClass::Passant, "passant"),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (col, (x, class, name)) in lines.into_iter().enumerate() {
        let y = partner(x, class).ok_or_else(|| format!("no {name} line"))?;
        let found = form.plane_profile(x, &y).map_err(|e| e.to_string())?;
        let want: Vec<Rat> = table.iter().map(|row| row[col].clone()).collect();
        let same = found.iter().zip(&want).all(|(a, b)| rat(*a as i64) == *b);
        ok &= same;
        let shown: Vec<String> = found.iter().map(u64::to_string).collect();
        parts.push(if same {
            format!("{name} [{}]", shown.join(" "))
        } else {
            let w: Vec<String> = want.iter().map(Rat::to_string).collect();
            format!("{name} [{}] expected [{}]", shown.join(" "), w.join(" "))
        });
    }
    Ok((ok, parts.join("; ")))
}

/// Runs the selected criteria with the given options.
pub fn run_suite(opts: SuiteOptions) -> SuiteReport {
    Suite::new(opts).run()
}
