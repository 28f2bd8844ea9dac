use std::time::Instant;

use polarscheme::exactla::Surd;
use polarscheme::formulas::OrthoCase;
use polarscheme::orthograph::analyze_ortho;

fn run(case: OrthoCase, n: u32, q: u64, e: i8) -> polarscheme::orthograph::OrthoReport {
    let t = Instant::now();
    let r = analyze_ortho(case, n, q, e, None).unwrap();
    eprintln!("{case:?} n={n} q={q} ε={e}: {} points in {:.2?}", r.points, t.elapsed());
    assert!(
        r.passed(),
        "{case:?} {n} {q} {e}: {:?} / {:?}",
        r.checks.first_failure(),
        r.spectrum
    );
    r
}

#[test]
fn hermitian_h29_spectrum() {
    let r = run(OrthoCase::Hermitian, 2, 3, 0);
    let got: Vec<(Surd, u64)> = r.claims.clone();
    let want: Vec<(Surd, u64)> = [(6, 1), (3, 21), (-3, 14), (-1, 27)]
        .iter()
        .map(|&(v, m)| (Surd::int(v), m))
        .collect();
    assert_eq!(got, want);
}

#[test]
fn hermitian_h39() {
    assert_eq!(run(OrthoCase::Hermitian, 3, 3, 0).points, 540);
}

#[test]
fn ellhyp_instances() {
    for (n, q) in [(3, 3), (3, 5), (5, 3)] {
        for e in [1, -1] {
            run(OrthoCase::EllHyp, n, q, e);
        }
    }
}

#[test]
fn parabolic_instances() {
    let r = run(OrthoCase::Parabolic, 4, 3, 0);
    assert_eq!(r.degrees, vec![24, 30]);
    assert_eq!(run(OrthoCase::Parabolic, 4, 5, 0).points, 625);
}
