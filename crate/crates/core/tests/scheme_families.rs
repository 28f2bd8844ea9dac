use polarscheme::scheme::{analyze, BuildOptions, Mode, SchemeFamily, SchemeParams};

fn run(family: SchemeFamily, n: u32, q: u64, e: i8) {
    let params = SchemeParams::new(family, n, q, e).unwrap();
    let r = analyze(params, &BuildOptions::default(), Mode::Exhaustive).unwrap();
    assert!(r.axioms.passed(), "{params}: {:?}", r.axioms.report.first_failure());
    assert!(
        r.tensor_checks.passed(),
        "{params}: {:?}",
        r.tensor_checks.first_failure()
    );
    if let Some(d) = &r.tensor_diff {
        assert!(d.is_empty(), "{params}: {:?}", &d[..d.len().min(5)]);
    }
    assert!(
        r.certification.passed(),
        "{params}: {:?}",
        r.certification.first_failure()
    );
}

#[test]
fn oddq5_small() {
    for &(n, q, e) in &[(3, 3, 1), (3, 3, -1), (3, 5, 1), (3, 5, -1)] {
        run(SchemeFamily::OddQOddN5, n, q, e);
    }
}

#[test]
fn oddq3_small() {
    for &(n, q, e) in &[(3, 3, 1), (3, 3, -1), (3, 5, 1), (3, 5, -1), (5, 3, 1)] {
        run(SchemeFamily::OddQOddN3, n, q, e);
    }
}

#[test]
fn even_characteristic() {
    for &(n, q, e) in &[(3, 2, 1), (3, 2, -1), (3, 4, 1), (3, 4, -1), (5, 2, -1), (5, 2, 1)] {
        run(SchemeFamily::EvenCharOddN, n, q, e);
    }
    for &(n, q) in &[(2, 2), (2, 4), (4, 2), (4, 4), (2, 8)] {
        run(SchemeFamily::EvenCharEvenN, n, q, 0);
    }
}

#[test]
fn wilbrink() {
    for &(n, q, e) in &[(2, 3, 1), (2, 5, -1), (4, 3, 1), (4, 3, -1)] {
        run(SchemeFamily::ParabolicWilbrink, n, q, e);
    }
}

#[test]
fn hermitian() {
    for &(n, q) in &[(2, 2), (2, 3), (3, 2)] {
        run(SchemeFamily::HermitianNU, n, q, 0);
        run(SchemeFamily::HermitianFission, n, q, 0);
    }
}

#[test]
fn acceptance_scale() {
    let t = std::time::Instant::now();
    for &(n, q, e) in &[(3, 7, 1), (3, 7, -1), (5, 3, 1), (5, 3, -1)] {
        run(SchemeFamily::OddQOddN5, n, q, e);
    }
    for &(n, q) in &[(3, 3), (2, 5)] {
        run(SchemeFamily::HermitianNU, n, q, 0);
        run(SchemeFamily::HermitianFission, n, q, 0);
    }
    for &(q, e) in &[(5, 1), (5, -1)] {
        run(SchemeFamily::ParabolicWilbrink, 4, q, e);
    }
    eprintln!("acceptance-scale schemes: {:?}", t.elapsed());
}
