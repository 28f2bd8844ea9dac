use num_traits::Zero;
use polarscheme::exactla::{rat, ratio, verify_eigenmatrices, Rat};
use polarscheme::formulas::*;
use proptest::prelude::*;

fn pw(q: u64, k: i64) -> Rat {
    let mut r = rat(1);
    for _ in 0..k {
        r *= rat(q as i64);
    }
    r
}

fn th(q: u64, k: i64) -> Rat {
    (0..=k).map(|i| pw(q, i)).sum()
}

fn odd_q() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 9, 11, 13, 25, 27])
}

fn odd_n() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 5, 7, 9])
}

fn sign() -> impl Strategy<Value = i8> {
    prop::sample::select(vec![1i8, -1])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_row_sums_and_symmetries(n in odd_n(), q in odd_q(), e in sign()) {
        let t = oddq_tensor_full(n, q, e).unwrap();
        for k in 0..6 {
            for i in 0..6 {
                let s: Rat = t.p[k][i].iter().cloned().sum();
                prop_assert_eq!(&s, &t.n[i], "row sum k={} i={}", k, i);
                for j in 0..6 {
                    prop_assert_eq!(&t.p[k][i][j], &t.p[k][j][i]);
                    prop_assert!(t.n[k].is_zero() || t.p[k][i][j] >= Rat::zero());
                    prop_assert!(t.n[k].is_zero() || t.p[k][i][j].is_integer());
                    prop_assert_eq!(&t.n[k] * &t.p[k][i][j], &t.n[j] * &t.p[j][i][k]);
                }
            }
        }
        let b = t.intersection_matrices();
        for i in 1..6 {
            for j in 1..6 {
                prop_assert_eq!(b[i].matmul(&b[j]).unwrap(), b[j].matmul(&b[i]).unwrap());
            }
        }
    }

    #[test]
    fn expanded_entries_match_the_tensor(n in odd_n(), q in odd_q(), e in sign()) {
        let t = oddq_tensor_full(n, q, e).unwrap();
        let ni = n as i64;
        let s = pw(q, (ni - 3) / 2);
        let er = rat(e as i64);
        let qr = rat(q as i64);
        let p1_11 = &qr - rat(2) + (&qr * &qr - &qr) * th(q, ni - 4) + pw(q, ni - 2);
        prop_assert_eq!(&t.p[1][1][1], &p1_11);
        let half = ratio(1, 2);
        let p1_22 = &half * (pw(q, ni - 3) + &er * &s) * &qr * (&qr - rat(3)) / rat(2)
            + pw(q, ni - 2) * (&qr - rat(3)) * (&qr - rat(5)) / rat(8);
        prop_assert_eq!(&t.p[1][2][2], &p1_22);
        let p1_44 = &half * (pw(q, ni - 3) + &er * &s) * &qr * (&qr - rat(1)) / rat(2)
            + pw(q, ni - 2) * (&qr - rat(1)) * (&qr - rat(3)) / rat(8);
        prop_assert_eq!(&t.p[1][4][4], &p1_44);
        prop_assert_eq!(&t.p[2][1][1], &(&half * (pw(q, ni - 2) - &er * &s) * rat(4)));
        prop_assert_eq!(&t.p[4][1][5], &(&half * (pw(q, ni - 2) - &er * &s) * (&qr + rat(1))));
        prop_assert_eq!(&t.p[5][1][4], &(&half * (pw(q, ni - 2) + &er * &s) * (&qr - rat(1))));
    }

    #[test]
    fn oddq_eigenmatrices_certify(n in prop::sample::select(vec![3u32, 5, 7]), q in odd_q(), e in sign()) {
        let t = oddq_tensor(n, q, e).unwrap();
        let d = oddq_pq(n, q, e).unwrap();
        prop_assert!(d.consistency().passed());
        let r = verify_eigenmatrices(&t.intersection_matrices(), &d.p, &d.q, &d.n_vec, &d.m_vec, &d.points());
        prop_assert!(r.passed(), "{:?}", r.first_failure());
        prop_assert_eq!(d.points(), quadric_anisotropic(n, q, e));
    }

    #[test]
    fn subscheme_is_consistent(n in odd_n(), q in odd_q(), e in sign()) {
        let d = oddq_subscheme_pq(n, q, e).unwrap();
        prop_assert!(d.consistency().passed());
        prop_assert!(d.m_vec.iter().all(|m| m.is_integer() && *m > Rat::zero()));
    }

    #[test]
    fn evenchar_is_consistent(n in 2u32..9, k in 1u32..4, e in sign()) {
        let q = 1u64 << k;
        let e = if n % 2 == 0 { 0 } else { e };
        let d = evenchar_pq(n, q, e).unwrap();
        prop_assert!(d.consistency().passed(), "{:?}", d);
        prop_assert!(d.m_vec.iter().all(|m| m.is_integer() && *m > Rat::zero()));
        let points = if n % 2 == 0 {
            pw(q, n as i64) - rat(1)
        } else {
            pw(q, (n as i64 - 1) / 2) * (pw(q, (n as i64 + 1) / 2) - rat(e as i64))
        };
        prop_assert_eq!(d.points(), points);
    }

    #[test]
    fn hermitian_families_consistent(n in 2u32..6, q in prop::sample::select(vec![2u64, 3, 4, 5, 7])) {
        let nu = nu_pq(n, q).unwrap();
        prop_assert!(nu.consistency().passed());
        let f = fission_pq(n, q).unwrap();
        prop_assert!(f.consistency().passed());
        prop_assert!(f.m_vec.iter().all(|m| m.is_integer() && *m > Rat::zero()));
        // multiplicities of the fission are those of the orthogonality graph
        let spec = ortho_spectrum(OrthoCase::Hermitian, n, q, 0).unwrap();
        if spec.len() == f.m_vec.len() {
            for (j, (_, m)) in spec.iter().enumerate() {
                prop_assert_eq!(&f.m_vec[j], &rat(*m as i64));
            }
        }
        // the sum of the two new columns is the old R2
        let d = f.relations.len();
        for (row, nurow) in [(0usize, 0usize), (1, 1), (d - 1, 2)] {
            let s: Rat = f.p.row(row)[2..].iter().cloned().sum();
            prop_assert_eq!(&s, nu.p.get(nurow, 2));
        }
    }

    #[test]
    fn ortho_spectra_sum_and_trace(n in 2u32..6, q in prop::sample::select(vec![2u64, 3, 4, 5])) {
        let spec = ortho_spectrum(OrthoCase::Hermitian, n, q, 0).unwrap();
        let total: u64 = spec.iter().map(|x| x.1).sum();
        prop_assert_eq!(rat(total as i64), ortho_points(OrthoCase::Hermitian, n, q, 0).unwrap());
        let tr: Rat = spec.iter().map(|(v, m)| &v.a * rat(*m as i64)).sum();
        prop_assert!(tr.is_zero());
        let cube: Rat = spec.iter().map(|(v, m)| &v.a * &v.a * &v.a * rat(*m as i64)).sum();
        prop_assert_eq!(cube, ortho_triangle_trace(OrthoCase::Hermitian, n, q, 0).unwrap());
    }

    #[test]
    fn ellhyp_spectrum_sums(n in odd_n(), q in odd_q(), e in sign()) {
        let spec = ortho_spectrum(OrthoCase::EllHyp, n, q, e).unwrap();
        let total: u64 = spec.iter().map(|x| x.1).sum();
        prop_assert_eq!(rat(total as i64), ortho_points(OrthoCase::EllHyp, n, q, e).unwrap());
        let tr: Rat = spec.iter().map(|(v, m)| &v.a * rat(*m as i64)).sum();
        prop_assert!(tr.is_zero());
        let sq: Rat = spec.iter().map(|(v, m)| &v.a * &v.a * rat(*m as i64)).sum();
        let deg = ortho_degree(OrthoCase::EllHyp, n, q, e).unwrap();
        prop_assert_eq!(sq, &deg * ortho_points(OrthoCase::EllHyp, n, q, e).unwrap());
        let cube: Rat = spec.iter().map(|(v, m)| &v.a * &v.a * &v.a * rat(*m as i64)).sum();
        prop_assert_eq!(cube, ortho_triangle_trace(OrthoCase::EllHyp, n, q, e).unwrap());
        // the two forms of A^2 agree
        let c = ellhyp_a2_coefficients(n, q, e).unwrap();
        let m = (n as i64 - 1) / 2;
        let b = pw(q, m - 1);
        let a = pw(q, m);
        let er = rat(e as i64);
        prop_assert_eq!(&c[0], &(&b * (&a + &a * rat(q as i64 - 1))));
        prop_assert_eq!(&c[1], &(&b * &a));
        prop_assert_eq!(&c[2], &(&b * (&a - &er)));
        prop_assert_eq!(&c[3], &(&b * (&a + &er)));
    }

    #[test]
    fn parabolic_spectrum_sums(n in prop::sample::select(vec![2u32, 4, 6, 8]), q in odd_q()) {
        let spec = ortho_spectrum(OrthoCase::Parabolic, n, q, 0).unwrap();
        let total: u64 = spec.iter().map(|x| x.1).sum();
        prop_assert_eq!(rat(total as i64), ortho_points(OrthoCase::Parabolic, n, q, 0).unwrap());
        let sizes = parabolic_class_size(n, q, 1).unwrap() + parabolic_class_size(n, q, -1).unwrap();
        prop_assert_eq!(sizes, pw(q, n as i64));
    }

    #[test]
    fn plane_columns_sum_to_theta(n in odd_n(), q in odd_q(), e in sign()) {
        let t = plane_counts(n, q, e).unwrap();
        for col in 0..4 {
            let s: Rat = t.iter().map(|r| r[col].clone()).sum();
            prop_assert_eq!(s, th(q, n as i64 - 2));
            prop_assert!(t.iter().all(|r| r[col].is_integer() && r[col] >= Rat::zero()));
        }
    }

    #[test]
    fn wilbrink_is_strongly_regular(n in prop::sample::select(vec![2u32, 4, 6]), q in odd_q(), e in sign()) {
        let s = wilbrink_srg(n, q, e).unwrap();
        prop_assert_eq!(s.k * (s.k - s.lambda - 1), (s.v - s.k - 1) * s.mu);
        let total: i64 = s.spectrum.iter().map(|x| x.1).sum();
        prop_assert_eq!(total, s.v);
        let tr: i64 = s.spectrum.iter().map(|x| x.0 * x.1).sum();
        prop_assert_eq!(tr, 0);
        let d = wilbrink_pq(n, q, e).unwrap();
        prop_assert!(d.consistency().passed());
    }

    #[test]
    fn hoffman_ratio_is_display_size(n in odd_n(), q in prop::sample::select(vec![5u64, 7, 9, 11]), e in sign()) {
        let h = hoffman_display(n, q, e).unwrap();
        let big = quadric_anisotropic(n, q, e);
        let bound = &big * -h.lambda_min() / (h.lambda_max() - h.lambda_min());
        prop_assert_eq!(&bound, h.size());
    }
}
