use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::intmat::{exact_sqrt, product_vanishes, IntMatrix};
use super::modular::primes;
use super::poly::{char_poly, IntPolynomial};
use super::rat::{rat, Rat, RatMatrix};
use super::LinAlgError;

/// One named check inside a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CertReport {
    pub checks: Vec<Check>,
}

impl CertReport {
    pub fn new() -> CertReport {
        CertReport::default()
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.push(name, true, None);
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, false, Some(detail.into()));
    }

    pub fn extend(&mut self, prefix: &str, other: CertReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.failures().next()
    }
}

/// A number `a + b sqrt(rad)` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Surd {
    pub a: Rat,
    pub b: Rat,
    pub rad: u64,
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Surd", 3)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("rad", &self.rad)?;
        st.end()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let b = if self.b.abs().is_one() {
            String::new()
        } else {
            self.b.abs().to_string()
        };
        let sign = if self.b.is_negative() { "-" } else { "+" };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{lead}{b}√{}", self.rad)
        } else {
            write!(f, "{} {sign} {b}√{}", self.a, self.rad)
        }
    }
}

impl Surd {
    pub fn rational(a: Rat) -> Surd {
        Surd {
            a,
            b: Rat::zero(),
            rad: 1,
        }
    }

    pub fn int(a: i64) -> Surd {
        Surd::rational(rat(a))
    }

    /// Normalized: perfect-square radicands are absorbed into `a`.
    pub fn new(a: Rat, b: Rat, rad: u64) -> Surd {
        if b.is_zero() || rad == 0 {
            return Surd::rational(a);
        }
        match exact_sqrt(rad) {
            Some(s) => Surd::rational(a + b * rat(s as i64)),
            None => Surd { a, b, rad },
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Surd {
        Surd {
            a: self.a.clone(),
            b: -self.b.clone(),
            rad: self.rad,
        }
    }

    /// `x + conj(x)` and `x^3 + conj(x)^3`, both rational.
    fn pair_power_sums(&self) -> (Rat, Rat) {
        let r = rat(self.rad as i64);
        let s1 = &self.a * rat(2);
        let s3 = &self.a * &self.a * &self.a * rat(2) + &self.a * &self.b * &self.b * &r * rat(6);
        (s1, s3)
    }
}

/// Result of certifying a claimed spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumCert {
    pub report: CertReport,
    #[serde(serialize_with = "ser_i128")]
    pub trace: i128,
    #[serde(serialize_with = "ser_i128")]
    pub trace_cube: i128,
}

fn ser_i128<S: Serializer>(x: &i128, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

enum Factor {
    Linear(Rat),
    Pair(Surd),
}

/// Certifies a claimed spectrum of a symmetric integer matrix.
///
/// The certificate: `M` is symmetric, the product of `(M - λ)` over claimed
/// rational `λ` and of the real quadratics over claimed conjugate pairs
/// annihilates `M`, and each factor has modular nullity equal to its claimed
/// multiplicity. Since modular nullity bounds the rational nullity from above,
/// and the multiplicities sum to the size, every bound is attained. Claims
/// with multiplicity zero are certified as absent by full modular rank. The
/// traces of `M` and `M^3` are compared with the claimed power sums.
pub fn verify_spectrum(m: &IntMatrix, claims: &[(Surd, u64)]) -> Result<SpectrumCert, LinAlgError> {
    if !m.is_square() {
        return Err(LinAlgError::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    let mut report = CertReport::new();
    let total: u64 = claims.iter().map(|(_, k)| k).sum();
    if total == n as u64 {
        report.pass("multiplicities sum to size");
    } else {
        report.fail("multiplicities sum to size", format!("{total} != {n}"));
    }
    if m.is_symmetric() {
        report.pass("symmetric");
    } else {
        report.fail("symmetric", "matrix is not symmetric");
    }

    let mut factors: Vec<(Factor, u64)> = Vec::new();
    let mut seen: Vec<&Surd> = Vec::new();
    for (value, mult) in claims {
        if seen.contains(&value) {
            report.fail("distinct eigenvalues", format!("{value} claimed twice"));
            continue;
        }
        seen.push(value);
        if value.is_rational() {
            factors.push((Factor::Linear(value.a.clone()), *mult));
            continue;
        }
        let partner = claims.iter().find(|(v, _)| *v == value.conj());
        match partner {
            None => report.fail("conjugate pairs", format!("{value} has no conjugate claim")),
            Some((_, pm)) if pm != mult => report.fail(
                "conjugate pairs",
                format!("{value} and its conjugate have multiplicities {mult} and {pm}"),
            ),
            Some(_) if value.b.is_positive() => factors.push((Factor::Pair(value.clone()), 2 * mult)),
            Some(_) => {}
        }
    }

    let square = m.matmul(m)?;
    let trace = m.trace();
    let trace_cube = m.trace_cube_with_square(&square);

    let build = |f: &Factor| -> Result<IntMatrix, LinAlgError> {
        match f {
            Factor::Linear(l) => {
                let d = l.denom().to_i64().ok_or(LinAlgError::Overflow)?;
                let u = l.numer().to_i64().ok_or(LinAlgError::Overflow)?;
                Ok(m.scale(d).shift(-u))
            }
            Factor::Pair(s) => {
                // x^2 - 2a x + (a^2 - b^2 rad), cleared of denominators
                let two_a = &s.a * rat(2);
                let c = &s.a * &s.a - &s.b * &s.b * rat(s.rad as i64);
                let d = num_integer::lcm(two_a.denom().clone(), c.denom().clone());
                let dd = Rat::from_integer(d.clone());
                let lin = (&two_a * &dd).to_integer().to_i64().ok_or(LinAlgError::Overflow)?;
                let con = (&c * &dd).to_integer().to_i64().ok_or(LinAlgError::Overflow)?;
                let d = d.to_i64().ok_or(LinAlgError::Overflow)?;
                square.scale(d).add(&m.scale(-lin))?.shift(con).pipe(Ok)
            }
        }
    };

    let mut present = Vec::new();
    for (f, k) in &factors {
        let mat = build(f)?;
        let label = match f {
            Factor::Linear(l) => format!("nullity at {l}"),
            Factor::Pair(s) => format!("nullity at {} and {}", s, s.conj()),
        };
        let best = primes(3)
            .into_iter()
            .map(|p| n - mat.rank_mod(p))
            .min()
            .expect("three primes");
        if best == *k as usize {
            report.pass(label);
        } else {
            report.fail(label, format!("modular nullity {best}, claimed {k}"));
        }
        if *k > 0 {
            present.push(mat);
        }
    }
    if product_vanishes(&present)? {
        report.pass("annihilating polynomial");
    } else {
        report.fail("annihilating polynomial", "product of claimed factors is nonzero");
    }

    let (mut s1, mut s3) = (Rat::zero(), Rat::zero());
    for (f, k) in &factors {
        match f {
            Factor::Linear(l) => {
                s1 += l * rat(*k as i64);
                s3 += l * l * l * rat(*k as i64);
            }
            Factor::Pair(s) => {
                let (p1, p3) = s.pair_power_sums();
                let half = rat((*k / 2) as i64);
                s1 += p1 * &half;
                s3 += p3 * &half;
            }
        }
    }
    let tr = Rat::from_integer(BigInt::from(trace));
    let tr3 = Rat::from_integer(BigInt::from(trace_cube));
    if s1 == tr {
        report.pass("trace");
    } else {
        report.fail("trace", format!("sum m λ = {s1}, trace = {tr}"));
    }
    if s3 == tr3 {
        report.pass("trace of cube");
    } else {
        report.fail("trace of cube", format!("sum m λ^3 = {s3}, trace = {tr3}"));
    }
    Ok(SpectrumCert {
        report,
        trace,
        trace_cube,
    })
}

trait Pipe: Sized {
    fn pipe<T>(self, f: impl FnOnce(Self) -> T) -> T {
        f(self)
    }
}

impl<T> Pipe for T {}

/// Certifies a pair of eigenmatrices against intersection matrices `B_i`
/// (with `B_i[k][j] = p^k_{ij}`):
/// (a) `B_i q_j = P(j,i) q_j`; (b) `QP = PQ = N I`; (c) `Δ_m P = Qᵀ Δ_n`;
/// (d) first columns of `P` and `Q` are all-one; (e) rows `j > 0` of `P`
/// sum to zero. Also checks that the first rows carry `n` and `m`.
pub fn verify_eigenmatrices(
    b: &[RatMatrix],
    p: &RatMatrix,
    q: &RatMatrix,
    n_vec: &[Rat],
    m_vec: &[Rat],
    n_points: &Rat,
) -> CertReport {
    let mut r = CertReport::new();
    let d = p.rows();
    let square = |x: &RatMatrix| x.rows() == d && x.cols() == d;
    if !square(p) || !square(q) || b.len() != d || !b.iter().all(square) || n_vec.len() != d || m_vec.len() != d {
        r.fail("shapes", format!("inconsistent class counts around {d}"));
        return r;
    }

    let mut bad_a = None;
    'a: for j in 0..d {
        let qj = q.column(j);
        for (i, bi) in b.iter().enumerate() {
            let lhs = bi.mul_vec(&qj).expect("square");
            let pji = p.get(j, i);
            if let Some(k) = (0..d).find(|&k| lhs[k] != pji * &qj[k]) {
                bad_a = Some(format!("B_{i} q_{j} differs from P({j},{i}) q_{j} at row {k}"));
                break 'a;
            }
        }
    }
    match bad_a {
        None => r.pass("(a) B_i q_j = P(j,i) q_j"),
        Some(s) => r.fail("(a) B_i q_j = P(j,i) q_j", s),
    }

    let ni = RatMatrix::identity(d).scale(n_points);
    let qp = q.matmul(p).expect("square");
    let pq = p.matmul(q).expect("square");
    match (qp.first_difference(&ni), pq.first_difference(&ni)) {
        (None, None) => r.pass("(b) QP = PQ = N I"),
        (Some((i, j)), _) => r.fail("(b) QP = PQ = N I", format!("QP differs at ({i},{j})")),
        (None, Some((i, j))) => r.fail("(b) QP = PQ = N I", format!("PQ differs at ({i},{j})")),
    }

    let lhs = RatMatrix::diagonal(m_vec).matmul(p).expect("square");
    let rhs = q.transpose().matmul(&RatMatrix::diagonal(n_vec)).expect("square");
    match lhs.first_difference(&rhs) {
        None => r.pass("(c) Δ_m P = Qᵀ Δ_n"),
        Some((i, j)) => r.fail("(c) Δ_m P = Qᵀ Δ_n", format!("differs at ({i},{j})")),
    }

    let ones = |x: &RatMatrix| (0..d).find(|&i| !x.get(i, 0).is_one());
    match (ones(p), ones(q)) {
        (None, None) => r.pass("(d) first columns all-one"),
        (Some(i), _) => r.fail("(d) first columns all-one", format!("P({i},0) != 1")),
        (None, Some(i)) => r.fail("(d) first columns all-one", format!("Q({i},0) != 1")),
    }

    match (1..d).find(|&j| !p.row(j).iter().cloned().sum::<Rat>().is_zero()) {
        None => r.pass("(e) rows j > 0 of P sum to zero"),
        Some(j) => r.fail("(e) rows j > 0 of P sum to zero", format!("row {j}")),
    }

    let row0 = |x: &RatMatrix, v: &[Rat]| (0..d).find(|&i| x.get(0, i) != &v[i]);
    match (row0(p, n_vec), row0(q, m_vec)) {
        (None, None) => r.pass("first rows are valencies and multiplicities"),
        (Some(i), _) => r.fail("first rows are valencies and multiplicities", format!("P(0,{i})")),
        (None, Some(i)) => r.fail("first rows are valencies and multiplicities", format!("Q(0,{i})")),
    }
    let msum: Rat = m_vec.iter().cloned().sum();
    if &msum == n_points {
        r.pass("multiplicities sum to N");
    } else {
        r.fail("multiplicities sum to N", format!("{msum} != {n_points}"));
    }
    r
}

/// Eigenmatrices recovered from intersection matrices alone.
#[derive(Debug, Clone, Serialize)]
pub struct Discovery {
    /// Coefficients of the generic combination `sum c_i B_i`.
    pub coefficients: Vec<i64>,
    pub char_poly: IntPolynomial,
    pub p: RatMatrix,
    pub q: RatMatrix,
    pub m: Vec<String>,
}

/// Recovers `P`, `Q` and the multiplicities from the intersection matrices of
/// a commutative scheme with integral eigenvalues: a generic integer
/// combination of the `B_i` has simple integer eigenvalues, whose right
/// eigenvectors are the columns of `Q` up to scaling. Rows come out with the
/// trivial eigenspace first, then by decreasing eigenvalue of the
/// combination.
pub fn discover_eigenmatrices(b: &[RatMatrix], seed: u64) -> Result<Discovery, LinAlgError> {
    let d = b.len();
    if d == 0 || b.iter().any(|x| x.rows() != d || x.cols() != d) {
        return Err(LinAlgError::NotSquare(d, d));
    }
    let ints: Vec<Vec<Vec<BigInt>>> = b
        .iter()
        .map(|x| x.to_integers().ok_or(LinAlgError::NotIntegral))
        .collect::<Result<_, _>>()?;
    let n_vec: Vec<Rat> = (0..d).map(|i| b[i].get(0, i).clone()).collect();
    let n_points: Rat = n_vec.iter().cloned().sum();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..32 {
        let coeffs: Vec<i64> = (0..d)
            .map(|i| {
                if i == 0 || attempt == 0 && i > 5 {
                    0
                } else if attempt == 0 {
                    [0, 1, 3, 7, 13, 29][i]
                } else {
                    rng.gen_range(1..64)
                }
            })
            .collect();
        let rows: Vec<Vec<i64>> = (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| {
                        let s: BigInt = (0..d).map(|i| &ints[i][r][c] * coeffs[i]).sum();
                        s.to_i64().ok_or(LinAlgError::Overflow)
                    })
                    .collect::<Result<_, _>>()
            })
            .collect::<Result<_, _>>()?;
        let c = IntMatrix::from_rows(&rows)?;
        let cp = char_poly(&c)?;
        let bound = c.inf_norm() as i64;
        let roots = cp.integer_roots(bound);
        if roots.len() != d || roots.iter().any(|&(_, k)| k != 1) {
            continue;
        }
        let cr = c.to_rat();
        let mut cols: Vec<(i64, Vec<Rat>)> = Vec::with_capacity(d);
        for &(lambda, _) in &roots {
            let ker = cr.sub(&RatMatrix::identity(d).scale(&rat(lambda)))?.kernel();
            let Some(w) = ker.into_iter().next() else {
                return Err(LinAlgError::Singular);
            };
            if w[0].is_zero() {
                return Err(LinAlgError::Singular);
            }
            let w0 = w[0].clone();
            cols.push((lambda, w.into_iter().map(|x| x / &w0).collect()));
        }
        // trivial eigenspace: P row equals the valencies
        cols.sort_by_key(|c| std::cmp::Reverse(c.0));
        let trivial = cols
            .iter()
            .position(|(_, w)| w.iter().all(|x| x.is_one()))
            .ok_or(LinAlgError::Singular)?;
        let t = cols.remove(trivial);
        cols.insert(0, t);
        let p = RatMatrix::from_fn(d, d, |j, i| &n_vec[i] * &cols[j].1[i]);
        let m: Vec<Rat> = (0..d)
            .map(|j| {
                let s: Rat = (0..d).map(|i| p.get(j, i) * p.get(j, i) / &n_vec[i]).sum();
                &n_points / s
            })
            .collect();
        let q = RatMatrix::from_fn(d, d, |k, j| &m[j] * p.get(j, k) / &n_vec[k]);
        return Ok(Discovery {
            coefficients: coeffs,
            char_poly: cp,
            p,
            q,
            m: m.iter().map(|x| x.to_string()).collect(),
        });
    }
    Err(LinAlgError::NoSimpleSpectrum)
}

/// Permutation `perm` with `a.row(i) == b.row(perm[i])`, if one exists.
pub fn match_rows(a: &RatMatrix, b: &RatMatrix) -> Option<Vec<usize>> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return None;
    }
    let mut used = vec![false; b.rows()];
    let mut perm = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let j = (0..b.rows()).find(|&j| !used[j] && a.row(i) == b.row(j))?;
        used[j] = true;
        perm.push(j);
    }
    Some(perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat::ratio;

    fn petersen() -> IntMatrix {
        // Kneser graph K(5,2)
        let pairs: Vec<(u32, u32)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        IntMatrix::from_fn(10, 10, |i, j| {
            let (a, b) = pairs[i];
            let (c, e) = pairs[j];
            i64::from(a != c && a != e && b != c && b != e)
        })
    }

    #[test]
    fn identity_spectrum() {
        let c = verify_spectrum(&IntMatrix::identity(3), &[(Surd::int(1), 3)]).unwrap();
        assert!(c.report.passed(), "{:?}", c.report);
    }

    #[test]
    fn petersen_spectrum_and_negative() {
        let a = petersen();
        let good = [(Surd::int(3), 1), (Surd::int(1), 5), (Surd::int(-2), 4)];
        let c = verify_spectrum(&a, &good).unwrap();
        assert!(c.report.passed(), "{:?}", c.report);
        let bad = [(Surd::int(3), 1), (Surd::int(1), 4), (Surd::int(-2), 5)];
        assert!(!verify_spectrum(&a, &bad).unwrap().report.passed());
        let absent = [
            (Surd::int(3), 1),
            (Surd::int(1), 5),
            (Surd::int(-2), 4),
            (Surd::int(0), 0),
        ];
        assert!(verify_spectrum(&a, &absent).unwrap().report.passed());
    }

    #[test]
    fn surd_pair_spectrum() {
        // 5-cycle: 2, (-1 ± √5)/2 twice each
        let c5 = IntMatrix::from_fn(5, 5, |i, j| i64::from((i + 1) % 5 == j || (j + 1) % 5 == i));
        let plus = Surd::new(ratio(-1, 2), ratio(1, 2), 5);
        let claims = [(Surd::int(2), 1), (plus.clone(), 2), (plus.conj(), 2)];
        let c = verify_spectrum(&c5, &claims).unwrap();
        assert!(c.report.passed(), "{:?}", c.report);
        let lopsided = [(Surd::int(2), 1), (plus.clone(), 3), (plus.conj(), 1)];
        assert!(!verify_spectrum(&c5, &lopsided).unwrap().report.passed());
    }

    #[test]
    fn surd_normalization_and_display() {
        assert_eq!(Surd::new(rat(1), rat(2), 9), Surd::int(7));
        assert_eq!(Surd::new(rat(0), rat(3), 3).to_string(), "3√3");
        assert_eq!(Surd::new(rat(0), rat(-1), 5).to_string(), "-√5");
    }

    fn petersen_scheme() -> (Vec<RatMatrix>, RatMatrix, RatMatrix) {
        // distance-regular with intersection array {3,2;1,1}
        let b0 = RatMatrix::identity(3);
        let b1 = RatMatrix::from_i64(&[vec![0, 3, 0], vec![1, 0, 2], vec![0, 1, 2]]).unwrap();
        let b2 = RatMatrix::from_i64(&[vec![0, 0, 6], vec![0, 2, 4], vec![1, 2, 3]]).unwrap();
        let p = RatMatrix::from_i64(&[vec![1, 3, 6], vec![1, 1, -2], vec![1, -2, 1]]).unwrap();
        let q = RatMatrix::from_rows(vec![
            vec![rat(1), rat(5), rat(4)],
            vec![rat(1), ratio(5, 3), ratio(-8, 3)],
            vec![rat(1), ratio(-5, 3), ratio(2, 3)],
        ])
        .unwrap();
        (vec![b0, b1, b2], p, q)
    }

    #[test]
    fn eigenmatrices_certified_and_perturbed() {
        let (b, p, q) = petersen_scheme();
        let n = [rat(1), rat(3), rat(6)];
        let m = [rat(1), rat(5), rat(4)];
        let r = verify_eigenmatrices(&b, &p, &q, &n, &m, &rat(10));
        assert!(r.passed(), "{r:?}");
        let mut bad = p.clone();
        bad.set(1, 1, rat(2));
        let r = verify_eigenmatrices(&b, &bad, &q, &n, &m, &rat(10));
        assert!(!r.checks.iter().find(|c| c.name.starts_with("(b)")).unwrap().passed);
    }

    #[test]
    fn discovery_recovers_petersen() {
        let (b, p, q) = petersen_scheme();
        let d = discover_eigenmatrices(&b, 1).unwrap();
        let perm = match_rows(&d.p, &p).expect("rows of P");
        assert_eq!(match_rows(&d.q.transpose(), &q.transpose()), Some(perm.clone()));
        let m = ["1", "5", "4"];
        assert!(perm.iter().enumerate().all(|(i, &j)| d.m[i] == m[j]));
    }
}
