//! Closed-form valencies, intersection numbers, eigenmatrices and spectra as
//! exact functions of `(n, q, ε)`.

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactla::{rat, CertReport, LinAlgError, Rat, RatMatrix, Surd};
use crate::gf::prime_power;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

fn bad<T>(msg: impl Into<String>) -> Result<T, FormulaError> {
    Err(FormulaError::Params(msg.into()))
}

pub(crate) fn ser_rats<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Exact powers and gaussian sums in a fixed `q`.
#[derive(Clone)]
struct Ctx {
    q: Rat,
    e: Rat,
}

impl Ctx {
    fn new(q: u64, eps: i8) -> Ctx {
        Ctx {
            q: rat(q as i64),
            e: rat(eps as i64),
        }
    }

    /// `q^k`, also for negative `k`.
    fn p(&self, k: i64) -> Rat {
        let mut r = Rat::one();
        for _ in 0..k.unsigned_abs() {
            r *= &self.q;
        }
        if k < 0 {
            r.recip()
        } else {
            r
        }
    }

    /// `θ_k(q) = q^k + ... + 1`, zero for `k < 0`.
    fn th(&self, k: i64) -> Rat {
        (0..=k).map(|i| self.p(i)).sum()
    }

    fn qp(&self, d: i64) -> Rat {
        &self.q + rat(d)
    }
}

fn half() -> Rat {
    Rat::new(1.into(), 2.into())
}

fn quarter() -> Rat {
    Rat::new(1.into(), 4.into())
}

fn eighth() -> Rat {
    Rat::new(1.into(), 8.into())
}

fn check_odd_quadric(n: u32, q: u64, eps: i8) -> Result<(), FormulaError> {
    if n < 3 || n.is_multiple_of(2) {
        return bad(format!("n = {n} must be odd and at least 3"));
    }
    if eps != 1 && eps != -1 {
        return bad(format!("ε = {eps} must be ±1"));
    }
    match prime_power(q) {
        Some((p, _)) if p != 2 => Ok(()),
        Some(_) => bad(format!("q = {q} must be odd")),
        None => bad(format!("q = {q} is not a prime power")),
    }
}

/// Eigenmatrices of a scheme with row and column labels.
#[derive(Debug, Clone, Serialize)]
pub struct EigenData {
    pub relations: Vec<String>,
    pub eigenspaces: Vec<String>,
    #[serde(serialize_with = "ser_rats")]
    pub n_vec: Vec<Rat>,
    #[serde(serialize_with = "ser_rats")]
    pub m_vec: Vec<Rat>,
    pub p: RatMatrix,
    pub q: RatMatrix,
    /// Relations and eigenspaces removed because they are empty.
    pub dropped: Vec<String>,
}

impl EigenData {
    fn labelled(relations: &[&str], eigenspaces: &[&str], p: RatMatrix, q: RatMatrix) -> EigenData {
        EigenData {
            relations: relations.iter().map(|s| s.to_string()).collect(),
            eigenspaces: eigenspaces.iter().map(|s| s.to_string()).collect(),
            n_vec: p.row(0).to_vec(),
            m_vec: q.row(0).to_vec(),
            p,
            q,
            dropped: Vec::new(),
        }
    }

    /// Builds `Q = N P^{-1}` from `P`.
    fn from_p(relations: &[&str], eigenspaces: &[&str], p: RatMatrix) -> Result<EigenData, FormulaError> {
        let n: Rat = p.row(0).iter().cloned().sum();
        let q = p.inverse()?.scale(&n);
        Ok(EigenData::labelled(relations, eigenspaces, p, q))
    }

    pub fn points(&self) -> Rat {
        self.n_vec.iter().cloned().sum()
    }

    pub fn classes(&self) -> usize {
        self.relations.len() - 1
    }

    /// Removes relations of valency zero and eigenspaces of multiplicity
    /// zero, with the matching rows and columns of `P` and `Q`.
    pub fn prune(self) -> EigenData {
        let keep_rel: Vec<usize> = (0..self.n_vec.len()).filter(|&i| !self.n_vec[i].is_zero()).collect();
        let keep_eig: Vec<usize> = (0..self.m_vec.len()).filter(|&j| !self.m_vec[j].is_zero()).collect();
        let drop_rel: Vec<usize> = (0..self.n_vec.len()).filter(|i| !keep_rel.contains(i)).collect();
        let drop_eig: Vec<usize> = (0..self.m_vec.len()).filter(|j| !keep_eig.contains(j)).collect();
        if drop_rel.is_empty() && drop_eig.is_empty() {
            return self;
        }
        let mut dropped = self.dropped.clone();
        dropped.extend(
            drop_rel
                .iter()
                .map(|&i| format!("relation {} (valency 0)", self.relations[i])),
        );
        dropped.extend(
            drop_eig
                .iter()
                .map(|&j| format!("eigenspace {} (multiplicity 0)", self.eigenspaces[j])),
        );
        EigenData {
            relations: keep_rel.iter().map(|&i| self.relations[i].clone()).collect(),
            eigenspaces: keep_eig.iter().map(|&j| self.eigenspaces[j].clone()).collect(),
            n_vec: keep_rel.iter().map(|&i| self.n_vec[i].clone()).collect(),
            m_vec: keep_eig.iter().map(|&j| self.m_vec[j].clone()).collect(),
            p: self.p.minor(&drop_eig, &drop_rel),
            q: self.q.minor(&drop_rel, &drop_eig),
            dropped,
        }
    }

    /// `QP = PQ = N I`, `Δ_m P = Qᵀ Δ_n`, first columns, row sums.
    pub fn consistency(&self) -> CertReport {
        let mut r = CertReport::new();
        let d = self.relations.len();
        if self.p.rows() != d || self.p.cols() != d || self.q.rows() != d || self.q.cols() != d {
            r.fail("shapes", "P and Q are not square of the class count");
            return r;
        }
        let ni = RatMatrix::identity(d).scale(&self.points());
        let ok = self.q.matmul(&self.p).ok() == Some(ni.clone()) && self.p.matmul(&self.q).ok() == Some(ni);
        r.push("QP = PQ = N I", ok, None);
        let lhs = RatMatrix::diagonal(&self.m_vec).matmul(&self.p).ok();
        let rhs = self.q.transpose().matmul(&RatMatrix::diagonal(&self.n_vec)).ok();
        r.push("Δ_m P = Qᵀ Δ_n", lhs.is_some() && lhs == rhs, None);
        let ones = (0..d).all(|i| self.p.get(i, 0).is_one() && self.q.get(i, 0).is_one());
        r.push("first columns all-one", ones, None);
        let sums = (1..d).all(|j| self.p.row(j).iter().cloned().sum::<Rat>().is_zero());
        r.push("rows j > 0 of P sum to zero", sums, None);
        r
    }
}

/// Intersection numbers `p[k][i][j]` with valencies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tensor {
    pub relations: Vec<String>,
    #[serde(serialize_with = "ser_rats")]
    pub n: Vec<Rat>,
    #[serde(serialize_with = "ser_tensor")]
    pub p: Vec<Vec<Vec<Rat>>>,
}

fn ser_tensor<S: Serializer>(p: &[Vec<Vec<Rat>>], s: S) -> Result<S::Ok, S::Error> {
    let strings: Vec<Vec<Vec<String>>> = p
        .iter()
        .map(|m| m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect())
        .collect();
    strings.serialize(s)
}

impl Tensor {
    pub fn classes(&self) -> usize {
        self.n.len() - 1
    }

    /// `B_i` with `B_i[k][j] = p^k_{ij}`.
    pub fn intersection_matrices(&self) -> Vec<RatMatrix> {
        let d = self.n.len();
        (0..d)
            .map(|i| RatMatrix::from_fn(d, d, |k, j| self.p[k][i][j].clone()))
            .collect()
    }

    /// Restriction to the relations of nonzero valency.
    pub fn prune(self) -> Tensor {
        let keep: Vec<usize> = (0..self.n.len()).filter(|&i| !self.n[i].is_zero()).collect();
        Tensor {
            relations: keep.iter().map(|&i| self.relations[i].clone()).collect(),
            n: keep.iter().map(|&i| self.n[i].clone()).collect(),
            p: keep
                .iter()
                .map(|&k| {
                    keep.iter()
                        .map(|&i| keep.iter().map(|&j| self.p[k][i][j].clone()).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

/// Valencies `n_0..n_5` of the six-relation scheme on all anisotropic points.
pub fn oddq_valencies(n: u32, q: u64, eps: i8) -> Result<Vec<Rat>, FormulaError> {
    check_odd_quadric(n, q, eps)?;
    let c = Ctx::new(q, eps);
    let n = n as i64;
    let a = c.p((n - 1) / 2);
    let e = &c.e;
    Ok(vec![
        Rat::one(),
        c.p(n - 1) - rat(1),
        quarter() * &a * (&a + e) * c.qp(-3),
        quarter() * &a * (&a - e) * c.qp(-1),
        quarter() * &a * (&a + e) * c.qp(-1),
        quarter() * &a * (&a - e) * c.qp(1),
    ])
}

const ODDQ_RELATIONS: [&str; 6] = ["R0", "R1", "R2", "R3", "R4", "R5"];
const ODDQ_EIGENSPACES: [&str; 6] = ["V0", "V1", "V2", "V3", "V4", "V5"];

/// Full intersection tensor of the six-relation scheme, before dropping
/// empty relations.
pub fn oddq_tensor_full(n: u32, q: u64, eps: i8) -> Result<Tensor, FormulaError> {
    let nv = oddq_valencies(n, q, eps)?;
    let c = Ctx::new(q, eps);
    let n = n as i64;
    let a = c.p((n - 1) / 2);
    let b = c.p((n - 3) / 2);
    let e = &c.e;
    let qq = &c.q;
    let qn2 = c.p(n - 2);
    let (q1, q3, q5, qp1) = (c.qp(-1), c.qp(-3), c.qp(-5), c.qp(1));
    let am = &a - e;
    let ap = &a + e;
    let h = half();
    let o = eighth();

    let mut p = vec![vec![vec![Rat::zero(); 6]; 6]; 6];
    for i in 0..6 {
        p[0][i][i] = nv[i].clone();
    }
    for (k, layer) in p.iter_mut().enumerate().skip(1) {
        layer[0][k] = Rat::one();
        layer[k][0] = Rat::one();
    }
    let mut set = |k: usize, i: usize, j: usize, v: Rat| {
        p[k][i][j] = v.clone();
        p[k][j][i] = v;
    };

    // R1
    set(1, 1, 1, rat(2) * (&qn2 - rat(1)));
    set(1, 1, 2, &h * &qn2 * &q3);
    set(1, 1, 3, &h * &qn2 * &q1);
    set(1, 2, 2, &o * &a * (&a - rat(3) * &b + rat(2) * e) * &q3);
    set(1, 2, 3, &o * &qn2 * &q1 * &q3);
    set(1, 3, 3, &o * &a * (&a - &b - rat(2) * e) * &q1);
    set(1, 4, 4, &o * &a * (&a - &b + rat(2) * e) * &q1);
    set(1, 4, 5, &o * &qn2 * &qp1 * &q1);
    set(1, 5, 5, &o * &a * (&a + &b - rat(2) * e) * &qp1);

    // R2
    set(2, 1, 1, rat(2) * &b * &am);
    set(2, 1, 2, &h * &am * (&b * &q3 + rat(2) * e));
    set(2, 1, 3, &h * &b * &am * &q1);
    set(2, 2, 2, &o * &b * (&am * &q3 * &q3 + rat(4) * e * qq * &q5));
    set(2, 2, 3, &o * &b * &am * &q1 * &q3);
    set(2, 3, 3, &o * &b * &am * &q1 * &q1);
    set(2, 4, 4, &o * &b * (&am * &q1 + rat(4) * e * qq) * &q1);
    set(2, 4, 5, &o * &b * &am * &qp1 * &q1);
    set(2, 5, 5, &o * &b * &am * &qp1 * &qp1);

    // R3
    set(3, 1, 1, rat(2) * &b * &ap);
    set(3, 1, 2, &h * &b * &ap * &q3);
    set(3, 1, 3, &h * &ap * (&a - &b - rat(2) * e));
    set(3, 2, 2, &o * &b * &ap * &q3 * &q3);
    set(3, 2, 3, &o * &b * &ap * &q1 * &q3);
    set(3, 3, 3, &o * &b * (&ap * &q1 * &q1 - rat(4) * e * qq * &q3));
    set(3, 4, 4, &o * &b * &ap * &q1 * &q1);
    set(3, 4, 5, &o * &b * &ap * &q1 * &qp1);
    set(3, 5, 5, &o * &b * (&ap * &qp1 - rat(4) * e * qq) * &qp1);

    // R4
    set(4, 1, 4, &h * &am * (&a - &b + rat(2) * e));
    set(4, 1, 5, &h * &b * &am * &qp1);
    set(4, 2, 4, &o * &b * (&am * &q1 + rat(4) * e * qq) * &q3);
    set(4, 2, 5, &o * &b * &am * &qp1 * &q3);
    set(4, 3, 4, &o * &b * &am * &q1 * &q1);
    set(4, 3, 5, &o * &b * &am * &qp1 * &q1);

    // R5
    set(5, 1, 4, &h * &b * &ap * &q1);
    set(5, 1, 5, &h * &ap * (&a + &b - rat(2) * e));
    set(5, 2, 4, &o * &b * &ap * &q1 * &q3);
    set(5, 2, 5, &o * &b * &ap * &qp1 * &q3);
    set(5, 3, 4, &o * &b * &ap * &q1 * &q1);
    set(5, 3, 5, &o * &b * (&ap * &qp1 - rat(4) * e * qq) * &q1);

    Ok(Tensor {
        relations: ODDQ_RELATIONS.iter().map(|s| s.to_string()).collect(),
        n: nv,
        p,
    })
}

/// Intersection tensor with empty relations dropped (`R2` when `q = 3`).
pub fn oddq_tensor(n: u32, q: u64, eps: i8) -> Result<Tensor, FormulaError> {
    Ok(oddq_tensor_full(n, q, eps)?.prune())
}

/// The six-relation eigenmatrices before any reduction.
pub fn oddq_pq_full(n: u32, q: u64, eps: i8) -> Result<EigenData, FormulaError> {
    let nv = oddq_valencies(n, q, eps)?;
    let c = Ctx::new(q, eps);
    let n = n as i64;
    let m = (n - 1) / 2;
    let a = c.p(m);
    let b = c.p(m - 1);
    let e = &c.e;
    let (q1, q3, qp1) = (c.qp(-1), c.qp(-3), c.qp(1));
    let qs1 = &c.q * &c.q - rat(1);
    let qq = &c.q;
    let t = quarter() * e * &b;
    let z = Rat::zero;
    let one = Rat::one;

    let p = RatMatrix::from_rows(vec![
        nv.clone(),
        vec![one(), nv[1].clone(), nv[2].clone(), nv[3].clone(), -&nv[4], -&nv[5]],
        vec![
            one(),
            e * &b - rat(1),
            &t * &qp1 * &q3,
            -&t * &q1 * &q1,
            &t * &q1 * &qp1,
            -&t * &q1 * &qp1,
        ],
        vec![
            one(),
            e * &b - rat(1),
            &t * &qp1 * &q3,
            -&t * &q1 * &q1,
            -&t * &q1 * &qp1,
            &t * &q1 * &qp1,
        ],
        vec![one(), e * &a - rat(1), -(e * &a), z(), z(), z()],
        vec![one(), -(e * &a) - rat(1), z(), e * &a, z(), z()],
    ])?;

    let qm1 = c.p(m + 1) - e;
    let big2 = qq * qq * (c.p(n - 1) - rat(1)) / &qs1;
    let small2 = qq * qq * (e * &b - rat(1)) / &qs1;
    let minus = e * qq / &q1 * (&a - e);
    let plus = e * qq / &qp1 * (&a + e);
    let q4 = &q3 / (rat(2) * &q1);
    let q5 = &q1 / (rat(2) * &qp1);
    let qmat = RatMatrix::from_rows(vec![
        vec![
            one(),
            one(),
            big2.clone(),
            big2,
            &q4 * (&a + e) * &qm1,
            &q5 * (&a - e) * &qm1,
        ],
        vec![one(), one(), small2.clone(), small2, e * &q4 * &qm1, -(e * &q5 * &qm1)],
        vec![
            one(),
            one(),
            minus.clone(),
            minus.clone(),
            -(e * rat(2) / &q1 * &qm1),
            z(),
        ],
        vec![
            one(),
            one(),
            -plus.clone(),
            -plus.clone(),
            z(),
            e * rat(2) / &qp1 * &qm1,
        ],
        vec![one(), rat(-1), minus.clone(), -minus, z(), z()],
        vec![one(), rat(-1), -plus.clone(), plus, z(), z()],
    ])?;
    Ok(EigenData::labelled(&ODDQ_RELATIONS, &ODDQ_EIGENSPACES, p, qmat))
}

/// Eigenmatrices of the six-relation scheme; at `q = 3` the empty relation
/// `R2` and the zero eigenspace `V4` are removed.
pub fn oddq_pq(n: u32, q: u64, eps: i8) -> Result<EigenData, FormulaError> {
    Ok(oddq_pq_full(n, q, eps)?.prune())
}

/// Eigenmatrices of the scheme on one quadratic type: `P` without the last
/// two columns and without rows `V1`, `V3`.
pub fn oddq_subscheme_pq(n: u32, q: u64, eps: i8) -> Result<EigenData, FormulaError> {
    let full = oddq_pq_full(n, q, eps)?;
    let p = full.p.minor(&[1, 3], &[4, 5]);
    let mut data = EigenData::from_p(&ODDQ_RELATIONS[..4], &["V0", "V2", "V4", "V5"], p.clone())?;
    if !full.n_vec[2].is_zero() {
        return Ok(data);
    }
    // q = 3: R2 is empty and V4 carries no multiplicity
    let p = p.minor(&[2], &[2]);
    data = EigenData::from_p(&["R0", "R1", "R3"], &["V0", "V2", "V5"], p)?;
    data.dropped = vec![
        "relation R2 (valency 0)".to_string(),
        "eigenspace V4 (multiplicity 0)".to_string(),
    ];
    Ok(data)
}

/// Relation labels of the even-characteristic scheme.
pub fn evenchar_relations(n: u32) -> Vec<&'static str> {
    if n % 2 == 1 {
        vec!["R0", "R1", "R2", "R3"]
    } else {
        vec!["R0", "R1a", "R1n", "R2", "R3"]
    }
}

/// Eigenmatrices of the scheme on the anisotropic points of a quadric in
/// even characteristic, with empty relations and eigenspaces removed.
pub fn evenchar_pq(n: u32, q: u64, eps: i8) -> Result<EigenData, FormulaError> {
    Ok(evenchar_pq_full(n, q, eps)?.prune())
}

pub fn evenchar_pq_full(n: u32, q: u64, eps: i8) -> Result<EigenData, FormulaError> {
    match prime_power(q) {
        Some((2, _)) => {}
        _ => return bad(format!("q = {q} must be a power of 2")),
    }
    if n < 2 {
        return bad("n must be at least 2");
    }
    let odd = n % 2 == 1;
    let want = if odd { [1, -1] } else { [0, 0] };
    if !want.contains(&eps) {
        return bad(format!("ε = {eps} does not match n = {n}"));
    }
    let c = Ctx::new(q, eps);
    let e = &c.e;
    let qq = &c.q;
    let h = half();
    let one = Rat::one;
    let z = Rat::zero;
    if odd {
        let m = (n as i64 - 1) / 2;
        let a = c.p(m);
        let cm = c.p(m - 1);
        let q2 = c.qp(-2);
        let qm1 = c.p(m + 1) - e;
        let p = RatMatrix::from_rows(vec![
            vec![
                one(),
                c.p(2 * m) - rat(1),
                &h * &a * (&a + e) * &q2,
                &h * c.p(m + 1) * (&a - e),
            ],
            vec![
                one(),
                e * &cm - rat(1),
                &h * e * &cm * c.qp(1) * &q2,
                -(&h * e * &a * c.qp(-1)),
            ],
            vec![one(), -(e * &a) - rat(1), z(), e * &a],
            vec![one(), e * &a - rat(1), -(e * &a), z()],
        ])?;
        let qs1 = qq * qq - rat(1);
        let qm = RatMatrix::from_rows(vec![
            vec![
                one(),
                qq * qq * (c.p(2 * m) - rat(1)) / &qs1,
                qq / (rat(2) * c.qp(1)) * (&a - e) * &qm1,
                &q2 / (rat(2) * c.qp(-1)) * (&a + e) * &qm1,
            ],
            vec![
                one(),
                e * qq * qq * (&cm - e) / &qs1,
                -(&h * e * qq * &qm1 / c.qp(1)),
                &h * e * &q2 * &qm1 / c.qp(-1),
            ],
            vec![one(), e * qq * (&a - e) / c.qp(-1), z(), -(e * &qm1 / c.qp(-1))],
            vec![one(), -(e * qq * (&a + e) / c.qp(1)), e * &qm1 / c.qp(1), z()],
        ])?;
        Ok(EigenData::labelled(
            &evenchar_relations(n),
            &["V0", "V1", "V2", "V3"],
            p,
            qm,
        ))
    } else {
        let m = n as i64 / 2;
        let a = c.p(m);
        let cm = c.p(m - 1);
        let q2 = c.qp(-2);
        let p = RatMatrix::from_rows(vec![
            vec![
                one(),
                qq * (c.p(2 * m - 2) - rat(1)),
                q2.clone(),
                &h * c.p(2 * m - 1) * &q2,
                &h * c.p(2 * m),
            ],
            vec![one(), -((&cm + rat(1)) * c.qp(-1)), q2.clone(), &h * &cm * &q2, &h * &a],
            vec![
                one(),
                (&cm - rat(1)) * c.qp(-1),
                q2.clone(),
                -(&h * &cm * &q2),
                -(&h * &a),
            ],
            vec![one(), z(), rat(-1), &h * &a, -(&h * &a)],
            vec![one(), z(), rat(-1), -(&h * &a), &h * &a],
        ])?;
        let (t2, t1, tt) = (c.th(m - 2), c.th(m - 1), c.th(2 * m - 1));
        let x = &h * qq * (&a + rat(1)) * &t2;
        let y = &h * qq * (&cm + rat(1)) * &t1;
        let w = &h * &q2 * &tt;
        let u = &h * (&a + rat(1)) / &cm * &t2;
        let v = -(&h * (&cm + rat(1)) / &cm * &t1);
        let qm = RatMatrix::from_rows(vec![
            vec![one(), x.clone(), y.clone(), w.clone(), w],
            vec![one(), -(&h * (&a + rat(1))), &h * (&a - rat(1)), z(), z()],
            vec![one(), x, y, -(&h * &tt), -(&h * &tt)],
            vec![
                one(),
                u.clone(),
                v.clone(),
                &tt / (rat(2) * &cm),
                -(&tt / (rat(2) * &cm)),
            ],
            vec![one(), u, v, -(&h * &q2 / &a * &tt), &h * &q2 / &a * &tt],
        ])?;
        Ok(EigenData::labelled(
            &evenchar_relations(n),
            &["V0", "V1", "V2", "V3", "V4"],
            p,
            qm,
        ))
    }
}

/// Parameters and spectrum of the tangency graph on one class of anisotropic
/// points of a parabolic quadric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Srg {
    pub v: i64,
    pub k: i64,
    pub lambda: i64,
    pub mu: i64,
    /// `(eigenvalue, multiplicity)`, valency first.
    pub spectrum: Vec<(i64, i64)>,
}

fn check_parabolic(n: u32, q: u64, eps: i8) -> Result<(), FormulaError> {
    if n < 2 || n % 2 == 1 {
        return bad(format!("n = {n} must be even and at least 2"));
    }
    if eps != 1 && eps != -1 {
        return bad(format!("ε = {eps} must be ±1 (point class)"));
    }
    match prime_power(q) {
        Some((p, _)) if p != 2 => Ok(()),
        _ => bad(format!("q = {q} must be an odd prime power")),
    }
}

fn int(x: Rat) -> i64 {
    assert!(x.is_integer(), "{x} is not an integer");
    i64::try_from(x.to_integer()).expect("fits in i64")
}

pub fn wilbrink_srg(n: u32, q: u64, eps: i8) -> Result<Srg, FormulaError> {
    check_parabolic(n, q, eps)?;
    let c = Ctx::new(q, eps);
    let e = &c.e;
    let n = n as i64;
    let h = c.p(n / 2);
    let g = c.p(n / 2 - 1);
    let k = (&h - e) * (&g + e);
    Ok(Srg {
        v: int(half() * &h * (&h + e)),
        k: int(k.clone()),
        lambda: int(rat(2) * (c.p(n - 2) - rat(1)) + e * &g * c.qp(-1)),
        mu: int(rat(2) * &g * (&g + e)),
        spectrum: vec![
            (int(k), 1),
            (int(-(e * &g) - rat(1)), int(c.qp(-2) / rat(2) * c.th(n - 1))),
            (
                int(e * c.qp(-2) * &g - rat(1)),
                int(&c.q / rat(2) * (&h - e) * (&g + e) / c.qp(-1)),
            ),
        ],
    })
}

/// Eigenmatrices of the two-class scheme `R0, R1, R2 ∪ R3` on one class.
pub fn wilbrink_pq(n: u32, q: u64, eps: i8) -> Result<EigenData, FormulaError> {
    let s = wilbrink_srg(n, q, eps)?;
    let row = |x: i64| vec![rat(1), rat(x), rat(-1 - x)];
    let p = RatMatrix::from_rows(vec![
        vec![rat(1), rat(s.k), rat(s.v - s.k - 1)],
        row(s.spectrum[1].0),
        row(s.spectrum[2].0),
    ])?;
    // at n = 2, ε = -1 the graph is empty
    Ok(EigenData::from_p(&["R0", "R1", "R23"], &["V0", "V1", "V2"], p)?.prune())
}

fn check_hermitian(n: u32, q: u64) -> Result<(), FormulaError> {
    if n < 2 {
        return bad("n must be at least 2");
    }
    match prime_power(q) {
        Some(_) => Ok(()),
        None => bad(format!("q = {q} is not a prime power")),
    }
}

fn herm_eps(n: u32) -> i8 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Eigenmatrices of the scheme of the graph `NU(n+1, q²)`; `q` is the order
/// of the subfield.
pub fn nu_pq(n: u32, q: u64) -> Result<EigenData, FormulaError> {
    check_hermitian(n, q)?;
    let c = Ctx::new(q, herm_eps(n));
    let e = &c.e;
    let n = n as i64;
    let qq = &c.q;
    let s = qq * qq - qq - rat(1);
    let qn = c.p(n) - e;
    let one = Rat::one;
    let p = RatMatrix::from_rows(vec![
        vec![one(), &qn * (c.p(n - 1) + e), c.p(n - 1) * &qn / c.qp(1) * &s],
        vec![one(), -(e * c.p(n - 1)) - rat(1), e * c.p(n - 1)],
        vec![one(), e * c.p(n - 2) * &s - rat(1), -(e * c.p(n - 2) * &s)],
    ])?;
    let den = c.qp(1) * (qq * qq - rat(1));
    let qn1 = c.p(n + 1) + e;
    let x = e * &s / &den * &qn1;
    let y = e * qq * qq * (c.p(n - 1) + e) / (qq * qq - rat(1));
    let qm = RatMatrix::from_rows(vec![
        vec![
            one(),
            &s / &den * &qn1 * &qn,
            qq * qq * qq / &den * (c.p(n - 1) + e) * &qn,
        ],
        vec![one(), -x.clone(), x - rat(1)],
        vec![one(), &y - rat(1), -y],
    ])?;
    Ok(EigenData::labelled(&["R0", "R1", "R2"], &["V0", "V1", "V2"], p, qm))
}

pub const FISSION_RELATIONS: [&str; 4] = ["R0", "R1", "R2perp", "R2nonperp"];

/// Eigenmatrices of the fission scheme `R0, R1, R2⊥, R2∦`. The rows are the
/// eigenspaces of the orthogonality graph: the trivial one, then `εq^{n-1}`,
/// `-εq^{n-1}` (both inside the second eigenspace of the `NU` scheme) and
/// `-εq^{n-2}` (the third). At `q = 2` the relation `R2∦` and the eigenvalue
/// `-εq^{n-1}` vanish.
pub fn fission_pq(n: u32, q: u64) -> Result<EigenData, FormulaError> {
    let nu = nu_pq(n, q)?;
    let c = Ctx::new(q, herm_eps(n));
    let e = &c.e;
    let n = n as i64;
    let l0 = c.p(n - 1) * (c.p(n) - e) / c.qp(1);
    let l1 = e * c.p(n - 1);
    let l4 = -(e * c.p(n - 2));
    let one = Rat::one;
    let p = RatMatrix::from_rows(vec![
        vec![one(), nu.p.get(0, 1).clone(), l0.clone(), nu.p.get(0, 2) - &l0],
        vec![one(), nu.p.get(1, 1).clone(), l1.clone(), nu.p.get(1, 2) - &l1],
        vec![one(), nu.p.get(1, 1).clone(), -l1.clone(), nu.p.get(1, 2) + &l1],
        vec![one(), nu.p.get(2, 1).clone(), l4.clone(), nu.p.get(2, 2) - &l4],
    ])?;
    let labels = ["W0", "W1", "W2", "W4"];
    if q != 2 {
        return EigenData::from_p(&FISSION_RELATIONS, &labels, p);
    }
    let p = p.minor(&[2], &[3]);
    let mut data = EigenData::from_p(&FISSION_RELATIONS[..3], &["W0", "W1", "W4"], p)?;
    data.dropped = vec![
        "relation R2nonperp (valency 0)".to_string(),
        "eigenspace W2 (multiplicity 0)".to_string(),
    ];
    Ok(data)
}

/// Which orthogonality graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrthoCase {
    Hermitian,
    EllHyp,
    Parabolic,
}

fn check_ortho(case: OrthoCase, n: u32, q: u64, eps: i8) -> Result<(), FormulaError> {
    match case {
        OrthoCase::Hermitian => check_hermitian(n, q),
        OrthoCase::EllHyp => check_odd_quadric(n, q, eps),
        OrthoCase::Parabolic => {
            if eps != 0 {
                return bad("parabolic quadrics have ε = 0");
            }
            check_parabolic(n, q, 1)
        }
    }
}

fn push_merge(out: &mut Vec<(Surd, u64)>, value: Surd, mult: Rat) {
    let mult = u64::try_from(int(mult)).expect("nonnegative multiplicity");
    if mult == 0 {
        return;
    }
    match out.iter_mut().find(|(v, _)| *v == value) {
        Some((_, m)) => *m += mult,
        None => out.push((value, mult)),
    }
}

/// The spectrum of the orthogonality graph on all anisotropic
/// points; coinciding eigenvalues are merged and multiplicity-zero ones left
/// out (see [`ortho_absent`]).
pub fn ortho_spectrum(case: OrthoCase, n: u32, q: u64, eps: i8) -> Result<Vec<(Surd, u64)>, FormulaError> {
    check_ortho(case, n, q, eps)?;
    let n = n as i64;
    let mut out = Vec::new();
    match case {
        OrthoCase::Hermitian => {
            let c = Ctx::new(q, herm_eps(n as u32));
            let e = &c.e;
            let qq = &c.q;
            let a = c.p(n + 1) + e;
            let b = c.p(n) - e;
            push_merge(&mut out, Surd::rational(c.p(n - 1) * &b / c.qp(1)), rat(1));
            push_merge(
                &mut out,
                Surd::rational(e * c.p(n - 1)),
                qq / (rat(2) * c.qp(1) * c.qp(1)) * &a * &b,
            );
            push_merge(
                &mut out,
                Surd::rational(-(e * c.p(n - 1))),
                c.qp(-2) / (rat(2) * (qq * qq - rat(1))) * &a * &b,
            );
            push_merge(
                &mut out,
                Surd::rational(-(e * c.p(n - 2))),
                qq * qq * qq * &b / (qq * qq - rat(1)) * (c.p(n - 1) + e) / c.qp(1),
            );
        }
        OrthoCase::EllHyp => {
            let c = Ctx::new(q, eps);
            let e = &c.e;
            let qq = &c.q;
            let m = (n - 1) / 2;
            push_merge(&mut out, Surd::rational(c.p(n - 1)), rat(1));
            push_merge(
                &mut out,
                Surd::rational(e * c.p(m)),
                (c.p(n + 1) - rat(2) * c.p(n) + rat(1)) / (rat(2) * c.qp(-1)) - e * c.p(m),
            );
            push_merge(
                &mut out,
                Surd::rational(-(e * c.p(m))),
                (c.p(n + 1) - rat(1)) / (rat(2) * c.qp(1)),
            );
            push_merge(
                &mut out,
                Surd::rational(e * c.p(m - 1)),
                qq * qq * (c.p(n - 1) - rat(1)) / (qq * qq - rat(1)),
            );
        }
        OrthoCase::Parabolic => {
            let c = Ctx::new(q, 0);
            let qt = &c.q * c.th(n - 2);
            let g = c.p(n / 2 - 1);
            let pm = half() * (c.p(n) - &qt) - rat(1);
            push_merge(&mut out, Surd::rational(c.p(n - 1)), rat(1));
            push_merge(&mut out, Surd::new(Rat::zero(), g.clone(), q), pm.clone());
            push_merge(&mut out, Surd::new(Rat::zero(), -g.clone(), q), pm);
            push_merge(&mut out, Surd::rational(g.clone()), half() * (&qt - c.p(n / 2)));
            push_merge(&mut out, Surd::rational(-g), half() * (&qt + c.p(n / 2)));
            push_merge(&mut out, Surd::int(0), rat(1));
        }
    }
    Ok(out)
}

/// Candidate eigenvalues that the trace equations show to be absent
/// (multiplicity zero), unless they coincide with a listed one.
pub fn ortho_absent(case: OrthoCase, n: u32, q: u64, eps: i8) -> Result<Vec<Surd>, FormulaError> {
    let listed = ortho_spectrum(case, n, q, eps)?;
    let n = n as i64;
    let cand = match case {
        OrthoCase::Hermitian => {
            let c = Ctx::new(q, herm_eps(n as u32));
            let mut v = vec![Surd::rational(&c.e * c.p(n - 2))];
            if q == 2 {
                v.push(Surd::rational(-(&c.e * c.p(n - 1))));
            }
            v
        }
        OrthoCase::EllHyp => {
            let c = Ctx::new(q, eps);
            vec![Surd::rational(-(&c.e * c.p((n - 3) / 2)))]
        }
        OrthoCase::Parabolic => Vec::new(),
    };
    Ok(cand
        .into_iter()
        .filter(|s| listed.iter().all(|(v, _)| v != s))
        .collect())
}

/// Number of vertices of the orthogonality graph.
pub fn ortho_points(case: OrthoCase, n: u32, q: u64, eps: i8) -> Result<Rat, FormulaError> {
    check_ortho(case, n, q, eps)?;
    let n = n as i64;
    Ok(match case {
        OrthoCase::Hermitian => {
            let c = Ctx::new(q, herm_eps(n as u32));
            c.p(n) * (c.p(n + 1) + &c.e) / c.qp(1)
        }
        OrthoCase::EllHyp => {
            let c = Ctx::new(q, eps);
            c.p((n - 1) / 2) * (c.p((n + 1) / 2) - &c.e)
        }
        OrthoCase::Parabolic => {
            let c = Ctx::new(q, 0);
            c.th(n) - c.th(n - 1)
        }
    })
}

/// Degree of the orthogonality graph. The parabolic graph is not regular;
/// there this is its largest eigenvalue, see [`parabolic_degree`].
pub fn ortho_degree(case: OrthoCase, n: u32, q: u64, eps: i8) -> Result<Rat, FormulaError> {
    check_ortho(case, n, q, eps)?;
    let n = n as i64;
    Ok(match case {
        OrthoCase::Hermitian => {
            let c = Ctx::new(q, herm_eps(n as u32));
            c.p(n - 1) * (c.p(n) - &c.e) / c.qp(1)
        }
        _ => Ctx::new(q, 0).p(n - 1),
    })
}

/// Degree of a point of `𝒫^eps` in the parabolic orthogonality graph,
/// `q^{n/2-1}(q^{n/2} - eps)`.
pub fn parabolic_degree(n: u32, q: u64, eps: i8) -> Result<Rat, FormulaError> {
    check_parabolic(n, q, eps)?;
    let c = Ctx::new(q, eps);
    let h = n as i64 / 2;
    Ok(c.p(h - 1) * (c.p(h) - &c.e))
}

/// `tr A^3`, the number of ordered triangles.
pub fn ortho_triangle_trace(case: OrthoCase, n: u32, q: u64, eps: i8) -> Result<Rat, FormulaError> {
    check_ortho(case, n, q, eps)?;
    let n = n as i64;
    Ok(match case {
        OrthoCase::Hermitian => {
            let c = Ctx::new(q, herm_eps(n as u32));
            let e = &c.e;
            (c.p(n) * (c.p(n + 1) + e) / c.qp(1))
                * (c.p(n - 1) * (c.p(n) - e) / c.qp(1))
                * (c.p(n - 2) * (c.p(n - 1) + e) / c.qp(1))
        }
        OrthoCase::EllHyp => {
            let c = Ctx::new(q, eps);
            c.p((3 * n - 5) / 2) * (c.p((n + 1) / 2) - &c.e) * (c.p(n - 1) - rat(1))
        }
        OrthoCase::Parabolic => {
            let c = Ctx::new(q, 0);
            c.p(2 * n - 3) * (c.p(n) - rat(1))
        }
    })
}

/// Coefficients of `I`, `A1`, `A2` in `A_{2⊥}^2` for the Hermitian graph,
/// where `A2 = J - I - A1`.
pub fn herm_a2_coefficients(n: u32, q: u64) -> Result<[Rat; 3], FormulaError> {
    check_hermitian(n, q)?;
    let c = Ctx::new(q, herm_eps(n));
    let e = &c.e;
    let n = n as i64;
    Ok([
        c.p(n - 1) * (c.p(n) - e) / c.qp(1),
        c.p(n - 1) * (c.p(n - 2) - e) / c.qp(1),
        c.p(n - 2) * (c.p(n - 1) + e) / c.qp(1),
    ])
}

/// Coefficients of `A0..A5` in `A^2` for the elliptic or hyperbolic graph.
pub fn ellhyp_a2_coefficients(n: u32, q: u64, eps: i8) -> Result<[Rat; 6], FormulaError> {
    check_odd_quadric(n, q, eps)?;
    let c = Ctx::new(q, eps);
    let e = &c.e;
    let n = n as i64;
    let m = (n - 1) / 2;
    let minus = c.p(m - 1) * (c.p(m) - e);
    let plus = c.p(m - 1) * (c.p(m) + e);
    Ok([c.p(n - 1), c.p(n - 2), minus.clone(), plus.clone(), minus, plus])
}

/// Coefficients `(j, i, t)` in `A^2 = jJ + iI + t·diag(-I₊-T₊, I₋+T₋)` for
/// the parabolic graph, points of `𝒫⁺` first.
pub fn parabolic_a2_coefficients(n: u32, q: u64) -> Result<[Rat; 3], FormulaError> {
    check_parabolic(n, q, 1)?;
    let c = Ctx::new(q, 0);
    let n = n as i64;
    Ok([c.p(n - 2), c.p(n - 2) * c.qp(-1), c.p(n / 2 - 1)])
}

/// `|𝒫^ε| = ½ q^{n/2}(q^{n/2} + ε)` for a parabolic quadric.
pub fn parabolic_class_size(n: u32, q: u64, eps: i8) -> Result<Rat, FormulaError> {
    check_parabolic(n, q, eps)?;
    let c = Ctx::new(q, eps);
    let h = c.p(n as i64 / 2);
    Ok(half() * &h * (&h + &c.e))
}

/// Planes through a non-isotropic line, by type. Rows `t0, t1, t2, tS, tN`;
/// columns: tangent line with square-type points, tangent line with
/// nonsquare-type points, secant, passant.
pub fn plane_counts(n: u32, q: u64, eps: i8) -> Result<[[Rat; 4]; 5], FormulaError> {
    check_odd_quadric(n, q, eps)?;
    let c = Ctx::new(q, eps);
    let e = &c.e;
    let n = n as i64;
    let a = c.p((n - 1) / 2);
    let b = c.p((n - 3) / 2);
    let h = half();
    let t0 = &h * (c.p(n - 3) - e * &b);
    let t2 = &h * (c.p(n - 3) + e * &b);
    let sec = &h * (c.p(n - 2) - e * &b);
    let pas = &h * (c.p(n - 2) + e * &b);
    let z = Rat::zero;
    Ok([
        [t0.clone(), t0, z(), (&a + e) * (&b - e) / c.qp(-1)],
        [c.th(n - 4), c.th(n - 4), z(), z()],
        [t2.clone(), t2, (&a - e) * (&b + e) / c.qp(-1), z()],
        [c.p(n - 2), z(), sec.clone(), pas.clone()],
        [z(), c.p(n - 2), sec, pas],
    ])
}

/// Size of a clique on an `S_1`-space, and the Delsarte bound for `R1` as
/// displayed.
pub fn delsarte_r1(n: u32, q: u64, eps: i8) -> Result<(Rat, Rat), FormulaError> {
    check_odd_quadric(n, q, eps)?;
    let c = Ctx::new(q, eps);
    let n = n as i64;
    let m = (n - 1) / 2;
    let bound = (c.p(n - 1) - rat(1)) / (c.p(m) + rat(1)) + rat(1);
    Ok((c.p(m), bound))
}

/// Data of the weighted Hoffman coclique `π^⊥ ∩ 𝒫`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HoffmanDisplay {
    /// Relation indices `(5+ε)/2` and `(9+ε)/2`.
    pub relations: [usize; 2],
    #[serde(serialize_with = "ser_rats")]
    pub weights: Vec<Rat>,
    #[serde(serialize_with = "ser_rats")]
    pub values: Vec<Rat>,
}

impl HoffmanDisplay {
    pub fn weights(&self) -> (&Rat, &Rat) {
        (&self.weights[0], &self.weights[1])
    }

    /// Largest eigenvalue of the weighted matrix.
    pub fn lambda_max(&self) -> &Rat {
        &self.values[0]
    }

    /// Smallest eigenvalue, attained on `V2`.
    pub fn lambda_min(&self) -> &Rat {
        &self.values[1]
    }

    /// `(q - ε) q^{(n-1)/2}`.
    pub fn size(&self) -> &Rat {
        &self.values[2]
    }
}

pub fn hoffman_display(n: u32, q: u64, eps: i8) -> Result<HoffmanDisplay, FormulaError> {
    check_odd_quadric(n, q, eps)?;
    let c = Ctx::new(q, eps);
    let e = &c.e;
    let n = n as i64;
    let m = (n - 1) / 2;
    let w1 = &c.q + e;
    let w2 = c.qp(-2) + e;
    let lmax = half() * c.p(m) * (c.p(m) - rat(1)) * &w1 * &w2;
    let lmin = -(half() * c.p(m - 1) * (&c.q - e) * &w1 * &w2);
    let size = (&c.q - e) * c.p(m);
    let i = ((5 + eps) / 2) as usize;
    Ok(HoffmanDisplay {
        relations: [i, i + 2],
        weights: vec![w1, w2],
        values: vec![lmax, lmin, size],
    })
}

/// Number of anisotropic points of `Q^ε(n,q)` (`ε = 0` parabolic) for odd q.
pub fn quadric_anisotropic(n: u32, q: u64, eps: i8) -> Rat {
    let c = Ctx::new(q, eps);
    let n = n as i64;
    if eps == 0 {
        c.p(n)
    } else {
        c.p((n - 1) / 2) * (c.p((n + 1) / 2) - &c.e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{ratio, verify_eigenmatrices};

    fn ints(v: &[Rat]) -> Vec<i64> {
        v.iter().map(|x| int(x.clone())).collect()
    }

    #[test]
    fn valencies_at_3_5_plus() {
        assert_eq!(ints(&oddq_valencies(3, 5, 1).unwrap()), vec![1, 24, 15, 20, 30, 30]);
        assert!(oddq_valencies(3, 3, -1).unwrap()[2].is_zero());
        assert!(oddq_valencies(4, 5, 1).is_err());
        assert!(oddq_valencies(3, 4, 1).is_err());
    }

    #[test]
    fn tensor_anchors() {
        let t = oddq_tensor(3, 5, 1).unwrap();
        assert_eq!(t.p[1][1][1], rat(8));
        assert!(t.p[4][1][1].is_zero());
        assert_eq!(oddq_tensor(3, 3, -1).unwrap().classes(), 4);
    }

    #[test]
    fn oddq_pq_anchors() {
        let d = oddq_pq(3, 5, 1).unwrap();
        assert_eq!(ints(d.p.row(4)), vec![1, 4, -5, 0, 0, 0]);
        assert_eq!(ints(&d.m_vec), vec![1, 1, 25, 25, 36, 32]);
        let d3 = oddq_pq(3, 3, -1).unwrap();
        assert_eq!(d3.relations, vec!["R0", "R1", "R3", "R4", "R5"]);
        assert_eq!(d3.eigenspaces, vec!["V0", "V1", "V2", "V3", "V5"]);
    }

    #[test]
    fn oddq_pq_certified_against_formula_tensor() {
        for &(n, q, e) in &[
            (3, 3, 1),
            (3, 3, -1),
            (3, 5, 1),
            (3, 5, -1),
            (3, 7, 1),
            (5, 3, -1),
            (5, 5, 1),
            (7, 3, 1),
        ] {
            let t = oddq_tensor(n, q, e).unwrap();
            let d = oddq_pq(n, q, e).unwrap();
            assert_eq!(t.relations, d.relations);
            let r = verify_eigenmatrices(&t.intersection_matrices(), &d.p, &d.q, &d.n_vec, &d.m_vec, &d.points());
            assert!(r.passed(), "({n},{q},{e}): {r:?}");
        }
    }

    #[test]
    fn subscheme_consistent() {
        for &(n, q, e) in &[(3, 3, 1), (3, 5, -1), (5, 3, 1), (3, 7, 1)] {
            let d = oddq_subscheme_pq(n, q, e).unwrap();
            assert!(d.consistency().passed(), "{d:?}");
            assert_eq!(d.points() * rat(2), quadric_anisotropic(n, q, e));
        }
        assert_eq!(oddq_subscheme_pq(3, 3, 1).unwrap().classes(), 2);
    }

    #[test]
    fn evenchar_anchors() {
        let d = evenchar_pq(3, 4, -1).unwrap();
        assert_eq!(ints(d.p.row(0)), vec![1, 15, 12, 40]);
        assert_eq!(d.points(), rat(68));
        assert_eq!(evenchar_pq(3, 2, 1).unwrap().classes(), 2);
        assert_eq!(evenchar_pq(3, 2, -1).unwrap().dropped.len(), 2);
        for &(n, q, e) in &[
            (3, 2, 1),
            (3, 4, 1),
            (3, 4, -1),
            (5, 2, -1),
            (5, 4, 1),
            (2, 4, 0),
            (4, 2, 0),
            (4, 4, 0),
            (6, 4, 0),
        ] {
            let d = evenchar_pq(n, q, e).unwrap();
            assert!(d.consistency().passed(), "({n},{q},{e}): {d:?}");
        }
    }

    #[test]
    fn wilbrink_anchors() {
        let s = wilbrink_srg(4, 3, 1).unwrap();
        assert_eq!((s.v, s.k, s.lambda, s.mu), (45, 32, 22, 24));
        assert_eq!(s.k * (s.k - s.lambda - 1), (s.v - s.k - 1) * s.mu);
        assert_eq!(s.spectrum[1], (-4, 20));
        for &(n, q, e) in &[(4, 3, 1), (4, 3, -1), (4, 5, 1), (6, 3, -1)] {
            let d = wilbrink_pq(n, q, e).unwrap();
            let s = wilbrink_srg(n, q, e).unwrap();
            let m: Vec<i64> = s.spectrum.iter().map(|x| x.1).collect();
            assert_eq!(ints(&d.m_vec), m);
        }
    }

    #[test]
    fn nu_and_fission() {
        let d = nu_pq(2, 3).unwrap();
        assert_eq!(ints(d.p.row(0)), vec![1, 32, 30]);
        assert_eq!(nu_pq(3, 3).unwrap().points(), rat(540));
        for &(n, q) in &[(2, 2), (2, 3), (3, 2), (3, 3), (2, 5), (4, 3)] {
            assert!(nu_pq(n, q).unwrap().consistency().passed());
            let f = fission_pq(n, q).unwrap();
            assert!(f.consistency().passed(), "({n},{q}) {f:?}");
            let spec = ortho_spectrum(OrthoCase::Hermitian, n, q, 0).unwrap();
            let total: u64 = spec.iter().map(|x| x.1).sum();
            assert_eq!(rat(total as i64), f.points());
        }
        assert_eq!(fission_pq(2, 3).unwrap().classes(), 3);
        assert_eq!(fission_pq(2, 2).unwrap().classes(), 2);
    }

    fn spectrum_ints(s: &[(Surd, u64)]) -> Vec<(i64, u64)> {
        s.iter().map(|(v, m)| (int(v.a.clone()), *m)).collect()
    }

    #[test]
    fn ortho_spectra_anchors() {
        let h = ortho_spectrum(OrthoCase::Hermitian, 2, 3, 0).unwrap();
        assert_eq!(spectrum_ints(&h), vec![(6, 1), (3, 21), (-3, 14), (-1, 27)]);
        let e = ortho_spectrum(OrthoCase::EllHyp, 3, 5, 1).unwrap();
        assert_eq!(spectrum_ints(&e), vec![(25, 1), (5, 42), (-5, 52), (1, 25)]);
        let e = ortho_spectrum(OrthoCase::EllHyp, 3, 3, -1).unwrap();
        assert_eq!(spectrum_ints(&e), vec![(9, 1), (-3, 10), (3, 10), (-1, 9)]);
        let p = ortho_spectrum(OrthoCase::Parabolic, 4, 3, 0).unwrap();
        assert_eq!(p[1], (Surd::new(rat(0), rat(3), 3), 20));
        assert_eq!(p[2], (Surd::new(rat(0), rat(-3), 3), 20));
        assert_eq!(p[3..].iter().map(|x| x.1).collect::<Vec<_>>(), vec![15, 24, 1]);
        // q = 9: the pair is rational
        let p9 = ortho_spectrum(OrthoCase::Parabolic, 2, 9, 0).unwrap();
        assert!(p9.iter().all(|(v, _)| v.is_rational()));
    }

    #[test]
    fn ortho_traces_and_counts() {
        assert_eq!(ortho_triangle_trace(OrthoCase::Parabolic, 4, 3, 0).unwrap(), rat(19440));
        assert_eq!(ortho_triangle_trace(OrthoCase::EllHyp, 3, 5, 1).unwrap(), rat(14400));
        assert_eq!(parabolic_class_size(4, 3, 1).unwrap(), rat(45));
        assert_eq!(parabolic_class_size(4, 3, -1).unwrap(), rat(36));
        assert_eq!(ortho_points(OrthoCase::Hermitian, 2, 3, 0).unwrap(), rat(63));
        assert_eq!(ortho_degree(OrthoCase::Hermitian, 2, 3, 0).unwrap(), rat(6));
        assert_eq!(ortho_absent(OrthoCase::Hermitian, 2, 3, 0).unwrap(), vec![Surd::int(1)]);
        assert!(ortho_absent(OrthoCase::Hermitian, 2, 2, 0).unwrap().len() == 2);
    }

    #[test]
    fn hermitian_q2_merges_coinciding_eigenvalues() {
        // λ0 = εq^{n-1} = 2 at H(2,4)
        let s = ortho_spectrum(OrthoCase::Hermitian, 2, 2, 0).unwrap();
        assert_eq!(s[0].0, Surd::int(2));
        let total: u64 = s.iter().map(|x| x.1).sum();
        assert_eq!(total, 12);
    }

    #[test]
    fn plane_count_anchor() {
        let t = plane_counts(3, 5, 1).unwrap();
        assert_eq!(t[2][0], rat(1));
        assert_eq!(t[3][0], rat(5));
        assert!(plane_counts(3, 4, 1).is_err());
    }

    #[test]
    fn extremal_displays() {
        assert_eq!(delsarte_r1(3, 5, 1).unwrap(), (rat(5), rat(5)));
        assert_eq!(delsarte_r1(5, 3, -1).unwrap(), (rat(9), rat(9)));
        let h = hoffman_display(3, 5, 1).unwrap();
        assert_eq!(h.relations, [3, 5]);
        let n = quadric_anisotropic(3, 5, 1);
        let bound = &n * -h.lambda_min() / (h.lambda_max() - h.lambda_min());
        assert_eq!(&bound, h.size());
        assert_eq!(hoffman_display(3, 3, -1).unwrap().size(), &rat(12));
        assert_eq!(hoffman_display(5, 3, -1).unwrap().weights().1, &rat(0));
        assert_eq!(ratio(1, 2), half());
    }
}
