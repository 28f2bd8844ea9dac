//! Delsarte cliques from `S_1`-spaces and weighted Hoffman cocliques from
//! perps of totally isotropic subspaces, with both ratio bounds.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactla::{rat, CertReport, Rat};
use crate::formulas::{self, EigenData, FormulaError};
use crate::geometry::{FormSpec, GeometryError, ProjPoint, Subspace};
use crate::scheme::{SchemeError, SchemeInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtremalError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("subspace is not totally isotropic")]
    NotTotallyIsotropic,
    #[error("expected projective dimension {expected}, got {got}")]
    WrongDimension { expected: i64, got: i64 },
    #[error("dimension {dim} exceeds the polar rank {rank}")]
    RankExceeded { dim: i64, rank: usize },
    #[error("no {0} found")]
    SearchFailed(&'static str),
    #[error("relation {0} is not present in the scheme")]
    NoRelation(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

fn ser_rat<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_rat<S: Serializer>(x: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Outcome of a ratio bound evaluated on an explicit set.
#[derive(Debug, Clone, Serialize)]
pub struct RatioBoundReport {
    /// `None` when the bound degenerates (zero denominator).
    #[serde(serialize_with = "ser_opt_rat")]
    pub bound: Option<Rat>,
    pub achieved: usize,
    pub tight: bool,
    /// `τ` for Delsarte, the smallest weighted eigenvalue for Hoffman.
    #[serde(serialize_with = "ser_rat")]
    pub eigenvalue: Rat,
    pub checks: CertReport,
}

impl RatioBoundReport {
    fn new(bound: Option<Rat>, achieved: usize, eigenvalue: Rat, mut checks: CertReport) -> RatioBoundReport {
        let tight = bound.as_ref() == Some(&rat(achieved as i64));
        checks.push(
            "size meets the bound",
            tight,
            Some(match &bound {
                Some(b) => format!("size {achieved}, bound {b}"),
                None => format!("size {achieved}, bound undefined"),
            }),
        );
        RatioBoundReport {
            bound,
            achieved,
            tight,
            eigenvalue,
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

fn column(p: &EigenData, label: &str) -> Option<usize> {
    p.relations.iter().position(|r| r == label)
}

/// Delsarte's bound `n_i / (-τ) + 1` for cliques in relation `label`, with
/// `τ` the smallest entry of its column of `P`.
pub fn delsarte_bound(p: &EigenData, label: &str) -> Result<(Rat, Rat), ExtremalError> {
    let c = column(p, label).ok_or_else(|| ExtremalError::NoRelation(label.into()))?;
    let tau = (0..p.eigenspaces.len())
        .map(|j| p.p.get(j, c).clone())
        .min()
        .expect("nonempty");
    let valency = p.n_vec[c].clone();
    if !tau.is_zero() && tau < Rat::zero() {
        Ok((&valency / -&tau + Rat::one(), tau))
    } else {
        Err(ExtremalError::Params(format!("no negative eigenvalue for {label}")))
    }
}

fn require_odd_quadric(form: &FormSpec) -> Result<(usize, i8), ExtremalError> {
    let n = form.n();
    if !form.is_quadric() || n.is_multiple_of(2) || form.q().is_multiple_of(2) {
        return Err(ExtremalError::Params("needs Q^±(n,q) with n and q odd".into()));
    }
    Ok((n, form.epsilon()))
}

fn orthogonal_to(form: &FormSpec, s: &Subspace, v: &[crate::gf::Elem]) -> bool {
    s.basis().iter().all(|b| form.polar(b, v) == 0)
}

/// Greedy totally isotropic subspace of projective dimension `dim`: adjoin
/// the lexicographically first isotropic point in the current perp.
pub fn greedy_totally_isotropic(form: &FormSpec, dim: i64) -> Result<Subspace, ExtremalError> {
    check_rank(form, dim)?;
    let f = form.field();
    let iso: Vec<ProjPoint> = form
        .all_points()?
        .into_iter()
        .filter(|p| form.is_isotropic(p))
        .collect();
    let mut s = Subspace::span(f, form.n() + 1, &[]);
    while s.dim() < dim {
        let next = iso
            .iter()
            .find(|p| orthogonal_to(form, &s, p.coords()) && !s.contains(f, p.coords()))
            .ok_or(ExtremalError::SearchFailed("totally isotropic extension"))?;
        s = s.join(f, &[next.coords()]);
    }
    Ok(s)
}

fn check_rank(form: &FormSpec, dim: i64) -> Result<(), ExtremalError> {
    let rank = form.polar_rank();
    if dim < 0 || dim + 1 > rank as i64 {
        return Err(ExtremalError::RankExceeded { dim, rank });
    }
    Ok(())
}

/// An `(n-1)/2`-space meeting the quadric exactly in a totally isotropic
/// `(n-3)/2`-space.
pub fn find_s1_space(form: &FormSpec) -> Result<Subspace, ExtremalError> {
    let (n, _) = require_odd_quadric(form)?;
    let f = form.field();
    let pi = greedy_totally_isotropic(form, (n as i64 - 3) / 2)?;
    let x = form
        .all_points()?
        .into_iter()
        .find(|p| !form.is_isotropic(p) && orthogonal_to(form, &pi, p.coords()))
        .ok_or(ExtremalError::SearchFailed("anisotropic point in the perp"))?;
    let rho = pi.join(f, &[x.coords()]);
    let ok = rho
        .points(f)
        .iter()
        .all(|p| !form.is_isotropic(p) || pi.contains(f, p.coords()));
    if !ok {
        return Err(ExtremalError::SearchFailed("S_1-space"));
    }
    Ok(rho)
}

/// All totally isotropic subspaces of projective dimension `dim`, sorted by
/// their canonical bases.
pub fn totally_isotropic_spaces(form: &FormSpec, dim: i64) -> Result<Vec<Subspace>, ExtremalError> {
    check_rank(form, dim)?;
    let f = form.field();
    let iso: Vec<ProjPoint> = form
        .all_points()?
        .into_iter()
        .filter(|p| form.is_isotropic(p))
        .collect();
    let mut layer: BTreeSet<Subspace> = iso.iter().map(|p| Subspace::of_points(f, &[p])).collect();
    for _ in 0..dim {
        layer = layer
            .par_iter()
            .flat_map_iter(|s| {
                iso.iter()
                    .filter(|p| orthogonal_to(form, s, p.coords()) && !s.contains(f, p.coords()))
                    .map(|p| s.join(f, &[p.coords()]))
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    Ok(layer.into_iter().collect())
}

fn indices(inst: &SchemeInstance, points: &[ProjPoint]) -> Vec<usize> {
    let at: HashMap<&ProjPoint, usize> = inst.points().iter().enumerate().map(|(i, p)| (p, i)).collect();
    points.iter().filter_map(|p| at.get(p).copied()).collect()
}

/// First pair `(a, b)`, `a < b` in list order, whose relation is one of the
/// raw indices in `forbidden`.
pub fn forbidden_pair(inst: &SchemeInstance, set: &[usize], forbidden: &[usize]) -> Option<(usize, usize)> {
    (0..set.len()).into_par_iter().find_map_first(|a| {
        (a + 1..set.len()).find_map(|b| {
            let raw = inst.raw_index(inst.relation(set[a], set[b]))?;
            forbidden.contains(&raw).then_some((set[a], set[b]))
        })
    })
}

/// Certifies the anisotropic points of an `S_1`-space as a clique in `R1`
/// against Delsarte's bound from the closed-form `P`.
pub fn delsarte_clique_check(inst: &SchemeInstance, rho: &Subspace) -> Result<RatioBoundReport, ExtremalError> {
    let form = inst.form();
    let (n, eps) = require_odd_quadric(form)?;
    let (n32, q) = (n as u32, form.q() as u64);
    let f = form.field();
    let mut checks = CertReport::new();
    let aniso: Vec<ProjPoint> = rho.points(f).into_iter().filter(|p| !form.is_isotropic(p)).collect();
    let set = indices(inst, &aniso);
    let (size, display) = formulas::delsarte_r1(n32, q, eps)?;
    checks.push(
        "clique size q^{(n-1)/2}",
        rat(set.len() as i64) == size,
        Some(format!("{} points", set.len())),
    );
    let off = (0..set.len())
        .flat_map(|a| (a + 1..set.len()).map(move |b| (a, b)))
        .find(|&(a, b)| inst.raw_index(inst.relation(set[a], set[b])) != Some(1));
    checks.push(
        "pairwise in R1",
        off.is_none(),
        off.map(|(a, b)| format!("points {} and {}", set[a], set[b])),
    );
    let closed = inst.params().closed_form()?;
    let (bound, tau) = delsarte_bound(&closed, "R1")?;
    checks.push(
        "bound from P equals the closed form",
        bound == display,
        Some(format!("from P {bound}, closed form {display}")),
    );
    Ok(RatioBoundReport::new(Some(bound), set.len(), tau, checks))
}

/// Certifies the anisotropic points of `π^⊥` as a coclique of the weighted
/// combination of `R_{(5+ε)/2}` and `R_{(9+ε)/2}`, with the weighted Hoffman
/// bound evaluated on the closed-form `P`.
pub fn hoffman_coclique_check(inst: &SchemeInstance, pi: &Subspace) -> Result<RatioBoundReport, ExtremalError> {
    let form = inst.form();
    let (n, eps) = require_odd_quadric(form)?;
    let (n32, q) = (n as u32, form.q() as u64);
    if !pi.is_totally_isotropic(form) {
        return Err(ExtremalError::NotTotallyIsotropic);
    }
    let expected = (n as i64 - 3) / 2;
    if pi.dim() != expected {
        return Err(ExtremalError::WrongDimension {
            expected,
            got: pi.dim(),
        });
    }
    let f = form.field();
    let aniso: Vec<ProjPoint> = pi
        .perp(form)
        .points(f)
        .into_iter()
        .filter(|p| !form.is_isotropic(p))
        .collect();
    let set = indices(inst, &aniso);
    let display = formulas::hoffman_display(n32, q, eps)?;
    let mut checks = CertReport::new();
    checks.push(
        "size (q-ε)q^{(n-1)/2}",
        &rat(set.len() as i64) == display.size(),
        Some(format!("{} points", set.len())),
    );
    let [r1, r2] = display.relations;
    let bad = forbidden_pair(inst, &set, &[r1, r2]);
    checks.push(
        "no pair in the weighted relations",
        bad.is_none(),
        bad.map(|(a, b)| format!("points {a} and {b}")),
    );

    let closed = inst.params().closed_form()?;
    let (w1, w2) = display.weights();
    let col = |j: usize, r: usize| -> Rat {
        column(&closed, &format!("R{r}")).map_or_else(Rat::zero, |c| closed.p.get(j, c).clone())
    };
    let values: Vec<Rat> = (0..closed.eigenspaces.len())
        .map(|j| w1 * col(j, r1) + w2 * col(j, r2))
        .collect();
    let top = values[0].clone();
    let low = values.iter().min().expect("nonempty").clone();
    let points = closed.points();
    let bound = (top != low).then(|| &points * -&low / (&top - &low));
    checks.push(
        "weighted eigenvalues equal the closed form",
        &top == display.lambda_max() && &low == display.lambda_min(),
        Some(format!(
            "from P ({top}, {low}), closed form ({}, {})",
            display.lambda_max(),
            display.lambda_min()
        )),
    );
    Ok(RatioBoundReport::new(bound, set.len(), low, checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{build_scheme, BuildOptions, SchemeFamily, SchemeParams};

    fn inst(n: u32, q: u64, e: i8) -> SchemeInstance {
        let p = SchemeParams::new(SchemeFamily::OddQOddN5, n, q, e).unwrap();
        build_scheme(p, &BuildOptions::default()).unwrap()
    }

    #[test]
    fn isotropic_space_counts() {
        let f = FormSpec::quadric(3, 5, 1).unwrap();
        assert_eq!(totally_isotropic_spaces(&f, 0).unwrap().len(), 36);
        let f = FormSpec::quadric(3, 3, 1).unwrap();
        assert_eq!(totally_isotropic_spaces(&f, 1).unwrap().len(), 8);
        let f = FormSpec::quadric(3, 5, -1).unwrap();
        assert!(matches!(
            totally_isotropic_spaces(&f, 1),
            Err(ExtremalError::RankExceeded { .. })
        ));
    }

    #[test]
    fn tangent_line_clique() {
        let s = inst(3, 5, 1);
        let rho = find_s1_space(s.form()).unwrap();
        assert_eq!(rho.dim(), 1);
        let r = delsarte_clique_check(&s, &rho).unwrap();
        assert!(r.passed(), "{:?}", r.checks.first_failure());
        assert_eq!(r.bound, Some(rat(5)));
        assert_eq!(r.eigenvalue, rat(-6));
    }

    #[test]
    fn point_perp_coclique() {
        let s = inst(3, 5, 1);
        let pi = greedy_totally_isotropic(s.form(), 0).unwrap();
        let r = hoffman_coclique_check(&s, &pi).unwrap();
        assert_eq!(r.achieved, 20);
        assert!(r.passed(), "{:?}", r.checks.first_failure());
        // q = 3, ε = -1: R2 is empty and the second weight vanishes
        let s = inst(3, 3, -1);
        let pi = greedy_totally_isotropic(s.form(), 0).unwrap();
        let r = hoffman_coclique_check(&s, &pi).unwrap();
        assert_eq!((r.achieved, r.bound.clone()), (12, None));
        assert_eq!(r.checks.failures().count(), 1);
    }

    #[test]
    fn anisotropic_perp_is_not_a_coclique() {
        let s = inst(3, 5, 1);
        let x = &s.points()[7];
        let perp = Subspace::of_points(s.form().field(), &[x]).perp(s.form());
        let aniso: Vec<ProjPoint> = perp
            .points(s.form().field())
            .into_iter()
            .filter(|p| !s.form().is_isotropic(p))
            .collect();
        let set = indices(&s, &aniso);
        assert!(forbidden_pair(&s, &set, &formulas::hoffman_display(3, 5, 1).unwrap().relations).is_some());
        assert!(matches!(
            hoffman_coclique_check(&s, &Subspace::of_points(s.form().field(), &[x])),
            Err(ExtremalError::NotTotallyIsotropic)
        ));
    }
}
