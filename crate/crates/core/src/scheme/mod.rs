//! Relation partitions on anisotropic points, axiom verification by exact
//! counting, and the resulting intersection numbers.

mod axioms;
mod report;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::formulas::{self, EigenData, FormulaError, Tensor};
use crate::geometry::{rref, FormSpec, GeometryError, PointTable, ProjPoint};
use crate::gf::{prime_power, Elem, SquareClass};

pub use axioms::{verify_axioms_with, AxiomReport, IntersectionTensor, Mode, Witness};
pub use report::{analyze, analyze_seeded, certify, rediscover, tensor_diff, SchemeReport, TensorMismatch};

/// Default bound on the number of points of an instance.
pub const DEFAULT_MAX_POINTS: usize = 5000;
/// Label matrices are stored densely up to this many points.
pub const DENSE_LIMIT: usize = 2000;

/// Raw label of a pair whose relation was dropped as empty at build time.
pub const DROPPED: u8 = 0xFF;
/// Raw label of a tangent pair with unequal quadratic types.
pub const FORBIDDEN: u8 = 0xFE;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("{points} points exceed the bound {bound}")]
    SizeBound { points: u128, bound: usize },
    #[error("points {0} and {1} are on a tangent line but have different quadratic types")]
    ForbiddenCell(usize, usize),
    #[error("relation of points {0} and {1} was dropped as empty")]
    DroppedRelation(usize, usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeFamily {
    /// Five classes on all anisotropic points, `q` and `n` odd.
    OddQOddN5,
    /// Points of square type only, `q` and `n` odd.
    OddQOddN3,
    EvenCharOddN,
    EvenCharEvenN,
    /// Tangency graph on one class of a parabolic quadric, `q` odd.
    ParabolicWilbrink,
    HermitianNU,
    HermitianFission,
}

impl SchemeFamily {
    pub const ALL: [SchemeFamily; 7] = [
        SchemeFamily::OddQOddN5,
        SchemeFamily::OddQOddN3,
        SchemeFamily::EvenCharOddN,
        SchemeFamily::EvenCharEvenN,
        SchemeFamily::ParabolicWilbrink,
        SchemeFamily::HermitianNU,
        SchemeFamily::HermitianFission,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeFamily::OddQOddN5 => "oddq5",
            SchemeFamily::OddQOddN3 => "oddq3",
            SchemeFamily::EvenCharOddN => "even-odd",
            SchemeFamily::EvenCharEvenN => "even-even",
            SchemeFamily::ParabolicWilbrink => "wilbrink",
            SchemeFamily::HermitianNU => "herm-nu",
            SchemeFamily::HermitianFission => "herm-fission",
        }
    }

    /// Relation labels in canonical order, before dropping empty ones.
    pub fn labels(self) -> &'static [&'static str] {
        match self {
            SchemeFamily::OddQOddN5 => &["R0", "R1", "R2", "R3", "R4", "R5"],
            SchemeFamily::OddQOddN3 | SchemeFamily::EvenCharOddN => &["R0", "R1", "R2", "R3"],
            SchemeFamily::EvenCharEvenN => &["R0", "R1a", "R1n", "R2", "R3"],
            SchemeFamily::ParabolicWilbrink => &["R0", "R1", "R23"],
            SchemeFamily::HermitianNU => &["R0", "R1", "R2"],
            SchemeFamily::HermitianFission => &formulas::FISSION_RELATIONS,
        }
    }
}

impl fmt::Display for SchemeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeFamily {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| SchemeError::InvalidParameters(format!("unknown family {s:?}")))
    }
}

impl Serialize for SchemeFamily {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// A family together with `(n, q, ε)`. For Hermitian families `q` is the
/// order of the subfield and `ε` is stored as 0; for the Wilbrink family `ε`
/// selects the point class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SchemeParams {
    pub family: SchemeFamily,
    pub n: u32,
    pub q: u64,
    pub eps: i8,
}

fn invalid<T>(msg: String) -> Result<T, SchemeError> {
    Err(SchemeError::InvalidParameters(msg))
}

impl SchemeParams {
    pub fn new(family: SchemeFamily, n: u32, q: u64, eps: i8) -> Result<SchemeParams, SchemeError> {
        let Some((p, _)) = prime_power(q) else {
            return invalid(format!("q = {q} is not a prime power"));
        };
        let odd_q = p != 2;
        let pm = eps == 1 || eps == -1;
        use SchemeFamily::*;
        let eps = match family {
            OddQOddN5 | OddQOddN3 => {
                if !odd_q || n.is_multiple_of(2) || n < 3 || !pm {
                    return invalid(format!(
                        "{family} needs odd q, odd n >= 3 and ε = ±1 (got n={n}, q={q}, ε={eps})"
                    ));
                }
                eps
            }
            EvenCharOddN => {
                if odd_q || n.is_multiple_of(2) || n < 3 || !pm {
                    return invalid(format!(
                        "{family} needs even q, odd n >= 3 and ε = ±1 (got n={n}, q={q}, ε={eps})"
                    ));
                }
                eps
            }
            EvenCharEvenN => {
                if odd_q || n % 2 == 1 || n < 2 || eps != 0 {
                    return invalid(format!(
                        "{family} needs even q, even n >= 2 and ε = 0 (got n={n}, q={q}, ε={eps})"
                    ));
                }
                0
            }
            ParabolicWilbrink => {
                if !odd_q || n % 2 == 1 || n < 2 || !pm {
                    return invalid(format!(
                        "{family} needs odd q, even n >= 2 and a class ε = ±1 (got n={n}, q={q}, ε={eps})"
                    ));
                }
                eps
            }
            HermitianNU | HermitianFission => {
                if n < 2 {
                    return invalid(format!("{family} needs n >= 2 (got {n})"));
                }
                0
            }
        };
        Ok(SchemeParams { family, n, q, eps })
    }

    /// Seed for representative sampling, fixed by the parameters.
    pub fn seed(&self) -> u64 {
        let fam = SchemeFamily::ALL.iter().position(|f| *f == self.family).unwrap_or(0) as u64;
        (fam << 48) ^ ((self.n as u64) << 40) ^ (self.q << 8) ^ (self.eps as u8 as u64)
    }

    /// Closed-form number of points of the instance.
    pub fn expected_points(&self) -> u128 {
        let q = self.q as u128;
        let pw = |k: u32| q.pow(k);
        let n = self.n;
        match self.family {
            SchemeFamily::OddQOddN5 | SchemeFamily::EvenCharOddN => {
                let e = self.eps as i128;
                (pw((n - 1) / 2) as i128 * (pw(n.div_ceil(2)) as i128 - e)) as u128
            }
            SchemeFamily::OddQOddN3 => {
                let e = self.eps as i128;
                (pw((n - 1) / 2) as i128 * (pw(n.div_ceil(2)) as i128 - e) / 2) as u128
            }
            SchemeFamily::EvenCharEvenN => pw(n) - 1,
            SchemeFamily::ParabolicWilbrink => {
                let h = pw(n / 2) as i128;
                (h * (h + self.eps as i128) / 2) as u128
            }
            SchemeFamily::HermitianNU | SchemeFamily::HermitianFission => {
                let e: i128 = if n.is_multiple_of(2) { 1 } else { -1 };
                (pw(n) as i128 * (pw(n + 1) as i128 + e) / (q as i128 + 1)) as u128
            }
        }
    }

    pub fn form(&self) -> Result<FormSpec, SchemeError> {
        let n = self.n as usize;
        Ok(match self.family {
            SchemeFamily::HermitianNU | SchemeFamily::HermitianFission => FormSpec::hermitian(n, self.q)?,
            SchemeFamily::EvenCharEvenN | SchemeFamily::ParabolicWilbrink => FormSpec::quadric(n, self.q, 0)?,
            _ => FormSpec::quadric(n, self.q, self.eps)?,
        })
    }

    /// Closed-form eigenmatrices of the family, with empty relations and
    /// eigenspaces removed.
    pub fn closed_form(&self) -> Result<EigenData, SchemeError> {
        let (n, q, e) = (self.n, self.q, self.eps);
        Ok(match self.family {
            SchemeFamily::OddQOddN5 => formulas::oddq_pq(n, q, e)?,
            SchemeFamily::OddQOddN3 => formulas::oddq_subscheme_pq(n, q, e)?,
            SchemeFamily::EvenCharOddN | SchemeFamily::EvenCharEvenN => formulas::evenchar_pq(n, q, e)?,
            SchemeFamily::ParabolicWilbrink => formulas::wilbrink_pq(n, q, e)?,
            SchemeFamily::HermitianNU => formulas::nu_pq(n, q)?,
            SchemeFamily::HermitianFission => formulas::fission_pq(n, q)?,
        })
    }

    /// Closed-form intersection tensor, where one is available.
    pub fn closed_tensor(&self) -> Result<Option<Tensor>, SchemeError> {
        Ok(match self.family {
            SchemeFamily::OddQOddN5 => Some(formulas::oddq_tensor(self.n, self.q, self.eps)?),
            _ => None,
        })
    }
}

impl fmt::Display for SchemeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            SchemeFamily::HermitianNU | SchemeFamily::HermitianFission => {
                write!(f, "{} H({},{}^2)", self.family, self.n, self.q)
            }
            SchemeFamily::EvenCharEvenN => write!(f, "{} Q({},{})", self.family, self.n, self.q),
            _ => write!(f, "{} ({},{},{:+})", self.family, self.n, self.q, self.eps),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    pub max_points: Option<usize>,
}

/// A built scheme: points, the relation function and the label mapping.
pub struct SchemeInstance {
    params: SchemeParams,
    form: FormSpec,
    points: Vec<ProjPoint>,
    table: PointTable,
    nucleus: Option<Vec<Elem>>,
    /// Raw label index to dense index, or [`DROPPED`].
    map: Vec<u8>,
    labels: Vec<String>,
    dropped: Vec<String>,
    dense: Option<Vec<u8>>,
}

impl fmt::Debug for SchemeInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SchemeInstance")
            .field("params", &self.params)
            .field("points", &self.points.len())
            .field("labels", &self.labels)
            .field("dropped", &self.dropped)
            .finish()
    }
}

/// Builds the instance for `params`. Relations that are empty (no pair
/// through the first point) are dropped and listed in
/// [`SchemeInstance::dropped`].
pub fn build_scheme(params: SchemeParams, opts: &BuildOptions) -> Result<SchemeInstance, SchemeError> {
    let bound = opts.max_points.unwrap_or(DEFAULT_MAX_POINTS);
    let expected = params.expected_points();
    if expected > bound as u128 {
        return Err(SchemeError::SizeBound {
            points: expected,
            bound,
        });
    }
    let form = params.form()?;
    let f = form.field().clone();
    let mut points = form.anisotropic_points()?;
    match params.family {
        SchemeFamily::OddQOddN3 => {
            points.retain(|p| f.square_class(form.kappa(p.coords())) == SquareClass::Square);
        }
        SchemeFamily::ParabolicWilbrink => {
            let class = wilbrink_square_class(&form, &points, params.eps);
            points.retain(|p| f.square_class(form.kappa(p.coords())) == class);
        }
        _ => {}
    }
    assert_eq!(points.len() as u128, expected, "point count of {params}");
    let table = PointTable::new(&form, &points);
    let nucleus = match params.family {
        SchemeFamily::EvenCharEvenN => form.nucleus().map(|p| p.coords().to_vec()),
        _ => None,
    };
    let raw = params.family.labels();
    let mut inst = SchemeInstance {
        params,
        form,
        points,
        table,
        nucleus,
        map: (0..raw.len() as u8).collect(),
        labels: raw.iter().map(|s| s.to_string()).collect(),
        dropped: Vec::new(),
        dense: None,
    };
    let mut seen = vec![false; raw.len()];
    seen[0] = true;
    for y in 1..inst.points.len() {
        let r = inst.raw_label(0, y);
        if (r as usize) < raw.len() {
            seen[r as usize] = true;
        }
    }
    let mut next = 0u8;
    inst.labels.clear();
    for (i, s) in raw.iter().enumerate() {
        if seen[i] {
            inst.map[i] = next;
            inst.labels.push(s.to_string());
            next += 1;
        } else {
            inst.map[i] = DROPPED;
            inst.dropped.push(format!("relation {s} (empty)"));
        }
    }
    if inst.points.len() <= DENSE_LIMIT {
        inst.dense = Some(inst.materialize());
    }
    Ok(inst)
}

/// Square class of `κ(X)` for the points `X` whose perp meets the parabolic
/// quadric in `Q^eps(n-1, q)`.
pub(crate) fn wilbrink_square_class(form: &FormSpec, points: &[ProjPoint], eps: i8) -> SquareClass {
    let f = form.field();
    let all = form.all_points().expect("enumerable");
    let q = form.q() as i128;
    let h = (form.n() / 2) as u32;
    let hyperbolic = (q.pow(h) - 1) * (q.pow(h - 1) + 1) / (q - 1);
    for class in [SquareClass::Square, SquareClass::NonSquare] {
        let Some(x) = points.iter().find(|p| f.square_class(form.kappa(p.coords())) == class) else {
            continue;
        };
        let in_perp = all
            .iter()
            .filter(|z| form.is_isotropic(z) && form.polar(x.coords(), z.coords()) == 0)
            .count() as i128;
        let this = if in_perp == hyperbolic { 1 } else { -1 };
        if this == eps {
            return class;
        }
    }
    unreachable!("both point classes of a parabolic quadric are nonempty")
}

impl SchemeInstance {
    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn form(&self) -> &FormSpec {
        &self.form
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Labels of the kept relations, `R0` first.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn classes(&self) -> usize {
        self.labels.len() - 1
    }

    /// Relations dropped at build time.
    pub fn dropped(&self) -> &[String] {
        &self.dropped
    }

    /// Raw index (in the family's full label list) of each kept label.
    pub fn label_mapping(&self) -> Vec<(usize, String)> {
        self.map
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != DROPPED)
            .map(|(raw, &d)| (raw, self.labels[d as usize].clone()))
            .collect()
    }

    fn materialize(&self) -> Vec<u8> {
        use rayon::prelude::*;
        let n = self.points.len();
        let mut out = vec![0u8; n * n];
        out.par_chunks_mut(n).enumerate().for_each(|(x, row)| {
            for (y, cell) in row.iter_mut().enumerate() {
                *cell = self.compute(x, y);
            }
        });
        out
    }

    /// Dense relation index of the pair, or [`DROPPED`] / [`FORBIDDEN`].
    #[inline]
    pub fn relation(&self, x: usize, y: usize) -> u8 {
        match &self.dense {
            Some(d) => d[x * self.points.len() + y],
            None => self.compute(x, y),
        }
    }

    fn compute(&self, x: usize, y: usize) -> u8 {
        let r = self.raw_label(x, y);
        if r == FORBIDDEN {
            r
        } else {
            self.map[r as usize]
        }
    }

    /// Checked relation label of a pair.
    pub fn classify_pair(&self, x: usize, y: usize) -> Result<&str, SchemeError> {
        match self.relation(x, y) {
            FORBIDDEN => Err(SchemeError::ForbiddenCell(x, y)),
            DROPPED => Err(SchemeError::DroppedRelation(x, y)),
            r => Ok(&self.labels[r as usize]),
        }
    }

    /// Index of the relation in the family's full label list.
    fn raw_label(&self, x: usize, y: usize) -> u8 {
        if x == y {
            return 0;
        }
        let t = &self.table;
        let form = &self.form;
        let f = &**form.field();
        let iso = t.isotropic_on_line(form, x, y);
        use SchemeFamily::*;
        match self.params.family {
            OddQOddN5 => {
                let square = f.square_class(f.mul(t.kappa(x), t.kappa(y))) == SquareClass::Square;
                match (iso, square) {
                    (1, true) => 1,
                    (2, true) => 2,
                    (0, true) => 3,
                    (2, false) => 4,
                    (0, false) => 5,
                    _ => FORBIDDEN,
                }
            }
            OddQOddN3 | EvenCharOddN => match iso {
                1 => 1,
                2 => 2,
                _ => 3,
            },
            EvenCharEvenN => match iso {
                1 => {
                    let nuc = self.nucleus.as_ref().expect("nucleus of a parabolic quadric");
                    let mut rows = vec![t.coords(x).to_vec(), t.coords(y).to_vec(), nuc.clone()];
                    if rref(f, &mut rows).len() == 2 {
                        2
                    } else {
                        1
                    }
                }
                2 => 3,
                _ => 4,
            },
            ParabolicWilbrink => match iso {
                1 => 1,
                _ => 2,
            },
            HermitianNU => match iso {
                1 => 1,
                _ => 2,
            },
            HermitianFission => match iso {
                1 => 1,
                _ if t.bil(f, x, y) == 0 => 2,
                _ => 3,
            },
        }
    }

    /// Index in the family's full label list of a kept relation.
    pub fn raw_index(&self, dense: u8) -> Option<usize> {
        self.map.iter().position(|&d| d == dense && d != DROPPED)
    }

    /// Kept-label partition of the pairs through `x`.
    pub fn row(&self, x: usize) -> Vec<u8> {
        (0..self.points.len()).map(|y| self.relation(x, y)).collect()
    }

    /// Axiom verification with this instance's relation function.
    pub fn verify_axioms(&self, mode: Mode, seed: u64) -> AxiomReport {
        let mut r = verify_axioms_with(self.len(), self.labels.len(), |x, y| self.relation(x, y), mode, seed);
        if let Some(t) = r.tensor.as_mut() {
            t.labels = self.labels.clone();
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(family: SchemeFamily, n: u32, q: u64, e: i8) -> SchemeInstance {
        build_scheme(SchemeParams::new(family, n, q, e).unwrap(), &BuildOptions::default()).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(SchemeParams::new(SchemeFamily::OddQOddN5, 3, 4, 1).is_err());
        assert!(SchemeParams::new(SchemeFamily::OddQOddN5, 4, 5, 1).is_err());
        assert!(SchemeParams::new(SchemeFamily::EvenCharEvenN, 4, 2, 1).is_err());
        assert!(SchemeParams::new(SchemeFamily::HermitianNU, 1, 3, 0).is_err());
        assert!(SchemeParams::new(SchemeFamily::HermitianNU, 2, 6, 0).is_err());
        assert_eq!(SchemeParams::new(SchemeFamily::HermitianNU, 2, 3, 5).unwrap().eps, 0);
        assert_eq!(
            "herm-fission".parse::<SchemeFamily>().unwrap(),
            SchemeFamily::HermitianFission
        );
        let big = SchemeParams::new(SchemeFamily::OddQOddN5, 5, 5, 1).unwrap();
        let err = build_scheme(big, &BuildOptions { max_points: Some(100) }).unwrap_err();
        assert!(matches!(err, SchemeError::SizeBound { .. }));
    }

    #[test]
    fn instance_sizes_and_drops() {
        let s = build(SchemeFamily::OddQOddN5, 3, 5, 1);
        assert_eq!(s.len(), 120);
        assert_eq!(s.classes(), 5);
        let s = build(SchemeFamily::OddQOddN5, 3, 3, -1);
        assert_eq!(s.classes(), 4);
        assert_eq!(s.dropped(), ["relation R2 (empty)"]);
        let h = build(SchemeFamily::HermitianFission, 2, 3, 0);
        assert_eq!((h.len(), h.classes()), (63, 3));
        let h = build(SchemeFamily::HermitianFission, 2, 2, 0);
        assert_eq!(h.labels(), ["R0", "R1", "R2perp"]);
        let e = build(SchemeFamily::EvenCharEvenN, 2, 4, 0);
        assert_eq!(e.len(), 15);
        assert!(e.dropped().iter().any(|d| d.contains("R1a")));
        let w = build(SchemeFamily::ParabolicWilbrink, 4, 3, 1);
        assert_eq!(w.len(), 45);
        let w = build(SchemeFamily::ParabolicWilbrink, 4, 3, -1);
        assert_eq!(w.len(), 36);
        assert_eq!(build(SchemeFamily::OddQOddN3, 3, 5, 1).len(), 60);
    }

    #[test]
    fn relation_examples() {
        let s = build(SchemeFamily::OddQOddN5, 3, 5, 1);
        let f = s.form().field().clone();
        let mut found = false;
        for y in 1..s.len() {
            let sq = f.square_class(f.mul(
                s.form().kappa(s.points()[0].coords()),
                s.form().kappa(s.points()[y].coords()),
            ));
            if sq == SquareClass::Square && s.form().isotropic_on_line(&s.points()[0], &s.points()[y]).unwrap() == 0 {
                assert_eq!(s.classify_pair(0, y).unwrap(), "R3");
                found = true;
            }
        }
        assert!(found);
        assert_eq!(s.classify_pair(7, 7).unwrap(), "R0");
        let h = build(SchemeFamily::HermitianFission, 2, 3, 0);
        for y in 1..h.len() {
            if h.form().perp_test(&h.points()[0], &h.points()[y]) {
                assert_eq!(h.classify_pair(0, y).unwrap(), "R2perp");
            }
        }
    }

    #[test]
    fn tangent_pairs_have_equal_types() {
        for &(n, q, e) in &[(3, 3, 1), (3, 5, -1), (5, 3, 1)] {
            let s = build(SchemeFamily::OddQOddN5, n, q, e);
            for x in 0..s.len() {
                for y in 0..s.len() {
                    assert_ne!(s.relation(x, y), FORBIDDEN);
                }
            }
        }
    }

    #[test]
    fn quadratic_types_form_an_imprimitivity_system() {
        let s = build(SchemeFamily::OddQOddN5, 3, 5, -1);
        let same = |x: usize, y: usize| s.relation(x, y) <= 3;
        let class0: Vec<usize> = (0..s.len()).filter(|&y| same(0, y)).collect();
        assert_eq!(class0.len() * 2, s.len());
        for &x in &class0 {
            for y in 0..s.len() {
                assert_eq!(same(x, y), class0.contains(&y));
            }
        }
    }
}
