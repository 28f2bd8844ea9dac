//! Orthogonality graphs on anisotropic points: `X ~ Y` iff `X ⊥ Y`.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactla::{verify_spectrum, CertReport, IntMatrix, LinAlgError, Rat, SpectrumCert, Surd};
use crate::formulas::{self, FormulaError, OrthoCase};
use crate::geometry::{FormSpec, GeometryError, PointTable, ProjPoint};
use crate::scheme::{
    build_scheme, wilbrink_square_class, BuildOptions, SchemeError, SchemeFamily, SchemeParams, DEFAULT_MAX_POINTS,
};

/// Default bound on the graph size for spectrum certification.
pub const CERT_MAX_POINTS: usize = 2500;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrthoError {
    #[error("{points} points exceed the bound {bound}")]
    SizeBound { points: u128, bound: usize },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

pub struct OrthoGraph {
    case: OrthoCase,
    n: u32,
    q: u64,
    eps: i8,
    form: FormSpec,
    points: Vec<ProjPoint>,
    table: PointTable,
    adj: Vec<FixedBitSet>,
    /// Parabolic case: the first `plus` points form `𝒫⁺`.
    plus: Option<usize>,
}

impl std::fmt::Debug for OrthoGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "OrthoGraph({:?}, n={}, q={}, ε={}, {} points)",
            self.case,
            self.n,
            self.q,
            self.eps,
            self.len()
        )
    }
}

/// Builds the graph. Parabolic graphs list `𝒫⁺` before `𝒫⁻`, each part in
/// lexicographic order; the other cases use all anisotropic points in
/// lexicographic order.
pub fn build_ortho(
    case: OrthoCase,
    n: u32,
    q: u64,
    eps: i8,
    max_points: Option<usize>,
) -> Result<OrthoGraph, OrthoError> {
    let expected = formulas::ortho_points(case, n, q, eps)?;
    let bound = max_points.unwrap_or(DEFAULT_MAX_POINTS);
    if expected > Rat::from_integer((bound as i64).into()) {
        return Err(OrthoError::SizeBound {
            points: expected.to_integer().try_into().unwrap_or(u128::MAX),
            bound,
        });
    }
    let form = match case {
        OrthoCase::Hermitian => FormSpec::hermitian(n as usize, q)?,
        OrthoCase::EllHyp => FormSpec::quadric(n as usize, q, eps)?,
        OrthoCase::Parabolic => FormSpec::quadric(n as usize, q, 0)?,
    };
    let mut points = form.anisotropic_points()?;
    let mut plus = None;
    if case == OrthoCase::Parabolic {
        let class = wilbrink_square_class(&form, &points, 1);
        let f = form.field().clone();
        let (p, m): (Vec<ProjPoint>, Vec<ProjPoint>) = points
            .into_iter()
            .partition(|x| f.square_class(form.kappa(x.coords())) == class);
        plus = Some(p.len());
        points = p.into_iter().chain(m).collect();
    }
    let table = PointTable::new(&form, &points);
    let f = form.field().clone();
    let count = points.len();
    let adj: Vec<FixedBitSet> = (0..count)
        .into_par_iter()
        .map(|x| {
            let mut row = FixedBitSet::with_capacity(count);
            for y in 0..count {
                if table.bil(&f, x, y) == 0 {
                    row.insert(y);
                }
            }
            row
        })
        .collect();
    Ok(OrthoGraph {
        case,
        n,
        q,
        eps: if case == OrthoCase::EllHyp { eps } else { 0 },
        form,
        points,
        table,
        adj,
        plus,
    })
}

impl OrthoGraph {
    pub fn case(&self) -> OrthoCase {
        self.case
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn form(&self) -> &FormSpec {
        &self.form
    }

    /// Size of `𝒫⁺` in the parabolic case.
    pub fn plus_size(&self) -> Option<usize> {
        self.plus
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.adj[x].contains(y)
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adj[x].count_ones(..)
    }

    /// The graph on the same points with adjacency replaced by
    /// non-adjacency (loops excluded).
    pub fn complement(&self) -> OrthoGraph {
        let count = self.len();
        let adj = (0..count)
            .map(|x| {
                let mut row = FixedBitSet::with_capacity(count);
                for y in 0..count {
                    if x != y && !self.adjacent(x, y) {
                        row.insert(y);
                    }
                }
                row
            })
            .collect();
        OrthoGraph {
            case: self.case,
            n: self.n,
            q: self.q,
            eps: self.eps,
            form: self.form.clone(),
            points: self.points.clone(),
            table: PointTable::new(&self.form, &self.points),
            adj,
            plus: self.plus,
        }
    }

    /// Number of closed walks of length 3, `Σ_{X⊥Y} |X^⊥ ∩ Y^⊥ ∩ 𝒫|`.
    pub fn triangle_trace(&self) -> u128 {
        (0..self.len())
            .into_par_iter()
            .map(|x| {
                self.adj[x]
                    .ones()
                    .map(|y| self.adj[x].intersection_count(&self.adj[y]) as u128)
                    .sum::<u128>()
            })
            .sum()
    }

    pub fn adjacency_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.len(), self.len(), |x, y| i64::from(self.adjacent(x, y)))
    }

    /// Expected `A²(x, y)` from the closed-form identity, or `None` if the
    /// companion relation is unavailable.
    fn a2_rule(&self) -> Result<Box<dyn Fn(usize, usize) -> i64 + Sync + '_>, OrthoError> {
        let int = |r: &Rat| -> i64 { i64::try_from(r.to_integer()).expect("small coefficient") };
        match self.case {
            OrthoCase::Hermitian => {
                let c = formulas::herm_a2_coefficients(self.n, self.q)?;
                let c: Vec<i64> = c.iter().map(int).collect();
                let nu = build_scheme(
                    SchemeParams::new(SchemeFamily::HermitianNU, self.n, self.q, 0)?,
                    &BuildOptions {
                        max_points: Some(self.len()),
                    },
                )?;
                Ok(Box::new(move |x, y| {
                    if x == y {
                        c[0]
                    } else if nu.relation(x, y) == 1 {
                        c[1]
                    } else {
                        c[2]
                    }
                }))
            }
            OrthoCase::EllHyp => {
                let c = formulas::ellhyp_a2_coefficients(self.n, self.q, self.eps)?;
                let c: Vec<i64> = c.iter().map(int).collect();
                let s = build_scheme(
                    SchemeParams::new(SchemeFamily::OddQOddN5, self.n, self.q, self.eps)?,
                    &BuildOptions {
                        max_points: Some(self.len()),
                    },
                )?;
                Ok(Box::new(move |x, y| {
                    let raw = s.raw_index(s.relation(x, y)).expect("kept relation");
                    c[raw]
                }))
            }
            OrthoCase::Parabolic => {
                let [j, i, t] = formulas::parabolic_a2_coefficients(self.n, self.q)?;
                let (j, i, t) = (int(&j), int(&i), int(&t));
                let plus = self.plus.expect("parabolic split");
                Ok(Box::new(move |x, y| {
                    let same = (x < plus) == (y < plus);
                    let sign = if x < plus { -1 } else { 1 };
                    let tangent = x != y && same && self.table.isotropic_on_line(&self.form, x, y) == 1;
                    let block = i64::from(x == y) + i64::from(tangent);
                    j + i * i64::from(x == y) + t * sign * if same { block } else { 0 }
                }))
            }
        }
    }

    /// Entry-wise check of the closed-form expression for `A²`.
    pub fn verify_a2_identity(&self) -> Result<CertReport, OrthoError> {
        let rule = self.a2_rule()?;
        let first = (0..self.len())
            .into_par_iter()
            .map(|x| {
                (x..self.len()).find_map(|y| {
                    let found = self.adj[x].intersection_count(&self.adj[y]) as i64;
                    let want = rule(x, y);
                    (found != want).then_some((x, y, found, want))
                })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .next();
        let mut r = CertReport::new();
        r.push(
            "A² equals the closed-form combination",
            first.is_none(),
            first.map(|(x, y, f, w)| format!("entry ({x}, {y}) is {f}, expected {w}")),
        );
        Ok(r)
    }

    /// Parabolic case: `v1` and `v2` are eigenvectors for `q^{n-1}` and 0.
    pub fn verify_parabolic_vectors(&self) -> Option<CertReport> {
        let plus = self.plus?;
        let h = (self.q as i64).pow(self.n / 2);
        let top = (self.q as i64).pow(self.n - 1);
        let v1: Vec<i64> = (0..self.len()).map(|x| if x < plus { h - 1 } else { h + 1 }).collect();
        let v2: Vec<i64> = (0..self.len()).map(|x| if x < plus { 1 } else { -1 }).collect();
        let apply = |v: &[i64]| -> Vec<i64> {
            (0..self.len())
                .map(|x| self.adj[x].ones().map(|y| v[y]).sum())
                .collect()
        };
        let mut r = CertReport::new();
        let a1 = apply(&v1);
        r.push(
            "A v1 = q^{n-1} v1",
            a1.iter().zip(&v1).all(|(a, v)| *a == top * v),
            None,
        );
        let a2 = apply(&v2);
        r.push("A v2 = 0", a2.iter().all(|a| *a == 0), None);
        Some(r)
    }
}

/// Everything [`analyze_ortho`] checks about one graph.
#[derive(Debug, Clone, Serialize)]
pub struct OrthoReport {
    pub case: OrthoCase,
    pub n: u32,
    pub q: u64,
    pub eps: i8,
    pub points: usize,
    /// One entry, or the degrees on `𝒫⁺` and `𝒫⁻`.
    pub degrees: Vec<usize>,
    pub triangle_trace: String,
    pub claims: Vec<(Surd, u64)>,
    pub absent: Vec<Surd>,
    pub checks: CertReport,
    pub spectrum: Option<SpectrumCert>,
}

impl OrthoReport {
    pub fn passed(&self) -> bool {
        self.checks.passed() && self.spectrum.as_ref().is_some_and(|s| s.report.passed())
    }
}

/// Builds the graph and certifies degree, loops, the `A²` identity, the
/// triangle count and the spectrum.
pub fn analyze_ortho(
    case: OrthoCase,
    n: u32,
    q: u64,
    eps: i8,
    max_points: Option<usize>,
) -> Result<OrthoReport, OrthoError> {
    let g = build_ortho(case, n, q, eps, max_points)?;
    let mut checks = CertReport::new();
    let loops = (0..g.len()).find(|&x| g.adjacent(x, x));
    checks.push("loopless", loops.is_none(), loops.map(|x| format!("point {x}")));
    let degrees: Vec<usize> = match g.plus_size() {
        Some(_) => vec![
            formulas::parabolic_degree(n, q, 1)?,
            formulas::parabolic_degree(n, q, -1)?,
        ],
        None => vec![formulas::ortho_degree(case, n, q, eps)?],
    }
    .iter()
    .map(|d| usize::try_from(d.to_integer()).expect("degree fits"))
    .collect();
    let want = |x: usize| match g.plus_size() {
        Some(p) if x >= p => degrees[1],
        _ => degrees[0],
    };
    let irregular = (0..g.len()).find(|&x| g.degree(x) != want(x));
    checks.push(
        "degrees as stated",
        irregular.is_none(),
        irregular.map(|x| format!("point {x} has degree {}, expected {}", g.degree(x), want(x))),
    );
    if case == OrthoCase::Parabolic {
        let p = formulas::parabolic_class_size(n, q, 1)?;
        let ok = Rat::from_integer((g.plus_size().unwrap_or(0) as i64).into()) == p;
        checks.push("|𝒫⁺| as stated", ok, None);
    }
    checks.extend("", g.verify_a2_identity()?);
    let tri = g.triangle_trace();
    let formula = formulas::ortho_triangle_trace(case, n, q, eps)?;
    checks.push(
        "triangle trace as stated",
        Rat::from_integer((tri as i128).into()) == formula,
        Some(format!("counted {tri}, formula {formula}")),
    );
    if let Some(r) = g.verify_parabolic_vectors() {
        checks.extend("", r);
    }
    let claims = formulas::ortho_spectrum(case, n, q, eps)?;
    let absent = formulas::ortho_absent(case, n, q, eps)?;
    let spectrum = if g.len() <= CERT_MAX_POINTS {
        let mut all = claims.clone();
        all.extend(absent.iter().map(|s| (s.clone(), 0)));
        let cert = verify_spectrum(&g.adjacency_matrix(), &all)?;
        checks.push(
            "Σmλ³ equals counted triangles",
            cert.trace_cube == tri as i128,
            Some(format!("{} vs {tri}", cert.trace_cube)),
        );
        Some(cert)
    } else {
        checks.fail(
            "spectrum certified",
            format!("{} points exceed {CERT_MAX_POINTS}", g.len()),
        );
        None
    };
    Ok(OrthoReport {
        case,
        n,
        q,
        eps: g.eps,
        points: g.len(),
        degrees,
        triangle_trace: tri.to_string(),
        claims,
        absent,
        checks,
        spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_degrees() {
        let g = build_ortho(OrthoCase::Parabolic, 4, 3, 0, None).unwrap();
        assert_eq!((g.len(), g.plus_size()), (81, Some(45)));
        let h = build_ortho(OrthoCase::Hermitian, 2, 3, 0, None).unwrap();
        assert_eq!(h.degree(0), 6);
        let e = build_ortho(OrthoCase::EllHyp, 3, 5, 1, None).unwrap();
        assert_eq!(e.degree(17), 25);
        assert_eq!((g.degree(0), g.degree(80)), (24, 30));
        assert!(build_ortho(OrthoCase::EllHyp, 3, 5, 1, Some(10)).is_err());
        assert!(build_ortho(OrthoCase::Parabolic, 3, 3, 0, None).is_err());
    }

    #[test]
    fn triangle_traces() {
        assert_eq!(
            build_ortho(OrthoCase::Parabolic, 4, 3, 0, None)
                .unwrap()
                .triangle_trace(),
            19440
        );
        assert_eq!(
            build_ortho(OrthoCase::EllHyp, 3, 5, 1, None).unwrap().triangle_trace(),
            14400
        );
    }

    #[test]
    fn small_graphs_certify() {
        for (case, n, q, e) in [
            (OrthoCase::Hermitian, 2, 2, 0),
            (OrthoCase::Hermitian, 2, 3, 0),
            (OrthoCase::EllHyp, 3, 3, -1),
            (OrthoCase::EllHyp, 3, 3, 1),
            (OrthoCase::Parabolic, 2, 3, 0),
            (OrthoCase::Parabolic, 4, 3, 0),
        ] {
            let r = analyze_ortho(case, n, q, e, None).unwrap();
            assert!(
                r.passed(),
                "{case:?} {n} {q} {e}: {:?} {:?}",
                r.checks.first_failure(),
                r.spectrum
            );
        }
    }

    #[test]
    fn complement_breaks_the_identity() {
        let g = build_ortho(OrthoCase::EllHyp, 3, 3, -1, None).unwrap();
        assert!(g.verify_a2_identity().unwrap().passed());
        assert!(!g.complement().verify_a2_identity().unwrap().passed());
    }
}
