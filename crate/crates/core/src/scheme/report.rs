use serde::Serialize;

use crate::exactla::{discover_eigenmatrices, match_rows, rat, verify_eigenmatrices, CertReport};
use crate::formulas::{EigenData, Tensor};

use super::{build_scheme, AxiomReport, BuildOptions, IntersectionTensor, Mode, SchemeError, SchemeParams};

/// One entry where the counted and the closed-form tensor disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TensorMismatch {
    pub k: String,
    pub i: String,
    pub j: String,
    pub counted: u64,
    pub formula: String,
}

/// Everything [`analyze`] finds out about one instance.
#[derive(Debug, Clone, Serialize)]
pub struct SchemeReport {
    pub params: SchemeParams,
    pub points: usize,
    pub labels: Vec<String>,
    pub dropped: Vec<String>,
    pub axioms: AxiomReport,
    pub tensor_checks: CertReport,
    /// `None` when the family has no closed-form tensor.
    pub tensor_diff: Option<Vec<TensorMismatch>>,
    pub closed_form: EigenData,
    /// `P` and `Q` of the closed form against the counted `B_i`.
    pub certification: CertReport,
}

impl SchemeReport {
    pub fn passed(&self) -> bool {
        self.axioms.passed()
            && self.tensor_checks.passed()
            && self.tensor_diff.as_ref().is_none_or(Vec::is_empty)
            && self.certification.passed()
    }

    pub fn tensor(&self) -> Option<&IntersectionTensor> {
        self.axioms.tensor.as_ref()
    }
}

/// Compares counted intersection numbers with a closed-form tensor over the
/// same labels.
pub fn tensor_diff(counted: &IntersectionTensor, formula: &Tensor) -> Vec<TensorMismatch> {
    if counted.labels != formula.relations {
        return vec![TensorMismatch {
            k: "labels".into(),
            i: counted.labels.join(","),
            j: formula.relations.join(","),
            counted: 0,
            formula: String::new(),
        }];
    }
    let d = counted.n.len();
    let mut out = Vec::new();
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                if rat(counted.p[k][i][j] as i64) != formula.p[k][i][j] {
                    out.push(TensorMismatch {
                        k: counted.labels[k].clone(),
                        i: counted.labels[i].clone(),
                        j: counted.labels[j].clone(),
                        counted: counted.p[k][i][j],
                        formula: formula.p[k][i][j].to_string(),
                    });
                }
            }
        }
    }
    out
}

/// Certifies closed-form `P`, `Q` against the counted `B_i`.
pub fn certify(counted: &IntersectionTensor, closed: &EigenData) -> CertReport {
    let mut r = CertReport::new();
    if counted.labels != closed.relations {
        r.fail(
            "relation labels agree",
            format!("counted {:?}, closed form {:?}", counted.labels, closed.relations),
        );
        return r;
    }
    r.pass("relation labels agree");
    let b = counted.intersection_matrices();
    let n: Vec<_> = counted.n.iter().map(|&x| rat(x as i64)).collect();
    let total = n.iter().cloned().sum();
    r.extend(
        "",
        verify_eigenmatrices(&b, &closed.p, &closed.q, &n, &closed.m_vec, &total),
    );
    r
}

/// Recomputes `P` from the counted `B_i` and matches its rows against the
/// closed form. Returns the permutation `perm` with discovered row `i` equal
/// to closed-form row `perm[i]`.
pub fn rediscover(counted: &IntersectionTensor, closed: &EigenData, seed: u64) -> Result<Vec<usize>, String> {
    let found = discover_eigenmatrices(&counted.intersection_matrices(), seed).map_err(|e| e.to_string())?;
    match_rows(&found.p, &closed.p).ok_or_else(|| "rows of the discovered P do not match the closed form".into())
}

/// Builds the instance, verifies the axioms, counts the tensor and
/// certifies the closed forms.
pub fn analyze(params: SchemeParams, opts: &BuildOptions, mode: Mode) -> Result<SchemeReport, SchemeError> {
    analyze_seeded(params, opts, mode, params.seed())
}

/// [`analyze`] with an explicit seed for the sampled pairs.
pub fn analyze_seeded(
    params: SchemeParams,
    opts: &BuildOptions,
    mode: Mode,
    seed: u64,
) -> Result<SchemeReport, SchemeError> {
    let inst = build_scheme(params, opts)?;
    let axioms = inst.verify_axioms(mode, seed);
    let closed_form = params.closed_form()?;
    let closed_tensor = params.closed_tensor()?;
    let (tensor_checks, tensor_diff, certification) = match &axioms.tensor {
        Some(t) => (
            t.check_invariants(),
            closed_tensor.map(|f| tensor_diff(t, &f)),
            certify(t, &closed_form),
        ),
        None => {
            let mut r = CertReport::new();
            r.fail("tensor available", "axiom verification failed");
            (r.clone(), None, r)
        }
    };
    Ok(SchemeReport {
        params,
        points: inst.len(),
        labels: inst.labels().to_vec(),
        dropped: inst.dropped().to_vec(),
        axioms,
        tensor_checks,
        tensor_diff,
        closed_form,
        certification,
    })
}
