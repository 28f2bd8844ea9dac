use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::exactla::{rat, CertReport, RatMatrix};

use super::DENSE_LIMIT;

/// How much of `P × P` the constancy check covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every ordered pair.
    Exhaustive,
    /// All pairs through the first point plus 64 seeded random pairs.
    Representative,
    /// Exhaustive up to the dense limit, representative above.
    Auto,
}

impl Mode {
    fn resolve(self, points: usize) -> Mode {
        match self {
            Mode::Auto if points <= DENSE_LIMIT => Mode::Exhaustive,
            Mode::Auto => Mode::Representative,
            m => m,
        }
    }
}

pub const SAMPLE_PAIRS: usize = 64;

/// A pair violating one of the axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub x: usize,
    pub y: usize,
    pub reason: String,
    /// Relation of `(x, y)`, and the cell `(i, j)` where the count differs.
    pub relation: Option<usize>,
    pub cell: Option<(usize, usize)>,
    pub expected: Option<u64>,
    pub found: Option<u64>,
}

/// Intersection numbers `p[k][i][j]` counted from one pair per relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionTensor {
    pub labels: Vec<String>,
    #[serde(serialize_with = "ser_counts")]
    pub n: Vec<u64>,
    /// Serialized as the matrices `B_i`, `B_i[k][j] = p[k][i][j]`.
    #[serde(rename = "intersection_matrices", serialize_with = "ser_tensor")]
    pub p: Vec<Vec<Vec<u64>>>,
}

fn ser_counts<S: Serializer>(v: &[u64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(u64::to_string))
}

fn ser_tensor<S: Serializer>(p: &[Vec<Vec<u64>>], s: S) -> Result<S::Ok, S::Error> {
    let d = p.len();
    s.collect_seq((0..d).map(|i| {
        (0..d)
            .map(|k| (0..d).map(|j| p[k][i][j].to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    }))
}

impl IntersectionTensor {
    pub fn classes(&self) -> usize {
        self.n.len() - 1
    }

    /// `B_i` with `B_i[k][j] = p^k_{ij}`.
    pub fn intersection_matrices(&self) -> Vec<RatMatrix> {
        let d = self.n.len();
        (0..d)
            .map(|i| RatMatrix::from_fn(d, d, |k, j| rat(self.p[k][i][j] as i64)))
            .collect()
    }

    /// Structural identities of a symmetric scheme.
    pub fn check_invariants(&self) -> CertReport {
        let d = self.n.len();
        let mut r = CertReport::new();
        let p0 = (0..d).all(|i| (0..d).all(|j| self.p[0][i][j] == if i == j { self.n[i] } else { 0 }));
        r.push("p^0_{ij} = δ_ij n_i", p0, None);
        let pk0 = (0..d).all(|k| (0..d).all(|i| self.p[k][i][0] == u64::from(i == k)));
        r.push("p^k_{i0} = δ_ik", pk0, None);
        let rows = (0..d).all(|k| (0..d).all(|i| self.p[k][i].iter().sum::<u64>() == self.n[i]));
        r.push("row sums Σ_j p^k_{ij} = n_i", rows, None);
        let sym = (0..d).all(|k| {
            (0..d).all(|i| {
                (0..d).all(|j| {
                    self.p[k][i][j] == self.p[k][j][i]
                        && self.n[k] as u128 * self.p[k][i][j] as u128 == self.n[j] as u128 * self.p[j][i][k] as u128
                })
            })
        });
        r.push("n_k p^k_{ij} = n_j p^j_{ik} and p^k_{ij} = p^k_{ji}", sym, None);
        r
    }
}

/// Result of [`verify_axioms_with`].
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub mode: Mode,
    pub points: usize,
    pub pairs_checked: u64,
    pub report: CertReport,
    /// Lexicographically first violating pair.
    pub witness: Option<Witness>,
    /// The common intersection numbers, when every relation was seen and the
    /// counts were constant.
    pub tensor: Option<IntersectionTensor>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

fn counts(d: usize, rx: &[u8], ry: &[u8]) -> Vec<u64> {
    let mut c = vec![0u64; d * d];
    for (&a, &b) in rx.iter().zip(ry) {
        if (a as usize) < d && (b as usize) < d {
            c[a as usize * d + b as usize] += 1;
        }
    }
    c
}

fn mismatch(x: usize, y: usize, k: usize, d: usize, expected: &[u64], found: &[u64]) -> Option<Witness> {
    let idx = (0..d * d).find(|&t| expected[t] != found[t])?;
    Some(Witness {
        x,
        y,
        reason: "|R_i(x) ∩ R_j(y)| differs from the first pair of the same relation".into(),
        relation: Some(k),
        cell: Some((idx / d, idx % d)),
        expected: Some(expected[idx]),
        found: Some(found[idx]),
    })
}

fn structural(x: usize, y: usize, r: u8, back: u8, d: usize) -> Option<Witness> {
    let reason = if r as usize >= d {
        format!("pair has no valid relation (label {r})")
    } else if (x == y) != (r == 0) {
        "R0 is not the diagonal".to_string()
    } else if r != back {
        format!("not symmetric: labels {r} and {back}")
    } else {
        return None;
    };
    Some(Witness {
        x,
        y,
        reason,
        relation: None,
        cell: None,
        expected: None,
        found: None,
    })
}

/// Checks that `rel` is a symmetric partition of `[0, points)²` with `R0`
/// the diagonal and that `|R_i(x) ∩ R_j(y)|` depends only on the relation
/// of `(x, y)`. The reference pair of each relation is the first one in
/// lexicographic order among the pairs checked.
pub fn verify_axioms_with<F>(points: usize, labels: usize, rel: F, mode: Mode, seed: u64) -> AxiomReport
where
    F: Fn(usize, usize) -> u8 + Sync,
{
    let mode = mode.resolve(points);
    let d = labels;
    let mut report = CertReport::new();

    // the pairs to check, in lexicographic order
    let (pairs, rows): (Vec<(usize, usize)>, Rows) = match mode {
        Mode::Exhaustive => {
            let mut dense = vec![0u8; points * points];
            dense.par_chunks_mut(points.max(1)).enumerate().for_each(|(x, row)| {
                for (y, c) in row.iter_mut().enumerate() {
                    *c = rel(x, y);
                }
            });
            (Vec::new(), Rows::Dense(dense))
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (points as u64).rotate_left(17));
            let mut pairs: Vec<(usize, usize)> = (0..points).map(|y| (0, y)).collect();
            for _ in 0..SAMPLE_PAIRS {
                pairs.push((rng.gen_range(0..points), rng.gen_range(0..points)));
            }
            pairs.sort_unstable();
            pairs.dedup();
            let mut xs: Vec<usize> = pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
            xs.sort_unstable();
            xs.dedup();
            let rows: Vec<(usize, Vec<u8>)> = xs
                .par_iter()
                .map(|&x| (x, (0..points).map(|z| rel(x, z)).collect()))
                .collect();
            (pairs, Rows::Sparse(rows))
        }
    };
    let row = |x: usize| -> &[u8] {
        match &rows {
            Rows::Dense(m) => &m[x * points..(x + 1) * points],
            Rows::Sparse(v) => {
                let i = v.binary_search_by_key(&x, |(k, _)| *k).expect("row computed");
                &v[i].1
            }
        }
    };

    // symmetry and partition
    let structure = match mode {
        Mode::Exhaustive => (0..points)
            .into_par_iter()
            .map(|x| {
                let rx = row(x);
                (0..points).find_map(|y| structural(x, y, rx[y], row(y)[x], d))
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .next(),
        _ => pairs
            .iter()
            .find_map(|&(x, y)| structural(x, y, row(x)[y], row(y)[x], d)),
    };
    report.push(
        "partition, R0 diagonal, symmetric",
        structure.is_none(),
        structure.as_ref().map(|w| format!("({}, {}): {}", w.x, w.y, w.reason)),
    );

    // reference pair per relation
    let mut refs: Vec<Option<(usize, usize)>> = vec![None; d];
    match mode {
        Mode::Exhaustive => {
            'outer: for x in 0..points {
                let rx = row(x);
                for (y, &r) in rx.iter().enumerate() {
                    if (r as usize) < d && refs[r as usize].is_none() {
                        refs[r as usize] = Some((x, y));
                        if refs.iter().all(Option::is_some) {
                            break 'outer;
                        }
                    }
                }
            }
        }
        _ => {
            for &(x, y) in &pairs {
                let r = row(x)[y] as usize;
                if r < d && refs[r].is_none() {
                    refs[r] = Some((x, y));
                }
            }
        }
    }
    let ref_counts: Vec<Option<Vec<u64>>> = refs.iter().map(|p| p.map(|(x, y)| counts(d, row(x), row(y)))).collect();

    let check_pair = |x: usize, y: usize| -> Option<Witness> {
        let k = row(x)[y] as usize;
        let expected = ref_counts.get(k)?.as_ref()?;
        mismatch(x, y, k, d, expected, &counts(d, row(x), row(y)))
    };
    let (constancy, checked) = match mode {
        Mode::Exhaustive => {
            let w = (0..points)
                .into_par_iter()
                .map(|x| (0..points).find_map(|y| check_pair(x, y)))
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .next();
            (w, (points * points) as u64)
        }
        _ => (pairs.iter().find_map(|&(x, y)| check_pair(x, y)), pairs.len() as u64),
    };
    report.push(
        "constant intersection numbers",
        constancy.is_none(),
        constancy.as_ref().map(|w| {
            format!(
                "({}, {}) in R{}: cell {:?} is {} instead of {}",
                w.x,
                w.y,
                w.relation.unwrap_or(0),
                w.cell.unwrap_or((0, 0)),
                w.found.unwrap_or(0),
                w.expected.unwrap_or(0)
            )
        }),
    );
    let all_seen = refs.iter().all(Option::is_some);
    report.push(
        "every relation nonempty",
        all_seen,
        (!all_seen).then(|| {
            let missing: Vec<usize> = (0..d).filter(|&k| refs[k].is_none()).collect();
            format!("no pair found in relations {missing:?}")
        }),
    );

    let tensor = (structure.is_none() && constancy.is_none() && all_seen).then(|| {
        let p: Vec<Vec<Vec<u64>>> = ref_counts
            .iter()
            .map(|c| {
                let c = c.as_ref().expect("all seen");
                (0..d).map(|i| c[i * d..(i + 1) * d].to_vec()).collect()
            })
            .collect();
        let n = (0..d).map(|i| p[0][i][i]).collect();
        IntersectionTensor {
            labels: (0..d).map(|i| format!("R{i}")).collect(),
            n,
            p,
        }
    });
    let witness = structure.or(constancy);
    AxiomReport {
        mode,
        points,
        pairs_checked: checked,
        report,
        witness,
        tensor,
    }
}

enum Rows {
    Dense(Vec<u8>),
    Sparse(Vec<(usize, Vec<u8>)>),
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The pentagon: distance classes of a 5-cycle.
    fn pentagon(x: usize, y: usize) -> u8 {
        let d = (x + 5 - y) % 5;
        d.min(5 - d) as u8
    }

    #[test]
    fn pentagon_is_a_scheme() {
        for mode in [Mode::Exhaustive, Mode::Representative] {
            let r = verify_axioms_with(5, 3, pentagon, mode, 1);
            assert!(r.passed(), "{r:?}");
            let t = r.tensor.unwrap();
            assert_eq!(t.n, vec![1, 2, 2]);
            assert_eq!(t.p[1][1], vec![1, 0, 1]);
            assert!(t.check_invariants().passed());
        }
    }

    #[test]
    fn path_is_not_a_scheme() {
        // distance in a path on 4 vertices
        let path = |x: usize, y: usize| (x as i64 - y as i64).unsigned_abs() as u8;
        let r = verify_axioms_with(4, 4, path, Mode::Exhaustive, 0);
        assert!(!r.passed());
        let w = r.witness.unwrap();
        // (1,0) is the transpose of the reference pair (0,1) but the path is
        // not symmetric about its middle
        assert_eq!((w.x, w.y), (1, 0));
        assert_eq!(w.relation, Some(1));
    }

    #[test]
    fn asymmetry_is_caught() {
        let r = verify_axioms_with(3, 3, |x, y| ((y + 3 - x) % 3) as u8, Mode::Exhaustive, 0);
        assert!(!r.passed());
        assert_eq!((r.witness.as_ref().unwrap().x, r.witness.unwrap().y), (0, 1));
    }
}
