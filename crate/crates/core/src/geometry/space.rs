//! Subspaces of PG(n, q) as reduced row echelon bases.

use std::fmt;

use crate::gf::{Elem, Field};

use super::form::FormSpec;
use super::{increment, ProjPoint};

/// Reduces `rows` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot columns.
pub fn rref(field: &Field, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = field.neg(row[c]);
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = field.add(*x, field.mul(f, y));
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : rows * x = 0}` for `ncols`-dimensional `x`.
pub fn kernel(field: &Field, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut m = rows.to_vec();
    let pivots = if m.is_empty() { Vec::new() } else { rref(field, &mut m) };
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; ncols];
        v[free] = 1;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = field.neg(row[free]);
        }
        out.push(v);
    }
    out
}

/// A projective subspace, stored as its canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Subspace {
    len: usize,
    basis: Vec<Vec<Elem>>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace{:?}", self.basis)
    }
}

impl Subspace {
    /// Span of the given vectors, all of length `len`.
    pub fn span(field: &Field, len: usize, vectors: &[&[Elem]]) -> Subspace {
        let mut rows: Vec<Vec<Elem>> = vectors.iter().map(|v| v.to_vec()).collect();
        if !rows.is_empty() {
            rref(field, &mut rows);
        }
        Subspace { len, basis: rows }
    }

    pub fn of_points(field: &Field, points: &[&ProjPoint]) -> Subspace {
        let len = points.first().map_or(0, |p| p.coords().len());
        let vs: Vec<&[Elem]> = points.iter().map(|p| p.coords()).collect();
        Subspace::span(field, len, &vs)
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    /// Vector space dimension.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Projective dimension; -1 for the empty subspace.
    pub fn dim(&self) -> i64 {
        self.basis.len() as i64 - 1
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn contains(&self, field: &Field, v: &[Elem]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rref(field, &mut rows).len() == self.basis.len()
    }

    pub fn contains_subspace(&self, field: &Field, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.contains(field, b))
    }

    /// Join with further vectors.
    pub fn join(&self, field: &Field, extra: &[&[Elem]]) -> Subspace {
        let mut vs: Vec<&[Elem]> = self.basis.iter().map(|b| b.as_slice()).collect();
        vs.extend_from_slice(extra);
        Subspace::span(field, self.len, &vs)
    }

    /// All points, in lexicographic order of their coefficient vectors.
    pub fn points(&self, field: &Field) -> Vec<ProjPoint> {
        let k = self.basis.len();
        let mut out = Vec::new();
        for lead in (0..k).rev() {
            let mut tail = vec![0 as Elem; k - lead - 1];
            loop {
                let mut v = vec![0 as Elem; self.len];
                for (i, b) in self.basis.iter().enumerate().skip(lead) {
                    let c = if i == lead { 1 } else { tail[i - lead - 1] };
                    if c == 0 {
                        continue;
                    }
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = field.add(*x, field.mul(c, y));
                    }
                }
                out.push(ProjPoint::new(field, v).expect("independent basis"));
                if !increment(&mut tail, field.order()) {
                    break;
                }
            }
        }
        out
    }

    /// The polar subspace `{x : B(x, b) = 0 for all b in self}`.
    pub fn perp(&self, form: &FormSpec) -> Subspace {
        let field = form.field();
        let rows: Vec<Vec<Elem>> = self.basis.iter().map(|b| form.dual_vector(b)).collect();
        let ker = kernel(field, &rows, self.len);
        let vs: Vec<&[Elem]> = ker.iter().map(|v| v.as_slice()).collect();
        Subspace::span(field, self.len, &vs)
    }

    /// True if the form vanishes on every vector of the subspace.
    pub fn is_totally_isotropic(&self, form: &FormSpec) -> bool {
        let b = &self.basis;
        b.iter().all(|x| form.kappa(x) == 0)
            && (0..b.len()).all(|i| (i + 1..b.len()).all(|j| form.polar(&b[i], &b[j]) == 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_of_order;

    #[test]
    fn rref_and_kernel() {
        let f = field_of_order(5).unwrap();
        let rows = vec![vec![1, 2, 3], vec![0, 1, 4]];
        let ker = kernel(&f, &rows, 3);
        assert_eq!(ker.len(), 1);
        for r in &rows {
            let dot = r.iter().zip(&ker[0]).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
            assert_eq!(dot, 0);
        }
    }

    #[test]
    fn subspace_points_and_membership() {
        let f = field_of_order(3).unwrap();
        let s = Subspace::span(&f, 4, &[&[1, 0, 0, 1], &[0, 1, 1, 0]]);
        let pts = s.points(&f);
        assert_eq!(pts.len(), 4);
        for p in &pts {
            assert!(s.contains(&f, p.coords()));
        }
        assert!(!s.contains(&f, &[0, 0, 1, 0]));
        let t = Subspace::span(&f, 4, &[&[2, 2, 2, 2], &[0, 1, 1, 0]]);
        assert_eq!(s, t);
    }
}
