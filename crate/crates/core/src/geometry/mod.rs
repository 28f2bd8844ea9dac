//! Projective spaces PG(n, q), the standard quadratic and Hermitian forms,
//! and classification of points, lines and planes relative to them.

mod form;
mod space;
mod table;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{Elem, Field, GfError};

pub use form::{FormKind, FormSpec, LineClass, PlaneClass};
pub use space::{kernel, rref, Subspace};
pub use table::PointTable;

/// Default bound on the number of points enumerated in one projective space.
pub const DEFAULT_POINT_BOUND: u128 = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{count} points exceed the bound {bound}")]
    TooManyPoints { count: u128, bound: u128 },
    #[error("invalid form parameters: {0}")]
    BadParameters(String),
    #[error("{0}")]
    NotApplicable(&'static str),
    #[error("the two points coincide")]
    EqualPoints,
    #[error("the points do not span a plane")]
    Collinear,
    #[error("the plane is totally isotropic")]
    TotallyIsotropicPlane,
    #[error("zero vector has no projective point")]
    ZeroVector,
}

/// `theta_k(q) = (q^{k+1} - 1) / (q - 1)`, the number of points of PG(k, q);
/// zero for `k = -1`.
pub fn theta(k: i64, q: u64) -> u128 {
    if k < 0 {
        return 0;
    }
    let mut total = 0u128;
    let mut power = 1u128;
    for _ in 0..=k {
        total += power;
        power *= q as u128;
    }
    total
}

/// A point of PG(n, q) with its first nonzero coordinate equal to one.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjPoint(Vec<Elem>);

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{:?}", self.0)
    }
}

impl ProjPoint {
    /// Normalizes an arbitrary nonzero vector.
    pub fn new(field: &Field, mut coords: Vec<Elem>) -> Result<ProjPoint, GeometryError> {
        if normalize(field, &mut coords) {
            Ok(ProjPoint(coords))
        } else {
            Err(GeometryError::ZeroVector)
        }
    }

    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    /// Projective dimension of the ambient space.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }
}

/// Scales `v` so that its first nonzero entry is one. Returns false for the
/// zero vector.
pub fn normalize(field: &Field, v: &mut [Elem]) -> bool {
    let Some(lead) = v.iter().copied().find(|&c| c != 0) else {
        return false;
    };
    if lead != 1 {
        let inv = field.inv(lead).expect("nonzero");
        for c in v.iter_mut() {
            *c = field.mul(*c, inv);
        }
    }
    true
}

/// All points of PG(n, q) in lexicographic order of normalized coordinates.
pub fn enumerate_points(field: &Field, n: usize) -> Result<Vec<ProjPoint>, GeometryError> {
    enumerate_points_bounded(field, n, DEFAULT_POINT_BOUND)
}

pub fn enumerate_points_bounded(field: &Field, n: usize, bound: u128) -> Result<Vec<ProjPoint>, GeometryError> {
    let q = field.order() as u64;
    let count = theta(n as i64, q);
    if count > bound {
        return Err(GeometryError::TooManyPoints { count, bound });
    }
    let mut out = Vec::with_capacity(count as usize);
    for lead in (0..=n).rev() {
        let free = n - lead;
        let mut tail = vec![0 as Elem; free];
        loop {
            let mut v = vec![0 as Elem; n + 1];
            v[lead] = 1;
            v[lead + 1..].copy_from_slice(&tail);
            out.push(ProjPoint(v));
            if !increment(&mut tail, field.order()) {
                break;
            }
        }
    }
    Ok(out)
}

/// Odometer step over `[0, q)^len`, last coordinate fastest.
pub(crate) fn increment(v: &mut [Elem], q: u32) -> bool {
    for c in v.iter_mut().rev() {
        *c += 1;
        if *c < q {
            return true;
        }
        *c = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_of_order;

    #[test]
    fn point_counts() {
        assert_eq!(enumerate_points(&field_of_order(3).unwrap(), 1).unwrap().len(), 4);
        assert_eq!(enumerate_points(&field_of_order(5).unwrap(), 3).unwrap().len(), 156);
        assert_eq!(enumerate_points(&field_of_order(3).unwrap(), 4).unwrap().len(), 121);
        assert_eq!(theta(-1, 7), 0);
        assert_eq!(theta(3, 5), 156);
    }

    #[test]
    fn enumeration_is_sorted_and_normalized() {
        let f = field_of_order(4).unwrap();
        let pts = enumerate_points(&f, 2).unwrap();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        for p in &pts {
            let lead = p.coords().iter().find(|&&c| c != 0).unwrap();
            assert_eq!(*lead, 1);
        }
    }

    #[test]
    fn bound_enforced() {
        let f = field_of_order(5).unwrap();
        assert!(matches!(
            enumerate_points_bounded(&f, 3, 100),
            Err(GeometryError::TooManyPoints { count: 156, .. })
        ));
    }

    #[test]
    fn normalization_is_canonical() {
        let f = field_of_order(7).unwrap();
        let a = ProjPoint::new(&f, vec![0, 3, 5]).unwrap();
        let b = ProjPoint::new(&f, vec![0, 6, 3]).unwrap();
        assert_eq!(a, b);
        assert_eq!(ProjPoint::new(&f, vec![0, 0]), Err(GeometryError::ZeroVector));
    }
}
