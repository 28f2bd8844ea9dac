use std::sync::Arc;

use serde::Serialize;

use crate::gf::{field_of_order, Elem, Field, SquareClass};

use super::space::Subspace;
use super::{enumerate_points, normalize, GeometryError, ProjPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FormKind {
    Parabolic,
    Elliptic,
    Hyperbolic,
    Hermitian,
}

/// Intersection type of a line with the quadric or Hermitian variety.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LineClass {
    Passant,
    Tangent,
    Secant,
    /// Hermitian line meeting the variety in `q + 1` points.
    HermSecant,
    TotallyIsotropic,
}

/// Plane section types used in the plane-count table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PlaneClass {
    T0,
    T1,
    T2,
    TSquare,
    TNonSquare,
}

/// One of the standard non-degenerate forms on `GF^{n+1}`.
///
/// Quadrics use `x0 x1 + ... + x_{n-2} x_{n-1} + x_n^2` (parabolic) or
/// `x0 x1 + ... + x_{n-3} x_{n-2} + f(x_{n-1}, x_n)` with `f = xy` for the
/// hyperbolic case and an irreducible binary form for the elliptic case.
/// The Hermitian form is `sum x_i y_i^q` over `GF(q^2)`.
#[derive(Clone)]
pub struct FormSpec {
    kind: FormKind,
    n: usize,
    field: Arc<Field>,
    q: u32,
    tail: [Elem; 3],
    gram: Vec<Elem>,
}

impl std::fmt::Debug for FormSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}(n={}, q={}, tail={:?})", self.kind, self.n, self.q, self.tail)
    }
}

impl FormSpec {
    /// The standard quadric `Q^eps(n, q)`; `eps` must be 0 for even `n` and
    /// ±1 for odd `n`.
    pub fn quadric(n: usize, q: u64, eps: i8) -> Result<FormSpec, GeometryError> {
        let field = field_of_order(q)?;
        let kind = match (n % 2, eps) {
            (0, 0) if n >= 2 => FormKind::Parabolic,
            (1, 1) => FormKind::Hyperbolic,
            (1, -1) => FormKind::Elliptic,
            _ => {
                return Err(GeometryError::BadParameters(format!(
                    "quadric needs eps = 0 for even n >= 2 and eps = ±1 for odd n (got n={n}, eps={eps})"
                )))
            }
        };
        let tail = match kind {
            FormKind::Hyperbolic => [0, 1, 0],
            FormKind::Elliptic if field.is_odd() => {
                let nu = field.smallest_nonsquare().expect("odd field");
                [1, 0, field.neg(nu)]
            }
            FormKind::Elliptic => {
                let delta = field
                    .elements()
                    .find(|&d| {
                        field
                            .elements()
                            .all(|t| field.add(field.add(field.mul(t, t), t), d) != 0)
                    })
                    .expect("irreducible quadratic exists");
                [1, 1, delta]
            }
            _ => [0, 0, 1],
        };
        Ok(Self::assemble(kind, n, field, q as u32, tail))
    }

    /// Elliptic quadric with `f = x^2 - nu y^2` for a chosen nonsquare `nu`
    /// (odd `q` only).
    pub fn elliptic_with_nu(n: usize, q: u64, nu: Elem) -> Result<FormSpec, GeometryError> {
        let field = field_of_order(q)?;
        if n.is_multiple_of(2) || !field.is_odd() || field.square_class(nu) != SquareClass::NonSquare {
            return Err(GeometryError::BadParameters(
                "elliptic form needs odd n, odd q and a nonsquare".into(),
            ));
        }
        let tail = [1, 0, field.neg(nu)];
        Ok(Self::assemble(FormKind::Elliptic, n, field, q as u32, tail))
    }

    /// The Hermitian form on `GF(q^2)^{n+1}`.
    pub fn hermitian(n: usize, q: u64) -> Result<FormSpec, GeometryError> {
        if n < 1 {
            return Err(GeometryError::BadParameters("Hermitian form needs n >= 1".into()));
        }
        let field = field_of_order(
            q.checked_mul(q)
                .ok_or_else(|| GeometryError::BadParameters(format!("q = {q} too large")))?,
        )?;
        Ok(Self::assemble(FormKind::Hermitian, n, field, q as u32, [0, 0, 0]))
    }

    fn assemble(kind: FormKind, n: usize, field: Arc<Field>, q: u32, tail: [Elem; 3]) -> FormSpec {
        let mut form = FormSpec {
            kind,
            n,
            field,
            q,
            tail,
            gram: Vec::new(),
        };
        if kind != FormKind::Hermitian {
            let d = n + 1;
            let mut gram = vec![0; d * d];
            let unit = |i: usize| {
                let mut e = vec![0; d];
                e[i] = 1;
                e
            };
            for i in 0..d {
                for j in 0..d {
                    let mut s = unit(i);
                    s[j] = form.field.add(s[j], 1);
                    let v = form.kappa(&s);
                    let v = form.field.sub(v, form.kappa(&unit(i)));
                    gram[i * d + j] = form.field.sub(v, form.kappa(&unit(j)));
                }
            }
            form.gram = gram;
        }
        form
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    /// Projective dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// The parameter `q`: the field order for quadrics, its square root for
    /// Hermitian forms.
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn epsilon(&self) -> i8 {
        match self.kind {
            FormKind::Parabolic => 0,
            FormKind::Hyperbolic => 1,
            FormKind::Elliptic => -1,
            FormKind::Hermitian => {
                if self.n.is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn is_quadric(&self) -> bool {
        self.kind != FormKind::Hermitian
    }

    /// Coefficients `(a, b, c)` of the binary tail `a x^2 + b xy + c y^2`.
    pub fn tail(&self) -> [Elem; 3] {
        self.tail
    }

    /// Rank of the polar space (maximal vector dimension of a totally
    /// isotropic subspace).
    pub fn polar_rank(&self) -> usize {
        match self.kind {
            FormKind::Hyperbolic => self.n.div_ceil(2),
            FormKind::Elliptic => (self.n - 1) / 2,
            FormKind::Parabolic => self.n / 2,
            FormKind::Hermitian => self.n.div_ceil(2),
        }
    }

    fn check_len(&self, x: &[Elem]) -> Result<(), GeometryError> {
        if x.len() != self.n + 1 {
            return Err(GeometryError::DimensionMismatch {
                expected: self.n + 1,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// `kappa(x)` without a length check.
    pub fn kappa(&self, x: &[Elem]) -> Elem {
        let f = &*self.field;
        match self.kind {
            FormKind::Hermitian => x
                .iter()
                .fold(0, |acc, &c| f.add(acc, f.mul(c, f.conj_unchecked(c, self.q)))),
            FormKind::Parabolic => {
                let mut acc = 0;
                for i in 0..self.n / 2 {
                    acc = f.add(acc, f.mul(x[2 * i], x[2 * i + 1]));
                }
                f.add(acc, f.mul(x[self.n], x[self.n]))
            }
            _ => {
                let mut acc = 0;
                for i in 0..(self.n - 1) / 2 {
                    acc = f.add(acc, f.mul(x[2 * i], x[2 * i + 1]));
                }
                let (u, v) = (x[self.n - 1], x[self.n]);
                let [a, b, c] = self.tail;
                acc = f.add(acc, f.mul(a, f.mul(u, u)));
                acc = f.add(acc, f.mul(b, f.mul(u, v)));
                f.add(acc, f.mul(c, f.mul(v, v)))
            }
        }
    }

    pub fn eval(&self, x: &[Elem]) -> Result<Elem, GeometryError> {
        self.check_len(x)?;
        Ok(self.kappa(x))
    }

    /// Vector `r` with `B(x, y) = sum_j x_j r_j` for all `x`.
    pub fn dual_vector(&self, y: &[Elem]) -> Vec<Elem> {
        let f = &*self.field;
        if self.kind == FormKind::Hermitian {
            return y.iter().map(|&c| f.conj_unchecked(c, self.q)).collect();
        }
        let d = self.n + 1;
        (0..d)
            .map(|i| (0..d).fold(0, |acc, j| f.add(acc, f.mul(self.gram[i * d + j], y[j]))))
            .collect()
    }

    /// The (sesqui)linear form without checks. For even-characteristic
    /// quadrics this is the alternating polar form.
    pub fn polar(&self, x: &[Elem], y: &[Elem]) -> Elem {
        let f = &*self.field;
        x.iter()
            .zip(self.dual_vector(y))
            .fold(0, |acc, (&a, b)| f.add(acc, f.mul(a, b)))
    }

    /// `B(x, y)`. Errors for quadrics in even characteristic, where the polar
    /// form is degenerate or alternating.
    pub fn bilinear(&self, x: &[Elem], y: &[Elem]) -> Result<Elem, GeometryError> {
        self.check_len(x)?;
        self.check_len(y)?;
        if self.is_quadric() && !self.field.is_odd() {
            return Err(GeometryError::NotApplicable(
                "bilinear form of an even-characteristic quadric",
            ));
        }
        Ok(self.polar(x, y))
    }

    /// `X ⊥ Y` under the polarity.
    pub fn perp_test(&self, x: &ProjPoint, y: &ProjPoint) -> bool {
        self.polar(x.coords(), y.coords()) == 0
    }

    pub fn is_isotropic(&self, x: &ProjPoint) -> bool {
        self.kappa(x.coords()) == 0
    }

    /// Square class of `kappa(X)` (odd-characteristic quadrics only).
    pub fn quadratic_type(&self, x: &ProjPoint) -> Result<SquareClass, GeometryError> {
        if !self.is_quadric() || !self.field.is_odd() {
            return Err(GeometryError::NotApplicable(
                "quadratic type needs a quadric over a field of odd order",
            ));
        }
        self.check_len(x.coords())?;
        Ok(self.field.square_class(self.kappa(x.coords())))
    }

    /// All points of the ambient space.
    pub fn all_points(&self) -> Result<Vec<ProjPoint>, GeometryError> {
        enumerate_points(&self.field, self.n)
    }

    /// Anisotropic points in lexicographic order; the nucleus is excluded for
    /// even-characteristic parabolic quadrics.
    pub fn anisotropic_points(&self) -> Result<Vec<ProjPoint>, GeometryError> {
        let nucleus = self.nucleus();
        Ok(self
            .all_points()?
            .into_iter()
            .filter(|p| !self.is_isotropic(p) && Some(p) != nucleus.as_ref())
            .collect())
    }

    /// The nucleus of an even-characteristic parabolic quadric: the radical of
    /// the polar form, confirmed to lie on no secant line.
    pub fn nucleus(&self) -> Option<ProjPoint> {
        if self.kind != FormKind::Parabolic || self.field.is_odd() {
            return None;
        }
        let d = self.n + 1;
        let rows: Vec<Vec<Elem>> = (0..d).map(|i| self.gram[i * d..(i + 1) * d].to_vec()).collect();
        let radical = super::space::kernel(&self.field, &rows, d);
        let candidate = ProjPoint::new(&self.field, radical.first()?.clone()).ok()?;
        let on_secant = self
            .all_points()
            .ok()?
            .iter()
            .any(|z| z != &candidate && self.isotropic_on_line(&candidate, z).ok() == Some(2));
        (!on_secant).then_some(candidate)
    }

    /// Number of isotropic points on the line `XY`, by evaluating the form
    /// at each of its points.
    pub fn isotropic_on_line(&self, x: &ProjPoint, y: &ProjPoint) -> Result<usize, GeometryError> {
        if x == y {
            return Err(GeometryError::EqualPoints);
        }
        self.check_len(x.coords())?;
        self.check_len(y.coords())?;
        let f = &*self.field;
        let mut count = usize::from(self.kappa(y.coords()) == 0);
        let mut v = vec![0; self.n + 1];
        for t in f.elements() {
            for (i, c) in v.iter_mut().enumerate() {
                *c = f.add(x.coords()[i], f.mul(t, y.coords()[i]));
            }
            if self.kappa(&v) == 0 {
                count += 1;
            }
        }
        Ok(count)
    }

    pub fn classify_line(&self, x: &ProjPoint, y: &ProjPoint) -> Result<LineClass, GeometryError> {
        let count = self.isotropic_on_line(x, y)?;
        let line_size = self.field.order() as usize + 1;
        Ok(match count {
            c if c == line_size => LineClass::TotallyIsotropic,
            0 => LineClass::Passant,
            1 => LineClass::Tangent,
            2 if self.is_quadric() => LineClass::Secant,
            _ => LineClass::HermSecant,
        })
    }

    /// Section type of the plane spanned by three points (odd-characteristic
    /// quadrics).
    pub fn classify_plane(&self, p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> Result<PlaneClass, GeometryError> {
        if !self.is_quadric() || !self.field.is_odd() {
            return Err(GeometryError::NotApplicable(
                "plane classification needs a quadric over a field of odd order",
            ));
        }
        let plane = Subspace::of_points(&self.field, &[p1, p2, p3]);
        if plane.rank() != 3 {
            return Err(GeometryError::Collinear);
        }
        self.classify_plane_subspace(&plane)
    }

    pub(crate) fn classify_plane_subspace(&self, plane: &Subspace) -> Result<PlaneClass, GeometryError> {
        let q = self.field.order() as usize;
        let points = plane.points(&self.field);
        let (iso, aniso): (Vec<&ProjPoint>, Vec<&ProjPoint>) = points.iter().partition(|p| self.is_isotropic(p));
        let iso_span = Subspace::of_points(&self.field, &iso);
        match iso.len() {
            1 => Ok(PlaneClass::T0),
            c if c == 2 * q + 1 => Ok(PlaneClass::T2),
            c if c == q + 1 && iso_span.rank() == 2 => Ok(PlaneClass::T1),
            c if c == q + 1 => {
                let external = aniso
                    .iter()
                    .find(|z| iso.iter().any(|w| self.isotropic_on_line(z, w).ok() == Some(1)))
                    .expect("a conic has external points");
                match self.field.square_class(self.kappa(external.coords())) {
                    SquareClass::Square => Ok(PlaneClass::TSquare),
                    _ => Ok(PlaneClass::TNonSquare),
                }
            }
            c if c == points.len() => Err(GeometryError::TotallyIsotropicPlane),
            _ => unreachable!("plane sections of a non-degenerate quadric"),
        }
    }

    /// All planes through the line `XY`, deduplicated.
    pub fn planes_through_line(&self, x: &ProjPoint, y: &ProjPoint) -> Result<Vec<Subspace>, GeometryError> {
        let line = Subspace::of_points(&self.field, &[x, y]);
        let mut planes: Vec<Subspace> = self
            .all_points()?
            .iter()
            .filter(|z| !line.contains(&self.field, z.coords()))
            .map(|z| line.join(&self.field, &[z.coords()]))
            .collect();
        planes.sort();
        planes.dedup();
        Ok(planes)
    }

    /// Numbers of planes through the line `XY` of each section type, in the
    /// order of [`PlaneClass`].
    pub fn plane_profile(&self, x: &ProjPoint, y: &ProjPoint) -> Result<[u64; 5], GeometryError> {
        let mut out = [0u64; 5];
        for plane in self.planes_through_line(x, y)? {
            out[self.classify_plane_subspace(&plane)? as usize] += 1;
        }
        Ok(out)
    }

    /// Normalized point from raw coordinates in this form's space.
    pub fn point(&self, coords: Vec<Elem>) -> Result<ProjPoint, GeometryError> {
        self.check_len(&coords)?;
        let mut c = coords;
        if !normalize(&self.field, &mut c) {
            return Err(GeometryError::ZeroVector);
        }
        ProjPoint::new(&self.field, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::theta;

    fn pt(form: &FormSpec, c: &[Elem]) -> ProjPoint {
        form.point(c.to_vec()).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let par = FormSpec::quadric(2, 5, 0).unwrap();
        assert_eq!(par.eval(&[0, 0, 1]).unwrap(), 1);
        let hyp = FormSpec::quadric(3, 5, 1).unwrap();
        assert_eq!(hyp.eval(&[1, 0, 0, 0]).unwrap(), 0);
        assert_eq!(hyp.eval(&[1, 1, 0, 0]).unwrap(), 1);
        assert_eq!(
            hyp.quadratic_type(&pt(&hyp, &[1, 1, 0, 0])).unwrap(),
            SquareClass::Square
        );
        assert_eq!(hyp.bilinear(&[1, 0, 0, 0], &[0, 1, 0, 0]).unwrap(), 1);
        let herm = FormSpec::hermitian(2, 3).unwrap();
        assert_eq!(herm.eval(&[1, 0, 0]).unwrap(), 1);
        assert!(matches!(
            hyp.eval(&[1, 0]),
            Err(GeometryError::DimensionMismatch { expected: 4, got: 2 })
        ));
    }

    #[test]
    fn quadric_sizes() {
        for (n, q, eps) in [
            (3usize, 3u64, 1i8),
            (3, 3, -1),
            (3, 5, 1),
            (3, 5, -1),
            (4, 3, 0),
            (5, 3, -1),
            (3, 4, -1),
            (3, 2, 1),
            (2, 4, 0),
        ] {
            let form = FormSpec::quadric(n, q, eps).unwrap();
            let pts = form.all_points().unwrap();
            let iso = pts.iter().filter(|p| form.is_isotropic(p)).count() as i128;
            let expected = theta(n as i64 - 1, q) as i128
                + if n % 2 == 1 {
                    eps as i128 * (q as i128).pow((n as u32 - 1) / 2)
                } else {
                    0
                };
            assert_eq!(iso, expected, "Q^{eps}({n},{q})");
        }
        let hyp = FormSpec::quadric(3, 5, 1).unwrap();
        assert_eq!(hyp.anisotropic_points().unwrap().len(), 120);
        let ell = FormSpec::quadric(3, 4, -1).unwrap();
        assert_eq!(ell.anisotropic_points().unwrap().len(), 68);
        let herm = FormSpec::hermitian(2, 3).unwrap();
        assert_eq!(herm.anisotropic_points().unwrap().len(), 63);
    }

    #[test]
    fn hermitian_values_in_subfield() {
        let herm = FormSpec::hermitian(2, 3).unwrap();
        let f = herm.field().clone();
        for p in herm.all_points().unwrap() {
            let k = herm.kappa(p.coords());
            assert_eq!(f.conj(k).unwrap(), k);
        }
        for x in herm.all_points().unwrap().iter().take(20) {
            for y in herm.all_points().unwrap().iter().take(20) {
                let a = herm.polar(x.coords(), y.coords());
                let b = herm.polar(y.coords(), x.coords());
                assert_eq!(a, f.conj(b).unwrap());
            }
        }
    }

    #[test]
    fn types_split_evenly() {
        for (n, q, eps) in [(3usize, 5u64, 1i8), (3, 5, -1), (5, 3, 1), (3, 7, -1)] {
            let form = FormSpec::quadric(n, q, eps).unwrap();
            let aniso = form.anisotropic_points().unwrap();
            let squares = aniso
                .iter()
                .filter(|p| form.quadratic_type(p).unwrap() == SquareClass::Square)
                .count();
            assert_eq!(2 * squares, aniso.len());
        }
    }

    #[test]
    fn lines_through_anisotropic_point() {
        // For every anisotropic X: theta_{n-2} tangents and the secant and passant counts.
        for (n, q, eps) in [(3usize, 5u64, 1i8), (3, 5, -1), (5, 3, 1)] {
            let form = FormSpec::quadric(n, q, eps).unwrap();
            let f = form.field().clone();
            let x = form.anisotropic_points().unwrap()[0].clone();
            let mut seen = std::collections::BTreeSet::new();
            let mut tally = [0i128; 3];
            for y in form.all_points().unwrap() {
                if y == x {
                    continue;
                }
                let line = Subspace::of_points(&f, &[&x, &y]);
                if !seen.insert(line) {
                    continue;
                }
                match form.classify_line(&x, &y).unwrap() {
                    LineClass::Tangent => tally[0] += 1,
                    LineClass::Secant => tally[1] += 1,
                    LineClass::Passant => tally[2] += 1,
                    other => panic!("{other:?}"),
                }
            }
            let h = (q as i128).pow((n as u32 - 1) / 2);
            let qn1 = (q as i128).pow(n as u32 - 1);
            assert_eq!(tally[0], theta(n as i64 - 2, q) as i128);
            assert_eq!(tally[1], (qn1 + eps as i128 * h) / 2);
            assert_eq!(tally[2], (qn1 - eps as i128 * h) / 2);
        }
    }

    #[test]
    fn tangent_forces_equal_type() {
        let form = FormSpec::quadric(3, 5, 1).unwrap();
        let aniso = form.anisotropic_points().unwrap();
        let mut tangents = 0;
        for (i, x) in aniso.iter().enumerate() {
            for y in &aniso[i + 1..] {
                if form.classify_line(x, y).unwrap() == LineClass::Tangent {
                    tangents += 1;
                    assert_eq!(form.quadratic_type(x).unwrap(), form.quadratic_type(y).unwrap());
                }
            }
        }
        assert!(tangents > 0);
    }

    #[test]
    fn totally_isotropic_line_detected() {
        let form = FormSpec::quadric(3, 5, 1).unwrap();
        let a = pt(&form, &[1, 0, 0, 0]);
        let b = pt(&form, &[0, 0, 1, 0]);
        assert_eq!(form.classify_line(&a, &b).unwrap(), LineClass::TotallyIsotropic);
        assert_eq!(form.classify_line(&a, &a), Err(GeometryError::EqualPoints));
    }

    #[test]
    fn hermitian_lines() {
        let form = FormSpec::hermitian(2, 3).unwrap();
        let aniso = form.anisotropic_points().unwrap();
        for x in aniso.iter().take(5) {
            for y in aniso.iter().take(40) {
                if x == y {
                    continue;
                }
                let c = form.classify_line(x, y).unwrap();
                assert!(matches!(c, LineClass::Tangent | LineClass::HermSecant));
            }
        }
    }

    #[test]
    fn perp_degree() {
        let form = FormSpec::quadric(3, 5, 1).unwrap();
        let aniso = form.anisotropic_points().unwrap();
        let x = &aniso[0];
        assert!(!form.perp_test(x, x));
        let deg = aniso.iter().filter(|y| form.perp_test(x, y)).count();
        assert_eq!(deg, 25);
        let iso = pt(&form, &[1, 0, 0, 0]);
        assert!(form.perp_test(&iso, &iso));
    }

    #[test]
    fn bilinear_rules() {
        let form = FormSpec::quadric(3, 7, -1).unwrap();
        let f = form.field().clone();
        let pts = form.all_points().unwrap();
        for x in pts.iter().step_by(7) {
            let b = form.bilinear(x.coords(), x.coords()).unwrap();
            assert_eq!(b, f.add(form.kappa(x.coords()), form.kappa(x.coords())));
            for y in pts.iter().step_by(11) {
                assert_eq!(
                    form.bilinear(x.coords(), y.coords()).unwrap(),
                    form.bilinear(y.coords(), x.coords()).unwrap()
                );
            }
        }
        let even = FormSpec::quadric(3, 4, 1).unwrap();
        assert!(even.bilinear(&[1, 0, 0, 0], &[0, 1, 0, 0]).is_err());
    }

    #[test]
    fn nucleus_is_unique_point_on_no_secant() {
        for (n, q) in [(2usize, 2u64), (2, 4), (4, 2)] {
            let form = FormSpec::quadric(n, q, 0).unwrap();
            let pts = form.all_points().unwrap();
            let no_secant: Vec<_> = pts
                .iter()
                .filter(|p| {
                    pts.iter()
                        .all(|z| z == *p || form.isotropic_on_line(p, z).unwrap() != 2)
                })
                .collect();
            assert_eq!(no_secant.len(), 1);
            assert_eq!(form.nucleus().as_ref(), Some(no_secant[0]));
            let mut e = vec![0; n + 1];
            e[n] = 1;
            assert_eq!(no_secant[0].coords(), e.as_slice());
        }
        assert_eq!(FormSpec::quadric(4, 3, 0).unwrap().nucleus(), None);
    }

    #[test]
    fn even_elliptic_tail_is_irreducible() {
        for q in [2u64, 4, 8] {
            let form = FormSpec::quadric(1, q, -1).unwrap();
            assert!(form.all_points().unwrap().iter().all(|p| !form.is_isotropic(p)));
            let hyp = FormSpec::quadric(1, q, 1).unwrap();
            assert_eq!(
                hyp.all_points().unwrap().iter().filter(|p| hyp.is_isotropic(p)).count(),
                2
            );
        }
    }

    #[test]
    fn parity_errors() {
        assert!(FormSpec::quadric(3, 5, 0).is_err());
        assert!(FormSpec::quadric(4, 5, 1).is_err());
        assert!(FormSpec::quadric(3, 6, 1).is_err());
    }

    #[test]
    fn plane_signatures() {
        // Section shapes of all planes through one line of PG(3,5).
        let form = FormSpec::quadric(3, 5, 1).unwrap();
        let aniso = form.anisotropic_points().unwrap();
        let x = &aniso[0];
        let mut kinds = std::collections::BTreeSet::new();
        for y in aniso.iter().skip(1) {
            for plane in form.planes_through_line(x, y).unwrap() {
                let iso = plane
                    .points(form.field())
                    .iter()
                    .filter(|p| form.is_isotropic(p))
                    .count();
                let class = form.classify_plane_subspace(&plane).unwrap();
                let expected = match class {
                    PlaneClass::T0 => 1,
                    PlaneClass::T1 | PlaneClass::TSquare | PlaneClass::TNonSquare => 6,
                    PlaneClass::T2 => 11,
                };
                assert_eq!(iso, expected);
                kinds.insert(class);
            }
            if kinds.len() == 4 {
                break;
            }
        }
        assert!(kinds.contains(&PlaneClass::TSquare) && kinds.contains(&PlaneClass::TNonSquare));
        let a = pt(&form, &[1, 0, 0, 0]);
        let b = pt(&form, &[0, 1, 0, 0]);
        let c = pt(&form, &[1, 1, 0, 0]);
        assert_eq!(form.classify_plane(&a, &b, &c), Err(GeometryError::Collinear));
    }
}
