use crate::gf::{Elem, Field, SquareClass};

use super::form::{FormKind, FormSpec};
use super::ProjPoint;

/// Per-point cache of coordinates, form values and dual vectors, for fast
/// pair classification over a fixed point list.
pub struct PointTable {
    width: usize,
    coords: Vec<Elem>,
    dual: Vec<Elem>,
    kappa: Vec<Elem>,
}

impl PointTable {
    pub fn new(form: &FormSpec, points: &[ProjPoint]) -> PointTable {
        let width = form.n() + 1;
        let mut coords = Vec::with_capacity(points.len() * width);
        let mut dual = Vec::with_capacity(points.len() * width);
        let mut kappa = Vec::with_capacity(points.len());
        for p in points {
            coords.extend_from_slice(p.coords());
            dual.extend(form.dual_vector(p.coords()));
            kappa.push(form.kappa(p.coords()));
        }
        PointTable {
            width,
            coords,
            dual,
            kappa,
        }
    }

    pub fn len(&self) -> usize {
        self.kappa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappa.is_empty()
    }

    pub fn coords(&self, i: usize) -> &[Elem] {
        &self.coords[i * self.width..(i + 1) * self.width]
    }

    pub fn kappa(&self, i: usize) -> Elem {
        self.kappa[i]
    }

    /// `B(x_i, x_j)`.
    #[inline]
    pub fn bil(&self, field: &Field, i: usize, j: usize) -> Elem {
        let x = self.coords(i);
        let d = &self.dual[j * self.width..(j + 1) * self.width];
        x.iter().zip(d).fold(0, |acc, (&a, &b)| {
            if a == 0 || b == 0 {
                acc
            } else {
                field.add(acc, field.mul(a, b))
            }
        })
    }

    /// Number of isotropic points on the line through points `i != j`,
    /// from the expansion of the form along `x_i + t x_j`.
    pub fn isotropic_on_line(&self, form: &FormSpec, i: usize, j: usize) -> usize {
        let f = &**form.field();
        let (kx, ky) = (self.kappa[i], self.kappa[j]);
        let bxy = self.bil(f, i, j);
        let mut count = usize::from(ky == 0);
        match form.kind() {
            FormKind::Hermitian => {
                let byx = self.bil(f, j, i);
                let q = form.q();
                for t in f.elements() {
                    let tc = f.conj_unchecked(t, q);
                    let v = f.add(f.add(kx, f.mul(tc, bxy)), f.add(f.mul(t, byx), f.mul(f.mul(t, tc), ky)));
                    count += usize::from(v == 0);
                }
            }
            _ if f.is_odd() && ky != 0 => {
                // Roots of ky t^2 + bxy t + kx.
                let four = f.from_int(4);
                let disc = f.sub(f.mul(bxy, bxy), f.mul(four, f.mul(kx, ky)));
                count += match f.square_class(disc) {
                    SquareClass::Zero => 1,
                    SquareClass::Square => 2,
                    SquareClass::NonSquare => 0,
                };
            }
            _ => {
                for t in f.elements() {
                    let v = f.add(f.add(kx, f.mul(t, bxy)), f.mul(f.mul(t, t), ky));
                    count += usize::from(v == 0);
                }
            }
        }
        count
    }
}
