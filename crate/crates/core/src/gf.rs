//! Finite fields GF(p^k).
//!
//! Elements are stored as their index `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! where `c_i` are the coefficients in the polynomial basis of the modulus.
//! This index is also the canonical order of field elements used for point
//! enumeration and for choosing distinguished elements such as the smallest
//! nonsquare.
//!
//! The modulus is the lexicographically smallest monic irreducible polynomial
//! of degree `k`, comparing coefficient vectors from the constant term up.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

/// Default bound on `p^k`.
pub const DEFAULT_ORDER_BOUND: u64 = 1 << 20;

const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} exceeds the bound {bound}")]
    TooLarge { p: u64, k: u32, bound: u64 },
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("field order {0} is not a square")]
    NotQuadratic(u32),
    #[error("invalid coefficient vector for GF({0})")]
    BadCoefficients(u32),
}

/// A field element, as an index into the canonical element order.
pub type Elem = u32;

/// Square class of a field element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SquareClass {
    Zero,
    Square,
    NonSquare,
}

impl std::ops::Mul for SquareClass {
    type Output = SquareClass;

    /// Class of a product.
    fn mul(self, other: SquareClass) -> SquareClass {
        use SquareClass::*;
        match (self, other) {
            (Zero, _) | (_, Zero) => Zero,
            (Square, Square) | (NonSquare, NonSquare) => Square,
            _ => NonSquare,
        }
    }
}

/// Immutable description of GF(p^k) with precomputed tables.
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<Elem>,
    log: Vec<u32>,
    add: Option<Vec<Elem>>,
    neg: Vec<Elem>,
    square: Vec<SquareClass>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.k, self.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, k)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut k = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Builds GF(p^k) with the default order bound.
pub fn make_field(p: u64, k: u32) -> Result<Arc<Field>, GfError> {
    make_field_bounded(p, k, DEFAULT_ORDER_BOUND)
}

/// Builds GF(q) for a prime power `q`.
pub fn field_of_order(q: u64) -> Result<Arc<Field>, GfError> {
    let (p, k) = prime_power(q).ok_or(GfError::NotPrime(q))?;
    make_field(p, k)
}

pub fn make_field_bounded(p: u64, k: u32, bound: u64) -> Result<Arc<Field>, GfError> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if k == 0 {
        return Err(GfError::ZeroDegree);
    }
    let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if q > bound as u128 || q > u32::MAX as u128 {
        return Err(GfError::TooLarge { p, k, bound });
    }
    Ok(Arc::new(Field::build(p as u32, k, q as u32)))
}

mod poly {
    //! Dense polynomials over GF(p), low degree first.

    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        pow_mod(a, p - 2, p)
    }

    pub fn pow_mod(a: u32, mut e: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    /// Remainder of `a` modulo `b` (b nonzero).
    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r: Vec<u32> = a.to_vec();
        trim(&mut r);
        let mut b = b.to_vec();
        trim(&mut b);
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p) as u64;
        while r.len() > db {
            let top = r.len() - 1;
            let f = r[top] as u64 * lead_inv % p as u64;
            let shift = top - db;
            for (i, &bi) in b.iter().enumerate() {
                let sub = f * bi as u64 % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|x| x as u32).collect();
        rem(&prod, m, p)
    }

    /// Digits of `index` in base `p`, `len` of them, least significant first.
    pub fn digits(mut index: u64, p: u32, len: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push((index % p as u64) as u32);
            index /= p as u64;
        }
        out
    }

    /// True if the monic polynomial `f` of degree `k` has no monic factor of
    /// degree 1..=k/2.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let k = f.len() - 1;
        for d in 1..=k / 2 {
            let count = (p as u64).pow(d as u32);
            for idx in 0..count {
                let mut g = digits(idx, p, d);
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl Field {
    fn build(p: u32, k: u32, q: u32) -> Field {
        let modulus = Self::find_modulus(p, k);
        let encode = |c: &[u32]| -> u32 {
            let mut v = 0u64;
            for &ci in c.iter().rev() {
                v = v * p as u64 + ci as u64;
            }
            v as u32
        };
        let decode = |e: u32| -> Vec<u32> {
            let mut d = poly::digits(e as u64, p, k as usize);
            poly::trim(&mut d);
            d
        };

        let order = q - 1;
        let mut prime_divisors = Vec::new();
        let mut m = order;
        let mut d = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                prime_divisors.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            prime_divisors.push(m);
        }
        let pow_poly = |base: &[u32], mut e: u32| -> Vec<u32> {
            let mut r = vec![1u32];
            let mut b = base.to_vec();
            while e > 0 {
                if e & 1 == 1 {
                    r = poly::mulmod(&r, &b, &modulus, p);
                }
                b = poly::mulmod(&b, &b, &modulus, p);
                e >>= 1;
            }
            r
        };
        let generator = (1..q)
            .map(decode)
            .find(|g| prime_divisors.iter().all(|&r| pow_poly(g, order / r) != [1]))
            .expect("multiplicative group is cyclic");

        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![1u32];
        for i in 0..order {
            let e = encode(&cur);
            exp[i as usize] = e;
            exp[(i + order) as usize] = e;
            log[e as usize] = i;
            cur = poly::mulmod(&cur, &generator, &modulus, p);
        }

        let neg: Vec<Elem> = (0..q)
            .map(|e| {
                let d = poly::digits(e as u64, p, k as usize);
                let n: Vec<u32> = d.iter().map(|&c| (p - c) % p).collect();
                encode(&n)
            })
            .collect();

        let mut square = vec![SquareClass::NonSquare; q as usize];
        square[0] = SquareClass::Zero;
        for i in 0..order {
            let s = exp[((2 * i as u64) % order as u64) as usize];
            square[s as usize] = SquareClass::Square;
        }

        let mut field = Field {
            p,
            k,
            q,
            modulus,
            exp,
            log,
            add: None,
            neg,
            square,
        };
        if q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = field.add_digits(a, b);
                }
            }
            field.add = Some(table);
        }
        field
    }

    fn find_modulus(p: u32, k: u32) -> Vec<u32> {
        // Lexicographic on (c_0, ..., c_{k-1}): c_0 is the most significant digit.
        let count = (p as u64).pow(k);
        for t in 0..count {
            let mut c = poly::digits(t, p, k as usize);
            c.reverse();
            c.push(1);
            if poly::is_irreducible(&c, p) {
                return c;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * place;
            place = place.wrapping_mul(self.p);
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    /// Embedding of the integer `n` via the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem, GfError> {
        if coeffs.len() != self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(GfError::BadCoefficients(self.q));
        }
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            v = v * self.p as u64 + c as u64;
        }
        Ok(v as Elem)
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        poly::digits(a as u64, self.p, self.k as usize)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, GfError> {
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        let order = self.q - 1;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    /// Square-and-multiply exponentiation; `0^0 = 1`.
    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut r = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    #[inline]
    pub fn square_class(&self, a: Elem) -> SquareClass {
        self.square[a as usize]
    }

    /// Smallest nonsquare in canonical order (odd order only).
    pub fn smallest_nonsquare(&self) -> Option<Elem> {
        self.elements()
            .find(|&a| self.square_class(a) == SquareClass::NonSquare)
    }

    /// Order of the subfield fixed by `conj`, for fields of square order.
    pub fn subfield_order(&self) -> Result<u32, GfError> {
        if !self.k.is_multiple_of(2) {
            return Err(GfError::NotQuadratic(self.q));
        }
        Ok(self.p.pow(self.k / 2))
    }

    /// The involution `a -> a^r` with `r^2 = q`.
    pub fn conj(&self, a: Elem) -> Result<Elem, GfError> {
        let r = self.subfield_order()?;
        Ok(self.conj_unchecked(a, r))
    }

    #[inline]
    pub(crate) fn conj_unchecked(&self, a: Elem, r: u32) -> Elem {
        if a == 0 {
            0
        } else {
            let order = (self.q - 1) as u64;
            self.exp[((self.log[a as usize] as u64 * r as u64) % order) as usize]
        }
    }

    /// Checked wrapper tied to this field.
    pub fn elem(self: &Arc<Self>, value: Elem) -> FieldElem {
        FieldElem {
            field: Arc::clone(self),
            value: value % self.q,
        }
    }
}

/// A field element that remembers its field, for checked arithmetic.
#[derive(Clone)]
pub struct FieldElem {
    field: Arc<Field>,
    value: Elem,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.field.coeffs(self.value))
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.value == other.value
    }
}

impl FieldElem {
    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    fn same(&self, other: &FieldElem) -> Result<(), GfError> {
        if *self.field == *other.field {
            Ok(())
        } else {
            Err(GfError::MixedFields)
        }
    }

    fn wrap(&self, value: Elem) -> FieldElem {
        FieldElem {
            field: Arc::clone(&self.field),
            value,
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.same(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.same(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.same(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElem {
        self.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElem, GfError> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.wrap(self.field.pow(self.value, e))
    }

    pub fn square_class(&self) -> SquareClass {
        self.field.square_class(self.value)
    }

    pub fn conj(&self) -> Result<FieldElem, GfError> {
        Ok(self.wrap(self.field.conj(self.value)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn has_root(c: &[u32], p: u32) -> bool {
        (0..p).any(|x| {
            let mut v = 0u64;
            for &ci in c.iter().rev() {
                v = (v * x as u64 + ci as u64) % p as u64;
            }
            v == 0
        })
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.inv(2).unwrap(), 3);
        assert_eq!(f.add(4, 3), 2);
        assert_eq!(f.neg(1), 4);
        assert_eq!(f.square_class(4), SquareClass::Square);
        assert_eq!(f.square_class(2), SquareClass::NonSquare);
        assert_eq!(f.square_class(0), SquareClass::Zero);
    }

    #[test]
    fn quadratic_moduli_are_smallest_rootless() {
        for p in [2u32, 3, 5, 7] {
            let mut expected = None;
            'outer: for c0 in 0..p {
                for c1 in 0..p {
                    if !has_root(&[c0, c1, 1], p) {
                        expected = Some(vec![c0, c1, 1]);
                        break 'outer;
                    }
                }
            }
            let f = make_field(p as u64, 2).unwrap();
            assert_eq!(Some(f.modulus().to_vec()), expected, "p = {p}");
        }
        assert_eq!(make_field(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn gf9_conjugation_negates_i() {
        let f = make_field(3, 2).unwrap();
        for a in 0..3u32 {
            for b in 0..3u32 {
                let x = f.from_coeffs(&[a, b]).unwrap();
                let mut cube = 1;
                for _ in 0..3 {
                    cube = f.mul(cube, x);
                }
                let expected = f.from_coeffs(&[a, (3 - b) % 3]).unwrap();
                assert_eq!(cube, expected);
                assert_eq!(f.conj(x).unwrap(), expected);
            }
        }
    }

    #[test]
    fn frobenius_fixes_everything() {
        let f = make_field(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.pow(a, 9), a);
        }
    }

    #[test]
    fn square_counts_and_products() {
        for q in [3u64, 5, 7, 9, 11, 25, 27] {
            let f = field_of_order(q).unwrap();
            let sq = f
                .elements()
                .filter(|&a| f.square_class(a) == SquareClass::Square)
                .count();
            assert_eq!(sq as u64, (q - 1) / 2);
            for a in 1..q as u32 {
                for b in 1..q as u32 {
                    assert_eq!(f.square_class(f.mul(a, b)), f.square_class(a) * f.square_class(b));
                }
            }
        }
        let f4 = field_of_order(4).unwrap();
        assert!((1..4).all(|a| f4.square_class(a) == SquareClass::Square));
    }

    #[test]
    fn conj_properties() {
        for q in [4u64, 9, 16, 25] {
            let f = field_of_order(q).unwrap();
            let r = f.subfield_order().unwrap();
            let fixed: Vec<_> = f.elements().filter(|&a| f.conj(a).unwrap() == a).collect();
            assert_eq!(fixed.len() as u32, r);
            for a in f.elements() {
                assert_eq!(f.conj(f.conj(a).unwrap()).unwrap(), a);
                let norm = f.mul(a, f.conj(a).unwrap());
                assert_eq!(f.conj(norm).unwrap(), norm);
                for b in f.elements() {
                    assert_eq!(
                        f.conj(f.add(a, b)).unwrap(),
                        f.add(f.conj(a).unwrap(), f.conj(b).unwrap())
                    );
                }
            }
        }
        assert_eq!(field_of_order(27).unwrap().conj(1), Err(GfError::NotQuadratic(27)));
    }

    #[test]
    fn errors() {
        assert_eq!(make_field(6, 1).unwrap_err(), GfError::NotPrime(6));
        assert_eq!(make_field(5, 0).unwrap_err(), GfError::ZeroDegree);
        assert!(matches!(make_field(2, 30).unwrap_err(), GfError::TooLarge { .. }));
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.inv(0), Err(GfError::ZeroInverse));
        let g = make_field(7, 1).unwrap();
        assert_eq!(f.elem(1).add(&g.elem(1)).unwrap_err(), GfError::MixedFields);
    }

    #[test]
    fn determinism() {
        let a = make_field(5, 2).unwrap();
        let b = make_field(5, 2).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn field_axioms(qi in 0usize..8, a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
                let qs = [2u64, 3, 4, 5, 8, 9, 25, 49];
                let f = field_of_order(qs[qi]).unwrap();
                let q = f.order();
                let (a, b, c) = (a % q, b % q, c % q);
                prop_assert_eq!(f.add(a, b), f.add(b, a));
                prop_assert_eq!(f.mul(a, b), f.mul(b, a));
                prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                prop_assert_eq!(f.add(a, f.neg(a)), 0);
                prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                if a != 0 {
                    prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
            }
        }
    }
}
