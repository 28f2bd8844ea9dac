use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::intmat::IntMatrix;
use super::modular::{invmod, mulmod, primes, Crt};
use super::LinAlgError;

/// Default size bound for characteristic polynomials.
pub const CHAR_POLY_BOUND: usize = 700;

/// Polynomial with integer coefficients, lowest degree first, no trailing
/// zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IntPolynomial {
    #[serde(serialize_with = "ser_coeffs")]
    coeffs: Vec<BigInt>,
}

fn ser_coeffs<S: serde::Serializer>(c: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|x| x.to_string()))
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPolynomial {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> IntPolynomial {
        IntPolynomial::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(roots: &[i64]) -> IntPolynomial {
        let mut p = IntPolynomial::from_i64(&[1]);
        for &r in roots {
            p = p.mul(&IntPolynomial::from_i64(&[-r, 1]));
        }
        p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPolynomial::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Quotient by `x - r` if `r` is a root.
    fn deflate(&self, r: &BigInt) -> Option<IntPolynomial> {
        let n = self.coeffs.len();
        if n < 2 {
            return None;
        }
        let mut q = vec![BigInt::zero(); n - 1];
        let mut carry = BigInt::zero();
        for i in (1..n).rev() {
            carry = &carry * r + &self.coeffs[i];
            q[i - 1] = carry.clone();
        }
        (&carry * r + &self.coeffs[0]).is_zero().then(|| IntPolynomial::new(q))
    }

    /// Integer roots in `[-bound, bound]` with multiplicities, ascending.
    pub fn integer_roots(&self, bound: i64) -> Vec<(i64, usize)> {
        let mut out = Vec::new();
        let mut p = self.clone();
        for r in -bound..=bound {
            let rb = BigInt::from(r);
            let mut mult = 0;
            while let Some(q) = p.deflate(&rb) {
                p = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((r, mult));
            }
            if p.degree().unwrap_or(0) == 0 {
                break;
            }
        }
        out
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// `det(xI - M)` over the integers, by Hessenberg reduction modulo enough
/// primes to cover the coefficient bound `(1 + ||M||)^n`.
pub fn char_poly(m: &IntMatrix) -> Result<IntPolynomial, LinAlgError> {
    char_poly_bounded(m, CHAR_POLY_BOUND)
}

pub fn char_poly_bounded(m: &IntMatrix, bound: usize) -> Result<IntPolynomial, LinAlgError> {
    if !m.is_square() {
        return Err(LinAlgError::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    if n > bound {
        return Err(LinAlgError::SizeBound { size: n, bound });
    }
    let bits = n as f64 * (1.0 + m.inf_norm() as f64).log2() + 2.0;
    let count = (bits / 30.0).ceil() as usize + 1;
    let mut crt = Crt::new(n + 1);
    for p in primes(count) {
        crt.add(p, &char_poly_mod(m, p));
    }
    Ok(IntPolynomial::new(crt.symmetric()))
}

/// Characteristic polynomial modulo `p`, lowest degree first.
fn char_poly_mod(m: &IntMatrix, p: u64) -> Vec<u64> {
    let n = m.rows();
    let mut h = m.reduce(p);
    let sub = |a: u64, b: u64| (a + p - b) % p;
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if i != j + 1 {
            h.swap(i, j + 1);
            for row in h.iter_mut() {
                row.swap(i, j + 1);
            }
        }
        let inv = invmod(h[j + 1][j], p);
        for i in j + 2..n {
            let u = mulmod(h[i][j], inv, p);
            if u == 0 {
                continue;
            }
            let (upper, lower) = h.split_at_mut(i);
            let pivot_row = &upper[j + 1];
            for (a, &b) in lower[0].iter_mut().zip(pivot_row) {
                *a = sub(*a, mulmod(u, b, p));
            }
            for row in h.iter_mut() {
                row[j + 1] = (row[j + 1] + mulmod(u, row[i], p)) % p;
            }
        }
    }
    // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_{ik} (prod_{l=i+1..k} h_{l,l-1}) p_{i-1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = (next[d + 1] + c) % p;
            next[d] = sub(next[d], mulmod(h[k][k], c, p));
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = mulmod(prod, h[i + 1][i], p);
            if prod == 0 {
                break;
            }
            let coef = mulmod(h[i][k], prod, p);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = sub(next[d], mulmod(coef, c, p));
            }
        }
        polys.push(next);
    }
    polys.pop().expect("n + 1 polynomials")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(rows: &[Vec<i64>]) -> IntPolynomial {
        char_poly(&IntMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn small_char_polys() {
        assert_eq!(cp(&[vec![0, 1], vec![1, 0]]), IntPolynomial::from_i64(&[-1, 0, 1]));
        let j3 = vec![vec![1; 3]; 3];
        assert_eq!(cp(&j3), IntPolynomial::from_i64(&[0, 0, -3, 1]));
        let d = vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 5]];
        assert_eq!(cp(&d), IntPolynomial::from_roots(&[2, 2, 5]));
    }

    #[test]
    fn char_poly_of_nonsymmetric() {
        // companion matrix of x^3 - 2x + 7
        let c = vec![vec![0, 0, -7], vec![1, 0, 2], vec![0, 1, 0]];
        assert_eq!(cp(&c), IntPolynomial::from_i64(&[7, -2, 0, 1]));
    }

    #[test]
    fn roots_with_multiplicity() {
        let p = IntPolynomial::from_roots(&[3, -2, 3, 0]);
        assert_eq!(p.integer_roots(10), vec![(-2, 1), (0, 1), (3, 2)]);
        assert_eq!(p.to_string(), "x^4 - 4x^3 - 3x^2 + 18x");
    }

    #[test]
    fn size_bound() {
        let m = IntMatrix::identity(5);
        assert_eq!(
            char_poly_bounded(&m, 4),
            Err(LinAlgError::SizeBound { size: 5, bound: 4 })
        );
    }
}
