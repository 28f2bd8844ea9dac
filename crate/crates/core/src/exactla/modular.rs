//! Arithmetic modulo word-sized primes: elimination, Chinese remaindering and
//! rational reconstruction.

use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

/// Rows above this count are eliminated in parallel.
const PAR_ROWS: usize = 96;

fn mulmod_u128(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u128(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod_u128(r, a, m);
        }
        a = mulmod_u128(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = powmod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u128(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn prime_cache() -> &'static Mutex<Vec<u64>> {
    static CACHE: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// The first `count` primes below `2^31`, in decreasing order.
pub fn primes(count: usize) -> Vec<u64> {
    let mut cache = prime_cache().lock().expect("prime cache poisoned");
    let mut c = cache.last().copied().unwrap_or(1 << 31);
    while cache.len() < count {
        c -= 1;
        if is_prime_u64(c) {
            cache.push(c);
        }
    }
    cache[..count].to_vec()
}

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub fn powmod(a: u64, e: u64, p: u64) -> u64 {
    powmod_u128(a, e, p)
}

/// Inverse modulo the prime `p`; `a` must be nonzero mod `p`.
pub fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p - 2, p)
}

#[inline]
pub fn reduce_i64(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

pub fn reduce_big(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

fn eliminate(rows: &mut [Vec<u64>], pivot: &[u64], c: usize, p: u64) {
    let step = |row: &mut Vec<u64>| {
        let x = row.get(c).copied().unwrap_or(0);
        if x == 0 {
            return;
        }
        let f = p - x;
        for (a, &b) in row[c..].iter_mut().zip(&pivot[c..]) {
            if b != 0 {
                *a = (*a + f * b) % p;
            }
        }
    };
    if rows.len() > PAR_ROWS {
        rows.par_iter_mut().for_each(step);
    } else {
        rows.iter_mut().for_each(step);
    }
}

/// Rank of a matrix modulo `p` by forward elimination. Consumes the rows.
pub fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = invmod(rows[r][c], p);
        for x in rows[r][c..].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        eliminate(tail, &head[r], c, p);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Reduced row echelon form modulo `p`; zero rows are dropped and the pivot
/// columns returned.
pub fn rref_mod(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = invmod(rows[r][c], p);
        for x in rows[r][c..].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        let pivot = std::mem::take(&mut rows[r]);
        eliminate(rows, &pivot, c, p);
        rows[r] = pivot;
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Incremental Chinese remaindering of a vector of residues.
#[derive(Debug, Clone)]
pub struct Crt {
    modulus: BigInt,
    values: Vec<BigInt>,
}

impl Crt {
    pub fn new(len: usize) -> Crt {
        Crt {
            modulus: BigInt::one(),
            values: vec![BigInt::zero(); len],
        }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn add(&mut self, p: u64, residues: &[u64]) {
        assert_eq!(residues.len(), self.values.len());
        let m_mod_p = reduce_big(&self.modulus, p);
        let m_inv = invmod(m_mod_p, p);
        let modulus = &self.modulus;
        self.values.par_iter_mut().zip(residues).for_each(|(x, &r)| {
            let xr = reduce_big(x, p);
            let t = mulmod((r + p - xr) % p, m_inv, p);
            if t != 0 {
                *x += modulus * BigInt::from(t);
            }
        });
        self.modulus *= BigInt::from(p);
    }

    /// Values in the symmetric range `(-M/2, M/2]`.
    pub fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1;
        self.values
            .iter()
            .map(|x| if x > &half { x - &self.modulus } else { x.clone() })
            .collect()
    }

    pub fn residues(&self) -> &[BigInt] {
        &self.values
    }
}

/// Rational `n/d` with `|n|, |d| <= sqrt(m/2)` congruent to `a` mod `m`, if
/// one exists.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (qt, rem) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, rem);
        let t2 = &t0 - &qt * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Number of bits of `|x|`, zero for zero.
pub fn bits(x: &BigInt) -> u64 {
    if x.sign() == Sign::NoSign {
        0
    } else {
        x.bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_prime_and_descending() {
        let ps = primes(20);
        assert_eq!(ps[0], 2147483647);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| is_prime_u64(p)));
        assert!(!is_prime_u64(2147483649));
    }

    #[test]
    fn rank_and_rref_agree() {
        let p = primes(1)[0];
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_mod(rows.clone(), p), 2);
        let mut r = rows;
        assert_eq!(rref_mod(&mut r, p), vec![0, 1]);
    }

    #[test]
    fn crt_and_reconstruction() {
        let ps = primes(3);
        let target = BigRational::new(BigInt::from(-22), BigInt::from(7));
        let mut crt = Crt::new(1);
        for &p in &ps {
            let n = reduce_big(target.numer(), p);
            let d = reduce_big(target.denom(), p);
            crt.add(p, &[mulmod(n, invmod(d, p), p)]);
        }
        let got = rational_reconstruct(&crt.residues()[0], crt.modulus()).unwrap();
        assert_eq!(got, target);
        let mut c2 = Crt::new(1);
        for &p in &ps {
            c2.add(p, &[reduce_i64(-5, p)]);
        }
        assert_eq!(c2.symmetric()[0], BigInt::from(-5));
    }
}
