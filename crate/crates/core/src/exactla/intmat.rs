use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::modular::{bits, primes, rank_mod, rational_reconstruct, reduce_big, reduce_i64, rref_mod, Crt};
use super::rat::{Rat, RatMatrix};
use super::LinAlgError;

/// Dense square or rectangular matrix of machine integers, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix, LinAlgError> {
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(LinAlgError::Ragged);
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64 + Sync) -> IntMatrix {
        let data = (0..rows * cols)
            .into_par_iter()
            .map(|k| f(k / cols, k % cols))
            .collect();
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> i128 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i) as i128).sum()
    }

    /// Maximum absolute row sum, an upper bound on every eigenvalue modulus.
    pub fn inf_norm(&self) -> u128 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.unsigned_abs() as u128).sum())
            .max()
            .unwrap_or(0)
    }

    /// `self + c I`.
    pub fn shift(&self, c: i64) -> IntMatrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m.data[i * self.cols + i] += c;
        }
        m
    }

    pub fn scale(&self, c: i64) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
        self.same_shape(other)?;
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    fn same_shape(&self, other: &IntMatrix) -> Result<(), LinAlgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinAlgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    /// Exact product. Fails when the norm bound could overflow `i64`.
    pub fn matmul(&self, other: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let max_b = other.data.iter().map(|x| x.unsigned_abs() as u128).max().unwrap_or(0);
        if self.inf_norm().saturating_mul(max_b) >= i64::MAX as u128 {
            return Err(LinAlgError::Overflow);
        }
        let bt = other.transpose();
        let (n, m, k) = (self.rows, other.cols, self.cols);
        let mut data = vec![0i64; n * m];
        data.par_chunks_mut(m.max(1)).enumerate().for_each(|(i, out)| {
            let a = &self.data[i * k..(i + 1) * k];
            for (j, o) in out.iter_mut().enumerate() {
                let b = &bt.data[j * k..(j + 1) * k];
                *o = a.iter().zip(b).map(|(x, y)| x * y).sum();
            }
        });
        Ok(IntMatrix { rows: n, cols: m, data })
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i128> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum())
            .collect()
    }

    /// `tr(M^3)` as the sum of `(M^2)_{ij} M_{ji}`, given `M^2`.
    pub fn trace_cube_with_square(&self, square: &IntMatrix) -> i128 {
        (0..self.rows)
            .into_par_iter()
            .map(|i| {
                (0..self.cols)
                    .map(|j| square.get(i, j) as i128 * self.get(j, i) as i128)
                    .sum::<i128>()
            })
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| {
            Rat::from_integer(BigInt::from(self.get(i, j)))
        })
    }

    pub fn reduce(&self, p: u64) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| reduce_i64(x, p)).collect())
            .collect()
    }

    /// Rank modulo `p`, a lower bound for the rational rank.
    pub fn rank_mod(&self, p: u64) -> usize {
        rank_mod(self.reduce(p), p)
    }

    /// Exact nullity. A modular kernel is lifted to the rationals by Chinese
    /// remaindering and rational reconstruction, then checked exactly; if the
    /// lift does not settle, the rank is taken as the maximum modular rank
    /// over enough primes to exceed the Hadamard bound.
    pub fn nullity(&self) -> usize {
        match self.kernel_certificate() {
            Some(k) => k,
            None => self.cols - self.rank_multimodular(),
        }
    }

    /// Bits of the Hadamard bound on any minor.
    fn hadamard_bits(&self) -> u64 {
        let mut norms: Vec<f64> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().sqrt())
            .collect();
        norms.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        norms
            .iter()
            .take(self.cols)
            .map(|x| x.max(1.0).log2())
            .sum::<f64>()
            .ceil() as u64
            + 1
    }

    pub fn rank_multimodular(&self) -> usize {
        let count = (self.hadamard_bits() / 30 + 2) as usize;
        primes(count).into_iter().map(|p| self.rank_mod(p)).max().unwrap_or(0)
    }

    fn kernel_certificate(&self) -> Option<usize> {
        let h = self.hadamard_bits();
        let max_primes = (2 * h / 30 + 4) as usize;
        let ps = primes(max_primes);
        let mut pivots: Option<Vec<usize>> = None;
        let mut crt = Crt::new(0);
        let mut used = 0usize;
        let mut next_try = 1usize;
        for &p in &ps {
            let mut rows = self.reduce(p);
            let piv = rref_mod(&mut rows, p);
            match &pivots {
                Some(old) if piv.len() < old.len() => continue,
                Some(old) if piv.len() == old.len() && &piv != old => continue,
                Some(old) if piv.len() == old.len() => {}
                _ => {
                    // first prime, or a larger rank: earlier primes were unlucky
                    pivots = Some(piv.clone());
                    let free = self.cols - piv.len();
                    if free == 0 {
                        return Some(0);
                    }
                    crt = Crt::new(piv.len() * free);
                    used = 0;
                    next_try = 1;
                }
            }
            let piv = pivots.as_ref().expect("set above");
            let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
            let residues: Vec<u64> = rows.iter().flat_map(|row| free.iter().map(move |&f| row[f])).collect();
            crt.add(p, &residues);
            used += 1;
            if used >= next_try {
                next_try *= 2;
                if let Some(k) = self.try_lift(&crt, piv, &free) {
                    return Some(k);
                }
            }
        }
        None
    }

    fn try_lift(&self, crt: &Crt, pivots: &[usize], free: &[usize]) -> Option<usize> {
        let m = crt.modulus();
        let entries: Option<Vec<BigRational>> = crt.residues().par_iter().map(|a| rational_reconstruct(a, m)).collect();
        let entries = entries?;
        let nf = free.len();
        for (fi, &f) in free.iter().enumerate() {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -entries[i * nf + fi].clone();
            }
            let den = v
                .iter()
                .fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
            let iv: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
            if !self.annihilates(&iv) {
                return None;
            }
        }
        Some(nf)
    }

    /// Exact test of `M v = 0`, by residues modulo enough primes to exceed
    /// the bound on `|M v|`.
    fn annihilates(&self, v: &[BigInt]) -> bool {
        let vmax = v.iter().map(bits).max().unwrap_or(0);
        let norm_bits = (self.inf_norm().max(1) as f64).log2().ceil() as u64;
        let count = ((vmax + norm_bits + 2) / 30 + 1) as usize;
        primes(count + 8)[8..].iter().all(|&p| {
            let vr: Vec<u64> = v.iter().map(|x| reduce_big(x, p)).collect();
            (0..self.rows).all(|i| {
                self.row(i)
                    .iter()
                    .zip(&vr)
                    .fold(0u64, |acc, (&a, &b)| (acc + reduce_i64(a, p) * b) % p)
                    == 0
            })
        })
    }
}

/// Exact product of integer matrices with an a-priori bound check: returns
/// whether the product vanishes. Uses machine integers when the norm bound
/// fits, residues modulo enough primes otherwise.
pub fn product_vanishes(factors: &[IntMatrix]) -> Result<bool, LinAlgError> {
    let Some(first) = factors.first() else {
        return Ok(false);
    };
    let n = first.rows();
    if factors.iter().any(|f| f.rows() != n || f.cols() != n) {
        return Err(LinAlgError::NotSquare(first.rows(), first.cols()));
    }
    let log_bound: f64 = factors.iter().map(|f| (f.inf_norm().max(1) as f64).log2()).sum();
    if log_bound < 62.0 {
        let mut acc = first.clone();
        for f in &factors[1..] {
            acc = acc.matmul(f)?;
            if acc.is_zero() {
                return Ok(true);
            }
        }
        return Ok(acc.is_zero());
    }
    let count = (log_bound.ceil() as usize + 2) / 30 + 1;
    for p in primes(count) {
        let mut acc = first.reduce(p);
        for f in &factors[1..] {
            let fr = f.reduce(p);
            acc = mulmod_matrix(&acc, &fr, p);
        }
        if acc.iter().any(|r| r.iter().any(|&x| x != 0)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn mulmod_matrix(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = b.first().map_or(0, Vec::len);
    a.par_iter()
        .map(|row| {
            let mut out = vec![0u64; n];
            for (k, &x) in row.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (o, &y) in out.iter_mut().zip(&b[k]) {
                    *o = (*o + x * y) % p;
                }
            }
            out
        })
        .collect()
}

/// Integer value of `x` if it fits in `i64`.
pub fn to_i64(x: &Rat) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Exact integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&s| s * s == n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j(n: usize) -> IntMatrix {
        IntMatrix::from_fn(n, n, |_, _| 1)
    }

    #[test]
    fn products_and_norms() {
        let a = j(4);
        assert_eq!(a.matmul(&a).unwrap(), a.scale(4));
        assert_eq!(a.inf_norm(), 4);
        assert_eq!(a.trace_cube_with_square(&a.matmul(&a).unwrap()), 64);
        let big = IntMatrix::from_rows(&[vec![i64::MAX / 2, 1], vec![1, 1]]).unwrap();
        assert_eq!(big.matmul(&big), Err(LinAlgError::Overflow));
    }

    #[test]
    fn exact_nullity() {
        assert_eq!(IntMatrix::identity(5).nullity(), 0);
        assert_eq!(j(5).shift(-5).nullity(), 1);
        assert_eq!(j(6).nullity(), 5);
        let m = IntMatrix::from_rows(&[vec![2, 4, 6], vec![1, 3, 5], vec![3, 7, 11]]).unwrap();
        assert_eq!(m.nullity(), 1);
        assert_eq!(m.rank_multimodular(), 2);
    }

    #[test]
    fn annihilation_by_minimal_polynomial() {
        // J_4 has minimal polynomial x (x - 4)
        let a = j(4);
        assert!(product_vanishes(&[a.clone(), a.shift(-4)]).unwrap());
        assert!(!product_vanishes(&[a.clone(), a.shift(-3)]).unwrap());
    }

    #[test]
    fn sqrt_helper() {
        assert_eq!(exact_sqrt(49), Some(7));
        assert_eq!(exact_sqrt(50), None);
        assert_eq!(exact_sqrt(0), Some(0));
    }
}
