//! Small dense real linear algebra: LU with partial pivoting.
//!
//! Matrices are row-major `Vec<T>` of size `n × n`.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct Lu<T> {
    n: usize,
    lu: Vec<T>,
    piv: Vec<usize>,
    norm1: T,
}

impl<T: Real> Lu<T> {
    pub fn new(a: &[T], n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n, "matrix shape");
        let norm1 = norm1(a, n);
        let mut lu = a.to_vec();
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = lu[k * n + k].abs();
            for i in k + 1..n {
                let v = lu[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= T::min_positive_value() || !best.is_finite() {
                return Err(Error::IllConditioned(f64::INFINITY));
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                piv.swap(k, p);
            }
            let inv = T::one() / lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] * inv;
                lu[i * n + k] = f;
                if f != T::zero() {
                    for j in k + 1..n {
                        let t = lu[k * n + j];
                        lu[i * n + j] -= f * t;
                    }
                }
            }
        }
        Ok(Self { n, lu, piv, norm1 })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A x = b` in place.
    pub fn solve(&self, b: &mut [T]) {
        let n = self.n;
        let rhs: Vec<T> = self.piv.iter().map(|&p| b[p]).collect();
        b.copy_from_slice(&rhs);
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * b[j];
            }
            b[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * b[j];
            }
            b[i] = s / self.lu[i * n + i];
        }
    }

    /// Solves `Aᵀ x = b` in place.
    pub fn solve_transpose(&self, b: &mut [T]) {
        let n = self.n;
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.lu[j * n + i] * b[j];
            }
            b[i] = s / self.lu[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= self.lu[j * n + i] * b[j];
            }
            b[i] = s;
        }
        let mut out = vec![T::zero(); n];
        for (i, &p) in self.piv.iter().enumerate() {
            out[p] = b[i];
        }
        b.copy_from_slice(&out);
    }

    pub fn inverse(&self) -> Vec<T> {
        let n = self.n;
        let mut inv = vec![T::zero(); n * n];
        let mut col = vec![T::zero(); n];
        for j in 0..n {
            col.iter_mut().for_each(|c| *c = T::zero());
            col[j] = T::one();
            self.solve(&mut col);
            for i in 0..n {
                inv[i * n + j] = col[i];
            }
        }
        inv
    }

    /// 1-norm condition number, computed from the explicit inverse.
    pub fn condition(&self) -> T {
        self.norm1 * norm1(&self.inverse(), self.n)
    }
}

pub fn norm1<T: Real>(a: &[T], n: usize) -> T {
    (0..n)
        .map(|j| (0..n).fold(T::zero(), |s, i| s + a[i * n + j].abs()))
        .fold(T::zero(), T::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_and_inverts() {
        let a = vec![4.0, -2.0, 1.0, 3.0, 6.0, -4.0, 2.0, 1.0, 8.0];
        let lu = Lu::new(&a, 3).unwrap();
        let mut b = vec![1.0, 2.0, 3.0];
        lu.solve(&mut b);
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| a[i * 3 + j] * b[j]).sum();
            assert!((r - (i + 1) as f64).abs() < 1e-14);
        }
        let mut c = vec![1.0, -1.0, 0.5];
        lu.solve_transpose(&mut c);
        for j in 0..3 {
            let r: f64 = (0..3).map(|i| a[i * 3 + j] * c[i]).sum();
            assert!((r - [1.0, -1.0, 0.5][j]).abs() < 1e-14);
        }
        let inv = lu.inverse();
        for i in 0..3 {
            for j in 0..3 {
                let r: f64 = (0..3).map(|k| a[i * 3 + k] * inv[k * 3 + j]).sum();
                assert!((r - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
        assert!(lu.condition() > 1.0);
    }

    #[test]
    fn singular_is_reported() {
        let a = vec![1.0, 2.0, 2.0, 4.0];
        assert!(matches!(Lu::new(&a, 2), Err(Error::IllConditioned(_))));
    }
}
