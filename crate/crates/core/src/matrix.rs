//! Small dense integer matrices and the exact scalar types the kernels run on.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

/// Largest dimension an [`IntMatrix`] may have. The kernels impose their
/// own, tighter limits.
pub const MAX_DIM: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("{len} entries do not form a square matrix")]
    NotSquare { len: usize },
    #[error("dimension {0} exceeds {MAX_DIM}")]
    TooLarge(usize),
}

/// Square matrix of `i64` entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    k: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(k: usize, entries: Vec<i64>) -> Result<IntMatrix, MatrixError> {
        if k > MAX_DIM {
            return Err(MatrixError::TooLarge(k));
        }
        if entries.len() != k * k {
            return Err(MatrixError::NotSquare { len: entries.len() });
        }
        Ok(IntMatrix { k, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix, MatrixError> {
        let k = rows.len();
        let mut entries = Vec::with_capacity(k * k);
        for r in rows {
            if r.len() != k {
                return Err(MatrixError::NotSquare { len: k * r.len() });
            }
            entries.extend_from_slice(r);
        }
        IntMatrix::new(k, entries)
    }

    pub fn from_fn(k: usize, mut f: impl FnMut(usize, usize) -> i64) -> IntMatrix {
        assert!(k <= MAX_DIM, "matrix dimension {k} exceeds {MAX_DIM}");
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                entries.push(f(i, j));
            }
        }
        IntMatrix { k, entries }
    }

    pub fn identity(k: usize) -> IntMatrix {
        IntMatrix::from_fn(k, |i, j| (i == j) as i64)
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.k + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.k..(i + 1) * self.k]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.k).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `prod_i max(1, sum_j |m_ij|)`, or `None` if it exceeds `u128`.
    ///
    /// Every product of one row-subsum per row is bounded by this, and so
    /// is every minor.
    pub(crate) fn row_sum_bound(&self) -> Option<u128> {
        let mut bound = 1u128;
        for i in 0..self.k {
            let s: u128 = self.row(i).iter().map(|x| x.unsigned_abs() as u128).sum();
            bound = bound.checked_mul(s.max(1))?;
        }
        Some(bound)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[i64]> = (0..self.k).map(|i| self.row(i)).collect();
        f.debug_tuple("IntMatrix").field(&rows).finish()
    }
}

/// How wide the kernels may compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArithMode {
    /// Machine integers (at most 128 bits); a kernel whose a-priori bound does
    /// not fit reports an overflow.
    #[default]
    Fixed128,
    /// Fall back to arbitrary precision when the 128-bit bound does not hold.
    Widened,
}

/// Exact commutative ring operations used by the generic kernels.
pub(crate) trait Exact: Clone + PartialEq {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add_assign(&mut self, rhs: &Self);
    fn sub_assign(&mut self, rhs: &Self);
    fn mul(&self, rhs: &Self) -> Self;
    /// Division known to be exact.
    fn div_exact(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

macro_rules! exact_prim {
    ($t:ty) => {
        impl Exact for $t {
            #[inline]
            fn zero() -> Self {
                0
            }
            #[inline]
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            #[inline]
            fn add_assign(&mut self, rhs: &Self) {
                *self += *rhs;
            }
            #[inline]
            fn sub_assign(&mut self, rhs: &Self) {
                *self -= *rhs;
            }
            #[inline]
            fn mul(&self, rhs: &Self) -> Self {
                *self * *rhs
            }
            #[inline]
            fn div_exact(&self, rhs: &Self) -> Self {
                debug_assert_eq!(*self % *rhs, 0);
                *self / *rhs
            }
            #[inline]
            fn neg(&self) -> Self {
                -*self
            }
            #[inline]
            fn is_zero(&self) -> bool {
                *self == 0
            }
        }
    };
}

exact_prim!(i64);
exact_prim!(i128);

impl Exact for BigInt {
    fn zero() -> Self {
        BigInt::from(0)
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn sub_assign(&mut self, rhs: &Self) {
        *self -= rhs;
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_checks() {
        assert!(IntMatrix::new(2, vec![1, 2, 3]).is_err());
        assert!(IntMatrix::from_rows(&[vec![1, 2], vec![3]]).is_err());
        assert!(IntMatrix::new(33, vec![0; 33 * 33]).is_err());
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(m.get(1, 0), 3);
        assert!(!m.is_symmetric());
        assert_eq!(IntMatrix::new(0, vec![]).unwrap().dim(), 0);
    }

    #[test]
    fn row_sum_bound() {
        let m = IntMatrix::from_rows(&[vec![3, -1], vec![-1, 3]]).unwrap();
        assert_eq!(m.row_sum_bound(), Some(16));
        let z = IntMatrix::new(3, vec![0; 9]).unwrap();
        assert_eq!(z.row_sum_bound(), Some(1));
        let big = IntMatrix::from_fn(12, |_, _| i64::MAX);
        assert_eq!(big.row_sum_bound(), None);
    }
}
