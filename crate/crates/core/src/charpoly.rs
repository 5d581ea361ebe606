//! Exact determinants and the characteristic polynomial `det(xI - A(G))`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::graph::Graph;
use crate::matrix::{ArithMode, Exact, IntMatrix};
use crate::perm::{evaluate_and_interpolate, for_each_permutation, symbolic_expansion};
use crate::poly::{IntPoly, KernelError};

pub const DET_MAX_DIM: usize = 12;

/// Fraction-free Gaussian elimination. After step `p` every remaining entry
/// is a `(p+2)`-minor of the input, so each division by the previous pivot is
/// exact.
fn bareiss<T: Exact>(m: &IntMatrix) -> T {
    let k = m.dim();
    if k == 0 {
        return T::from_i64(1);
    }
    let mut a: Vec<Vec<T>> = (0..k)
        .map(|i| m.row(i).iter().map(|&e| T::from_i64(e)).collect())
        .collect();
    let mut negate = false;
    let mut prev = T::from_i64(1);
    for p in 0..k - 1 {
        let Some(r) = (p..k).find(|&r| !a[r][p].is_zero()) else {
            return T::zero();
        };
        if r != p {
            a.swap(r, p);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(p + 1);
        let pivot_row = &top[p];
        for row in rest.iter_mut() {
            for j in p + 1..k {
                let mut v = row[j].mul(&pivot_row[p]);
                v.sub_assign(&row[p].mul(&pivot_row[j]));
                row[j] = v.div_exact(&prev);
            }
            row[p] = T::zero();
        }
        prev = pivot_row[p].clone();
    }
    let det = a[k - 1][k - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

enum Width {
    I64,
    I128,
    Big,
}

/// Every intermediate is a minor (bounded by the row-sum product `B`) or a
/// difference of two products of minors, so `2 B^2` bounds everything.
fn bareiss_width(m: &IntMatrix) -> Width {
    let bound = m
        .row_sum_bound()
        .and_then(|b| b.checked_mul(b))
        .and_then(|b| b.checked_mul(2));
    match bound {
        Some(b) if b <= i64::MAX as u128 => Width::I64,
        Some(b) if b <= i128::MAX as u128 => Width::I128,
        _ => Width::Big,
    }
}

fn check_dim(m: &IntMatrix) -> Result<(), KernelError> {
    if m.dim() > DET_MAX_DIM {
        return Err(KernelError::TooLarge {
            what: "determinant",
            k: m.dim(),
            max: DET_MAX_DIM,
        });
    }
    Ok(())
}

pub fn determinant_exact(m: &IntMatrix) -> Result<i128, KernelError> {
    check_dim(m)?;
    match bareiss_width(m) {
        Width::I64 => Ok(bareiss::<i64>(m) as i128),
        Width::I128 => Ok(bareiss::<i128>(m)),
        Width::Big => Err(KernelError::Overflow("Bareiss determinant")),
    }
}

pub fn determinant_widened(m: &IntMatrix) -> Result<BigInt, KernelError> {
    check_dim(m)?;
    Ok(match bareiss_width(m) {
        Width::I64 => BigInt::from(bareiss::<i64>(m)),
        Width::I128 => BigInt::from(bareiss::<i128>(m)),
        Width::Big => bareiss::<BigInt>(m),
    })
}

/// Leibniz formula over all `k!` permutations; test oracle for Bareiss.
pub fn determinant_leibniz(m: &IntMatrix) -> Result<BigInt, KernelError> {
    let k = m.dim();
    if k > crate::perm::NAIVE_MAX_DIM {
        return Err(KernelError::TooLarge {
            what: "Leibniz determinant",
            k,
            max: crate::perm::NAIVE_MAX_DIM,
        });
    }
    let mut total = BigInt::from(0);
    for_each_permutation(k, |sigma, odd| {
        let mut term = BigInt::from(if odd { -1 } else { 1 });
        for (i, &j) in sigma.iter().enumerate() {
            let e = m.get(i, j);
            if e == 0 {
                return;
            }
            term *= e;
        }
        total += term;
    });
    Ok(total)
}

fn determinant_with(m: &IntMatrix, mode: ArithMode) -> Result<i128, KernelError> {
    match mode {
        ArithMode::Fixed128 => determinant_exact(m),
        ArithMode::Widened => determinant_widened(m)?
            .to_i128()
            .ok_or(KernelError::Overflow("determinant value")),
    }
}

/// The characteristic polynomial `det(xI - A(G))`, by the same
/// evaluate-and-interpolate route as the permanental polynomial.
pub fn char_poly(g: &Graph) -> Result<IntPoly, KernelError> {
    char_poly_with(g, ArithMode::Fixed128)
}

pub fn char_poly_with(g: &Graph, mode: ArithMode) -> Result<IntPoly, KernelError> {
    if g.n() > DET_MAX_DIM {
        return Err(KernelError::TooLarge {
            what: "characteristic polynomial",
            k: g.n(),
            max: DET_MAX_DIM,
        });
    }
    evaluate_and_interpolate(g, |m| determinant_with(m, mode))
}

/// Symbolic Leibniz expansion of `det(xI - A(G))`; oracle for [`char_poly`].
pub fn char_poly_leibniz(g: &Graph) -> Result<IntPoly, KernelError> {
    symbolic_expansion(g, true, "Leibniz characteristic polynomial")
}
