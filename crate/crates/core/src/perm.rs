//! Exact permanents and the permanental polynomial `per(xI - A(G))`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::graph::Graph;
use crate::matrix::{ArithMode, Exact, IntMatrix};
use crate::poly::{interpolate_forward, IntPoly, KernelError};

pub const NAIVE_MAX_DIM: usize = 9;
pub const RYSER_MAX_DIM: usize = 12;
pub const SYMBOLIC_MAX_N: usize = 7;

/// Calls `f(sigma, parity)` for every permutation of `0..k` (Heap's
/// algorithm; consecutive permutations differ by one transposition, so
/// `parity` is `true` for odd permutations).
pub(crate) fn for_each_permutation(k: usize, mut f: impl FnMut(&[usize], bool)) {
    let mut sigma: Vec<usize> = (0..k).collect();
    let mut counters = vec![0usize; k];
    let mut odd = false;
    f(&sigma, odd);
    let mut i = 1;
    while i < k {
        if counters[i] < i {
            let j = if i % 2 == 0 { 0 } else { counters[i] };
            sigma.swap(j, i);
            odd = !odd;
            f(&sigma, odd);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

/// `sum_sigma prod_i m[i][sigma(i)]` over all `k!` permutations.
pub fn permanent_naive(m: &IntMatrix) -> Result<BigInt, KernelError> {
    let k = m.dim();
    if k > NAIVE_MAX_DIM {
        return Err(KernelError::TooLarge {
            what: "naive permanent",
            k,
            max: NAIVE_MAX_DIM,
        });
    }
    let mut total = BigInt::from(0);
    for_each_permutation(k, |sigma, _| {
        let mut term = BigInt::from(1);
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

/// Ryser's inclusion-exclusion formula,
/// `per(M) = (-1)^k sum_{S nonempty} (-1)^{|S|} prod_i sum_{j in S} m_ij`,
/// visiting column subsets in Gray-code order so each step adds or removes
/// one column from the running row sums.
fn ryser<T: Exact>(m: &IntMatrix) -> T {
    let k = m.dim();
    if k == 0 {
        return T::from_i64(1);
    }
    let columns: Vec<Vec<T>> = (0..k)
        .map(|j| (0..k).map(|i| T::from_i64(m.get(i, j))).collect())
        .collect();
    let mut row_sums = vec![T::zero(); k];
    let mut positive = T::zero();
    let mut negative = T::zero();
    let mut subset = 0u64;
    for step in 1u64..(1u64 << k) {
        let j = step.trailing_zeros() as usize;
        subset ^= 1 << j;
        let col = &columns[j];
        if subset >> j & 1 == 1 {
            row_sums
                .iter_mut()
                .zip(col)
                .for_each(|(s, c)| s.add_assign(c));
        } else {
            row_sums
                .iter_mut()
                .zip(col)
                .for_each(|(s, c)| s.sub_assign(c));
        }
        let mut prod = row_sums[0].clone();
        for s in &row_sums[1..] {
            if prod.is_zero() {
                break;
            }
            prod = prod.mul(s);
        }
        if (k - subset.count_ones() as usize) % 2 == 0 {
            positive.add_assign(&prod);
        } else {
            negative.add_assign(&prod);
        }
    }
    positive.sub_assign(&negative);
    positive
}

/// Fixed-array specialization of [`ryser`] for the common 64-bit case.
fn ryser_i64(m: &IntMatrix) -> i64 {
    let k = m.dim();
    if k == 0 {
        return 1;
    }
    let mut columns = [[0i64; RYSER_MAX_DIM]; RYSER_MAX_DIM];
    for (j, col) in columns.iter_mut().enumerate().take(k) {
        for (i, c) in col.iter_mut().enumerate().take(k) {
            *c = m.get(i, j);
        }
    }
    let mut row_sums = [0i64; RYSER_MAX_DIM];
    let mut total = 0i64;
    let mut subset = 0u64;
    for step in 1u64..(1u64 << k) {
        let j = step.trailing_zeros() as usize;
        subset ^= 1 << j;
        let col = &columns[j];
        if subset >> j & 1 == 1 {
            for i in 0..k {
                row_sums[i] += col[i];
            }
        } else {
            for i in 0..k {
                row_sums[i] -= col[i];
            }
        }
        let prod = row_sums[..k].iter().product::<i64>();
        if (k - subset.count_ones() as usize) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}

enum Width {
    I64,
    I128,
    Big,
}

/// Picks the narrowest machine width that provably holds every Ryser
/// partial product and both running sums: `2^k * prod_i max(1, sum_j |m_ij|)`.
fn ryser_width(m: &IntMatrix) -> Width {
    let bound = m
        .row_sum_bound()
        .and_then(|b| b.checked_mul(1u128 << m.dim()));
    match bound {
        Some(b) if b <= i64::MAX as u128 => Width::I64,
        Some(b) if b <= i128::MAX as u128 => Width::I128,
        _ => Width::Big,
    }
}

fn check_ryser_dim(m: &IntMatrix) -> Result<(), KernelError> {
    if m.dim() > RYSER_MAX_DIM {
        return Err(KernelError::TooLarge {
            what: "Ryser permanent",
            k: m.dim(),
            max: RYSER_MAX_DIM,
        });
    }
    Ok(())
}

/// Permanent in fixed-width arithmetic; `Overflow` if the a-priori bound
/// exceeds 128 bits.
pub fn permanent_ryser(m: &IntMatrix) -> Result<i128, KernelError> {
    check_ryser_dim(m)?;
    match ryser_width(m) {
        Width::I64 => Ok(ryser_i64(m) as i128),
        Width::I128 => Ok(ryser::<i128>(m)),
        Width::Big => Err(KernelError::Overflow("Ryser permanent")),
    }
}

/// Permanent that falls back to arbitrary precision when needed.
pub fn permanent_ryser_widened(m: &IntMatrix) -> Result<BigInt, KernelError> {
    check_ryser_dim(m)?;
    Ok(match ryser_width(m) {
        Width::I64 => BigInt::from(ryser_i64(m)),
        Width::I128 => BigInt::from(ryser::<i128>(m)),
        Width::Big => ryser::<BigInt>(m),
    })
}

pub(crate) fn permanent_with(m: &IntMatrix, mode: ArithMode) -> Result<i128, KernelError> {
    match mode {
        ArithMode::Fixed128 => permanent_ryser(m),
        ArithMode::Widened => permanent_ryser_widened(m)?
            .to_i128()
            .ok_or(KernelError::Overflow("permanent value")),
    }
}

/// Evaluates `t -> kernel(tI - A(G))` at `t = 0..=n` and interpolates.
pub(crate) fn evaluate_and_interpolate(
    g: &Graph,
    mut kernel: impl FnMut(&IntMatrix) -> Result<i128, KernelError>,
) -> Result<IntPoly, KernelError> {
    let n = g.n();
    let values = (0..=n as i64)
        .map(|t| kernel(&g.adjacency_char_matrix(t)))
        .collect::<Result<Vec<_>, _>>()?;
    interpolate_forward(&values)
}

/// The permanental polynomial `per(xI - A(G))` in fixed-width arithmetic.
pub fn perm_poly(g: &Graph) -> Result<IntPoly, KernelError> {
    perm_poly_with(g, ArithMode::Fixed128)
}

pub fn perm_poly_with(g: &Graph, mode: ArithMode) -> Result<IntPoly, KernelError> {
    if g.n() > RYSER_MAX_DIM {
        return Err(KernelError::TooLarge {
            what: "permanental polynomial",
            k: g.n(),
            max: RYSER_MAX_DIM,
        });
    }
    evaluate_and_interpolate(g, |m| permanent_with(m, mode))
}

/// Expands `per(xI - A(G))` term by term over all `n!` permutations with
/// polynomial arithmetic. Independent of the evaluation path.
pub fn perm_poly_symbolic(g: &Graph) -> Result<IntPoly, KernelError> {
    symbolic_expansion(g, false, "symbolic permanental polynomial")
}

/// Shared by the permanent and determinant oracles: sums, over permutations
/// that only use diagonal or edge positions, `x^{#fixed points} * (-1)^{#moved}`,
/// negated for odd permutations when `signed`.
pub(crate) fn symbolic_expansion(
    g: &Graph,
    signed: bool,
    what: &'static str,
) -> Result<IntPoly, KernelError> {
    let n = g.n();
    if n > SYMBOLIC_MAX_N {
        return Err(KernelError::TooLarge {
            what,
            k: n,
            max: SYMBOLIC_MAX_N,
        });
    }
    let x = IntPoly::new(vec![0, 1]);
    let minus_one = IntPoly::new(vec![-1]);
    let mut total = IntPoly::new(vec![0; n + 1]);
    for_each_permutation(n, |sigma, odd| {
        let mut term = IntPoly::one();
        for (i, &j) in sigma.iter().enumerate() {
            let entry = if i == j {
                &x
            } else if g.has_edge(i, j) {
                &minus_one
            } else {
                return;
            };
            term = term.mul(entry);
        }
        if signed && odd {
            term = term.neg();
        }
        total = total.add(&term);
    });
    Ok(IntPoly::new(total.coeffs()[..=n].to_vec()))
}
