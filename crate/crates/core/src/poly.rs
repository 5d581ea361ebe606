//! Integer polynomials and exact interpolation from integer nodes.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("{what}: dimension {k} exceeds the supported bound {max}")]
    TooLarge {
        what: &'static str,
        k: usize,
        max: usize,
    },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("forward difference of order {order} is not divisible by {order}!")]
    NotIntegral { order: usize },
}

/// `p(x) = sum_j coeffs[j] * x^j`, stored with its declared degree: the
/// vector always has `degree + 1` entries, even if the top ones are zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<i128>,
}

impl IntPoly {
    /// Panics on an empty coefficient vector.
    pub fn new(coeffs: Vec<i128>) -> IntPoly {
        assert!(
            !coeffs.is_empty(),
            "a polynomial needs at least one coefficient"
        );
        IntPoly { coeffs }
    }

    pub fn one() -> IntPoly {
        IntPoly { coeffs: vec![1] }
    }

    /// The polynomial `x - root`.
    pub fn linear(root: i128) -> IntPoly {
        IntPoly {
            coeffs: vec![-root, 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    /// Coefficient of `x^j`, zero beyond the stored degree.
    pub fn coeff(&self, j: usize) -> i128 {
        self.coeffs.get(j).copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        *self.coeffs.last().unwrap() == 1
    }

    pub fn eval(&self, x: i128) -> i128 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * x + c)
    }

    pub fn checked_mul(&self, other: &IntPoly) -> Option<IntPoly> {
        let mut out = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].checked_add(a.checked_mul(b)?)?;
            }
        }
        Some(IntPoly { coeffs: out })
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        self.checked_mul(other)
            .expect("polynomial product overflows i128")
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        IntPoly {
            coeffs: (0..len).map(|j| self.coeff(j) + other.coeff(j)).collect(),
        }
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Recovers the degree-`n` integer polynomial through `(t, values[t])` for
/// `t = 0..=n`, where `n = values.len() - 1`.
///
/// Works in the falling-factorial basis: the `k`-th forward difference at 0
/// equals `k! * a_k` where `p = sum_k a_k * x(x-1)...(x-k+1)`, and the `a_k`
/// are integers whenever `p` has integer coefficients. The Newton form is
/// then expanded with integer arithmetic only.
pub fn interpolate_forward(values: &[i128]) -> Result<IntPoly, KernelError> {
    assert!(!values.is_empty(), "interpolation needs at least one node");
    let n = values.len() - 1;
    let overflow = || KernelError::Overflow("forward-difference interpolation");

    let mut diff = values.to_vec();
    let mut newton = Vec::with_capacity(n + 1);
    newton.push(diff[0]);
    let mut factorial: i128 = 1;
    for order in 1..=n {
        for i in 0..=(n - order) {
            diff[i] = diff[i + 1].checked_sub(diff[i]).ok_or_else(overflow)?;
        }
        factorial = factorial.checked_mul(order as i128).ok_or_else(overflow)?;
        if diff[0] % factorial != 0 {
            return Err(KernelError::NotIntegral { order });
        }
        newton.push(diff[0] / factorial);
    }

    // p = a_0 + x (a_1 + (x - 1)(a_2 + ... (x - (n-1)) a_n))
    let mut coeffs = vec![0i128; n + 1];
    coeffs[0] = newton[n];
    let mut len = 1;
    for k in (0..n).rev() {
        // coeffs <- coeffs * (x - k) + a_k
        let shift = k as i128;
        for j in (0..=len).rev() {
            let hi = if j > 0 { coeffs[j - 1] } else { 0 };
            let lo = if j < len {
                coeffs[j].checked_mul(shift).ok_or_else(overflow)?
            } else {
                0
            };
            coeffs[j] = hi.checked_sub(lo).ok_or_else(overflow)?;
        }
        len += 1;
        coeffs[0] = coeffs[0].checked_add(newton[k]).ok_or_else(overflow)?;
    }
    Ok(IntPoly { coeffs })
}

impl fmt::Display for IntPoly {
    /// Renders as `x^3 + 3x - 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (power, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            first = false;
            if mag != 1 || power == 0 {
                write!(f, "{mag}")?;
            }
            match power {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{power}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
