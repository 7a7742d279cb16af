//! Laplace-domain responses as ratios of real-exponent power sums, their
//! evaluation on the principal branch, numerical inversion along a vertical
//! line, and symbolic final-value classification.

mod invert;
mod power_sum;

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) use invert::invert_slowly_decaying;
pub use invert::{invert, invert_one, invert_with_estimate, InversionConfig};
pub use power_sum::{PowerSum, Term, EXPONENT_TOL};

pub(crate) use power_sum::{check_point, principal_ln};

/// `numerator(z) / denominator(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFn {
    numerator: PowerSum,
    denominator: PowerSum,
}

impl TransferFn {
    pub fn new(numerator: PowerSum, denominator: PowerSum) -> Result<Self> {
        if denominator.is_empty() {
            return Err(Error::InvalidParameter("transfer function denominator is empty".into()));
        }
        Ok(TransferFn {
            numerator,
            denominator,
        })
    }

    pub fn numerator(&self) -> &PowerSum {
        &self.numerator
    }

    pub fn denominator(&self) -> &PowerSum {
        &self.denominator
    }

    /// `self + other` over the common denominator.
    pub fn add(&self, other: &Self) -> Self {
        let numerator = self
            .numerator
            .mul(&other.denominator)
            .add(&other.numerator.mul(&self.denominator));
        TransferFn {
            numerator,
            denominator: self.denominator.mul(&other.denominator),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        TransferFn {
            numerator: self.numerator.scale(factor),
            denominator: self.denominator.clone(),
        }
    }

    /// Multiply by `z^shift`.
    pub fn shift(&self, shift: f64) -> Self {
        TransferFn {
            numerator: self.numerator.shift(shift),
            denominator: self.denominator.clone(),
        }
    }

    /// Divide numerator and denominator by the lowest power of `z` they share.
    pub fn reduce_common_power(&self) -> Self {
        match (self.numerator.lowest(), self.denominator.lowest()) {
            (Some(n), Some(d)) => {
                let p = n.exponent.min(d.exponent);
                TransferFn {
                    numerator: self.numerator.shift(-p),
                    denominator: self.denominator.shift(-p),
                }
            }
            _ => self.clone(),
        }
    }

    /// `deg(numerator) - deg(denominator)` in terms of the highest exponents.
    pub fn relative_degree(&self) -> f64 {
        let den = self.denominator.highest().map_or(0.0, |t| t.exponent);
        match self.numerator.highest() {
            Some(n) => n.exponent - den,
            None => f64::NEG_INFINITY,
        }
    }

    /// Leading behaviour `c * z^p` of the function as `z -> 0+`, if nonzero.
    pub fn small_z_leading(&self) -> Option<(f64, f64)> {
        let n = self.numerator.lowest()?;
        let d = self.denominator.lowest()?;
        Some((n.coeff / d.coeff, n.exponent - d.exponent))
    }

    /// Value of the transform at `z` (principal branch).
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        eval_tf(self, z)
    }
}

impl fmt::Display for TransferFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

/// Evaluate `tf` at `z`, rejecting poles and branch-cut points.
pub fn eval_tf(tf: &TransferFn, z: Complex64) -> Result<Complex64> {
    let negative = tf.numerator.has_negative_exponent() || tf.denominator.has_negative_exponent();
    let integer = tf.numerator.all_integer_exponents() && tf.denominator.all_integer_exponents();
    check_point(z, negative, integer)?;
    let (num, den, den_mag) = if z == Complex64::new(0.0, 0.0) {
        let n = tf.numerator.eval(z)?;
        let d = tf.denominator.eval(z)?;
        (n, d, d.norm())
    } else {
        let ln_z = principal_ln(z);
        let (n, _) = tf.numerator.eval_with_log(ln_z);
        let (d, mag) = tf.denominator.eval_with_log(ln_z);
        (n, d, mag)
    };
    if den.norm() <= 4.0 * f64::EPSILON * den_mag || den == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok(num / den)
}

/// Long-time limit class of the original function `f(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FinalValue {
    ZeroLimit,
    FiniteLimit(f64),
    Divergent,
}

/// Classify `lim_{t -> inf} f(t)` from the dominant small-`z` term of `z * tf(z)`.
pub fn final_value(tf: &TransferFn) -> FinalValue {
    match tf.small_z_leading() {
        None => FinalValue::ZeroLimit,
        Some((c, p)) => {
            let p = p + 1.0;
            if p > EXPONENT_TOL {
                FinalValue::ZeroLimit
            } else if p < -EXPONENT_TOL {
                FinalValue::Divergent
            } else {
                FinalValue::FiniteLimit(c)
            }
        }
    }
}
