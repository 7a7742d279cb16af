use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Exponents closer than this are treated as equal and merged.
pub const EXPONENT_TOL: f64 = 1e-12;

/// One `coeff * z^exponent` term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub exponent: f64,
}

/// A finite sum of `c * z^p` terms with real exponents.
///
/// Terms are kept sorted by strictly increasing exponent with no zero coefficients;
/// construction merges near-equal exponents by summing their coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PowerSum {
    terms: Vec<Term>,
}

impl PowerSum {
    pub fn new<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut raw: Vec<Term> = terms
            .into_iter()
            .map(|(coeff, exponent)| Term { coeff, exponent })
            .collect();
        raw.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
        let mut merged: Vec<Term> = Vec::with_capacity(raw.len());
        for t in raw {
            match merged.last_mut() {
                Some(last) if (t.exponent - last.exponent).abs() <= EXPONENT_TOL => {
                    last.coeff += t.coeff;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        PowerSum { terms: merged }
    }

    pub fn constant(c: f64) -> Self {
        Self::new([(c, 0.0)])
    }

    pub fn monomial(coeff: f64, exponent: f64) -> Self {
        Self::new([(coeff, exponent)])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest-exponent term.
    pub fn lowest(&self) -> Option<Term> {
        self.terms.first().copied()
    }

    /// Highest-exponent term.
    pub fn highest(&self) -> Option<Term> {
        self.terms.last().copied()
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.iter().any(|t| t.exponent < 0.0)
    }

    pub fn all_integer_exponents(&self) -> bool {
        self.terms.iter().all(|t| t.exponent == t.exponent.round())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.terms.iter().map(|t| (t.coeff * factor, t.exponent)))
    }

    /// Multiply every term by `z^shift`.
    pub fn shift(&self, shift: f64) -> Self {
        Self::new(self.terms.iter().map(|t| (t.coeff, t.exponent + shift)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|t| (t.coeff, t.exponent)),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().flat_map(|a| {
            other
                .terms
                .iter()
                .map(move |b| (a.coeff * b.coeff, a.exponent + b.exponent))
        }))
    }

    /// Evaluate given the principal logarithm of `z`. Also returns `sum |c z^p|`.
    pub(crate) fn eval_with_log(&self, ln_z: Complex64) -> (Complex64, f64) {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for t in &self.terms {
            let v = if t.exponent == 0.0 {
                Complex64::new(t.coeff, 0.0)
            } else {
                (ln_z * t.exponent).exp() * t.coeff
            };
            magnitude += v.norm();
            sum += v;
        }
        (sum, magnitude)
    }

    /// Evaluate at `z` on the principal branch, `arg z` in `(-pi, pi]`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_point(z, self.has_negative_exponent(), self.all_integer_exponents())?;
        if z == Complex64::new(0.0, 0.0) {
            return Ok(self.eval_at_origin());
        }
        Ok(self.eval_with_log(principal_ln(z)).0)
    }

    fn eval_at_origin(&self) -> Complex64 {
        let c: f64 = self
            .terms
            .iter()
            .filter(|t| t.exponent == 0.0)
            .map(|t| t.coeff)
            .sum();
        Complex64::new(c, 0.0)
    }
}

pub(crate) fn principal_ln(z: Complex64) -> Complex64 {
    Complex64::new(z.norm().ln(), z.im.atan2(z.re))
}

pub(crate) fn check_point(z: Complex64, negative: bool, integer: bool) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite(if z.re.is_finite() { z.im } else { z.re }));
    }
    if z == Complex64::new(0.0, 0.0) && negative {
        return Err(Error::Pole { re: 0.0, im: 0.0 });
    }
    if z.im == 0.0 && z.re < 0.0 && !integer {
        return Err(Error::BranchCut(z.re));
    }
    Ok(())
}

impl fmt::Display for PowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*z^{}", t.coeff, t.exponent)?;
        }
        Ok(())
    }
}
