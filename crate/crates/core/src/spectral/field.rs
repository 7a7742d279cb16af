use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Which physical quantity a field holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Velocity,
    Stress,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Velocity => "velocity",
            Quantity::Stress => "stress",
        }
    }
}

/// Samples of a field on a (time × radius) grid, stored time-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    pub quantity: Quantity,
    pub radii: Vec<f64>,
    pub times: Vec<f64>,
    /// `values[i][j]` is the field at `times[i]`, `radii[j]`.
    pub values: Vec<Vec<f64>>,
    /// Written as `# key=value` lines ahead of the CSV header.
    pub metadata: Vec<(String, String)>,
}

impl RadialField {
    pub fn value(&self, time_index: usize, radius_index: usize) -> f64 {
        self.values[time_index][radius_index]
    }

    /// Values at one radius across all times.
    pub fn column(&self, radius_index: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[radius_index]).collect()
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    /// CSV text: metadata comments, then `t,r,value` rows in time-major order.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# quantity={}", self.quantity.name());
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push_str("t,r,value\n");
        for (t, row) in self.times.iter().zip(&self.values) {
            for (r, v) in self.radii.iter().zip(row) {
                let _ = writeln!(out, "{t},{r},{v:.12e}");
            }
        }
        out
    }
}

/// `n` equally spaced radii from 0 to 1 inclusive.
pub fn uniform_radii(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 radial points, got {n}")));
    }
    Ok((0..n).map(|i| i as f64 / (n - 1) as f64).collect())
}

pub(crate) fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::InvalidParameter("radial grid is empty".into()));
    }
    for &r in radii {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidParameter(format!("radius {r} outside [0, 1]")));
        }
    }
    Ok(())
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidParameter("time list is empty".into()));
    }
    for &t in times {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("time must be finite and non-negative, got {t}")));
        }
    }
    Ok(())
}
