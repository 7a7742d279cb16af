//! Centerline time series, oscillation counting, long-time classification of
//! the fluid, and classification of spring / dashpot / spring-pot networks.

mod network;

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::laplace::{final_value, FinalValue, InversionConfig};
use crate::spectral::{velocity_transform, velocity_with, FluidParams, SeriesConfig};
use crate::specfun::j0_roots;

pub use network::{
    builtin_catalog, check_conjecture, classify_network, conjecture_report, network_modulus, parse_catalog,
    spring_path, BehaviorClass, ConjectureCheck, MechNetwork,
};

pub const DEFAULT_NOISE_TOL: f64 = 1e-3;

/// `u(0, t)` at increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl CenterSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("series times must be strictly increasing".into()));
        }
        Ok(CenterSeries { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,u0\n");
        for (t, v) in self.times.iter().zip(&self.values) {
            let _ = writeln!(out, "{t},{v:.12e}");
        }
        out
    }
}

pub fn center_series(params: &FluidParams, times: &[f64], modes: usize, cfg: &InversionConfig) -> Result<CenterSeries> {
    center_series_with(params, times, &SeriesConfig::with_modes(modes, cfg))
}

pub fn center_series_with(params: &FluidParams, times: &[f64], sc: &SeriesConfig) -> Result<CenterSeries> {
    let field = velocity_with(params, &[0.0], times, sc)?;
    CenterSeries::new(times.to_vec(), field.column(0))
}

/// A confirmed turning point: the series retraced by more than the noise
/// tolerance after reaching it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub index: usize,
    pub time: f64,
    pub value: f64,
    pub is_max: bool,
}

/// Turning points of the series, ignoring wiggles no larger than `noise_tol`.
/// The end points never count.
pub fn extrema(series: &CenterSeries, noise_tol: f64) -> Result<Vec<Extremum>> {
    if series.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 samples to look for extrema, got {}",
            series.len()
        )));
    }
    if !(noise_tol > 0.0) {
        return Err(Error::InvalidParameter(format!("noise tolerance must be positive, got {noise_tol}")));
    }
    if let Some(v) = series.values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(*v));
    }
    let v = &series.values;
    let mut out = Vec::new();
    // direction: 0 undecided, 1 rising, -1 falling
    let mut dir = 0i8;
    let mut ext = 0usize;
    for i in 1..v.len() {
        match dir {
            0 => {
                if v[i] - v[0] > noise_tol {
                    dir = 1;
                    ext = i;
                } else if v[0] - v[i] > noise_tol {
                    dir = -1;
                    ext = i;
                }
            }
            1 => {
                if v[i] > v[ext] {
                    ext = i;
                } else if v[ext] - v[i] > noise_tol {
                    out.push(series.extremum(ext, true));
                    dir = -1;
                    ext = i;
                }
            }
            _ => {
                if v[i] < v[ext] {
                    ext = i;
                } else if v[i] - v[ext] > noise_tol {
                    out.push(series.extremum(ext, false));
                    dir = 1;
                    ext = i;
                }
            }
        }
    }
    Ok(out)
}

impl CenterSeries {
    fn extremum(&self, index: usize, is_max: bool) -> Extremum {
        Extremum {
            index,
            time: self.times[index],
            value: self.values[index],
            is_max,
        }
    }
}

/// Number of local extrema whose prominence exceeds `noise_tol`.
pub fn count_oscillations(series: &CenterSeries, noise_tol: f64) -> Result<usize> {
    Ok(extrema(series, noise_tol)?.len())
}

/// Depth of the first minimum following the first maximum, measured from
/// that maximum; `None` when the series never turns down and back up.
pub fn first_undershoot(series: &CenterSeries, noise_tol: f64) -> Result<Option<f64>> {
    let ext = extrema(series, noise_tol)?;
    Ok(ext
        .iter()
        .position(|e| e.is_max)
        .and_then(|i| ext.get(i + 1).map(|m| ext[i].value - m.value)))
}

/// `SolidLike` when the velocity decays to rest, `FluidLike` when a steady
/// flow remains.
pub fn classify_longtime(params: &FluidParams) -> Result<BehaviorClass> {
    params.validate()?;
    let k1 = j0_roots(1)?.roots()[0];
    match final_value(&velocity_transform(params, k1)?) {
        FinalValue::ZeroLimit => Ok(BehaviorClass::SolidLike),
        FinalValue::FiniteLimit(_) => Ok(BehaviorClass::FluidLike),
        FinalValue::Divergent => Err(Error::Domain("velocity transform grows at late times".into())),
    }
}

/// Two spring-pots in series with orders `beta` and `beta - alpha`, which
/// realize the fractional Maxwell law with unit constants.
pub fn maxwell_realization(params: &FluidParams) -> Result<MechNetwork> {
    params.validate()?;
    let hi = params.beta;
    let lo = params.beta - params.alpha;
    let element = |order: f64| {
        if order == 1.0 {
            MechNetwork::dashpot(1.0)
        } else {
            MechNetwork::springpot(1.0, 1.0, order)
        }
    };
    Ok(MechNetwork::Serial(vec![element(lo), element(hi)]))
}
