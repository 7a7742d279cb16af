//! Bessel-series solution of start-up pipe flow for the fractional Maxwell
//! fluid: mode table, velocity and shear-stress fields, and the closed forms
//! of the Scott Blair and Newtonian special cases.
//!
//! Everything is dimensionless: radius in units of the pipe radius, time in
//! units of `rho a^2 / G`-type scales, velocity in units of the Newtonian
//! centerline scale, and stress in units of `G a` where `G` is the imposed
//! pressure gradient.

mod field;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laplace::{final_value, invert, FinalValue, InversionConfig, PowerSum, TransferFn};
use crate::specfun::{j0, j0_roots, j1, mittag_leffler};

pub use field::{uniform_radii, Quantity, RadialField};
use field::{check_radii, check_times};

pub const DEFAULT_MODES: usize = 200;
pub const DEFAULT_MAX_MODES: usize = 1600;
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-6;

/// Material parameters of the fractional Maxwell fluid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidParams {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl FluidParams {
    pub fn new(alpha: f64, beta: f64, lambda: f64) -> Result<Self> {
        let p = FluidParams { alpha, beta, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let FluidParams { alpha, beta, lambda } = *self;
        if !(0.0 <= alpha && alpha <= beta && beta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "fractional orders must satisfy 0 <= alpha <= beta <= 1, got alpha={alpha}, beta={beta}"
            )));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
        }
        Ok(())
    }

    fn denominator(&self, k: f64) -> PowerSum {
        let FluidParams { alpha, beta, lambda } = *self;
        PowerSum::new([
            (1.0, 2.0),
            (lambda.powf(alpha), alpha + 2.0),
            (k * k * lambda.powf(beta - 1.0), beta),
        ])
    }
}

/// One term of the eigenfunction expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub index: usize,
    pub root: f64,
    /// `A_m = 2 / (k_m J1(k_m))`.
    pub coefficient: f64,
    /// Laplace transform of the temporal factor `T_m(t)`.
    pub response: TransferFn,
}

/// Transform of `T_m`: `(1 + l^a z^a) / (z^2 + l^a z^(a+2) + k^2 l^(b-1) z^b)`.
pub fn velocity_transform(params: &FluidParams, k: f64) -> Result<TransferFn> {
    let num = PowerSum::new([(1.0, 0.0), (params.lambda.powf(params.alpha), params.alpha)]);
    TransferFn::new(num, params.denominator(k))
}

/// Transform of the temporal factor of the stress expansion:
/// `l^(b-1) z^(b-1) / (z^2 + l^a z^(a+2) + k^2 l^(b-1) z^b)`.
pub fn stress_transform(params: &FluidParams, k: f64) -> Result<TransferFn> {
    let num = PowerSum::monomial(params.lambda.powf(params.beta - 1.0), params.beta - 1.0);
    TransferFn::new(num, params.denominator(k))
}

pub fn mode_table(params: &FluidParams, modes: usize) -> Result<Vec<Mode>> {
    params.validate()?;
    let roots = j0_roots(modes)?;
    roots
        .roots()
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            Ok(Mode {
                index: i + 1,
                root: k,
                coefficient: 2.0 / (k * j1(k)),
                response: velocity_transform(params, k)?,
            })
        })
        .collect()
}

/// Truncation and inversion settings for the series solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Modes used when the tail test passes.
    pub modes: usize,
    /// Upper bound when the series has to be extended.
    pub max_modes: usize,
    /// Largest allowed contribution of any of the last three modes at the
    /// smallest requested positive time.
    pub tail_tolerance: f64,
    pub inversion: InversionConfig,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            modes: DEFAULT_MODES,
            max_modes: DEFAULT_MAX_MODES,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
            inversion: InversionConfig::default(),
        }
    }
}

impl SeriesConfig {
    pub fn with_modes(modes: usize, inversion: &InversionConfig) -> Self {
        SeriesConfig {
            modes,
            max_modes: DEFAULT_MAX_MODES.max(modes),
            inversion: *inversion,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.modes == 0 {
            return Err(Error::InvalidParameter("at least one mode is required".into()));
        }
        if self.max_modes < self.modes {
            return Err(Error::InvalidParameter(format!(
                "max_modes {} is below the requested {} modes",
                self.max_modes, self.modes
            )));
        }
        if !(self.tail_tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tail tolerance must be positive, got {}",
                self.tail_tolerance
            )));
        }
        self.inversion.validate()
    }
}

/// Velocity field `u(r, t) = sum_m A_m J0(k_m r) T_m(t)`.
pub fn velocity(
    params: &FluidParams,
    radii: &[f64],
    times: &[f64],
    modes: usize,
    cfg: &InversionConfig,
) -> Result<RadialField> {
    velocity_with(params, radii, times, &SeriesConfig::with_modes(modes, cfg))
}

pub fn velocity_with(params: &FluidParams, radii: &[f64], times: &[f64], sc: &SeriesConfig) -> Result<RadialField> {
    expand(Quantity::Velocity, params, radii, times, sc)
}

/// Shear stress `sigma(r, t) = sum_m (-2 J1(k_m r) / J1(k_m)) S_m(t)`, in units of `G a`.
pub fn stress(
    params: &FluidParams,
    radii: &[f64],
    times: &[f64],
    modes: usize,
    cfg: &InversionConfig,
) -> Result<RadialField> {
    stress_with(params, radii, times, &SeriesConfig::with_modes(modes, cfg))
}

pub fn stress_with(params: &FluidParams, radii: &[f64], times: &[f64], sc: &SeriesConfig) -> Result<RadialField> {
    expand(Quantity::Stress, params, radii, times, sc)
}

fn expand(
    quantity: Quantity,
    params: &FluidParams,
    radii: &[f64],
    times: &[f64],
    sc: &SeriesConfig,
) -> Result<RadialField> {
    params.validate()?;
    sc.validate()?;
    let field = series_field(quantity, params, radii, times, sc, |mode, positive| {
        let tf = match quantity {
            Quantity::Velocity => mode.response.clone(),
            Quantity::Stress => stress_transform(params, mode.root)?,
        };
        invert(&tf, positive, &sc.inversion)
    })?;
    Ok(field
        .with_meta("alpha", params.alpha)
        .with_meta("beta", params.beta)
        .with_meta("lambda", params.lambda))
}

fn spatial_weight(quantity: Quantity, mode: &Mode, r: f64) -> f64 {
    match quantity {
        Quantity::Velocity => mode.coefficient * j0(mode.root * r),
        Quantity::Stress => -2.0 * j1(mode.root * r) / j1(mode.root),
    }
}

/// Sum the series on the grid, adding modes while the last three terms at
/// the smallest positive time exceed the tail tolerance. `temporal` maps a
/// mode to its factor at the positive entries of `times`; zero times give
/// exactly zero.
fn series_field<F>(
    quantity: Quantity,
    params: &FluidParams,
    radii: &[f64],
    times: &[f64],
    sc: &SeriesConfig,
    temporal: F,
) -> Result<RadialField>
where
    F: Fn(&Mode, &[f64]) -> Result<Vec<f64>> + Sync,
{
    check_radii(radii)?;
    check_times(times)?;
    let positive: Vec<f64> = times.iter().copied().filter(|&t| t > 0.0).collect();
    let smallest = positive
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i);

    let mut count = sc.modes;
    let mut table = mode_table(params, count)?;
    let mut factors: Vec<Vec<f64>> = table
        .par_iter()
        .map(|mode| temporal(mode, &positive))
        .collect::<Result<_>>()?;
    let mut weights: Vec<Vec<f64>> = Vec::new();
    loop {
        weights.extend(
            table[weights.len()..]
                .iter()
                .map(|mode| radii.iter().map(|&r| spatial_weight(quantity, mode, r)).collect::<Vec<f64>>()),
        );
        let Some(ti) = smallest else { break };
        let tail = (count.saturating_sub(3)..count)
            .flat_map(|m| {
                let f = factors[m][ti];
                weights[m].iter().map(move |w| (w * f).abs())
            })
            .fold(0.0, f64::max);
        if tail <= sc.tail_tolerance {
            break;
        }
        if count >= sc.max_modes {
            return Err(Error::Truncation {
                modes: count,
                tail,
                tolerance: sc.tail_tolerance,
            });
        }
        count = (2 * count).min(sc.max_modes);
        table = mode_table(params, count)?;
        let extra: Vec<Vec<f64>> = table[factors.len()..]
            .par_iter()
            .map(|mode| temporal(mode, &positive))
            .collect::<Result<_>>()?;
        factors.extend(extra);
    }

    let mut values = Vec::with_capacity(times.len());
    let mut pi = 0;
    for &t in times {
        if t == 0.0 {
            values.push(vec![0.0; radii.len()]);
            continue;
        }
        let row = (0..radii.len())
            .map(|j| (0..count).map(|m| weights[m][j] * factors[m][pi]).sum())
            .collect();
        values.push(row);
        pi += 1;
    }
    Ok(RadialField {
        quantity,
        radii: radii.to_vec(),
        times: times.to_vec(),
        values,
        metadata: vec![("modes".into(), count.to_string())],
    })
}

/// Scott Blair fluid (`alpha = 0`):
/// `T_m(t) = t E_{2-b,2}(-k_m^2 l^(b-1) t^(2-b) / 2)`, no Laplace inversion.
pub fn velocity_scott_blair(beta: f64, lambda: f64, radii: &[f64], times: &[f64], modes: usize) -> Result<RadialField> {
    velocity_scott_blair_with(beta, lambda, radii, times, &SeriesConfig { modes, ..Default::default() })
}

/// As [`velocity_scott_blair`]; only the truncation settings of `sc` are used.
pub fn velocity_scott_blair_with(
    beta: f64,
    lambda: f64,
    radii: &[f64],
    times: &[f64],
    sc: &SeriesConfig,
) -> Result<RadialField> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter(format!("Scott Blair order must lie in (0, 1], got {beta}")));
    }
    let params = FluidParams::new(0.0, beta, lambda)?;
    sc.validate()?;
    let a = 2.0 - beta;
    let field = series_field(Quantity::Velocity, &params, radii, times, sc, |mode, positive| {
        let c = 0.5 * mode.root * mode.root * lambda.powf(beta - 1.0);
        positive
            .iter()
            .map(|&t| Ok(t * mittag_leffler(a, 2.0, -c * t.powf(a))?))
            .collect()
    })?;
    Ok(field
        .with_meta("alpha", 0.0)
        .with_meta("beta", beta)
        .with_meta("lambda", lambda))
}

/// Newtonian start-up flow:
/// `u = (1 - r^2)/2 - sum_m 4 J0(k_m r) / (k_m^3 J1(k_m)) exp(-k_m^2 t / 2)`.
pub fn velocity_newtonian(radii: &[f64], times: &[f64], modes: usize) -> Result<RadialField> {
    if modes == 0 {
        return Err(Error::InvalidParameter("at least one mode is required".into()));
    }
    check_radii(radii)?;
    check_times(times)?;
    let roots = j0_roots(modes)?;
    let values = times
        .iter()
        .map(|&t| {
            radii
                .iter()
                .map(|&r| {
                    let transient: f64 = roots
                        .roots()
                        .iter()
                        .map(|&k| 4.0 * j0(k * r) / (k.powi(3) * j1(k)) * (-0.5 * k * k * t).exp())
                        .sum();
                    0.5 * (1.0 - r * r) - transient
                })
                .collect()
        })
        .collect();
    Ok(RadialField {
        quantity: Quantity::Velocity,
        radii: radii.to_vec(),
        times: times.to_vec(),
        values,
        metadata: vec![
            ("alpha".into(), "0".into()),
            ("beta".into(), "1".into()),
            ("lambda".into(), "1".into()),
            ("modes".into(), modes.to_string()),
        ],
    })
}

/// Long-time velocity profile, reported at `t = inf`.
///
/// Every mode has the same final-value class; when it is finite the limit of
/// mode `m` is `s / k_m^2` and `sum_m A_m J0(k_m r) / k_m^2 = (1 - r^2) / 4`.
pub fn steady_profile(params: &FluidParams, radii: &[f64]) -> Result<RadialField> {
    params.validate()?;
    check_radii(radii)?;
    let k1 = j0_roots(1)?.roots()[0];
    let scale = match final_value(&velocity_transform(params, k1)?) {
        FinalValue::ZeroLimit => 0.0,
        FinalValue::FiniteLimit(c) => c * k1 * k1,
        FinalValue::Divergent => {
            return Err(Error::Domain("velocity transform has no finite long-time limit".into()))
        }
    };
    let row = radii.iter().map(|&r| scale * 0.25 * (1.0 - r * r)).collect();
    Ok(RadialField {
        quantity: Quantity::Velocity,
        radii: radii.to_vec(),
        times: vec![f64::INFINITY],
        values: vec![row],
        metadata: Vec::new(),
    }
    .with_meta("alpha", params.alpha)
    .with_meta("beta", params.beta)
    .with_meta("lambda", params.lambda))
}
