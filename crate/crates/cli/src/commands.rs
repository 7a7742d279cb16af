use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use clap::ValueEnum;
use fracpipe::analysis::{
    builtin_catalog, center_series_with, classify_longtime, conjecture_report, parse_catalog, CenterSeries,
};
use fracpipe::laplace::InversionConfig;
use fracpipe::oracle_fd::{simulate, FdConfig};
use fracpipe::specfun::j0_roots;
use fracpipe::spectral::{
    steady_profile, stress_with, uniform_radii, velocity_scott_blair_with, velocity_with, FluidParams, RadialField,
    SeriesConfig, DEFAULT_MAX_MODES,
};

use crate::plot::{line_chart, Curve};
use crate::settings::{Defaults, Flags, Format, Settings};

/// Tail tolerance of the spectral reference in `oracle-compare`.
const ORACLE_REFERENCE_TOL: f64 = 1e-4;
/// Most profiles drawn in one field plot.
const MAX_PLOTTED_PROFILES: usize = 8;

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn params(s: &Settings) -> Result<FluidParams> {
    Ok(FluidParams::new(s.alpha, s.beta, s.lambda)?)
}

fn series_config(s: &Settings) -> SeriesConfig {
    SeriesConfig {
        modes: s.modes,
        max_modes: DEFAULT_MAX_MODES.max(s.modes),
        tail_tolerance: s.tol,
        inversion: InversionConfig::default(),
    }
}

fn header(pairs: &[(String, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("# {k}={v}\n")).collect()
}

fn with_settings(mut field: RadialField, s: &Settings) -> RadialField {
    for (k, v) in s.header() {
        if !field.metadata.iter().any(|(have, _)| *have == k) {
            field.metadata.push((k, v));
        }
    }
    field
}

fn series_curve(label: String, s: &CenterSeries) -> Curve {
    Curve {
        label,
        points: s.times().iter().copied().zip(s.values().iter().copied()).collect(),
    }
}

/// Profiles against `r`, thinned to a readable number of times.
fn profile_curves(f: &RadialField) -> Vec<Curve> {
    let n = f.times.len();
    let step = n.div_ceil(MAX_PLOTTED_PROFILES).max(1);
    let mut picks: Vec<usize> = (0..n).rev().step_by(step).collect();
    picks.reverse();
    picks
        .into_iter()
        .map(|i| Curve {
            label: format!("t={}", f.times[i]),
            points: f.radii.iter().copied().zip(f.values[i].iter().copied()).collect(),
        })
        .collect()
}

pub fn roots(flags: &Flags, count: Option<usize>) -> Result<()> {
    let s = flags.resolve(Defaults::default())?;
    let m = count.or(flags.modes).unwrap_or(s.modes);
    let table = j0_roots(m)?;
    let text = match s.format {
        Format::Csv => format!("# modes={m}\n{}", table.to_csv()),
        Format::Plot => line_chart(
            "Zeros of J0",
            "m",
            "k_m",
            &[Curve {
                label: "k_m".into(),
                points: table.roots().iter().enumerate().map(|(i, &k)| ((i + 1) as f64, k)).collect(),
            }],
        ),
    };
    write_out(s.out.as_deref(), &text)
}

pub fn field(flags: &Flags, stress: bool) -> Result<()> {
    let s = flags.resolve(Defaults::default())?;
    let p = params(&s)?;
    let radii = uniform_radii(s.r_points)?;
    let times = s.times();
    let sc = series_config(&s);
    let f = if stress {
        stress_with(&p, &radii, &times, &sc)?
    } else {
        velocity_with(&p, &radii, &times, &sc)?
    };
    let f = with_settings(f, &s);
    let text = match s.format {
        Format::Csv => f.to_csv(),
        Format::Plot => {
            let name = if stress { "Shear stress" } else { "Velocity" };
            line_chart(
                &format!("{name} profiles, alpha={}, beta={}, lambda={}", s.alpha, s.beta, s.lambda),
                "r",
                f.quantity.name(),
                &profile_curves(&f),
            )
        }
    };
    write_out(s.out.as_deref(), &text)
}

pub fn center_series(flags: &Flags) -> Result<()> {
    let s = flags.resolve(Defaults::default())?;
    let p = params(&s)?;
    let series = center_series_with(&p, &s.times(), &series_config(&s))?;
    let text = match s.format {
        Format::Csv => {
            let mut h = s.header();
            h.push(("modes".into(), s.modes.to_string()));
            format!("{}{}", header(&h), series.to_csv())
        }
        Format::Plot => line_chart(
            &format!("Center velocity, alpha={}, beta={}, lambda={}", s.alpha, s.beta, s.lambda),
            "t",
            "u(0, t)",
            &[series_curve(format!("alpha={}, beta={}", s.alpha, s.beta), &series)],
        ),
    };
    write_out(s.out.as_deref(), &text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl Figure {
    fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
        }
    }

    /// `(alpha, beta)` of every default curve.
    fn curves(self) -> Vec<(f64, f64)> {
        match self {
            Figure::Fig2 => [0.2, 0.4, 0.6, 0.8, 1.0].iter().map(|&b| (0.0, b)).collect(),
            Figure::Fig3 => vec![(0.0, 0.4), (0.0, 1.0)],
            Figure::Fig4 => [0.6, 0.7, 0.8, 0.9, 1.0].iter().map(|&b| (0.6, b)).collect(),
            Figure::Fig5 => [0.0, 0.2, 0.4, 0.6].iter().map(|&a| (a, 0.6)).collect(),
            Figure::Fig6 => [0.0, 0.2, 0.6, 1.0].iter().map(|&a| (a, 1.0)).collect(),
        }
    }

    /// Whether `alpha` is the parameter that varies between curves.
    fn varies_alpha(self) -> bool {
        matches!(self, Figure::Fig5 | Figure::Fig6)
    }

    fn scott_blair(self) -> bool {
        matches!(self, Figure::Fig2 | Figure::Fig3)
    }
}

/// Snapshot times of the profile figure as fractions of `t_max`.
const PROFILE_FRACTIONS: [f64; 5] = [0.05, 0.1, 0.2, 0.5, 1.0];

struct FigureCurve {
    label: String,
    csv: String,
    plot: Vec<Curve>,
}

pub fn figure(flags: &Flags, which: Figure) -> Result<()> {
    let defaults = Defaults {
        t_max: if which == Figure::Fig3 { 10.0 } else { 30.0 },
        tol: 1e-4,
        ..Defaults::default()
    };
    let s = flags.resolve(defaults)?;
    let file = match &flags.config {
        Some(p) => crate::settings::read_config(p)?,
        None => Default::default(),
    };
    let alpha_set = flags.alpha.is_some() || file.contains_key("alpha");
    let beta_set = flags.beta.is_some() || file.contains_key("beta");

    // an override of the varying parameter selects a single curve, an
    // override of the fixed one moves every curve
    let mut sets = which.curves();
    if which.varies_alpha() {
        if alpha_set {
            sets = vec![(s.alpha, sets[0].1)];
        }
        if beta_set {
            sets.iter_mut().for_each(|c| c.1 = s.beta);
        }
    } else {
        if beta_set {
            sets = vec![(sets[0].0, s.beta)];
        }
        if alpha_set {
            if which.scott_blair() {
                ensure!(s.alpha == 0.0, "{} is drawn for alpha = 0 only", which.name());
            }
            sets.iter_mut().for_each(|c| c.0 = s.alpha);
        }
    }
    let params: Vec<FluidParams> = sets
        .iter()
        .map(|&(a, b)| FluidParams::new(a, b, s.lambda))
        .collect::<fracpipe::Result<_>>()
        .with_context(|| format!("invalid override for {}", which.name()))?;

    let sc = series_config(&s);
    let mut curves = Vec::new();
    for p in &params {
        let label = if which.varies_alpha() {
            format!("alpha={}", p.alpha)
        } else {
            format!("beta={}", p.beta)
        };
        let mut h = vec![("figure".to_string(), which.name().to_string())];
        h.extend(s.header());
        h[1].1 = p.alpha.to_string();
        h[2].1 = p.beta.to_string();
        h.push(("modes".into(), s.modes.to_string()));
        let curve = if which == Figure::Fig3 {
            let radii = uniform_radii(s.r_points)?;
            let times: Vec<f64> = PROFILE_FRACTIONS.iter().map(|f| f * s.t_max).collect();
            let mut f = velocity_scott_blair_with(p.beta, p.lambda, &radii, &times, &sc)?;
            f.metadata = h;
            FigureCurve {
                label,
                csv: f.to_csv(),
                plot: profile_curves(&f),
            }
        } else {
            let times = s.times();
            let series = if which.scott_blair() {
                let f = velocity_scott_blair_with(p.beta, p.lambda, &[0.0], &times, &sc)?;
                CenterSeries::new(times, f.column(0))?
            } else {
                center_series_with(p, &times, &sc)?
            };
            FigureCurve {
                csv: format!("{}{}", header(&h), series.to_csv()),
                plot: vec![series_curve(label.clone(), &series)],
                label,
            }
        };
        curves.push(curve);
    }

    let title = match which {
        Figure::Fig2 => "Center velocity, Scott Blair fluid".to_string(),
        Figure::Fig3 => "Velocity profiles, Scott Blair fluid".to_string(),
        _ if which.varies_alpha() => format!("Center velocity, beta={}", params[0].beta),
        _ => format!("Center velocity, alpha={}", params[0].alpha),
    };
    let (x_label, y_label) = if which == Figure::Fig3 { ("r", "u(r, t)") } else { ("t", "u(0, t)") };
    let plots = |cs: &[FigureCurve]| -> Vec<Curve> {
        cs.iter()
            .flat_map(|c| {
                c.plot.iter().map(move |p| Curve {
                    label: if cs.len() > 1 && which == Figure::Fig3 {
                        format!("{} {}", c.label, p.label)
                    } else {
                        p.label.clone()
                    },
                    points: p.points.clone(),
                })
            })
            .collect()
    };

    match &s.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            match s.format {
                Format::Csv => {
                    for c in &curves {
                        let path = dir.join(format!("{}-{}.csv", which.name(), c.label.replace('=', "")));
                        write_out(Some(&path), &c.csv)?;
                    }
                }
                Format::Plot => {
                    let path = dir.join(format!("{}.svg", which.name()));
                    write_out(Some(&path), &line_chart(&title, x_label, y_label, &plots(&curves)))?;
                }
            }
            Ok(())
        }
        None => {
            let text = match s.format {
                Format::Csv => curves.iter().map(|c| c.csv.as_str()).collect::<Vec<_>>().join("\n"),
                Format::Plot => line_chart(&title, x_label, y_label, &plots(&curves)),
            };
            write_out(None, &text)
        }
    }
}

fn positional(flags: &Flags, values: &[f64]) -> Result<Flags> {
    ensure!(values.len() <= 3, "expected at most ALPHA BETA LAMBDA, got {} values", values.len());
    let mut f = flags.clone();
    for (slot, &v) in [&mut f.alpha, &mut f.beta, &mut f.lambda].into_iter().zip(values) {
        *slot = Some(v);
    }
    Ok(f)
}

pub fn classify(flags: &Flags, values: &[f64]) -> Result<()> {
    let flags = positional(flags, values)?;
    let s = flags.resolve(Defaults::default())?;
    let p = params(&s)?;
    let class = classify_longtime(&p)?;
    let steady = steady_profile(&p, &[0.0])?.values[0][0];
    eprintln!(
        "alpha={}, beta={}, lambda={}: {class} (long-time center velocity {steady})",
        s.alpha, s.beta, s.lambda
    );
    let text = format!(
        "alpha,beta,lambda,class,steady_center\n{},{},{},{class},{steady}\n",
        s.alpha, s.beta, s.lambda
    );
    write_out(s.out.as_deref(), &text)
}

pub fn conjecture(flags: &Flags, catalog: Option<&Path>) -> Result<()> {
    let s = flags.resolve(Defaults::default())?;
    let nets = match catalog {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading catalog {}", path.display()))?;
            parse_catalog(&text).with_context(|| format!("in catalog {}", path.display()))?
        }
        None => builtin_catalog(),
    };
    ensure!(!nets.is_empty(), "catalog contains no networks");
    let mut rows = String::from("name,network,spring_path,class,consistent\n");
    let mut consistent = 0;
    for (name, net) in &nets {
        let r = conjecture_report(net).with_context(|| format!("network {name}"))?;
        if r.consistent() {
            consistent += 1;
        } else {
            eprintln!("counterexample {name}: spring path {} but {}", r.spring_path, r.class);
        }
        let _ = writeln!(rows, "{name},\"{net}\",{},{},{}", r.spring_path, r.class, r.consistent());
    }
    let summary = format!("{consistent}/{} consistent", nets.len());
    eprintln!("{summary}");
    write_out(s.out.as_deref(), &format!("# summary={summary}\n{rows}"))?;
    if consistent != nets.len() {
        bail!("{summary}");
    }
    Ok(())
}

pub fn oracle_compare(flags: &Flags, values: &[f64]) -> Result<()> {
    let flags = positional(flags, values)?;
    let s = flags.resolve(Defaults {
        alpha: 0.3,
        beta: 0.8,
        r_points: 64,
        t_max: 5.0,
        dt: 1e-3,
        tol: 2e-2,
        ..Defaults::default()
    })?;
    let p = params(&s)?;
    let fd = simulate(&p, &FdConfig::new(s.r_points, s.dt, s.t_max))?;
    let steps = fd.times.len() - 1;
    let picks: Vec<usize> = (1..=10).map(|i| (i * steps) / 10).collect();
    let times: Vec<f64> = picks.iter().map(|&i| fd.times[i]).collect();
    let sc = SeriesConfig {
        modes: s.modes,
        max_modes: DEFAULT_MAX_MODES.max(s.modes),
        tail_tolerance: ORACLE_REFERENCE_TOL,
        inversion: InversionConfig::default(),
    };
    let spec = velocity_with(&p, &fd.radii, &times, &sc)?;

    let (mut num, mut den, mut worst, mut peak) = (0.0, 0.0, 0.0f64, 0.0f64);
    for (row, &i) in spec.values.iter().zip(&picks) {
        for (b, a) in row.iter().zip(&fd.values[i]) {
            num += (a - b) * (a - b);
            den += b * b;
            worst = worst.max((a - b).abs());
            peak = peak.max(b.abs());
        }
    }
    let l2 = (num / den).sqrt();
    let max_rel = worst / peak;
    let pass = l2 < s.tol;
    eprintln!(
        "max relative discrepancy {max_rel:.3e}, relative L2 {l2:.3e} (threshold {}): {}",
        s.tol,
        if pass { "PASS" } else { "FAIL" }
    );
    let text = match s.format {
        Format::Csv => {
            let mut h = s.header();
            h.push(("modes".into(), s.modes.to_string()));
            format!(
                "{}metric,value,threshold,pass\nmax_relative,{max_rel:.6e},,\nl2_relative,{l2:.6e},{},{pass}\n",
                header(&h),
                s.tol
            )
        }
        Format::Plot => line_chart(
            &format!("Center velocity, alpha={}, beta={}: oracle vs series", s.alpha, s.beta),
            "t",
            "u(0, t)",
            &[
                Curve {
                    label: "finite differences".into(),
                    points: fd.times.iter().copied().zip(fd.column(0)).collect(),
                },
                Curve {
                    label: "series".into(),
                    points: times.iter().copied().zip(spec.column(0)).collect(),
                },
            ],
        ),
    };
    write_out(s.out.as_deref(), &text)?;
    if !pass {
        bail!("relative L2 discrepancy {l2:.3e} exceeds {}", s.tol);
    }
    Ok(())
}
