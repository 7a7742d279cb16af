//! Finite spring / dashpot / spring-pot composition networks.
//!
//! Text form:
//!
//! ```text
//! network   := element | group
//! element   := "spring(" E ")" | "dashpot(" eta ")" | "springpot(" E "," lambda "," gamma ")"
//! group     := ("serial" | "parallel") "(" network ("," network)+ ")"
//! ```
//!
//! Whitespace between tokens is ignored.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::laplace::{PowerSum, TransferFn, EXPONENT_TOL};

#[derive(Debug, Clone, PartialEq)]
pub enum MechNetwork {
    Spring { modulus: f64 },
    Dashpot { viscosity: f64 },
    Springpot { modulus: f64, relaxation: f64, order: f64 },
    Serial(Vec<MechNetwork>),
    Parallel(Vec<MechNetwork>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BehaviorClass {
    SolidLike,
    FluidLike,
}

impl fmt::Display for BehaviorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BehaviorClass::SolidLike => "SolidLike",
            BehaviorClass::FluidLike => "FluidLike",
        })
    }
}

impl MechNetwork {
    pub fn spring(modulus: f64) -> Self {
        MechNetwork::Spring { modulus }
    }

    pub fn dashpot(viscosity: f64) -> Self {
        MechNetwork::Dashpot { viscosity }
    }

    pub fn springpot(modulus: f64, relaxation: f64, order: f64) -> Self {
        MechNetwork::Springpot { modulus, relaxation, order }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
            }
        };
        match self {
            MechNetwork::Spring { modulus } => positive("spring modulus", *modulus),
            MechNetwork::Dashpot { viscosity } => positive("dashpot viscosity", *viscosity),
            MechNetwork::Springpot { modulus, relaxation, order } => {
                positive("spring-pot modulus", *modulus)?;
                positive("spring-pot relaxation time", *relaxation)?;
                if !(0.0..=1.0).contains(order) {
                    return Err(Error::InvalidParameter(format!("spring-pot order must lie in [0, 1], got {order}")));
                }
                Ok(())
            }
            MechNetwork::Serial(children) | MechNetwork::Parallel(children) => {
                if children.len() < 2 {
                    return Err(Error::InvalidParameter("composite node needs at least two children".into()));
                }
                children.iter().try_for_each(|c| c.validate())
            }
        }
    }

    /// Multiply every material constant with a modulus or viscosity by `factor`.
    pub fn rescaled(&self, factor: f64) -> Self {
        match self {
            MechNetwork::Spring { modulus } => MechNetwork::spring(modulus * factor),
            MechNetwork::Dashpot { viscosity } => MechNetwork::dashpot(viscosity * factor),
            MechNetwork::Springpot { modulus, relaxation, order } => {
                MechNetwork::springpot(modulus * factor, relaxation * factor, *order)
            }
            MechNetwork::Serial(c) => MechNetwork::Serial(c.iter().map(|n| n.rescaled(factor)).collect()),
            MechNetwork::Parallel(c) => MechNetwork::Parallel(c.iter().map(|n| n.rescaled(factor)).collect()),
        }
    }
}

impl fmt::Display for MechNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MechNetwork::Spring { modulus } => write!(f, "spring({modulus})"),
            MechNetwork::Dashpot { viscosity } => write!(f, "dashpot({viscosity})"),
            MechNetwork::Springpot { modulus, relaxation, order } => {
                write!(f, "springpot({modulus},{relaxation},{order})")
            }
            MechNetwork::Serial(c) | MechNetwork::Parallel(c) => {
                let tag = if matches!(self, MechNetwork::Serial(_)) { "serial" } else { "parallel" };
                write!(f, "{tag}(")?;
                for (i, n) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{n}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for MechNetwork {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let net = p.network()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        net.validate().map_err(|e| Error::Parse { position: 0, message: e.to_string() })?;
        Ok(net)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an element or group name"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).to_ascii_lowercase())
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && matches!(self.src[self.pos], b'0'..=b'9' | b'.' | b'e' | b'E' | b'+' | b'-') {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<f64>().map_err(|_| Error::Parse {
            position: start,
            message: format!("invalid number '{text}'"),
        })
    }

    fn args(&mut self, count: usize) -> Result<Vec<f64>> {
        self.expect(b'(')?;
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            if i > 0 {
                self.expect(b',')?;
            }
            out.push(self.number()?);
        }
        self.expect(b')')?;
        Ok(out)
    }

    fn network(&mut self) -> Result<MechNetwork> {
        let start = self.pos;
        let name = self.ident()?;
        match name.as_str() {
            "spring" => Ok(MechNetwork::spring(self.args(1)?[0])),
            "dashpot" => Ok(MechNetwork::dashpot(self.args(1)?[0])),
            "springpot" => {
                let a = self.args(3)?;
                Ok(MechNetwork::springpot(a[0], a[1], a[2]))
            }
            "serial" | "parallel" => {
                self.expect(b'(')?;
                let mut children = vec![self.network()?];
                loop {
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        Some(b',') => {
                            self.pos += 1;
                            children.push(self.network()?);
                        }
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.error("expected ',' or ')'")),
                    }
                }
                if children.len() < 2 {
                    return Err(Error::Parse {
                        position: start,
                        message: format!("{name} needs at least two children"),
                    });
                }
                Ok(if name == "serial" {
                    MechNetwork::Serial(children)
                } else {
                    MechNetwork::Parallel(children)
                })
            }
            other => Err(Error::Parse {
                position: start,
                message: format!("unknown element '{other}'"),
            }),
        }
    }
}

/// Relaxation modulus `G(z)` as numerator and denominator power sums.
fn modulus_parts(net: &MechNetwork) -> (PowerSum, PowerSum) {
    match net {
        MechNetwork::Spring { modulus } => (PowerSum::constant(*modulus), PowerSum::constant(1.0)),
        MechNetwork::Dashpot { viscosity } => (PowerSum::monomial(*viscosity, 1.0), PowerSum::constant(1.0)),
        MechNetwork::Springpot { modulus, relaxation, order } => (
            PowerSum::monomial(modulus * relaxation.powf(*order), *order),
            PowerSum::constant(1.0),
        ),
        MechNetwork::Serial(children) => {
            // 1/G = sum D_i / N_i
            let parts: Vec<_> = children.iter().map(modulus_parts).collect();
            let num = parts.iter().fold(PowerSum::constant(1.0), |acc, (n, _)| acc.mul(n));
            let den = (0..parts.len()).fold(PowerSum::default(), |acc, i| {
                let term = parts
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .fold(parts[i].1.clone(), |t, (_, (n, _))| t.mul(n));
                acc.add(&term)
            });
            (num, den)
        }
        MechNetwork::Parallel(children) => {
            let parts: Vec<_> = children.iter().map(modulus_parts).collect();
            let den = parts.iter().fold(PowerSum::constant(1.0), |acc, (_, d)| acc.mul(d));
            let num = (0..parts.len()).fold(PowerSum::default(), |acc, i| {
                let term = parts
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .fold(parts[i].0.clone(), |t, (_, (_, d))| t.mul(d));
                acc.add(&term)
            });
            (num, den)
        }
    }
}

pub fn network_modulus(net: &MechNetwork) -> Result<TransferFn> {
    net.validate()?;
    let (num, den) = modulus_parts(net);
    Ok(TransferFn::new(num, den)?.reduce_common_power())
}

/// `FluidLike` iff `z / G(z)` tends to a nonzero constant as `z -> 0+`.
pub fn classify_network(net: &MechNetwork) -> Result<BehaviorClass> {
    let g = network_modulus(net)?;
    let (_, p) = g
        .small_z_leading()
        .ok_or_else(|| Error::Domain("network modulus vanishes identically".into()))?;
    // z / G ~ z^(1 - p)
    Ok(if 1.0 - p > EXPONENT_TOL {
        BehaviorClass::SolidLike
    } else {
        BehaviorClass::FluidLike
    })
}

/// Whether a terminal-to-terminal path through spring-like elements exists;
/// spring-pots of order below one count as springs.
pub fn spring_path(net: &MechNetwork) -> bool {
    match net {
        MechNetwork::Spring { .. } => true,
        MechNetwork::Dashpot { .. } => false,
        MechNetwork::Springpot { order, .. } => *order < 1.0,
        MechNetwork::Serial(c) => c.iter().all(spring_path),
        MechNetwork::Parallel(c) => c.iter().any(spring_path),
    }
}

/// Outcome of checking the spring-path criterion on one network.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureCheck {
    pub spring_path: bool,
    pub class: BehaviorClass,
}

impl ConjectureCheck {
    pub fn consistent(&self) -> bool {
        self.spring_path == (self.class == BehaviorClass::SolidLike)
    }
}

pub fn conjecture_report(net: &MechNetwork) -> Result<ConjectureCheck> {
    Ok(ConjectureCheck {
        spring_path: spring_path(net),
        class: classify_network(net)?,
    })
}

/// `spring_path(net) == (classify_network(net) == SolidLike)`.
pub fn check_conjecture(net: &MechNetwork) -> Result<bool> {
    Ok(conjecture_report(net)?.consistent())
}

const BUILTIN_CATALOG: &str = include_str!("../../data/networks.txt");

/// Named networks, one `name = expression` per line; `#` starts a comment.
pub fn parse_catalog(text: &str) -> Result<Vec<(String, MechNetwork)>> {
    let mut out = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, expr) = match line.split_once('=') {
            Some((n, e)) => (n.trim().to_string(), e.trim()),
            None => (line.to_string(), line),
        };
        let net = expr.parse::<MechNetwork>().map_err(|e| match e {
            Error::Parse { position, message } => Error::Parse {
                position,
                message: format!("line {}: {message}", line_no + 1),
            },
            other => other,
        })?;
        out.push((name, net));
    }
    Ok(out)
}

pub fn builtin_catalog() -> Vec<(String, MechNetwork)> {
    parse_catalog(BUILTIN_CATALOG).expect("built-in catalog parses")
}
