//! Declarative parameter sweeps and the figure presets.
//!
//! A run spec is a flat `key = value` document with `#` comments:
//!
//! ```text
//! quantity = shift
//! model = two-mirror
//! orientation = perp
//! d = 0.5
//! z0 = 0.3
//! L = 1.2
//! sweep = a
//! start = 0.1
//! stop = 12
//! count = 120
//! spacing = linear
//! ```
//!
//! `z0 = centered` places the pair midway between the plates at every point.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{validate, AtomState, GeometryConfig, Orientation};
use crate::observables::{evaluate, normalized_value, BoundaryModel, Observable, Quantity};

pub const GENERATOR: &str = concat!("resonance-core ", env!("CARGO_PKG_VERSION"));
pub const CSV_COLUMNS: &str = "swept_param,swept_value,reduced_value,normalized_value,tail_bound,converged";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    D,
    Z0,
    L,
    A,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::D => "d",
            Param::Z0 => "z0",
            Param::L => "L",
            Param::A => "a",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "d" => Ok(Param::D),
            "z0" => Ok(Param::Z0),
            "L" | "l" => Ok(Param::L),
            "a" => Ok(Param::A),
            other => Err(Error::RunSpec(format!("unknown parameter `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Value(f64),
    /// z0 = (L − d)/2 (perpendicular) or L/2 (parallel).
    Centered,
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Value(v) => write!(f, "{v}"),
            ParamValue::Centered => f.write_str("centered"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub param: Param,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl SweepAxis {
    pub fn grid(&self) -> Vec<f64> {
        let n = self.count;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == n - 1 {
                    return self.stop;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * t,
                    Spacing::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub observable: Observable,
    pub orientation: Orientation,
    pub fixed: BTreeMap<Param, ParamValue>,
    pub sweep: SweepAxis,
    pub theta: f64,
    pub lambda_c: f64,
    pub tol: f64,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub swept_value: f64,
    pub reduced_value: f64,
    pub normalized_value: f64,
    pub tail_bound: f64,
    pub converged: bool,
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::RunSpec(format!("`{key}`: cannot parse `{v}` as a number")))
}

impl RunSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::RunSpec(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if kv.insert(k.clone(), v).is_some() {
                return Err(Error::RunSpec(format!("line {}: duplicate key `{k}`", lineno + 1)));
            }
        }
        let mut take = |k: &str| kv.remove(k);

        let quantity: Quantity = take("quantity")
            .ok_or_else(|| Error::RunSpec("missing `quantity`".into()))?
            .parse()?;
        let model: BoundaryModel = take("model").as_deref().unwrap_or("two-mirror").parse()?;
        let orientation: Orientation = take("orientation").as_deref().unwrap_or("perp").parse()?;
        let param: Param = take("sweep")
            .ok_or_else(|| Error::RunSpec("missing `sweep`".into()))?
            .parse()?;
        let mut need = |k: &str| {
            take(k).ok_or_else(|| Error::RunSpec(format!("missing `{k}`")))
        };
        let start = parse_f64("start", &need("start")?)?;
        let stop = parse_f64("stop", &need("stop")?)?;
        let count_s = need("count")?;
        let count = count_s
            .parse::<usize>()
            .map_err(|_| Error::RunSpec(format!("`count`: cannot parse `{count_s}`")))?;
        let spacing = match take("spacing").as_deref().unwrap_or("linear") {
            "linear" => Spacing::Linear,
            "log" => Spacing::Log,
            other => return Err(Error::RunSpec(format!("unknown spacing `{other}`"))),
        };

        let mut fixed = BTreeMap::new();
        for p in [Param::D, Param::Z0, Param::L, Param::A] {
            let Some(v) = take(p.name()) else { continue };
            if p == param {
                return Err(Error::RunSpec(format!("`{p}` is both swept and fixed")));
            }
            let value = if p == Param::Z0 && v == "centered" {
                ParamValue::Centered
            } else {
                ParamValue::Value(parse_f64(p.name(), &v)?)
            };
            fixed.insert(p, value);
        }
        let theta = match take("theta") {
            Some(v) => parse_f64("theta", &v)?,
            None => 3.0 * PI / 4.0,
        };
        let lambda_c = match take("lambda") {
            Some(v) => parse_f64("lambda", &v)?,
            None => 1.0,
        };
        let tol = match take("tol") {
            Some(v) => parse_f64("tol", &v)?,
            None => 1e-10,
        };
        let output = take("out").map(PathBuf::from);
        if let Some(k) = kv.keys().next() {
            return Err(Error::RunSpec(format!("unknown key `{k}`")));
        }

        let spec = RunSpec {
            observable: Observable::new(quantity, model)?,
            orientation,
            fixed,
            sweep: SweepAxis {
                param,
                start,
                stop,
                count,
                spacing,
            },
            theta,
            lambda_c,
            tol,
            output,
        };
        spec.check()?;
        Ok(spec)
    }

    /// Structural checks plus validation of every grid point.
    pub fn check(&self) -> Result<()> {
        let s = &self.sweep;
        if s.count < 2 {
            return Err(Error::RunSpec(format!("count must be >= 2, got {}", s.count)));
        }
        if !s.start.is_finite() || !s.stop.is_finite() || s.start >= s.stop {
            return Err(Error::RunSpec(format!(
                "sweep range must be finite with start < stop, got [{}, {}]",
                s.start, s.stop
            )));
        }
        if s.spacing == Spacing::Log && s.start <= 0.0 {
            return Err(Error::RunSpec("log spacing needs start > 0".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::RunSpec(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.sweep.param == Param::Z0 && self.fixed.contains_key(&Param::Z0) {
            return Err(Error::RunSpec("`z0` is both swept and fixed".into()));
        }
        self.state()?;
        for x in s.grid() {
            let g = self.geometry_at(x).map_err(|e| self.point_error(x, e))?;
            self.validate_point(&g).map_err(|e| self.point_error(x, e))?;
        }
        Ok(())
    }

    fn point_error(&self, value: f64, source: Error) -> Error {
        Error::SweepPoint {
            param: self.sweep.param.name().to_string(),
            value,
            source: Box::new(source),
        }
    }

    pub fn state(&self) -> Result<AtomState> {
        AtomState::new(self.theta, self.lambda_c)
    }

    fn fixed_value(&self, p: Param, default: f64) -> Option<f64> {
        match self.fixed.get(&p) {
            Some(ParamValue::Value(v)) => Some(*v),
            Some(ParamValue::Centered) => None,
            None => Some(default),
        }
    }

    /// Geometry at one grid point. Missing z0 or L default to ∞ and a to 0.
    pub fn geometry_at(&self, x: f64) -> Result<GeometryConfig> {
        let pick = |p: Param, default: f64| {
            if self.sweep.param == p {
                Some(x)
            } else {
                self.fixed_value(p, default)
            }
        };
        let d = pick(Param::D, f64::NAN)
            .filter(|d| !d.is_nan())
            .ok_or_else(|| Error::RunSpec("missing `d`".into()))?;
        let l = pick(Param::L, f64::INFINITY).unwrap_or(f64::INFINITY);
        let a = pick(Param::A, 0.0).unwrap_or(0.0);
        let z0 = match pick(Param::Z0, f64::INFINITY) {
            Some(z0) => z0,
            None => match self.orientation {
                Orientation::Perpendicular => (l - d) / 2.0,
                Orientation::Parallel => l / 2.0,
            },
        };
        Ok(GeometryConfig::new(self.orientation, d, z0, l, a))
    }

    fn validate_point(&self, g: &GeometryConfig) -> Result<()> {
        match self.observable.model() {
            BoundaryModel::TwoMirror | BoundaryModel::LowAcceleration => {
                let v = validate(*g)?;
                if !v.is_cavity() {
                    return Err(Error::RunSpec("this model needs finite z0 and L".into()));
                }
            }
            BoundaryModel::SingleMirror => {
                validate(GeometryConfig::single_mirror(g.orientation, g.d_r, g.z0_r, g.a_r))?;
            }
            BoundaryModel::FreeSpace => {
                validate(GeometryConfig::free_space(g.orientation, g.d_r, g.a_r))?;
            }
        }
        Ok(())
    }

    /// Normalized text form; its hash identifies the CSV contents.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let o = &self.observable;
        let _ = writeln!(s, "quantity = {}", o.quantity());
        let _ = writeln!(s, "model = {}", o.model());
        let _ = writeln!(s, "orientation = {}", self.orientation);
        for (p, v) in &self.fixed {
            let _ = writeln!(s, "{p} = {v}");
        }
        let a = &self.sweep;
        let _ = writeln!(s, "sweep = {}", a.param);
        let _ = writeln!(s, "start = {}", a.start);
        let _ = writeln!(s, "stop = {}", a.stop);
        let _ = writeln!(s, "count = {}", a.count);
        let _ = writeln!(s, "spacing = {}", a.spacing);
        let _ = writeln!(s, "theta = {}", self.theta);
        let _ = writeln!(s, "lambda = {}", self.lambda_c);
        let _ = writeln!(s, "tol = {}", self.tol);
        s
    }

    pub fn input_hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

/// Evaluates every grid point (in parallel) and returns rows in grid order.
/// The first failing point, in grid order, is reported.
pub fn run_sweep(spec: &RunSpec) -> Result<Vec<SweepRow>> {
    spec.check()?;
    let state = spec.state()?;
    let grid = spec.sweep.grid();
    let results: Vec<Result<SweepRow>> = grid
        .par_iter()
        .map(|&x| {
            let g = spec.geometry_at(x)?;
            let v = evaluate(spec.observable, &g, spec.tol)?;
            Ok(SweepRow {
                swept_value: x,
                reduced_value: v.reduced_value,
                normalized_value: normalized_value(&v, &state),
                tail_bound: v.tail_bound,
                converged: v.tail_bound <= spec.tol,
            })
        })
        .collect();
    results
        .into_iter()
        .zip(grid)
        .map(|(r, x)| r.map_err(|e| spec.point_error(x, e)))
        .collect()
}

pub fn write_csv(spec: &RunSpec, rows: &[SweepRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_COLUMNS}")?;
    writeln!(out, "# generator={GENERATOR} input_sha256={}", spec.input_hash())?;
    let p = spec.sweep.param.name();
    for r in rows {
        writeln!(
            out,
            "{p},{:e},{:e},{:e},{:e},{}",
            r.swept_value, r.reduced_value, r.normalized_value, r.tail_bound, r.converged
        )?;
    }
    Ok(())
}

/// Runs the sweep and writes the CSV to `path` (or the spec's own output).
pub fn run_to_file(spec: &RunSpec, path: Option<&Path>) -> Result<PathBuf> {
    let path = path
        .map(Path::to_path_buf)
        .or_else(|| spec.output.clone())
        .ok_or_else(|| Error::RunSpec("no output path".into()))?;
    let rows = run_sweep(spec)?;
    let mut buf = Vec::new();
    write_csv(spec, &rows, &mut buf)?;
    std::fs::write(&path, buf)?;
    Ok(path)
}

pub const FIGURES: [&str; 5] = ["fig3", "fig4", "fig5", "fig6", "fig7"];

struct Preset {
    file: String,
    quantity: Quantity,
    orientation: Orientation,
    fixed: Vec<(Param, ParamValue)>,
    axis: SweepAxis,
}

fn linear(param: Param, start: f64, stop: f64, count: usize) -> SweepAxis {
    SweepAxis {
        param,
        start,
        stop,
        count,
        spacing: Spacing::Linear,
    }
}

/// Interior grid zmax·i/(count+1), i = 1..count, symmetric under z → zmax − z.
fn interior(param: Param, zmax: f64, count: usize) -> SweepAxis {
    let h = zmax / (count + 1) as f64;
    linear(param, h, zmax - h, count)
}

fn tag(o: Orientation) -> &'static str {
    o.short_name()
}

fn presets(name: &str) -> Result<Vec<Preset>> {
    use ParamValue::{Centered, Value};
    use Param::*;
    const BOTH: [Orientation; 2] = [Orientation::Perpendicular, Orientation::Parallel];
    let l = 1.2;
    let mut out = Vec::new();
    match name {
        "fig3" => {
            for o in BOTH {
                out.push(Preset {
                    file: format!("fig3_{}.csv", tag(o)),
                    quantity: Quantity::Shift,
                    orientation: o,
                    fixed: vec![(D, Value(0.5)), (Z0, Value(0.3)), (L, Value(l))],
                    axis: linear(A, 0.1, 12.0, 120),
                });
            }
        }
        "fig4" | "fig6" => {
            let (quantity, orientations): (_, &[Orientation]) = if name == "fig4" {
                (Quantity::Shift, &BOTH)
            } else {
                (Quantity::Rate, &BOTH[..1])
            };
            for &o in orientations {
                for d in [0.3, 0.5, 0.7] {
                    let zmax = match o {
                        Orientation::Perpendicular => l - d,
                        Orientation::Parallel => l,
                    };
                    out.push(Preset {
                        file: format!("{name}_{}_d{d}.csv", tag(o)),
                        quantity,
                        orientation: o,
                        fixed: vec![(D, Value(d)), (L, Value(l)), (A, Value(4.0))],
                        axis: interior(Z0, zmax, 99),
                    });
                }
            }
        }
        "fig5" => {
            for o in BOTH {
                out.push(Preset {
                    file: format!("fig5_{}.csv", tag(o)),
                    quantity: Quantity::Shift,
                    orientation: o,
                    fixed: vec![(Z0, Centered), (L, Value(l)), (A, Value(4.0))],
                    axis: linear(D, 0.1, l - 2.0 * 0.05, 101),
                });
            }
        }
        "fig7" => {
            let d = 0.5;
            for o in BOTH {
                for z0 in [0.3, 0.6] {
                    let lmin = match o {
                        Orientation::Perpendicular => (z0 + d) * 1.05,
                        Orientation::Parallel => z0 * 1.05,
                    };
                    out.push(Preset {
                        file: format!("fig7_{}_z{z0}.csv", tag(o)),
                        quantity: Quantity::Rate,
                        orientation: o,
                        fixed: vec![(D, Value(d)), (Z0, Value(z0)), (A, Value(4.0))],
                        axis: linear(L, lmin, 10.0, 100),
                    });
                }
            }
        }
        other => {
            return Err(Error::RunSpec(format!(
                "unknown figure `{other}` (expected one of {})",
                FIGURES.join(", ")
            )))
        }
    }
    Ok(out)
}

/// Run specs for one figure, one per plotted curve, with output paths
/// inside `dir`. All presets use θ = 3π/4.
pub fn figure_preset(name: &str, dir: &Path) -> Result<Vec<RunSpec>> {
    presets(name)?
        .into_iter()
        .map(|p| {
            let spec = RunSpec {
                observable: Observable::new(p.quantity, BoundaryModel::TwoMirror)?,
                orientation: p.orientation,
                fixed: p.fixed.into_iter().collect(),
                sweep: p.axis,
                theta: 3.0 * PI / 4.0,
                lambda_c: 1.0,
                tol: 1e-10,
                output: Some(dir.join(p.file)),
            };
            spec.check()?;
            Ok(spec)
        })
        .collect()
}
