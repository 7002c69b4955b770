//! Fringe sweeps over the rotation phase, their CSV/JSON serialization, and
//! closed-form comparison reports.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form;
use crate::detection::{visibility_of, DetectionScheme, SchemeKind};
use crate::error::{Error, Result};
use crate::fock::{make_fock_state, FockBasis, PureState};
use crate::sagnac::{classical_fringe, rotation_phase, ClassicalField, RotationParameters, SPEED_OF_LIGHT};
use crate::sources::{pair_subspace_state, squeezed_state, SqueezedSourceParams, DEFAULT_TAIL_TOLERANCE};

pub const CSV_HEADER: &str = "scheme,r,theta,phi,value,closed_form,abs_error";
pub const DEFAULT_STEPS: usize = 241;

/// What is measured: the classical intensity fringe or one of the quantum
/// detection schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepScheme {
    Classical,
    Detection(SchemeKind),
}

impl SweepScheme {
    pub fn name(self) -> &'static str {
        match self {
            SweepScheme::Classical => "classical",
            SweepScheme::Detection(kind) => kind.name(),
        }
    }

    /// Number of photons the projective schemes post-select on.
    fn projected_photons(self) -> Option<usize> {
        match self {
            SweepScheme::Detection(SchemeKind::P2Projective) => Some(2),
            SweepScheme::Detection(k) if k.is_four_photon() => Some(4),
            _ => None,
        }
    }
}

impl fmt::Display for SweepScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s {
            "classical" => return Ok(SweepScheme::Classical),
            "single" => SchemeKind::SingleCounts,
            "coincidence" => SchemeKind::Coincidence12,
            "g2" => SchemeKind::G2Normalized,
            "p2" => SchemeKind::P2Projective,
            other => other.parse()?,
        };
        Ok(SweepScheme::Detection(kind))
    }
}

impl Serialize for SweepScheme {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for SweepScheme {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Input state fed into port 1 (and port 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    /// `|1,0>`
    Fock10,
    /// `|1,1>`
    Fock11,
    /// Two-mode squeezed vacuum.
    Squeezed,
}

impl InputKind {
    pub fn name(self) -> &'static str {
        match self {
            InputKind::Fock10 => "fock10",
            InputKind::Fock11 => "fock11",
            InputKind::Squeezed => "squeezed",
        }
    }

    /// Default input for a scheme, matching the fringes it is known for.
    pub fn default_for(scheme: SweepScheme) -> Self {
        match scheme {
            SweepScheme::Classical | SweepScheme::Detection(SchemeKind::SingleCounts) => InputKind::Fock10,
            SweepScheme::Detection(SchemeKind::Coincidence12) => InputKind::Fock11,
            SweepScheme::Detection(_) => InputKind::Squeezed,
        }
    }
}

impl fmt::Display for InputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InputKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fock10" => Ok(InputKind::Fock10),
            "fock11" => Ok(InputKind::Fock11),
            "squeezed" => Ok(InputKind::Squeezed),
            other => Err(Error::InvalidConfig(format!(
                "unknown input `{other}` (expected fock10, fock11 or squeezed)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidConfig(format!("unknown format `{other}`"))),
        }
    }
}

/// Sweep over the angular velocity instead of the phase: each grid point is
/// turned into a phase with [`rotation_phase`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationSweep {
    pub radius: f64,
    pub wavelength: f64,
    /// Coil length; zero selects single-loop area mode.
    #[serde(default)]
    pub fiber_length: f64,
    #[serde(default)]
    pub area: Option<f64>,
    pub omega_min: f64,
    pub omega_max: f64,
}

impl RotationSweep {
    fn phase(&self, omega: f64) -> Result<f64> {
        let mut p = RotationParameters::new(self.radius, omega, self.wavelength)
            .with_fiber_length(self.fiber_length)
            .with_light_speed(SPEED_OF_LIGHT);
        if let Some(a) = self.area {
            p = p.with_area(a);
        }
        rotation_phase(&p)
    }
}

/// Missing fields deserialize to the [`Default`], a full-turn classical sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub scheme: SweepScheme,
    /// `None` picks [`InputKind::default_for`] the scheme.
    pub input: Option<InputKind>,
    pub r: f64,
    pub theta: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub steps: usize,
    /// Bound on the discarded tail of the squeezed source.
    pub tail_eps: f64,
    /// Explicit pair cutoff; overrides the automatic choice.
    pub pair_cutoff: Option<usize>,
    /// Power transmittances of the two detector splitters (four-photon schemes).
    pub splitter_t2: Vec<f64>,
    pub rotation: Option<RotationSweep>,
    pub normalize: bool,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self::new(SweepScheme::Classical)
    }
}

impl SweepConfig {
    /// Full-turn phase grid of [`DEFAULT_STEPS`] points with default tolerances.
    pub fn new(scheme: SweepScheme) -> Self {
        Self {
            scheme,
            input: None,
            r: 1.0,
            theta: 0.0,
            phi_min: 0.0,
            phi_max: std::f64::consts::TAU,
            steps: DEFAULT_STEPS,
            tail_eps: DEFAULT_TAIL_TOLERANCE,
            pair_cutoff: None,
            splitter_t2: Vec::new(),
            rotation: None,
            normalize: false,
            format: OutputFormat::Csv,
            out: None,
        }
    }

    pub fn input(&self) -> InputKind {
        self.input.unwrap_or_else(|| InputKind::default_for(self.scheme))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.steps < 2 {
            return bad(format!("need at least 2 grid points, got {}", self.steps));
        }
        if !(self.phi_min.is_finite() && self.phi_max.is_finite()) {
            return bad("phase range must be finite".into());
        }
        if !(self.r >= 0.0 && self.r.is_finite()) || !self.theta.is_finite() {
            return bad(format!(
                "squeezing must be finite with r >= 0, got r = {}, theta = {}",
                self.r, self.theta
            ));
        }
        if !(self.tail_eps > 0.0 && self.tail_eps < 1.0) {
            return bad(format!("tail tolerance must lie in (0, 1), got {}", self.tail_eps));
        }
        let input = self.input();
        let allowed = match self.scheme {
            SweepScheme::Classical => input == InputKind::Fock10,
            SweepScheme::Detection(SchemeKind::SingleCounts) => input != InputKind::Fock11,
            SweepScheme::Detection(SchemeKind::Coincidence12) => input != InputKind::Fock10,
            SweepScheme::Detection(_) => input == InputKind::Squeezed,
        };
        if !allowed {
            return bad(format!("scheme {} does not take input {input}", self.scheme));
        }
        if self.scheme == SweepScheme::Detection(SchemeKind::G2Normalized) && self.r == 0.0 {
            return bad("g2 is undefined without squeezing (r = 0)".into());
        }
        let four_photon = matches!(self.scheme, SweepScheme::Detection(k) if k.is_four_photon());
        if !self.splitter_t2.is_empty() {
            if !four_photon {
                return bad(format!("scheme {} takes no detector splitters", self.scheme));
            }
            if self.splitter_t2.len() > 2 {
                return bad(format!(
                    "at most two splitter transmittances, got {}",
                    self.splitter_t2.len()
                ));
            }
            if let Some(t) = self.splitter_t2.iter().find(|t| !(**t >= 0.0 && **t <= 1.0)) {
                return bad(format!("splitter transmittance must lie in [0, 1], got {t}"));
            }
        }
        if let (Some(needed), Some(n)) = (self.scheme.projected_photons(), self.pair_cutoff) {
            if 2 * n < needed {
                return bad(format!(
                    "{} needs a pair cutoff of at least {}, got {n}",
                    self.scheme,
                    needed / 2
                ));
            }
        }
        if let Some(rot) = &self.rotation {
            let ok = [rot.radius, rot.wavelength, rot.fiber_length, rot.omega_min, rot.omega_max]
                .iter()
                .all(|v| v.is_finite());
            if !ok || !(rot.radius > 0.0 && rot.wavelength > 0.0 && rot.fiber_length >= 0.0) {
                return bad("rotation sweep needs positive radius and wavelength".into());
            }
        }
        Ok(())
    }

    /// Transmittances of the two detector splitters, balanced where unset.
    pub fn transmittances(&self) -> [f64; 2] {
        let t1 = self.splitter_t2.first().copied().unwrap_or(0.5);
        let t2 = self.splitter_t2.get(1).copied().unwrap_or(t1);
        [t1, t2]
    }

    fn grid_value(lo: f64, hi: f64, steps: usize, k: usize) -> f64 {
        if k + 1 == steps {
            hi
        } else {
            lo + (hi - lo) * k as f64 / (steps - 1) as f64
        }
    }

    /// The phase grid, ascending in the grid index.
    pub fn phases(&self) -> Result<Vec<f64>> {
        (0..self.steps)
            .map(|k| match &self.rotation {
                Some(rot) => rot.phase(Self::grid_value(rot.omega_min, rot.omega_max, self.steps, k)),
                None => Ok(Self::grid_value(self.phi_min, self.phi_max, self.steps, k)),
            })
            .collect()
    }
}

/// The configuration as actually run: the input and truncation that were
/// chosen, echoed alongside the points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    #[serde(flatten)]
    pub config: SweepConfig,
    pub input_used: InputKind,
    /// Pair cutoff of the squeezed source, if there is one.
    pub n_cut: Option<usize>,
    /// Probability discarded by that cutoff.
    pub truncation_tail: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub scheme: SweepScheme,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
    pub closed_form: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FringeDataset {
    pub config: ResolvedConfig,
    pub points: Vec<SweepPoint>,
}

struct Prepared {
    input: Option<PureState>,
    detection: Option<DetectionScheme>,
    n_cut: Option<usize>,
    tail: Option<f64>,
}

fn prepare(config: &SweepConfig) -> Result<Prepared> {
    let SweepScheme::Detection(kind) = config.scheme else {
        return Ok(Prepared {
            input: None,
            detection: None,
            n_cut: None,
            tail: None,
        });
    };
    let detection = if kind.is_four_photon() {
        DetectionScheme::four_photon(kind, config.transmittances())?
    } else {
        DetectionScheme::new(kind)
    };
    let (input, n_cut, tail) = match config.input() {
        InputKind::Fock10 => (make_fock_state(FockBasis::new(2, 1)?, &[1, 0])?, None, None),
        InputKind::Fock11 => (make_fock_state(FockBasis::new(2, 2)?, &[1, 1])?, None, None),
        InputKind::Squeezed => match config.scheme.projected_photons() {
            Some(photons) => {
                let pairs = config.pair_cutoff.unwrap_or(photons / 2);
                let state = pair_subspace_state(config.r, config.theta, pairs, 2)?;
                let tail = crate::sources::truncation_tail(config.r, pairs);
                (state, Some(pairs), Some(tail))
            }
            None => {
                let params = match config.pair_cutoff {
                    Some(n) => SqueezedSourceParams::new(config.r, config.theta, n, config.tail_eps)?,
                    None => SqueezedSourceParams::auto(config.r, config.theta, config.tail_eps)?,
                };
                let state = squeezed_state(&params, 2)?;
                (state, Some(params.pair_cutoff), Some(params.tail()))
            }
        },
    };
    Ok(Prepared {
        input: Some(input),
        detection: Some(detection),
        n_cut,
        tail,
    })
}

fn closed_form_value(config: &SweepConfig, phi: f64) -> f64 {
    let (r, [t1, t2]) = (config.r, config.transmittances());
    let squeezed = config.input() == InputKind::Squeezed;
    match config.scheme {
        SweepScheme::Classical => closed_form::classical_port1(phi),
        SweepScheme::Detection(kind) => match kind {
            SchemeKind::SingleCounts if squeezed => closed_form::squeezed_single_counts(r),
            SchemeKind::SingleCounts => closed_form::single_photon_port1(phi),
            SchemeKind::Coincidence12 if squeezed => closed_form::squeezed_coincidence(r, phi),
            SchemeKind::Coincidence12 => closed_form::two_photon_coincidence(phi),
            SchemeKind::G2Normalized => closed_form::g2(r, phi),
            SchemeKind::P2Projective => closed_form::p2(r, phi),
            SchemeKind::P4TwoByTwo => closed_form::p4_2x2(r, phi, t1, t2),
            SchemeKind::P4ThreeByOne => closed_form::p4_3x1(r, phi, t1, t2),
        },
    }
}

/// Evaluates the scheme on every grid point, in parallel; points come back in
/// grid order and do not depend on the number of threads.
pub fn run_sweep(config: &SweepConfig) -> Result<FringeDataset> {
    config.validate()?;
    let phases = config.phases()?;
    let prepared = prepare(config)?;
    let field = ClassicalField::new(Complex64::new(1.0, 0.0), 0.0);

    let raw: Vec<(f64, f64, f64)> = phases
        .par_iter()
        .map(|&phi| {
            let value = match (&prepared.detection, &prepared.input) {
                (Some(scheme), Some(input)) => scheme.evaluate(input, phi)?,
                _ => classical_fringe(&field, phi).0,
            };
            Ok((phi, value, closed_form_value(config, phi)))
        })
        .collect::<Result<_>>()?;

    let (value_scale, closed_scale) = if config.normalize {
        let peak = |f: fn(&(f64, f64, f64)) -> f64| raw.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        let (v, c) = (peak(|p| p.1), peak(|p| p.2));
        if !(v > 0.0 && c > 0.0) {
            return Err(Error::Domain(
                "cannot normalize a fringe whose maximum is not positive".into(),
            ));
        }
        (v, c)
    } else {
        (1.0, 1.0)
    };

    let points = raw
        .into_iter()
        .map(|(phi, value, closed)| {
            let (value, closed_form) = (value / value_scale, closed / closed_scale);
            SweepPoint {
                scheme: config.scheme,
                r: config.r,
                theta: config.theta,
                phi,
                value,
                closed_form,
                abs_error: (value - closed_form).abs(),
            }
        })
        .collect();

    let mut echo = config.clone();
    if config.rotation.is_some() {
        echo.phi_min = phases[0];
        echo.phi_max = phases[phases.len() - 1];
    }
    Ok(FringeDataset {
        config: ResolvedConfig {
            config: echo,
            input_used: config.input(),
            n_cut: prepared.n_cut,
            truncation_tail: prepared.tail,
        },
        points,
    })
}

/// Seventeen significant digits: enough to read every `f64` back exactly.
fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(points: &[SweepPoint], mut w: W) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            p.scheme,
            sci(p.r),
            sci(p.theta),
            sci(p.phi),
            sci(p.value),
            sci(p.closed_form),
            sci(p.abs_error)
        )?;
    }
    Ok(())
}

pub fn to_csv_string(points: &[SweepPoint]) -> String {
    let mut buf = Vec::new();
    write_csv(points, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

/// Inverse of [`write_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<SweepPoint>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(Error::InvalidConfig(format!(
                "expected CSV header `{CSV_HEADER}`, found {other:?}"
            )))
        }
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(Error::InvalidConfig(format!(
                    "CSV row {} has {} fields, expected 7",
                    i + 1,
                    fields.len()
                )));
            }
            let num = |k: usize| {
                fields[k].parse::<f64>().map_err(|e| {
                    Error::InvalidConfig(format!("CSV row {} field {}: {e}", i + 1, k + 1))
                })
            };
            Ok(SweepPoint {
                scheme: fields[0].parse()?,
                r: num(1)?,
                theta: num(2)?,
                phi: num(3)?,
                value: num(4)?,
                closed_form: num(5)?,
                abs_error: num(6)?,
            })
        })
        .collect()
}

pub fn to_json_string(dataset: &FringeDataset) -> Result<String> {
    Ok(serde_json::to_string_pretty(dataset)?)
}

/// Writes the dataset to `path`, or to stdout when `path` is `None`.
pub fn emit(dataset: &FringeDataset, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    let body = match format {
        OutputFormat::Csv => to_csv_string(&dataset.points),
        OutputFormat::Json => to_json_string(dataset)? + "\n",
    };
    match path {
        Some(path) => {
            let io_err = |source| Error::Io {
                path: path.to_path_buf(),
                source,
            };
            let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
            w.write_all(body.as_bytes()).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(body.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

/// Summary statistics of a dataset against its closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub scheme: SweepScheme,
    pub points: usize,
    pub max_abs_error: f64,
    pub mean_abs_error: f64,
    /// `None` when max + min of the values vanishes.
    pub visibility: Option<f64>,
    /// `None` when no autocorrelation peak is found.
    pub period: Option<f64>,
    pub tolerance: Option<f64>,
    pub passed: bool,
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.12}"));
        writeln!(f, "scheme          {}", self.scheme)?;
        writeln!(f, "points          {}", self.points)?;
        writeln!(f, "max abs error   {:.3e}", self.max_abs_error)?;
        writeln!(f, "mean abs error  {:.3e}", self.mean_abs_error)?;
        writeln!(f, "visibility      {}", opt(self.visibility))?;
        writeln!(f, "period          {}", opt(self.period))?;
        match self.tolerance {
            Some(tol) => write!(
                f,
                "tolerance       {tol:.3e} {}",
                if self.passed { "PASS" } else { "FAIL" }
            ),
            None => write!(f, "tolerance       none"),
        }
    }
}

/// Period of a uniformly sampled fringe: the first local maximum of the
/// lagged autocorrelation, taken as the Pearson correlation between the value
/// column and its shifted copy (exactly 1 at a true period, whatever the
/// window). A fringe whose window holds a single period has no interior peak;
/// it is reported with the window length when its two ends agree.
pub fn fringe_period(phis: &[f64], values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n < 4 || phis.len() != n {
        return None;
    }
    let step = (phis[n - 1] - phis[0]) / (n - 1) as f64;
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let range = hi - lo;
    if !(range > 1e-12 * hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE)) {
        return None;
    }
    let correlation = |lag: usize| {
        let (a, b) = (&values[..n - lag], &values[lag..]);
        let len = a.len() as f64;
        let (ma, mb) = (a.iter().sum::<f64>() / len, b.iter().sum::<f64>() / len);
        let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
        for (x, y) in a.iter().zip(b) {
            ab += (x - ma) * (y - mb);
            aa += (x - ma) * (x - ma);
            bb += (y - mb) * (y - mb);
        }
        let d = (aa * bb).sqrt();
        if d > 0.0 {
            ab / d
        } else {
            -1.0
        }
    };
    let acf: Vec<f64> = (0..n - 2).map(correlation).collect();
    let peak = (1..acf.len() - 1)
        .find(|&lag| acf[lag] > 0.5 && acf[lag] >= acf[lag - 1] && acf[lag] >= acf[lag + 1]);
    match peak {
        Some(lag) => Some(lag as f64 * step),
        None if (values[0] - values[n - 1]).abs() <= 1e-9 * range => Some((n - 1) as f64 * step),
        None => None,
    }
}

pub fn compare_report(dataset: &FringeDataset, tolerance: Option<f64>) -> Result<CompareReport> {
    let pts = &dataset.points;
    if pts.is_empty() {
        return Err(Error::Domain("cannot summarize an empty dataset".into()));
    }
    let max_abs_error = pts.iter().map(|p| p.abs_error).fold(0.0, f64::max);
    let mean_abs_error = pts.iter().map(|p| p.abs_error).sum::<f64>() / pts.len() as f64;
    let values: Vec<f64> = pts.iter().map(|p| p.value).collect();
    let phis: Vec<f64> = pts.iter().map(|p| p.phi).collect();
    let passed = match tolerance {
        Some(tol) => max_abs_error <= tol,
        None => true,
    };
    Ok(CompareReport {
        scheme: dataset.config.config.scheme,
        points: pts.len(),
        max_abs_error,
        mean_abs_error,
        visibility: visibility_of(values.iter().copied()).ok(),
        period: fringe_period(&phis, &values),
        tolerance,
        passed,
    })
}
