use std::fmt;
use std::str::FromStr;

use crate::hyperfine::{self, HyperfineConfig, NormalizedProbabilities, PhysicalConstants};

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Vary time at a fixed field.
    Time,
    /// Vary the field at a fixed time.
    Field,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    Linear,
    Log,
}

impl FromStr for SweepMode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "time" => Ok(Self::Time),
            "field" => Ok(Self::Field),
            other => Err(CliError::InvalidSpec(format!("unknown mode {other:?} (expected time or field)"))),
        }
    }
}

impl FromStr for GridScale {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "linear" => Ok(Self::Linear),
            "log" => Ok(Self::Log),
            other => Err(CliError::InvalidSpec(format!("unknown scale {other:?} (expected linear or log)"))),
        }
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Time => "time",
            Self::Field => "field",
        })
    }
}

/// A one-dimensional sampling grid over time or field.
///
/// `fixed_value` is the field in T for time sweeps and the time in s for
/// field sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub mode: SweepMode,
    pub fixed_value: f64,
    pub start: f64,
    pub stop: f64,
    pub samples: usize,
    pub scale: GridScale,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let invalid = |msg: &str| Err(CliError::InvalidSpec(msg.to_owned()));
        if ![self.fixed_value, self.start, self.stop].iter().all(|x| x.is_finite()) {
            return invalid("sweep bounds and fixed value must be finite");
        }
        if self.start >= self.stop {
            return invalid("start must be smaller than stop");
        }
        if self.samples < 2 {
            return invalid("at least two samples are required");
        }
        if self.scale == GridScale::Log && self.start <= 0.0 {
            return invalid("log scale requires a positive start");
        }
        match self.mode {
            SweepMode::Time if self.fixed_value < 0.0 => invalid("field must be non-negative"),
            SweepMode::Field if self.start < 0.0 => invalid("field must be non-negative"),
            _ => Ok(()),
        }
    }

    /// Abscissa of sample `i`.
    pub fn point(&self, i: usize) -> f64 {
        if i == 0 {
            return self.start;
        }
        if i == self.samples - 1 {
            return self.stop;
        }
        let last = (self.samples - 1) as f64;
        let frac = i as f64 / last;
        match self.scale {
            GridScale::Linear => self.start + (self.stop - self.start) * frac,
            GridScale::Log => {
                let (a, b) = (self.start.ln(), self.stop.ln());
                (a + (b - a) * frac).exp()
            }
        }
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples).map(|i| self.point(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub p_exact: f64,
    pub p_improved: f64,
    pub p_traditional: f64,
    pub d_improved: f64,
    pub d_traditional: f64,
}

impl SweepRow {
    pub fn new(x: f64, p: NormalizedProbabilities) -> Self {
        Self {
            x,
            p_exact: p.exact,
            p_improved: p.improved,
            p_traditional: p.traditional,
            d_improved: (p.improved - p.exact).abs(),
            d_traditional: (p.traditional - p.exact).abs(),
        }
    }
}

fn evaluate(spec: &SweepSpec, constants: &PhysicalConstants, x: f64) -> Result<NormalizedProbabilities, CliError> {
    let (b_field, t) = match spec.mode {
        SweepMode::Time => (spec.fixed_value, x),
        SweepMode::Field => (x, spec.fixed_value),
    };
    let cfg = HyperfineConfig::new(*constants, b_field)?;
    Ok(hyperfine::normalized_probabilities(&cfg, t))
}

/// Evaluates the three normalized curves on every grid point.
///
/// Only the constants of `cfg` are used; the field comes from the spec
/// (fixed for time sweeps, swept for field sweeps).
pub fn run_sweep(spec: &SweepSpec, cfg: &HyperfineConfig) -> Result<Vec<SweepRow>, CliError> {
    spec.validate()?;
    spec.grid()
        .map(|x| evaluate(spec, &cfg.constants, x).map(|p| SweepRow::new(x, p)))
        .collect()
}

/// First grid abscissae where each curve deviates from the exact one by more
/// than the threshold. `f64::INFINITY` when it never does.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceReport {
    pub t_traditional: f64,
    pub t_improved: f64,
}

pub fn divergence_report(spec: &SweepSpec, cfg: &HyperfineConfig, threshold: f64) -> Result<DivergenceReport, CliError> {
    spec.validate()?;
    if spec.mode != SweepMode::Time {
        return Err(CliError::InvalidSpec("divergence report needs a time sweep".into()));
    }
    if !(threshold > 0.0) || !threshold.is_finite() {
        return Err(CliError::InvalidSpec("threshold must be positive and finite".into()));
    }
    let mut report = DivergenceReport { t_traditional: f64::INFINITY, t_improved: f64::INFINITY };
    for x in spec.grid() {
        let row = SweepRow::new(x, evaluate(spec, &cfg.constants, x)?);
        if report.t_traditional.is_infinite() && row.d_traditional > threshold {
            report.t_traditional = x;
        }
        if report.t_improved.is_infinite() && row.d_improved > threshold {
            report.t_improved = x;
        }
        if report.t_traditional.is_finite() && report.t_improved.is_finite() {
            break;
        }
    }
    Ok(report)
}

/// Named plotting windows centred where the figure panels are described.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    TimeA,
    TimeB,
    TimeC,
    TimeD,
    Field1,
    Field2,
    Field3,
    Field4,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::TimeA,
        Preset::TimeB,
        Preset::TimeC,
        Preset::TimeD,
        Preset::Field1,
        Preset::Field2,
        Preset::Field3,
        Preset::Field4,
    ];

    pub const DEFAULT_SAMPLES: usize = 2001;

    /// Field used by the time windows, T.
    pub const TIME_WINDOW_FIELD: f64 = 1e-3;

    /// Time used by the field windows, s.
    pub const FIELD_WINDOW_TIME: f64 = 1.0;

    pub fn name(self) -> &'static str {
        match self {
            Preset::TimeA => "time-a",
            Preset::TimeB => "time-b",
            Preset::TimeC => "time-c",
            Preset::TimeD => "time-d",
            Preset::Field1 => "field-1",
            Preset::Field2 => "field-2",
            Preset::Field3 => "field-3",
            Preset::Field4 => "field-4",
        }
    }

    pub fn mode(self) -> SweepMode {
        match self {
            Preset::TimeA | Preset::TimeB | Preset::TimeC | Preset::TimeD => SweepMode::Time,
            _ => SweepMode::Field,
        }
    }

    /// Window centre, s or T.
    pub fn center(self) -> f64 {
        match self {
            Preset::TimeA => 1e-7,
            Preset::TimeB => 1.0,
            Preset::TimeC => 6.0,
            Preset::TimeD => 27.7,
            Preset::Field1 => 1e-4,
            Preset::Field2 => 1.29e-3,
            Preset::Field3 => 1.21e-2,
            Preset::Field4 => 0.036,
        }
    }

    /// Window of three periods of the exact curve around the centre.
    pub fn spec(self, constants: &PhysicalConstants) -> SweepSpec {
        let center = self.center();
        let period = match self.mode() {
            SweepMode::Time => {
                let cfg = HyperfineConfig::new(*constants, Self::TIME_WINDOW_FIELD).expect("valid preset field");
                std::f64::consts::PI / hyperfine::angular_rates(&cfg).exact
            }
            SweepMode::Field => {
                // local period of sin²(√(a0 + a2 B²)) in B
                let c = hyperfine::field_sweep_coefficients(constants, Self::FIELD_WINDOW_TIME);
                let [a0, a2] = c.exact_radicand;
                let slope = a2 * center / (a0 + a2 * center * center).sqrt();
                std::f64::consts::PI / slope
            }
        };
        let fixed_value = match self.mode() {
            SweepMode::Time => Self::TIME_WINDOW_FIELD,
            SweepMode::Field => Self::FIELD_WINDOW_TIME,
        };
        SweepSpec {
            mode: self.mode(),
            fixed_value,
            start: center - 1.5 * period,
            stop: center + 1.5 * period,
            samples: Self::DEFAULT_SAMPLES,
            scale: GridScale::Linear,
        }
    }
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| CliError::InvalidSpec(format!("unknown preset {s:?}")))
    }
}
