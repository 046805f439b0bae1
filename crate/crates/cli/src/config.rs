//! Run configuration: command-line flags, JSON config files and the fully
//! resolved form echoed into every output.

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use vortexprop::entanglement::NEGATIVITY_TAIL_TOLERANCE;
use vortexprop::evolution::DEFAULT_COUPLING;
use vortexprop::phase_space::{Axis, AxisRange, Grid2D, SliceSpec, WignerMethod};
use vortexprop::{
    BsVortexParams, CutoffPolicy, Family, FockCutoff, NegativityMethod, SqueezeParams, SweepPath,
    WaveguideParams,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    #[value(name = "ps_vortex")]
    PsVortex,
    #[value(name = "bs_vortex")]
    BsVortex,
    Tmsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PathArg {
    #[value(name = "closed_form")]
    ClosedForm,
    Unitary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodArg {
    #[value(name = "displaced_parity")]
    DisplacedParity,
    #[value(name = "closed_form")]
    ClosedForm,
    Transport,
    Schmidt,
    Eigensolve,
    Both,
}

impl MethodArg {
    fn name(&self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_owned())
            .unwrap_or_default()
    }
}

/// Every knob of a run. All fields are optional here; missing ones take the
/// documented defaults during [`RunConfig::resolve`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// JSON file with the same fields; flags override it.
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// Two-mode squeeze amplitude.
    #[arg(long)]
    pub r: Option<f64>,
    /// Squeeze phase.
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Vortex order.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long = "rx", alias = "r-x")]
    pub r_x: Option<f64>,
    #[arg(long = "ry", alias = "r-y")]
    pub r_y: Option<f64>,
    #[arg(long = "etax", alias = "eta-x", allow_negative_numbers = true)]
    pub eta_x: Option<f64>,
    #[arg(long = "etay", alias = "eta-y", allow_negative_numbers = true)]
    pub eta_y: Option<f64>,

    /// Coupling strength C in 1/s.
    #[arg(long = "coupling", alias = "C")]
    #[serde(alias = "C")]
    pub coupling: Option<f64>,
    /// Propagation time in s.
    #[arg(long)]
    pub t: Option<f64>,
    /// Dimensionless propagation parameter C t / pi.
    #[arg(long)]
    pub kappa: Option<f64>,

    /// Fixed per-mode photon cutoff; adaptive when absent.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub tail_tolerance: Option<f64>,
    /// Largest cutoff tried by the adaptive search.
    #[arg(long)]
    pub cutoff_cap: Option<usize>,

    #[arg(long, allow_negative_numbers = true)]
    pub grid_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub grid_max: Option<f64>,
    #[arg(long)]
    pub grid_count: Option<usize>,

    /// Varying Wigner slice axes, e.g. `x,y`.
    #[arg(long, value_name = "U,V")]
    pub axes: Option<String>,
    /// Pinned coordinates, e.g. `p_x=0,p_y=0`; unlisted axes pin at zero.
    #[arg(long, value_name = "AXIS=VALUE,...", allow_hyphen_values = true)]
    pub pin: Option<String>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// How evolved states are formed.
    #[arg(long, value_enum)]
    pub path: Option<PathArg>,

    #[arg(long)]
    pub kappa_min: Option<f64>,
    #[arg(long)]
    pub kappa_max: Option<f64>,
    #[arg(long)]
    pub kappa_count: Option<usize>,

    /// Output directory.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),* $(,)?) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

impl RunConfig {
    /// Fields set in `top` replace those in `self`.
    pub fn overlaid(mut self, top: &RunConfig) -> RunConfig {
        overlay!(self, top; family, r, phi, k, r_x, r_y, eta_x, eta_y, coupling, t, kappa, n_max,
            tail_tolerance, cutoff_cap, grid_min, grid_max, grid_count, axes, pin, method, path,
            kappa_min, kappa_max, kappa_count, output, format);
        self
    }

    pub fn from_file(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
    }

    /// Flags over the optional config file.
    pub fn with_file(self) -> Result<RunConfig, CliError> {
        match &self.config {
            Some(path) => Ok(RunConfig::from_file(path)?.overlaid(&self)),
            None => Ok(self),
        }
    }

    pub fn resolve(&self, command: Command) -> Result<Resolved, CliError> {
        Resolved::new(command, self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    State,
    Wigner,
    Negativity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Physics {
    pub family: FamilyKind,
    pub r: f64,
    pub phi: f64,
    pub k: u32,
    pub r_x: f64,
    pub r_y: f64,
    pub eta_x: f64,
    pub eta_y: f64,
    pub coupling: f64,
}

impl Physics {
    pub fn family(&self) -> Result<Family, CliError> {
        Ok(match self.family {
            FamilyKind::PsVortex => Family::PsVortex {
                params: SqueezeParams::new(self.r, self.phi)?,
                k: self.k,
            },
            FamilyKind::Tmsv => Family::Tmsv {
                params: SqueezeParams::new(self.r, self.phi)?,
            },
            FamilyKind::BsVortex => Family::BsVortex {
                params: BsVortexParams::new(self.r_x, self.r_y, self.eta_x, self.eta_y, self.k)?
                    .with_phi(self.phi),
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Numerics {
    /// Fixed cutoff, or `None` for the adaptive search.
    pub n_max: Option<usize>,
    pub tail_tolerance: f64,
    pub cutoff_cap: usize,
}

impl Numerics {
    pub fn policy(&self) -> CutoffPolicy {
        match self.n_max {
            Some(n) => CutoffPolicy {
                start: n,
                cap: n,
                tail_tolerance: self.tail_tolerance,
            },
            None => CutoffPolicy::with_tolerance(self.tail_tolerance).with_cap(self.cutoff_cap),
        }
    }
}

/// Where the evolved state is taken.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Propagation {
    pub kappa: f64,
    /// Echo of the time given on the command line, if any.
    pub t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaSweep {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl KappaSweep {
    pub fn values(&self) -> Vec<f64> {
        vortexprop::entanglement::kappa_grid(self.min, self.max, self.count)
    }
}

/// Fully resolved run; serialized verbatim into every output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub command: Command,
    pub physics: Physics,
    pub numerics: Numerics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub propagation: Option<Propagation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid2D>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slice: Option<SliceSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<WignerMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negativity_method: Option<NegativityMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<SweepPath>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<KappaSweep>,
    pub output: PathBuf,
    pub format: Format,
    pub frame: &'static str,
}

pub const FRAME_NOTE: &str = "interaction picture: the free term omega (a^dag a + b^dag b) is dropped, fields are in the co-rotating frame";

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn parse_axes(text: &str) -> Result<(Axis, Axis), CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(config_err(format!("--axes takes two labels, got {text:?}")));
    }
    Ok((
        parts[0].parse().map_err(config_err)?,
        parts[1].parse().map_err(config_err)?,
    ))
}

fn parse_slice(axes: (Axis, Axis), pin: Option<&str>) -> Result<SliceSpec, CliError> {
    let mut spec = SliceSpec::through_origin(axes.0, axes.1).map_err(config_err)?;
    if let Some(pin) = pin.filter(|p| !p.trim().is_empty()) {
        for item in pin.split(',') {
            let (name, value) = item.split_once('=').ok_or_else(|| {
                config_err(format!("pin entries look like axis=value, got {item:?}"))
            })?;
            let axis: Axis = name.trim().parse().map_err(config_err)?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| config_err(format!("bad pin value {value:?}")))?;
            let slot = spec
                .fixed
                .iter_mut()
                .find(|(a, _)| *a == axis)
                .ok_or_else(|| {
                    config_err(format!(
                        "axis {axis} is a varying axis and cannot be pinned"
                    ))
                })?;
            slot.1 = value;
        }
    }
    spec.validate().map_err(config_err)?;
    Ok(spec)
}

impl Resolved {
    fn new(command: Command, c: &RunConfig) -> Result<Self, CliError> {
        let family = c.family.ok_or_else(|| config_err("--family is required"))?;
        let physics = Physics {
            family,
            r: c.r.unwrap_or(1.0),
            phi: c.phi.unwrap_or(0.0),
            k: c.k.unwrap_or(1),
            r_x: c.r_x.unwrap_or(0.2),
            r_y: c.r_y.unwrap_or(0.5),
            eta_x: c.eta_x.unwrap_or(1.0),
            eta_y: c.eta_y.unwrap_or(0.75),
            coupling: c.coupling.unwrap_or(DEFAULT_COUPLING),
        };
        physics.family()?;

        let negativity = command == Command::Negativity;
        let numerics = Numerics {
            n_max: c.n_max,
            tail_tolerance: c.tail_tolerance.unwrap_or(if negativity {
                NEGATIVITY_TAIL_TOLERANCE
            } else {
                1e-8
            }),
            cutoff_cap: c.cutoff_cap.unwrap_or(if negativity { 2048 } else { 256 }),
        };
        FockCutoff::new(numerics.n_max.unwrap_or(0), numerics.tail_tolerance)?;
        if numerics.cutoff_cap == 0 {
            return Err(config_err("--cutoff-cap must be positive"));
        }

        let has_range = c.kappa_min.is_some() || c.kappa_max.is_some() || c.kappa_count.is_some();
        let propagation = match (c.t, c.kappa) {
            (Some(_), Some(_)) => return Err(config_err("give exactly one of --t and --kappa")),
            (Some(t), None) => Some(Propagation {
                kappa: WaveguideParams::from_time(physics.coupling, t)?.kappa,
                t: Some(t),
            }),
            (None, Some(kappa)) => Some(Propagation {
                kappa: WaveguideParams::from_kappa(kappa)?.kappa,
                t: None,
            }),
            (None, None) => None,
        };

        let mut out = Resolved {
            command,
            physics,
            numerics,
            propagation: None,
            grid: None,
            slice: None,
            method: None,
            negativity_method: None,
            path: None,
            sweep: None,
            output: c.output.clone().unwrap_or_else(|| PathBuf::from("out")),
            format: c.format.unwrap_or(Format::Csv),
            frame: FRAME_NOTE,
        };
        let path = match c.path.unwrap_or(PathArg::ClosedForm) {
            PathArg::ClosedForm => SweepPath::ClosedForm,
            PathArg::Unitary => SweepPath::Unitary,
        };

        match command {
            Command::State | Command::Wigner => {
                if has_range {
                    return Err(config_err("kappa ranges belong to the negativity command"));
                }
                out.propagation = Some(
                    propagation.ok_or_else(|| config_err("give exactly one of --t and --kappa"))?,
                );
                let labels = match command {
                    Command::State => (Axis::X, Axis::Y),
                    _ => parse_axes(c.axes.as_deref().unwrap_or("x,y"))?,
                };
                let axis = AxisRange::new(
                    c.grid_min.unwrap_or(-5.0),
                    c.grid_max.unwrap_or(5.0),
                    c.grid_count.unwrap_or(101),
                )
                .map_err(config_err)?;
                out.grid = Some(Grid2D::new(axis, axis, labels).map_err(config_err)?);
                if command == Command::State {
                    if c.axes.is_some() || c.pin.is_some() || c.method.is_some() {
                        return Err(config_err(
                            "--axes, --pin and --method apply to the wigner command",
                        ));
                    }
                    out.path = Some(path);
                } else {
                    out.slice = Some(parse_slice(labels, c.pin.as_deref())?);
                    let default = match family {
                        FamilyKind::PsVortex => MethodArg::ClosedForm,
                        _ => MethodArg::DisplacedParity,
                    };
                    out.method = Some(match c.method.unwrap_or(default) {
                        MethodArg::DisplacedParity => WignerMethod::DisplacedParity,
                        MethodArg::ClosedForm => WignerMethod::ClosedForm,
                        MethodArg::Transport => WignerMethod::Transport,
                        other => {
                            return Err(config_err(format!(
                                "{} is a negativity method",
                                other.name()
                            )))
                        }
                    });
                }
            }
            Command::Negativity => {
                out.path = Some(path);
                out.negativity_method = Some(match c.method.unwrap_or(MethodArg::Schmidt) {
                    MethodArg::Schmidt => NegativityMethod::Schmidt,
                    MethodArg::Eigensolve => NegativityMethod::Eigensolve,
                    MethodArg::Both => NegativityMethod::Both,
                    other => {
                        return Err(config_err(format!("{} is a wigner method", other.name())))
                    }
                });
                out.sweep = Some(match propagation {
                    Some(p) if !has_range => KappaSweep {
                        min: p.kappa,
                        max: p.kappa,
                        count: 1,
                    },
                    Some(_) => {
                        return Err(config_err(
                            "give either a single --kappa/--t or a kappa range",
                        ))
                    }
                    None => KappaSweep {
                        min: c.kappa_min.unwrap_or(0.0),
                        max: c.kappa_max.unwrap_or(10.0),
                        count: c.kappa_count.unwrap_or(201),
                    },
                });
                let s = out.sweep.as_ref().expect("set above");
                if !(s.min.is_finite()
                    && s.max.is_finite()
                    && s.min >= 0.0
                    && s.max >= s.min
                    && s.count >= 1)
                {
                    return Err(config_err(format!(
                        "kappa range needs 0 <= min <= max and count >= 1, got [{}, {}] x {}",
                        s.min, s.max, s.count
                    )));
                }
            }
        }
        Ok(out)
    }

    pub fn wg(&self) -> Result<WaveguideParams, CliError> {
        let p = self
            .propagation
            .ok_or_else(|| config_err("no propagation point"))?;
        Ok(WaveguideParams::from_kappa_with_coupling(
            p.kappa,
            self.physics.coupling,
        )?)
    }
}
