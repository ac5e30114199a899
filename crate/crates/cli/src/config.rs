use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use permflow::dynamics::{ReferenceFlow, RefreshPolicy, ScenarioConfig, SwitchHandling, VelocityField};
use permflow::polar::{make_grid, Domain};
use serde::{Deserialize, Serialize};

use crate::artifacts::read_point_table;

/// Flat scenario file. Every key except `domain` and `n_per_axis` is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub domain: Domain,
    pub n_per_axis: usize,
    /// Spring length scale; defaults to the grid spacing.
    pub epsilon: Option<f64>,
    /// Defaults to `2 pi epsilon / 100`.
    pub dt: Option<f64>,
    #[serde(default = "one")]
    pub t_final: f64,
    /// `zero`, `rigid_rotation`, `random` or `table`.
    #[serde(default = "zero_field")]
    pub initial_velocity: String,
    #[serde(default = "pi")]
    pub omega: f64,
    #[serde(default)]
    pub amplitude: f64,
    /// CSV with one velocity per grid point, for `initial_velocity = "table"`.
    pub velocity_table: Option<PathBuf>,
    /// `every_step`, `every_k_steps` or `never`.
    #[serde(default = "every_step")]
    pub refresh: String,
    pub refresh_k: Option<usize>,
    /// `located` or `step_boundary`.
    #[serde(default = "located")]
    pub switch_handling: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub snapshot_every: usize,
    #[serde(default = "one_step")]
    pub diagnostics_every: usize,
    /// `none` or `rotation`.
    #[serde(default = "no_reference")]
    pub reference: String,
}

fn one() -> f64 {
    1.0
}
fn pi() -> f64 {
    PI
}
fn one_step() -> usize {
    1
}
fn zero_field() -> String {
    "zero".into()
}
fn every_step() -> String {
    "every_step".into()
}
fn located() -> String {
    "located".into()
}
fn no_reference() -> String {
    "none".into()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    /// Resolves names and defaults; `base` anchors a relative `velocity_table`.
    pub fn to_scenario(&self, base: &Path) -> Result<ScenarioConfig<f64>> {
        let mut cfg = ScenarioConfig::<f64>::new(self.domain, self.n_per_axis)
            .with_context(|| format!("field `n_per_axis`: cannot build a {} grid", self.domain))?;
        if let Some(eps) = self.epsilon {
            cfg.epsilon = eps;
            cfg.dt = std::f64::consts::TAU * eps / 100.0;
        }
        if let Some(dt) = self.dt {
            cfg.dt = dt;
        }
        cfg.t_final = self.t_final;
        cfg.seed = self.seed;
        cfg.snapshot_every = self.snapshot_every;
        cfg.diagnostics_every = self.diagnostics_every;
        cfg.initial_velocity = match self.initial_velocity.as_str() {
            "zero" => VelocityField::Zero,
            "rigid_rotation" => VelocityField::RigidRotation { omega: self.omega },
            "random" => VelocityField::Random {
                amplitude: self.amplitude,
            },
            "table" => {
                let Some(rel) = &self.velocity_table else {
                    bail!("field `velocity_table`: required when initial_velocity = \"table\"");
                };
                let path = base.join(rel);
                let dim = self.domain.dim();
                let table = read_point_table(&path, dim)?;
                VelocityField::Table(table)
            }
            other => bail!("field `initial_velocity`: unknown field name `{}`", other),
        };
        cfg.refresh = match self.refresh.as_str() {
            "every_step" => RefreshPolicy::EveryStep,
            "never" => RefreshPolicy::Never,
            "every_k_steps" => match self.refresh_k {
                Some(k) => RefreshPolicy::EveryKSteps(k),
                None => bail!("field `refresh_k`: required when refresh = \"every_k_steps\""),
            },
            other => bail!("field `refresh`: unknown policy `{}`", other),
        };
        cfg.switch_handling = match self.switch_handling.as_str() {
            "located" => SwitchHandling::Located,
            "step_boundary" => SwitchHandling::StepBoundary,
            other => bail!("field `switch_handling`: unknown mode `{}`", other),
        };
        cfg.reference = match self.reference.as_str() {
            "none" => None,
            "rotation" => Some(ReferenceFlow::Rotation { omega: self.omega }),
            other => bail!("field `reference`: unknown flow `{}`", other),
        };
        cfg.validate().map_err(anyhow::Error::new)?;
        // fail early on grids the domain cannot build
        make_grid::<f64>(cfg.domain, cfg.n_per_axis)?;
        Ok(cfg)
    }
}
