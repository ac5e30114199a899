use serde::Serialize;

use super::integrator::{step_verlet, StepOptions};
use super::state::{hamiltonian, init_state, ParticleState, ScenarioConfig};
use crate::error::Result;
use crate::points::dist2;
use crate::polar::{make_grid, Domain, PointCloud};
use crate::scalar::Real;

/// Closed-form flow the particles are compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ReferenceFlow<T> {
    /// Rigid rotation about the domain center at angular velocity `omega`.
    Rotation { omega: T },
}

impl<T: Real> ReferenceFlow<T> {
    /// Image of the grid point `a` at time `t`.
    pub fn position(&self, domain: Domain, a: &[T], t: T) -> Vec<T> {
        match *self {
            ReferenceFlow::Rotation { omega } => {
                let c = domain.center::<T>();
                let (s, co) = (omega * t).sin_cos();
                let (x, y) = (a[0] - c[0], a[1] - c[1]);
                let mut p = a.to_vec();
                p[0] = c[0] + co * x - s * y;
                p[1] = c[1] + s * x + co * y;
                p
            }
        }
    }

    /// `sqrt(sum_a |M_a - g(t, A_a)|^2 / N)`.
    pub fn deviation(&self, domain: Domain, grid: &PointCloud<T>, state: &ParticleState<T>) -> T {
        let sum = state
            .positions
            .iter()
            .zip(grid.points.iter())
            .fold(T::zero(), |acc, (m, a)| {
                acc + dist2(m, &self.position(domain, a, state.time))
            });
        (sum * grid.cell_measure).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticRecord<T> {
    pub time: T,
    pub hamiltonian: T,
    pub kinetic: T,
    pub potential: T,
    /// Cumulative reassignment cycles.
    pub switches: u64,
    pub deviation: Option<T>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DiagnosticSeries<T> {
    pub records: Vec<DiagnosticRecord<T>>,
}

impl<T: Real> DiagnosticSeries<T> {
    /// `max_t |H(t) - H(0)| / scale`.
    pub fn max_energy_drift(&self, scale: T) -> T {
        let h0 = self.records.first().map_or(T::zero(), |r| r.hamiltonian);
        self.records
            .iter()
            .fold(T::zero(), |m, r| m.max((r.hamiltonian - h0).abs() / scale))
    }

    pub fn last(&self) -> Option<&DiagnosticRecord<T>> {
        self.records.last()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    pub time: T,
    pub positions: crate::points::Points<T>,
    pub velocities: crate::points::Points<T>,
    pub sigma: Vec<usize>,
}

impl<T: Real> From<&ParticleState<T>> for Snapshot<T> {
    fn from(s: &ParticleState<T>) -> Self {
        Self {
            time: s.time,
            positions: s.positions.clone(),
            velocities: s.velocities.clone(),
            sigma: s.sigma.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Evolution<T> {
    pub grid: PointCloud<T>,
    pub snapshots: Vec<Snapshot<T>>,
    pub diagnostics: DiagnosticSeries<T>,
    pub final_state: ParticleState<T>,
}

/// Runs a scenario from `t = 0` to `t_final`.
///
/// Step `k` ends at `k * dt` exactly; the last step is shortened to land on
/// `t_final`. Diagnostics are recorded at `t = 0`, every `diagnostics_every`
/// steps, and at the end.
pub fn evolve<T: Real>(config: &ScenarioConfig<T>) -> Result<Evolution<T>> {
    config.validate()?;
    let grid = make_grid::<T>(config.domain, config.n_per_axis)?;
    let mut state = init_state(config, &grid)?;
    let options = StepOptions {
        refresh: config.refresh,
        switch_handling: config.switch_handling,
    };

    let ratio = (config.t_final / config.dt).to_f64().unwrap_or(0.0);
    let n_steps = if config.t_final > T::zero() {
        (ratio - 1e-9).ceil().max(1.0) as usize
    } else {
        0
    };

    let record = |state: &ParticleState<T>| -> Result<DiagnosticRecord<T>> {
        let e = hamiltonian(state, &grid)?;
        Ok(DiagnosticRecord {
            time: state.time,
            hamiltonian: e.total,
            kinetic: e.kinetic,
            potential: e.potential,
            switches: state.switches,
            deviation: config.reference.map(|r| r.deviation(config.domain, &grid, state)),
        })
    };

    let mut diagnostics = DiagnosticSeries {
        records: vec![record(&state)?],
    };
    let mut snapshots = vec![Snapshot::from(&state)];
    for k in 1..=n_steps {
        let t_next = if k == n_steps {
            config.t_final
        } else {
            config.dt * T::from_count(k)
        };
        let h = t_next - state.time;
        state = step_verlet(&state, &grid, h, &options)?;
        state.time = t_next;
        let last = k == n_steps;
        if last || k.is_multiple_of(config.diagnostics_every) {
            diagnostics.records.push(record(&state)?);
        }
        if last || (config.snapshot_every > 0 && k.is_multiple_of(config.snapshot_every)) {
            snapshots.push(Snapshot::from(&state));
        }
    }
    Ok(Evolution {
        grid,
        snapshots,
        diagnostics,
        final_state: state,
    })
}
