use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::evolve::ReferenceFlow;
use crate::assignment::{solve_assignment, squared_distance_costs};
use crate::error::{Error, Result};
use crate::points::{dist2, dot, norm2, Points};
use crate::polar::{make_grid, Domain, PointCloud};
use crate::scalar::Real;

/// Initial velocity field evaluated at the grid points.
#[derive(Debug, Clone, PartialEq)]
pub enum VelocityField<T> {
    Zero,
    /// Rotation about the domain center (vertical axis for the cylinder),
    /// `v = omega (-(x_2 - c_2), x_1 - c_1)`.
    RigidRotation {
        omega: T,
    },
    /// One velocity per grid point, in grid order.
    Table(Points<T>),
    /// Independent uniform components in `[-amplitude, amplitude]`, drawn from `seed`.
    Random {
        amplitude: T,
    },
}

impl<T: Real> VelocityField<T> {
    pub fn evaluate(&self, grid: &PointCloud<T>, seed: u64) -> Result<Points<T>> {
        let dim = grid.dim();
        match self {
            VelocityField::Zero => Ok(Points::filled(dim, grid.len(), T::zero())),
            VelocityField::RigidRotation { omega } => {
                if dim < 2 {
                    return Err(Error::Unsupported("rigid rotation in one dimension".into()));
                }
                let c = grid.domain.center::<T>();
                grid.points.map(|p| {
                    let mut v = vec![T::zero(); dim];
                    v[0] = -*omega * (p[1] - c[1]);
                    v[1] = *omega * (p[0] - c[0]);
                    v
                })
            }
            VelocityField::Table(table) => {
                if table.len() != grid.len() || table.dim() != dim {
                    return Err(Error::Size(format!(
                        "velocity table is {}x{}, grid is {}x{}",
                        table.len(),
                        table.dim(),
                        grid.len(),
                        dim
                    )));
                }
                Ok(table.clone())
            }
            VelocityField::Random { amplitude } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let amp = amplitude.to_f64().unwrap_or(0.0);
                let coords = (0..dim * grid.len())
                    .map(|_| T::lit(rng.gen_range(-1.0..=1.0) * amp))
                    .collect();
                Points::new(dim, coords)
            }
        }
    }
}

/// When the pairing is recomputed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RefreshPolicy {
    EveryStep,
    EveryKSteps(usize),
    /// Keep the pairing from `t = 0` forever.
    Never,
}

impl RefreshPolicy {
    pub fn fires(self, step: u64) -> bool {
        match self {
            RefreshPolicy::EveryStep => true,
            RefreshPolicy::EveryKSteps(k) => k > 0 && step.is_multiple_of(k as u64),
            RefreshPolicy::Never => false,
        }
    }
}

/// How a pairing change found at the end of a step is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwitchHandling {
    /// The pairing is frozen for the whole step; changes take effect at the next step.
    StepBoundary,
    /// The step is split at the time each reassignment cycle becomes cost-neutral
    /// along the frozen trajectory; each piece is a frozen-pairing Verlet substep.
    Located,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig<T> {
    pub domain: Domain,
    pub n_per_axis: usize,
    pub epsilon: T,
    pub dt: T,
    pub t_final: T,
    pub initial_velocity: VelocityField<T>,
    pub refresh: RefreshPolicy,
    pub switch_handling: SwitchHandling,
    pub seed: u64,
    /// Snapshot cadence in steps; 0 keeps only the first and last state.
    pub snapshot_every: usize,
    /// Diagnostic cadence in steps.
    pub diagnostics_every: usize,
    pub reference: Option<ReferenceFlow<T>>,
}

impl<T: Real> ScenarioConfig<T> {
    /// Defaults: `eps = h`, `dt = 2 pi eps / 100`, `t_final = 1`, at rest,
    /// refresh every step with located switches.
    pub fn new(domain: Domain, n_per_axis: usize) -> Result<Self> {
        let grid = make_grid::<T>(domain, n_per_axis)?;
        let epsilon = grid.spacing();
        Ok(Self {
            domain,
            n_per_axis,
            epsilon,
            dt: T::TAU() * epsilon / T::lit(100.0),
            t_final: T::one(),
            initial_velocity: VelocityField::Zero,
            refresh: RefreshPolicy::EveryStep,
            switch_handling: SwitchHandling::Located,
            seed: 0,
            snapshot_every: 0,
            diagnostics_every: 1,
            reference: None,
        })
    }

    /// Rigid rotation of the disk at angular velocity `omega`, compared against
    /// the exact rotation.
    pub fn rotation(n_per_axis: usize, omega: T) -> Result<Self> {
        let mut cfg = Self::new(Domain::Disk, n_per_axis)?;
        cfg.initial_velocity = VelocityField::RigidRotation { omega };
        cfg.reference = Some(ReferenceFlow::Rotation { omega });
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > T::zero()) || !self.epsilon.is_finite() {
            return Err(Error::Config {
                field: "epsilon",
                reason: "must be positive and finite".into(),
            });
        }
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(Error::Config {
                field: "dt",
                reason: "must be positive and finite".into(),
            });
        }
        if !(self.t_final >= T::zero()) || !self.t_final.is_finite() {
            return Err(Error::Config {
                field: "t_final",
                reason: "must be nonnegative and finite".into(),
            });
        }
        let limit = T::lit(0.1) * T::TAU() * self.epsilon;
        if self.dt > limit * (T::one() + T::epsilon() * T::lit(16.0)) {
            return Err(Error::Config {
                field: "dt",
                reason: format!("{} exceeds 0.1 * 2 pi * epsilon = {}", self.dt, limit),
            });
        }
        if self.n_per_axis < 2 {
            return Err(Error::Config {
                field: "n_per_axis",
                reason: "must be at least 2".into(),
            });
        }
        if self.diagnostics_every == 0 {
            return Err(Error::Config {
                field: "diagnostics_every",
                reason: "must be at least 1".into(),
            });
        }
        if let RefreshPolicy::EveryKSteps(0) = self.refresh {
            return Err(Error::Config {
                field: "refresh",
                reason: "every_k_steps needs k >= 1".into(),
            });
        }
        if let Some(ReferenceFlow::Rotation { .. }) = self.reference {
            if self.domain.dim() < 2 {
                return Err(Error::Config {
                    field: "reference",
                    reason: "rotation needs a 2D or 3D domain".into(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleState<T> {
    pub positions: Points<T>,
    pub velocities: Points<T>,
    pub time: T,
    pub epsilon: T,
    /// Pairing in force; optimal for `positions` right after a refresh.
    pub sigma: Vec<usize>,
    /// Steps taken so far.
    pub steps: u64,
    /// Cumulative number of reassignment cycles applied to `sigma`.
    pub switches: u64,
}

impl<T: Real> ParticleState<T> {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn kinetic(&self) -> T {
        self.velocities.iter().fold(T::zero(), |acc, v| acc + norm2(v)) * T::lit(0.5)
    }

    /// Spring energy with the pairing currently in force.
    pub fn frozen_potential(&self, grid: &PointCloud<T>) -> T {
        let sum = self
            .positions
            .iter()
            .zip(&self.sigma)
            .fold(T::zero(), |acc, (m, &b)| acc + dist2(m, grid.points.get(b)));
        sum / (T::lit(2.0) * self.epsilon * self.epsilon)
    }

    /// Relabels particles: particle `k` of the result is particle `perm[k]` of `self`.
    /// Spring forces `-(M_a - A_{sigma_a}) / eps^2` for the current pairing.
    pub fn forces(&self, grid: &PointCloud<T>) -> Points<T> {
        let inv = T::one() / (self.epsilon * self.epsilon);
        let mut out = Vec::with_capacity(self.positions.as_slice().len());
        for (m, &b) in self.positions.iter().zip(&self.sigma) {
            out.extend(m.iter().zip(grid.points.get(b)).map(|(&x, &y)| -(x - y) * inv));
        }
        Points::new(self.positions.dim(), out).expect("same shape as positions")
    }

    pub fn relabeled(&self, perm: &[usize]) -> Self {
        Self {
            positions: self.positions.gather(perm),
            velocities: self.velocities.gather(perm),
            sigma: perm.iter().map(|&a| self.sigma[a]).collect(),
            ..self.clone()
        }
    }
}

/// Particles at the grid points with the configured velocities; `sigma` is the
/// identity, which is optimal since `M = A`.
pub fn init_state<T: Real>(config: &ScenarioConfig<T>, grid: &PointCloud<T>) -> Result<ParticleState<T>> {
    config.validate()?;
    let velocities = config.initial_velocity.evaluate(grid, config.seed)?;
    Ok(ParticleState {
        positions: grid.points.clone(),
        velocities,
        time: T::zero(),
        epsilon: config.epsilon,
        sigma: (0..grid.len()).collect(),
        steps: 0,
        switches: 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Energy<T> {
    pub total: T,
    pub kinetic: T,
    pub potential: T,
}

/// Kinetic plus minimal spring energy; the minimum is a fresh assignment solve,
/// independent of `state.sigma`.
pub fn hamiltonian<T: Real>(state: &ParticleState<T>, grid: &PointCloud<T>) -> Result<Energy<T>> {
    let costs = squared_distance_costs(&state.positions, &grid.points)?;
    let best = solve_assignment(&costs)?;
    let potential = best.total_cost / (T::lit(2.0) * state.epsilon * state.epsilon);
    let kinetic = state.kinetic();
    Ok(Energy {
        total: kinetic + potential,
        kinetic,
        potential,
    })
}

/// Samples of the discrete pressure gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureSamples<T> {
    pub locations: Points<T>,
    /// `(M_a - A_{sigma_a}) / eps^2`, so that `M'' = -grad phi`.
    pub gradients: Points<T>,
}

impl<T: Real> PressureSamples<T> {
    /// Least-squares `k` in `grad ~ k (x - center)` over the first
    /// `center.len()` coordinates.
    pub fn radial_slope(&self, center: &[T]) -> T {
        let d = center.len();
        let mut num = T::zero();
        let mut den = T::zero();
        for (x, g) in self.locations.iter().zip(self.gradients.iter()) {
            let r: Vec<T> = (0..d).map(|k| x[k] - center[k]).collect();
            num = num + dot(&r, &g[..d]);
            den = den + norm2(&r);
        }
        num / den
    }
}

/// Pressure-gradient samples at the particles, using a freshly solved pairing.
pub fn pressure_estimate<T: Real>(state: &ParticleState<T>, grid: &PointCloud<T>) -> Result<PressureSamples<T>> {
    let costs = squared_distance_costs(&state.positions, &grid.points)?;
    let best = solve_assignment(&costs)?;
    let inv = T::one() / (state.epsilon * state.epsilon);
    let mut grads = Vec::with_capacity(state.positions.as_slice().len());
    for (m, &b) in state.positions.iter().zip(&best.sigma) {
        let a = grid.points.get(b);
        grads.extend(m.iter().zip(a).map(|(&x, &y)| (x - y) * inv));
    }
    Ok(PressureSamples {
        locations: state.positions.clone(),
        gradients: Points::new(grid.dim(), grads)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::brute_force_assignment;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn zero_field_starts_at_rest() {
        let cfg = ScenarioConfig::<f64>::new(Domain::Square, 4).unwrap();
        let g = make_grid(Domain::Square, 4).unwrap();
        let s = init_state(&cfg, &g).unwrap();
        assert!(s.velocities.as_slice().iter().all(|&v| v == 0.0));
        assert_eq!(s.sigma, (0..16).collect::<Vec<_>>());
        let e = hamiltonian(&s, &g).unwrap();
        assert_eq!((e.total, e.kinetic, e.potential), (0.0, 0.0, 0.0));
    }

    #[test]
    fn rigid_rotation_velocity() {
        let pi = std::f64::consts::PI;
        let cfg = ScenarioConfig::<f64>::rotation(8, pi).unwrap();
        let g = make_grid(Domain::Disk, 8).unwrap();
        let s = init_state(&cfg, &g).unwrap();
        for (x, v) in g.points.iter().zip(s.velocities.iter()) {
            assert!(close(v[0], -pi * x[1], 1e-15) && close(v[1], pi * x[0], 1e-15));
        }
        let line = make_grid::<f64>(Domain::Interval, 4).unwrap();
        assert!(VelocityField::RigidRotation { omega: 1.0 }.evaluate(&line, 0).is_err());
    }

    #[test]
    fn random_field_is_seeded() {
        let g = make_grid::<f64>(Domain::Square, 3).unwrap();
        let f = VelocityField::Random { amplitude: 0.5 };
        let a = f.evaluate(&g, 7).unwrap();
        assert_eq!(a, f.evaluate(&g, 7).unwrap());
        assert_ne!(a, f.evaluate(&g, 8).unwrap());
        assert!(a.as_slice().iter().all(|x| x.abs() <= 0.5));
    }

    #[test]
    fn config_validation() {
        let mut cfg = ScenarioConfig::<f64>::new(Domain::Square, 4).unwrap();
        assert!(cfg.validate().is_ok());
        cfg.dt = 0.2 * std::f64::consts::TAU * cfg.epsilon;
        assert!(matches!(cfg.validate(), Err(Error::Config { field: "dt", .. })));
        cfg.dt = 1e-3;
        cfg.epsilon = 0.0;
        assert!(matches!(cfg.validate(), Err(Error::Config { field: "epsilon", .. })));
        cfg.epsilon = 0.25;
        cfg.t_final = -1.0;
        assert!(matches!(cfg.validate(), Err(Error::Config { field: "t_final", .. })));
    }

    #[test]
    fn single_displaced_particle_energy() {
        let g = make_grid::<f64>(Domain::Interval, 2).unwrap();
        let eps = 0.3;
        let d = 0.05;
        let s = ParticleState {
            positions: Points::new(1, vec![0.25 + d, 0.75]).unwrap(),
            velocities: Points::filled(1, 2, 0.0),
            time: 0.0,
            epsilon: eps,
            sigma: vec![0, 1],
            steps: 0,
            switches: 0,
        };
        let e = hamiltonian(&s, &g).unwrap();
        let expect = d * d / (2.0 * eps * eps);
        assert!(close(e.potential, expect, 1e-15) && e.kinetic == 0.0 && close(e.total, expect, 1e-15));
    }

    #[test]
    fn potential_matches_enumeration_and_inf_property() {
        let g = make_grid::<f64>(Domain::Square, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let coords: Vec<f64> = (0..8).map(|_| rng.gen_range(0.0..1.0)).collect();
            let s = ParticleState {
                positions: Points::new(2, coords).unwrap(),
                velocities: Points::filled(2, 4, 0.1),
                time: 0.0,
                epsilon: 0.2,
                sigma: vec![3, 1, 0, 2],
                steps: 0,
                switches: 0,
            };
            let costs = squared_distance_costs(&s.positions, &g.points).unwrap();
            let brute = brute_force_assignment(&costs).unwrap().total_cost / (2.0 * 0.04);
            let e = hamiltonian(&s, &g).unwrap();
            assert!(close(e.potential, brute, 1e-12));
            assert!(e.potential <= s.frozen_potential(&g) + 1e-12);
        }
    }

    #[test]
    fn pressure_samples() {
        let g = make_grid::<f64>(Domain::Square, 3).unwrap();
        let mut s = init_state(&ScenarioConfig::new(Domain::Square, 3).unwrap(), &g).unwrap();
        let p = pressure_estimate(&s, &g).unwrap();
        assert!(p.gradients.as_slice().iter().all(|&x| x == 0.0));

        let line = make_grid::<f64>(Domain::Interval, 2).unwrap();
        s = ParticleState {
            positions: Points::new(1, vec![0.25 + 0.01, 0.75]).unwrap(),
            velocities: Points::filled(1, 2, 0.0),
            time: 0.0,
            epsilon: 0.1,
            sigma: vec![0, 1],
            steps: 0,
            switches: 0,
        };
        let p = pressure_estimate(&s, &line).unwrap();
        assert!(close(p.gradients.get(0)[0], 0.01 / 0.01, 1e-12));
        assert_eq!(p.gradients.get(1)[0], 0.0);
    }

    #[test]
    fn radial_slope_of_exact_field() {
        let g = make_grid::<f64>(Domain::Disk, 6).unwrap();
        let k = 9.8696;
        let p = PressureSamples {
            locations: g.points.clone(),
            gradients: g.points.map(|x| vec![k * x[0], k * x[1]]).unwrap(),
        };
        assert!(close(p.radial_slope(&[0.0, 0.0]), k, 1e-12));
    }
}
