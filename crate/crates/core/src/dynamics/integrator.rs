use super::state::{ParticleState, RefreshPolicy, SwitchHandling};
use crate::assignment::{reassignment_cycles, solve_assignment, squared_distance_costs};
use crate::error::{Error, Result};
use crate::points::{dot, norm2, Points};
use crate::polar::PointCloud;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub refresh: RefreshPolicy,
    pub switch_handling: SwitchHandling,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self {
            refresh: RefreshPolicy::EveryStep,
            switch_handling: SwitchHandling::Located,
        }
    }
}

/// Verlet substep of one particle on the spring anchored at `anchor`.
#[inline]
fn spring_substep<T: Real>(m: &mut [T], v: &mut [T], anchor: &[T], stiffness: T, h: T) {
    let half = T::lit(0.5);
    for k in 0..m.len() {
        let f0 = -(m[k] - anchor[k]) * stiffness;
        m[k] = m[k] + h * v[k] + half * h * h * f0;
        let f1 = -(m[k] - anchor[k]) * stiffness;
        v[k] = v[k] + half * h * (f0 + f1);
    }
}

fn optimal_sigma<T: Real>(positions: &Points<T>, grid: &PointCloud<T>) -> Result<Vec<usize>> {
    let costs = squared_distance_costs(positions, &grid.points)?;
    Ok(solve_assignment(&costs)?.sigma)
}

/// One Stormer-Verlet step with the pairing `state.sigma` held fixed.
///
/// `M+ = M + h V + h^2/2 F(M)`, `V+ = V + h/2 (F(M) + F(M+))` with
/// `F_a = -(M_a - A_{sigma_a}) / eps^2`. Any sign of `h` is accepted, so that
/// stepping `+h` then `-h` returns to the start.
pub fn frozen_substep<T: Real>(state: &ParticleState<T>, grid: &PointCloud<T>, h: T) -> ParticleState<T> {
    let mut next = state.clone();
    let stiffness = T::one() / (state.epsilon * state.epsilon);
    for a in 0..next.len() {
        let anchor = grid.points.get(state.sigma[a]);
        let (m, v) = (next.positions.get_mut(a), next.velocities.get_mut(a));
        // positions and velocities live in separate buffers
        spring_substep(m, v, anchor, stiffness, h);
    }
    next.time = state.time + h;
    next
}

/// Advances the particle system by `dt`.
///
/// When the refresh policy fires, the pairing is re-solved before the force
/// evaluation. With [`SwitchHandling::Located`] the end point of the frozen step
/// is solved as well; each cycle by which the two pairings differ is switched at
/// the root of its cost difference along the frozen trajectory (a quadratic in
/// time), and the affected particles take two frozen substeps around it. The
/// spring energy is continuous at that instant, which keeps the energy error
/// second order across switches.
pub fn step_verlet<T: Real>(
    state: &ParticleState<T>,
    grid: &PointCloud<T>,
    dt: T,
    options: &StepOptions,
) -> Result<ParticleState<T>> {
    if !(dt > T::zero()) {
        return Err(Error::Domain(format!("time step {} must be positive", dt)));
    }
    if state.len() != grid.len() {
        return Err(Error::Size(format!(
            "{} particles on a grid of {}",
            state.len(),
            grid.len()
        )));
    }
    let refresh = options.refresh.fires(state.steps);
    let mut start = state.clone();
    if refresh {
        let sigma = optimal_sigma(&state.positions, grid)?;
        start.switches += reassignment_cycles(&state.sigma, &sigma).len() as u64;
        start.sigma = sigma;
    }

    let trial = frozen_substep(&start, grid, dt);
    let mut next = if refresh && options.switch_handling == SwitchHandling::Located {
        let end_sigma = optimal_sigma(&trial.positions, grid)?;
        if end_sigma == start.sigma {
            trial
        } else {
            split_at_switches(&start, grid, dt, &end_sigma)
        }
    } else {
        trial
    };
    next.time = state.time + dt;
    next.steps = state.steps + 1;
    Ok(next)
}

fn split_at_switches<T: Real>(
    start: &ParticleState<T>,
    grid: &PointCloud<T>,
    dt: T,
    end_sigma: &[usize],
) -> ParticleState<T> {
    let stiffness = T::one() / (start.epsilon * start.epsilon);
    let two = T::lit(2.0);
    let cycles = reassignment_cycles(&start.sigma, end_sigma);
    let mut next = start.clone();
    let mut done = vec![false; start.len()];

    for cycle in &cycles {
        // D(t) = sum over the cycle of |M(t) - A_new|^2 - |M(t) - A_old|^2
        //      = d0 + d1 t + d2 t^2 along M(t) = M + t V + t^2/2 F.
        let (mut d0, mut d1, mut d2) = (T::zero(), T::zero(), T::zero());
        for &a in cycle {
            let m = start.positions.get(a);
            let v = start.velocities.get(a);
            let old = grid.points.get(start.sigma[a]);
            let new = grid.points.get(end_sigma[a]);
            let delta: Vec<T> = new.iter().zip(old).map(|(&x, &y)| x - y).collect();
            let force: Vec<T> = m.iter().zip(old).map(|(&x, &y)| -(x - y) * stiffness).collect();
            d0 = d0 - two * dot(m, &delta) + norm2(new) - norm2(old);
            d1 = d1 - two * dot(v, &delta);
            d2 = d2 - dot(&force, &delta);
        }
        let tau = first_crossing(d0, d1, d2, dt);
        for &a in cycle {
            let (m, v) = (next.positions.get_mut(a), next.velocities.get_mut(a));
            spring_substep(m, v, grid.points.get(start.sigma[a]), stiffness, tau);
            spring_substep(m, v, grid.points.get(end_sigma[a]), stiffness, dt - tau);
            done[a] = true;
        }
    }
    for a in 0..start.len() {
        if !done[a] {
            let (m, v) = (next.positions.get_mut(a), next.velocities.get_mut(a));
            spring_substep(m, v, grid.points.get(start.sigma[a]), stiffness, dt);
        }
    }
    next.sigma = end_sigma.to_vec();
    next.switches = start.switches + cycles.len() as u64;
    next
}

/// First `t` in `[0, dt]` with `d0 + d1 t + d2 t^2 <= 0`, given `D(dt) <= 0`
/// up to rounding.
fn first_crossing<T: Real>(d0: T, d1: T, d2: T, dt: T) -> T {
    let eval = |t: T| d0 + t * (d1 + t * d2);
    if d0 <= T::zero() {
        return T::zero();
    }
    if eval(dt) > T::zero() {
        return dt;
    }
    let (mut lo, mut hi) = (T::zero(), dt);
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if eval(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{hamiltonian, init_state, ScenarioConfig};
    use crate::polar::{make_grid, Domain};

    fn lone_oscillator(d: f64, eps: f64) -> (PointCloud<f64>, ParticleState<f64>) {
        // one particle tied to the center of a 2-cell interval grid's first cell,
        // moved to the origin-centered frame by using a custom point cloud
        let mut g = make_grid::<f64>(Domain::Interval, 2).unwrap();
        g.points = Points::new(1, vec![0.0]).unwrap();
        g.cells = vec![0];
        let s = ParticleState {
            positions: Points::new(1, vec![d]).unwrap(),
            velocities: Points::new(1, vec![0.0]).unwrap(),
            time: 0.0,
            epsilon: eps,
            sigma: vec![0],
            steps: 0,
            switches: 0,
        };
        (g, s)
    }

    #[test]
    fn oscillator_returns_after_one_period() {
        let eps = 0.1;
        let d = 0.02;
        let steps = 200;
        let dt = std::f64::consts::TAU * eps / steps as f64;
        let (g, mut s) = lone_oscillator(d, eps);
        for _ in 0..steps {
            s = step_verlet(&s, &g, dt, &StepOptions::default()).unwrap();
        }
        let err = (s.positions.get(0)[0] - d).abs();
        // Verlet phase error over one period is about (omega dt)^2 / 24 * 2 pi
        let bound = d * (dt / eps).powi(2);
        assert!(err < bound, "{} vs {}", err, bound);
    }

    #[test]
    fn rest_state_is_a_fixed_point() {
        let g = make_grid::<f64>(Domain::Square, 4).unwrap();
        let s = init_state(&ScenarioConfig::new(Domain::Square, 4).unwrap(), &g).unwrap();
        let next = step_verlet(&s, &g, 0.01, &StepOptions::default()).unwrap();
        assert_eq!(next.positions, s.positions);
        assert_eq!(next.velocities, s.velocities);
        assert_eq!(next.sigma, s.sigma);
    }

    #[test]
    fn rejects_nonpositive_step() {
        let (g, s) = lone_oscillator(0.1, 0.1);
        assert!(step_verlet(&s, &g, 0.0, &StepOptions::default()).is_err());
        assert!(step_verlet(&s, &g, -0.01, &StepOptions::default()).is_err());
    }

    #[test]
    fn frozen_substep_is_reversible() {
        let g = make_grid::<f64>(Domain::Square, 3).unwrap();
        let mut cfg = ScenarioConfig::new(Domain::Square, 3).unwrap();
        cfg.initial_velocity = crate::dynamics::VelocityField::Random { amplitude: 0.7 };
        let s = init_state(&cfg, &g).unwrap();
        let back = frozen_substep(&frozen_substep(&s, &g, 0.013), &g, -0.013);
        for (x, y) in back.positions.as_slice().iter().zip(s.positions.as_slice()) {
            assert!((x - y).abs() < 1e-15);
        }
        for (x, y) in back.velocities.as_slice().iter().zip(s.velocities.as_slice()) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn exchanged_pair_oscillates_symmetrically() {
        // each particle starts past the other's grid point; the optimal pairing
        // is the swap and the motion stays mirror-symmetric about x = 1/2
        let g = make_grid::<f64>(Domain::Interval, 2).unwrap();
        let eps = 0.2;
        let mut s = ParticleState {
            positions: Points::new(1, vec![0.78, 0.22]).unwrap(),
            velocities: Points::new(1, vec![0.0, 0.0]).unwrap(),
            time: 0.0,
            epsilon: eps,
            sigma: vec![0, 1],
            steps: 0,
            switches: 0,
        };
        let costs = squared_distance_costs(&s.positions, &g.points).unwrap();
        let brute = crate::assignment::brute_force_assignment(&costs).unwrap();
        assert_eq!(brute.sigma, vec![1, 0]);
        let e = hamiltonian(&s, &g).unwrap();
        assert!((e.potential - brute.total_cost / (2.0 * eps * eps)).abs() < 1e-15);
        for _ in 0..100 {
            s = step_verlet(&s, &g, 0.01, &StepOptions::default()).unwrap();
            let (x0, x1) = (s.positions.get(0)[0], s.positions.get(1)[0]);
            assert!((x0 + x1 - 1.0).abs() < 1e-14);
            assert!((s.velocities.get(0)[0] + s.velocities.get(1)[0]).abs() < 1e-13);
        }
        assert_eq!(s.sigma, vec![1, 0]);
        assert_eq!(s.switches, 1);
    }

    #[test]
    fn crossing_root() {
        // D(t) = 1 - 4 t^2 crosses at 1/2
        let t: f64 = first_crossing(1.0, 0.0, -4.0, 1.0);
        assert!((t - 0.5).abs() < 1e-15);
        assert_eq!(first_crossing(-1.0, 0.0, 0.0, 1.0), 0.0);
        assert_eq!(first_crossing(1.0, 0.0, 0.0, 1.0), 1.0);
    }
}
