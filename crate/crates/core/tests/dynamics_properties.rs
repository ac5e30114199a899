use permflow::assignment::{brute_force_assignment, squared_distance_costs};
use permflow::dynamics::{
    evolve, frozen_substep, hamiltonian, init_state, pressure_estimate, step_verlet, ParticleState, RefreshPolicy,
    ScenarioConfig, StepOptions, VelocityField,
};
use permflow::polar::{make_grid, Domain, PointCloud};
use permflow::Points;
use proptest::prelude::*;

fn random_state(domain: Domain, n: usize, seed: u64, amplitude: f64) -> (PointCloud<f64>, ParticleState<f64>) {
    let mut cfg = ScenarioConfig::<f64>::new(domain, n).unwrap();
    cfg.initial_velocity = VelocityField::Random { amplitude };
    cfg.seed = seed;
    let grid = make_grid(domain, n).unwrap();
    let state = init_state(&cfg, &grid).unwrap();
    (grid, state)
}

fn advance(
    state: &ParticleState<f64>,
    grid: &PointCloud<f64>,
    dt: f64,
    steps: usize,
    options: &StepOptions,
) -> ParticleState<f64> {
    let mut s = state.clone();
    for _ in 0..steps {
        s = step_verlet(&s, grid, dt, options).unwrap();
    }
    s
}

#[test]
fn single_particle_hamiltonian() {
    let mut grid = make_grid::<f64>(Domain::Interval, 2).unwrap();
    grid.points = Points::new(1, vec![0.5]).unwrap();
    grid.cells = vec![0];
    let eps = 0.1;
    let d = 0.03;
    let s = ParticleState {
        positions: Points::new(1, vec![0.5 + d]).unwrap(),
        velocities: Points::new(1, vec![0.0]).unwrap(),
        time: 0.0,
        epsilon: eps,
        sigma: vec![0],
        steps: 0,
        switches: 0,
    };
    let e = hamiltonian(&s, &grid).unwrap();
    assert!((e.potential - d * d / (2.0 * eps * eps)).abs() < 1e-14);
    assert_eq!(e.kinetic, 0.0);
    let p = pressure_estimate(&s, &grid).unwrap();
    assert!((p.gradients.get(0)[0] - d / (eps * eps)).abs() < 1e-12);
}

#[test]
fn hamiltonian_potential_matches_enumeration() {
    for seed in 0..20 {
        let (grid, mut s) = random_state(Domain::Square, 2, seed, 1.0);
        s = advance(&s, &grid, 0.01, 7, &StepOptions::default());
        let costs = squared_distance_costs(&s.positions, &grid.points).unwrap();
        let brute = brute_force_assignment(&costs).unwrap();
        let e = hamiltonian(&s, &grid).unwrap();
        let expect = brute.total_cost / (2.0 * s.epsilon * s.epsilon);
        assert!((e.potential - expect).abs() <= 1e-12 * (1.0 + expect));
        // the infimum never exceeds the potential of the running pairing
        assert!(e.potential <= s.frozen_potential(&grid) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabeling_commutes_with_dynamics(seed in 0u64..1000, rot in 0usize..9) {
        let (grid, s) = random_state(Domain::Square, 3, seed, 0.5);
        let n = s.len();
        let perm: Vec<usize> = (0..n).map(|a| (a + rot) % n).collect();
        let options = StepOptions::default();
        let direct = advance(&s, &grid, 0.005, 20, &options).relabeled(&perm);
        let relabeled = advance(&s.relabeled(&perm), &grid, 0.005, 20, &options);
        for (x, y) in direct.positions.as_slice().iter().zip(relabeled.positions.as_slice()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in direct.velocities.as_slice().iter().zip(relabeled.velocities.as_slice()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn frozen_substep_reverses(seed in 0u64..1000, h in 0.001f64..0.05) {
        let (grid, s) = random_state(Domain::Disk, 4, seed, 1.0);
        let back = frozen_substep(&frozen_substep(&s, &grid, h), &grid, -h);
        for (x, y) in back.positions.as_slice().iter().zip(s.positions.as_slice()) {
            prop_assert!((x - y).abs() < 1e-13);
        }
        for (x, y) in back.velocities.as_slice().iter().zip(s.velocities.as_slice()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}

/// Frozen pairing: every particle is an independent oscillator, and Verlet
/// conserves its energy to second order in `dt`.
#[test]
fn frozen_pairing_energy_error_is_second_order() {
    let (grid, s) = random_state(Domain::Square, 4, 5, 2.0);
    let eps = s.epsilon;
    let energy = |st: &ParticleState<f64>| st.kinetic() + st.frozen_potential(&grid);
    let e0 = energy(&s);
    let options = StepOptions {
        refresh: RefreshPolicy::Never,
        ..StepOptions::default()
    };
    let mut errors = Vec::new();
    for k in 0..3 {
        let dt = std::f64::consts::TAU * eps / 50.0 / 2f64.powi(k);
        let steps = (1.0 / dt).round() as usize;
        let mut st = s.clone();
        let mut worst: f64 = 0.0;
        for _ in 0..steps {
            st = step_verlet(&st, &grid, dt, &options).unwrap();
            worst = worst.max((energy(&st) - e0).abs() / e0);
        }
        assert_eq!(st.sigma, s.sigma);
        // closed form: x(t) = A + (x0 - A) cos(t / eps) + eps v0 sin(t / eps)
        let t = st.time;
        for a in 0..s.len() {
            for k in 0..2 {
                let anchor = grid.points.get(a)[k];
                let exact = anchor
                    + (s.positions.get(a)[k] - anchor) * (t / eps).cos()
                    + eps * s.velocities.get(a)[k] * (t / eps).sin();
                assert!((st.positions.get(a)[k] - exact).abs() < 0.2 * (dt / eps).powi(2));
            }
        }
        errors.push(worst);
    }
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order > 1.9, "{:?}", errors);
    }
}

#[test]
fn hamiltonian_is_continuous_across_switches() {
    let cfg = ScenarioConfig::<f64>::rotation(8, std::f64::consts::PI).unwrap();
    let run = evolve(&cfg).unwrap();
    let h0 = run.diagnostics.records[0].hamiltonian;
    assert!(run.final_state.switches > 0);
    for w in run.diagnostics.records.windows(2) {
        if w[1].switches > w[0].switches {
            // a jump would be O(h^2 / eps^2) relative, the located switch keeps it O(dt^2)
            assert!((w[1].hamiltonian - w[0].hamiltonian).abs() < 1e-3 * h0);
        }
    }
}

#[test]
fn evolve_is_deterministic() {
    let mut cfg = ScenarioConfig::<f64>::new(Domain::Square, 4).unwrap();
    cfg.initial_velocity = VelocityField::Random { amplitude: 1.0 };
    cfg.seed = 9;
    cfg.t_final = 0.3;
    let a = evolve(&cfg).unwrap();
    let b = evolve(&cfg).unwrap();
    assert_eq!(a.final_state, b.final_state);
    assert_eq!(a.diagnostics, b.diagnostics);
}
