//! One-dimensional sheet model.
//!
//! On the line the optimal pairing is the monotone one, so the spring force on
//! each particle is `-(x - b_rank) / eps^2`, where `b_rank` is the background
//! point of the same rank. This is the electric field of a neutralizing
//! background in `eps^2 phi'' = 1 - rho`, so the particle system is a
//! Vlasov-Poisson sheet model without any approximation. The interval is not
//! periodic; the equivalence holds while particles stay interior.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Particle positions and velocities with equal weights `1 / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSamples<T> {
    pub x: Vec<T>,
    pub xi: Vec<T>,
}

impl<T: Real> PhaseSamples<T> {
    pub fn new(x: Vec<T>, xi: Vec<T>) -> Result<Self> {
        if x.len() != xi.len() {
            return Err(Error::Size(format!("{} positions vs {} velocities", x.len(), xi.len())));
        }
        Ok(Self { x, xi })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn weight(&self) -> T {
        T::one() / T::from_count(self.len())
    }
}

fn check_background<T: Real>(background: &[T]) -> Result<()> {
    if background.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("background must be sorted and distinct".into()));
    }
    Ok(())
}

fn ranks<T: Real>(x: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&i, &j| x[i].partial_cmp(&x[j]).unwrap_or(Ordering::Equal).then(i.cmp(&j)));
    let mut rank = vec![0; x.len()];
    for (k, &a) in order.iter().enumerate() {
        rank[a] = k;
    }
    rank
}

/// `-(x_a - background[rank(a)]) / eps^2`.
pub fn sheet_force<T: Real>(x: &[T], background: &[T], epsilon: T) -> Result<Vec<T>> {
    if x.len() != background.len() {
        return Err(Error::Size(format!(
            "{} particles vs {} background points",
            x.len(),
            background.len()
        )));
    }
    check_background(background)?;
    let inv = T::one() / (epsilon * epsilon);
    let rank = ranks(x);
    Ok(x.iter()
        .zip(&rank)
        .map(|(&xa, &r)| -(xa - background[r]) * inv)
        .collect())
}

/// Cold beam: particles start at `b + amplitude sin(2 pi b)` with zero velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct ColdBeam<T> {
    pub background: Vec<T>,
    pub epsilon: T,
    pub samples: PhaseSamples<T>,
    pub time: T,
    /// Set once two particles have changed order.
    pub reordered: bool,
}

impl<T: Real> ColdBeam<T> {
    pub fn new(background: Vec<T>, amplitude: T, epsilon: T) -> Result<Self> {
        check_background(&background)?;
        if background.is_empty() {
            return Err(Error::Size("empty background".into()));
        }
        if !(epsilon > T::zero()) {
            return Err(Error::Domain(format!("epsilon {} must be positive", epsilon)));
        }
        let x: Vec<T> = background
            .iter()
            .map(|&b| b + amplitude * (T::TAU() * b).sin())
            .collect();
        let xi = vec![T::zero(); x.len()];
        let mut beam = Self {
            background,
            epsilon,
            samples: PhaseSamples { x, xi },
            time: T::zero(),
            reordered: false,
        };
        beam.reordered = !beam.ordered();
        Ok(beam)
    }

    fn ordered(&self) -> bool {
        self.samples.x.windows(2).all(|w| w[0] < w[1])
    }

    /// Velocity Verlet with the sheet force re-sorted at every evaluation.
    pub fn step(&mut self, dt: T) -> Result<()> {
        let half = T::lit(0.5);
        let f0 = sheet_force(&self.samples.x, &self.background, self.epsilon)?;
        for a in 0..self.samples.len() {
            self.samples.xi[a] = self.samples.xi[a] + half * dt * f0[a];
            self.samples.x[a] = self.samples.x[a] + dt * self.samples.xi[a];
        }
        let f1 = sheet_force(&self.samples.x, &self.background, self.epsilon)?;
        for a in 0..self.samples.len() {
            self.samples.xi[a] = self.samples.xi[a] + half * dt * f1[a];
        }
        self.time = self.time + dt;
        if !self.ordered() {
            self.reordered = true;
        }
        Ok(())
    }

    /// Displacement field projected on the initial displacement.
    fn mode(&self, shape: &[T]) -> T {
        self.samples
            .x
            .iter()
            .zip(&self.background)
            .zip(shape)
            .fold(T::zero(), |acc, ((&x, &b), &w)| acc + (x - b) * w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationReport<T> {
    pub period: T,
    pub reordered: bool,
    pub steps: u64,
}

/// Period of the cold-beam plasma oscillation.
///
/// The displacement is projected on its initial shape; the period is the time
/// between the first and third zero crossings, each located by linear
/// interpolation. While order is preserved every particle is an independent
/// oscillator of angular frequency `1 / eps`. Once particles cross, the
/// result is flagged and the period may be `NaN` if no return was seen.
pub fn cold_oscillation_period<T: Real>(
    background: &[T],
    amplitude: T,
    epsilon: T,
    dt: T,
) -> Result<OscillationReport<T>> {
    if !(dt > T::zero()) {
        return Err(Error::Domain(format!("time step {} must be positive", dt)));
    }
    let mut beam = ColdBeam::new(background.to_vec(), amplitude, epsilon)?;
    let shape: Vec<T> = beam.samples.x.iter().zip(background).map(|(&x, &b)| x - b).collect();
    if shape.iter().all(|&w| w == T::zero()) {
        return Err(Error::Domain("initial displacement vanishes".into()));
    }
    // generous cap: ten expected periods
    let max_steps = (T::lit(10.0) * T::TAU() * epsilon / dt)
        .to_u64()
        .unwrap_or(u64::MAX)
        .max(100);
    let mut crossings: Vec<T> = Vec::with_capacity(3);
    let mut prev = beam.mode(&shape);
    let mut steps = 0u64;
    while crossings.len() < 3 {
        if steps >= max_steps {
            if beam.reordered {
                return Ok(OscillationReport {
                    period: T::nan(),
                    reordered: true,
                    steps,
                });
            }
            return Err(Error::Domain(format!(
                "no oscillation detected within {} steps",
                max_steps
            )));
        }
        let t0 = beam.time;
        beam.step(dt)?;
        steps += 1;
        let cur = beam.mode(&shape);
        if (prev > T::zero()) != (cur > T::zero()) {
            crossings.push(t0 + dt * prev / (prev - cur));
        }
        prev = cur;
    }
    Ok(OscillationReport {
        period: crossings[2] - crossings[0],
        reordered: beam.reordered,
        steps,
    })
}

/// Normalized `(x, xi)` histogram; `mass` is row-major with one row per `xi` bin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseHistogram<T> {
    pub x_edges: Vec<T>,
    pub xi_edges: Vec<T>,
    pub mass: Vec<T>,
    pub inside_mass: T,
    pub clipped_mass: T,
}

impl<T: Real> PhaseHistogram<T> {
    pub fn x_bins(&self) -> usize {
        self.x_edges.len() - 1
    }

    pub fn xi_bins(&self) -> usize {
        self.xi_edges.len() - 1
    }

    pub fn get(&self, xi_bin: usize, x_bin: usize) -> T {
        self.mass[xi_bin * self.x_bins() + x_bin]
    }

    pub fn row_mass(&self, xi_bin: usize) -> T {
        let w = self.x_bins();
        self.mass[xi_bin * w..(xi_bin + 1) * w]
            .iter()
            .fold(T::zero(), |a, &m| a + m)
    }

    /// Mean and standard deviation of `xi` over the inside mass, using bin centers.
    pub fn xi_moments(&self) -> (T, T) {
        let half = T::lit(0.5);
        let (mut m0, mut m1, mut m2) = (T::zero(), T::zero(), T::zero());
        for j in 0..self.xi_bins() {
            let c = (self.xi_edges[j] + self.xi_edges[j + 1]) * half;
            let w = self.row_mass(j);
            m0 = m0 + w;
            m1 = m1 + w * c;
            m2 = m2 + w * c * c;
        }
        let mean = m1 / m0;
        (mean, (m2 / m0 - mean * mean).max(T::zero()).sqrt())
    }
}

fn edges<T: Real>(lo: T, hi: T, bins: usize) -> Vec<T> {
    let w = (hi - lo) / T::from_count(bins);
    (0..=bins).map(|k| lo + w * T::from_count(k)).collect()
}

fn bin_of<T: Real>(v: T, lo: T, hi: T, bins: usize) -> Option<usize> {
    if !(v >= lo && v <= hi) {
        return None;
    }
    let k = ((v - lo) / (hi - lo) * T::from_count(bins))
        .floor()
        .to_usize()
        .unwrap_or(bins);
    Some(k.min(bins - 1))
}

/// Bins positions over `[0, 1]` and velocities over `xi_range`; samples outside
/// either range count toward `clipped_mass`.
pub fn phase_histogram<T: Real>(
    samples: &PhaseSamples<T>,
    x_bins: usize,
    xi_bins: usize,
    xi_range: (T, T),
) -> Result<PhaseHistogram<T>> {
    if x_bins == 0 || xi_bins == 0 {
        return Err(Error::Size("histogram needs at least one bin per axis".into()));
    }
    let (lo, hi) = xi_range;
    if !(lo < hi) {
        return Err(Error::Domain(format!("empty velocity range [{}, {}]", lo, hi)));
    }
    let w = samples.weight();
    let mut counts = vec![0u64; x_bins * xi_bins];
    let mut clipped = 0u64;
    for (&x, &xi) in samples.x.iter().zip(&samples.xi) {
        match (bin_of(x, T::zero(), T::one(), x_bins), bin_of(xi, lo, hi, xi_bins)) {
            (Some(i), Some(j)) => counts[j * x_bins + i] += 1,
            _ => clipped += 1,
        }
    }
    let inside = samples.len() as u64 - clipped;
    Ok(PhaseHistogram {
        x_edges: edges(T::zero(), T::one(), x_bins),
        xi_edges: edges(lo, hi, xi_bins),
        mass: counts.iter().map(|&c| w * T::from_count(c as usize)).collect(),
        inside_mass: w * T::from_count(inside as usize),
        clipped_mass: w * T::from_count(clipped as usize),
    })
}

/// Cell-centered background `(k + 1/2) h` with `h = 1 / n`, bit-identical to the
/// interval grid.
pub fn uniform_background<T: Real>(n: usize) -> Vec<T> {
    let h = T::one() / T::from_count(n);
    (0..n).map(|k| (T::from_count(k) + T::lit(0.5)) * h).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn forces_at_rest_and_under_shift() {
        let bg = uniform_background::<f64>(8);
        assert!(sheet_force(&bg, &bg, 0.1).unwrap().iter().all(|&f| f == 0.0));
        let d = 0.01;
        let shifted: Vec<f64> = bg.iter().map(|b| b + d).collect();
        for f in sheet_force(&shifted, &bg, 0.1).unwrap() {
            assert!((f + d / 0.01).abs() < 1e-12);
        }
    }

    #[test]
    fn duplicate_background_rejected() {
        assert!(sheet_force(&[0.1, 0.2], &[0.5, 0.5], 0.1).is_err());
        assert!(sheet_force(&[0.1, 0.2], &[0.6, 0.5], 0.1).is_err());
        assert!(sheet_force(&[0.1], &[0.5, 0.6], 0.1).is_err());
    }

    #[test]
    fn total_force_is_center_of_mass_spring() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bg = uniform_background::<f64>(20);
        let x: Vec<f64> = (0..20).map(|_| rng.gen::<f64>()).collect();
        let f = sheet_force(&x, &bg, 0.2).unwrap();
        let sum: f64 = f.iter().sum();
        let expect = -(x.iter().sum::<f64>() - bg.iter().sum::<f64>()) / 0.04;
        assert!((sum - expect).abs() < 1e-10);
    }

    #[test]
    fn period_scales_with_epsilon() {
        let bg = uniform_background::<f64>(32);
        for eps in [0.1, 0.05] {
            let dt = std::f64::consts::TAU * eps / 200.0;
            let r = cold_oscillation_period(&bg, 1e-3, eps, dt).unwrap();
            assert!(!r.reordered);
            let expect = std::f64::consts::TAU * eps;
            assert!((r.period - expect).abs() < 0.01 * expect, "{} vs {}", r.period, expect);
        }
    }

    #[test]
    fn reorder_flag() {
        let bg = uniform_background::<f64>(32);
        // b + a sin(2 pi b) stays monotone, hence ordered for all time, while 2 pi a < 1
        let r = cold_oscillation_period(&bg, 2.0 / 32.0, 0.1, 0.001).unwrap();
        assert!(!r.reordered);
        let r = cold_oscillation_period(&bg, 0.25, 0.1, 0.001).unwrap();
        assert!(r.reordered);
    }

    #[test]
    fn resting_beam_fills_zero_row() {
        let bg = uniform_background::<f64>(16);
        let beam = ColdBeam::new(bg, 0.0, 0.1).unwrap();
        let h = phase_histogram(&beam.samples, 4, 5, (-1.0, 1.0)).unwrap();
        assert_eq!(h.row_mass(2), 1.0);
        assert_eq!(h.clipped_mass, 0.0);
    }

    #[test]
    fn clipped_and_inside_mass_sum_to_one() {
        let s = PhaseSamples::new(vec![0.1, 0.5, 0.9, 1.2], vec![0.0, 3.0, -0.5, 0.0]).unwrap();
        let h = phase_histogram(&s, 3, 3, (-1.0, 1.0)).unwrap();
        assert_eq!(h.inside_mass, 0.5);
        assert_eq!(h.clipped_mass, 0.5);
        assert_eq!(h.mass.iter().sum::<f64>(), 0.5);
        assert!(phase_histogram(&s, 0, 3, (-1.0, 1.0)).is_err());
    }

    #[test]
    fn quarter_period_velocity_spread() {
        let n = 256;
        let (a, eps) = (1e-3, 0.1);
        let steps = 200;
        let dt = std::f64::consts::TAU * eps / steps as f64;
        let mut beam = ColdBeam::new(uniform_background::<f64>(n), a, eps).unwrap();
        for _ in 0..steps / 4 {
            beam.step(dt).unwrap();
        }
        let scale = a / eps;
        let h = phase_histogram(&beam.samples, 16, 64, (-1.5 * scale, 1.5 * scale)).unwrap();
        assert_eq!(h.clipped_mass, 0.0);
        let (mean, std) = h.xi_moments();
        assert!(mean.abs() < 0.05 * scale);
        let expect = scale / 2f64.sqrt();
        assert!((std - expect).abs() < 0.1 * expect, "{} vs {}", std, expect);
    }
}
