//! Closed-form flows on the disk and the cylinder, used as oracles.
//!
//! For the point reflection `h(z) = -z` of the unit disk both rigid rotations
//! `z e^{+i pi t}` and `z e^{-i pi t}` are shortest paths, driven by the same
//! pressure `p = pi^2 |z|^2 / 2`. On the cylinder a generalized path exists in
//! which each particle spreads over a circle of radius
//! `sqrt(1 - |z|^2) sin(pi t)` centred at `z cos(pi t)`, collapsing onto `-z` at
//! `t = 1`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::Points;
use crate::polar::{make_grid, Domain, PointCloud};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Counterclockwise,
    Clockwise,
}

impl Orientation {
    pub fn sign<T: Real>(self) -> T {
        match self {
            Orientation::Counterclockwise => T::one(),
            Orientation::Clockwise => -T::one(),
        }
    }
}

/// `z e^{+-i pi t}`.
pub fn rotation_flow<T: Real>(t: T, z: Complex<T>, orientation: Orientation) -> Complex<T> {
    z * Complex::from_polar(T::one(), orientation.sign::<T>() * T::PI() * t)
}

/// Gradient of `p = pi^2 |x_h|^2 / 2`, where `x_h` are the first two
/// coordinates; any third (vertical) component is zero.
pub fn rotation_pressure_gradient<T: Real>(x: &[T]) -> Vec<T> {
    let k = T::PI() * T::PI();
    x.iter()
        .enumerate()
        .map(|(i, &c)| if i < 2 { k * c } else { T::zero() })
        .collect()
}

/// One fluid particle of the generalized cylinder solution, restricted to the
/// branch labelled by the unit complex `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedSample<T> {
    pub z: Complex<T>,
    pub s: T,
    pub omega: Complex<T>,
    /// 1 for the true solution. Other values deliberately corrupt the circle radius.
    pub radius_scale: T,
}

impl<T: Real> GeneralizedSample<T> {
    pub fn radius(&self, t: T) -> T {
        self.radius_scale * (T::one() - self.z.norm_sqr()).max(T::zero()).sqrt() * (T::PI() * t).sin()
    }

    /// `X(t) = z cos(pi t) + sqrt(1 - |z|^2) sin(pi t) omega`.
    pub fn position(&self, t: T) -> Complex<T> {
        self.z * (T::PI() * t).cos() + self.omega * self.radius(t)
    }

    pub fn elevation(&self, _t: T) -> T {
        self.s
    }

    pub fn velocity(&self, t: T) -> Complex<T> {
        let pi = T::PI();
        let r0 = self.radius_scale * (T::one() - self.z.norm_sqr()).max(T::zero()).sqrt();
        -self.z * (pi * (pi * t).sin()) + self.omega * (r0 * pi * (pi * t).cos())
    }

    pub fn with_radius_scale(mut self, scale: T) -> Self {
        self.radius_scale = scale;
        self
    }
}

pub fn generalized_cylinder_sample<T: Real>(z: Complex<T>, s: T, omega: Complex<T>) -> Result<GeneralizedSample<T>> {
    if !(z.norm_sqr() <= T::one()) {
        return Err(Error::Domain(format!("|z| = {} exceeds 1", z.norm())));
    }
    if !((omega.norm() - T::one()).abs() <= T::lit(1e3) * T::epsilon()) {
        return Err(Error::Domain(format!("|omega| = {} is not 1", omega.norm())));
    }
    if !(s >= T::zero() && s <= T::one()) {
        return Err(Error::Domain(format!("elevation {} outside [0, 1]", s)));
    }
    Ok(GeneralizedSample {
        z,
        s,
        omega,
        radius_scale: T::one(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

impl VerificationReport {
    fn from_checks(checks: Vec<Check>) -> Self {
        let all_pass = checks.iter().all(|c| c.pass);
        Self { checks, all_pass }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check<T: Real>(name: &str, residual: T, tol: T) -> Check {
    Check {
        name: name.to_string(),
        max_residual: residual.to_f64().unwrap_or(f64::NAN),
        pass: residual <= tol,
    }
}

/// Interior times `j / 32`, `j = 1..31`, at which differential laws are checked.
fn check_times<T: Real>() -> impl Iterator<Item = T> {
    (1..32).map(|j| T::from_count(j) / T::lit(32.0))
}

/// `max |X''_fd(t) + pi^2 X(t)|` with centered second differences of step `dt_fd`.
pub fn acceleration_residual<T: Real>(samples: &[GeneralizedSample<T>], dt_fd: T) -> T {
    let pi2 = T::PI() * T::PI();
    let two = T::lit(2.0);
    let mut worst = T::zero();
    for x in samples {
        for t in check_times::<T>() {
            let acc = (x.position(t + dt_fd) - x.position(t) * two + x.position(t - dt_fd)) / (dt_fd * dt_fd);
            worst = worst.max((acc + x.position(t) * pi2).norm());
        }
    }
    worst
}

/// Checks the generalized solution sample by sample:
/// endpoint `X(1) = -z`, acceleration `X'' = -pi^2 X`, constant elevation, and
/// the radius law `|X(t) - z cos(pi t)| = sqrt(1 - |z|^2) sin(pi t)`.
pub fn verify_generalized_solution<T: Real>(samples: &[GeneralizedSample<T>], dt_fd: T, tol: T) -> VerificationReport {
    let pi = T::PI();
    let mut endpoint = T::zero();
    let mut elevation = T::zero();
    let mut radius = T::zero();
    for x in samples {
        endpoint = endpoint.max((x.position(T::one()) + x.z).norm());
        for t in check_times::<T>() {
            elevation = elevation.max((x.elevation(t) - x.s).abs());
            let expect = (T::one() - x.z.norm_sqr()).max(T::zero()).sqrt() * (pi * t).sin();
            radius = radius.max(((x.position(t) - x.z * (pi * t).cos()).norm() - expect).abs());
        }
    }
    let accel = acceleration_residual(samples, dt_fd);
    VerificationReport::from_checks(vec![
        check("endpoint", endpoint, tol),
        check("acceleration", accel, tol),
        check("elevation", elevation, tol),
        check("radius", radius, tol),
    ])
}

/// Time-ordered frames of `N` particle positions.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePath<T> {
    times: Vec<T>,
    frames: Vec<Points<T>>,
}

impl<T: Real> DiscretePath<T> {
    pub fn new(times: Vec<T>, frames: Vec<Points<T>>) -> Result<Self> {
        if times.len() != frames.len() || times.len() < 2 {
            return Err(Error::Size(format!(
                "{} times for {} frames (need at least 2)",
                times.len(),
                frames.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("times must be strictly increasing".into()));
        }
        let (n, d) = (frames[0].len(), frames[0].dim());
        if frames.iter().any(|f| f.len() != n || f.dim() != d) {
            return Err(Error::Size("frames differ in particle count or dimension".into()));
        }
        Ok(Self { times, frames })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn frames(&self) -> &[Points<T>] {
        &self.frames
    }

    /// Samples `f(t, particle)` at `frames` evenly spaced times covering `[0, 1]`.
    pub fn sample(frames: usize, particles: usize, dim: usize, f: impl Fn(T, usize) -> Vec<T>) -> Result<Self> {
        if frames < 2 {
            return Err(Error::Size("need at least 2 frames".into()));
        }
        let times: Vec<T> = (0..frames)
            .map(|k| T::from_count(k) / T::from_count(frames - 1))
            .collect();
        let mut out = Vec::with_capacity(frames);
        for &t in &times {
            let mut coords = Vec::with_capacity(particles * dim);
            for a in 0..particles {
                coords.extend(f(t, a));
            }
            out.push(Points::new(dim, coords)?);
        }
        Self::new(times, out)
    }
}

/// Midpoint-rule kinetic action `sum_k sum_a w_a |dM_a|^2 / (2 dt_k)`.
pub fn action_of_discrete_path<T: Real>(path: &DiscretePath<T>, weights: &[T]) -> Result<T> {
    let n = path.frames[0].len();
    if weights.len() != n {
        return Err(Error::Size(format!("{} weights for {} particles", weights.len(), n)));
    }
    let two = T::lit(2.0);
    let mut action = T::zero();
    for k in 1..path.times.len() {
        let dt = path.times[k] - path.times[k - 1];
        let (prev, next) = (&path.frames[k - 1], &path.frames[k]);
        let mut interval = T::zero();
        for a in 0..n {
            let d2 = crate::points::dist2(prev.get(a), next.get(a));
            interval = interval + weights[a] * d2;
        }
        action = action + interval / (two * dt);
    }
    Ok(action)
}

fn to_complex<T: Real>(p: &[T]) -> Complex<T> {
    Complex::new(p[0], p[1])
}

/// Positions of the retained-cell disk grid as complex numbers.
pub fn disk_quadrature<T: Real>(n_per_axis: usize) -> Result<Vec<Complex<T>>> {
    let g = make_grid::<T>(Domain::Disk, n_per_axis)?;
    Ok(g.points.iter().map(to_complex).collect())
}

/// `m` equally spaced unit complex numbers, starting at 1.
pub fn circle_quadrature<T: Real>(m: usize) -> Vec<Complex<T>> {
    (0..m)
        .map(|k| Complex::from_polar(T::one(), T::TAU() * T::from_count(k) / T::from_count(m)))
        .collect()
}

/// The rigid rotation of the disk grid sampled at `frames` times.
pub fn rotation_path<T: Real>(zs: &[Complex<T>], orientation: Orientation, frames: usize) -> Result<DiscretePath<T>> {
    DiscretePath::sample(frames, zs.len(), 2, |t, a| {
        let w = rotation_flow(t, zs[a], orientation);
        vec![w.re, w.im]
    })
}

/// Action of the classical rotation (uniform weights over `zs`).
pub fn rotation_action<T: Real>(zs: &[Complex<T>], orientation: Orientation, frames: usize) -> Result<T> {
    let w = vec![T::one() / T::from_count(zs.len()); zs.len()];
    action_of_discrete_path(&rotation_path(zs, orientation, frames)?, &w)
}

/// Action of the generalized solution with uniform weights over `zs x omegas`.
pub fn generalized_action<T: Real>(zs: &[Complex<T>], omegas: &[Complex<T>], frames: usize) -> Result<T> {
    let w = vec![T::one() / T::from_count(omegas.len()); omegas.len()];
    let mut total = T::zero();
    for &z in zs {
        let samples = omegas
            .iter()
            .map(|&om| generalized_cylinder_sample(z, T::zero(), om))
            .collect::<Result<Vec<_>>>()?;
        let path = DiscretePath::sample(frames, samples.len(), 2, |t, a| {
            let x = samples[a].position(t);
            vec![x.re, x.im]
        })?;
        total = total + action_of_discrete_path(&path, &w)?;
    }
    Ok(total / T::from_count(zs.len()))
}

/// Samples for every pair of a disk grid point and a circle direction, at elevation 1/2.
pub fn generalized_quadrature<T: Real>(disk_n: usize, circle_m: usize) -> Result<Vec<GeneralizedSample<T>>> {
    let zs = disk_quadrature::<T>(disk_n)?;
    let omegas = circle_quadrature::<T>(circle_m);
    let mut out = Vec::with_capacity(zs.len() * omegas.len());
    for &z in &zs {
        for &om in &omegas {
            out.push(generalized_cylinder_sample(z, T::lit(0.5), om)?);
        }
    }
    Ok(out)
}

/// Checks both classical rotations on the disk grid: endpoint `-z`, acceleration
/// `g'' = -grad p(g)` by finite differences, and equal actions.
pub fn verify_rotation_solutions<T: Real>(
    n_per_axis: usize,
    frames: usize,
    dt_fd: T,
    tol: T,
) -> Result<VerificationReport> {
    let zs = disk_quadrature::<T>(n_per_axis)?;
    let two = T::lit(2.0);
    let mut endpoint = T::zero();
    let mut accel = T::zero();
    for &z in &zs {
        for o in [Orientation::Counterclockwise, Orientation::Clockwise] {
            endpoint = endpoint.max((rotation_flow(T::one(), z, o) + z).norm());
            for t in check_times::<T>() {
                let g = rotation_flow(t, z, o);
                let acc = (rotation_flow(t + dt_fd, z, o) - g * two + rotation_flow(t - dt_fd, z, o)) / (dt_fd * dt_fd);
                let grad = rotation_pressure_gradient(&[g.re, g.im]);
                accel = accel.max((acc + to_complex(&grad)).norm());
            }
        }
    }
    let plus = rotation_action(&zs, Orientation::Counterclockwise, frames)?;
    let minus = rotation_action(&zs, Orientation::Clockwise, frames)?;
    let gap = (plus - minus).abs() / plus;
    Ok(VerificationReport::from_checks(vec![
        check("endpoint", endpoint, tol),
        check("acceleration", accel, tol),
        check("action_equality", gap, tol),
    ]))
}

/// A map given by its values on a list of points.
#[derive(Debug, Clone, PartialEq)]
pub struct MapTable<T> {
    pub sources: Points<T>,
    pub images: Points<T>,
}

impl<T: Real> MapTable<T> {
    pub fn new(sources: Points<T>, images: Points<T>) -> Result<Self> {
        if sources.len() != images.len() || sources.dim() != images.dim() {
            return Err(Error::Size("map table sources and images differ in shape".into()));
        }
        Ok(Self { sources, images })
    }

    pub fn from_fn(sources: &Points<T>, f: impl FnMut(&[T]) -> Vec<T>) -> Result<Self> {
        Self::new(sources.clone(), sources.map(f)?)
    }
}

/// `h(x_1, x_2, x_3) = (H(x_1, x_2), x_3)` on every layer of a 3D grid whose
/// horizontal trace is the source list of `planar`.
pub fn lift_2d_map<T: Real>(planar: &MapTable<T>, grid: &PointCloud<T>) -> Result<MapTable<T>> {
    if planar.sources.dim() != 2 || grid.dim() != 3 {
        return Err(Error::Size("lift needs a 2D map and a 3D grid".into()));
    }
    let layer = planar.sources.len();
    if layer == 0 || !grid.len().is_multiple_of(layer) {
        return Err(Error::Size(format!(
            "grid of {} points is not layered by {}",
            grid.len(),
            layer
        )));
    }
    let mut images = Vec::with_capacity(grid.len() * 3);
    for (k, p) in grid.points.iter().enumerate() {
        let trace = planar.sources.get(k % layer);
        if p[0] != trace[0] || p[1] != trace[1] {
            return Err(Error::Size(format!(
                "grid point {} does not lie over the planar trace",
                k
            )));
        }
        let img = planar.images.get(k % layer);
        images.extend_from_slice(&[img[0], img[1], p[2]]);
    }
    MapTable::new(grid.points.clone(), Points::new(3, images)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn rotation_flow_values() {
        let z = c(0.3, -0.4);
        assert_eq!(rotation_flow(0.0, z, Orientation::Counterclockwise), z);
        for o in [Orientation::Counterclockwise, Orientation::Clockwise] {
            assert!((rotation_flow(1.0, z, o) + z).norm() < 1e-15);
        }
        assert!((rotation_flow(0.5, z, Orientation::Counterclockwise) - c(0.0, 1.0) * z).norm() < 1e-15);
    }

    #[test]
    fn pressure_gradient_values() {
        assert_eq!(rotation_pressure_gradient(&[0.0, 0.0]), vec![0.0, 0.0]);
        assert_eq!(rotation_pressure_gradient(&[1.0, 0.0]), vec![PI * PI, 0.0]);
        assert_eq!(rotation_pressure_gradient(&[0.5, 0.5, 0.3])[2], 0.0);
        let x = [0.31f64, -0.77];
        let g: Vec<f64> = rotation_pressure_gradient(&x);
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        assert!(((g[0] * g[0] + g[1] * g[1]).sqrt() - PI * PI * r).abs() < 1e-14);
    }

    #[test]
    fn generalized_sample_endpoints() {
        let om = c(0.6, 0.8);
        let z = c(0.2, 0.1);
        let x = generalized_cylinder_sample(z, 0.4, om).unwrap();
        assert_eq!(x.position(0.0), z);
        assert!((x.position(1.0) + z).norm() < 1e-15);
        assert_eq!(x.elevation(0.7), 0.4);
        // boundary particle: straight diameter traversal
        let b = generalized_cylinder_sample(c(0.0, 1.0), 0.0, om).unwrap();
        for t in [0.1, 0.5, 0.9] {
            assert!((b.position(t) - c(0.0, 1.0) * (PI * t).cos()).norm() < 1e-15);
        }
        // z = 0 at t = 1/2 sits on omega
        let o = generalized_cylinder_sample(c(0.0, 0.0), 0.5, om).unwrap();
        assert!((o.position(0.5) - om).norm() < 1e-15);
        let rep = verify_generalized_solution(&[o], 1e-3, 1e-4);
        assert!(rep.check("acceleration").unwrap().pass);
    }

    #[test]
    fn generalized_sample_domain_errors() {
        assert!(generalized_cylinder_sample(c(0.9, 0.9), 0.5, c(1.0, 0.0)).is_err());
        assert!(generalized_cylinder_sample(c(0.1, 0.1), 0.5, c(1.1, 0.0)).is_err());
        assert!(generalized_cylinder_sample(c(0.1, 0.1), 1.5, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn full_quadrature_passes() {
        let samples = generalized_quadrature::<f64>(32, 32).unwrap();
        let rep = verify_generalized_solution(&samples, 1e-3, 1e-4);
        assert!(rep.all_pass, "{:?}", rep);
    }

    #[test]
    fn corrupted_radius_is_caught() {
        let samples: Vec<_> = generalized_quadrature::<f64>(8, 8)
            .unwrap()
            .into_iter()
            .map(|s| s.with_radius_scale(1.01))
            .collect();
        let rep = verify_generalized_solution(&samples, 1e-3, 1e-4);
        assert!(!rep.all_pass);
        assert!(!rep.check("radius").unwrap().pass);
        // sin(pi) = 0 hides the corruption at the endpoint, and X'' = -pi^2 X still holds
        assert!(rep.check("endpoint").unwrap().pass);
        assert!(rep.check("acceleration").unwrap().pass);
    }

    #[test]
    fn velocity_matches_finite_difference() {
        let x = generalized_cylinder_sample(c(0.3, 0.2), 0.5, c(0.0, 1.0)).unwrap();
        let h = 1e-6;
        let fd = (x.position(0.3 + h) - x.position(0.3 - h)) / (2.0 * h);
        assert!((fd - x.velocity(0.3)).norm() < 1e-8);
    }

    #[test]
    fn constant_and_straight_paths() {
        let p = Points::from_rows(2, &[[0.1, 0.2], [0.5, 0.5]]).unwrap();
        let still = DiscretePath::new(vec![0.0, 0.5, 1.0], vec![p.clone(), p.clone(), p.clone()]).unwrap();
        assert_eq!(action_of_discrete_path(&still, &[0.5, 0.5]).unwrap(), 0.0);

        let shift = [0.3, -0.4];
        let line = DiscretePath::sample(11, 2, 2, |t, a| {
            let x = p.get(a);
            vec![x[0] + t * shift[0], x[1] + t * shift[1]]
        })
        .unwrap();
        let a: f64 = action_of_discrete_path(&line, &[0.5, 0.5]).unwrap();
        assert!((a - 0.25 / 2.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_paths_rejected() {
        let p = Points::from_rows(1, &[[0.0]]).unwrap();
        assert!(DiscretePath::new(vec![0.0], vec![p.clone()]).is_err());
        assert!(DiscretePath::new(vec![0.0, 0.0], vec![p.clone(), p.clone()]).is_err());
        let q = Points::from_rows(1, &[[0.0], [1.0]]).unwrap();
        assert!(DiscretePath::new(vec![0.0, 1.0], vec![p.clone(), q]).is_err());
        let ok = DiscretePath::new(vec![0.0, 1.0], vec![p.clone(), p]).unwrap();
        assert!(action_of_discrete_path(&ok, &[1.0, 1.0]).is_err());
    }

    fn lattice_mean_r2(n: usize) -> f64 {
        // independent of make_grid: cell centers of [-1, 1]^2 strictly inside the disk
        let h = 2.0 / n as f64;
        let mut sum = 0.0;
        let mut count = 0;
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (-1.0 + (i as f64 + 0.5) * h, -1.0 + (j as f64 + 0.5) * h);
                if x * x + y * y < 1.0 {
                    sum += x * x + y * y;
                    count += 1;
                }
            }
        }
        sum / count as f64
    }

    #[test]
    fn rotation_action_matches_chord_quadrature() {
        let k = 200.0;
        // each interval contributes |2 z sin(pi / 2K)|^2 / (2 / K)
        let chord = (2.0 * k * (PI / (2.0 * k)).sin()).powi(2);
        for n in [16, 32] {
            let zs = disk_quadrature::<f64>(n).unwrap();
            let plus = rotation_action(&zs, Orientation::Counterclockwise, 201).unwrap();
            let minus = rotation_action(&zs, Orientation::Clockwise, 201).unwrap();
            let expect = 0.5 * lattice_mean_r2(n) * chord;
            assert!((plus - expect).abs() < 1e-12 * expect, "{} vs {}", plus, expect);
            assert!((plus - minus).abs() <= 1e-12 * plus);
        }
        // the boundary layer of retained cells biases mean |z|^2 upward
        let target = PI * PI / 4.0;
        let a16 = rotation_action(&disk_quadrature::<f64>(16).unwrap(), Orientation::Counterclockwise, 201).unwrap();
        let a32 = rotation_action(&disk_quadrature::<f64>(32).unwrap(), Orientation::Counterclockwise, 201).unwrap();
        assert!((a16 / target - 1.0 - 0.0321).abs() < 1e-3, "{}", a16);
        assert!((a32 - target).abs() / target < 0.02, "{}", a32);
    }

    #[test]
    fn rotation_verifier_passes() {
        let rep = verify_rotation_solutions::<f64>(16, 200, 1e-3, 1e-4).unwrap();
        assert!(rep.all_pass, "{:?}", rep);
    }

    #[test]
    fn lifting_maps() {
        let cyl = make_grid::<f64>(Domain::Cylinder, 6).unwrap();
        let disk = make_grid::<f64>(Domain::Disk, 6).unwrap();
        let id = MapTable::from_fn(&disk.points, |p| p.to_vec()).unwrap();
        let lifted = lift_2d_map(&id, &cyl).unwrap();
        assert_eq!(lifted.images, cyl.points);

        let flip = MapTable::from_fn(&disk.points, |p| vec![-p[0], -p[1]]).unwrap();
        let lifted = lift_2d_map(&flip, &cyl).unwrap();
        for (x, y) in lifted.sources.iter().zip(lifted.images.iter()) {
            assert_eq!(y, &[-x[0], -x[1], x[2]][..]);
        }

        let other = make_grid::<f64>(Domain::Disk, 5).unwrap();
        let wrong = MapTable::from_fn(&other.points, |p| p.to_vec()).unwrap();
        assert!(lift_2d_map(&wrong, &cyl).is_err());
    }

    #[test]
    fn lifted_square_reflection_on_cube() {
        let cube = make_grid::<f64>(Domain::Cube, 4).unwrap();
        let square = make_grid::<f64>(Domain::Square, 4).unwrap();
        let h = MapTable::from_fn(&square.points, |p| vec![1.0 - p[0], p[1]]).unwrap();
        let lifted = lift_2d_map(&h, &cube).unwrap();
        for (x, y) in lifted.sources.iter().zip(lifted.images.iter()) {
            assert_eq!(y[2], x[2]);
            assert_eq!(y[0], 1.0 - x[0]);
        }
    }
}
