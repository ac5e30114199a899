use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::Points;
use crate::scalar::Real;

/// Domains the lattice construction knows about.
///
/// Box domains use every cell of the tensor lattice. The unit disk and the
/// cylinder `{|z| <= 1} x [0, 1]` keep the cells whose centers lie strictly
/// inside the disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Interval,
    Square,
    Cube,
    Disk,
    Cylinder,
}

impl Domain {
    pub fn dim(self) -> usize {
        match self {
            Domain::Interval => 1,
            Domain::Square | Domain::Disk => 2,
            Domain::Cube | Domain::Cylinder => 3,
        }
    }

    /// Whether every lattice cell is part of the grid.
    pub fn is_tensor(self) -> bool {
        matches!(self, Domain::Interval | Domain::Square | Domain::Cube)
    }

    /// Center of the horizontal cross-section; rigid rotations turn about it.
    pub fn center<T: Real>(self) -> Vec<T> {
        let half = T::lit(0.5);
        match self {
            Domain::Interval => vec![half],
            Domain::Square => vec![half, half],
            Domain::Cube => vec![half, half, half],
            Domain::Disk => vec![T::zero(), T::zero()],
            Domain::Cylinder => vec![T::zero(), T::zero(), half],
        }
    }

    pub fn contains<T: Real>(self, p: &[T]) -> bool {
        let unit = |x: T| x >= T::zero() && x <= T::one();
        match self {
            Domain::Interval | Domain::Square | Domain::Cube => p.iter().all(|&x| unit(x)),
            Domain::Disk => p[0] * p[0] + p[1] * p[1] <= T::one(),
            Domain::Cylinder => p[0] * p[0] + p[1] * p[1] <= T::one() && unit(p[2]),
        }
    }

    fn lattice<T: Real>(self, n: usize) -> Lattice<T> {
        let unit = T::one() / T::from_count(n);
        let wide = T::lit(2.0) / T::from_count(n);
        let (lower, spacing) = match self {
            Domain::Interval | Domain::Square | Domain::Cube => (vec![T::zero(); self.dim()], vec![unit; self.dim()]),
            Domain::Disk => (vec![-T::one(), -T::one()], vec![wide, wide]),
            Domain::Cylinder => (vec![-T::one(), -T::one(), T::zero()], vec![wide, wide, unit]),
        };
        Lattice {
            counts: vec![n; self.dim()],
            lower,
            spacing,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Domain::Interval => "interval",
            Domain::Square => "square",
            Domain::Cube => "cube",
            Domain::Disk => "disk",
            Domain::Cylinder => "cylinder",
        };
        f.write_str(s)
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "interval" | "unit_interval" => Ok(Domain::Interval),
            "square" | "unit_square" => Ok(Domain::Square),
            "cube" | "unit_cube" => Ok(Domain::Cube),
            "disk" | "unit_disk" => Ok(Domain::Disk),
            "cylinder" => Ok(Domain::Cylinder),
            other => Err(Error::Unsupported(format!("domain `{}`", other))),
        }
    }
}

/// Axis-aligned tensor lattice of cells; axis 0 varies fastest in linear indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice<T> {
    pub counts: Vec<usize>,
    pub lower: Vec<T>,
    pub spacing: Vec<T>,
}

impl<T: Real> Lattice<T> {
    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn linear(&self, idx: &[usize]) -> usize {
        idx.iter()
            .rev()
            .zip(self.counts.iter().rev())
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn multi(&self, mut k: usize) -> Vec<usize> {
        self.counts
            .iter()
            .map(|&n| {
                let i = k % n;
                k /= n;
                i
            })
            .collect()
    }

    pub fn center(&self, idx: &[usize]) -> Vec<T> {
        idx.iter()
            .enumerate()
            .map(|(a, &i)| self.lower[a] + (T::from_count(i) + T::lit(0.5)) * self.spacing[a])
            .collect()
    }

    /// Cell containing `p`, or `None` outside the lattice box.
    pub fn cell_of(&self, p: &[T]) -> Option<usize> {
        let mut idx = Vec::with_capacity(self.dim());
        for a in 0..self.dim() {
            let s = ((p[a] - self.lower[a]) / self.spacing[a]).floor();
            if !(s >= T::zero()) || s >= T::from_count(self.counts[a]) {
                return None;
            }
            idx.push(s.to_usize()?);
        }
        Some(self.linear(&idx))
    }

    /// Like [`Lattice::cell_of`] but clamps out-of-box points to the nearest cell.
    pub fn cell_of_clamped(&self, p: &[T]) -> usize {
        let idx: Vec<usize> = (0..self.dim())
            .map(|a| {
                let s = ((p[a] - self.lower[a]) / self.spacing[a]).floor();
                let max = self.counts[a] - 1;
                if !(s >= T::zero()) {
                    0
                } else {
                    s.to_usize().map_or(max, |i| i.min(max))
                }
            })
            .collect();
        self.linear(&idx)
    }

    /// Product of the spacings.
    pub fn cell_volume(&self) -> T {
        self.spacing.iter().fold(T::one(), |acc, &h| acc * h)
    }
}

/// The fixed targets `A_1..A_N`: centers of the retained lattice cells.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud<T> {
    pub domain: Domain,
    pub n_per_axis: usize,
    pub lattice: Lattice<T>,
    pub points: Points<T>,
    /// Lattice cell of each point.
    pub cells: Vec<usize>,
    /// Normalized measure carried by each point, `1 / N`.
    pub cell_measure: T,
}

impl<T: Real> PointCloud<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    /// Horizontal lattice spacing.
    pub fn spacing(&self) -> T {
        self.lattice.spacing[0]
    }

    /// Number of vertical layers for the cylinder, 1 otherwise.
    pub fn layers(&self) -> usize {
        match self.domain {
            Domain::Cylinder => self.lattice.counts[2],
            _ => 1,
        }
    }
}

/// Cell-center lattice of `domain` with `n_per_axis` cells along each axis,
/// in row-major order (axis 0 fastest), vertical layer outermost.
pub fn make_grid<T: Real>(domain: Domain, n_per_axis: usize) -> Result<PointCloud<T>> {
    if n_per_axis < 2 {
        return Err(Error::Domain(format!("n_per_axis = {} (need at least 2)", n_per_axis)));
    }
    let lattice = domain.lattice::<T>(n_per_axis);
    let mut coords = Vec::new();
    let mut cells = Vec::new();
    for k in 0..lattice.len() {
        let c = lattice.center(&lattice.multi(k));
        let keep = match domain {
            Domain::Disk | Domain::Cylinder => c[0] * c[0] + c[1] * c[1] < T::one(),
            _ => true,
        };
        if keep {
            coords.extend_from_slice(&c);
            cells.push(k);
        }
    }
    let points = Points::new(domain.dim(), coords)?;
    let cell_measure = T::one() / T::from_count(points.len());
    Ok(PointCloud {
        domain,
        n_per_axis,
        lattice,
        points,
        cells,
        cell_measure,
    })
}
