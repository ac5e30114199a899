use num_rational::Ratio;

use super::grid::{Lattice, PointCloud};
use super::monge_ampere::LatticeField;
use crate::error::{Error, Result};
use crate::points::Points;
use crate::scalar::Real;

/// Counts of mapped points per lattice cell.
///
/// Masses are kept as integer counts so the total is exactly one.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityHistogram<T> {
    pub lattice: Lattice<T>,
    pub counts: Vec<u64>,
    pub total: u64,
    /// Normalized measure of one cell of the domain, used to turn masses into densities.
    pub cell_measure: T,
    /// Points that fell outside the lattice box and were clamped.
    pub clamped: usize,
}

impl<T: Real> DensityHistogram<T> {
    pub fn mass(&self, cell: usize) -> Ratio<u64> {
        Ratio::new(self.counts[cell], self.total)
    }

    pub fn total_mass(&self) -> Ratio<u64> {
        Ratio::new(self.counts.iter().sum(), self.total)
    }

    pub fn masses(&self) -> Vec<T> {
        let total = T::from_u64(self.total).expect("count representable");
        self.counts
            .iter()
            .map(|&c| T::from_u64(c).expect("count representable") / total)
            .collect()
    }

    /// Mass divided by cell measure; the uniform histogram gives 1 everywhere.
    pub fn densities(&self) -> Vec<T> {
        self.masses().into_iter().map(|m| m / self.cell_measure).collect()
    }

    /// Density as a lattice field, for box domains only.
    pub fn density_field(&self, grid: &PointCloud<T>) -> Result<LatticeField<T>> {
        if !grid.domain.is_tensor() {
            return Err(Error::Unsupported(format!(
                "density field on non-tensor domain {}",
                grid.domain
            )));
        }
        LatticeField::new(self.lattice.clone(), self.densities())
    }
}

/// Histogram of `map` over the cells of `grid`'s lattice, normalized to mass 1.
///
/// Points outside the lattice box are clamped into the nearest boundary cell
/// with a warning.
pub fn empirical_density<T: Real>(map: &Points<T>, grid: &PointCloud<T>) -> Result<DensityHistogram<T>> {
    if map.dim() != grid.dim() {
        return Err(Error::Size(format!(
            "map dimension {} vs grid dimension {}",
            map.dim(),
            grid.dim()
        )));
    }
    if map.is_empty() {
        return Err(Error::Size("empty map".into()));
    }
    let lattice = grid.lattice.clone();
    let mut counts = vec![0u64; lattice.len()];
    let mut clamped = 0;
    for p in map.iter() {
        let cell = match lattice.cell_of(p) {
            Some(c) => c,
            None => {
                clamped += 1;
                lattice.cell_of_clamped(p)
            }
        };
        counts[cell] += 1;
    }
    if clamped > 0 {
        log::warn!(
            "{} of {} points outside the lattice box were clamped",
            clamped,
            map.len()
        );
    }
    Ok(DensityHistogram {
        lattice,
        counts,
        total: map.len() as u64,
        cell_measure: grid.cell_measure,
        clamped,
    })
}
