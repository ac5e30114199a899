//! Discrete closest-point problem.
//!
//! The measure-preserving maps of the domain are replaced by the arrangements
//! `(A_{sigma(1)}, ..., A_{sigma(N)})` of a fixed cell-center grid. Projecting
//! a map `M` onto them is an assignment problem under squared distance, and the
//! assignment duals give the convex potential whose gradient carries `M` onto
//! its rearrangement.

mod density;
mod grid;
mod monge_ampere;

pub use density::{empirical_density, DensityHistogram};
pub use grid::{make_grid, Domain, Lattice, PointCloud};
pub use monge_ampere::{monge_ampere_residual, LatticeField};

use crate::assignment::{solve_assignment, squared_distance_costs, AssignmentResult};
use crate::error::{Error, Result};
use crate::points::{norm2, Points};
use crate::scalar::Real;

/// `pi_S(M)` on the grid together with the assignment that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T> {
    /// `rearrangement[a] = grid.points[sigma[a]]`.
    pub rearrangement: Points<T>,
    pub assignment: AssignmentResult<T>,
}

pub fn project_to_s<T: Real>(map: &Points<T>, grid: &PointCloud<T>) -> Result<Projection<T>> {
    if map.len() != grid.len() {
        return Err(Error::Size(format!(
            "map has {} points, grid has {}",
            map.len(),
            grid.len()
        )));
    }
    let costs = squared_distance_costs(map, &grid.points)?;
    let assignment = solve_assignment(&costs)?;
    let rearrangement = grid.points.gather(&assignment.sigma);
    Ok(Projection {
        rearrangement,
        assignment,
    })
}

/// Values of the convex potential at the mapped points.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSamples<T> {
    pub locations: Points<T>,
    pub phi: Vec<T>,
}

/// `Phi(M_a) = (|M_a|^2 - u_a) / 2` from squared-distance duals.
///
/// Writing `|M - A|^2 = |M|^2 - 2 M.A + |A|^2` turns `u + v <= c` into
/// `Phi(M) + Psi(A) >= M.A` with equality on matched pairs, where
/// `Psi(A_b) = (|A_b|^2 - v_b) / 2`; `Phi` and `Psi` are then convex conjugates on the
/// samples and the matched grid point is a subgradient of `Phi` at `M_a`.
pub fn convex_potential<T: Real>(map: &Points<T>, assignment: &AssignmentResult<T>) -> Result<PotentialSamples<T>> {
    if map.len() != assignment.n() || assignment.u.len() != map.len() {
        return Err(Error::Size(format!(
            "map has {} points, assignment covers {}",
            map.len(),
            assignment.n()
        )));
    }
    let half = T::lit(0.5);
    let phi = map
        .iter()
        .zip(&assignment.u)
        .map(|(m, &u)| (norm2(m) - u) * half)
        .collect();
    Ok(PotentialSamples {
        locations: map.clone(),
        phi,
    })
}

impl<T: Real> PotentialSamples<T> {
    /// Transfers each sample to the lattice node nearest its location.
    ///
    /// Only meaningful for maps within half a cell of the identity, so every
    /// node must receive exactly one sample.
    pub fn to_lattice(&self, grid: &PointCloud<T>) -> Result<LatticeField<T>> {
        if !grid.domain.is_tensor() {
            return Err(Error::Unsupported(format!(
                "lattice transfer on non-tensor domain {}",
                grid.domain
            )));
        }
        let mut values: Vec<Option<T>> = vec![None; grid.lattice.len()];
        for (m, &phi) in self.locations.iter().zip(&self.phi) {
            let cell = grid
                .lattice
                .cell_of(m)
                .ok_or_else(|| Error::Domain("potential sample outside the lattice".into()))?;
            if values[cell].replace(phi).is_some() {
                return Err(Error::Domain(format!(
                    "two samples share lattice cell {}; map is not within h/2 of the identity",
                    cell
                )));
            }
        }
        let values = values
            .into_iter()
            .collect::<Option<Vec<T>>>()
            .ok_or_else(|| Error::Domain("some lattice cell received no sample".into()))?;
        LatticeField::new(grid.lattice.clone(), values)
    }
}
