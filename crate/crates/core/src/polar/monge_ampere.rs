use super::grid::{Lattice, PointCloud};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Scalar values on every node of a tensor lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeField<T> {
    pub lattice: Lattice<T>,
    pub values: Vec<T>,
}

impl<T: Real> LatticeField<T> {
    pub fn new(lattice: Lattice<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(Error::Size(format!(
                "{} values for {} lattice nodes",
                values.len(),
                lattice.len()
            )));
        }
        Ok(Self { lattice, values })
    }

    /// Samples `f` at the node positions of a box-domain grid.
    pub fn from_fn(grid: &PointCloud<T>, mut f: impl FnMut(&[T]) -> T) -> Result<Self> {
        if !grid.domain.is_tensor() {
            return Err(Error::Unsupported(format!(
                "lattice field on non-tensor domain {}",
                grid.domain
            )));
        }
        let lattice = grid.lattice.clone();
        let values = (0..lattice.len())
            .map(|k| f(&lattice.center(&lattice.multi(k))))
            .collect();
        Ok(Self { lattice, values })
    }

    fn at(&self, idx: &[usize], offsets: &[(usize, isize)]) -> T {
        let mut moved = idx.to_vec();
        for &(axis, step) in offsets {
            moved[axis] = (moved[axis] as isize + step) as usize;
        }
        self.values[self.lattice.linear(&moved)]
    }

    /// Centered second differences at an interior node.
    fn hessian(&self, idx: &[usize]) -> Vec<Vec<T>> {
        let d = self.lattice.dim();
        let two = T::lit(2.0);
        let four = T::lit(4.0);
        let mut hess = vec![vec![T::zero(); d]; d];
        let center = self.at(idx, &[]);
        for a in 0..d {
            let h = self.lattice.spacing[a];
            hess[a][a] = (self.at(idx, &[(a, 1)]) - two * center + self.at(idx, &[(a, -1)])) / (h * h);
            for b in a + 1..d {
                let k = self.lattice.spacing[b];
                let mixed = (self.at(idx, &[(a, 1), (b, 1)])
                    - self.at(idx, &[(a, 1), (b, -1)])
                    - self.at(idx, &[(a, -1), (b, 1)])
                    + self.at(idx, &[(a, -1), (b, -1)]))
                    / (four * h * k);
                hess[a][b] = mixed;
                hess[b][a] = mixed;
            }
        }
        hess
    }
}

fn determinant<T: Real>(m: &[Vec<T>]) -> T {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        d => unreachable!("lattice dimension {}", d),
    }
}

/// Discrete residual `sum |det(D2_h phi) - rho| * cell volume` over interior nodes.
///
/// A diagnostic of how well `phi` solves `det D2 phi = rho`; it shrinks like
/// `h^2` for smooth data.
pub fn monge_ampere_residual<T: Real>(phi: &LatticeField<T>, density: &LatticeField<T>) -> Result<T> {
    if phi.lattice != density.lattice {
        return Err(Error::Size("potential and density live on different lattices".into()));
    }
    let lattice = &phi.lattice;
    if lattice.counts.iter().any(|&n| n < 3) {
        return Err(Error::Domain(
            "need at least 3 nodes per axis for centered differences".into(),
        ));
    }
    let vol = lattice.cell_volume();
    let mut residual = T::zero();
    for k in 0..lattice.len() {
        let idx = lattice.multi(k);
        if idx.iter().zip(&lattice.counts).any(|(&i, &n)| i == 0 || i + 1 == n) {
            continue;
        }
        let det = determinant(&phi.hessian(&idx));
        residual = residual + (det - density.values[k]).abs() * vol;
    }
    Ok(residual)
}
