//! Exact discrete Monge–Kantorovich solver for equal-weight marginals.
//!
//! With `n` sources and `n` targets of mass `1/n` each, the optimal coupling is
//! a permutation, so the transport problem reduces to linear assignment.
//! [`solve_assignment`] is a shortest-augmenting-path Hungarian method that also
//! returns Kantorovich duals `(u, v)` with `u[a] + v[b] <= c[a][b]`, equality on
//! matched pairs, normalized by `v[0] = 0`. Among optimal permutations the
//! lexicographically smallest one is returned.

mod brute;
mod certificate;
mod hungarian;
mod one_d;

pub use brute::{brute_force_assignment, BRUTE_FORCE_LIMIT};
pub use certificate::{verify_optimality, CertificateReport, CycleViolation};
pub use hungarian::solve_assignment;
pub use one_d::sorted_assignment_1d;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::Points;
use crate::scalar::Cost;

/// Square matrix of nonnegative pairing costs, row = source, column = target.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Cost> CostMatrix<T> {
    pub fn new(n: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Size(format!(
                "{} entries for a {}x{} cost matrix",
                entries.len(),
                n,
                n
            )));
        }
        for (k, e) in entries.iter().enumerate() {
            if !e.is_finite_cost() {
                return Err(Error::Domain(format!(
                    "cost entry ({}, {}) is not finite",
                    k / n,
                    k % n
                )));
            }
            if *e < T::zero() {
                return Err(Error::Domain(format!("cost entry ({}, {}) is negative", k / n, k % n)));
            }
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (a, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::Size(format!(
                    "row {} has {} entries, expected {}",
                    a,
                    r.len(),
                    n
                )));
            }
            entries.extend_from_slice(r);
        }
        Self::new(n, entries)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, source: usize, target: usize) -> T {
        self.entries[source * self.n + target]
    }

    pub fn row(&self, source: usize) -> &[T] {
        &self.entries[source * self.n..(source + 1) * self.n]
    }

    pub fn max_entry(&self) -> T {
        self.entries
            .iter()
            .copied()
            .fold(T::zero(), |m, e| if e > m { e } else { m })
    }

    /// Default certificate tolerance, `1e-9 * (1 + max entry)` for `f64`.
    pub fn tolerance(&self) -> T {
        T::tie_tolerance(self.max_entry())
    }

    /// `sum_a c[a][sigma[a]]`, accumulated in source order.
    pub fn permutation_cost(&self, sigma: &[usize]) -> T {
        sigma
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (a, &b)| acc + self.get(a, b))
    }
}

/// Optimal permutation with its certifying duals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssignmentResult<T> {
    /// `sigma[a]` is the target matched to source `a`.
    pub sigma: Vec<usize>,
    pub u: Vec<T>,
    pub v: Vec<T>,
    pub total_cost: T,
}

impl<T: Cost> AssignmentResult<T> {
    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// Shifts the duals so that `v[0] == 0`, keeping every `u[a] + v[b]` fixed.
    pub(crate) fn normalize_duals(&mut self) {
        if let Some(&shift) = self.v.first() {
            for v in &mut self.v {
                *v = *v - shift;
            }
            for u in &mut self.u {
                *u = *u + shift;
            }
        }
    }
}

/// Squared Euclidean distances between every source and every target.
pub fn squared_distance_costs<T: Cost>(sources: &Points<T>, targets: &Points<T>) -> Result<CostMatrix<T>> {
    if sources.len() != targets.len() {
        return Err(Error::Size(format!(
            "{} sources vs {} targets",
            sources.len(),
            targets.len()
        )));
    }
    if sources.dim() != targets.dim() {
        return Err(Error::Size(format!(
            "source dimension {} vs target dimension {}",
            sources.dim(),
            targets.dim()
        )));
    }
    if !(1..=3).contains(&sources.dim()) {
        return Err(Error::Size(format!("dimension {} not in 1..=3", sources.dim())));
    }
    let n = sources.len();
    let mut entries = Vec::with_capacity(n * n);
    for s in sources.iter() {
        for t in targets.iter() {
            let d2 = s.iter().zip(t).fold(T::zero(), |acc, (&x, &y)| {
                let d = x - y;
                acc + d * d
            });
            entries.push(d2);
        }
    }
    CostMatrix::new(n, entries)
}

/// Checks that `sigma` is a bijection of `0..n` with a mark array.
pub fn is_permutation(sigma: &[usize]) -> bool {
    let mut seen = vec![false; sigma.len()];
    for &b in sigma {
        if b >= sigma.len() || seen[b] {
            return false;
        }
        seen[b] = true;
    }
    true
}

/// Inverse permutation: `owner[sigma[a]] = a`.
pub fn invert(sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![usize::MAX; sigma.len()];
    for (a, &b) in sigma.iter().enumerate() {
        inv[b] = a;
    }
    inv
}

/// Nontrivial cycles of the relabeling taking `from` to `to`, as lists of sources.
///
/// Each cycle is the set of sources whose target changes together; source order
/// within a cycle follows `a -> owner_from[to[a]]`.
pub fn reassignment_cycles(from: &[usize], to: &[usize]) -> Vec<Vec<usize>> {
    let owner = invert(from);
    let mut visited = vec![false; from.len()];
    let mut cycles = Vec::new();
    for start in 0..from.len() {
        if visited[start] || from[start] == to[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut a = start;
        while !visited[a] {
            visited[a] = true;
            cycle.push(a);
            a = owner[to[a]];
        }
        cycles.push(cycle);
    }
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pythagorean_cost() {
        let s = Points::from_rows(2, &[[0.0, 0.0]]).unwrap();
        let t = Points::from_rows(2, &[[3.0, 4.0]]).unwrap();
        let c = squared_distance_costs(&s, &t).unwrap();
        assert_eq!(c.row(0), &[25.0]);
    }

    #[test]
    fn self_costs_have_zero_diagonal() {
        let s = Points::from_rows(3, &[[0.1, 0.2, 0.3], [1.0, -2.0, 0.5], [7.0, 7.0, 7.0]]).unwrap();
        let c = squared_distance_costs(&s, &s).unwrap();
        for a in 0..3 {
            assert_eq!(c.get(a, a), 0.0);
        }
    }

    #[test]
    fn two_by_two_costs() {
        let s = Points::from_rows(2, &[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let t = Points::from_rows(2, &[[0.0, 0.0], [2.0, 0.0]]).unwrap();
        let c = squared_distance_costs(&s, &t).unwrap();
        assert_eq!(c, CostMatrix::from_rows(&[[0.0, 4.0], [1.0, 1.0]]).unwrap());
    }

    #[test]
    fn mismatched_inputs_are_size_errors() {
        let s = Points::from_rows(2, &[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let t = Points::from_rows(2, &[[0.0, 0.0]]).unwrap();
        assert!(matches!(squared_distance_costs(&s, &t), Err(Error::Size(_))));
        let t3 = Points::from_rows(3, &[[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]]).unwrap();
        assert!(matches!(squared_distance_costs(&s, &t3), Err(Error::Size(_))));
        let s4 = Points::from_rows(4, &[[0.0; 4]]).unwrap();
        assert!(matches!(squared_distance_costs(&s4, &s4), Err(Error::Size(_))));
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(matches!(CostMatrix::from_rows(&[[f64::NAN]]), Err(Error::Domain(_))));
        assert!(matches!(
            CostMatrix::from_rows(&[[f64::INFINITY]]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(CostMatrix::from_rows(&[[-1.0]]), Err(Error::Domain(_))));
        assert!(matches!(CostMatrix::new(2, vec![1.0; 3]), Err(Error::Size(_))));
    }

    #[test]
    fn cycles_of_relabeling() {
        assert!(reassignment_cycles(&[0, 1, 2], &[0, 1, 2]).is_empty());
        let cyc = reassignment_cycles(&[0, 1, 2, 3], &[1, 2, 0, 3]);
        assert_eq!(cyc.len(), 1);
        let mut c = cyc[0].clone();
        c.sort();
        assert_eq!(c, vec![0, 1, 2]);
        assert_eq!(reassignment_cycles(&[0, 1, 2, 3], &[1, 0, 3, 2]).len(), 2);
    }
}
