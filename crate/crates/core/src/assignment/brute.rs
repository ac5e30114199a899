use itertools::Itertools;

use super::{AssignmentResult, CostMatrix};
use crate::error::{Error, Result};
use crate::scalar::Cost;

/// Largest size accepted by [`brute_force_assignment`] (9! = 362 880 permutations).
pub const BRUTE_FORCE_LIMIT: usize = 9;

/// Exhaustive enumeration oracle.
///
/// Permutations are visited in lexicographic order and only a strictly smaller
/// total replaces the incumbent, so ties go to the lexicographically smallest
/// permutation. Duals are rebuilt from the optimal permutation alone by
/// shortest paths: `v[b] <= v[sigma[a]] + c[a][b] - c[a][sigma[a]]` is a
/// difference-constraint system whose cycles are exactly the cyclic
/// reassignments, so it is solvable iff `sigma` is optimal.
pub fn brute_force_assignment<T: Cost>(costs: &CostMatrix<T>) -> Result<AssignmentResult<T>> {
    let n = costs.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut best: Option<(T, Vec<usize>)> = None;
    for perm in (0..n).permutations(n) {
        let cost = costs.permutation_cost(&perm);
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, perm));
        }
    }
    let (total_cost, sigma) = best.unwrap_or((T::zero(), Vec::new()));

    // Bellman-Ford from a virtual source joined to every column with weight 0.
    let mut v = vec![T::zero(); n];
    for _ in 0..n {
        let mut changed = false;
        for a in 0..n {
            let from = sigma[a];
            let base = costs.get(a, from);
            for b in 0..n {
                let cand = v[from] + costs.get(a, b) - base;
                if cand < v[b] {
                    v[b] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let u = (0..n).map(|a| costs.get(a, sigma[a]) - v[sigma[a]]).collect();
    let mut result = AssignmentResult {
        sigma,
        u,
        v,
        total_cost,
    };
    result.normalize_duals();
    Ok(result)
}
