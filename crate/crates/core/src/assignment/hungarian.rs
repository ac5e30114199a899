use super::{invert, AssignmentResult, CostMatrix};
use crate::error::{Error, Result};
use crate::scalar::Cost;

/// Minimum-cost permutation of `costs` with dual potentials.
///
/// O(n^3) shortest augmenting paths, one source row inserted per phase. The
/// resulting permutation is then moved to the lexicographically smallest
/// optimal one by alternating-path exchanges on the equality subgraph.
pub fn solve_assignment<T: Cost>(costs: &CostMatrix<T>) -> Result<AssignmentResult<T>> {
    let n = costs.n();
    for a in 0..n {
        if let Some(b) = costs.row(a).iter().position(|c| !c.is_finite_cost()) {
            return Err(Error::Domain(format!("cost entry ({}, {}) is not finite", a, b)));
        }
    }
    if n == 0 {
        return Ok(AssignmentResult {
            sigma: vec![],
            u: vec![],
            v: vec![],
            total_cost: T::zero(),
        });
    }

    // 1-based indexing, column 0 is the virtual root of each search tree.
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv: Vec<Option<T>> = vec![None; n + 1];
    let mut used = vec![false; n + 1];

    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|m| *m = None);
        used.iter_mut().for_each(|f| *f = false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let row = costs.row(i0 - 1);
            let mut delta: Option<T> = None;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = row[j - 1] - u[i0] - v[j];
                if minv[j].is_none_or(|m| reduced < m) {
                    minv[j] = Some(reduced);
                    way[j] = j0;
                }
                let mj = minv[j].expect("set above");
                if delta.is_none_or(|d| mj < d) {
                    delta = Some(mj);
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains while the row is unmatched");
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] = u[owner[j]] + delta;
                    v[j] = v[j] - delta;
                } else if let Some(m) = minv[j] {
                    minv[j] = Some(m - delta);
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut sigma = vec![0usize; n];
    for j in 1..=n {
        sigma[owner[j] - 1] = j - 1;
    }
    let u: Vec<T> = u[1..].to_vec();
    let v: Vec<T> = v[1..].to_vec();

    let tol = costs.tolerance();
    lexicographic_refine(costs, &u, &v, &mut sigma, tol);

    let mut result = AssignmentResult {
        total_cost: costs.permutation_cost(&sigma),
        sigma,
        u,
        v,
    };
    result.normalize_duals();
    Ok(result)
}

/// Replaces `sigma` by the lexicographically smallest perfect matching of the
/// equality subgraph `{(a, b) : c[a][b] - u[a] - v[b] <= tol}` whose total cost
/// does not exceed the current one.
///
/// Every optimal permutation lies in that subgraph, so for exact types this is
/// the lexicographically smallest optimal permutation. Row `a` is fixed in
/// increasing order; to hand it a smaller column `b` the former owner of `b`
/// must be rerouted along an alternating path ending at `sigma[a]`.
fn lexicographic_refine<T: Cost>(costs: &CostMatrix<T>, u: &[T], v: &[T], sigma: &mut [usize], tol: T) {
    let n = sigma.len();
    let tight = |a: usize, b: usize| costs.get(a, b) - u[a] - v[b] <= tol;
    let mut current = costs.permutation_cost(sigma);

    let mut reached = vec![false; n];
    let mut next_col = vec![usize::MAX; n];
    let mut queue = Vec::with_capacity(n);

    for a in 0..n {
        let target = sigma[a];
        if !(0..target).any(|b| tight(a, b)) {
            continue;
        }
        // Rows r > a that can give up their column, ending with some row taking `target`.
        reached.iter_mut().for_each(|f| *f = false);
        queue.clear();
        for r in a + 1..n {
            if tight(r, target) {
                reached[r] = true;
                next_col[r] = target;
                queue.push(r);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let r = queue[head];
            head += 1;
            let col = sigma[r];
            for r2 in a + 1..n {
                if !reached[r2] && tight(r2, col) {
                    reached[r2] = true;
                    next_col[r2] = col;
                    queue.push(r2);
                }
            }
        }

        let owner = invert(sigma);
        for b in 0..target {
            let r0 = owner[b];
            if r0 <= a || !reached[r0] || !tight(a, b) {
                continue;
            }
            let mut candidate = sigma.to_vec();
            candidate[a] = b;
            let mut r = r0;
            loop {
                let col = next_col[r];
                candidate[r] = col;
                if col == target {
                    break;
                }
                r = owner[col];
            }
            let cost = costs.permutation_cost(&candidate);
            if cost <= current {
                sigma.copy_from_slice(&candidate);
                current = cost;
                break;
            }
        }
    }
}
