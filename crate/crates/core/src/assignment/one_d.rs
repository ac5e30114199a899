use std::cmp::Ordering;

use super::AssignmentResult;
use crate::error::{Error, Result};
use crate::scalar::Cost;

fn order_of<T: Cost>(xs: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&i, &j| xs[i].partial_cmp(&xs[j]).unwrap_or(Ordering::Equal).then(i.cmp(&j)));
    idx
}

/// Monotone rearrangement on the line: the k-th smallest source takes the
/// k-th smallest target. O(n log n).
///
/// Duals come from the convex piecewise-linear potential `f` with
/// `f(x_k) = f(x_{k-1}) + y_k (x_k - x_{k-1})` over the sorted pairs, which
/// supports every matched pair in the inner-product form of the squared cost.
/// Within runs of equal sources (or equal targets) the pairing is made
/// lexicographically smallest.
pub fn sorted_assignment_1d<T: Cost>(sources: &[T], targets: &[T]) -> Result<AssignmentResult<T>> {
    let n = sources.len();
    if targets.len() != n {
        return Err(Error::Size(format!("{} sources vs {} targets", n, targets.len())));
    }
    let src = order_of(sources);
    let tgt = order_of(targets);
    let mut sigma = vec![0usize; n];
    for k in 0..n {
        sigma[src[k]] = tgt[k];
    }

    // equal sources: any assignment of their targets costs the same
    let mut k = 0;
    while k < n {
        let mut end = k + 1;
        while end < n && sources[src[end]] == sources[src[k]] {
            end += 1;
        }
        if end - k > 1 {
            let mut rows: Vec<usize> = src[k..end].to_vec();
            let mut cols: Vec<usize> = rows.iter().map(|&a| sigma[a]).collect();
            rows.sort_unstable();
            cols.sort_unstable();
            for (a, b) in rows.into_iter().zip(cols) {
                sigma[a] = b;
            }
        }
        k = end;
    }
    // equal targets
    let owner = super::invert(&sigma);
    let mut k = 0;
    while k < n {
        let mut end = k + 1;
        while end < n && targets[tgt[end]] == targets[tgt[k]] {
            end += 1;
        }
        if end - k > 1 {
            let mut cols: Vec<usize> = tgt[k..end].to_vec();
            let mut rows: Vec<usize> = cols.iter().map(|&b| owner[b]).collect();
            rows.sort_unstable();
            cols.sort_unstable();
            for (a, b) in rows.into_iter().zip(cols) {
                sigma[a] = b;
            }
        }
        k = end;
    }

    let two = T::one() + T::one();
    let mut u = vec![T::zero(); n];
    let mut v = vec![T::zero(); n];
    let mut f = T::zero();
    let mut prev_x: Option<T> = None;
    for &a in &src {
        let x = sources[a];
        let y = targets[sigma[a]];
        if let Some(px) = prev_x {
            f = f + y * (x - px);
        }
        prev_x = Some(x);
        let g = x * y - f;
        u[a] = x * x - two * f;
        v[sigma[a]] = y * y - two * g;
    }
    let total_cost = sigma.iter().enumerate().fold(T::zero(), |acc, (a, &b)| {
        let d = sources[a] - targets[b];
        acc + d * d
    });
    let mut result = AssignmentResult {
        sigma,
        u,
        v,
        total_cost,
    };
    result.normalize_duals();
    Ok(result)
}
