use serde::Serialize;

use super::{is_permutation, AssignmentResult, CostMatrix};
use crate::scalar::Cost;

/// A cyclic reassignment of matched pairs that lowers the total cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleViolation<T> {
    /// Sources whose targets are rotated: source `sources[k]` takes the target of `sources[k + 1]`.
    pub sources: Vec<usize>,
    /// Cost change of the rotation (negative).
    pub delta: T,
}

/// Outcome of [`verify_optimality`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport<T> {
    pub bijective: bool,
    /// `max(u[a] + v[b] - c[a][b])`; feasible when `<= tol`.
    pub dual_feasibility_margin: T,
    /// `max |u[a] + v[sigma[a]] - c[a][sigma[a]]|`.
    pub slackness_residual: T,
    /// `|sum(u) + sum(v) - total_cost|`.
    pub duality_gap: T,
    /// `|total_cost - sum c[a][sigma[a]]|`.
    pub cost_residual: T,
    pub improving_two_cycle: Option<CycleViolation<T>>,
    pub improving_three_cycle: Option<CycleViolation<T>>,
    pub tolerance: T,
    pub all_pass: bool,
}

fn abs<T: Cost>(x: T) -> T {
    if x < T::zero() {
        T::zero() - x
    } else {
        x
    }
}

/// Checks bijectivity, dual feasibility, complementary slackness, the duality
/// gap and the absence of improving 2- and 3-cycles.
///
/// Feasible duals with zero gap prove global optimality on their own; the
/// cycle scans are a dual-free check of discrete cyclical monotonicity.
/// Gap and cost residuals are allowed `n * tol` of accumulated rounding.
pub fn verify_optimality<T: Cost>(costs: &CostMatrix<T>, result: &AssignmentResult<T>, tol: T) -> CertificateReport<T> {
    let n = costs.n();
    let shaped = result.sigma.len() == n && result.u.len() == n && result.v.len() == n;
    let bijective = shaped && is_permutation(&result.sigma);
    let zero = T::zero();
    if !bijective {
        return CertificateReport {
            bijective,
            dual_feasibility_margin: zero,
            slackness_residual: zero,
            duality_gap: zero,
            cost_residual: zero,
            improving_two_cycle: None,
            improving_three_cycle: None,
            tolerance: tol,
            all_pass: false,
        };
    }
    let sigma = &result.sigma;
    let (u, v) = (&result.u, &result.v);

    let mut margin: Option<T> = None;
    let mut slack = zero;
    for a in 0..n {
        for b in 0..n {
            let m = u[a] + v[b] - costs.get(a, b);
            if margin.is_none_or(|x| m > x) {
                margin = Some(m);
            }
        }
        let s = abs(u[a] + v[sigma[a]] - costs.get(a, sigma[a]));
        if s > slack {
            slack = s;
        }
    }
    let margin = margin.unwrap_or(zero);
    let dual_sum = u.iter().chain(v.iter()).fold(zero, |acc, &x| acc + x);
    let duality_gap = abs(dual_sum - result.total_cost);
    let cost_residual = abs(result.total_cost - costs.permutation_cost(sigma));

    let neg_tol = zero - tol;
    let mut two = None;
    'outer2: for a in 0..n {
        for b in a + 1..n {
            let delta =
                costs.get(a, sigma[b]) + costs.get(b, sigma[a]) - costs.get(a, sigma[a]) - costs.get(b, sigma[b]);
            if delta < neg_tol {
                two = Some(CycleViolation {
                    sources: vec![a, b],
                    delta,
                });
                break 'outer2;
            }
        }
    }
    let mut three = None;
    'outer3: for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let base = costs.get(a, sigma[a]) + costs.get(b, sigma[b]) + costs.get(c, sigma[c]);
                // a <- sigma[b], b <- sigma[c], c <- sigma[a], and the reverse rotation.
                let fwd = costs.get(a, sigma[b]) + costs.get(b, sigma[c]) + costs.get(c, sigma[a]) - base;
                if fwd < neg_tol {
                    three = Some(CycleViolation {
                        sources: vec![a, b, c],
                        delta: fwd,
                    });
                    break 'outer3;
                }
                let rev = costs.get(a, sigma[c]) + costs.get(c, sigma[b]) + costs.get(b, sigma[a]) - base;
                if rev < neg_tol {
                    three = Some(CycleViolation {
                        sources: vec![a, c, b],
                        delta: rev,
                    });
                    break 'outer3;
                }
            }
        }
    }

    let mut scaled_tol = zero;
    for _ in 0..n.max(1) {
        scaled_tol = scaled_tol + tol;
    }
    let all_pass = margin <= tol
        && slack <= tol
        && duality_gap <= scaled_tol
        && cost_residual <= scaled_tol
        && two.is_none()
        && three.is_none();
    CertificateReport {
        bijective,
        dual_feasibility_margin: margin,
        slackness_residual: slack,
        duality_gap,
        cost_residual,
        improving_two_cycle: two,
        improving_three_cycle: three,
        tolerance: tol,
        all_pass,
    }
}
