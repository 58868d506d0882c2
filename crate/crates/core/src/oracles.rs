//! Brute-force references used to check the solver at desk scale.
//!
//! None of these routines touch the regularized scheme: linear Perron roots
//! come from the quadratic formula or from Collatz-Wielandt brackets of
//! plain power iteration, max-plus values from Karp's recurrence, and family
//! values from exhaustive enumeration of rowwise policies.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operators::{Family, NonnegMatrix, OperatorSpec};

/// Upper limit on `|A|^n` for [`policy_enumeration`].
pub const ENUMERATION_GUARD: usize = 1_000_000;

/// Spectral radius of `[[a, b], [c, d]]` with nonnegative entries.
pub fn perron_2x2(a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    for (index, value) in [a, b, c, d].into_iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::NotInCone { index, value });
        }
    }
    let disc = (a - d) * (a - d) + 4.0 * b * c;
    Ok((a + d + disc.sqrt()) / 2.0)
}

/// Maximum cycle mean of the digraph with arc weights `w[i][j]`
/// (`-inf` = no arc), via Karp's recurrence with a virtual source attached
/// to every node. Returns `-inf` when the graph is acyclic.
pub fn karp_cycle_mean(weights: &[Vec<f64>]) -> Result<f64> {
    let n = weights.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty weight matrix".into()));
    }
    if let Some(row) = weights.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: row.len() });
    }
    if weights.iter().flatten().any(|w| w.is_nan() || *w == f64::INFINITY) {
        return Err(Error::InvalidArgument("weights must be finite or -inf".into()));
    }
    // best[k][v]: heaviest walk with exactly k arcs ending at v.
    let mut best = vec![vec![f64::NEG_INFINITY; n]; n + 1];
    best[0].iter_mut().for_each(|v| *v = 0.0);
    for k in 1..=n {
        for v in 0..n {
            let mut m = f64::NEG_INFINITY;
            for u in 0..n {
                let w = weights[u][v];
                if w > f64::NEG_INFINITY && best[k - 1][u] > f64::NEG_INFINITY {
                    m = m.max(best[k - 1][u] + w);
                }
            }
            best[k][v] = m;
        }
    }
    let mut result = f64::NEG_INFINITY;
    for v in 0..n {
        if best[n][v] == f64::NEG_INFINITY {
            continue;
        }
        let mut worst = f64::INFINITY;
        for k in 0..n {
            if best[k][v] > f64::NEG_INFINITY {
                worst = worst.min((best[n][v] - best[k][v]) / (n - k) as f64);
            }
        }
        result = result.max(worst);
    }
    Ok(result)
}

/// Collatz-Wielandt bracket produced by power iteration.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PowerBracket {
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
    /// Bracket failed to close to `tol` (reducible or imprimitive matrix).
    pub stalled: bool,
    /// `||A x|| / ||x||` at the last iterate.
    pub norm_ratio: f64,
}

impl PowerBracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Runs `x <- A x / ||A x||` from `x0` and keeps the tightest bracket
/// `max_k m(A x_k / x_k) <= r <= min_k M(A x_k / x_k)`.
pub fn power_bracket(a: &NonnegMatrix, x0: &[f64], max_iter: usize, tol: f64) -> Result<PowerBracket> {
    let n = a.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x0.len() });
    }
    if let Some(index) = x0.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::NotInterior { index });
    }
    let scale = x0.iter().cloned().fold(0.0, f64::max);
    let mut x: Vec<f64> = x0.iter().map(|v| v / scale).collect();
    let mut y = vec![0.0; n];
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    let mut since_improvement = 0;
    let mut norm_ratio = 0.0;
    let patience = 64 + 8 * n;
    for it in 1..=max_iter {
        a.mul_vec_into(&x, &mut y);
        let (mut step_lo, mut step_hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            if x[i] > 0.0 {
                let r = y[i] / x[i];
                step_lo = step_lo.min(r);
                step_hi = step_hi.max(r);
            } else if y[i] > 0.0 {
                step_hi = f64::INFINITY;
            }
        }
        // On a zero coordinate of x the lower bound is still m over the support
        // only if x is interior; otherwise the lower bound is uninformative.
        if x.contains(&0.0) {
            step_lo = 0.0;
        }
        let improved = step_lo > lo * (1.0 + 1e-15) || step_hi < hi * (1.0 - 1e-15);
        lo = lo.max(step_lo);
        hi = hi.min(step_hi);
        let norm = y.iter().cloned().fold(0.0, f64::max);
        norm_ratio = norm;
        if hi - lo <= tol * hi.max(1.0) {
            return Ok(PowerBracket { lo, hi, iterations: it, stalled: false, norm_ratio });
        }
        if norm == 0.0 {
            return Ok(PowerBracket { lo, hi: hi.min(0.0).max(lo), iterations: it, stalled: false, norm_ratio });
        }
        since_improvement = if improved { 0 } else { since_improvement + 1 };
        x.iter_mut().zip(&y).for_each(|(xi, yi)| *xi = yi / norm);
        if since_improvement > patience {
            // keep iterating silently so norm_ratio still settles
            for _ in it..max_iter.min(it + 20_000) {
                a.mul_vec_into(&x, &mut y);
                let norm = y.iter().cloned().fold(0.0, f64::max);
                if norm == 0.0 {
                    break;
                }
                norm_ratio = norm;
                x.iter_mut().zip(&y).for_each(|(xi, yi)| *xi = yi / norm);
            }
            return Ok(PowerBracket { lo, hi, iterations: it, stalled: true, norm_ratio });
        }
    }
    Ok(PowerBracket { lo, hi, iterations: max_iter, stalled: true, norm_ratio })
}

/// Strongly connected components of the support graph `i -> j` iff `a_ij > 0`.
fn components(a: &NonnegMatrix) -> Vec<Vec<usize>> {
    let n = a.dim();
    let mut reach: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || a.get(i, j) > 0.0).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if !seen[i] {
            let comp: Vec<usize> = (i..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
            comp.iter().for_each(|&j| seen[j] = true);
            out.push(comp);
        }
    }
    out
}

fn irreducible_root(block: &NonnegMatrix) -> f64 {
    let n = block.dim();
    let shifted = |alpha: f64| {
        let mut rows = block.rows();
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] += alpha;
        }
        NonnegMatrix::new(rows).expect("validated matrix")
    };
    let norm = (0..n).map(|i| block.row(i).iter().sum::<f64>()).fold(0.0, f64::max);
    let coarse = power_bracket(&shifted(norm), &vec![1.0; n], 10_000, 1e-6).expect("interior start");
    let estimate = coarse.midpoint() - norm;
    let alpha = if estimate > 0.0 { estimate } else { norm };
    let fine = power_bracket(&shifted(alpha), &vec![1.0; n], 200_000, 1e-15).expect("interior start");
    (fine.midpoint() - alpha).max(0.0)
}

/// Perron root of a nonnegative matrix: the largest root over the diagonal
/// blocks of its strongly connected components. Each irreducible block is
/// shifted by a coarse estimate of its own root, which makes it primitive
/// while keeping the bracket relative to the root.
pub fn perron_root(a: &NonnegMatrix) -> f64 {
    let n = a.dim();
    if n == 1 {
        return a.get(0, 0);
    }
    if n == 2 {
        return perron_2x2(a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1)).expect("validated matrix");
    }
    components(a)
        .into_iter()
        .map(|comp| match comp.as_slice() {
            [i] => a.get(*i, *i),
            _ if comp.len() == 2 => {
                let (i, j) = (comp[0], comp[1]);
                perron_2x2(a.get(i, i), a.get(i, j), a.get(j, i), a.get(j, j)).expect("validated matrix")
            }
            _ => {
                let block = NonnegMatrix::new(comp.iter().map(|&i| comp.iter().map(|&j| a.get(i, j)).collect()).collect())
                    .expect("validated matrix");
                irreducible_root(&block)
            }
        })
        .fold(0.0, f64::max)
}

/// A pure rowwise policy: row `i` uses member `0[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolicyIndex(pub Vec<usize>);

#[derive(Clone, Debug, PartialEq)]
pub struct PolicyOptimum {
    pub value: f64,
    pub policy: PolicyIndex,
    pub evaluated: usize,
}

fn decode(mut index: usize, members: usize, n: usize) -> Vec<usize> {
    let mut policy = vec![0; n];
    for slot in policy.iter_mut().rev() {
        *slot = index % members;
        index /= members;
    }
    policy
}

/// Enumerates every rowwise policy of a sup or inf family and returns the
/// best per-policy value (max for sup, min for inf). Ties go to the
/// lexicographically smallest policy.
pub fn policy_enumeration<F>(family: &OperatorSpec, oracle: F) -> Result<PolicyOptimum>
where
    F: Fn(&NonnegMatrix) -> f64 + Sync,
{
    let (fam, maximize): (&Family, bool) = match family {
        OperatorSpec::Sup(f) => (f, true),
        OperatorSpec::Inf(f) => (f, false),
        OperatorSpec::WholeSpace(_) => {
            return Err(Error::InvalidArgument("enumerate the cone restriction, not the whole-space map".into()))
        }
        other => return Err(Error::InvalidArgument(format!("policy enumeration needs a family, got {}", other.kind()))),
    };
    let count = fam.policy_count();
    if count > ENUMERATION_GUARD as f64 {
        return Err(Error::EnumerationGuard { count, limit: ENUMERATION_GUARD });
    }
    let count = count as usize;
    let (members, n) = (fam.members().len(), fam.dim());
    let values: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|k| oracle(&fam.policy_matrix(&decode(k, members, n)).expect("decoded policy is valid")))
        .collect();
    let mut best = 0;
    for (k, &v) in values.iter().enumerate().skip(1) {
        if (maximize && v > values[best]) || (!maximize && v < values[best]) {
            best = k;
        }
    }
    Ok(PolicyOptimum { value: values[best], policy: PolicyIndex(decode(best, members, n)), evaluated: count })
}
