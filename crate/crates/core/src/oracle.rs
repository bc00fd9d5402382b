//! Brute-force ground truth for small instances.
//!
//! Nothing here approximates: searches over a budget are refused outright.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::exact::{self, Rational};
use crate::geometry::PointConfig;
use crate::greedy::SubmodularObjective;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest edge family searched exhaustively by [`exact_min_cover`].
    pub max_edges: usize,
    /// Largest point count scanned by [`realizable_subsets`].
    pub max_subset_points: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_edges: 20,
            max_subset_points: 14,
        }
    }
}

/// Smallest `K` with `f(K) = f_max`, searching sizes upward and, within a
/// size, in lexicographic order. Returns `(|K|, K)` for the first optimum.
pub fn exact_min_cover<O: SubmodularObjective>(
    obj: &O,
    budget: OracleBudget,
) -> Result<(usize, Vec<usize>)> {
    let m = obj.edge_count();
    if m > budget.max_edges {
        return Err(Error::BudgetExceeded {
            what: "edge count",
            actual: m,
            limit: budget.max_edges,
        });
    }
    let target = obj.f_max();
    let empty = obj.empty_state();
    for size in 0..=m {
        let mut picked = Vec::with_capacity(size);
        if search(obj, target, &empty, 0, size, &mut picked) {
            return Ok((size, picked));
        }
    }
    unreachable!("the full family always reaches f_max")
}

fn search<O: SubmodularObjective>(
    obj: &O,
    target: u64,
    state: &O::State,
    start: usize,
    remaining: usize,
    picked: &mut Vec<usize>,
) -> bool {
    if remaining == 0 {
        return obj.value(state) == target;
    }
    for e in start..=obj.edge_count() - remaining {
        let mut next = state.clone();
        obj.insert(&mut next, e);
        picked.push(e);
        if search(obj, target, &next, e + 1, remaining - 1, picked) {
            return true;
        }
        picked.pop();
    }
    false
}

/// Whether the convex hulls of `subset` and its complement are disjoint, i.e.
/// whether a hyperplane strictly separates them. Decided by exact linear
/// feasibility of a common convex combination.
pub fn strictly_separable(config: &PointConfig, subset: &[usize]) -> bool {
    let n = config.len();
    let d = config.dim();
    let mut inside = vec![false; n];
    subset.iter().for_each(|&i| inside[i] = true);
    if inside.iter().all(|&b| b) || inside.iter().all(|&b| !b) {
        return true;
    }
    // Σ_S λ_p p - Σ_rest λ_q q = 0,  Σ_S λ_p = 1,  Σ_rest λ_q = 1,  λ ≥ 0.
    let zero = || exact::rat(0);
    let mut rows: Vec<Vec<Rational>> = vec![vec![zero(); n]; d + 2];
    for (k, p) in config.points().iter().enumerate() {
        let s = if inside[k] {
            exact::rat(1)
        } else {
            exact::rat(-1)
        };
        for j in 0..d {
            rows[j][k] = &s * &p[j];
        }
        if inside[k] {
            rows[d][k] = exact::rat(1);
        } else {
            rows[d + 1][k] = exact::rat(1);
        }
    }
    let mut rhs = vec![zero(); d];
    rhs.push(exact::rat(1));
    rhs.push(exact::rat(1));
    exact::nonnegative_solution(&rows, &rhs).is_none()
}

/// Every nontrivial strictly separable subset, as the side that leaves out
/// point 0.
pub fn realizable_subsets(
    config: &PointConfig,
    budget: OracleBudget,
) -> Result<BTreeSet<Vec<usize>>> {
    let n = config.len();
    if n > budget.max_subset_points {
        return Err(Error::BudgetExceeded {
            what: "point count",
            actual: n,
            limit: budget.max_subset_points,
        });
    }
    let masks: Vec<u64> = (1u64..1 << n).filter(|m| m & 1 == 0).collect();
    Ok(masks
        .par_iter()
        .filter_map(|&mask| {
            let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            strictly_separable(config, &subset).then_some(subset)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `f(B) > f(A)` although `B ⊆ A`, or `f(A) > f_max`.
    Monotonicity,
    /// `f(B + e) - f(B) < f(A + e) - f(A)`.
    DiminishingReturns,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub smaller: Vec<usize>,
    pub larger: Vec<usize>,
    pub edge: usize,
    pub violation: Violation,
}

/// Samples `trials` chains `B ⊆ A ⊆ H - e` and checks monotonicity and
/// diminishing returns on each. Deterministic for a given seed.
pub fn check_submodular<O: SubmodularObjective>(
    obj: &O,
    trials: usize,
    seed: u64,
) -> std::result::Result<(), Counterexample> {
    let m = obj.edge_count();
    if m == 0 {
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f_max = obj.f_max();
    for _ in 0..trials {
        let e = rng.gen_range(0..m);
        // Vary the density so both sparse and dense chains appear.
        let p_a: f64 = rng.gen();
        let p_b: f64 = rng.gen();
        let larger: Vec<usize> = (0..m).filter(|&x| x != e && rng.gen_bool(p_a)).collect();
        let smaller: Vec<usize> = larger
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(p_b))
            .collect();

        let fb = obj.eval(&smaller);
        let fa = obj.eval(&larger);
        let counter = |violation| Counterexample {
            smaller: smaller.clone(),
            larger: larger.clone(),
            edge: e,
            violation,
        };
        if fb > fa || fa > f_max {
            return Err(counter(Violation::Monotonicity));
        }
        let with = |s: &[usize]| {
            let mut v = s.to_vec();
            v.push(e);
            obj.eval(&v)
        };
        let fbe = with(&smaller);
        let fae = with(&larger);
        if fbe < fb || fae < fa {
            return Err(counter(Violation::Monotonicity));
        }
        if fbe - fb < fae - fa {
            return Err(counter(Violation::DiminishingReturns));
        }
    }
    Ok(())
}
