//! Greedy cover for monotone, integer-valued submodular functions.
//!
//! Starting from the empty set, every iteration adds the edge with the largest
//! marginal gain `f(C + e) - f(C)` until `f(C)` reaches `f_max = f(H)`. Ties go
//! to the smallest edge index. For a monotone submodular `f` the number of
//! iterations is `O(k log f_max)`, where `k` is the size of an optimal cover.
//!
//! Two scan strategies are offered and produce identical output:
//!
//! * [`GreedyMode::Naive`] re-evaluates every unchosen edge per iteration,
//!   optionally spread over a thread pool.
//! * [`GreedyMode::Lazy`] keeps stale gains in a max-heap and only
//!   re-evaluates the top entry. Stale gains are upper bounds because marginal
//!   gains never grow as the solution grows.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Incremental evaluation contract for a monotone submodular set function over
/// the edge family `0..edge_count()`.
///
/// Implementations keep whatever bookkeeping they need in `State`, so that the
/// greedy driver never re-evaluates from scratch. `gain` must be safe to call
/// concurrently on a shared state.
pub trait SubmodularObjective: Sync {
    type State: Clone + Send + Sync;

    fn edge_count(&self) -> usize;

    /// `f(H)`, the value of the full edge family.
    fn f_max(&self) -> u64;

    fn empty_state(&self) -> Self::State;

    fn value(&self, state: &Self::State) -> u64;

    /// `f(C + e) - f(C)` for the set `C` described by `state`. Zero if `e` is
    /// already in `C`.
    fn gain(&self, state: &Self::State, edge: usize) -> u64;

    /// Adds `edge` to the state. Adding an edge twice is a no-op.
    fn insert(&self, state: &mut Self::State, edge: usize);

    /// Evaluates `f` on an arbitrary edge set.
    fn eval(&self, edges: &[usize]) -> u64 {
        let mut state = self.empty_state();
        for &e in edges {
            self.insert(&mut state, e);
        }
        self.value(&state)
    }

    /// `f(current + e) - f(current)`, with range checks on every index.
    fn marginal_gain(&self, current: &[usize], edge: usize) -> Result<u64> {
        let len = self.edge_count();
        for &e in current.iter().chain(std::iter::once(&edge)) {
            if e >= len {
                return Err(Error::OutOfRange {
                    what: "edge",
                    index: e,
                    len,
                });
            }
        }
        let mut state = self.empty_state();
        for &e in current {
            self.insert(&mut state, e);
        }
        Ok(self.gain(&state, edge))
    }
}

/// A set function given by a plain closure over edge-index slices.
///
/// Every gain is two full evaluations; useful for tests and for functions
/// without a natural incremental form.
pub struct FnObjective<F> {
    edge_count: usize,
    f_max: u64,
    func: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[usize]) -> u64 + Sync,
{
    pub fn new(edge_count: usize, func: F) -> Self {
        let all: Vec<usize> = (0..edge_count).collect();
        let f_max = func(&all);
        FnObjective {
            edge_count,
            f_max,
            func,
        }
    }
}

impl<F> SubmodularObjective for FnObjective<F>
where
    F: Fn(&[usize]) -> u64 + Sync,
{
    type State = Vec<usize>;

    fn edge_count(&self) -> usize {
        self.edge_count
    }

    fn f_max(&self) -> u64 {
        self.f_max
    }

    fn empty_state(&self) -> Vec<usize> {
        Vec::new()
    }

    fn value(&self, state: &Vec<usize>) -> u64 {
        (self.func)(state)
    }

    fn gain(&self, state: &Vec<usize>, edge: usize) -> u64 {
        if state.binary_search(&edge).is_ok() {
            return 0;
        }
        let mut with = state.clone();
        let pos = with.binary_search(&edge).unwrap_err();
        with.insert(pos, edge);
        (self.func)(&with).saturating_sub((self.func)(state))
    }

    fn insert(&self, state: &mut Vec<usize>, edge: usize) {
        if let Err(pos) = state.binary_search(&edge) {
            state.insert(pos, edge);
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GreedyMode {
    Naive,
    #[default]
    Lazy,
}

impl std::str::FromStr for GreedyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(GreedyMode::Naive),
            "lazy" => Ok(GreedyMode::Lazy),
            other => Err(Error::invalid("mode", format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreedyOptions {
    pub mode: GreedyMode,
    /// Worker threads for candidate scans; `1` scans sequentially.
    pub threads: usize,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions {
            mode: GreedyMode::Lazy,
            threads: 1,
        }
    }
}

impl GreedyOptions {
    pub fn naive() -> Self {
        GreedyOptions {
            mode: GreedyMode::Naive,
            threads: 1,
        }
    }

    pub fn lazy() -> Self {
        GreedyOptions::default()
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyStep {
    pub edge: usize,
    pub gain: u64,
    /// `f_max - f(C_i)` after this step.
    pub deficiency: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GreedyTrace {
    pub f_max: u64,
    pub initial_value: u64,
    pub steps: Vec<GreedyStep>,
    pub final_value: u64,
}

impl GreedyTrace {
    /// Edges in the order they were picked.
    pub fn picks(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|s| s.edge)
    }

    pub fn reached_max(&self) -> bool {
        self.final_value == self.f_max
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyOutcome {
    /// Chosen edges, ascending.
    pub solution: Vec<usize>,
    pub trace: GreedyTrace,
}

/// Key ordering candidates: larger gain first, then smaller index.
type Key = (u64, Reverse<usize>);

fn better(a: Key, b: Key) -> Key {
    a.max(b)
}

/// Runs the greedy cover on `obj` until `f(C) = f_max`.
pub fn greedy_cover<O: SubmodularObjective>(obj: &O, opts: GreedyOptions) -> GreedyOutcome {
    if opts.threads > 1 {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
        {
            Ok(pool) => return pool.install(|| run(obj, opts.mode, true)),
            Err(err) => log::warn!("thread pool unavailable, scanning sequentially: {err}"),
        }
    }
    run(obj, opts.mode, false)
}

fn run<O: SubmodularObjective>(obj: &O, mode: GreedyMode, parallel: bool) -> GreedyOutcome {
    let f_max = obj.f_max();
    let mut state = obj.empty_state();
    let initial_value = obj.value(&state);
    let mut value = initial_value;
    let mut chosen = vec![false; obj.edge_count()];
    let mut steps = Vec::new();

    let mut heap = match mode {
        GreedyMode::Lazy if value < f_max => Some(initial_heap(obj, &state, parallel)),
        _ => None,
    };

    while value < f_max {
        let pick = match heap.as_mut() {
            Some(heap) => lazy_pick(obj, &state, heap),
            None => naive_pick(obj, &state, &chosen, parallel),
        };
        let Some((gain, edge)) = pick else {
            // Only reachable for objectives that are not submodular.
            log::warn!("greedy stalled at value {value} below f_max {f_max}");
            break;
        };
        obj.insert(&mut state, edge);
        chosen[edge] = true;
        value = obj.value(&state);
        steps.push(GreedyStep {
            edge,
            gain,
            deficiency: f_max.saturating_sub(value),
        });
        log::debug!(
            "greedy step {}: edge {edge} gain {gain} value {value}",
            steps.len()
        );
    }

    let mut solution: Vec<usize> = steps.iter().map(|s| s.edge).collect();
    solution.sort_unstable();
    GreedyOutcome {
        solution,
        trace: GreedyTrace {
            f_max,
            initial_value,
            steps,
            final_value: value,
        },
    }
}

fn naive_pick<O: SubmodularObjective>(
    obj: &O,
    state: &O::State,
    chosen: &[bool],
    parallel: bool,
) -> Option<(u64, usize)> {
    let key = |e: usize| -> Option<Key> {
        if chosen[e] {
            return None;
        }
        Some((obj.gain(state, e), Reverse(e)))
    };
    let best = if parallel {
        (0..obj.edge_count())
            .into_par_iter()
            .filter_map(key)
            .reduce_with(better)
    } else {
        (0..obj.edge_count()).filter_map(key).reduce(better)
    };
    best.filter(|(gain, _)| *gain > 0)
        .map(|(gain, Reverse(e))| (gain, e))
}

fn initial_heap<O: SubmodularObjective>(
    obj: &O,
    state: &O::State,
    parallel: bool,
) -> BinaryHeap<Key> {
    let key = |e: usize| (obj.gain(state, e), Reverse(e));
    let keys: Vec<Key> = if parallel {
        (0..obj.edge_count()).into_par_iter().map(key).collect()
    } else {
        (0..obj.edge_count()).map(key).collect()
    };
    keys.into_iter().filter(|(gain, _)| *gain > 0).collect()
}

fn lazy_pick<O: SubmodularObjective>(
    obj: &O,
    state: &O::State,
    heap: &mut BinaryHeap<Key>,
) -> Option<(u64, usize)> {
    while let Some((_, Reverse(e))) = heap.pop() {
        let fresh = (obj.gain(state, e), Reverse(e));
        if fresh.0 == 0 {
            continue;
        }
        // Keys are unique per edge, so a fresh key at or above every stale
        // key is the exact argmax.
        match heap.peek() {
            Some(&top) if top > fresh => heap.push(fresh),
            _ => return Some((fresh.0, e)),
        }
    }
    None
}
