//! Partial cover of multiple ground sets.
//!
//! The objective is the total service `f(C) = Σ_i min(|G_i ∩ ∪C|, d(G_i))`,
//! a sum of capped coverage functions and hence monotone submodular.

use crate::error::{Error, Result};
use crate::greedy::{greedy_cover, GreedyOptions, GreedyTrace, SubmodularObjective};

use super::{normalize_subset, remap_outcome, representative_edges};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandSet {
    pub members: Vec<usize>,
    pub demand: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcmsInstance {
    universe_size: usize,
    edges: Vec<Vec<usize>>,
    ground_sets: Vec<DemandSet>,
}

impl PcmsInstance {
    pub fn new(
        universe_size: usize,
        edges: Vec<Vec<usize>>,
        ground_sets: Vec<DemandSet>,
    ) -> Result<Self> {
        if ground_sets.is_empty() {
            return Err(Error::invalid(
                "ground_sets",
                "at least one ground set required",
            ));
        }
        let edges = edges
            .iter()
            .enumerate()
            .map(|(j, e)| normalize_subset(&format!("edges[{j}]"), e, universe_size))
            .collect::<Result<Vec<_>>>()?;
        let ground_sets = ground_sets
            .into_iter()
            .enumerate()
            .map(|(i, g)| {
                let members = normalize_subset(
                    &format!("ground_sets[{i}].members"),
                    &g.members,
                    universe_size,
                )?;
                if g.demand > members.len() {
                    return Err(Error::invalid(
                        format!("ground_sets[{i}].demand"),
                        format!(
                            "demand {} exceeds ground set size {}",
                            g.demand,
                            members.len()
                        ),
                    ));
                }
                Ok(DemandSet {
                    members,
                    demand: g.demand,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PcmsInstance {
            universe_size,
            edges,
            ground_sets,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn ground_sets(&self) -> &[DemandSet] {
        &self.ground_sets
    }

    pub fn total_demand(&self) -> u64 {
        self.ground_sets.iter().map(|g| g.demand as u64).sum()
    }

    /// Ground sets whose demand is not met by the union of `chosen`.
    pub fn shortfalls(&self, chosen: &[usize]) -> Result<Vec<Shortfall>> {
        let mut covered = vec![false; self.universe_size];
        for &j in chosen {
            let edge = self.edges.get(j).ok_or(Error::OutOfRange {
                what: "edge",
                index: j,
                len: self.edges.len(),
            })?;
            for &x in edge {
                covered[x] = true;
            }
        }
        Ok(self
            .ground_sets
            .iter()
            .enumerate()
            .filter_map(|(i, g)| {
                let served = g.members.iter().filter(|&&x| covered[x]).count();
                (served < g.demand).then_some(Shortfall {
                    ground_set: i,
                    demand: g.demand,
                    covered: served,
                })
            })
            .collect())
    }

    fn with_edges(&self, keep: &[usize]) -> PcmsInstance {
        PcmsInstance {
            universe_size: self.universe_size,
            edges: keep.iter().map(|&j| self.edges[j].clone()).collect(),
            ground_sets: self.ground_sets.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shortfall {
    pub ground_set: usize,
    pub demand: usize,
    pub covered: usize,
}

impl Shortfall {
    pub fn missing(&self) -> usize {
        self.demand - self.covered
    }
}

/// Incremental service objective of a [`PcmsInstance`].
#[derive(Debug, Clone)]
pub struct PcmsObjective {
    universe_size: usize,
    edges: Vec<Vec<usize>>,
    demands: Vec<u64>,
    /// Ground sets containing each universe element.
    memberships: Vec<Vec<u32>>,
    f_max: u64,
}

#[derive(Debug, Clone)]
pub struct PcmsState {
    covered: Vec<bool>,
    served: Vec<u64>,
}

pub fn pcms_objective(inst: &PcmsInstance) -> PcmsObjective {
    let mut memberships = vec![Vec::new(); inst.universe_size];
    for (i, g) in inst.ground_sets.iter().enumerate() {
        for &x in &g.members {
            memberships[x].push(i as u32);
        }
    }
    let mut obj = PcmsObjective {
        universe_size: inst.universe_size,
        edges: inst.edges.clone(),
        demands: inst.ground_sets.iter().map(|g| g.demand as u64).collect(),
        memberships,
        f_max: 0,
    };
    let all: Vec<usize> = (0..obj.edges.len()).collect();
    obj.f_max = obj.eval(&all);
    obj
}

impl SubmodularObjective for PcmsObjective {
    type State = PcmsState;

    fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn f_max(&self) -> u64 {
        self.f_max
    }

    fn empty_state(&self) -> PcmsState {
        PcmsState {
            covered: vec![false; self.universe_size],
            served: vec![0; self.demands.len()],
        }
    }

    fn value(&self, state: &PcmsState) -> u64 {
        state
            .served
            .iter()
            .zip(&self.demands)
            .map(|(&s, &d)| s.min(d))
            .sum()
    }

    fn gain(&self, state: &PcmsState, edge: usize) -> u64 {
        let mut fresh = vec![0u64; self.demands.len()];
        let mut touched = Vec::new();
        for &x in &self.edges[edge] {
            if state.covered[x] {
                continue;
            }
            for &g in &self.memberships[x] {
                let g = g as usize;
                if fresh[g] == 0 {
                    touched.push(g);
                }
                fresh[g] += 1;
            }
        }
        touched
            .into_iter()
            .map(|g| {
                let cap = self.demands[g];
                let before = state.served[g].min(cap);
                (state.served[g] + fresh[g]).min(cap) - before
            })
            .sum()
    }

    fn insert(&self, state: &mut PcmsState, edge: usize) {
        for &x in &self.edges[edge] {
            if !state.covered[x] {
                state.covered[x] = true;
                for &g in &self.memberships[x] {
                    state.served[g as usize] += 1;
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcmsSolution {
    /// Chosen edge indices, ascending.
    pub chosen: Vec<usize>,
    pub trace: GreedyTrace,
    /// Whether the full edge family meets every demand.
    pub feasible: bool,
    /// Unmet ground sets for `chosen`; empty when feasible.
    pub shortfalls: Vec<Shortfall>,
}

/// Greedy partial cover. Infeasible instances still get a solution reaching
/// `f(H)`, with the remaining shortfalls listed.
pub fn solve_pcms(inst: &PcmsInstance, opts: GreedyOptions) -> PcmsSolution {
    let reps = representative_edges(&inst.edges, inst.universe_size, false);
    let collapsed = inst.with_edges(&reps);
    let outcome = remap_outcome(greedy_cover(&pcms_objective(&collapsed), opts), &reps);
    let feasible = outcome.trace.f_max == inst.total_demand();
    let shortfalls = inst
        .shortfalls(&outcome.solution)
        .expect("greedy returns in-range edges");
    PcmsSolution {
        chosen: outcome.solution,
        trace: outcome.trace,
        feasible,
        shortfalls,
    }
}
