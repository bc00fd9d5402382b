//! Partition to demand: pick edges so every element's face has at most
//! `d(v)` members.
//!
//! Solved through the pair reduction: the universe is the pair set of `K_n`,
//! each element `v` owns the ground set of its `n - 1` incident pairs with
//! demand `n - d(v)`, and edge `e` becomes its cut set. Cutting `n - d(v)`
//! pairs at `v` leaves exactly `d(v)` elements in its face.

use crate::error::{Error, Result};
use crate::greedy::{GreedyOptions, GreedyTrace};

use super::{
    cut_of, face_labels, pair_count, pair_index, solve_pcms, DemandSet, PcmsInstance, SetSystem,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtdInstance {
    system: SetSystem,
    demands: Vec<usize>,
}

impl PtdInstance {
    /// Demands must lie in `1..=n`: every element sits in its own face, so a
    /// zero demand can never be met.
    pub fn new(system: SetSystem, demands: Vec<usize>) -> Result<Self> {
        let n = system.ground_size();
        if demands.len() != n {
            return Err(Error::invalid(
                "demands",
                format!("expected {n} demands, got {}", demands.len()),
            ));
        }
        if let Some((v, &d)) = demands.iter().enumerate().find(|(_, &d)| d == 0 || d > n) {
            return Err(Error::invalid(
                format!("demands[{v}]"),
                format!("demand {d} outside 1..={n}"),
            ));
        }
        Ok(PtdInstance { system, demands })
    }

    pub fn system(&self) -> &SetSystem {
        &self.system
    }

    pub fn demands(&self) -> &[usize] {
        &self.demands
    }
}

/// Every element demands a face of at most `floor(n / 2)` elements.
pub fn reduce_by_half(system: SetSystem) -> Result<PtdInstance> {
    let n = system.ground_size();
    if n < 2 {
        return Err(Error::invalid(
            "ground_size",
            format!("halving needs at least 2 elements, got {n}"),
        ));
    }
    PtdInstance::new(system, vec![n / 2; n])
}

/// Pair-cutting reduction. PCMS edge `j` is the cut of PTD edge `j`; ground
/// set `v` holds the pairs incident to `v`.
pub fn ptd_to_pcms(inst: &PtdInstance) -> PcmsInstance {
    let n = inst.system.ground_size();
    let edges = inst
        .system
        .edges()
        .iter()
        .map(|e| {
            cut_of(e, n)
                .into_iter()
                .map(|(x, y)| pair_index(x, y, n))
                .collect()
        })
        .collect();
    let ground_sets = (0..n)
        .map(|v| {
            let mut members: Vec<usize> = (0..n)
                .filter(|&u| u != v)
                .map(|u| pair_index(u.min(v), u.max(v), n))
                .collect();
            members.sort_unstable();
            DemandSet {
                members,
                demand: n - inst.demands[v],
            }
        })
        .collect();
    PcmsInstance::new(pair_count(n), edges, ground_sets).expect("reduction preserves invariants")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtdViolation {
    pub element: usize,
    pub face_size: usize,
    pub demand: usize,
}

/// Elements whose face in the arrangement of `chosen` exceeds their demand.
pub fn verify_ptd(inst: &PtdInstance, chosen: &[usize]) -> Result<Vec<PtdViolation>> {
    let n = inst.system.ground_size();
    let edges = inst.system.edges();
    let picked = chosen
        .iter()
        .map(|&j| {
            edges.get(j).map(Vec::as_slice).ok_or(Error::OutOfRange {
                what: "edge",
                index: j,
                len: edges.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = face_labels(n, &picked)?;
    let mut sizes = vec![0usize; n];
    for &l in &labels {
        sizes[l] += 1;
    }
    Ok((0..n)
        .filter(|&v| sizes[labels[v]] > inst.demands[v])
        .map(|v| PtdViolation {
            element: v,
            face_size: sizes[labels[v]],
            demand: inst.demands[v],
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtdSolution {
    pub chosen: Vec<usize>,
    pub trace: GreedyTrace,
    pub feasible: bool,
    pub violations: Vec<PtdViolation>,
}

pub fn solve_ptd(inst: &PtdInstance, opts: GreedyOptions) -> PtdSolution {
    let sol = solve_pcms(&ptd_to_pcms(inst), opts);
    let violations = verify_ptd(inst, &sol.chosen).expect("greedy returns in-range edges");
    PtdSolution {
        chosen: sol.chosen,
        trace: sol.trace,
        feasible: sol.feasible,
        violations,
    }
}
