//! Reduce measures via cuts: choose edges so that every face of the
//! arrangement holds at most `μ_i` elements of each ground set `G_i`.
//!
//! Each ground set contributes a partition-to-demand objective restricted to
//! its own pairs:
//!
//! ```text
//! f_i(C) = Σ_{v ∈ G_i} min(sep_i(v, C), |G_i| - μ_i)
//! ```
//!
//! where `sep_i(v, C)` counts members of `G_i` separated from `v` by some edge
//! of `C`, i.e. `|G_i| - |face(v) ∩ G_i|`. `f = Σ_i f_i` reaches its ceiling
//! `Σ_i |G_i| (|G_i| - μ_i)` exactly when every face meets every target.

use crate::error::{Error, Result};
use crate::greedy::{greedy_cover, GreedyOptions, GreedyTrace, SubmodularObjective};

use super::{arrangement, face_labels, normalize_subset, remap_outcome, representative_edges};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSet {
    pub members: Vec<usize>,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmcInstance {
    universe_size: usize,
    edges: Vec<Vec<usize>>,
    ground_sets: Vec<TargetSet>,
}

impl RmcInstance {
    pub fn new(
        universe_size: usize,
        edges: Vec<Vec<usize>>,
        ground_sets: Vec<TargetSet>,
    ) -> Result<Self> {
        if universe_size == 0 {
            return Err(Error::invalid("universe_size", "must be positive"));
        }
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
                if g.target == 0 || g.target > members.len() {
                    return Err(Error::invalid(
                        format!("ground_sets[{i}].target"),
                        format!("target {} outside 1..={}", g.target, members.len()),
                    ));
                }
                Ok(TargetSet {
                    members,
                    target: g.target,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RmcInstance {
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

    pub fn ground_sets(&self) -> &[TargetSet] {
        &self.ground_sets
    }

    /// The objective value of any edge set meeting every target.
    pub fn ceiling(&self) -> u64 {
        self.ground_sets
            .iter()
            .map(|g| (g.members.len() * (g.members.len() - g.target)) as u64)
            .sum()
    }

    fn picked(&self, chosen: &[usize]) -> Result<Vec<&[usize]>> {
        chosen
            .iter()
            .map(|&j| {
                self.edges
                    .get(j)
                    .map(Vec::as_slice)
                    .ok_or(Error::OutOfRange {
                        what: "edge",
                        index: j,
                        len: self.edges.len(),
                    })
            })
            .collect()
    }

    /// Objective value counted pair by pair: `v` and `u` are separated when
    /// some chosen edge contains exactly one of them.
    pub fn pair_cut_value(&self, chosen: &[usize]) -> Result<u64> {
        let picked = self.picked(chosen)?;
        let n = self.universe_size;
        let masks: Vec<Vec<bool>> = picked
            .iter()
            .map(|e| {
                let mut m = vec![false; n];
                e.iter().for_each(|&x| m[x] = true);
                m
            })
            .collect();
        let mut total = 0u64;
        for g in &self.ground_sets {
            let cap = g.members.len() - g.target;
            for &v in &g.members {
                let sep = g
                    .members
                    .iter()
                    .filter(|&&u| masks.iter().any(|m| m[u] != m[v]))
                    .count();
                total += sep.min(cap) as u64;
            }
        }
        Ok(total)
    }

    /// Objective value recomputed from the faces of the arrangement.
    pub fn arrangement_value(&self, chosen: &[usize]) -> Result<u64> {
        let labels = face_labels(self.universe_size, &self.picked(chosen)?)?;
        let mut total = 0u64;
        for g in &self.ground_sets {
            let size = g.members.len();
            let cap = size - g.target;
            for &v in &g.members {
                let together = g
                    .members
                    .iter()
                    .filter(|&&u| labels[u] == labels[v])
                    .count();
                total += (size - together).min(cap) as u64;
            }
        }
        Ok(total)
    }

    fn with_edges(&self, keep: &[usize]) -> RmcInstance {
        RmcInstance {
            universe_size: self.universe_size,
            edges: keep.iter().map(|&j| self.edges[j].clone()).collect(),
            ground_sets: self.ground_sets.clone(),
        }
    }
}

/// Incremental objective of an [`RmcInstance`].
///
/// The state tracks the current faces and, per face, how many members of each
/// ground set it holds. A candidate edge only changes the terms of faces it
/// splits, so its gain costs `O(|e| · m)`.
#[derive(Debug, Clone)]
pub struct RmcObjective {
    n: usize,
    /// Smaller of each edge and its complement; both split faces identically.
    sides: Vec<Vec<usize>>,
    memberships: Vec<Vec<u32>>,
    sizes: Vec<u64>,
    caps: Vec<u64>,
    f_max: u64,
}

#[derive(Debug, Clone)]
pub struct RmcState {
    face: Vec<u32>,
    face_size: Vec<u32>,
    /// `counts[f * m + i] = |face f ∩ G_i|`.
    counts: Vec<u32>,
    value: u64,
}

pub fn rmc_objective(inst: &RmcInstance) -> RmcObjective {
    let n = inst.universe_size;
    let sides = inst
        .edges
        .iter()
        .map(|e| {
            if 2 * e.len() <= n {
                e.clone()
            } else {
                super::complement(e, n)
            }
        })
        .collect();
    let mut memberships = vec![Vec::new(); n];
    for (i, g) in inst.ground_sets.iter().enumerate() {
        for &x in &g.members {
            memberships[x].push(i as u32);
        }
    }
    let mut obj = RmcObjective {
        n,
        sides,
        memberships,
        sizes: inst
            .ground_sets
            .iter()
            .map(|g| g.members.len() as u64)
            .collect(),
        caps: inst
            .ground_sets
            .iter()
            .map(|g| (g.members.len() - g.target) as u64)
            .collect(),
        f_max: 0,
    };
    let all: Vec<usize> = (0..obj.sides.len()).collect();
    obj.f_max = obj.eval(&all);
    obj
}

impl RmcObjective {
    fn groups(&self) -> usize {
        self.sizes.len()
    }

    fn term(&self, group: usize, count: u32) -> u64 {
        let c = count as u64;
        c * (self.sizes[group] - c).min(self.caps[group])
    }
}

impl SubmodularObjective for RmcObjective {
    type State = RmcState;

    fn edge_count(&self) -> usize {
        self.sides.len()
    }

    fn f_max(&self) -> u64 {
        self.f_max
    }

    fn empty_state(&self) -> RmcState {
        RmcState {
            face: vec![0; self.n],
            face_size: vec![self.n as u32],
            counts: self.sizes.iter().map(|&s| s as u32).collect(),
            value: 0,
        }
    }

    fn value(&self, state: &RmcState) -> u64 {
        state.value
    }

    fn gain(&self, state: &RmcState, edge: usize) -> u64 {
        let m = self.groups();
        let mut split = vec![0u32; state.face_size.len() * m];
        let mut touched = Vec::new();
        for &x in &self.sides[edge] {
            let f = state.face[x] as usize;
            for &g in &self.memberships[x] {
                let idx = f * m + g as usize;
                if split[idx] == 0 {
                    touched.push(idx);
                }
                split[idx] += 1;
            }
        }
        touched
            .into_iter()
            .map(|idx| {
                let g = idx % m;
                let whole = state.counts[idx];
                let part = split[idx];
                if part == whole {
                    0
                } else {
                    self.term(g, part) + self.term(g, whole - part) - self.term(g, whole)
                }
            })
            .sum()
    }

    fn insert(&self, state: &mut RmcState, edge: usize) {
        state.value += self.gain(state, edge);
        let m = self.groups();
        let side = &self.sides[edge];
        let mut inside = vec![0u32; state.face_size.len()];
        for &x in side {
            inside[state.face[x] as usize] += 1;
        }
        let mut renamed: Vec<Option<u32>> = vec![None; state.face_size.len()];
        for (f, &k) in inside.iter().enumerate() {
            if k > 0 && k < state.face_size[f] {
                let fresh = state.face_size.len() as u32;
                renamed[f] = Some(fresh);
                state.face_size[f] -= k;
                state.face_size.push(k);
                state.counts.extend(std::iter::repeat_n(0, m));
            }
        }
        for &x in side {
            let old = state.face[x] as usize;
            if let Some(fresh) = renamed[old] {
                state.face[x] = fresh;
                for &g in &self.memberships[x] {
                    state.counts[old * m + g as usize] -= 1;
                    state.counts[fresh as usize * m + g as usize] += 1;
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceViolation {
    /// Members of the offending face.
    pub face: Vec<usize>,
    pub group: usize,
    pub count: usize,
    pub limit: usize,
}

/// Every `(face, ground set)` pair of the arrangement of `chosen` whose
/// occupancy exceeds the target. Computed from the faces directly.
pub fn verify_rmc(inst: &RmcInstance, chosen: &[usize]) -> Result<Vec<FaceViolation>> {
    let picked: Vec<Vec<usize>> = inst
        .picked(chosen)?
        .into_iter()
        .map(<[usize]>::to_vec)
        .collect();
    let faces = arrangement(inst.universe_size, &picked)?;
    Ok(face_violations(
        &faces,
        inst.ground_sets.iter().map(|g| (&g.members[..], g.target)),
    ))
}

pub(crate) fn face_violations<'a>(
    faces: &[Vec<usize>],
    groups: impl Iterator<Item = (&'a [usize], usize)> + Clone,
) -> Vec<FaceViolation> {
    let mut out = Vec::new();
    for face in faces {
        for (i, (members, limit)) in groups.clone().enumerate() {
            let count = face
                .iter()
                .filter(|v| members.binary_search(v).is_ok())
                .count();
            if count > limit {
                out.push(FaceViolation {
                    face: face.clone(),
                    group: i,
                    count,
                    limit,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmcSolution {
    pub chosen: Vec<usize>,
    pub trace: GreedyTrace,
    /// Whether the full edge family meets every target.
    pub feasible: bool,
    /// Faces of the arrangement of `chosen`.
    pub faces: Vec<Vec<usize>>,
    /// Largest `|face ∩ G_i|` per ground set.
    pub max_occupancy: Vec<usize>,
    pub violations: Vec<FaceViolation>,
}

pub fn solve_rmc(inst: &RmcInstance, opts: GreedyOptions) -> RmcSolution {
    let reps = representative_edges(&inst.edges, inst.universe_size, true);
    let collapsed = inst.with_edges(&reps);
    let outcome = remap_outcome(greedy_cover(&rmc_objective(&collapsed), opts), &reps);
    let feasible = outcome.trace.f_max == inst.ceiling();
    let picked: Vec<Vec<usize>> = outcome
        .solution
        .iter()
        .map(|&j| inst.edges[j].clone())
        .collect();
    let faces = arrangement(inst.universe_size, &picked).expect("validated edges");
    let max_occupancy = inst
        .ground_sets
        .iter()
        .map(|g| {
            faces
                .iter()
                .map(|f| {
                    f.iter()
                        .filter(|v| g.members.binary_search(v).is_ok())
                        .count()
                })
                .max()
                .unwrap_or(0)
        })
        .collect();
    let violations = face_violations(
        &faces,
        inst.ground_sets.iter().map(|g| (&g.members[..], g.target)),
    );
    RmcSolution {
        chosen: outcome.solution,
        trace: outcome.trace,
        feasible,
        faces,
        max_occupancy,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thresholds(n: usize) -> Vec<Vec<usize>> {
        (1..n).map(|k| (0..k).collect()).collect()
    }

    #[test]
    fn empty_selection_is_zero() {
        let inst = RmcInstance::new(
            4,
            thresholds(4),
            vec![TargetSet {
                members: vec![0, 1, 2, 3],
                target: 1,
            }],
        )
        .unwrap();
        assert_eq!(rmc_objective(&inst).eval(&[]), 0);
    }

    #[test]
    fn full_target_needs_nothing() {
        let inst = RmcInstance::new(
            3,
            thresholds(3),
            vec![TargetSet {
                members: vec![0, 1, 2],
                target: 3,
            }],
        )
        .unwrap();
        let obj = rmc_objective(&inst);
        assert_eq!(obj.f_max(), 0);
        let sol = solve_rmc(&inst, GreedyOptions::lazy());
        assert!(sol.chosen.is_empty());
        assert!(sol.feasible);
        assert!(sol.violations.is_empty());
    }

    #[test]
    fn line_of_four_singletons() {
        let inst = RmcInstance::new(
            4,
            thresholds(4),
            vec![TargetSet {
                members: vec![0, 1, 2, 3],
                target: 1,
            }],
        )
        .unwrap();
        let obj = rmc_objective(&inst);
        assert_eq!(obj.f_max(), 12);
        for subset in 0u32..8 {
            let chosen: Vec<usize> = (0..3).filter(|b| subset >> b & 1 == 1).collect();
            assert_eq!(obj.eval(&chosen) == 12, chosen.len() == 3);
        }
        let sol = solve_rmc(&inst, GreedyOptions::naive());
        assert_eq!(sol.chosen, vec![0, 1, 2]);
        assert!(sol.violations.is_empty());
    }

    #[test]
    fn disjoint_groups_share_one_edge() {
        // G1 = {0,1}, G2 = {2,3}, both with target 1; edge {0,2} splits both.
        let inst = RmcInstance::new(
            4,
            vec![vec![0], vec![0, 2], vec![2]],
            vec![
                TargetSet {
                    members: vec![0, 1],
                    target: 1,
                },
                TargetSet {
                    members: vec![2, 3],
                    target: 1,
                },
            ],
        )
        .unwrap();
        let sol = solve_rmc(&inst, GreedyOptions::lazy());
        assert_eq!(sol.chosen, vec![1]);
        assert!(sol.violations.is_empty());
        assert_eq!(sol.max_occupancy, vec![1, 1]);
    }

    #[test]
    fn verify_reports_full_face() {
        let inst = RmcInstance::new(
            3,
            vec![vec![0]],
            vec![TargetSet {
                members: vec![0, 1, 2],
                target: 1,
            }],
        )
        .unwrap();
        let v = verify_rmc(&inst, &[]).unwrap();
        assert_eq!(
            v,
            vec![FaceViolation {
                face: vec![0, 1, 2],
                group: 0,
                count: 3,
                limit: 1
            }]
        );
        assert!(verify_rmc(&inst, &[1]).is_err());
    }

    #[test]
    fn worked_example_meets_half() {
        let inst = RmcInstance::new(
            5,
            vec![vec![0, 1, 2], vec![2, 3, 4]],
            vec![TargetSet {
                members: (0..5).collect(),
                target: 2,
            }],
        )
        .unwrap();
        assert!(verify_rmc(&inst, &[0, 1]).unwrap().is_empty());
    }

    #[test]
    fn three_evaluations_agree() {
        let inst = RmcInstance::new(
            6,
            vec![
                vec![0, 1, 2],
                vec![1, 3],
                vec![4],
                vec![0, 5],
                vec![2, 3, 4, 5],
            ],
            vec![
                TargetSet {
                    members: vec![0, 1, 2, 3],
                    target: 2,
                },
                TargetSet {
                    members: vec![2, 3, 4, 5],
                    target: 1,
                },
                TargetSet {
                    members: vec![0, 5],
                    target: 1,
                },
            ],
        )
        .unwrap();
        let obj = rmc_objective(&inst);
        for subset in 0u32..32 {
            let chosen: Vec<usize> = (0..5).filter(|b| subset >> b & 1 == 1).collect();
            let incremental = obj.eval(&chosen);
            assert_eq!(incremental, inst.pair_cut_value(&chosen).unwrap());
            assert_eq!(incremental, inst.arrangement_value(&chosen).unwrap());
        }
    }

    #[test]
    fn target_bounds() {
        let bad = RmcInstance::new(
            2,
            vec![],
            vec![TargetSet {
                members: vec![0, 1],
                target: 0,
            }],
        );
        assert!(bad.is_err());
        let bad = RmcInstance::new(
            2,
            vec![],
            vec![TargetSet {
                members: vec![0],
                target: 2,
            }],
        );
        assert!(bad.is_err());
        assert!(RmcInstance::new(2, vec![], vec![]).is_err());
    }
}
