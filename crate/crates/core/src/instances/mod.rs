//! Abstract cover problems over set systems and the reductions between them.
//!
//! * [`pcms`]: partial cover of several ground sets, each with a demand.
//! * [`ptd`]: partition to demand, reduced to PCMS over the pairs of `K_n`.
//! * [`rmc`]: reduce measures via cuts, a sum of per-ground-set partition
//!   objectives.
//!
//! Subsets are stored as ascending, duplicate-free `Vec<usize>`.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::greedy::GreedyOutcome;

pub mod pcms;
pub mod ptd;
pub mod rmc;

pub use pcms::{
    pcms_objective, solve_pcms, DemandSet, PcmsInstance, PcmsObjective, PcmsSolution, Shortfall,
};
pub use ptd::{
    ptd_to_pcms, reduce_by_half, solve_ptd, verify_ptd, PtdInstance, PtdSolution, PtdViolation,
};
pub use rmc::{
    rmc_objective, solve_rmc, verify_rmc, FaceViolation, RmcInstance, RmcObjective, RmcSolution,
    TargetSet,
};

/// Sorts `members`, checks every index against `n` and rejects repeats.
pub fn normalize_subset(field: &str, members: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut out = members.to_vec();
    out.sort_unstable();
    if let Some(&bad) = out.iter().find(|&&x| x >= n) {
        return Err(Error::invalid(
            field,
            format!("element {bad} outside ground set of size {n}"),
        ));
    }
    if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::invalid(
            field,
            format!("element {} listed twice", w[0]),
        ));
    }
    Ok(out)
}

/// A ground set `0..ground_size` with a family of edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    ground_size: usize,
    edges: Vec<Vec<usize>>,
}

impl SetSystem {
    pub fn new(ground_size: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if ground_size == 0 {
            return Err(Error::invalid("ground_size", "must be positive"));
        }
        let edges = edges
            .iter()
            .enumerate()
            .map(|(j, e)| normalize_subset(&format!("edges[{j}]"), e, ground_size))
            .collect::<Result<Vec<_>>>()?;
        Ok(SetSystem { ground_size, edges })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Pairs `(j, i)` with `i < j` where edge `j` repeats edge `i`, either
    /// verbatim or as its complement. Both induce the same cut.
    pub fn duplicate_edges(&self) -> Vec<(usize, usize)> {
        let mut first: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut dups = Vec::new();
        for (j, e) in self.edges.iter().enumerate() {
            let key = cut_key(e, self.ground_size);
            match first.get(&key) {
                Some(&i) => dups.push((j, i)),
                None => {
                    first.insert(key, j);
                }
            }
        }
        dups
    }
}

/// Canonical representative of `{e, complement(e)}`: the one without element 0.
fn cut_key(e: &[usize], n: usize) -> Vec<usize> {
    if e.first() == Some(&0) {
        complement(e, n)
    } else {
        e.to_vec()
    }
}

pub fn complement(e: &[usize], n: usize) -> Vec<usize> {
    let mut inside = vec![false; n];
    for &x in e {
        inside[x] = true;
    }
    (0..n).filter(|&x| !inside[x]).collect()
}

/// Indices of the first occurrence of every distinct edge. With
/// `up_to_complement`, an edge and its complement count as the same edge.
pub(crate) fn representative_edges(
    edges: &[Vec<usize>],
    n: usize,
    up_to_complement: bool,
) -> Vec<usize> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut reps = Vec::new();
    for (j, e) in edges.iter().enumerate() {
        let key = if up_to_complement {
            cut_key(e, n)
        } else {
            e.clone()
        };
        if seen.insert(key) {
            reps.push(j);
        }
    }
    reps
}

/// Rewrites an outcome computed on a collapsed edge list back to the original
/// edge indices.
pub(crate) fn remap_outcome(mut outcome: GreedyOutcome, reps: &[usize]) -> GreedyOutcome {
    for step in &mut outcome.trace.steps {
        step.edge = reps[step.edge];
    }
    for e in &mut outcome.solution {
        *e = reps[*e];
    }
    outcome.solution.sort_unstable();
    outcome
}

/// Face labels of the arrangement of `edges`: `labels[v]` is the index of the
/// face holding `v`, with faces numbered in order of their smallest member.
pub fn face_labels(n: usize, edges: &[&[usize]]) -> Result<Vec<usize>> {
    let mut labels = vec![0usize; n];
    let mut inside = vec![false; n];
    for (j, e) in edges.iter().enumerate() {
        inside.iter_mut().for_each(|b| *b = false);
        for &x in e.iter() {
            if x >= n {
                return Err(Error::invalid(
                    format!("edges[{j}]"),
                    format!("element {x} outside ground set of size {n}"),
                ));
            }
            inside[x] = true;
        }
        let mut refine: HashMap<(usize, bool), usize> = HashMap::new();
        for v in 0..n {
            let next = refine.len();
            labels[v] = *refine.entry((labels[v], inside[v])).or_insert(next);
        }
    }
    Ok(labels)
}

fn faces_from_labels(labels: &[usize]) -> Vec<Vec<usize>> {
    let count = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
    let mut faces = vec![Vec::new(); count];
    for (v, &l) in labels.iter().enumerate() {
        faces[l].push(v);
    }
    faces
}

/// The arrangement of `edges` over `0..n`: elements share a face iff they lie
/// in exactly the same edges. Faces are listed by smallest member.
pub fn arrangement(n: usize, edges: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let refs: Vec<&[usize]> = edges.iter().map(Vec::as_slice).collect();
    Ok(faces_from_labels(&face_labels(n, &refs)?))
}

/// The face of the arrangement of `edges` that contains `v`.
pub fn face_of(v: usize, n: usize, edges: &[Vec<usize>]) -> Result<Vec<usize>> {
    if v >= n {
        return Err(Error::OutOfRange {
            what: "element",
            index: v,
            len: n,
        });
    }
    let refs: Vec<&[usize]> = edges.iter().map(Vec::as_slice).collect();
    let labels = face_labels(n, &refs)?;
    Ok((0..n).filter(|&u| labels[u] == labels[v]).collect())
}

/// Unordered pairs `{x, y}` (as `x < y`) with exactly one endpoint in `e`.
pub fn cut_of(e: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut inside = vec![false; n];
    for &x in e {
        inside[x] = true;
    }
    let mut pairs = Vec::with_capacity(e.len() * (n - e.len().min(n)));
    for x in 0..n {
        for y in x + 1..n {
            if inside[x] != inside[y] {
                pairs.push((x, y));
            }
        }
    }
    pairs
}

/// Position of the pair `{x, y}`, `x < y`, in the lexicographic listing of the
/// pairs of `0..n`.
pub fn pair_index(x: usize, y: usize, n: usize) -> usize {
    debug_assert!(x < y && y < n);
    x * n - x * (x + 1) / 2 + (y - x - 1)
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift(sets: &[&[usize]]) -> Vec<Vec<usize>> {
        sets.iter()
            .map(|s| s.iter().map(|x| x - 1).collect())
            .collect()
    }

    #[test]
    fn arrangement_worked_example() {
        // Ground {1..5}, edges {1,2,3} and {3,4,5}.
        let edges = shift(&[&[1, 2, 3], &[3, 4, 5]]);
        let faces = arrangement(5, &edges).unwrap();
        assert_eq!(faces, shift(&[&[1, 2], &[3], &[4, 5]]));
        assert_eq!(face_of(2, 5, &edges).unwrap(), vec![2]);
        assert_eq!(face_of(0, 5, &edges).unwrap(), vec![0, 1]);
    }

    #[test]
    fn empty_edge_list_is_one_face() {
        assert_eq!(arrangement(4, &[]).unwrap(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(face_of(3, 4, &[]).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn complement_induces_same_split() {
        let a = arrangement(5, &[vec![1, 3]]).unwrap();
        let b = arrangement(5, &[vec![0, 2, 4]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, vec![vec![0, 2, 4], vec![1, 3]]);
    }

    #[test]
    fn face_of_range_error() {
        assert!(matches!(
            face_of(5, 5, &[]),
            Err(Error::OutOfRange { index: 5, .. })
        ));
        assert!(arrangement(3, &[vec![3]]).is_err());
    }

    #[test]
    fn cut_examples() {
        assert_eq!(cut_of(&[0], 3), vec![(0, 1), (0, 2)]);
        assert!(cut_of(&[], 4).is_empty());
        assert!(cut_of(&[0, 1, 2, 3], 4).is_empty());
        assert_eq!(cut_of(&[0, 1], 4), vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
    }

    #[test]
    fn pair_index_is_lexicographic_rank() {
        let n = 6;
        let mut k = 0;
        for x in 0..n {
            for y in x + 1..n {
                assert_eq!(pair_index(x, y, n), k);
                k += 1;
            }
        }
        assert_eq!(k, pair_count(n));
    }

    #[test]
    fn duplicates_flagged_up_to_complement() {
        let sys = SetSystem::new(4, vec![vec![0, 1], vec![2, 3], vec![1], vec![1, 0]]).unwrap();
        assert_eq!(sys.duplicate_edges(), vec![(1, 0), (3, 0)]);
        assert_eq!(representative_edges(sys.edges(), 4, true), vec![0, 2]);
        assert_eq!(representative_edges(sys.edges(), 4, false), vec![0, 1, 2]);
    }

    #[test]
    fn set_system_validation() {
        assert!(SetSystem::new(0, vec![]).is_err());
        assert!(SetSystem::new(3, vec![vec![0, 3]]).is_err());
        assert!(SetSystem::new(3, vec![vec![1, 1]]).is_err());
        let sys = SetSystem::new(3, vec![vec![2, 0]]).unwrap();
        assert_eq!(sys.edges(), &[vec![0, 2]]);
    }
}
