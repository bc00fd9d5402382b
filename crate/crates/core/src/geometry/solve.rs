use std::cmp::Ordering;
use std::collections::HashMap;

use super::{enumerate_halfspaces, side_sign, CanonicalHalfspace, Hyperplane, PointConfig};
use crate::error::{Error, Result};
use crate::greedy::GreedyOptions;
use crate::instances::rmc::face_violations;
use crate::instances::{solve_rmc, FaceViolation, RmcInstance, RmcSolution, TargetSet};

/// The RMC instance over the point indices: one edge per halfspace class (its
/// positive side), one ground set per group.
pub fn build_rmc(config: &PointConfig) -> Result<(RmcInstance, Vec<CanonicalHalfspace>)> {
    let halfspaces = enumerate_halfspaces(config)?;
    let edges = halfspaces.iter().map(|h| h.subset.clone()).collect();
    let ground_sets = config
        .groups()
        .iter()
        .map(|g| TargetSet {
            members: g.members.clone(),
            target: g.mu,
        })
        .collect();
    let inst = RmcInstance::new(config.len(), edges, ground_sets)?;
    Ok((inst, halfspaces))
}

#[derive(Debug, Clone)]
pub struct GeometricSolution {
    pub instance: RmcInstance,
    pub halfspaces: Vec<CanonicalHalfspace>,
    /// Indices into `halfspaces` of the chosen classes.
    pub chosen: Vec<usize>,
    pub hyperplanes: Vec<Hyperplane>,
    pub rmc: RmcSolution,
    /// Result of the independent sign-vector check.
    pub violations: Vec<FaceViolation>,
}

impl GeometricSolution {
    pub fn feasible(&self) -> bool {
        self.rmc.feasible
    }
}

pub fn solve_geometric(config: &PointConfig, opts: GreedyOptions) -> Result<GeometricSolution> {
    let (instance, halfspaces) = build_rmc(config)?;
    log::info!(
        "{} points in R^{}: {} halfspace classes",
        config.len(),
        config.dim(),
        halfspaces.len()
    );
    let rmc = solve_rmc(&instance, opts);
    let hyperplanes: Vec<Hyperplane> = rmc
        .chosen
        .iter()
        .map(|&j| halfspaces[j].witness.clone())
        .collect();
    let violations = verify_partition(config, &hyperplanes)?;
    Ok(GeometricSolution {
        instance,
        halfspaces,
        chosen: rmc.chosen.clone(),
        hyperplanes,
        rmc,
        violations,
    })
}

/// Faces of the hyperplane arrangement restricted to the points: points with
/// equal sign vectors, listed by smallest member.
pub fn sign_vector_faces(
    config: &PointConfig,
    hyperplanes: &[Hyperplane],
) -> Result<Vec<Vec<usize>>> {
    let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for (i, p) in config.points().iter().enumerate() {
        let signs = hyperplanes
            .iter()
            .enumerate()
            .map(|(j, h)| match side_sign(h, p)? {
                Ordering::Greater => Ok(true),
                Ordering::Less => Ok(false),
                Ordering::Equal => Err(Error::OnHyperplane {
                    point: i,
                    hyperplane: j,
                }),
            })
            .collect::<Result<Vec<bool>>>()?;
        let next = faces.len();
        let f = *index.entry(signs).or_insert(next);
        if f == next {
            faces.push(Vec::new());
        }
        faces[f].push(i);
    }
    Ok(faces)
}

/// Every `(face, group)` pair whose point count exceeds the group's target.
/// Uses only sign vectors, never the set-system machinery.
pub fn verify_partition(
    config: &PointConfig,
    hyperplanes: &[Hyperplane],
) -> Result<Vec<FaceViolation>> {
    let faces = sign_vector_faces(config, hyperplanes)?;
    Ok(face_violations(
        &faces,
        config.groups().iter().map(|g| (&g.members[..], g.mu)),
    ))
}
