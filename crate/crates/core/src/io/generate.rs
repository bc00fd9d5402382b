//! Seeded random geometric instances.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{affinely_independent_points, rat, Group, PointConfig, Rational};
use crate::instances::{DemandSet, PcmsInstance, RmcInstance, TargetSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TargetRule {
    /// `μ_i = ceil(|P_i| / 2)`.
    #[default]
    Half,
    /// `μ_i = 1`.
    Singleton,
}

impl std::str::FromStr for TargetRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half" => Ok(TargetRule::Half),
            "singleton" => Ok(TargetRule::Singleton),
            other => Err(Error::invalid(
                "target_rule",
                format!("unknown rule {other:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorParams {
    pub seed: u64,
    pub points: usize,
    pub dim: usize,
    pub groups: usize,
    /// Coordinates are drawn from `0..=coordinate_bound`.
    pub coordinate_bound: u64,
    pub rule: TargetRule,
}

const ATTEMPTS_PER_POINT: usize = 200;

/// Distinct integer points in general position, split into overlapping
/// groups that together cover every point. Same parameters, same instance.
pub fn generate_instance(params: &GeneratorParams) -> Result<PointConfig> {
    let GeneratorParams {
        seed,
        points: n,
        dim: d,
        groups: m,
        coordinate_bound: bound,
        rule,
    } = *params;
    for (field, v) in [("points", n), ("dim", d), ("groups", m)] {
        if v == 0 {
            return Err(Error::invalid(field, "must be positive"));
        }
    }
    if bound == 0 {
        return Err(Error::invalid("coordinate_bound", "must be positive"));
    }
    if m > n {
        return Err(Error::invalid(
            "groups",
            format!("{m} groups cannot all be nonempty with {n} points"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut pts: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut attempts = 0;
    while pts.len() < n {
        attempts += 1;
        if attempts > ATTEMPTS_PER_POINT * n {
            return Err(Error::invalid(
                "coordinate_bound",
                format!(
                    "no general-position sample of {n} points in [0,{bound}]^{d} found; try a larger bound"
                ),
            ));
        }
        let p: Vec<Rational> = (0..d)
            .map(|_| rat(rng.gen_range(0..=bound) as i64))
            .collect();
        if keeps_general_position(&pts, &p, d) {
            pts.push(p);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut members = vec![Vec::new(); m];
    for (k, &v) in order.iter().enumerate() {
        let g = if k < m { k } else { rng.gen_range(0..m) };
        members[g].push(v);
        if m > 1 && rng.gen_bool(0.25) {
            let other = (g + rng.gen_range(1..m)) % m;
            members[other].push(v);
        }
    }
    let groups = members
        .into_iter()
        .enumerate()
        .map(|(i, mut mem)| {
            mem.sort_unstable();
            let mu = match rule {
                TargetRule::Half => mem.len().div_ceil(2),
                TargetRule::Singleton => 1,
            };
            Group {
                name: format!("g{i}"),
                members: mem,
                mu,
            }
        })
        .collect();
    PointConfig::new(d, pts, groups)
}

/// Assumes `pts` is already in general position.
fn keeps_general_position(pts: &[Vec<Rational>], p: &[Rational], d: usize) -> bool {
    if pts.iter().any(|q| q.as_slice() == p) {
        return false;
    }
    if pts.len() < d + 1 {
        let mut all: Vec<&[Rational]> = pts.iter().map(Vec::as_slice).collect();
        all.push(p);
        return affinely_independent_points(&all);
    }
    (0..pts.len()).combinations(d).all(|subset| {
        let mut sel: Vec<&[Rational]> = subset.iter().map(|&i| pts[i].as_slice()).collect();
        sel.push(p);
        affinely_independent_points(&sel)
    })
}

/// Shape of a random abstract instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbstractParams {
    pub seed: u64,
    pub universe: usize,
    pub edges: usize,
    pub ground_sets: usize,
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

/// Generator state after drawing, the edges, and the ground sets.
type Families = (ChaCha8Rng, Vec<Vec<usize>>, Vec<Vec<usize>>);

fn random_families(params: &AbstractParams) -> Result<Families> {
    if params.universe == 0 {
        return Err(Error::invalid("universe", "must be positive"));
    }
    if params.ground_sets == 0 {
        return Err(Error::invalid("ground_sets", "must be positive"));
    }
    let n = params.universe;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let edges = (0..params.edges)
        .map(|_| {
            let p = rng.gen_range(0.2..0.6);
            random_subset(&mut rng, n, p)
        })
        .collect();
    let groups = (0..params.ground_sets)
        .map(|_| loop {
            let p = rng.gen_range(0.3..0.8);
            let g = random_subset(&mut rng, n, p);
            if !g.is_empty() {
                break g;
            }
        })
        .collect();
    Ok((rng, edges, groups))
}

/// Random PCMS instance; demands are drawn from `1..=|G_i|`, so the result
/// may be infeasible.
pub fn generate_pcms(params: &AbstractParams) -> Result<PcmsInstance> {
    let (mut rng, edges, groups) = random_families(params)?;
    let ground_sets = groups
        .into_iter()
        .map(|members| {
            let demand = rng.gen_range(1..=members.len());
            DemandSet { members, demand }
        })
        .collect();
    PcmsInstance::new(params.universe, edges, ground_sets)
}

/// Random RMC instance; targets are drawn from `1..=|G_i|`.
pub fn generate_rmc(params: &AbstractParams) -> Result<RmcInstance> {
    let (mut rng, edges, groups) = random_families(params)?;
    let ground_sets = groups
        .into_iter()
        .map(|members| {
            let target = rng.gen_range(1..=members.len());
            TargetSet { members, target }
        })
        .collect();
    RmcInstance::new(params.universe, edges, ground_sets)
}
