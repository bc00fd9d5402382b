//! Exact geometric front end: point configurations, hyperplanes and the
//! predicates behind them. Everything here is exact rational arithmetic.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use itertools::Itertools;
use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::instances::normalize_subset;

pub mod exact;
mod halfspaces;
mod solve;

pub use exact::{rat, Rational};
pub use halfspaces::{
    canonical_key, cover_count, enumerate_halfspaces, witness_for_subset, CanonicalHalfspace,
    Provenance,
};
pub use solve::{
    build_rmc, sign_vector_faces, solve_geometric, verify_partition, GeometricSolution,
};

/// A named point group with its face-occupancy target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub name: String,
    pub members: Vec<usize>,
    pub mu: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfig {
    dim: usize,
    points: Vec<Vec<Rational>>,
    groups: Vec<Group>,
}

impl PointConfig {
    pub fn new(dim: usize, points: Vec<Vec<Rational>>, groups: Vec<Group>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        if points.is_empty() {
            return Err(Error::invalid("points", "at least one point required"));
        }
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(Error::invalid(
                format!("points[{i}]"),
                format!("expected {dim} coordinates, got {}", p.len()),
            ));
        }
        let mut seen = BTreeSet::new();
        for (i, p) in points.iter().enumerate() {
            if !seen.insert(p) {
                return Err(Error::invalid(
                    format!("points[{i}]"),
                    "points must be distinct",
                ));
            }
        }
        if groups.is_empty() {
            return Err(Error::invalid("groups", "at least one group required"));
        }
        let n = points.len();
        let mut covered = vec![false; n];
        let groups = groups
            .into_iter()
            .enumerate()
            .map(|(i, g)| {
                let members = normalize_subset(&format!("groups[{i}].members"), &g.members, n)?;
                if g.mu == 0 || g.mu > members.len() {
                    return Err(Error::invalid(
                        format!("groups[{i}].mu"),
                        format!("target {} outside 1..={}", g.mu, members.len()),
                    ));
                }
                members.iter().for_each(|&v| covered[v] = true);
                Ok(Group {
                    name: g.name,
                    members,
                    mu: g.mu,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(v) = covered.iter().position(|c| !c) {
            return Err(Error::invalid(
                format!("points[{v}]"),
                "point belongs to no group",
            ));
        }
        Ok(PointConfig {
            dim,
            points,
            groups,
        })
    }

    /// Integer coordinates with a single group holding every point.
    pub fn single_group(dim: usize, points: &[Vec<i64>], mu: usize) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| p.iter().map(|&x| rat(x)).collect())
            .collect();
        let group = Group {
            name: "all".into(),
            members: (0..points.len()).collect(),
            mu,
        };
        PointConfig::new(dim, pts, vec![group])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }
}

/// An oriented hyperplane `a·x = b`; the positive side is `a·x > b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    normal: Vec<Rational>,
    offset: Rational,
}

impl Hyperplane {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Result<Self> {
        if normal.is_empty() || normal.iter().all(Zero::is_zero) {
            return Err(Error::invalid("a", "normal must be nonzero"));
        }
        Ok(Hyperplane { normal, offset })
    }

    pub fn normal(&self) -> &[Rational] {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Same hyperplane with the sides swapped.
    pub fn flipped(&self) -> Hyperplane {
        Hyperplane {
            normal: self.normal.iter().map(|x| -x).collect(),
            offset: -&self.offset,
        }
    }

    fn eval(&self, p: &[Rational]) -> Rational {
        exact::dot(&self.normal, p) - &self.offset
    }
}

/// Exact sign of `a·p - b`.
pub fn side_sign(h: &Hyperplane, p: &[Rational]) -> Result<Ordering> {
    if p.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: p.len(),
        });
    }
    let v = h.eval(p);
    Ok(if v.is_positive() {
        Ordering::Greater
    } else if v.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    })
}

/// `Ok(())` iff every `min(n, d+1)` points are affinely independent; otherwise
/// one offending subset.
pub fn check_general_position(config: &PointConfig) -> std::result::Result<(), Vec<usize>> {
    let n = config.len();
    let k = n.min(config.dim + 1);
    for subset in (0..n).combinations(k) {
        if !affinely_independent(config, &subset) {
            return Err(subset);
        }
    }
    Ok(())
}

pub(crate) fn affinely_independent(config: &PointConfig, subset: &[usize]) -> bool {
    let pts: Vec<&[Rational]> = subset
        .iter()
        .map(|&i| config.points[i].as_slice())
        .collect();
    affinely_independent_points(&pts)
}

/// Whether the difference vectors `p_i - p_0` are linearly independent.
pub fn affinely_independent_points(pts: &[&[Rational]]) -> bool {
    let Some((base, rest)) = pts.split_first() else {
        return true;
    };
    let rows: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.iter().zip(base.iter()).map(|(x, y)| x - y).collect())
        .collect();
    rows.is_empty() || exact::rank(rows) == rest.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn frac(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sign_examples() {
        let h = Hyperplane::new(vec![rat(1)], rat(0)).unwrap();
        assert_eq!(side_sign(&h, &[rat(0)]).unwrap(), Ordering::Equal);
        let h = Hyperplane::new(vec![rat(1), rat(1)], rat(1)).unwrap();
        assert_eq!(side_sign(&h, &[rat(1), rat(1)]).unwrap(), Ordering::Greater);
        let h = Hyperplane::new(vec![rat(2), rat(-3)], frac(1, 2)).unwrap();
        assert_eq!(
            side_sign(&h, &[frac(1, 2), frac(1, 3)]).unwrap(),
            Ordering::Less
        );
        assert_eq!(h.eval(&[frac(1, 2), frac(1, 3)]), frac(-1, 2));
    }

    #[test]
    fn sign_dimension_mismatch() {
        let h = Hyperplane::new(vec![rat(1), rat(0)], rat(0)).unwrap();
        assert_eq!(
            side_sign(&h, &[rat(1)]),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn zero_normal_rejected() {
        assert!(Hyperplane::new(vec![rat(0), rat(0)], rat(1)).is_err());
    }

    #[test]
    fn general_position_examples() {
        let line = PointConfig::single_group(2, &[vec![0, 0], vec![1, 0], vec![2, 0]], 1).unwrap();
        assert_eq!(check_general_position(&line), Err(vec![0, 1, 2]));
        let square =
            PointConfig::single_group(2, &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]], 1)
                .unwrap();
        assert_eq!(check_general_position(&square), Ok(()));
        let one_d = PointConfig::single_group(1, &[vec![3], vec![-1], vec![7]], 1).unwrap();
        assert_eq!(check_general_position(&one_d), Ok(()));
    }

    #[test]
    fn few_collinear_points_in_space_are_degenerate() {
        let cfg = PointConfig::single_group(3, &[vec![0, 0, 0], vec![1, 1, 1], vec![2, 2, 2]], 1)
            .unwrap();
        assert_eq!(check_general_position(&cfg), Err(vec![0, 1, 2]));
    }

    #[test]
    fn config_validation() {
        let dup = PointConfig::single_group(1, &[vec![1], vec![1]], 1);
        assert!(
            matches!(dup, Err(Error::Invalid { ref reason, .. }) if reason == "points must be distinct")
        );
        let orphan = PointConfig::new(
            1,
            vec![vec![rat(0)], vec![rat(1)]],
            vec![Group {
                name: "a".into(),
                members: vec![0],
                mu: 1,
            }],
        );
        assert!(orphan.is_err());
        assert!(PointConfig::single_group(2, &[vec![1]], 1).is_err());
        assert!(PointConfig::single_group(1, &[vec![1], vec![2]], 3).is_err());
        assert!(PointConfig::single_group(1, &[vec![1], vec![2]], 0).is_err());
    }
}
