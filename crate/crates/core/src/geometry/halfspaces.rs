//! Combinatorially distinct halfspaces of a point configuration.
//!
//! For points in general position with `n > d`, every nontrivial dichotomy
//! realizable by a hyperplane is also realized by one passing through some `d`
//! of the points, with those `d` points then pushed to either side. So the
//! classes are found by taking the hyperplane through every `d`-subset and
//! trying all `2^d` side assignments of its defining points. Classes are
//! identified up to complement. With `n <= d` the points are affinely
//! independent and every subset is realizable.

use std::collections::HashSet;

use itertools::Itertools;
use num::{Signed, Zero};
use rayon::prelude::*;

use super::exact::{self, Rational};
use super::{check_general_position, side_sign, Hyperplane, PointConfig};
use crate::error::{Error, Result};
use crate::instances::{complement, normalize_subset};

/// How a halfspace class was found: the hyperplane through `defining`, moved
/// so that `defining[j]` lands on the positive side iff `positive[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub defining: Vec<usize>,
    pub positive: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalHalfspace {
    /// Points strictly on the positive side of `witness`.
    pub subset: Vec<usize>,
    /// Whichever of `subset` and its complement leaves out point 0.
    pub key: Vec<usize>,
    pub witness: Hyperplane,
    pub provenance: Provenance,
}

/// The side of `{subset, complement}` that does not contain point 0; this is
/// the lexicographically smaller of the two as a bit string.
pub fn canonical_key(subset: &[usize], n: usize) -> Vec<usize> {
    if subset.first() == Some(&0) {
        complement(subset, n)
    } else {
        subset.to_vec()
    }
}

fn key_bits(key: &[usize], n: usize) -> Vec<bool> {
    let mut bits = vec![false; n];
    key.iter().for_each(|&x| bits[x] = true);
    bits
}

/// Number of linearly realizable dichotomies of `n` points in general
/// position in `R^d`, counted up to complement (so including one trivial
/// class): `Σ_{i=0}^{d} C(n-1, i)`.
pub fn cover_count(n: usize, d: usize) -> u128 {
    let m = n.saturating_sub(1) as u128;
    let mut binom: u128 = 1;
    let mut total: u128 = 1;
    for i in 1..=(d as u128).min(m) {
        binom = binom * (m - i + 1) / i;
        total += binom;
    }
    total
}

struct Candidate {
    key: Vec<usize>,
    defining: Vec<usize>,
    positive: Vec<bool>,
}

/// All nontrivial halfspace classes of `config`, sorted by canonical key, each
/// with an exact witness that has no point on it.
pub fn enumerate_halfspaces(config: &PointConfig) -> Result<Vec<CanonicalHalfspace>> {
    check_general_position(config).map_err(|subset| Error::Degenerate { subset })?;
    let n = config.len();
    let d = config.dim();

    let candidates: Vec<Candidate> = if n <= d {
        let all: Vec<usize> = (0..n).collect();
        // Masks without bit 0 enumerate each class once.
        (1u64..1 << n)
            .filter(|mask| mask & 1 == 0)
            .map(|mask| Candidate {
                key: (0..n).filter(|&i| mask >> i & 1 == 1).collect(),
                defining: all.clone(),
                positive: (0..n).map(|i| mask >> i & 1 == 1).collect(),
            })
            .collect()
    } else {
        let subsets: Vec<Vec<usize>> = (0..n).combinations(d).collect();
        subsets
            .par_iter()
            .map(|t| through_subset(config, t))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };

    let mut first: HashSet<&[usize]> = HashSet::new();
    let unique: Vec<&Candidate> = candidates.iter().filter(|c| first.insert(&c.key)).collect();

    let mut out = unique
        .par_iter()
        .map(|c| {
            let witness = perturbed_witness(config, &c.defining, &c.positive)?;
            let (witness, subset) = normalized(config, witness)?;
            debug_assert_eq!(canonical_key(&subset, n), c.key);
            Ok(CanonicalHalfspace {
                subset,
                key: c.key.clone(),
                witness,
                provenance: Provenance {
                    defining: c.defining.clone(),
                    positive: c.positive.clone(),
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_cached_key(|h| key_bits(&h.key, n));
    Ok(out)
}

/// Hyperplane through the points `t` (affinely independent, `|t| = d`).
fn hyperplane_through(config: &PointConfig, t: &[usize]) -> Hyperplane {
    let rows = t
        .iter()
        .map(|&i| {
            let mut r = config.points()[i].clone();
            r.push(exact::rat(-1));
            r
        })
        .collect();
    let mut k = exact::kernel_vector(rows).expect("affinely independent points span a hyperplane");
    let offset = k.pop().expect("kernel has d + 1 entries");
    Hyperplane::new(k, offset).expect("affinely independent points give a nonzero normal")
}

fn through_subset(config: &PointConfig, t: &[usize]) -> Vec<Candidate> {
    let n = config.len();
    let h = hyperplane_through(config, t);
    let mut base = vec![false; n];
    for (i, p) in config.points().iter().enumerate() {
        if !t.contains(&i) {
            base[i] = side_sign(&h, p).expect("matching dimensions").is_gt();
        }
    }
    let d = t.len();
    (0u64..1 << d)
        .filter_map(|mask| {
            let positive: Vec<bool> = (0..d).map(|j| mask >> j & 1 == 1).collect();
            let mut side = base.clone();
            for (j, &i) in t.iter().enumerate() {
                side[i] = positive[j];
            }
            if side.iter().all(|&s| s) || side.iter().all(|&s| !s) {
                return None;
            }
            let subset: Vec<usize> = (0..n).filter(|&i| side[i]).collect();
            Some(Candidate {
                key: canonical_key(&subset, n),
                defining: t.to_vec(),
                positive,
            })
        })
        .collect()
}

/// Tilts the hyperplane through `defining` just enough to move each defining
/// point to its assigned side without letting any other point cross.
fn perturbed_witness(
    config: &PointConfig,
    defining: &[usize],
    positive: &[bool],
) -> Result<Hyperplane> {
    let pts = config.points();
    let d = config.dim();
    let rows: Vec<Vec<Rational>> = defining
        .iter()
        .map(|&i| {
            let mut r = pts[i].clone();
            r.push(exact::rat(-1));
            r
        })
        .collect();
    let rhs: Vec<Rational> = positive
        .iter()
        .map(|&p| exact::rat(if p { 1 } else { -1 }))
        .collect();
    let mut tilt =
        exact::particular_solution(&rows, &rhs).expect("affinely independent rows have full rank");
    let tilt_offset = tilt.pop().expect("d + 1 entries");

    if defining.len() == pts.len() && defining.len() <= d {
        // Nothing else to protect: the tilt alone separates.
        return Hyperplane::new(tilt, tilt_offset)
            .map_err(|_| Error::NonRealizable { subset: vec![] });
    }

    let base = hyperplane_through(config, defining);
    let mut eps = exact::rat(1);
    for (i, p) in pts.iter().enumerate() {
        if defining.contains(&i) {
            continue;
        }
        let v = exact::dot(base.normal(), p) - base.offset();
        let delta = exact::dot(&tilt, p) - &tilt_offset;
        if !delta.is_zero() && v.is_positive() != delta.is_positive() {
            let bound = (v / delta).abs();
            if bound < eps {
                eps = bound;
            }
        }
    }
    eps /= exact::rat(2);
    let normal = base
        .normal()
        .iter()
        .zip(&tilt)
        .map(|(a, c)| a + &eps * c)
        .collect();
    let offset = base.offset() + &eps * tilt_offset;
    Hyperplane::new(normal, offset).map_err(|_| Error::NonRealizable { subset: vec![] })
}

/// Points on the strict positive side, or `None` if some point lies on `h`.
pub(crate) fn strict_side(config: &PointConfig, h: &Hyperplane) -> Option<Vec<usize>> {
    let mut pos = Vec::new();
    for (i, p) in config.points().iter().enumerate() {
        match side_sign(h, p).ok()? {
            std::cmp::Ordering::Greater => pos.push(i),
            std::cmp::Ordering::Less => {}
            std::cmp::Ordering::Equal => return None,
        }
    }
    Some(pos)
}

/// Primitive integer coefficients, first nonzero normal entry positive; the
/// returned subset is the positive side after that orientation.
fn normalized(config: &PointConfig, h: Hyperplane) -> Result<(Hyperplane, Vec<usize>)> {
    let mut coeffs = h.normal().to_vec();
    coeffs.push(h.offset().clone());
    let mut coeffs = exact::primitive(&coeffs);
    let offset = coeffs.pop().expect("nonempty");
    let mut h = Hyperplane::new(coeffs, offset)?;
    if h.normal()
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(Signed::is_negative)
    {
        h = h.flipped();
    }
    let subset = strict_side(config, &h)
        .ok_or_else(|| Error::invalid("witness", "constructed hyperplane touches a point"))?;
    Ok((h, subset))
}

/// An exact hyperplane with `subset` strictly positive and every other point
/// strictly negative, found by linear feasibility with unit margins.
pub fn witness_for_subset(config: &PointConfig, subset: &[usize]) -> Result<Hyperplane> {
    let n = config.len();
    let d = config.dim();
    let subset = normalize_subset("subset", subset, n)?;
    let mut inside = vec![false; n];
    subset.iter().for_each(|&i| inside[i] = true);

    // Variables: a+ (d), a- (d), b+, b-, then one surplus per point.
    // Row k: s_k (p_k·(a+ - a-) - (b+ - b-)) - surplus_k = 1.
    let width = 2 * d + 2 + n;
    let rows: Vec<Vec<Rational>> = config
        .points()
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let s = exact::rat(if inside[k] { 1 } else { -1 });
            let mut row = vec![exact::rat(0); width];
            for j in 0..d {
                row[j] = &s * &p[j];
                row[d + j] = -(&s * &p[j]);
            }
            row[2 * d] = -s.clone();
            row[2 * d + 1] = s;
            row[2 * d + 2 + k] = exact::rat(-1);
            row
        })
        .collect();
    let rhs = vec![exact::rat(1); n];
    let x = exact::nonnegative_solution(&rows, &rhs).ok_or_else(|| Error::NonRealizable {
        subset: subset.clone(),
    })?;

    let mut normal: Vec<Rational> = (0..d).map(|j| &x[j] - &x[d + j]).collect();
    let mut offset = &x[2 * d] - &x[2 * d + 1];
    if normal.iter().all(Zero::is_zero) {
        // Only for the trivial subsets: place a hyperplane past every point.
        let first: Vec<&Rational> = config.points().iter().map(|p| &p[0]).collect();
        normal = vec![exact::rat(0); d];
        normal[0] = exact::rat(1);
        offset = if subset.is_empty() {
            first.iter().copied().max().expect("nonempty") + exact::rat(1)
        } else {
            first.iter().copied().min().expect("nonempty") - exact::rat(1)
        };
    }
    let mut coeffs = normal;
    coeffs.push(offset);
    let mut coeffs = exact::primitive(&coeffs);
    let offset = coeffs.pop().expect("nonempty");
    let h = Hyperplane::new(coeffs, offset)?;
    match strict_side(config, &h) {
        Some(pos) if pos == subset => Ok(h),
        _ => Err(Error::invalid(
            "witness",
            "linear feasibility result failed re-verification",
        )),
    }
}
