//! Exact linear algebra over `BigRational`: row reduction and a phase-one
//! simplex for `Ax = b, x ≥ 0`.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row. The last `skip_cols` columns never become pivots.
pub fn rref(rows: &mut [Vec<Rational>], skip_cols: usize) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len).saturating_sub(skip_cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        rows[r].iter_mut().for_each(|x| *x /= &lead);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    rref(&mut rows, 0).len()
}

/// A nonzero vector spanning the kernel of `rows`, when the kernel is exactly
/// one-dimensional.
pub fn kernel_vector(mut rows: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let cols = rows.first()?.len();
    let pivots = rref(&mut rows, 0);
    if pivots.len() + 1 != cols {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut x = vec![Rational::zero(); cols];
    x[free] = Rational::one();
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = -rows[r][free].clone();
    }
    Some(x)
}

/// Some solution of `rows · x = rhs` (free variables set to zero).
pub fn particular_solution(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let cols = rows.first()?.len();
    let mut aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, 1);
    if aug[pivots.len()..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Scales `v` by a positive factor so that all entries are coprime integers.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &gcd))
        .collect()
}

/// Finds `x ≥ 0` with `a · x = b`, or `None` if there is none.
///
/// Phase-one simplex on a dense tableau with one artificial per row, using
/// Bland's rule, so it always terminates.
pub fn nonnegative_solution(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    let nvars = a.first().map_or(0, Vec::len);
    let width = nvars + m + 1;
    let rhs = width - 1;

    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut t = vec![Rational::zero(); width];
        for (j, x) in row.iter().enumerate() {
            t[j] = if flip { -x.clone() } else { x.clone() };
        }
        t[nvars + i] = Rational::one();
        t[rhs] = if flip { -bi.clone() } else { bi.clone() };
        tab.push(t);
    }
    // Reduced costs of the artificial objective: minus the column sums.
    let mut cost = vec![Rational::zero(); width];
    for row in &tab {
        for j in 0..nvars {
            cost[j] -= &row[j];
        }
        cost[rhs] -= &row[rhs];
    }
    tab.push(cost);
    let mut basis: Vec<usize> = (nvars..nvars + m).collect();

    while let Some(enter) = (0..nvars).find(|&j| tab[m][j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &tab[i][rhs] / &tab[i][enter];
            let replace = match &leave {
                None => true,
                Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
            };
            if replace {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below by zero, so some row always qualifies.
        let (row, _) = leave?;
        pivot(&mut tab, row, enter);
        basis[row] = enter;
    }

    if !tab[m][rhs].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); nvars];
    for (i, &var) in basis.iter().enumerate() {
        if var < nvars {
            x[var] = tab[i][rhs].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<Rational>], row: usize, col: usize) {
    let lead = tab[row][col].clone();
    tab[row].iter_mut().for_each(|x| *x /= &lead);
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let factor = r[col].clone();
        for (x, p) in r.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x -= &factor * p;
            }
        }
    }
}
