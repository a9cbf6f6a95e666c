//! Hermite normal form for full-rank integer lattices with a known
//! sublattice `⊕ mⱼ·Z·eⱼ`.
//!
//! Knowing that every `mⱼ·eⱼ` lies in the lattice lets all entries be kept
//! reduced modulo the column moduli, so intermediate values stay below
//! `max mⱼ²` and the elimination runs in checked `i128` arithmetic.

use num_integer::Integer;

use crate::error::{Error, Result};

type Row = Vec<i128>;

fn reduce_tail(row: &mut Row, from: usize, moduli: &[i128]) {
    for (x, &m) in row.iter_mut().zip(moduli).skip(from) {
        *x = x.rem_euclid(m);
    }
}

fn combine(a: &Row, x: i128, b: &Row, y: i128) -> Result<Row> {
    a.iter()
        .zip(b)
        .map(|(&u, &v)| {
            u.checked_mul(x)
                .and_then(|p| v.checked_mul(y).and_then(|q| p.checked_add(q)))
                .ok_or(Error::Overflow)
        })
        .collect()
}

/// Upper-triangular row HNF of the lattice generated by `generators` together
/// with `moduli[j]·e_j`. Pivots are positive and every entry above a pivot is
/// reduced into `[0, pivot)`.
pub fn upper_hnf(generators: &[Vec<i64>], moduli: &[u64]) -> Result<Vec<Vec<i64>>> {
    let dim = moduli.len();
    if moduli.iter().any(|&m| m == 0 || m > i64::MAX as u64) {
        return Err(Error::Precondition("column moduli must be positive and fit i64".into()));
    }
    let mods: Vec<i128> = moduli.iter().map(|&m| m as i128).collect();
    let mut pool: Vec<Row> = Vec::with_capacity(generators.len() + dim);
    for g in generators {
        if g.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: g.len() });
        }
        let mut row: Row = g.iter().map(|&x| x as i128).collect();
        reduce_tail(&mut row, 0, &mods);
        pool.push(row);
    }
    for (j, &m) in mods.iter().enumerate() {
        let mut row = vec![0i128; dim];
        row[j] = m;
        pool.push(row);
    }

    let mut basis: Vec<Row> = Vec::with_capacity(dim);
    for c in 0..dim {
        pool.retain(|r| r.iter().any(|&x| x != 0));
        let mut pivot: Option<Row> = None;
        let mut rest = Vec::with_capacity(pool.len());
        for row in pool.drain(..) {
            if row[c] == 0 {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(p) => {
                    let (a, b) = (p[c], row[c]);
                    let ext = a.extended_gcd(&b);
                    let mut new_pivot = combine(&p, ext.x, &row, ext.y)?;
                    let mut other = combine(&p, b / ext.gcd, &row, -(a / ext.gcd))?;
                    debug_assert_eq!(other[c], 0);
                    reduce_tail(&mut new_pivot, c + 1, &mods);
                    reduce_tail(&mut other, c + 1, &mods);
                    pivot = Some(new_pivot);
                    rest.push(other);
                }
            }
        }
        pool = rest;
        let mut p = pivot.ok_or(Error::SingularLattice)?;
        if p[c] < 0 {
            p.iter_mut().for_each(|x| *x = -*x);
            reduce_tail(&mut p, c + 1, &mods);
        }
        basis.push(p);
    }

    // Reduce entries above each pivot.
    for c in 0..dim {
        let pivot_value = basis[c][c];
        for r in 0..c {
            let q = basis[r][c].div_euclid(pivot_value);
            if q != 0 {
                let pivot_row = basis[c].clone();
                let reduced = combine(&basis[r], 1, &pivot_row, -q)?;
                basis[r] = reduced;
                let mut row = std::mem::take(&mut basis[r]);
                reduce_tail(&mut row, c + 1, &mods);
                basis[r] = row;
            }
        }
    }

    basis
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::Overflow))
                .collect()
        })
        .collect()
}

/// Lower-triangular HNF: row `i` has its positive pivot at column `i`, zeros to
/// the right, and entries below a pivot reduced into `[0, pivot)`.
pub fn lower_hnf(generators: &[Vec<i64>], moduli: &[u64]) -> Result<Vec<Vec<i64>>> {
    let reversed: Vec<Vec<i64>> = generators.iter().map(|g| g.iter().rev().copied().collect()).collect();
    let rev_mods: Vec<u64> = moduli.iter().rev().copied().collect();
    let upper = upper_hnf(&reversed, &rev_mods)?;
    Ok(upper
        .into_iter()
        .rev()
        .map(|row| row.into_iter().rev().collect())
        .collect())
}
