//! Single-error codes for the unbalanced limited-magnitude channel.
//!
//! The code of a splitting is `ker φ`, restricted to cell levels `[0, Q)`.
//! Encoding is systematic: non-pivot coordinates carry information digits in
//! `[0, Q)`, each pivot coordinate carries a forced residue mod `v` plus `v`
//! times a quotient digit in `[0, Q/v)`. Decoding looks the syndrome up in the
//! table of products `m·sᵢ`. Errors are applied in `Z`; received words outside
//! `[0, Q)` are accepted.
//!
//! A second error in the same word is not detected: a perfect code always
//! decodes to some codeword.

use std::collections::HashMap;

use serde::Serialize;

use crate::arith::mod_inverse;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::splitting::Splitting;

/// Map from `m·sᵢ` to `(i, m)`.
#[derive(Debug, Clone)]
pub struct SyndromeTable {
    entries: HashMap<GroupElement, (usize, i64)>,
}

impl SyndromeTable {
    pub fn build(sp: &Splitting) -> Result<Self> {
        sp.verify_packing().map_err(Error::NotPacking)?;
        let mut entries = HashMap::with_capacity(sp.n() * sp.multipliers().len());
        for (value, m, i) in sp.products() {
            if entries.insert(value, (i, m)).is_some() {
                return Err(Error::Internal("syndrome collision on a verified packing".into()));
            }
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(coordinate, magnitude)` for a syndrome, zero-based coordinate.
    pub fn lookup(&self, syndrome: &GroupElement) -> Option<(usize, i64)> {
        self.entries.get(syndrome).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Decoded {
    NoError { codeword: Vec<i64> },
    /// The error `magnitude·e_index` was removed (zero-based index).
    Corrected { codeword: Vec<i64>, index: usize, magnitude: i64 },
    Uncorrectable { syndrome: Vec<u64> },
}

impl Decoded {
    pub fn codeword(&self) -> Option<&[i64]> {
        match self {
            Decoded::NoError { codeword } | Decoded::Corrected { codeword, .. } => Some(codeword),
            Decoded::Uncorrectable { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CodeSpec {
    splitting: Splitting,
    levels: u64,
    modulus: u64,
    pivots: Vec<usize>,
    /// Inverse of the pivot columns over `Z_v`, row-major.
    pivot_inverse: Vec<Vec<u64>>,
    table: SyndromeTable,
}

impl CodeSpec {
    /// Requires a packing over a homocyclic group `Z_v^k` with `v | levels`.
    pub fn new(splitting: Splitting, levels: u64) -> Result<Self> {
        let table = SyndromeTable::build(&splitting)?;
        let group = splitting.group();
        let v = group.homocyclic_order().ok_or_else(|| {
            Error::Precondition("systematic encoding needs a group of the form Z_v^k".into())
        })?;
        if levels == 0 || levels % v != 0 {
            return Err(Error::Precondition(format!("levels {levels} must be a positive multiple of {v}")));
        }
        let (pivots, pivot_inverse) = find_pivots(&splitting, v)?;
        Ok(Self { splitting, levels, modulus: v, pivots, pivot_inverse, table })
    }

    pub fn splitting(&self) -> &Splitting {
        &self.splitting
    }

    pub fn table(&self) -> &SyndromeTable {
        &self.table
    }

    pub fn levels(&self) -> u64 {
        self.levels
    }

    pub fn n(&self) -> usize {
        self.splitting.n()
    }

    /// Zero-based pivot coordinates.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn info_len(&self) -> usize {
        self.n() - self.pivots.len()
    }

    /// Range of each quotient digit, `Q / v`.
    pub fn quotient_range(&self) -> u64 {
        self.levels / self.modulus
    }

    /// `Σ yᵢ sᵢ` in the group.
    pub fn syndrome(&self, y: &[i64]) -> Result<GroupElement> {
        if y.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), actual: y.len() });
        }
        let g = self.splitting.group();
        Ok(y.iter()
            .zip(self.splitting.splitters())
            .fold(g.zero(), |acc, (&yi, s)| g.add_unchecked(&acc, &g.scalar_mul_unchecked(yi, s))))
    }

    /// Systematic encoder. `info` fills the non-pivot coordinates in order,
    /// `quotients` the pivot coordinates.
    pub fn encode(&self, info: &[u64], quotients: &[u64]) -> Result<Vec<i64>> {
        if info.len() != self.info_len() {
            return Err(Error::DimensionMismatch { expected: self.info_len(), actual: info.len() });
        }
        if quotients.len() != self.pivots.len() {
            return Err(Error::DimensionMismatch { expected: self.pivots.len(), actual: quotients.len() });
        }
        if let Some(&d) = info.iter().find(|&&d| d >= self.levels) {
            return Err(Error::Precondition(format!("information digit {d} outside [0, {})", self.levels)));
        }
        if let Some(&t) = quotients.iter().find(|&&t| t >= self.quotient_range()) {
            return Err(Error::Precondition(format!(
                "quotient digit {t} outside [0, {})",
                self.quotient_range()
            )));
        }
        let g = self.splitting.group();
        let v = self.modulus;
        let mut word = vec![0i64; self.n()];
        let mut digits = info.iter();
        let mut acc = g.zero();
        for (i, s) in self.splitting.splitters().iter().enumerate() {
            if self.pivots.contains(&i) {
                continue;
            }
            let x = *digits.next().expect("length checked");
            word[i] = x as i64;
            acc = g.add_unchecked(&acc, &g.scalar_mul_unchecked(x as i64, s));
        }
        let target = g.neg(&acc)?;
        let k = self.pivots.len();
        for j in 0..k {
            let r = (0..k).fold(0u128, |sum, c| {
                (sum + self.pivot_inverse[j][c] as u128 * target.residues()[c] as u128) % v as u128
            }) as u64;
            word[self.pivots[j]] = (r + v * quotients[j]) as i64;
        }
        debug_assert!(self.syndrome(&word)?.is_zero());
        Ok(word)
    }

    pub fn decode(&self, y: &[i64]) -> Result<Decoded> {
        let syndrome = self.syndrome(y)?;
        if syndrome.is_zero() {
            return Ok(Decoded::NoError { codeword: y.to_vec() });
        }
        Ok(match self.table.lookup(&syndrome) {
            Some((index, magnitude)) => {
                let mut codeword = y.to_vec();
                codeword[index] -= magnitude;
                Decoded::Corrected { codeword, index, magnitude }
            }
            None => Decoded::Uncorrectable { syndrome: syndrome.residues().to_vec() },
        })
    }
}

/// First `k` coordinates whose columns form an invertible matrix over `Z_v`
/// (lexicographic in the coordinate indices), with the inverse.
fn find_pivots(sp: &Splitting, v: u64) -> Result<(Vec<usize>, Vec<Vec<u64>>)> {
    let k = sp.group().rank();
    let n = sp.n();
    if n < k {
        return Err(Error::Precondition("fewer splitters than group rank; no invertible pivot set".into()));
    }
    const COMBINATION_CAP: u64 = 2_000_000;
    let mut combo: Vec<usize> = (0..k).collect();
    let mut tried = 0u64;
    loop {
        let cols: Vec<&[u64]> = combo.iter().map(|&i| sp.splitters()[i].residues()).collect();
        let matrix: Vec<Vec<u64>> = (0..k).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        if let Some(inv) = invert_mod(&matrix, v) {
            return Ok((combo, inv));
        }
        tried += 1;
        if tried >= COMBINATION_CAP {
            return Err(Error::TooLarge("pivot search exceeded its cap".into()));
        }
        // Next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return Err(Error::Precondition("no invertible set of pivot columns exists".into()));
            }
            i -= 1;
            if combo[i] < n - k + i {
                break;
            }
        }
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// Inverse of a square matrix over `Z_v` by unimodular row operations.
fn invert_mod(matrix: &[Vec<u64>], v: u64) -> Option<Vec<Vec<u64>>> {
    let k = matrix.len();
    let vm = v as i128;
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut out: Vec<i128> = row.iter().map(|&x| x as i128).collect();
            out.extend((0..k).map(|c| i128::from(c == r)));
            out
        })
        .collect();
    for c in 0..k {
        // Fold the column's gcd into row c with 2×2 unimodular steps.
        for r in c + 1..k {
            let (x, y) = (a[c][c], a[r][c]);
            if y == 0 {
                continue;
            }
            let ext = num_integer::Integer::extended_gcd(&x, &y);
            let (p, q) = (x / ext.gcd, y / ext.gcd);
            let (rc, rr) = (a[c].clone(), a[r].clone());
            a[c] = rc.iter().zip(&rr).map(|(&u, &w)| (ext.x * u + ext.y * w).rem_euclid(vm)).collect();
            a[r] = rc.iter().zip(&rr).map(|(&u, &w)| (-q * u + p * w).rem_euclid(vm)).collect();
        }
        let pivot = a[c][c].rem_euclid(vm) as u64;
        let inv = mod_inverse(pivot, v)? as i128;
        a[c] = a[c].iter().map(|&x| (x * inv).rem_euclid(vm)).collect();
        for r in 0..k {
            if r != c && a[r][c] != 0 {
                let f = a[r][c];
                let pc = a[c].clone();
                a[r] = a[r].iter().zip(&pc).map(|(&x, &y)| (x - f * y).rem_euclid(vm)).collect();
            }
        }
    }
    Some(a.into_iter().map(|row| row[k..].iter().map(|&x| x as u64).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construct_field, mixed_construction};

    fn z17() -> CodeSpec {
        CodeSpec::new(Splitting::cyclic(17, 3, 2, &[1, 13]).unwrap(), 17).unwrap()
    }

    /// Brute-force product enumeration, independent of the table.
    #[test]
    fn z17_table() {
        let code = z17();
        assert_eq!(code.table().len(), 10);
        let g = code.splitting().group();
        assert_eq!(code.table().lookup(&g.element(&[9]).unwrap()), Some((1, 2)));
        let mut products: Vec<i64> = [1i64, 13]
            .iter()
            .flat_map(|s| [-2i64, -1, 1, 2, 3].map(|m| (m * s).rem_euclid(17)))
            .collect();
        products.sort_unstable();
        assert_eq!(products, vec![1, 2, 3, 4, 5, 8, 9, 13, 15, 16]);
        for p in products {
            assert!(code.table().lookup(&g.element(&[p]).unwrap()).is_some());
        }
    }

    #[test]
    fn z4_table() {
        let code = CodeSpec::new(Splitting::cyclic(4, 2, 1, &[1]).unwrap(), 8).unwrap();
        let g = code.splitting().group();
        assert_eq!(code.table().len(), 3);
        assert_eq!(code.table().lookup(&g.element(&[1]).unwrap()), Some((0, 1)));
        assert_eq!(code.table().lookup(&g.element(&[2]).unwrap()), Some((0, 2)));
        assert_eq!(code.table().lookup(&g.element(&[3]).unwrap()), Some((0, -1)));
        assert_eq!(code.encode(&[], &[1]).unwrap(), vec![4]);
    }

    #[test]
    fn z17_encode_decode() {
        let code = z17();
        assert_eq!(code.syndrome(&[0, 0]).unwrap().residues(), &[0]);
        assert_eq!(code.syndrome(&[0, 2]).unwrap().residues(), &[9]);
        assert_eq!(code.encode(&[0], &[0]).unwrap(), vec![0, 0]);
        let c = code.encode(&[2], &[0]).unwrap();
        assert_eq!(c, vec![8, 2]);
        assert_eq!(
            code.decode(&[8, 4]).unwrap(),
            Decoded::Corrected { codeword: vec![8, 2], index: 1, magnitude: 2 }
        );
        assert_eq!(code.decode(&[8, 2]).unwrap(), Decoded::NoError { codeword: vec![8, 2] });
        // Syndrome 6 is not a product: 8 - 2 = 6.
        assert_eq!(code.decode(&[6, 0]).unwrap(), Decoded::Uncorrectable { syndrome: vec![6] });
    }

    #[test]
    fn encode_range_checks() {
        let code = z17();
        assert!(code.encode(&[17], &[0]).is_err());
        assert!(code.encode(&[1], &[1]).is_err());
        assert!(code.encode(&[1, 2], &[0]).is_err());
        assert!(CodeSpec::new(Splitting::cyclic(17, 3, 2, &[1, 13]).unwrap(), 16).is_err());
    }

    #[test]
    fn product_group_code() {
        let sp = construct_field(5, 2, 3, 1).unwrap();
        let code = CodeSpec::new(sp, 10).unwrap();
        assert_eq!(code.pivots(), &[0, 1]);
        assert_eq!(code.table().len(), 24);
        let c = code.encode(&[3, 9, 0, 7], &[1, 0]).unwrap();
        assert!(code.syndrome(&c).unwrap().is_zero());
        for i in 0..6 {
            for m in [-1i64, 1, 2, 3] {
                let mut y = c.clone();
                y[i] += m;
                assert_eq!(code.decode(&y).unwrap().codeword(), Some(c.as_slice()));
            }
        }
    }

    #[test]
    fn mixed_code_pivots() {
        let sp = mixed_construction(5, 1, 3, 1, 3).unwrap();
        let code = CodeSpec::new(sp, 5).unwrap();
        assert_eq!(code.pivots().len(), 3);
        let info: Vec<u64> = (0..code.info_len() as u64).map(|i| i % 5).collect();
        let c = code.encode(&info, &[0, 0, 0]).unwrap();
        assert!(code.syndrome(&c).unwrap().is_zero());
    }

    #[test]
    fn inverse_over_composite_modulus() {
        // Neither entry of the first column is a unit mod 6, but det = −1 is.
        let inv = invert_mod(&[vec![2, 3], vec![3, 4]], 6).unwrap();
        // [[2,3],[3,4]]^{-1} = [[-4,3],[3,-2]] mod 6.
        assert_eq!(inv, vec![vec![2, 3], vec![3, 4]]);
        assert!(invert_mod(&[vec![2, 0], vec![0, 1]], 6).is_none());
    }
}
