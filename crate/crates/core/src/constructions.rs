//! Explicit perfect splittings.
//!
//! Every constructor re-verifies its output with [`Splitting::verify_packing`]
//! and [`Splitting::is_tiling`] before returning; a failure there is reported
//! as [`Error::Internal`].

use num_integer::Integer;
use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::field::build_field;
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::splitting::{MultiplierSet, Splitting};

fn check_prime_split(p: u64, k_plus: u64, k_minus: u64) -> Result<MultiplierSet> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("p must be prime (got {p})")));
    }
    let m = MultiplierSet::new(k_plus, k_minus)?;
    if k_plus + k_minus != p - 1 {
        return Err(Error::Precondition(format!(
            "k_plus + k_minus must equal p - 1 (got {k_plus} + {k_minus} vs p = {p})"
        )));
    }
    Ok(m)
}

fn check_degree(ell: u32) -> Result<()> {
    if ell == 0 {
        return Err(Error::Precondition("ell must be at least 1".into()));
    }
    Ok(())
}

fn certify(sp: Splitting, what: &str) -> Result<Splitting> {
    match sp.is_tiling() {
        Ok(true) => Ok(sp),
        Ok(false) => Err(Error::Internal(format!("{what}: packing is not perfect"))),
        Err(e) => Err(Error::Internal(format!("{what}: {e}"))),
    }
}

fn cyclic_from_values(q: u64, m: MultiplierSet, mut values: Vec<u64>) -> Result<Splitting> {
    values.sort_unstable();
    let group = FiniteAbelianGroup::cyclic(q)?;
    let splitters = values
        .into_iter()
        .map(|s| group.element_from_residues(vec![s]))
        .collect::<Result<Vec<_>>>()?;
    Splitting::new(group, m, splitters)
}

/// Recursive splitter set over `Z_{p^ℓ}` for `k₊ + k₋ = p − 1`:
/// `S₁ = {1}`, `S_{i+1} = p·S_i ∪ {s ∈ Z_{p^{i+1}} : s ≡ 1 (mod p)}`.
pub fn construct_cyclic(p: u64, ell: u32, k_plus: u64, k_minus: u64) -> Result<Splitting> {
    let m = check_prime_split(p, k_plus, k_minus)?;
    check_degree(ell)?;
    let q = p.checked_pow(ell).ok_or(Error::Overflow)?;
    let mut level = vec![1u64];
    let mut modulus = p;
    for i in 1..ell {
        let next_modulus = modulus * p;
        let before = level.len() as u64;
        let mut next: Vec<u64> = level.iter().map(|s| s * p).collect();
        next.extend((0..modulus).map(|t| t * p + 1));
        if next.len() as u64 != before + p.pow(i) {
            return Err(Error::Internal("cyclic construction size recurrence failed".into()));
        }
        level = next;
        modulus = next_modulus;
    }
    debug_assert_eq!(modulus, q);
    if level.len() as u64 != (q - 1) / (p - 1) {
        return Err(Error::Internal("cyclic construction has wrong size".into()));
    }
    certify(cyclic_from_values(q, m, level)?, "cyclic construction")
}

/// Recursive splitter set over `Z_{4^ℓ}` with `M = [−1, 2]*`:
/// `S₁ = {1}`, `S_{i+1} = 4·S_i ∪ {s odd : 2s < 4^{i+1}}`.
pub fn construct_21(ell: u32) -> Result<Splitting> {
    check_degree(ell)?;
    let m = MultiplierSet::new(2, 1)?;
    let q = 4u64.checked_pow(ell).ok_or(Error::Overflow)?;
    let mut level = vec![1u64];
    let mut modulus = 4u64;
    for i in 1..ell {
        let next_modulus = modulus * 4;
        let before = level.len() as u64;
        let mut next: Vec<u64> = level.iter().map(|s| s * 4).collect();
        next.extend((1..next_modulus / 2).step_by(2));
        if next.len() as u64 != before + 4u64.pow(i) {
            return Err(Error::Internal("(2,1) construction size recurrence failed".into()));
        }
        level = next;
        modulus = next_modulus;
    }
    debug_assert_eq!(modulus, q);
    certify(cyclic_from_values(q, m, level)?, "(2,1) construction")
}

/// All vectors of `Z_v^k` whose first nonzero entry lies in `pivots`, in
/// lexicographic order.
fn leading_vectors(group: &FiniteAbelianGroup, v: u64, k: usize, pivots: &[u64]) -> Vec<GroupElement> {
    let mut out = Vec::new();
    for index in 0..group.order() {
        let e = group.from_index(index);
        if let Some(&lead) = e.residues().iter().find(|&&r| r != 0) {
            if pivots.contains(&lead) {
                out.push(e);
            }
        }
    }
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    debug_assert_eq!(out.len() as u64, pivots.len() as u64 * (v.pow(k as u32) - 1) / (v - 1));
    out
}

/// Splitters `{P(α) : P monic, deg P < ℓ}` of the additive group of
/// `GF(p^ℓ)`, as coefficient vectors sorted lexicographically.
pub fn construct_field(p: u64, ell: u32, k_plus: u64, k_minus: u64) -> Result<Splitting> {
    let m = check_prime_split(p, k_plus, k_minus)?;
    check_degree(ell)?;
    let field = build_field(p, ell)?;
    let group = field.additive_group();
    let mut splitters = Vec::new();
    for degree in 0..ell as usize {
        // Monic P of this degree: p^degree choices of lower coefficients.
        for code in 0..p.pow(degree as u32) {
            let mut coeffs = Vec::with_capacity(degree + 1);
            let mut c = code;
            for _ in 0..degree {
                coeffs.push(c % p);
                c /= p;
            }
            coeffs.push(1);
            splitters.push(field.vector_of(&coeffs));
        }
    }
    splitters.sort();
    certify(Splitting::new(group, m, splitters)?, "field construction")
}

/// Extends a splitting of `Z_v` to `Z_v^k`: every column whose top nonzero
/// entry is a base splitter. Columns are sorted lexicographically.
///
/// The base multipliers must all be coprime to `v`; otherwise the extension is
/// rejected, naming the offending multiplier and the collision it causes.
pub fn matrix_extension(base: &Splitting, k: usize) -> Result<Splitting> {
    if !base.group().is_cyclic() {
        return Err(Error::Precondition("matrix extension needs a cyclic base group".into()));
    }
    if k == 0 {
        return Err(Error::Precondition("extension degree k must be at least 1".into()));
    }
    base.verify_packing().map_err(Error::NotPacking)?;
    if k == 1 {
        return Ok(base.clone());
    }
    let v = base.group().order();
    let group = FiniteAbelianGroup::homocyclic(v, k)?;
    let pivots = base.cyclic_splitters().expect("cyclic");
    let count = (v as u128).pow(k as u32);
    if count > 1 << 26 {
        return Err(Error::TooLarge(format!("Z_{v}^{k} has {count} elements")));
    }
    let columns = leading_vectors(&group, v, k, &pivots);
    let sp = Splitting::new(group, base.multipliers(), columns)?;
    if let Some(bad) = base.multipliers().iter().find(|m| m.unsigned_abs().gcd(&v) != 1) {
        return Err(Error::NotCoprime {
            multiplier: bad,
            modulus: v,
            witness: sp.verify_packing().err(),
        });
    }
    sp.verify_packing()
        .map_err(|w| Error::Internal(format!("matrix extension: {w}")))?;
    if base.is_tiling()? && !sp.is_tiling()? {
        return Err(Error::Internal("matrix extension lost perfectness".into()));
    }
    Ok(sp)
}

/// The cyclic construction over `Z_{p^ℓ}` extended to `(Z_{p^ℓ})^k`.
pub fn mixed_construction(p: u64, ell: u32, k_plus: u64, k_minus: u64, k: usize) -> Result<Splitting> {
    let base = construct_cyclic(p, ell, k_plus, k_minus)?;
    let sp = matrix_extension(&base, k)?;
    certify(sp, "mixed construction")
}

/// A member of the infinite family with a prescribed balance ratio.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceMember {
    pub p: u64,
    pub scale: u64,
    pub k_plus: u64,
    pub k_minus: u64,
    #[serde(skip)]
    pub splitting: Splitting,
}

/// Upper bound on candidates `1 + j(a+b)` tested before giving up.
pub const BALANCE_SEARCH_CAP: u64 = 50_000_000;

/// For `β = a/b` in lowest terms, takes the `index`-th (1-based) prime
/// `p ≡ 1 (mod a+b)`, scales `(b, a)` by `t = (p−1)/(a+b)`, and returns the
/// cyclic construction over `Z_p`.
pub fn balance_ratio_family(a: u64, b: u64, index: u64) -> Result<BalanceMember> {
    balance_ratio_family_with_degree(a, b, index, 1)
}

/// As [`balance_ratio_family`], over `Z_{p^ℓ}`.
pub fn balance_ratio_family_with_degree(a: u64, b: u64, index: u64, ell: u32) -> Result<BalanceMember> {
    if !(0 < a && a < b) {
        return Err(Error::Precondition(format!("balance ratio {a}/{b} must lie strictly between 0 and 1")));
    }
    if a.gcd(&b) != 1 {
        return Err(Error::Precondition(format!("balance ratio {a}/{b} is not in lowest terms")));
    }
    if index == 0 {
        return Err(Error::Precondition("family index is 1-based".into()));
    }
    let d = a + b;
    let mut found = 0;
    for j in 1..=BALANCE_SEARCH_CAP {
        let p = j.checked_mul(d).and_then(|x| x.checked_add(1)).ok_or(Error::Overflow)?;
        if is_prime(p) {
            found += 1;
            if found == index {
                let (k_plus, k_minus) = (j * b, j * a);
                let splitting = construct_cyclic(p, ell, k_plus, k_minus)?;
                return Ok(BalanceMember { p, scale: j, k_plus, k_minus, splitting });
            }
        }
    }
    Err(Error::TooLarge(format!(
        "fewer than {index} primes ≡ 1 (mod {d}) among the first {BALANCE_SEARCH_CAP} candidates"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_example() {
        let sp = construct_cyclic(5, 2, 3, 1).unwrap();
        assert_eq!(sp.cyclic_splitters().unwrap(), vec![1, 5, 6, 11, 16, 21]);
        assert_eq!(construct_cyclic(5, 1, 3, 1).unwrap().cyclic_splitters().unwrap(), vec![1]);
        let z49 = construct_cyclic(7, 2, 4, 2).unwrap();
        assert_eq!(z49.n(), 8);
        assert!(z49.is_tiling().unwrap());
    }

    #[test]
    fn cyclic_preconditions() {
        assert!(construct_cyclic(4, 2, 2, 1).is_err());
        assert!(construct_cyclic(5, 2, 2, 1).is_err());
        assert!(construct_cyclic(5, 2, 2, 2).is_err());
        assert!(construct_cyclic(3, 2, 1, 1).is_err());
        assert!(construct_cyclic(5, 0, 3, 1).is_err());
    }

    #[test]
    fn two_one_small() {
        assert_eq!(construct_21(1).unwrap().cyclic_splitters().unwrap(), vec![1]);
        assert_eq!(construct_21(2).unwrap().cyclic_splitters().unwrap(), vec![1, 3, 4, 5, 7]);
        let z64 = construct_21(3).unwrap();
        assert_eq!(z64.n(), 21);
        assert!(z64.is_tiling().unwrap());
    }

    /// The residue condition read literally as `s ≡ 1 (mod 4)` gives a set that
    /// is too small to tile `Z_16`.
    #[test]
    fn literal_mod4_reading_is_too_small() {
        let literal: Vec<u64> = std::iter::once(4)
            .chain((0..16u64).filter(|s| s % 4 == 1 && 2 * s < 16))
            .collect();
        assert_eq!(literal.len(), 3);
        assert_ne!(literal.len() as u64, (16 - 1) / 3);
        let sp = cyclic_from_values(16, MultiplierSet::new(2, 1).unwrap(), literal).unwrap();
        assert!(!sp.is_tiling().unwrap_or(false));
    }

    #[test]
    fn field_example() {
        let sp = construct_field(5, 2, 3, 1).unwrap();
        let cols: Vec<Vec<u64>> = sp.splitters().iter().map(|s| s.residues().to_vec()).collect();
        assert_eq!(cols, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3], vec![1, 4]]);
        let f1 = construct_field(5, 1, 3, 1).unwrap();
        assert_eq!(f1.splitters().len(), 1);
        assert_eq!(f1.splitters()[0].residues(), &[1]);
        let f7 = construct_field(7, 2, 4, 2).unwrap();
        assert_eq!(f7.n(), 8);
        assert!(f7.is_tiling().unwrap());
    }

    #[test]
    fn field_matches_leading_one_vectors() {
        for (p, l, kp, km) in [(5, 3, 3, 1), (7, 2, 5, 1), (11, 2, 6, 4)] {
            let sp = construct_field(p, l, kp, km).unwrap();
            let g = sp.group().clone();
            let expect = leading_vectors(&g, p, l as usize, &[1]);
            assert_eq!(sp.splitters(), expect.as_slice());
        }
    }

    #[test]
    fn extension_of_z5() {
        let base = construct_cyclic(5, 1, 3, 1).unwrap();
        let ext = matrix_extension(&base, 2).unwrap();
        assert_eq!(ext.n(), 6);
        assert!(ext.is_tiling().unwrap());
        assert_eq!(ext, construct_field(5, 2, 3, 1).unwrap());
        assert_eq!(matrix_extension(&base, 1).unwrap(), base);
    }

    #[test]
    fn extension_rejects_z4() {
        let base = Splitting::cyclic(4, 2, 1, &[1]).unwrap();
        match matrix_extension(&base, 2) {
            Err(Error::NotCoprime { multiplier: 2, modulus: 4, witness: Some(w) }) => {
                let text = w.to_string();
                assert!(text.starts_with("2·(1,0) = 2·(1,2)"), "{text}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mixed() {
        assert_eq!(mixed_construction(5, 2, 3, 1, 1).unwrap(), construct_cyclic(5, 2, 3, 1).unwrap());
        let big = mixed_construction(5, 2, 3, 1, 2).unwrap();
        assert_eq!(big.n(), 156);
        assert_eq!(big.group().orders(), &[25, 25]);
        let z7 = mixed_construction(7, 1, 4, 2, 2).unwrap();
        assert_eq!(z7.n(), 8);
    }

    #[test]
    fn balance_family() {
        let m = balance_ratio_family(1, 2, 1).unwrap();
        assert_eq!((m.p, m.k_plus, m.k_minus), (7, 4, 2));
        assert_eq!(m.splitting.cyclic_splitters().unwrap(), vec![1]);
        let m = balance_ratio_family(1, 3, 1).unwrap();
        assert_eq!((m.p, m.k_plus, m.k_minus), (5, 3, 1));
        let m = balance_ratio_family(2, 3, 2).unwrap();
        assert_eq!((m.p, m.k_plus, m.k_minus), (31, 18, 12));
        assert!(m.splitting.is_tiling().unwrap());
        assert!(balance_ratio_family(2, 4, 1).is_err());
        assert!(balance_ratio_family(3, 2, 1).is_err());
        assert!(balance_ratio_family(1, 2, 0).is_err());
        let deep = balance_ratio_family_with_degree(1, 2, 1, 2).unwrap();
        assert_eq!(deep.splitting.n(), 8);
    }
}
