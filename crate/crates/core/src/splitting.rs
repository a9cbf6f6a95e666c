//! Group splittings by the quasi-cross multiplier set `[−k₋, k₊]*`.
//!
//! A [`Splitting`] is a group, a multiplier set, and an ordered splitter list.
//! Nothing about it is assumed: [`Splitting::verify_packing`] checks that the
//! products `m·s` are distinct and nonzero, and [`Splitting::is_tiling`] checks
//! that the products exhaust the nonzero elements. The splitter list doubles as
//! the parity-check matrix of the associated lattice, so its order matters.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, mod_inverse, mul_mod, prime_factors};
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};

/// The `(k₊, k₋, n)`-quasi-cross.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuasiCrossShape {
    pub k_plus: u64,
    pub k_minus: u64,
    pub n: u64,
}

impl QuasiCrossShape {
    pub fn new(k_plus: u64, k_minus: u64, n: u64) -> Result<Self> {
        MultiplierSet::new(k_plus, k_minus)?;
        if n == 0 {
            return Err(Error::Precondition("dimension n must be at least 1".into()));
        }
        Ok(Self { k_plus, k_minus, n })
    }

    /// `n(k₊ + k₋) + 1`, the number of unit cells in the shape.
    pub fn volume(&self) -> u64 {
        self.n * (self.k_plus + self.k_minus) + 1
    }

    /// The balance ratio `k₋/k₊` as a reduced fraction.
    pub fn balance_ratio(&self) -> (u64, u64) {
        let g = self.k_plus.gcd(&self.k_minus);
        (self.k_minus / g, self.k_plus / g)
    }

    pub fn multipliers(&self) -> MultiplierSet {
        MultiplierSet { k_plus: self.k_plus, k_minus: self.k_minus }
    }

    /// The cells of `E(0)`: the origin, then `m·eᵢ` for each coordinate `i`
    /// and each `m ∈ M` in ascending order.
    pub fn cells(&self) -> Vec<Vec<i64>> {
        let n = self.n as usize;
        let mut out = vec![vec![0; n]];
        for i in 0..n {
            for m in self.multipliers().iter() {
                let mut v = vec![0; n];
                v[i] = m;
                out.push(v);
            }
        }
        out
    }
}

/// `M = [−k₋, k₊]* = {−k₋, …, −1, 1, …, k₊}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiplierSet {
    k_plus: u64,
    k_minus: u64,
}

impl MultiplierSet {
    /// Requires `0 < k₋ < k₊`.
    pub fn new(k_plus: u64, k_minus: u64) -> Result<Self> {
        if !(0 < k_minus && k_minus < k_plus) {
            return Err(Error::Precondition(format!(
                "arm lengths must satisfy 0 < k_minus < k_plus (got k_plus={k_plus}, k_minus={k_minus})"
            )));
        }
        if k_plus > i64::MAX as u64 / 2 {
            return Err(Error::Overflow);
        }
        Ok(Self { k_plus, k_minus })
    }

    pub fn k_plus(&self) -> u64 {
        self.k_plus
    }

    pub fn k_minus(&self) -> u64 {
        self.k_minus
    }

    /// `|M| = k₊ + k₋`.
    pub fn len(&self) -> usize {
        (self.k_plus + self.k_minus) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Multipliers in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = i64> + Clone {
        let lo = -(self.k_minus as i64);
        let hi = self.k_plus as i64;
        (lo..=hi).filter(|&m| m != 0)
    }

    pub fn contains(&self, m: i64) -> bool {
        m != 0 && m >= -(self.k_minus as i64) && m <= self.k_plus as i64
    }

    /// `δ_p(M)`: how many multipliers are divisible by `p`.
    pub fn delta_p(&self, p: u64) -> usize {
        self.iter().filter(|m| m.unsigned_abs() % p == 0).count()
    }
}

impl fmt::Display for MultiplierSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[-{},{}]*", self.k_minus, self.k_plus)
    }
}

/// Why a candidate fails to be a packing. Splitter indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PackingWitness {
    /// `m·s_index = 0`.
    Zero { multiplier: i64, index: usize, splitter: GroupElement },
    /// `m₁·s_i = m₂·s_j` with `(m₁, i) ≠ (m₂, j)`.
    Collision {
        first: (i64, usize),
        second: (i64, usize),
        first_splitter: GroupElement,
        second_splitter: GroupElement,
        value: GroupElement,
    },
}

impl fmt::Display for PackingWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PackingWitness::Zero { multiplier, index, splitter } => {
                write!(f, "{multiplier}·{splitter} = 0 (splitter {})", index + 1)
            }
            PackingWitness::Collision { first, second, first_splitter, second_splitter, value } => {
                write!(
                    f,
                    "{}·{} = {}·{} = {} (splitters {} and {})",
                    first.0,
                    first_splitter,
                    second.0,
                    second_splitter,
                    value,
                    first.1 + 1,
                    second.1 + 1
                )
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Singularity {
    NonSingular,
    Singular,
    PurelySingular,
}

impl fmt::Display for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Singularity::NonSingular => "non-singular",
            Singularity::Singular => "singular",
            Singularity::PurelySingular => "purely-singular",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting {
    group: FiniteAbelianGroup,
    multipliers: MultiplierSet,
    splitters: Vec<GroupElement>,
}

impl Splitting {
    /// Checks that every splitter belongs to `group`. Nothing else is assumed.
    pub fn new(
        group: FiniteAbelianGroup,
        multipliers: MultiplierSet,
        splitters: Vec<GroupElement>,
    ) -> Result<Self> {
        if splitters.is_empty() {
            return Err(Error::Precondition("splitter set must be nonempty".into()));
        }
        for s in &splitters {
            if !group.contains(s) {
                return Err(Error::DimensionMismatch { expected: group.rank(), actual: s.rank() });
            }
        }
        Ok(Self { group, multipliers, splitters })
    }

    /// Convenience constructor for `Z_q` with integer splitters.
    pub fn cyclic(q: u64, k_plus: u64, k_minus: u64, splitters: &[i64]) -> Result<Self> {
        let group = FiniteAbelianGroup::cyclic(q)?;
        let multipliers = MultiplierSet::new(k_plus, k_minus)?;
        let splitters = splitters
            .iter()
            .map(|&s| group.element(&[s]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, multipliers, splitters)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn multipliers(&self) -> MultiplierSet {
        self.multipliers
    }

    pub fn splitters(&self) -> &[GroupElement] {
        &self.splitters
    }

    /// Splitters of a cyclic splitting as plain integers.
    pub fn cyclic_splitters(&self) -> Option<Vec<u64>> {
        self.group
            .is_cyclic()
            .then(|| self.splitters.iter().map(|s| s.residues()[0]).collect())
    }

    pub fn n(&self) -> usize {
        self.splitters.len()
    }

    pub fn shape(&self) -> QuasiCrossShape {
        QuasiCrossShape {
            k_plus: self.multipliers.k_plus(),
            k_minus: self.multipliers.k_minus(),
            n: self.n() as u64,
        }
    }

    /// Scans splitters in order and multipliers ascending; returns the first
    /// zero product or repeated product encountered.
    pub fn verify_packing(&self) -> std::result::Result<(), PackingWitness> {
        let mut seen: HashMap<GroupElement, (i64, usize)> =
            HashMap::with_capacity(self.n() * self.multipliers.len());
        for (i, s) in self.splitters.iter().enumerate() {
            for m in self.multipliers.iter() {
                let v = self.group.scalar_mul_unchecked(m, s);
                if v.is_zero() {
                    return Err(PackingWitness::Zero { multiplier: m, index: i, splitter: s.clone() });
                }
                if let Some(&(m0, i0)) = seen.get(&v) {
                    return Err(PackingWitness::Collision {
                        first: (m0, i0),
                        second: (m, i),
                        first_splitter: self.splitters[i0].clone(),
                        second_splitter: s.clone(),
                        value: v,
                    });
                }
                seen.insert(v, (m, i));
            }
        }
        Ok(())
    }

    pub fn is_packing(&self) -> bool {
        self.verify_packing().is_ok()
    }

    /// Whether a verified packing is perfect: `|G| = n(k₊ + k₋) + 1`.
    pub fn is_tiling(&self) -> Result<bool> {
        self.verify_packing().map_err(Error::NotPacking)?;
        Ok(self.group.order() == self.shape().volume())
    }

    /// Classification by `gcd(|G|, m)` over the multipliers.
    pub fn classify_singularity(&self) -> Singularity {
        classify(self.group.order(), self.multipliers)
    }

    /// Checks `δ_p(M) ≥ |M|/p²` for every prime `p` dividing `|G|`.
    /// Requires a purely singular tiling.
    pub fn check_delta_lemma(&self) -> Result<bool> {
        if !self.is_tiling()? {
            return Err(Error::Precondition("delta lemma applies to tilings only".into()));
        }
        if self.classify_singularity() != Singularity::PurelySingular {
            return Err(Error::Precondition(
                "delta lemma applies to purely singular splittings only".into(),
            ));
        }
        let size = self.multipliers.len() as u64;
        Ok(prime_factors(self.group.order())
            .into_iter()
            .all(|p| self.multipliers.delta_p(p) as u64 * p * p >= size))
    }

    /// Multiplies every splitter by `u`.
    pub fn scaled(&self, u: i64) -> Splitting {
        Splitting {
            group: self.group.clone(),
            multipliers: self.multipliers,
            splitters: self
                .splitters
                .iter()
                .map(|s| self.group.scalar_mul_unchecked(u, s))
                .collect(),
        }
    }

    /// Splitters sorted ascending (set semantics).
    pub fn sorted(&self) -> Splitting {
        let mut splitters = self.splitters.clone();
        splitters.sort();
        Splitting { group: self.group.clone(), multipliers: self.multipliers, splitters }
    }

    /// Scales a cyclic splitting by the inverse of its smallest unit splitter,
    /// so that it contains 1, and sorts the result.
    pub fn normalize(&self) -> Result<Splitting> {
        let q = self.cyclic_modulus()?;
        let unit = self
            .splitters
            .iter()
            .map(|s| s.residues()[0])
            .filter(|&s| s.gcd(&q) == 1)
            .min()
            .ok_or_else(|| Error::Precondition("no splitter is a unit; cannot normalize".into()))?;
        let inv = mod_inverse(unit, q).expect("unit");
        Ok(self.scaled(inv as i64).sorted())
    }

    /// The lexicographically smallest sorted splitter list among all unit
    /// multiples `u·S`. Two cyclic splittings are unit-equivalent iff their
    /// canonical forms agree.
    pub fn orbit_canonical(&self) -> Result<Splitting> {
        let q = self.cyclic_modulus()?;
        let values: Vec<u64> = self.splitters.iter().map(|s| s.residues()[0]).collect();
        let mut best: Option<Vec<u64>> = None;
        for u in (1..q).filter(|u| u.gcd(&q) == 1) {
            let mut scaled: Vec<u64> = values.iter().map(|&s| mul_mod(s, u, q)).collect();
            scaled.sort_unstable();
            if best.as_ref().is_none_or(|b| scaled < *b) {
                best = Some(scaled);
            }
        }
        let best = best.unwrap_or(values);
        let splitters = best.into_iter().map(|s| self.group.element(&[s as i64])).collect::<Result<_>>()?;
        Splitting::new(self.group.clone(), self.multipliers, splitters)
    }

    /// Number of distinct splitter sets `u·S` over the units `u` of `Z_q`.
    pub fn orbit_size(&self) -> Result<usize> {
        let q = self.cyclic_modulus()?;
        let values: Vec<u64> = self.splitters.iter().map(|s| s.residues()[0]).collect();
        let mut sets: Vec<Vec<u64>> = (1..q)
            .filter(|u| u.gcd(&q) == 1)
            .map(|u| {
                let mut v: Vec<u64> = values.iter().map(|&s| mul_mod(s, u, q)).collect();
                v.sort_unstable();
                v
            })
            .collect();
        sets.sort();
        sets.dedup();
        Ok(sets.len())
    }

    fn cyclic_modulus(&self) -> Result<u64> {
        if !self.group.is_cyclic() {
            return Err(Error::Precondition("operation requires a cyclic group".into()));
        }
        Ok(self.group.order())
    }

    /// Products `m·sᵢ` in scan order, paired with `(m, i)`.
    pub fn products(&self) -> impl Iterator<Item = (GroupElement, i64, usize)> + '_ {
        self.splitters.iter().enumerate().flat_map(move |(i, s)| {
            self.multipliers
                .iter()
                .map(move |m| (self.group.scalar_mul_unchecked(m, s), m, i))
        })
    }

    pub fn to_json(&self) -> SplittingJson {
        SplittingJson {
            orders: self.group.orders().to_vec(),
            k_plus: self.multipliers.k_plus(),
            k_minus: self.multipliers.k_minus(),
            splitters: self.splitters.iter().map(|s| s.residues().to_vec()).collect(),
        }
    }

    pub fn from_json(json: &SplittingJson) -> Result<Self> {
        let group = FiniteAbelianGroup::new(json.orders.clone())?;
        let multipliers = MultiplierSet::new(json.k_plus, json.k_minus)?;
        let splitters = json
            .splitters
            .iter()
            .map(|s| group.element_from_residues(s.clone()))
            .collect::<Result<Vec<_>>>()?;
        Splitting::new(group, multipliers, splitters)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: SplittingJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&json)
    }
}

/// Classification of a multiplier set against a group order.
pub fn classify(order: u64, multipliers: MultiplierSet) -> Singularity {
    if multipliers.iter().all(|m| m.unsigned_abs().gcd(&order) == 1) {
        return Singularity::NonSingular;
    }
    let pure = prime_factors(order)
        .into_iter()
        .all(|p| multipliers.iter().any(|m| m.unsigned_abs() % p == 0));
    if pure {
        Singularity::PurelySingular
    } else {
        Singularity::Singular
    }
}

/// `δ_p(M)` for a prime `p`.
pub fn delta_p(multipliers: MultiplierSet, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(multipliers.delta_p(p))
}

/// Wire format: `{"orders":[…],"k_plus":…,"k_minus":…,"splitters":[[…],…]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingJson {
    pub orders: Vec<u64>,
    pub k_plus: u64,
    pub k_minus: u64,
    pub splitters: Vec<Vec<u64>>,
}
