//! Finite abelian groups as direct products of cyclic groups.
//!
//! A group is stored by its list of cyclic orders `(d₁, …, d_k)` and an element
//! by its residue vector. All operations reduce into range and check lengths;
//! the group order is computed with checked multiplication so a group whose
//! order does not fit in a `u64` cannot be constructed.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{mul_mod, reduce};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
    size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement(Vec<u64>);

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidGroup("at least one cyclic factor is required".into()));
        }
        if let Some(&d) = orders.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidGroup(format!("cyclic order {d} is below 2")));
        }
        let size = orders
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d))
            .ok_or(Error::Overflow)?;
        Ok(Self { orders, size })
    }

    /// The cyclic group `Z_q`.
    pub fn cyclic(q: u64) -> Result<Self> {
        Self::new(vec![q])
    }

    /// The group `Z_v^k`.
    pub fn homocyclic(v: u64, k: usize) -> Result<Self> {
        Self::new(vec![v; k])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// `|G|`.
    pub fn order(&self) -> u64 {
        self.size
    }

    /// Least common multiple of the cyclic orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, d| acc.lcm(d))
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders.len() == 1
    }

    /// Returns `Some(v)` when every cyclic factor has the same order `v`.
    pub fn homocyclic_order(&self) -> Option<u64> {
        let v = self.orders[0];
        self.orders.iter().all(|&d| d == v).then_some(v)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Builds an element from arbitrary integers, reducing each into range.
    pub fn element(&self, values: &[i64]) -> Result<GroupElement> {
        self.check_len(values.len())?;
        Ok(GroupElement(
            values.iter().zip(&self.orders).map(|(&v, &d)| reduce(v, d)).collect(),
        ))
    }

    /// Builds an element from residues that must already lie in range.
    pub fn element_from_residues(&self, residues: Vec<u64>) -> Result<GroupElement> {
        self.check_len(residues.len())?;
        for (&r, &d) in residues.iter().zip(&self.orders) {
            if r >= d {
                return Err(Error::ResidueOutOfRange { residue: r, order: d });
            }
        }
        Ok(GroupElement(residues))
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.0.len() == self.rank() && a.0.iter().zip(&self.orders).all(|(r, d)| r < d)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), actual: len });
        }
        Ok(())
    }

    fn check(&self, a: &GroupElement) -> Result<()> {
        self.check_len(a.0.len())?;
        for (&r, &d) in a.0.iter().zip(&self.orders) {
            if r >= d {
                return Err(Error::ResidueOutOfRange { residue: r, order: d });
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.orders)
                .map(|((&x, &y), &d)| ((x as u128 + y as u128) % d as u128) as u64)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement(
            a.0.iter().zip(&self.orders).map(|(&x, &d)| (d - x) % d).collect(),
        ))
    }

    /// `m·s`, for any integer `m` (negative multiples included).
    pub fn scalar_mul(&self, m: i64, s: &GroupElement) -> Result<GroupElement> {
        self.check(s)?;
        Ok(self.scalar_mul_unchecked(m, s))
    }

    pub(crate) fn scalar_mul_unchecked(&self, m: i64, s: &GroupElement) -> GroupElement {
        GroupElement(
            s.0.iter()
                .zip(&self.orders)
                .map(|(&r, &d)| mul_mod(reduce(m, d), r, d))
                .collect(),
        )
    }

    /// Smallest `t > 0` with `t·s = 0`.
    pub fn element_order(&self, s: &GroupElement) -> Result<u64> {
        self.check(s)?;
        Ok(s.0
            .iter()
            .zip(&self.orders)
            .map(|(&r, &d)| d / d.gcd(&r))
            .fold(1u64, |acc, t| acc.lcm(&t)))
    }

    /// Mixed-radix index of an element, in `[0, |G|)`.
    pub fn index_of(&self, a: &GroupElement) -> u64 {
        a.0.iter().zip(&self.orders).fold(0u64, |acc, (&r, &d)| acc * d + r)
    }

    pub fn from_index(&self, mut index: u64) -> GroupElement {
        let mut residues = vec![0; self.rank()];
        for (slot, &d) in residues.iter_mut().zip(&self.orders).rev() {
            *slot = index % d;
            index /= d;
        }
        GroupElement(residues)
    }

    /// All elements in mixed-radix order (lexicographic on residues).
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.size).map(move |i| self.from_index(i))
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join("×"))
    }
}
