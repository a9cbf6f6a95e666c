//! Prime-power fields `GF(p^ℓ)` realised as `Z_p[x]/(f)` with `x` primitive.
//!
//! Only what the field construction needs is here: choosing a modulus, and
//! viewing the additive group as `Z_p^ℓ` through the basis `1, α, …, α^{ℓ-1}`.
//! Coefficient vectors are written with the highest power of `α` first, so the
//! "leading" entry of a vector is its first nonzero residue.

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_factors};
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};

/// A polynomial over `Z_p`, lowest degree first, no trailing zeros.
type Poly = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRep {
    p: u64,
    degree: u32,
    /// Monic modulus, lowest degree first (`modulus[degree] == 1`).
    modulus: Vec<u64>,
}

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Poly {
    let mut r: Poly = a.to_vec();
    let df = f.len() - 1;
    let lead_inv = crate::arith::mod_inverse(f[df], p).expect("nonzero leading coefficient");
    while r.len() > df && !r.is_empty() {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        if c != 0 {
            for (i, &fc) in f.iter().enumerate() {
                let idx = top - df + i;
                r[idx] = (r[idx] + p - c * fc % p) % p;
            }
        }
        r.pop();
        r = trim(r);
    }
    trim(r)
}

fn poly_mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, f, p)
}

fn poly_pow_mod(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Poly {
    let mut acc: Poly = poly_rem(&[1], f, p);
    let mut b = poly_rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, f, p);
        }
        b = poly_mul_mod(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

impl FieldRep {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// `p^ℓ`.
    pub fn size(&self) -> u64 {
        self.p.pow(self.degree)
    }

    /// Irreducibility of the modulus: `gcd(f, x^{p^d} − x) = 1` for `1 ≤ d ≤ ℓ/2`.
    pub fn modulus_is_irreducible(&self) -> bool {
        let f = &self.modulus;
        let p = self.p;
        let x: Poly = trim(vec![0, 1]);
        let mut frob = x.clone();
        for _ in 1..=self.degree / 2 {
            frob = poly_pow_mod(&frob, p, f, p);
            let g = poly_gcd(f, &poly_sub(&frob, &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

    /// Multiplicative order of the residue of `x`, or `None` if `x` is not a unit.
    pub fn order_of_x(&self) -> Option<u64> {
        let n = self.size() - 1;
        let x = trim(vec![0, 1]);
        let one = poly_rem(&[1], &self.modulus, self.p);
        if poly_pow_mod(&x, n, &self.modulus, self.p) != one {
            return None;
        }
        let mut order = n;
        for r in prime_factors(n) {
            while order % r == 0 && poly_pow_mod(&x, order / r, &self.modulus, self.p) == one {
                order /= r;
            }
        }
        Some(order)
    }

    pub fn alpha_is_primitive(&self) -> bool {
        self.order_of_x() == Some(self.size() - 1)
    }

    /// The additive group `Z_p^ℓ`.
    pub fn additive_group(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::homocyclic(self.p, self.degree as usize).expect("valid field")
    }

    /// Coefficient vector of a polynomial in `α` (lowest degree first input),
    /// written highest power first.
    pub fn vector_of(&self, poly_low_first: &[u64]) -> GroupElement {
        let reduced = poly_rem(poly_low_first, &self.modulus, self.p);
        let ell = self.degree as usize;
        let residues = (0..ell)
            .rev()
            .map(|i| reduced.get(i).copied().unwrap_or(0))
            .collect();
        self.additive_group()
            .element_from_residues(residues)
            .expect("reduced coefficients")
    }

    /// `α^i` in the vector view.
    pub fn alpha_power(&self, i: u64) -> GroupElement {
        let x = trim(vec![0, 1]);
        self.vector_of(&poly_pow_mod(&x, i, &self.modulus, self.p))
    }
}

/// Selects the smallest monic modulus of degree `ℓ` over `Z_p` (ordered by the
/// base-`p` value `Σ cᵢ pⁱ` of its lower coefficients) whose root `x` is
/// primitive.
pub fn build_field(p: u64, degree: u32) -> Result<FieldRep> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if degree == 0 {
        return Err(Error::Precondition("field degree must be at least 1".into()));
    }
    let size = p.checked_pow(degree).ok_or(Error::Overflow)?;
    let ell = degree as usize;
    let candidates = size; // number of choices for the ℓ lower coefficients
    for code in 0..candidates {
        let mut coeffs = Vec::with_capacity(ell + 1);
        let mut c = code;
        for _ in 0..ell {
            coeffs.push(c % p);
            c /= p;
        }
        if coeffs[0] == 0 {
            continue;
        }
        coeffs.push(1);
        let rep = FieldRep { p, degree, modulus: coeffs };
        if rep.alpha_is_primitive() {
            debug_assert!(rep.modulus_is_irreducible());
            return Ok(rep);
        }
    }
    Err(Error::Internal(format!("no primitive modulus found for GF({p}^{degree})")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        let f5 = build_field(5, 1).unwrap();
        assert_eq!(f5.additive_group().orders(), &[5]);
        // x + 2: root 3, a primitive root mod 5.
        assert_eq!(f5.modulus(), &[2, 1]);
        let f2 = build_field(2, 1).unwrap();
        assert_eq!(f2.additive_group().orders(), &[2]);
        assert_eq!(f2.modulus(), &[1, 1]);
    }

    #[test]
    fn gf25() {
        let f = build_field(5, 2).unwrap();
        assert_eq!(f.additive_group().orders(), &[5, 5]);
        assert!(f.modulus_is_irreducible());
        assert_eq!(f.order_of_x(), Some(24));
        // The powers of α run over every nonzero vector exactly once.
        let mut seen: Vec<_> = (0..24).map(|i| f.alpha_power(i)).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 24);
        assert!(seen.iter().all(|v| !v.is_zero()));
    }

    #[test]
    fn deterministic_and_valid() {
        for (p, l) in [(2, 3), (2, 4), (3, 2), (3, 3), (7, 2), (11, 2), (13, 1)] {
            let a = build_field(p, l).unwrap();
            let b = build_field(p, l).unwrap();
            assert_eq!(a, b);
            assert!(a.modulus_is_irreducible(), "GF({p}^{l})");
            assert!(a.alpha_is_primitive());
        }
    }

    #[test]
    fn reducible_modulus_detected() {
        // x² + 1 = (x + 2)(x + 3) over Z_5.
        let rep = FieldRep { p: 5, degree: 2, modulus: vec![1, 0, 1] };
        assert!(!rep.modulus_is_irreducible());
        assert!(!rep.alpha_is_primitive());
        // x² + 2 is irreducible over Z_5 but x has order 8, not 24.
        let rep = FieldRep { p: 5, degree: 2, modulus: vec![2, 0, 1] };
        assert!(rep.modulus_is_irreducible());
        assert_eq!(rep.order_of_x(), Some(8));
    }

    #[test]
    fn rejects_composite() {
        assert_eq!(build_field(4, 2), Err(Error::NotPrime(4)));
    }
}
