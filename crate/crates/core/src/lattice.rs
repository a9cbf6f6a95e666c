//! Integer lattices attached to splittings.
//!
//! The lattice of a splitting is `ker φ` for `φ(x) = Σ xᵢ sᵢ`. It is computed
//! as a lower-triangular Hermite normal form, which is unique, so it can be
//! compared literally against hand-written generating matrices.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hnf::lower_hnf;
use crate::splitting::{QuasiCrossShape, Splitting};

/// A full-rank lattice in `Zⁿ`, basis vectors as rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerLattice {
    basis: Vec<Vec<i64>>,
}

impl IntegerLattice {
    pub fn new(basis: Vec<Vec<i64>>) -> Result<Self> {
        let n = basis.len();
        if n == 0 {
            return Err(Error::Precondition("lattice basis must be nonempty".into()));
        }
        if let Some(row) = basis.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, actual: row.len() });
        }
        let lattice = Self { basis };
        lattice.determinant()?;
        Ok(lattice)
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `|det|` by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<u64> {
        let n = self.dim();
        let mut a: Vec<Vec<i128>> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let mut prev = 1i128;
        let mut sign = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                    return Err(Error::SingularLattice);
                };
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = a[i][j]
                        .checked_mul(a[k][k])
                        .and_then(|x| a[i][k].checked_mul(a[k][j]).and_then(|y| x.checked_sub(y)))
                        .ok_or(Error::Overflow)?;
                    a[i][j] = t / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        let det = (sign * a[n - 1][n - 1]).unsigned_abs();
        u64::try_from(det).map_err(|_| Error::Overflow)
    }

    /// Lower-triangular Hermite normal form of the same lattice.
    pub fn hermite_form(&self) -> Result<IntegerLattice> {
        let det = self.determinant()?;
        let basis = lower_hnf(&self.basis, &vec![det; self.dim()])?;
        Ok(IntegerLattice { basis })
    }

    pub fn is_lower_hermite(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            let pivot = self.basis[i][i];
            pivot > 0
                && self.basis[i][i + 1..].iter().all(|&x| x == 0)
                && (i + 1..n).all(|r| (0..pivot).contains(&self.basis[r][i]))
        })
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        let torus = QuotientTorus::new(self)?;
        Ok(torus.reduce(v)?.iter().all(|&x| x == 0))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: IntegerLattice = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        IntegerLattice::new(raw.basis)
    }
}

/// `Zⁿ / Λ`, with coset representatives `0 ≤ xᵢ < tᵢ` read off the HNF diagonal.
#[derive(Debug, Clone)]
pub struct QuotientTorus {
    hnf: Vec<Vec<i64>>,
}

impl QuotientTorus {
    pub fn new(lattice: &IntegerLattice) -> Result<Self> {
        let hnf = if lattice.is_lower_hermite() {
            lattice.basis.clone()
        } else {
            lattice.hermite_form()?.basis
        };
        Ok(Self { hnf })
    }

    pub fn diagonal(&self) -> Vec<u64> {
        (0..self.hnf.len()).map(|i| self.hnf[i][i] as u64).collect()
    }

    /// Number of cosets, `det Λ`.
    pub fn size(&self) -> u64 {
        self.diagonal().iter().product()
    }

    /// Canonical representative of `v + Λ`.
    pub fn reduce(&self, v: &[i64]) -> Result<Vec<i64>> {
        let n = self.hnf.len();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: v.len() });
        }
        let mut x: Vec<i128> = v.iter().map(|&a| a as i128).collect();
        for i in (0..n).rev() {
            let pivot = self.hnf[i][i] as i128;
            let q = x[i].div_euclid(pivot);
            if q != 0 {
                for j in 0..=i {
                    x[j] -= q * self.hnf[i][j] as i128;
                }
            }
        }
        Ok(x.into_iter().map(|a| a as i64).collect())
    }

    /// Mixed-radix index of the coset of `v`, in `[0, size)`.
    pub fn index(&self, v: &[i64]) -> Result<u64> {
        let r = self.reduce(v)?;
        Ok(r.iter()
            .zip(self.diagonal())
            .fold(0u64, |acc, (&x, t)| acc * t + x as u64))
    }
}

/// `ker φ` together with the index `[G : ⟨S⟩] = |G| / det`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelLattice {
    pub lattice: IntegerLattice,
    pub index: u64,
}

/// The lattice `{x ∈ Zⁿ : Σ xᵢ sᵢ = 0}` in lower Hermite form.
///
/// Uses the stacked system `[S | I]` over `⊕ Z_{dⱼ} ⊕ Zⁿ`, whose row lattice
/// contains `dⱼ·eⱼ` and `exp(G)·eᵢ`; the rows of its HNF that vanish on the
/// group coordinates span the kernel.
pub fn lattice_from_splitting(sp: &Splitting) -> Result<KernelLattice> {
    let g = sp.group();
    let k = g.rank();
    let n = sp.n();
    let e = g.exponent();
    let mut moduli: Vec<u64> = g.orders().to_vec();
    moduli.extend(std::iter::repeat_n(e, n));
    let generators: Vec<Vec<i64>> = sp
        .splitters()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut row: Vec<i64> = s.residues().iter().map(|&r| r as i64).collect();
            // x coordinates are stacked in reverse so that the result is lower triangular.
            let mut x = vec![0i64; n];
            x[n - 1 - i] = 1;
            row.extend(x);
            row
        })
        .collect();
    let upper = crate::hnf::upper_hnf(&generators, &moduli)?;
    let kernel: Vec<Vec<i64>> = upper[k..]
        .iter()
        .rev()
        .map(|row| row[k..].iter().rev().copied().collect())
        .collect();
    let lattice = IntegerLattice { basis: kernel };
    debug_assert!(lattice.is_lower_hermite());
    let det = lattice.determinant()?;
    if g.order() % det != 0 {
        return Err(Error::Internal("kernel determinant does not divide |G|".into()));
    }
    Ok(KernelLattice { lattice, index: g.order() / det })
}

/// `(n(k₊+k₋)+1) / det Λ`, reduced. A value above one means the caller's
/// packing claim is false.
pub fn packing_density(lattice: &IntegerLattice, shape: &QuasiCrossShape) -> Result<Ratio<u64>> {
    if shape.n as usize != lattice.dim() {
        return Err(Error::DimensionMismatch { expected: lattice.dim(), actual: shape.n as usize });
    }
    let det = lattice.determinant()?;
    let vol = shape.volume();
    if vol > det {
        let r = Ratio::new(vol, det);
        return Err(Error::DensityAboveOne { num: *r.numer(), den: *r.denom() });
    }
    Ok(Ratio::new(vol, det))
}

/// `(t₁, …, t_n)` with `tᵢ` the least positive integer such that `tᵢeᵢ ∈ Λ`,
/// which is the order of `sᵢ`.
pub fn period(sp: &Splitting) -> Vec<u64> {
    sp.splitters()
        .iter()
        .map(|s| sp.group().element_order(s).expect("splitter belongs to group"))
        .collect()
}

/// A unit cell of the quasi-cross centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cell {
    Origin,
    /// `multiplier·e_index`, zero-based index.
    Arm { index: usize, multiplier: i64 },
}

impl Cell {
    fn vector(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        if let Cell::Arm { index, multiplier } = *self {
            v[index] = multiplier;
        }
        v
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Origin => f.write_str("0"),
            Cell::Arm { index, multiplier } => write!(f, "{multiplier}·e{}", index + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometricVerdict {
    Tiling,
    Packing { uncovered: u64 },
    /// Two cells of the shape fall in the same coset of `Λ`, so the translates
    /// by the corresponding lattice points overlap.
    Overlap { first: Cell, second: Cell },
}

/// Largest torus `geometric_check` will enumerate.
pub const GEOMETRIC_TORUS_LIMIT: u64 = 4_000_000;
/// Largest quasi-cross volume `geometric_check` will place.
pub const GEOMETRIC_VOLUME_LIMIT: u64 = 100_000;

/// Lattice-side verification: places the quasi-cross on the torus `Zⁿ/Λ` and
/// counts how often each coset is hit. Uses only the generating matrix, not
/// products in the group.
pub fn geometric_check(sp: &Splitting) -> Result<GeometricVerdict> {
    let shape = sp.shape();
    if shape.volume() > GEOMETRIC_VOLUME_LIMIT {
        return Err(Error::TooLarge(format!("quasi-cross volume {} exceeds guard", shape.volume())));
    }
    let kernel = lattice_from_splitting(sp)?;
    geometric_check_lattice(&kernel.lattice, &shape)
}

/// As [`geometric_check`] for an explicit lattice.
pub fn geometric_check_lattice(lattice: &IntegerLattice, shape: &QuasiCrossShape) -> Result<GeometricVerdict> {
    let n = lattice.dim();
    if shape.n as usize != n {
        return Err(Error::DimensionMismatch { expected: n, actual: shape.n as usize });
    }
    let torus = QuotientTorus::new(lattice)?;
    let size = torus.size();
    if size > GEOMETRIC_TORUS_LIMIT {
        return Err(Error::TooLarge(format!("torus of {size} cosets exceeds guard")));
    }
    let mut owner: Vec<Option<Cell>> = vec![None; size as usize];
    let cells = std::iter::once(Cell::Origin).chain((0..n).flat_map(|index| {
        shape.multipliers().iter().map(move |multiplier| Cell::Arm { index, multiplier })
    }));
    let mut placed = 0u64;
    for cell in cells {
        let slot = torus.index(&cell.vector(n))? as usize;
        if let Some(first) = owner[slot] {
            return Ok(GeometricVerdict::Overlap { first, second: cell });
        }
        owner[slot] = Some(cell);
        placed += 1;
    }
    let uncovered = size - placed;
    Ok(if uncovered == 0 { GeometricVerdict::Tiling } else { GeometricVerdict::Packing { uncovered } })
}
