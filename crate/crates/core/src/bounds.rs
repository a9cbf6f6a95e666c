//! Necessary conditions for quasi-cross lattice tilings, as predicates.
//!
//! Dimension rules take a shape `(k₊, k₋, n)`. Group rules take `(k₊, k₋)` and
//! the order `q` of a group that a perfect splitting would have to split; by
//! the cyclic reduction it is enough to think of `Z_q`.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::perfect_power_of;
use crate::error::{Error, Result};
use crate::splitting::{MultiplierSet, QuasiCrossShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `n(k₊+k₋) + 1 = q`, i.e. `(k₊+k₋) | q − 1`.
    Counting,
    /// `(2k₊(k₋+1) − k₋²)/(k₊+k₋) ≤ n`.
    Nonexist,
    /// `k₋ ≤ n − 1`.
    SmallArm,
    /// `k₊ ≤ 3n²/8` or `(3n²−4n+1)/4` when `k₋ > n/2 − 1`.
    KPlusMax,
    /// `gcd(k, q) ≠ 1` for `M = [−(k−1), k]*`.
    Gcd,
    /// `q = 2^{r(w+1)}` for `M = [−(2^w−1), 2^w]*`.
    PowerOfTwo,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Counting => "counting",
            Rule::Nonexist => "nonexist",
            Rule::SmallArm => "small-arm",
            Rule::KPlusMax => "kplus-max",
            Rule::Gcd => "gcd",
            Rule::PowerOfTwo => "power-of-two",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleOutcome {
    pub rule: Rule,
    pub ruled_out: bool,
    /// The evaluated quantities, e.g. `14/5 > 2`.
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    RuledOut,
    NotRuledOut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub k_plus: u64,
    pub k_minus: u64,
    pub n: Option<u64>,
    pub q: Option<u64>,
    /// Every rule that applied, whether or not it fired.
    pub rules: Vec<RuleOutcome>,
}

impl FeasibilityReport {
    pub fn verdict(&self) -> Verdict {
        if self.rules.iter().any(|r| r.ruled_out) {
            Verdict::RuledOut
        } else {
            Verdict::NotRuledOut
        }
    }

    pub fn is_ruled_out(&self) -> bool {
        self.verdict() == Verdict::RuledOut
    }

    pub fn triggered(&self) -> impl Iterator<Item = &RuleOutcome> {
        self.rules.iter().filter(|r| r.ruled_out)
    }
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fired: Vec<String> = self.triggered().map(|r| format!("{} ({})", r.rule, r.detail)).collect();
        if fired.is_empty() {
            write!(f, "not ruled out")
        } else {
            write!(f, "ruled out: {}", fired.join("; "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonexistBound {
    pub lhs: Ratio<u64>,
    pub ruled_out: bool,
}

fn require_plane(shape: &QuasiCrossShape) -> Result<()> {
    if shape.n < 2 {
        return Err(Error::Precondition("dimension bounds need n ≥ 2".into()));
    }
    Ok(())
}

/// No lattice tiling if `(2k₊(k₋+1) − k₋²)/(k₊+k₋) > n`.
pub fn bound_nonexist(shape: &QuasiCrossShape) -> Result<NonexistBound> {
    require_plane(shape)?;
    let (kp, km) = (shape.k_plus, shape.k_minus);
    let num = 2 * kp * (km + 1) - km * km;
    let lhs = Ratio::new(num, kp + km);
    Ok(NonexistBound { lhs, ruled_out: lhs > Ratio::from_integer(shape.n) })
}

/// No lattice tiling if `k₋ > n − 1`.
pub fn bound_smallarm(shape: &QuasiCrossShape) -> Result<bool> {
    require_plane(shape)?;
    Ok(shape.k_minus > shape.n - 1)
}

/// The exact maximum `3n²/8` (n even) or `(3n²−4n+1)/4` (n odd).
pub fn kplus_max_exact(n: u64) -> Result<Ratio<u64>> {
    if n < 3 {
        return Err(Error::Precondition("the k_plus bound needs n ≥ 3".into()));
    }
    Ok(if n.is_even() { Ratio::new(3 * n * n, 8) } else { Ratio::new(3 * n * n - 4 * n + 1, 4) })
}

/// Largest integer `k₊` allowed when `k₋ > n/2 − 1`.
pub fn bound_kplus_max(n: u64) -> Result<u64> {
    Ok(kplus_max_exact(n)?.floor().to_integer())
}

/// Whether the `k₊` bound is in force, i.e. `k₋ > n/2 − 1`.
pub fn kplus_max_applies(shape: &QuasiCrossShape) -> bool {
    shape.n >= 3 && 2 * shape.k_minus + 2 > shape.n
}

/// Group-order rules for a perfect splitting of a group of order `q`.
pub fn group_constraints(k_plus: u64, k_minus: u64, q: u64) -> Result<FeasibilityReport> {
    let m = MultiplierSet::new(k_plus, k_minus)?;
    if q < 2 {
        return Err(Error::Precondition("group order must be at least 2".into()));
    }
    let d = m.len() as u64;
    let mut rules = Vec::new();
    let divides = (q - 1) % d == 0;
    rules.push(RuleOutcome {
        rule: Rule::Counting,
        ruled_out: !divides,
        detail: format!("{d} {} {}", if divides { "|" } else { "∤" }, q - 1),
    });
    if k_minus + 1 == k_plus {
        let g = k_plus.gcd(&q);
        rules.push(RuleOutcome {
            rule: Rule::Gcd,
            ruled_out: g == 1,
            detail: format!("gcd({k_plus},{q}) = {g}"),
        });
        if k_plus.is_power_of_two() {
            let w = k_plus.trailing_zeros();
            let base = 1u64 << (w + 1);
            let ok = perfect_power_of(q, base).is_some();
            rules.push(RuleOutcome {
                rule: Rule::PowerOfTwo,
                ruled_out: !ok,
                detail: format!("{q} {} a power of {base}", if ok { "is" } else { "is not" }),
            });
        }
    }
    let n = divides.then_some((q - 1) / d);
    Ok(FeasibilityReport { k_plus, k_minus, n, q: Some(q), rules })
}

/// Dimension rules for a shape.
pub fn shape_constraints(shape: &QuasiCrossShape) -> Result<FeasibilityReport> {
    let mut rules = Vec::new();
    if shape.n >= 2 {
        let ne = bound_nonexist(shape)?;
        rules.push(RuleOutcome {
            rule: Rule::Nonexist,
            ruled_out: ne.ruled_out,
            detail: format!("{} {} {}", ne.lhs, if ne.ruled_out { ">" } else { "≤" }, shape.n),
        });
        let sa = bound_smallarm(shape)?;
        rules.push(RuleOutcome {
            rule: Rule::SmallArm,
            ruled_out: sa,
            detail: format!("k_minus = {} {} n − 1 = {}", shape.k_minus, if sa { ">" } else { "≤" }, shape.n - 1),
        });
    }
    if kplus_max_applies(shape) {
        let cap = bound_kplus_max(shape.n)?;
        let out = shape.k_plus > cap;
        rules.push(RuleOutcome {
            rule: Rule::KPlusMax,
            ruled_out: out,
            detail: format!("k_plus = {} {} {}", shape.k_plus, if out { ">" } else { "≤" }, cap),
        });
    }
    Ok(FeasibilityReport { k_plus: shape.k_plus, k_minus: shape.k_minus, n: Some(shape.n), q: None, rules })
}

/// All rules for a tiling of `Z_q` (equivalently any group of order `q`).
pub fn feasibility(k_plus: u64, k_minus: u64, q: u64) -> Result<FeasibilityReport> {
    let mut report = group_constraints(k_plus, k_minus, q)?;
    if let Some(n) = report.n {
        let shape = QuasiCrossShape::new(k_plus, k_minus, n)?;
        report.rules.extend(shape_constraints(&shape)?.rules);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(kp: u64, km: u64, n: u64) -> QuasiCrossShape {
        QuasiCrossShape::new(kp, km, n).unwrap()
    }

    #[test]
    fn nonexist_values() {
        let b = bound_nonexist(&shape(3, 2, 2)).unwrap();
        assert_eq!(b.lhs, Ratio::new(14, 5));
        assert!(b.ruled_out);
        let b = bound_nonexist(&shape(3, 1, 6)).unwrap();
        assert_eq!(b.lhs, Ratio::new(11, 4));
        assert!(!b.ruled_out);
        let b = bound_nonexist(&shape(2, 1, 5)).unwrap();
        assert_eq!(b.lhs, Ratio::new(7, 3));
        assert!(!b.ruled_out);
        assert!(bound_nonexist(&shape(2, 1, 1)).is_err());
    }

    /// Every planar shape is excluded.
    #[test]
    fn no_planar_tilings() {
        for kp in 2..60 {
            for km in 1..kp {
                assert!(bound_nonexist(&shape(kp, km, 2)).unwrap().ruled_out, "({kp},{km})");
            }
        }
    }

    #[test]
    fn smallarm_values() {
        assert!(bound_smallarm(&shape(5, 4, 4)).unwrap());
        let ne = bound_nonexist(&shape(5, 4, 4)).unwrap();
        assert_eq!(ne.lhs, Ratio::new(34, 9));
        assert!(!ne.ruled_out);
        assert!(!bound_smallarm(&shape(2, 1, 5)).unwrap());
        assert!(!bound_smallarm(&shape(10, 9, 10)).unwrap());
    }

    #[test]
    fn kplus_max_values() {
        assert_eq!(bound_kplus_max(4).unwrap(), 6);
        assert_eq!(bound_kplus_max(5).unwrap(), 14);
        assert_eq!(bound_kplus_max(3).unwrap(), 4);
        assert_eq!(kplus_max_exact(6).unwrap(), Ratio::new(27, 2));
        assert!(bound_kplus_max(2).is_err());
    }

    /// The closed form equals the maximum of `(k₋² + n k₋)/(2(k₋+1) − n)` over
    /// `n/2 − 1 < k₋ ≤ n − 1`.
    #[test]
    fn kplus_max_is_the_maximum() {
        for n in 3u64..40 {
            let best = (1..n)
                .filter(|&km| 2 * km + 2 > n)
                .map(|km| Ratio::new(km * km + n * km, 2 * (km + 1) - n))
                .max()
                .unwrap();
            assert_eq!(best, kplus_max_exact(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn group_rule_examples() {
        let r = group_constraints(2, 1, 10).unwrap();
        assert!(r.is_ruled_out());
        let fired: Vec<Rule> = r.triggered().map(|o| o.rule).collect();
        assert_eq!(fired, vec![Rule::PowerOfTwo]);
        assert!(!group_constraints(2, 1, 16).unwrap().is_ruled_out());
        let r = group_constraints(3, 2, 11).unwrap();
        assert_eq!(r.triggered().map(|o| o.rule).collect::<Vec<_>>(), vec![Rule::Gcd]);
        let r = group_constraints(3, 1, 10).unwrap();
        assert_eq!(r.triggered().map(|o| o.rule).collect::<Vec<_>>(), vec![Rule::Counting]);
    }

    #[test]
    fn two_one_orders() {
        let allowed: Vec<u64> = (2..=100)
            .filter(|&q| !group_constraints(2, 1, q).unwrap().is_ruled_out())
            .collect();
        assert_eq!(allowed, vec![4, 16, 64]);
    }

    #[test]
    fn report_display() {
        let r = feasibility(3, 2, 11).unwrap();
        assert_eq!(r.n, Some(2));
        let text = r.to_string();
        assert!(text.contains("nonexist (14/5 > 2)"), "{text}");
        assert!(text.contains("gcd"), "{text}");
    }
}
