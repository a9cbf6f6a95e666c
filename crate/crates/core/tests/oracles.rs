//! Library results against deliberately naive reimplementations.

use std::collections::HashSet;

use qcross::arith::{gcd, is_prime};
use qcross::lattice::{lattice_from_splitting, period};
use qcross::search::{search_tilings, SearchOptions};
use qcross::splitting::delta_p;
use qcross::{FiniteAbelianGroup, GroupElement, MultiplierSet, Splitting};

fn multipliers(k_plus: i64, k_minus: i64) -> Vec<i64> {
    (-k_minus..=k_plus).filter(|&m| m != 0).collect()
}

/// All products listed, then compared pairwise.
fn naive_packing(q: u64, k_plus: i64, k_minus: i64, s: &[u64]) -> bool {
    let mut products = Vec::new();
    for &x in s {
        for m in multipliers(k_plus, k_minus) {
            products.push((m * x as i64).rem_euclid(q as i64));
        }
    }
    for i in 0..products.len() {
        if products[i] == 0 {
            return false;
        }
        for j in 0..i {
            if products[i] == products[j] {
                return false;
            }
        }
    }
    true
}

fn naive_tiling(q: u64, k_plus: i64, k_minus: i64, s: &[u64]) -> bool {
    naive_packing(q, k_plus, k_minus, s) && s.len() as u64 * (k_plus + k_minus) as u64 + 1 == q
}

fn subsets(universe: &[u64], size: usize, f: &mut impl FnMut(&[u64])) {
    fn go(u: &[u64], size: usize, start: usize, cur: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in start..u.len() {
            if u.len() - i < size - cur.len() {
                break;
            }
            cur.push(u[i]);
            go(u, size, i + 1, cur, f);
            cur.pop();
        }
    }
    go(universe, size, 0, &mut Vec::new(), f);
}

fn canonical(q: u64, s: &[u64]) -> Vec<u64> {
    (1..q)
        .filter(|&u| gcd(u, q) == 1)
        .map(|u| {
            let mut v: Vec<u64> = s.iter().map(|&x| x * u % q).collect();
            v.sort_unstable();
            v
        })
        .min()
        .unwrap()
}

#[test]
fn verify_packing_matches_pairwise() {
    for q in 2..=30u64 {
        for (kp, km) in [(2, 1), (3, 1), (3, 2), (4, 1)] {
            for a in 0..q {
                for b in a..q {
                    let s = [a, b];
                    let sp = Splitting::cyclic(q, kp, km, &[a as i64, b as i64]).unwrap();
                    assert_eq!(sp.is_packing(), naive_packing(q, kp as i64, km as i64, &s), "q={q} S={s:?}");
                }
            }
        }
    }
}

/// Subset enumeration over all `n`-subsets of `Z_q \ {0}`.
#[test]
fn search_matches_subset_enumeration() {
    for (kp, km, q) in [(2u64, 1u64, 16u64), (2, 1, 7), (2, 1, 13), (2, 1, 19), (3, 2, 11), (4, 1, 11), (3, 1, 17), (3, 1, 25)] {
        let d = kp + km;
        let n = ((q - 1) / d) as usize;
        let universe: Vec<u64> = (1..q).collect();
        let mut all = Vec::new();
        subsets(&universe, n, &mut |s| {
            if naive_tiling(q, kp as i64, km as i64, s) {
                all.push(s.to_vec());
            }
        });
        let classes: HashSet<Vec<u64>> = all.iter().map(|s| canonical(q, s)).collect();
        let mut classes: Vec<Vec<u64>> = classes.into_iter().collect();
        classes.sort();

        let full = search_tilings(kp, km, q, &SearchOptions { canonical_only: false, ..Default::default() }).unwrap();
        assert_eq!(full.raw_count as usize, all.len(), "({kp},{km},{q}) raw");
        assert_eq!(full.canonical_sets(), classes, "({kp},{km},{q}) classes");
        let fixed = search_tilings(kp, km, q, &SearchOptions::default()).unwrap();
        assert_eq!(fixed.canonical_sets(), classes);
        assert_eq!(fixed.orbit_total(), all.len());
        let with_one = all.iter().filter(|s| s.contains(&1)).count();
        assert_eq!(fixed.raw_count as usize, with_one);
    }
}

#[test]
fn two_one_sixteen_single_class() {
    let mut all = Vec::new();
    subsets(&(1..16).collect::<Vec<_>>(), 5, &mut |s| {
        if naive_tiling(16, 2, 1, s) {
            all.push(canonical(16, s));
        }
    });
    all.sort();
    all.dedup();
    assert_eq!(all, vec![vec![1, 3, 4, 5, 7]]);
}

fn closure(g: &FiniteAbelianGroup, gens: &[GroupElement]) -> HashSet<GroupElement> {
    let mut seen = HashSet::from([g.zero()]);
    let mut stack = vec![g.zero()];
    while let Some(x) = stack.pop() {
        for s in gens {
            let y = g.add(&x, s).unwrap();
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

fn syndrome_is_zero(g: &FiniteAbelianGroup, s: &[GroupElement], x: &[i64]) -> bool {
    let mut acc = g.zero();
    for (xi, si) in x.iter().zip(s) {
        acc = g.add(&acc, &g.scalar_mul(*xi, si).unwrap()).unwrap();
    }
    acc.is_zero()
}

fn box_points(n: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-b..=b).map(move |v| {
                    let mut p = p.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

fn check_kernel(sp: &Splitting, b: i64) {
    let g = sp.group();
    let k = lattice_from_splitting(sp).unwrap();
    let l = &k.lattice;
    assert!(l.is_lower_hermite());
    let sub = closure(g, sp.splitters()).len() as u64;
    assert_eq!(l.determinant().unwrap(), sub, "{}", sp.to_json_string());
    assert_eq!(k.index * sub, g.order());
    for row in l.basis() {
        assert!(syndrome_is_zero(g, sp.splitters(), row));
    }
    for x in box_points(sp.n(), b) {
        assert_eq!(l.contains(&x).unwrap(), syndrome_is_zero(g, sp.splitters(), &x), "x = {x:?}");
    }
}

#[test]
fn kernel_lattice_membership() {
    check_kernel(&Splitting::cyclic(17, 3, 2, &[1, 13]).unwrap(), 9);
    check_kernel(&Splitting::cyclic(8, 2, 1, &[2]).unwrap(), 12);
    check_kernel(&Splitting::cyclic(12, 2, 1, &[4, 6]).unwrap(), 9);
    check_kernel(&Splitting::cyclic(25, 3, 1, &[1, 5, 6]).unwrap(), 5);
    check_kernel(&Splitting::cyclic(30, 2, 1, &[6, 10, 15]).unwrap(), 5);
    let g = FiniteAbelianGroup::new(vec![4, 6]).unwrap();
    let s = vec![g.element(&[1, 2]).unwrap(), g.element(&[2, 3]).unwrap(), g.element(&[0, 4]).unwrap()];
    check_kernel(&Splitting::new(g, MultiplierSet::new(2, 1).unwrap(), s).unwrap(), 5);
    let g = FiniteAbelianGroup::homocyclic(5, 2).unwrap();
    let s = vec![g.element(&[0, 1]).unwrap(), g.element(&[1, 0]).unwrap(), g.element(&[1, 3]).unwrap()];
    check_kernel(&Splitting::new(g, MultiplierSet::new(3, 1).unwrap(), s).unwrap(), 5);
}

#[test]
fn period_is_least_multiple() {
    let g = FiniteAbelianGroup::new(vec![6, 10, 9]).unwrap();
    for idx in (0..g.order()).step_by(7) {
        let s = g.from_index(idx);
        let sp = Splitting::new(g.clone(), MultiplierSet::new(2, 1).unwrap(), vec![s.clone()]).unwrap();
        let t = (1..=g.order()).find(|&t| g.scalar_mul(t as i64, &s).unwrap().is_zero()).unwrap();
        assert_eq!(period(&sp), vec![t]);
    }
}

#[test]
fn delta_counts_directly() {
    for kp in 2..12u64 {
        for km in 1..kp {
            let m = MultiplierSet::new(kp, km).unwrap();
            for p in (2..30).filter(|&p| is_prime(p)) {
                let direct = multipliers(kp as i64, km as i64).iter().filter(|&&x| x % p as i64 == 0).count();
                assert_eq!(delta_p(m, p).unwrap(), direct);
            }
        }
    }
}
