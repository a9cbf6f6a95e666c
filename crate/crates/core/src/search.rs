//! Exhaustive exact-cover search for perfect splittings of `Z_q`.
//!
//! A splitter `s` contributes the block `B(s) = {m·s : m ∈ M}`. A splitter set
//! is a tiling exactly when its blocks partition `Z_q \ {0}`, so the search
//! repeatedly takes the smallest uncovered element `x` and tries every `s`
//! whose block contains `x` and avoids everything already covered. Each set
//! is reached along exactly one path.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::Result;
use crate::splitting::{MultiplierSet, Splitting};

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Keep going after the first tiling.
    pub find_all: bool,
    /// Fix `1 ∈ S`. Every tiling has a unit splitter (something covers 1), so
    /// every unit-scaling orbit still has a representative.
    pub canonical_only: bool,
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { find_all: true, canonical_only: true, max_nodes: None, max_time: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub k_plus: u64,
    pub k_minus: u64,
    pub q: u64,
    /// `None` when `(k₊+k₋) ∤ q−1`.
    pub n: Option<u64>,
    /// One representative per unit-scaling orbit, each the orbit's
    /// lexicographic minimum, sorted.
    #[serde(skip)]
    pub tilings: Vec<Splitting>,
    pub orbit_sizes: Vec<usize>,
    /// Splitter sets visited by the search (all of them, or only those
    /// containing 1 under `canonical_only`).
    pub raw_count: u64,
    pub nodes: u64,
    /// False when a node or time limit stopped the search.
    pub complete: bool,
    #[serde(serialize_with = "millis")]
    pub elapsed: Duration,
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        !self.tilings.is_empty()
    }

    /// Canonical splitter lists as plain integers.
    pub fn canonical_sets(&self) -> Vec<Vec<u64>> {
        self.tilings.iter().map(|t| t.cyclic_splitters().expect("cyclic")).collect()
    }

    /// Total number of tilings, counting every member of every orbit.
    pub fn orbit_total(&self) -> usize {
        self.orbit_sizes.iter().sum()
    }
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: u64) -> Self {
        Bits(vec![0; len.div_ceil(64) as usize])
    }
    fn set(&mut self, i: u64) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }
    fn disjoint(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == 0)
    }
    fn or(&mut self, other: &Bits) {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a |= b);
    }
    fn xor(&mut self, other: &Bits) {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a ^= b);
    }
    /// Smallest clear bit below `len`.
    fn first_clear(&self, len: u64) -> Option<u64> {
        for (w, &word) in self.0.iter().enumerate() {
            if word != u64::MAX {
                let i = w as u64 * 64 + word.trailing_ones() as u64;
                return (i < len).then_some(i);
            }
        }
        None
    }
}

struct Searcher<'a> {
    q: u64,
    blocks: Vec<Option<Bits>>,
    covers: Vec<Vec<u64>>,
    opts: &'a SearchOptions,
    start: Instant,
    nodes: u64,
    aborted: bool,
    found: Vec<Vec<u64>>,
}

impl Searcher<'_> {
    fn out_of_budget(&mut self) -> bool {
        if let Some(max) = self.opts.max_nodes {
            if self.nodes >= max {
                self.aborted = true;
            }
        }
        // Clock reads are cheap but not free.
        if self.nodes % 4096 == 0 {
            if let Some(limit) = self.opts.max_time {
                if self.start.elapsed() >= limit {
                    self.aborted = true;
                }
            }
        }
        self.aborted
    }

    fn done(&self) -> bool {
        self.aborted || (!self.opts.find_all && !self.found.is_empty())
    }

    fn run(&mut self, covered: &mut Bits, chosen: &mut Vec<u64>) {
        self.nodes += 1;
        if self.out_of_budget() {
            return;
        }
        let Some(x) = covered.first_clear(self.q) else {
            let mut set = chosen.clone();
            set.sort_unstable();
            self.found.push(set);
            return;
        };
        let root_fixed = chosen.is_empty() && self.opts.canonical_only;
        for k in 0..self.covers[x as usize].len() {
            let s = self.covers[x as usize][k];
            if root_fixed && s != 1 {
                continue;
            }
            let block = self.blocks[s as usize].as_ref().expect("valid block");
            if !covered.disjoint(block) {
                continue;
            }
            let block = block.clone();
            covered.or(&block);
            chosen.push(s);
            self.run(covered, chosen);
            chosen.pop();
            covered.xor(&block);
            if self.done() {
                return;
            }
        }
    }
}

/// Searches `Z_q` for splitter sets `S` with `M·S` a partition of the nonzero
/// elements.
pub fn search_tilings(k_plus: u64, k_minus: u64, q: u64, opts: &SearchOptions) -> Result<SearchOutcome> {
    let m = MultiplierSet::new(k_plus, k_minus)?;
    let start = Instant::now();
    let d = m.len() as u64;
    let mut outcome = SearchOutcome {
        k_plus,
        k_minus,
        q,
        n: None,
        tilings: Vec::new(),
        orbit_sizes: Vec::new(),
        raw_count: 0,
        nodes: 0,
        complete: true,
        elapsed: Duration::ZERO,
    };
    if q < 2 || (q - 1) % d != 0 {
        outcome.elapsed = start.elapsed();
        return Ok(outcome);
    }
    outcome.n = Some((q - 1) / d);

    let mut blocks: Vec<Option<Bits>> = vec![None; q as usize];
    let mut covers: Vec<Vec<u64>> = vec![Vec::new(); q as usize];
    for s in 1..q {
        let mut bits = Bits::new(q);
        let mut members = Vec::with_capacity(d as usize);
        let mut valid = true;
        for mult in m.iter() {
            let v = (mult as i128 * s as i128).rem_euclid(q as i128) as u64;
            if v == 0 || members.contains(&v) {
                valid = false;
                break;
            }
            members.push(v);
            bits.set(v);
        }
        if valid {
            for v in members {
                covers[v as usize].push(s);
            }
            blocks[s as usize] = Some(bits);
        }
    }

    let mut searcher = Searcher {
        q,
        blocks,
        covers,
        opts,
        start,
        nodes: 0,
        aborted: false,
        found: Vec::new(),
    };
    let mut covered = Bits::new(q);
    covered.set(0);
    searcher.run(&mut covered, &mut Vec::new());

    outcome.nodes = searcher.nodes;
    outcome.complete = !searcher.aborted;
    outcome.raw_count = searcher.found.len() as u64;

    let mut canon: Vec<(Vec<u64>, Splitting)> = Vec::new();
    for set in &searcher.found {
        let values: Vec<i64> = set.iter().map(|&s| s as i64).collect();
        let c = Splitting::cyclic(q, k_plus, k_minus, &values)?.orbit_canonical()?;
        let key = c.cyclic_splitters().expect("cyclic");
        if !canon.iter().any(|(k, _)| *k == key) {
            canon.push((key, c));
        }
    }
    canon.sort_by(|a, b| a.0.cmp(&b.0));
    for (_, c) in canon {
        outcome.orbit_sizes.push(c.orbit_size()?);
        outcome.tilings.push(c);
    }
    outcome.elapsed = start.elapsed();
    Ok(outcome)
}
