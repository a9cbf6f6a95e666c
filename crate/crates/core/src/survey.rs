//! Survey of all small cyclic instances `(k₊, k₋, q)`.
//!
//! Every instance with `0 < k₋ < k₊ ≤ k_max`, `q ≤ q_max` and
//! `n = (q−1)/(k₊+k₋) ≥ 2` is searched exhaustively (or skipped when a bound
//! rules it out and pruning is on). Found tilings are re-verified
//! algebraically and geometrically, and the table is compared against both
//! the bounds and the known construction families.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Duration;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::bounds::{feasibility, Rule};
use crate::error::{Error, Result};
use crate::lattice::{geometric_check, GeometricVerdict, GEOMETRIC_TORUS_LIMIT, GEOMETRIC_VOLUME_LIMIT};
use crate::search::{search_tilings, SearchOptions};
use crate::splitting::{Singularity, Splitting};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Instance {
    pub k_plus: u64,
    pub k_minus: u64,
    pub q: u64,
    pub n: u64,
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.k_plus, self.k_minus, self.q)
    }
}

fn enumerate(k_max: u64, q_max: u64, keep: impl Fn(u64) -> bool) -> Vec<Instance> {
    let mut out = Vec::new();
    for k_plus in 2..=k_max {
        for k_minus in 1..k_plus {
            let d = k_plus + k_minus;
            for q in 2..=q_max {
                if (q - 1) % d == 0 && keep((q - 1) / d) {
                    out.push(Instance { k_plus, k_minus, q, n: (q - 1) / d });
                }
            }
        }
    }
    out
}

/// Instances with `n ≥ 2`, ordered by `(k₊, k₋, q)`.
pub fn instances(k_max: u64, q_max: u64) -> Vec<Instance> {
    enumerate(k_max, q_max, |n| n >= 2)
}

/// The `n = 1` instances `q = k₊+k₋+1`, which always tile with `S = {1}`.
pub fn trivial_instances(k_max: u64, q_max: u64) -> Vec<Instance> {
    enumerate(k_max, q_max, |n| n == 1)
}

/// Instances covered by the cyclic construction (`k₊+k₋+1 = p` prime,
/// `q = p^ℓ`) and the `(2,1)` family `q = 4^ℓ`, restricted to `n ≥ 2`.
pub fn predicted(k_max: u64, q_max: u64) -> BTreeSet<(u64, u64, u64)> {
    let mut out = BTreeSet::new();
    for inst in instances(k_max, q_max) {
        let p = inst.k_plus + inst.k_minus + 1;
        let base = if is_prime(p) {
            Some(p)
        } else if (inst.k_plus, inst.k_minus) == (2, 1) {
            Some(4)
        } else {
            None
        };
        if let Some(b) = base {
            let mut v = b;
            while v < inst.q {
                v *= b;
            }
            if v == inst.q {
                out.insert((inst.k_plus, inst.k_minus, inst.q));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Complete,
    Incomplete,
    Pruned,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub instance: Instance,
    pub status: Status,
    pub ruled_out_by: Vec<Rule>,
    pub tilings: Vec<Vec<u64>>,
    pub orbit_sizes: Vec<usize>,
    pub nodes: u64,
    pub millis: u64,
}

#[derive(Debug, Clone)]
pub struct SurveyConfig {
    pub k_max: u64,
    pub q_max: u64,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    /// Skip the search when a bound rules an instance out.
    pub prune: bool,
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
    /// JSON-lines progress log, one record per finished instance.
    pub log: Option<PathBuf>,
    /// Reuse finished records from `log` instead of searching again.
    pub resume: bool,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig {
            k_max: 10,
            q_max: 100,
            jobs: None,
            prune: false,
            max_nodes: None,
            max_time: Some(Duration::from_secs(600)),
            log: None,
            resume: false,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CrossChecks {
    /// Search found a tiling that some bound rules out.
    pub bound_violations: Vec<String>,
    /// A found tiling failed re-verification.
    pub verification_failures: Vec<String>,
    /// A found tiling contradicts the delta lemma or the gcd condition.
    pub rule_failures: Vec<String>,
    /// Predicted instances without a tiling.
    pub missing: Vec<Instance>,
    /// Tilings outside the predicted set.
    pub unexpected: Vec<Instance>,
    pub incomplete: Vec<Instance>,
    /// Found tilings whose geometric check was skipped by the size guard.
    pub geometric_skipped: usize,
}

impl CrossChecks {
    pub fn all_clear(&self) -> bool {
        self.bound_violations.is_empty()
            && self.verification_failures.is_empty()
            && self.rule_failures.is_empty()
            && self.missing.is_empty()
            && self.unexpected.is_empty()
            && self.incomplete.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyReport {
    pub k_max: u64,
    pub q_max: u64,
    pub results: Vec<InstanceResult>,
    pub trivial: Vec<InstanceResult>,
    pub checks: CrossChecks,
}

impl SurveyReport {
    /// Instances where a tiling was found, ordered.
    pub fn found(&self) -> BTreeSet<(u64, u64, u64)> {
        self.results
            .iter()
            .filter(|r| !r.tilings.is_empty())
            .map(|r| (r.instance.k_plus, r.instance.k_minus, r.instance.q))
            .collect()
    }

    pub fn rows(&self) -> Vec<SurveyRow> {
        self.results.iter().map(SurveyRow::from).collect()
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let searched = self.results.iter().filter(|r| r.status != Status::Pruned).count();
        let pruned = self.results.len() - searched;
        let nodes: u64 = self.results.iter().map(|r| r.nodes).sum();
        let _ = writeln!(
            s,
            "survey k_plus <= {}, q <= {}: {} instances with n >= 2 ({} searched, {} pruned, {} nodes)",
            self.k_max,
            self.q_max,
            self.results.len(),
            searched,
            pruned,
            nodes
        );
        let _ = writeln!(s, "tilings found:");
        for r in self.results.iter().filter(|r| !r.tilings.is_empty()) {
            let mut sets: Vec<String> = r.tilings.iter().take(3).map(|t| format!("{t:?}")).collect();
            if r.tilings.len() > 3 {
                sets.push("...".into());
            }
            let _ = writeln!(
                s,
                "  {} n={}: {} class(es) {}",
                r.instance,
                r.instance.n,
                r.tilings.len(),
                sets.join(" ")
            );
        }
        let trivial_ok = self.trivial.iter().filter(|r| !r.tilings.is_empty()).count();
        let _ = writeln!(s, "n = 1 instances: {} of {} tile", trivial_ok, self.trivial.len());
        let c = &self.checks;
        let _ = writeln!(s, "bound violations: {}", c.bound_violations.len());
        let _ = writeln!(s, "verification failures: {}", c.verification_failures.len());
        let _ = writeln!(s, "rule failures: {}", c.rule_failures.len());
        let list = |v: &[Instance]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "missing predicted: {} {}", c.missing.len(), list(&c.missing));
        let _ = writeln!(s, "unexpected: {} {}", c.unexpected.len(), list(&c.unexpected));
        let _ = writeln!(s, "incomplete: {} {}", c.incomplete.len(), list(&c.incomplete));
        let _ = write!(s, "{}", if c.all_clear() { "all checks passed" } else { "CHECKS FAILED" });
        s
    }
}

fn run_instance(inst: Instance, cfg: &SurveyConfig) -> Result<InstanceResult> {
    let report = feasibility(inst.k_plus, inst.k_minus, inst.q)?;
    let ruled_out_by: Vec<Rule> = report.triggered().map(|r| r.rule).collect();
    if cfg.prune && !ruled_out_by.is_empty() {
        return Ok(InstanceResult {
            instance: inst,
            status: Status::Pruned,
            ruled_out_by,
            tilings: Vec::new(),
            orbit_sizes: Vec::new(),
            nodes: 0,
            millis: 0,
        });
    }
    let opts = SearchOptions {
        find_all: true,
        canonical_only: true,
        max_nodes: cfg.max_nodes,
        max_time: cfg.max_time,
    };
    let out = search_tilings(inst.k_plus, inst.k_minus, inst.q, &opts)?;
    Ok(InstanceResult {
        instance: inst,
        status: if out.complete { Status::Complete } else { Status::Incomplete },
        ruled_out_by,
        tilings: out.canonical_sets(),
        orbit_sizes: out.orbit_sizes.clone(),
        nodes: out.nodes,
        millis: out.elapsed.as_millis() as u64,
    })
}

/// Reads finished records from a progress log. Later records win.
pub fn read_log(path: &Path) -> Result<HashMap<Instance, InstanceResult>> {
    let file = File::open(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let lines: Vec<String> = BufReader::new(file)
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = HashMap::new();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<InstanceResult>(line) {
            Ok(r) => {
                out.insert(r.instance, r);
            }
            // A partially written last line from an interrupted run.
            Err(_) if i + 1 == lines.len() => {}
            Err(e) => return Err(Error::Parse(format!("{}:{}: {e}", path.display(), i + 1))),
        }
    }
    Ok(out)
}

fn reusable(r: &InstanceResult, cfg: &SurveyConfig) -> bool {
    match r.status {
        Status::Complete => true,
        Status::Pruned => cfg.prune,
        Status::Incomplete => false,
    }
}

fn verify_found(inst: Instance, set: &[u64], checks: &mut CrossChecks) -> Result<()> {
    let values: Vec<i64> = set.iter().map(|&s| s as i64).collect();
    let sp = Splitting::cyclic(inst.q, inst.k_plus, inst.k_minus, &values)?;
    let tag = format!("{inst} {set:?}");
    if let Err(w) = sp.verify_packing() {
        checks.verification_failures.push(format!("{tag}: not a packing, {w}"));
        return Ok(());
    }
    if !sp.is_tiling()? {
        checks.verification_failures.push(format!("{tag}: packing but not a tiling"));
    }
    let volume = sp.shape().volume();
    if inst.q <= GEOMETRIC_TORUS_LIMIT && volume <= GEOMETRIC_VOLUME_LIMIT {
        match geometric_check(&sp)? {
            GeometricVerdict::Tiling => {}
            other => checks.verification_failures.push(format!("{tag}: geometric verdict {other:?}")),
        }
    } else {
        checks.geometric_skipped += 1;
    }
    if sp.classify_singularity() == Singularity::PurelySingular && !sp.check_delta_lemma()? {
        checks.rule_failures.push(format!("{tag}: delta lemma fails"));
    }
    if inst.k_minus + 1 == inst.k_plus && inst.k_plus.gcd(&inst.q) == 1 {
        checks.rule_failures.push(format!("{tag}: gcd(k_plus, q) = 1"));
    }
    Ok(())
}

fn cross_check(k_max: u64, q_max: u64, results: &[InstanceResult], trivial: &[InstanceResult]) -> Result<CrossChecks> {
    let mut checks = CrossChecks::default();
    for r in results.iter().chain(trivial) {
        if r.status == Status::Incomplete {
            checks.incomplete.push(r.instance);
        }
        if !r.tilings.is_empty() && !r.ruled_out_by.is_empty() {
            let rules: Vec<String> = r.ruled_out_by.iter().map(|x| x.to_string()).collect();
            checks
                .bound_violations
                .push(format!("{} found a tiling but {} rules it out", r.instance, rules.join(", ")));
        }
        for set in &r.tilings {
            verify_found(r.instance, set, &mut checks)?;
        }
    }
    for r in trivial {
        if r.status == Status::Complete && r.tilings.is_empty() {
            checks.missing.push(r.instance);
        }
    }
    let expected = predicted(k_max, q_max);
    for r in results {
        let key = (r.instance.k_plus, r.instance.k_minus, r.instance.q);
        match (expected.contains(&key), r.tilings.is_empty()) {
            (true, true) => checks.missing.push(r.instance),
            (false, false) => checks.unexpected.push(r.instance),
            _ => {}
        }
    }
    Ok(checks)
}

/// Runs the survey. Instance-level parallelism, deterministic output.
pub fn survey(cfg: &SurveyConfig) -> Result<SurveyReport> {
    let todo = instances(cfg.k_max, cfg.q_max);
    let todo_trivial = trivial_instances(cfg.k_max, cfg.q_max);
    let previous = match (&cfg.log, cfg.resume) {
        (Some(path), true) if path.exists() => read_log(path)?,
        _ => HashMap::new(),
    };
    let log = match &cfg.log {
        Some(path) => {
            let mut opts = OpenOptions::new();
            opts.create(true);
            if cfg.resume {
                opts.append(true);
            } else {
                opts.write(true).truncate(true);
            }
            Some(Mutex::new(opts.open(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?))
        }
        None => None,
    };

    let work = |inst: &Instance| -> Result<InstanceResult> {
        if let Some(r) = previous.get(inst).filter(|r| reusable(r, cfg)) {
            return Ok(r.clone());
        }
        let r = run_instance(*inst, cfg)?;
        if let Some(log) = &log {
            let line = serde_json::to_string(&r).map_err(|e| Error::Internal(e.to_string()))?;
            let mut f = log.lock().map_err(|_| Error::Internal("log lock poisoned".into()))?;
            writeln!(f, "{line}").map_err(|e| Error::Internal(e.to_string()))?;
            f.flush().map_err(|e| Error::Internal(e.to_string()))?;
        }
        Ok(r)
    };

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| Error::Internal(e.to_string()))?;
    // Expensive instances (small blocks, large q) first, so they do not
    // straggle at the end.
    let mut order: Vec<Instance> = todo.clone();
    order.sort_by_key(|i| (i.k_plus + i.k_minus, std::cmp::Reverse(i.q)));
    let (mut results, trivial) = pool.install(|| -> Result<_> {
        let r: Vec<InstanceResult> = order.par_iter().map(work).collect::<Result<_>>()?;
        let t: Vec<InstanceResult> = todo_trivial.par_iter().map(work).collect::<Result<_>>()?;
        Ok((r, t))
    })?;
    results.sort_by_key(|r| r.instance);
    let checks = cross_check(cfg.k_max, cfg.q_max, &results, &trivial)?;
    Ok(SurveyReport { k_max: cfg.k_max, q_max: cfg.q_max, results, trivial, checks })
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub k_plus: u64,
    pub k_minus: u64,
    pub q: u64,
    pub n: u64,
    pub tilings_found: usize,
    /// JSON array of canonical splitter lists, e.g. `[[1,3,4,5,7]]`.
    pub canonical_splitter_json: String,
}

impl From<&InstanceResult> for SurveyRow {
    fn from(r: &InstanceResult) -> Self {
        SurveyRow {
            k_plus: r.instance.k_plus,
            k_minus: r.instance.k_minus,
            q: r.instance.q,
            n: r.instance.n,
            tilings_found: r.tilings.len(),
            canonical_splitter_json: serde_json::to_string(&r.tilings).expect("plain integers"),
        }
    }
}

impl SurveyRow {
    pub fn splitter_sets(&self) -> Result<Vec<Vec<u64>>> {
        serde_json::from_str(&self.canonical_splitter_json).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn write_csv<W: Write>(rows: &[SurveyRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Internal(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Internal(e.to_string()))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SurveyRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_counts() {
        let all = instances(3, 20);
        assert!(all.iter().all(|i| i.n >= 2 && (i.q - 1) % (i.k_plus + i.k_minus) == 0));
        assert!(all.contains(&Instance { k_plus: 2, k_minus: 1, q: 16, n: 5 }));
        assert_eq!(trivial_instances(3, 20).len(), 3);
    }

    #[test]
    fn predicted_small() {
        let p = predicted(10, 100);
        let expected: BTreeSet<_> = [(2, 1, 16), (2, 1, 64), (3, 1, 25), (4, 2, 49), (5, 1, 49)].into_iter().collect();
        assert_eq!(p, expected);
    }

    #[test]
    fn small_survey() {
        let cfg = SurveyConfig { k_max: 3, q_max: 30, jobs: Some(2), ..Default::default() };
        let report = survey(&cfg).unwrap();
        assert!(report.checks.all_clear(), "{}", report.summary());
        let found: Vec<_> = report.found().into_iter().collect();
        assert_eq!(found, vec![(2, 1, 16), (3, 1, 25)]);
    }

    #[test]
    fn pruning_skips_ruled_out() {
        let cfg = SurveyConfig { k_max: 3, q_max: 30, prune: true, ..Default::default() };
        let report = survey(&cfg).unwrap();
        let r = report.results.iter().find(|r| r.instance.q == 7 && r.instance.k_plus == 2).unwrap();
        assert_eq!(r.status, Status::Pruned);
        assert!(report.checks.all_clear());
    }

    #[test]
    fn csv_round_trip() {
        let cfg = SurveyConfig { k_max: 3, q_max: 30, ..Default::default() };
        let rows = survey(&cfg).unwrap().rows();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("k_plus,k_minus,q,n,tilings_found,canonical_splitter_json\n"));
        assert_eq!(read_csv(&buf[..]).unwrap(), rows);
        let row = rows.iter().find(|r| r.q == 16).unwrap();
        assert_eq!(row.splitter_sets().unwrap(), vec![vec![1, 3, 4, 5, 7]]);
    }
}
