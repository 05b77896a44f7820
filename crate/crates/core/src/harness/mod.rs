//! Restart ensembles, hybrid seeding pipelines and result persistence.

mod exhaustive;
mod table;

use std::fmt;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::flip::FitnessSpec;
use crate::generators::{legendre, mseq, LfsrSpec};
use crate::rotation::{rotate_left, scan_rotations, scan_rotations_parallel};
use crate::search::{shc_run, Acceptance, SearchConfig, SearchOutcome, StopCriteria, TrackOptions, RNG_ID};
use crate::seqcore::{encode_hex, psl, BinarySequence};

pub use exhaustive::{exhaustive_psl, exhaustive_psl_with_cap, DEFAULT_EXHAUSTIVE_CAP};
pub use table::{
    known_entries, known_psl, near_optimal_entries, optimal_entries, verify_entries, verify_known_table, EntryCheck,
    KnownOptimalEntry, TableReport, NEAR_OPTIMAL, OPTIMAL,
};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "PSL_THREADS";

pub fn default_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&k| k > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|k| k.get()).unwrap_or(1))
}

/// Seed of restart `index`: splitmix64 of `master + index`.
pub fn restart_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Where the starting sequence of a run came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeedProvenance {
    Random,
    /// Caller supplied the start sequence directly.
    Provided,
    Mseq {
        poly: u64,
        state: u64,
        rotation: usize,
    },
    Legendre {
        p: u64,
        rotation: usize,
    },
}

impl fmt::Display for SeedProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Random => f.write_str("random"),
            Self::Provided => f.write_str("provided"),
            Self::Mseq { poly, state, rotation } => write!(f, "mseq:<{poly:#x},{state:#x},{rotation}>"),
            Self::Legendre { p, rotation } => write!(f, "legendre:<{p},{rotation}>"),
        }
    }
}

impl FromStr for SeedProvenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unrecognised seed provenance {s:?}"));
        let inner = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('<'))
                .and_then(|r| r.strip_suffix('>'))
                .map(|r| r.split(',').map(str::trim).collect::<Vec<_>>())
        };
        let hex = |v: &str| u64::from_str_radix(v.trim_start_matches("0x"), 16).map_err(|_| bad());
        match s {
            "random" => return Ok(Self::Random),
            "provided" => return Ok(Self::Provided),
            _ => {}
        }
        if let Some(parts) = inner("mseq:") {
            if let [poly, state, rotation] = parts[..] {
                return Ok(Self::Mseq {
                    poly: hex(poly)?,
                    state: hex(state)?,
                    rotation: rotation.parse().map_err(|_| bad())?,
                });
            }
        }
        if let Some(parts) = inner("legendre:") {
            if let [p, rotation] = parts[..] {
                return Ok(Self::Legendre {
                    p: p.parse().map_err(|_| bad())?,
                    rotation: rotation.parse().map_err(|_| bad())?,
                });
            }
        }
        Err(bad())
    }
}

impl Serialize for SeedProvenance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SeedProvenance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub fitness: FitnessSpec,
    pub restarts: usize,
    pub threshold: u64,
    pub master_seed: u64,
    /// Shared start sequence for every restart (hybrid mode).
    pub initial: Option<BinarySequence>,
    pub provenance: SeedProvenance,
    pub threads: usize,
    pub stop: StopCriteria,
    pub acceptance: Acceptance,
}

impl ExperimentConfig {
    pub fn new(n: usize, fitness: FitnessSpec, restarts: usize, threshold: u64, master_seed: u64) -> Self {
        Self {
            n,
            fitness,
            restarts,
            threshold,
            master_seed,
            initial: None,
            provenance: SeedProvenance::Random,
            threads: 1,
            stop: StopCriteria::default(),
            acceptance: Acceptance::default(),
        }
    }

    pub fn with_acceptance(mut self, acceptance: Acceptance) -> Self {
        self.acceptance = acceptance;
        self
    }

    pub fn with_initial(mut self, initial: BinarySequence, provenance: SeedProvenance) -> Self {
        self.n = initial.len();
        self.initial = Some(initial);
        self.provenance = provenance;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_stop(mut self, stop: StopCriteria) -> Self {
        self.stop = stop;
        self
    }

    fn search_config(&self, restart: usize) -> SearchConfig {
        SearchConfig {
            n: self.n,
            threshold: self.threshold,
            fitness: self.fitness,
            seed: restart_seed(self.master_seed, restart as u64),
            initial: self.initial.clone(),
            acceptance: self.acceptance,
            track: TrackOptions { trace: false, stop: self.stop },
        }
    }
}

/// One experiment, as written to the results file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    /// Unix seconds when the record was produced.
    pub timestamp: u64,
    pub n: usize,
    pub alpha: u32,
    pub restarts: usize,
    pub threshold: u64,
    pub master_seed: u64,
    pub rng_id: String,
    /// `V*`: smallest per-restart best PSL.
    pub best_psl: u32,
    pub best_hex: String,
    /// `V^∇`: arithmetic mean of the per-restart best PSLs.
    pub v_nabla: f64,
    pub per_restart_psl: Vec<u32>,
    pub iterations: Vec<u64>,
    pub seed_provenance: SeedProvenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unrotated_psl: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation_psl: Option<u32>,
    pub elapsed_seconds: f64,
}

impl ExperimentRecord {
    pub fn v_star(&self) -> u32 {
        self.best_psl
    }

    pub fn best_sequence(&self) -> Result<BinarySequence> {
        crate::seqcore::decode_hex(&self.best_hex, self.n)
    }

    /// Record with time-dependent fields zeroed, for replay comparisons.
    pub fn without_timing(&self) -> Self {
        Self { timestamp: 0, elapsed_seconds: 0.0, ..self.clone() }
    }
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn run_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(job))
}

/// Runs `restarts` independent searches and aggregates them. Restart `i`
/// uses [`restart_seed`]`(master_seed, i)`; results are keyed by restart
/// index so the record does not depend on scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let (record, _) = run_experiment_with_outcomes(config)?;
    Ok(record)
}

pub fn run_experiment_with_outcomes(config: &ExperimentConfig) -> Result<(ExperimentRecord, Vec<SearchOutcome>)> {
    if config.restarts == 0 {
        return Err(Error::Config("restarts must be at least 1".into()));
    }
    let configs: Vec<SearchConfig> = (0..config.restarts).map(|i| config.search_config(i)).collect();
    for c in &configs {
        c.validate()?;
    }
    let started = Instant::now();
    let outcomes: Vec<SearchOutcome> =
        run_pool(config.threads, || configs.par_iter().map(shc_run).collect::<Result<Vec<_>>>())??;

    let per_restart_psl: Vec<u32> = outcomes.iter().map(|o| o.best_by_psl.value).collect();
    let (best_index, best_psl) =
        per_restart_psl.iter().copied().enumerate().min_by_key(|&(i, p)| (p, i)).expect("at least one restart");
    let v_nabla = per_restart_psl.iter().map(|&p| p as f64).sum::<f64>() / config.restarts as f64;

    let record = ExperimentRecord {
        timestamp: unix_now(),
        n: config.n,
        alpha: config.fitness.alpha(),
        restarts: config.restarts,
        threshold: config.threshold,
        master_seed: config.master_seed,
        rng_id: RNG_ID.to_string(),
        best_psl,
        best_hex: encode_hex(&outcomes[best_index].best_by_psl.sequence),
        v_nabla,
        per_restart_psl,
        iterations: outcomes.iter().map(|o| o.iterations_used).collect(),
        seed_provenance: config.provenance.clone(),
        unrotated_psl: None,
        rotation_psl: None,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    };
    Ok((record, outcomes))
}

/// Search settings shared by the hybrid pipelines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HybridConfig {
    pub fitness: FitnessSpec,
    pub threshold: u64,
    pub restarts: usize,
    pub master_seed: u64,
    pub threads: usize,
    pub stop: StopCriteria,
    pub acceptance: Acceptance,
}

impl HybridConfig {
    pub fn new(fitness: FitnessSpec, threshold: u64, master_seed: u64) -> Self {
        Self {
            fitness,
            threshold,
            restarts: 1,
            master_seed,
            threads: 1,
            stop: StopCriteria::default(),
            acceptance: Acceptance::default(),
        }
    }
}

fn seeded_by_best_rotation(
    base: BinarySequence,
    hybrid: &HybridConfig,
    provenance: impl FnOnce(usize) -> SeedProvenance,
) -> Result<ExperimentRecord> {
    let started = Instant::now();
    let unrotated = psl(&base);
    let scan = if hybrid.threads > 1 {
        run_pool(hybrid.threads, || scan_rotations_parallel(&base, hybrid.threads))?
    } else {
        scan_rotations(&base)
    };
    let start = rotate_left(&base, scan.rho_max);
    let config = ExperimentConfig {
        n: start.len(),
        fitness: hybrid.fitness,
        restarts: hybrid.restarts,
        threshold: hybrid.threshold,
        master_seed: hybrid.master_seed,
        initial: Some(start),
        provenance: provenance(scan.rho_max),
        threads: hybrid.threads,
        stop: hybrid.stop,
        acceptance: hybrid.acceptance,
    };
    let mut record = run_experiment(&config)?;
    record.unrotated_psl = Some(unrotated);
    record.rotation_psl = Some(scan.min_psl);
    record.elapsed_seconds = started.elapsed().as_secs_f64();
    Ok(record)
}

/// m-sequence, then its best rotation, then the search seeded with it.
pub fn hybrid_mseq(spec: &LfsrSpec, hybrid: &HybridConfig) -> Result<ExperimentRecord> {
    let base = mseq(spec)?;
    let (poly, state) = (spec.poly(), spec.initial_state());
    seeded_by_best_rotation(base, hybrid, |rotation| SeedProvenance::Mseq { poly, state, rotation })
}

/// Legendre sequence, then its best rotation, then the search seeded with it.
pub fn hybrid_legendre(p: u64, hybrid: &HybridConfig) -> Result<ExperimentRecord> {
    let base = legendre(p)?;
    seeded_by_best_rotation(base, hybrid, |rotation| SeedProvenance::Legendre { p, rotation })
}

/// One experiment per exponent, same length and budget.
pub fn sweep(
    n: usize,
    alphas: &[u32],
    restarts: usize,
    threshold: u64,
    master_seed: u64,
    threads: usize,
) -> Result<Vec<ExperimentRecord>> {
    alphas
        .iter()
        .map(|&alpha| {
            let config = ExperimentConfig::new(n, FitnessSpec::new(alpha)?, restarts, threshold, master_seed)
                .with_threads(threads);
            run_experiment(&config)
        })
        .collect()
}

/// Aligned text table with columns `n alpha R T V* V∇`.
pub fn format_sweep_table(records: &[ExperimentRecord]) -> String {
    let header = ["n", "alpha", "R", "T", "V*", "V∇"];
    let rows: Vec<[String; 6]> = records
        .iter()
        .map(|r| {
            [
                r.n.to_string(),
                r.alpha.to_string(),
                r.restarts.to_string(),
                r.threshold.to_string(),
                r.best_psl.to_string(),
                format!("{:.2}", r.v_nabla),
            ]
        })
        .collect();
    let mut widths = header.map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line =
        |cells: &[String]| cells.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ");
    let mut out = line(&header.map(String::from));
    out.push('\n');
    for row in &rows {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}

/// Appends one JSON line to `path`, creating the file if needed.
pub fn append_record(path: &Path, record: &ExperimentRecord) -> Result<()> {
    let mut line = serde_json::to_string(record)?;
    line.push('\n');
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    file.write_all(line.as_bytes())?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let text = std::fs::read_to_string(path)?;
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| serde_json::from_str(l).map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(alpha: u32) -> FitnessSpec {
        FitnessSpec::new(alpha).unwrap()
    }

    #[test]
    fn restart_seeds_are_distinct_and_stable() {
        let seeds: Vec<u64> = (0..1000).map(|i| restart_seed(7, i)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 1000);
        assert_eq!(restart_seed(0, 0), 0xe220_a839_7b1d_cdaf);
    }

    #[test]
    fn single_restart_record() {
        let rec = run_experiment(&ExperimentConfig::new(20, spec(2), 1, 500, 3)).unwrap();
        assert_eq!(rec.per_restart_psl.len(), 1);
        assert_eq!(rec.v_star() as f64, rec.v_nabla);
        assert_eq!(psl(&rec.best_sequence().unwrap()), rec.best_psl);
        assert_eq!(rec.seed_provenance, SeedProvenance::Random);
    }

    #[test]
    fn aggregate_is_min_and_mean() {
        let rec = run_experiment(&ExperimentConfig::new(40, spec(3), 6, 300, 11).with_threads(2)).unwrap();
        assert_eq!(rec.best_psl, *rec.per_restart_psl.iter().min().unwrap());
        let mean = rec.per_restart_psl.iter().sum::<u32>() as f64 / 6.0;
        assert_eq!(rec.v_nabla, mean);
        assert!(rec.best_psl as f64 <= rec.v_nabla);
        assert!(rec.iterations.iter().all(|&i| i == 300));
    }

    #[test]
    fn records_ignore_thread_count() {
        let base = ExperimentConfig::new(33, spec(2), 5, 400, 99);
        let a = run_experiment(&base.clone().with_threads(1)).unwrap();
        let b = run_experiment(&base.with_threads(3)).unwrap();
        assert_eq!(a.without_timing(), b.without_timing());
    }

    #[test]
    fn zero_restarts_rejected() {
        assert!(run_experiment(&ExperimentConfig::new(20, spec(2), 0, 10, 0)).is_err());
    }

    #[test]
    fn provenance_round_trip() {
        for p in [
            SeedProvenance::Random,
            SeedProvenance::Provided,
            SeedProvenance::Mseq { poly: 0x2001b, state: 3, rotation: 15150 },
            SeedProvenance::Legendre { p: 235_747, rotation: 60_547 },
        ] {
            assert_eq!(p.to_string().parse::<SeedProvenance>().unwrap(), p);
        }
        assert_eq!(SeedProvenance::Legendre { p: 7, rotation: 2 }.to_string(), "legendre:<7,2>");
        assert!("mseq:<1,2>".parse::<SeedProvenance>().is_err());
    }

    #[test]
    fn hybrid_legendre_never_worsens() {
        let rec = hybrid_legendre(61, &HybridConfig::new(spec(4), 200, 1)).unwrap();
        assert!(rec.best_psl <= rec.rotation_psl.unwrap());
        assert!(rec.rotation_psl.unwrap() <= rec.unrotated_psl.unwrap());
        assert!(matches!(rec.seed_provenance, SeedProvenance::Legendre { p: 61, .. }));
    }

    #[test]
    fn sweep_table_layout() {
        let recs = sweep(24, &[1, 2], 2, 100, 5, 1).unwrap();
        let table = format_sweep_table(&recs);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].split_whitespace().eq(["n", "alpha", "R", "T", "V*", "V∇"]));
        assert!(lines[1].trim_start().starts_with("24"));
        let widths: Vec<usize> = lines.iter().map(|l| l.chars().count()).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn jsonl_persistence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        let a = run_experiment(&ExperimentConfig::new(16, spec(2), 2, 50, 1)).unwrap();
        let b = hybrid_legendre(13, &HybridConfig::new(spec(2), 50, 2)).unwrap();
        append_record(&path, &a).unwrap();
        append_record(&path, &b).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        for key in [
            "timestamp",
            "n",
            "alpha",
            "restarts",
            "threshold",
            "master_seed",
            "rng_id",
            "best_psl",
            "best_hex",
            "v_nabla",
            "elapsed_seconds",
            "seed_provenance",
        ] {
            assert!(first.get(key).is_some(), "missing {key}");
        }
        assert_eq!(read_records(&path).unwrap(), vec![a, b]);
    }
}
