//! Record-holder scans for least primitive roots, with checkpointed and
//! resumable output.
//!
//! A scan walks a prime range in segments, computes the requested
//! least-root values for every prime, and keeps two result streams:
//! record entries (primes whose value strictly exceeds every earlier
//! value of the same kind) and violations of the Grosswald inequality
//! `value < sqrt(p) - 2`, tested in exact integer arithmetic.
//!
//! Segments are scanned by a worker pool but merged by a single ordered
//! reducer, so output is byte-identical for any worker count, and a scan
//! resumed from a checkpoint reproduces exactly what an uninterrupted run
//! would have written.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::proots;
use crate::sieve::{self, factor_range, DEFAULT_SEGMENT_WIDTH, MAX_BOUND, MIN_SEGMENT_WIDTH};

/// First line of every records file.
pub const RECORDS_HEADER: &str = "# grosswald-records v1";

/// Which least-root function a scan tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RecordKind {
    /// g(p), the least primitive root.
    G,
    /// The least prime primitive root.
    Gp,
    /// |h(p)|, the magnitude of the least negative primitive root.
    Gn,
}

impl RecordKind {
    pub const ALL: [RecordKind; 3] = [RecordKind::G, RecordKind::Gp, RecordKind::Gn];

    pub fn label(self) -> &'static str {
        match self {
            RecordKind::G => "g",
            RecordKind::Gp => "gp",
            RecordKind::Gn => "gn",
        }
    }

    pub fn from_label(label: &str) -> Option<RecordKind> {
        Self::ALL.into_iter().find(|k| k.label() == label)
    }

    fn slot(self) -> usize {
        match self {
            RecordKind::G => 0,
            RecordKind::Gp => 1,
            RecordKind::Gn => 2,
        }
    }
}

/// A prime whose value strictly exceeds all earlier values of its kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecordEntry {
    pub kind: RecordKind,
    pub p: u64,
    pub value: u64,
}

/// A prime failing `value < sqrt(p) - 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub kind: RecordKind,
    pub p: u64,
    pub value: u64,
}

/// Exact-integer failure test for `value < sqrt(p) - 2`: true iff
/// `(value + 2)^2 >= p`. For prime p (never a perfect square) the two
/// forms are equivalent, with no floating-point edge cases.
pub fn fails_grosswald(p: u64, value: u64) -> bool {
    let side = value as u128 + 2;
    // Saturation is exact here: a saturated square certainly exceeds p.
    side.saturating_mul(side) >= p as u128
}

/// Running per-kind maxima. Fresh scans start from all zeros; resumed
/// scans restore these from a checkpoint.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Maxima {
    values: [u64; 3],
}

impl Maxima {
    pub fn get(&self, kind: RecordKind) -> u64 {
        self.values[kind.slot()]
    }

    pub fn set(&mut self, kind: RecordKind, value: u64) {
        self.values[kind.slot()] = value;
    }
}

/// Scan parameters. `workers = 0` sizes the pool to the available cores.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub low: u64,
    pub high: u64,
    pub kinds: Vec<RecordKind>,
    pub segment_width: u64,
    pub workers: usize,
    /// Stop after this many segments; used to interrupt a checkpointed
    /// scan at a segment boundary.
    pub max_segments: Option<usize>,
}

impl ScanConfig {
    pub fn new(low: u64, high: u64, kinds: &[RecordKind]) -> ScanConfig {
        ScanConfig {
            low,
            high,
            kinds: kinds.to_vec(),
            segment_width: DEFAULT_SEGMENT_WIDTH,
            workers: 0,
            max_segments: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.low < 3 || self.low >= self.high || self.high > MAX_BOUND {
            return Err(Error::InvalidRange { low: self.low, high: self.high });
        }
        if self.segment_width < MIN_SEGMENT_WIDTH {
            return Err(Error::SegmentWidthTooSmall(self.segment_width));
        }
        let distinct = self.kinds.iter().collect::<std::collections::BTreeSet<_>>().len();
        if self.kinds.is_empty() || distinct != self.kinds.len() {
            return Err(Error::BadKindSet);
        }
        Ok(())
    }

    /// The scan's kinds in canonical g, gp, gn order, which is also the
    /// per-prime order of lines in the records file.
    fn canonical_kinds(&self) -> Vec<RecordKind> {
        RecordKind::ALL
            .into_iter()
            .filter(|k| self.kinds.contains(k))
            .collect()
    }
}

/// Result of a scan: records and violations in ascending-p order, the
/// maxima in force after the last processed segment, and the boundary
/// `last_hi` up to which the range is fully processed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOutcome {
    pub records: Vec<RecordEntry>,
    pub violations: Vec<Violation>,
    pub maxima: Maxima,
    pub last_hi: u64,
}

struct SegmentTake {
    records: Vec<RecordEntry>,
    violations: Vec<Violation>,
}

/// One worker's pass over a segment: values for every prime, records
/// relative to a fresh (all-zero) maximum, and every direct violation.
/// Filtering against the true running maxima happens in the reducer.
fn scan_segment(lo: u64, hi: u64, kinds: &[RecordKind], width: u64) -> Result<SegmentTake> {
    let mut local = Maxima::default();
    let mut records = Vec::new();
    let mut violations = Vec::new();
    for fp in factor_range(lo, hi, width)? {
        let mut g_cached = None;
        for &kind in kinds {
            let value = match kind {
                RecordKind::G => {
                    let v = proots::least_primitive_root(&fp);
                    g_cached = Some(v);
                    v
                }
                RecordKind::Gp => proots::least_prime_primitive_root(&fp),
                RecordKind::Gn => {
                    // Negation preserves primitive roots when p = 1 mod 4,
                    // so |h(p)| = g(p); reuse or compute g there.
                    if fp.p % 4 == 1 {
                        let g = g_cached.unwrap_or_else(|| proots::least_primitive_root(&fp));
                        proots::least_negative_primitive_root(&fp, Some(g))
                    } else {
                        proots::least_negative_primitive_root(&fp, None)
                    }
                }
            };
            if value > local.get(kind) {
                local.set(kind, value);
                records.push(RecordEntry { kind, p: fp.p, value });
            }
            // Checking every prime directly is exact and O(1); once the
            // running record R has (R+2)^2 < p only fresh records could
            // fire this test, so nothing extra is ever reported.
            if fails_grosswald(fp.p, value) {
                violations.push(Violation { kind, p: fp.p, value });
            }
        }
    }
    Ok(SegmentTake { records, violations })
}

fn run_segments(
    config: &ScanConfig,
    start_low: u64,
    kinds: &[RecordKind],
    state: &mut ScanOutcome,
    mut after_segment: impl FnMut(&[RecordEntry], &ScanOutcome) -> Result<()>,
) -> Result<()> {
    let segments: Vec<(u64, u64)> =
        sieve::segment_grid(start_low, config.high, config.segment_width).collect();
    let take = config.max_segments.unwrap_or(usize::MAX).min(segments.len());
    let segments = &segments[..take];
    if segments.is_empty() {
        return Ok(());
    }

    // num_threads(0) lets the pool size itself to the machine.
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let batch = pool.current_num_threads().max(1) * 2;

    for chunk in segments.chunks(batch) {
        let takes: Vec<Result<SegmentTake>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&(lo, hi)| scan_segment(lo, hi, kinds, config.segment_width))
                .collect()
        });
        // Single ordered reducer: merge in ascending segment order so the
        // output is canonical for any worker count.
        for (take, &(_, hi)) in takes.into_iter().zip(chunk) {
            let take = take?;
            let before = state.records.len();
            for entry in take.records {
                if entry.value > state.maxima.get(entry.kind) {
                    state.maxima.set(entry.kind, entry.value);
                    state.records.push(entry);
                }
            }
            state.violations.extend(take.violations);
            state.last_hi = hi;
            after_segment(&state.records[before..], state)?;
        }
    }
    Ok(())
}

/// In-memory scan starting from zero maxima.
pub fn scan(config: &ScanConfig) -> Result<ScanOutcome> {
    scan_with_start(config, Maxima::default())
}

/// In-memory scan with restored maxima: a prime enters `records` only if
/// its value exceeds the supplied starting maximum for its kind.
pub fn scan_with_start(config: &ScanConfig, start: Maxima) -> Result<ScanOutcome> {
    config.validate()?;
    let kinds = config.canonical_kinds();
    let mut state = ScanOutcome {
        records: Vec::new(),
        violations: Vec::new(),
        maxima: start,
        last_hi: config.low,
    };
    run_segments(config, config.low, &kinds, &mut state, |_, _| Ok(()))?;
    Ok(state)
}

/// Checkpoint state: the boundary up to which the scan is complete and
/// the running maximum for each scanned kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub last_hi: u64,
    pub maxima: Vec<(RecordKind, u64)>,
}

fn records_line(entry: &RecordEntry) -> String {
    format!("{}\t{}\t{}\n", entry.kind.label(), entry.p, entry.value)
}

/// Writes a fresh records file: header line, then one `kind\tp\tvalue`
/// line per entry.
pub fn write_records(path: &Path, entries: &[RecordEntry]) -> Result<()> {
    let mut content = String::from(RECORDS_HEADER);
    content.push('\n');
    for entry in entries {
        content.push_str(&records_line(entry));
    }
    fs::write(path, content).map_err(|e| Error::io(path, e))
}

fn append_records(path: &Path, entries: &[RecordEntry]) -> Result<()> {
    if entries.is_empty() {
        return Ok(());
    }
    let mut file = fs::OpenOptions::new()
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    let mut content = String::new();
    for entry in entries {
        content.push_str(&records_line(entry));
    }
    file.write_all(content.as_bytes()).map_err(|e| Error::io(path, e))
}

/// Writes `last_hi=<int>` followed by one `max_<kind>=<int>` line per
/// scanned kind, via a sibling temp file and rename so a crash cannot
/// leave a half-written checkpoint.
pub fn write_checkpoint(path: &Path, checkpoint: &Checkpoint) -> Result<()> {
    let mut content = format!("last_hi={}\n", checkpoint.last_hi);
    for &(kind, max) in &checkpoint.maxima {
        content.push_str(&format!("max_{}={}\n", kind.label(), max));
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, content).map_err(|e| Error::io(path, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    let malformed = |detail: String| Error::MalformedFile {
        what: "checkpoint",
        path: path.to_path_buf(),
        detail,
    };
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut last_hi = None;
    let mut maxima: Vec<(RecordKind, u64)> = Vec::new();
    for (i, line) in content.lines().enumerate() {
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| malformed(format!("line {} has no '='", i + 1)))?;
        let value: u64 = value
            .parse()
            .map_err(|_| malformed(format!("bad integer in line {}", i + 1)))?;
        if key == "last_hi" {
            if i != 0 || last_hi.is_some() {
                return Err(malformed("last_hi must be the first line, once".into()));
            }
            last_hi = Some(value);
        } else {
            let kind = key
                .strip_prefix("max_")
                .and_then(RecordKind::from_label)
                .ok_or_else(|| malformed(format!("unknown key {key:?}")))?;
            if maxima.iter().any(|&(k, _)| k == kind) {
                return Err(malformed(format!("duplicate key {key:?}")));
            }
            maxima.push((kind, value));
        }
    }
    let last_hi = last_hi.ok_or_else(|| malformed("missing last_hi".into()))?;
    if maxima.is_empty() {
        return Err(malformed("no max_<kind> lines".into()));
    }
    maxima.sort_by_key(|&(k, _)| k.slot());
    Ok(Checkpoint { last_hi, maxima })
}

fn resume_state(config: &ScanConfig, kinds: &[RecordKind], cp: &Checkpoint) -> Result<(u64, Maxima)> {
    let cp_kinds: Vec<RecordKind> = cp.maxima.iter().map(|&(k, _)| k).collect();
    if cp_kinds != kinds {
        return Err(Error::CheckpointMismatch(format!(
            "checkpoint tracks {:?}, scan requests {:?}",
            cp_kinds.iter().map(|k| k.label()).collect::<Vec<_>>(),
            kinds.iter().map(|k| k.label()).collect::<Vec<_>>(),
        )));
    }
    let aligned = cp.last_hi == config.high || cp.last_hi % config.segment_width == 0;
    if cp.last_hi < config.low || cp.last_hi > config.high || !aligned {
        return Err(Error::CheckpointMismatch(format!(
            "last_hi={} is not a segment boundary of [{}, {}) at width {}",
            cp.last_hi, config.low, config.high, config.segment_width,
        )));
    }
    let mut maxima = Maxima::default();
    for &(kind, max) in &cp.maxima {
        maxima.set(kind, max);
    }
    Ok((cp.last_hi, maxima))
}

/// Checkpointed scan. A fresh run truncates `out_path` to the header and
/// starts at `config.low`; if `checkpoint_path` names an existing
/// checkpoint, the scan instead resumes at its boundary with its maxima
/// and appends to the existing records file. After every segment the new
/// record lines are appended and the checkpoint is rewritten, so stopping
/// at any segment boundary (see `ScanConfig::max_segments`) and rerunning
/// yields a records file byte-identical to an uninterrupted run.
///
/// The checkpoint stores only the frontier and maxima; the caller must
/// resume with the same range, kinds, and segment width. The returned
/// outcome covers only the segments processed by this call.
pub fn scan_to_files(
    config: &ScanConfig,
    out_path: &Path,
    checkpoint_path: Option<&Path>,
) -> Result<ScanOutcome> {
    config.validate()?;
    let kinds = config.canonical_kinds();

    let resume = match checkpoint_path {
        Some(cp_path) if cp_path.exists() => Some(read_checkpoint(cp_path)?),
        _ => None,
    };
    let (start_low, start_maxima) = match &resume {
        Some(cp) => {
            let state = resume_state(config, &kinds, cp)?;
            if !out_path.exists() {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint exists but records file {} does not",
                    out_path.display(),
                )));
            }
            state
        }
        None => {
            write_records(out_path, &[])?;
            (config.low, Maxima::default())
        }
    };

    let mut state = ScanOutcome {
        records: Vec::new(),
        violations: Vec::new(),
        maxima: start_maxima,
        last_hi: start_low,
    };
    if start_low >= config.high {
        return Ok(state);
    }
    run_segments(config, start_low, &kinds, &mut state, |new_records, state| {
        append_records(out_path, new_records)?;
        if let Some(cp_path) = checkpoint_path {
            let checkpoint = Checkpoint {
                last_hi: state.last_hi,
                maxima: kinds.iter().map(|&k| (k, state.maxima.get(k))).collect(),
            };
            write_checkpoint(cp_path, &checkpoint)?;
        }
        Ok(())
    })?;
    Ok(state)
}
