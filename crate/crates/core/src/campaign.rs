//! Verification campaigns and JSON Lines certificates.
//!
//! A campaign draws instances from a source, filters them by minimum
//! out-degree, runs the packing search and writes one record per
//! instance. Records are re-sequenced to source order before writing, so
//! the number of worker threads never changes the output. Wall-clock time
//! appears only in the trailing summary record.
//!
//! Campaign files are TOML:
//!
//! ```toml
//! name = "distinct-3-at-6"
//! claim = "min out-degree >= 6 forces 3 disjoint cycles of distinct lengths"
//! seed = 1
//! stop = "exhaust"              # or "first-counterexample", or { sample = 100 }
//!
//! [source]
//! kind = "random-min-outdegree" # paley | rotational | transitive | random |
//!                               # enumerate | regular-rooted | import
//! n = [13, 20]                  # a single order or an inclusive range
//! d = 6
//! count = 1000
//!
//! [predicate]
//! k = 3
//! min_distinct = 3              # or exact = [3, 4, 5]
//! min_outdegree = 6             # optional filter
//! expect = "witness"            # or "none"
//! ```

use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gen::{self, GenError, RotationSpec, PRNG_NAME};
use crate::io::{decode_digraph6, encode_digraph6, import_stream, FormatError};
use crate::packing::{
    feasibility_floor, find_packing_with_stats, validate_raw, PackingError, PackingSpec,
};
use crate::tournament::{Tournament, VertexId};

/// Certificate schema version, written as `v` in every record.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable holding the default worker count.
pub const JOBS_ENV: &str = "DICYCLE_JOBS";

const BATCH: usize = 64;

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("source unavailable: {0}")]
    SourceUnavailable(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Spec(#[from] PackingError),
    #[error("invalid campaign config: {0}")]
    Config(String),
    #[error("certificate parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Inclusive range of orders; a bare integer means a single order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Orders {
    One(usize),
    Range([usize; 2]),
}

impl Orders {
    fn bounds(self) -> (usize, usize) {
        match self {
            Orders::One(n) => (n, n),
            Orders::Range([lo, hi]) => (lo, hi),
        }
    }

    /// Order of the `i`-th sampled instance: cycles through the range.
    fn pick(self, i: u64) -> usize {
        let (lo, hi) = self.bounds();
        lo + (i % (hi - lo + 1) as u64) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Source {
    Paley {
        n: usize,
    },
    Rotational {
        n: usize,
        offsets: Vec<usize>,
    },
    Transitive {
        n: usize,
    },
    /// Uniform random tournaments; instance `i` uses seed `seed + i`.
    Random {
        n: Orders,
        count: u64,
    },
    /// [`gen::random_min_outdegree`]; instance `i` uses seed `seed + i`.
    RandomMinOutdegree {
        n: Orders,
        d: usize,
        count: u64,
    },
    /// Every labeled tournament on `n <= 7` vertices.
    Enumerate {
        n: usize,
    },
    /// Every labeled regular tournament on `n` vertices with `0 -> 1..=(n-1)/2`.
    RegularRooted {
        n: usize,
    },
    /// TRN or digraph6 file.
    Import {
        path: PathBuf,
    },
}

impl Source {
    fn is_sampled(&self) -> bool {
        matches!(
            self,
            Source::Random { .. } | Source::RandomMinOutdegree { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    /// Every instance should contain a packing.
    Witness,
    /// No instance should contain one.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicate {
    #[serde(flatten)]
    pub spec: PackingSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_outdegree: Option<usize>,
    pub expect: Expect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopRule {
    #[default]
    Exhaust,
    FirstCounterexample,
    /// Only the first `N` instances of the source.
    Sample(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Campaign {
    pub name: String,
    pub claim: String,
    pub source: Source,
    pub predicate: Predicate,
    #[serde(default)]
    pub stop: StopRule,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

impl Campaign {
    pub fn from_toml(text: &str) -> Result<Self, CampaignError> {
        toml::from_str(text).map_err(|e| CampaignError::Config(e.to_string()))
    }

    /// Paley-11 against three disjoint cycles of three distinct lengths: the
    /// order is below the packing floor of 12 while the minimum out-degree is 5.
    pub fn sharpness() -> Self {
        Campaign {
            name: "sharpness-paley-11".into(),
            claim: "min out-degree 5 does not force 3 disjoint cycles of distinct lengths".into(),
            source: Source::Paley { n: 11 },
            predicate: Predicate {
                spec: PackingSpec::min_distinct(3, 3).expect("valid spec"),
                min_outdegree: Some(5),
                expect: Expect::None,
            },
            stop: StopRule::Exhaust,
            seed: 0,
            jobs: None,
        }
    }
}

/// Where an instance came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Paley {
        n: usize,
    },
    Rotational {
        n: usize,
        offsets: Vec<usize>,
    },
    Transitive {
        n: usize,
    },
    Random {
        n: usize,
        seed: u64,
        prng: String,
    },
    RandomMinOutdegree {
        n: usize,
        d: usize,
        seed: u64,
        prng: String,
    },
    Enumerate {
        n: usize,
        code: u64,
    },
    RegularRooted {
        n: usize,
        index: u64,
    },
    File {
        path: String,
        index: u64,
    },
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub tournament: Tournament,
    pub provenance: Provenance,
}

type InstanceStream = Box<dyn Iterator<Item = Result<Instance, CampaignError>> + Send>;

/// Instance stream for a campaign source.
pub fn instances(source: &Source, seed: u64) -> Result<InstanceStream, CampaignError> {
    Ok(match source.clone() {
        Source::Paley { n } => {
            let t = gen::paley(n)?;
            Box::new(std::iter::once(Ok(Instance {
                tournament: t,
                provenance: Provenance::Paley { n },
            })))
        }
        Source::Rotational { n, offsets } => {
            let t = gen::rotational(&RotationSpec::new(n, offsets.iter().copied())?);
            Box::new(std::iter::once(Ok(Instance {
                tournament: t,
                provenance: Provenance::Rotational { n, offsets },
            })))
        }
        Source::Transitive { n } => Box::new(std::iter::once(Ok(Instance {
            tournament: gen::transitive(n),
            provenance: Provenance::Transitive { n },
        }))),
        Source::Random { n, count } => Box::new((0..count).map(move |i| {
            let (order, s) = (n.pick(i), seed.wrapping_add(i));
            Ok(Instance {
                tournament: gen::random_tournament(order, s),
                provenance: Provenance::Random {
                    n: order,
                    seed: s,
                    prng: PRNG_NAME.into(),
                },
            })
        })),
        Source::RandomMinOutdegree { n, d, count } => Box::new((0..count).map(move |i| {
            let (order, s) = (n.pick(i), seed.wrapping_add(i));
            Ok(Instance {
                tournament: gen::random_min_outdegree(order, d, s)?,
                provenance: Provenance::RandomMinOutdegree {
                    n: order,
                    d,
                    seed: s,
                    prng: PRNG_NAME.into(),
                },
            })
        })),
        Source::Enumerate { n } => {
            let all = gen::enumerate_all(n)?;
            Box::new(all.enumerate().map(move |(code, t)| {
                Ok(Instance {
                    tournament: t,
                    provenance: Provenance::Enumerate {
                        n,
                        code: code as u64,
                    },
                })
            }))
        }
        Source::RegularRooted { n } => {
            let all = gen::enumerate_regular_rooted(n)?;
            Box::new(all.into_iter().enumerate().map(move |(i, t)| {
                Ok(Instance {
                    tournament: t,
                    provenance: Provenance::RegularRooted { n, index: i as u64 },
                })
            }))
        }
        Source::Import { path } => {
            let reader = import_stream(&path).map_err(|e| match e {
                FormatError::Io(io) => {
                    CampaignError::SourceUnavailable(format!("{}: {io}", path.display()))
                }
                other => other.into(),
            })?;
            let name = path.display().to_string();
            Box::new(reader.enumerate().map(move |(i, r)| {
                Ok(Instance {
                    tournament: r?,
                    provenance: Provenance::File {
                        path: name.clone(),
                        index: i as u64,
                    },
                })
            }))
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub n: usize,
    pub digraph6: String,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// A packing was found, as expected.
    Witness,
    /// The outcome contradicts the expectation.
    Refuted,
    /// The complete search found no packing, as expected.
    ExhaustedNone,
    /// Summary only: every sampled instance had a witness.
    SamplePass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertStats {
    pub min_out_degree: usize,
    pub feasibility_floor: usize,
    pub candidates: u64,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Toolchain {
    pub version: String,
    pub prng: String,
}

impl Toolchain {
    pub fn current() -> Self {
        Toolchain {
            version: concat!("dicycle ", env!("CARGO_PKG_VERSION")).into(),
            prng: PRNG_NAME.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub v: u32,
    pub claim: String,
    pub index: u64,
    pub instance: InstanceRecord,
    pub spec: PackingSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_outdegree: Option<usize>,
    pub expect: Expect,
    pub verdict: Verdict,
    /// Present iff `verdict` is `witness`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<VertexId>>>,
    /// A packing found where none was expected.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<Vec<VertexId>>>,
    pub stats: CertStats,
    pub toolchain: Toolchain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipReason {
    MinOutdegreeBelowFilter,
    BelowFeasibilityFloor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skip {
    pub v: u32,
    pub claim: String,
    pub index: u64,
    pub instance: InstanceRecord,
    pub spec: PackingSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_outdegree: Option<usize>,
    pub reason: SkipReason,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub v: u32,
    pub name: String,
    pub claim: String,
    pub instances: u64,
    pub witness: u64,
    pub exhausted_none: u64,
    pub refuted: u64,
    pub skipped: u64,
    pub verdict: Verdict,
    pub passed: bool,
    pub elapsed_ms: u64,
}

/// One line of a certificate stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Record {
    Certificate(Certificate),
    Skip(Skip),
    Summary(Summary),
}

fn check_instance(c: &Campaign, index: u64, inst: Instance) -> Record {
    let t = &inst.tournament;
    let n = t.order();
    let spec = c.predicate.spec.clone();
    let instance = InstanceRecord {
        n,
        digraph6: encode_digraph6(t),
        provenance: inst.provenance,
    };
    let min_out = t.min_out_degree().unwrap_or(0);
    let floor = feasibility_floor(&spec);
    let skip = |reason, detail: String| {
        Record::Skip(Skip {
            v: SCHEMA_VERSION,
            claim: c.claim.clone(),
            index,
            instance: instance.clone(),
            spec: spec.clone(),
            min_outdegree: c.predicate.min_outdegree,
            reason,
            detail,
        })
    };
    if let Some(filter) = c.predicate.min_outdegree {
        if n == 0 || min_out < filter {
            return skip(
                SkipReason::MinOutdegreeBelowFilter,
                format!("min out-degree {min_out} < {filter}"),
            );
        }
    }
    if c.predicate.expect == Expect::Witness && n < floor {
        return skip(
            SkipReason::BelowFeasibilityFloor,
            format!("order {n} < feasibility floor {floor}"),
        );
    }
    let outcome = find_packing_with_stats(t, &spec);
    let found = outcome.packing.map(|p| p.to_arrays());
    let (verdict, witness, counterexample) = match (c.predicate.expect, found) {
        (Expect::Witness, Some(p)) => (Verdict::Witness, Some(p), None),
        (Expect::Witness, None) => (Verdict::Refuted, None, None),
        (Expect::None, None) => (Verdict::ExhaustedNone, None, None),
        (Expect::None, Some(p)) => (Verdict::Refuted, None, Some(p)),
    };
    Record::Certificate(Certificate {
        v: SCHEMA_VERSION,
        claim: c.claim.clone(),
        index,
        instance,
        spec,
        min_outdegree: c.predicate.min_outdegree,
        expect: c.predicate.expect,
        verdict,
        witness,
        counterexample,
        stats: CertStats {
            min_out_degree: min_out,
            feasibility_floor: floor,
            candidates: outcome.stats.candidates,
            nodes: outcome.stats.nodes,
        },
        toolchain: Toolchain::current(),
    })
}

/// Worker count: explicit value, else [`JOBS_ENV`], else 1.
pub fn resolve_jobs(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| std::env::var(JOBS_ENV).ok().and_then(|s| s.parse().ok()))
        .unwrap_or(1)
        .max(1)
}

/// Runs a campaign, writing one JSON line per record followed by the summary.
pub fn run_campaign<W: Write>(
    c: &Campaign,
    jobs: usize,
    out: &mut W,
) -> Result<Summary, CampaignError> {
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CampaignError::Config(e.to_string()))?;
    let mut stream = instances(&c.source, c.seed)?;
    let limit = match c.stop {
        StopRule::Sample(n) => n,
        _ => u64::MAX,
    };
    let mut summary = Summary {
        v: SCHEMA_VERSION,
        name: c.name.clone(),
        claim: c.claim.clone(),
        instances: 0,
        witness: 0,
        exhausted_none: 0,
        refuted: 0,
        skipped: 0,
        verdict: Verdict::Witness,
        passed: true,
        elapsed_ms: 0,
    };
    let mut next_index = 0u64;
    'outer: while next_index < limit {
        let mut batch = Vec::with_capacity(BATCH);
        while batch.len() < BATCH && next_index + (batch.len() as u64) < limit {
            match stream.next() {
                Some(inst) => batch.push(inst?),
                None => break,
            }
        }
        if batch.is_empty() {
            break;
        }
        let base = next_index;
        next_index += batch.len() as u64;
        let records: Vec<Record> = pool.install(|| {
            batch
                .into_par_iter()
                .enumerate()
                .map(|(i, inst)| check_instance(c, base + i as u64, inst))
                .collect()
        });
        for rec in records {
            summary.instances += 1;
            let refuted = match &rec {
                Record::Certificate(cert) => match cert.verdict {
                    Verdict::Witness => {
                        summary.witness += 1;
                        false
                    }
                    Verdict::ExhaustedNone => {
                        summary.exhausted_none += 1;
                        false
                    }
                    _ => {
                        summary.refuted += 1;
                        true
                    }
                },
                Record::Skip(_) => {
                    summary.skipped += 1;
                    false
                }
                Record::Summary(_) => unreachable!(),
            };
            write_record(out, &rec)?;
            if refuted && c.stop == StopRule::FirstCounterexample {
                break 'outer;
            }
        }
    }
    summary.passed = summary.refuted == 0;
    summary.verdict = if summary.refuted > 0 {
        Verdict::Refuted
    } else if c.predicate.expect == Expect::None {
        Verdict::ExhaustedNone
    } else if c.source.is_sampled() || matches!(c.stop, StopRule::Sample(_)) {
        Verdict::SamplePass
    } else {
        Verdict::Witness
    };
    summary.elapsed_ms = started.elapsed().as_millis() as u64;
    write_record(out, &Record::Summary(summary.clone()))?;
    out.flush()?;
    Ok(summary)
}

fn write_record<W: Write>(out: &mut W, rec: &Record) -> std::io::Result<()> {
    serde_json::to_writer(&mut *out, rec)?;
    out.write_all(b"\n")
}

/// Runs [`Campaign::sharpness`].
pub fn certify_sharpness<W: Write>(out: &mut W) -> Result<Summary, CampaignError> {
    run_campaign(&Campaign::sharpness(), 1, out)
}

/// Result of [`revalidate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Revalidation {
    pub certificates: u64,
    pub witnesses_checked: u64,
    pub skips: u64,
    pub refuted: u64,
    pub summaries: u64,
    /// One message per record that failed to re-check.
    pub failures: Vec<String>,
}

impl Revalidation {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_packing(
    t: &Tournament,
    spec: &PackingSpec,
    cycles: &[Vec<VertexId>],
) -> Result<(), String> {
    validate_raw(t, spec, cycles.iter().map(|c| c.as_slice()))?;
    // Certificates store canonical rotations.
    for c in cycles {
        if c.first() != c.iter().min() {
            return Err(format!("cycle {c:?} not in canonical rotation"));
        }
    }
    Ok(())
}

fn recheck_instance(inst: &InstanceRecord) -> Result<Tournament, String> {
    let t = decode_digraph6(&inst.digraph6).map_err(|e| e.to_string())?;
    if t.order() != inst.n {
        return Err(format!(
            "encoding has order {}, record says {}",
            t.order(),
            inst.n
        ));
    }
    Ok(t)
}

fn recheck_certificate(c: &Certificate) -> Result<(), String> {
    if c.v != SCHEMA_VERSION {
        return Err(format!("unsupported schema version {}", c.v));
    }
    let t = recheck_instance(&c.instance)?;
    let min_out = t.min_out_degree().unwrap_or(0);
    if min_out != c.stats.min_out_degree {
        return Err(format!(
            "min out-degree is {min_out}, certificate says {}",
            c.stats.min_out_degree
        ));
    }
    if let Some(filter) = c.min_outdegree {
        if min_out < filter {
            return Err(format!("min out-degree {min_out} below filter {filter}"));
        }
    }
    let floor = feasibility_floor(&c.spec);
    if floor != c.stats.feasibility_floor {
        return Err(format!(
            "feasibility floor is {floor}, certificate says {}",
            c.stats.feasibility_floor
        ));
    }
    match (c.verdict, c.expect, &c.witness, &c.counterexample) {
        (Verdict::Witness, Expect::Witness, Some(w), None) => check_packing(&t, &c.spec, w),
        (Verdict::ExhaustedNone, Expect::None, None, None) => Ok(()),
        (Verdict::Refuted, Expect::Witness, None, None) => Ok(()),
        (Verdict::Refuted, Expect::None, None, Some(p)) => check_packing(&t, &c.spec, p),
        _ => Err(format!(
            "inconsistent verdict {:?} for expectation {:?} (witness present: {}, counterexample present: {})",
            c.verdict,
            c.expect,
            c.witness.is_some(),
            c.counterexample.is_some()
        )),
    }
}

fn recheck_skip(s: &Skip) -> Result<(), String> {
    let t = recheck_instance(&s.instance)?;
    match s.reason {
        SkipReason::MinOutdegreeBelowFilter => {
            let filter = s
                .min_outdegree
                .ok_or("skip without a min out-degree filter")?;
            let min_out = t.min_out_degree().unwrap_or(0);
            if t.order() > 0 && min_out >= filter {
                return Err(format!("min out-degree {min_out} meets filter {filter}"));
            }
        }
        SkipReason::BelowFeasibilityFloor => {
            let floor = feasibility_floor(&s.spec);
            if t.order() >= floor {
                return Err(format!("order {} reaches floor {floor}", t.order()));
            }
        }
    }
    Ok(())
}

/// Re-checks every record of a certificate stream without searching:
/// witnesses are validated cycle by cycle, stated degrees and floors are
/// recomputed, verdicts are checked against expectations and the summary
/// counts against the records.
pub fn revalidate<R: BufRead>(input: R) -> Result<Revalidation, CampaignError> {
    let mut report = Revalidation::default();
    let (mut witness, mut none, mut refuted, mut skipped) = (0u64, 0u64, 0u64, 0u64);
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line).map_err(|e| CampaignError::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        let result = match &rec {
            Record::Certificate(c) => {
                report.certificates += 1;
                match c.verdict {
                    Verdict::Witness => witness += 1,
                    Verdict::ExhaustedNone => none += 1,
                    _ => refuted += 1,
                }
                if c.witness.is_some() || c.counterexample.is_some() {
                    report.witnesses_checked += 1;
                }
                recheck_certificate(c)
            }
            Record::Skip(s) => {
                report.skips += 1;
                skipped += 1;
                recheck_skip(s)
            }
            Record::Summary(s) => {
                report.summaries += 1;
                let counts = (s.witness, s.exhausted_none, s.refuted, s.skipped);
                let seen = (witness, none, refuted, skipped);
                let r = if counts != seen {
                    Err(format!(
                        "summary counts {counts:?} disagree with records {seen:?}"
                    ))
                } else if s.passed != (s.refuted == 0) {
                    Err("summary pass flag disagrees with refuted count".to_string())
                } else {
                    Ok(())
                };
                (witness, none, refuted, skipped) = (0, 0, 0, 0);
                r
            }
        };
        if let Err(e) = result {
            report.failures.push(format!("line {}: {e}", i + 1));
        }
    }
    report.refuted = refuted;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn micro(source: Source, spec: PackingSpec, expect: Expect) -> Campaign {
        Campaign {
            name: "micro".into(),
            claim: "micro".into(),
            source,
            predicate: Predicate {
                spec,
                min_outdegree: None,
                expect,
            },
            stop: StopRule::Exhaust,
            seed: 7,
            jobs: None,
        }
    }

    fn run(c: &Campaign, jobs: usize) -> (Summary, String) {
        let mut buf = Vec::new();
        let s = run_campaign(c, jobs, &mut buf).unwrap();
        (s, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn toml_config_roundtrip() {
        let text = r#"
            name = "t"
            claim = "c"
            seed = 5
            stop = { sample = 10 }

            [source]
            kind = "random-min-outdegree"
            n = [13, 15]
            d = 6
            count = 50

            [predicate]
            k = 3
            min_distinct = 3
            min_outdegree = 6
            expect = "witness"
        "#;
        let c = Campaign::from_toml(text).unwrap();
        assert_eq!(c.stop, StopRule::Sample(10));
        assert_eq!(c.predicate.spec, PackingSpec::min_distinct(3, 3).unwrap());
        assert_eq!(
            c.source,
            Source::RandomMinOutdegree {
                n: Orders::Range([13, 15]),
                d: 6,
                count: 50
            }
        );
        let exact = Campaign::from_toml(
            "name='a'\nclaim='b'\nstop='first-counterexample'\n[source]\nkind='paley'\nn=7\n[predicate]\nk=2\nexact=[3,4]\nexpect='none'\n",
        )
        .unwrap();
        assert_eq!(exact.stop, StopRule::FirstCounterexample);
        assert_eq!(exact.predicate.spec, PackingSpec::exact([3, 4]).unwrap());
        assert!(Campaign::from_toml("name='a'").is_err());
    }

    #[test]
    fn sharpness_certificate() {
        let mut buf = Vec::new();
        let s = certify_sharpness(&mut buf).unwrap();
        assert!(s.passed);
        assert_eq!(s.exhausted_none, 1);
        assert_eq!(s.verdict, Verdict::ExhaustedNone);
        let text = String::from_utf8(buf).unwrap();
        let first: Record = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        let Record::Certificate(cert) = first else {
            panic!()
        };
        assert_eq!(cert.stats.min_out_degree, 5);
        assert_eq!(cert.stats.feasibility_floor, 12);
        assert!(revalidate(text.as_bytes()).unwrap().ok());
    }

    #[test]
    fn exit_contract_micro_campaigns() {
        let c3 = Source::Rotational {
            n: 3,
            offsets: vec![1],
        };
        let one = PackingSpec::min_distinct(1, 1).unwrap();
        let (s, _) = run(&micro(c3.clone(), one.clone(), Expect::Witness), 1);
        assert!(s.passed && s.witness == 1);
        let (s, _) = run(&micro(c3, one.clone(), Expect::None), 1);
        assert!(!s.passed && s.refuted == 1);
        let (s, text) = run(&micro(Source::Transitive { n: 6 }, one, Expect::Witness), 1);
        assert!(!s.passed);
        assert!(revalidate(text.as_bytes()).unwrap().ok());
    }

    #[test]
    fn floor_and_filter_skips_are_logged() {
        let mut c = micro(
            Source::Enumerate { n: 4 },
            PackingSpec::min_distinct(2, 1).unwrap(),
            Expect::Witness,
        );
        let (s, text) = run(&c, 1);
        assert_eq!(s.skipped, 64);
        assert!(text.contains("below-feasibility-floor"));
        c.predicate.spec = PackingSpec::min_distinct(1, 1).unwrap();
        c.predicate.min_outdegree = Some(1);
        let (s, text) = run(&c, 1);
        assert_eq!(s.instances, 64);
        assert_eq!(s.witness + s.skipped, 64);
        assert!(s.passed);
        assert!(text.contains("min-outdegree-below-filter"));
        assert!(revalidate(text.as_bytes()).unwrap().ok());
    }

    #[test]
    fn output_is_independent_of_jobs_and_deterministic() {
        let c = micro(
            Source::RandomMinOutdegree {
                n: Orders::Range([9, 12]),
                d: 3,
                count: 150,
            },
            PackingSpec::min_distinct(2, 2).unwrap(),
            Expect::Witness,
        );
        let strip = |t: &str| {
            t.lines()
                .filter(|l| !l.contains("\"summary\""))
                .collect::<Vec<_>>()
                .join("\n")
        };
        let (_, a) = run(&c, 1);
        let (_, b) = run(&c, 3);
        let (_, again) = run(&c, 1);
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(strip(&a), strip(&again));
    }

    #[test]
    fn first_counterexample_stops() {
        let mut c = micro(
            Source::Enumerate { n: 3 },
            PackingSpec::min_distinct(1, 1).unwrap(),
            Expect::Witness,
        );
        c.stop = StopRule::FirstCounterexample;
        let (s, _) = run(&c, 1);
        // Code 0 is transitive.
        assert_eq!((s.instances, s.refuted), (1, 1));
        c.stop = StopRule::Sample(5);
        let (s, _) = run(&c, 1);
        assert_eq!(s.instances, 5);
    }

    #[test]
    fn tampering_detected() {
        let c = micro(
            Source::Rotational {
                n: 13,
                offsets: (1..=6).collect(),
            },
            PackingSpec::min_distinct(3, 3).unwrap(),
            Expect::Witness,
        );
        let (_, text) = run(&c, 1);
        assert!(revalidate(text.as_bytes()).unwrap().ok());
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let mut rec: Record = serde_json::from_str(&lines[0]).unwrap();
        if let Record::Certificate(cert) = &mut rec {
            let w = cert.witness.as_mut().unwrap();
            w[1][1] = w[0][1];
        }
        lines[0] = serde_json::to_string(&rec).unwrap();
        let report = revalidate(lines.join("\n").as_bytes()).unwrap();
        assert!(!report.ok());
        assert_eq!(report.failures.len(), 1);
    }

    #[test]
    fn missing_import_is_unavailable() {
        let c = micro(
            Source::Import {
                path: "/nonexistent/file.d6".into(),
            },
            PackingSpec::min_distinct(1, 1).unwrap(),
            Expect::Witness,
        );
        assert!(matches!(
            run_campaign(&c, 1, &mut Vec::new()),
            Err(CampaignError::SourceUnavailable(_))
        ));
    }

    #[test]
    fn garbage_line_is_parse_error() {
        assert!(matches!(
            revalidate("{\"type\":\"nope\"}\n".as_bytes()),
            Err(CampaignError::Parse { line: 1, .. })
        ));
    }
}
