//! Seeded Monte Carlo comparison of UB₁ and UB₂ over random pairwise
//! coprime vectors.
//!
//! Sampling law: draw `dimension` integers uniformly from `[1, max_entry]`,
//! sort, and accept iff they are pairwise coprime. The record keeps the
//! three smallest entries.
//!
//! Record `i` is generated from its own ChaCha8 stream `(seed, i)`, so the
//! output does not depend on how many worker threads ran. Records are
//! produced in parallel chunks and handed to the sink in index order.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{self, ComparisonRecord};
use crate::{exact, gcd, Error, Instance, Result, Triple};

pub const DEFAULT_ITERATIONS: u64 = 100_000;
pub const DEFAULT_MAX_ENTRY: u64 = 1000;
/// Largest `max_entry` for which exact Frobenius numbers are attached.
pub const EXACT_MAX_ENTRY: u64 = 2000;
pub const MAX_CONSECUTIVE_REJECTIONS: u64 = 1_000_000;

const CHUNK: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub seed: u64,
    pub iterations: u64,
    pub dimension: usize,
    pub max_entry: u64,
    pub compute_exact: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            seed: 0,
            iterations: DEFAULT_ITERATIONS,
            dimension: 3,
            max_entry: DEFAULT_MAX_ENTRY,
            compute_exact: false,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be >= 1".into()));
        }
        if self.dimension < 3 {
            return Err(Error::Config(format!(
                "dimension must be >= 3, got {}",
                self.dimension
            )));
        }
        if self.max_entry < self.dimension as u64 {
            return Err(Error::Config(format!(
                "max_entry {} is smaller than the dimension {}",
                self.max_entry, self.dimension
            )));
        }
        if self.compute_exact && self.max_entry > EXACT_MAX_ENTRY {
            return Err(Error::Config(format!(
                "exact Frobenius numbers need max_entry <= {EXACT_MAX_ENTRY}"
            )));
        }
        Ok(())
    }
}

/// The generator for record `index`.
pub fn record_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Rejection-samples a sorted pairwise coprime vector of `dimension`
/// entries in `[1, max_entry]`.
pub fn sample_entries<R: Rng>(rng: &mut R, dimension: usize, max_entry: u64) -> Result<Vec<u64>> {
    if max_entry == 0 || dimension == 0 {
        return Err(Error::Config(
            "sampling needs max_entry >= 1 and dimension >= 1".into(),
        ));
    }
    let mut draw = vec![0u64; dimension];
    for _ in 0..MAX_CONSECUTIVE_REJECTIONS {
        for v in draw.iter_mut() {
            *v = rng.gen_range(1..=max_entry);
        }
        draw.sort_unstable();
        if pairwise_coprime(&draw) {
            return Ok(draw);
        }
    }
    Err(Error::Config(format!(
        "{MAX_CONSECUTIVE_REJECTIONS} consecutive rejections sampling {dimension} pairwise \
         coprime entries <= {max_entry}"
    )))
}

pub fn sample_triple<R: Rng>(rng: &mut R, max_entry: u64) -> Result<Triple> {
    let v = sample_entries(rng, 3, max_entry)?;
    Ok(Triple::sorted(v[0], v[1], v[2]))
}

fn pairwise_coprime(v: &[u64]) -> bool {
    v.iter()
        .enumerate()
        .all(|(i, &x)| v[i + 1..].iter().all(|&y| gcd(x, y) == 1))
}

pub fn generate_record(config: &SimulationConfig, index: u64) -> Result<ComparisonRecord> {
    let mut rng = record_rng(config.seed, index);
    let entries = sample_entries(&mut rng, config.dimension, config.max_entry)?;
    let triple = Triple::sorted(entries[0], entries[1], entries[2]);
    let frobenius = if config.compute_exact {
        Some(exact::frobenius_exact(&Instance::from_unsigned(entries)?)?)
    } else {
        None
    };
    ComparisonRecord::new(triple, frobenius)
}

/// Receives records in index order.
pub trait RecordSink {
    fn accept(&mut self, record: &ComparisonRecord) -> io::Result<()>;

    fn finish(&mut self) -> io::Result<()> {
        Ok(())
    }
}

impl RecordSink for Vec<ComparisonRecord> {
    fn accept(&mut self, record: &ComparisonRecord) -> io::Result<()> {
        self.push(*record);
        Ok(())
    }
}

impl<S: RecordSink + ?Sized> RecordSink for &mut S {
    fn accept(&mut self, record: &ComparisonRecord) -> io::Result<()> {
        (**self).accept(record)
    }

    fn finish(&mut self) -> io::Result<()> {
        (**self).finish()
    }
}

/// Feeds every record to both sinks.
pub struct Tee<A, B>(pub A, pub B);

impl<A: RecordSink, B: RecordSink> RecordSink for Tee<A, B> {
    fn accept(&mut self, record: &ComparisonRecord) -> io::Result<()> {
        self.0.accept(record)?;
        self.1.accept(record)
    }

    fn finish(&mut self) -> io::Result<()> {
        self.0.finish()?;
        self.1.finish()
    }
}

/// Generates `config.iterations` records into `sink`. Returns the number
/// written.
pub fn run_simulation<S: RecordSink>(config: &SimulationConfig, mut sink: S) -> Result<u64> {
    config.validate()?;
    let mut written = 0u64;
    let mut start = 0u64;
    while start < config.iterations {
        let end = (start + CHUNK).min(config.iterations);
        let chunk: Vec<ComparisonRecord> = (start..end)
            .into_par_iter()
            .map(|i| generate_record(config, i))
            .collect::<Result<_>>()?;
        for record in &chunk {
            sink.accept(record)
                .map_err(|source| Error::Sink { written, source })?;
            written += 1;
        }
        start = end;
    }
    sink.finish()
        .map_err(|source| Error::Sink { written, source })?;
    Ok(written)
}

pub fn simulate_records(config: &SimulationConfig) -> Result<Vec<ComparisonRecord>> {
    let mut records = Vec::with_capacity(config.iterations as usize);
    run_simulation(config, &mut records)?;
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    A3,
    Prod12,
    Prod123,
    Sum,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::A3, Axis::Prod12, Axis::Prod123, Axis::Sum];

    pub fn key(self, r: &ComparisonRecord) -> u64 {
        match self {
            Axis::A3 => r.triple.a3,
            Axis::Prod12 => r.prod12,
            Axis::Prod123 => r.prod123,
            Axis::Sum => r.sum,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::A3 => "a3",
            Axis::Prod12 => "prod12",
            Axis::Prod123 => "prod123",
            Axis::Sum => "sum",
        }
    }

    /// Axis label for plots.
    pub fn label(self) -> &'static str {
        match self {
            Axis::A3 => "a3",
            Axis::Prod12 => "a1*a2",
            Axis::Prod123 => "a1*a2*a3",
            Axis::Sum => "a1+a2+a3",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown axis {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub axis: Axis,
    /// Lower edge of the bucket (the exact key when the width is 1).
    pub bucket: u64,
    pub count: u64,
    pub min_gap: f64,
    pub max_gap: f64,
    pub mean_gap: f64,
    /// Population variance of the gap within the bucket.
    pub variance: f64,
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    count: u64,
    min: f64,
    max: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn new(x: f64) -> Self {
        Moments {
            count: 1,
            min: x,
            max: x,
            mean: x,
            m2: 0.0,
        }
    }

    fn push(&mut self, x: f64) {
        self.count += 1;
        self.min = self.min.min(x);
        self.max = self.max.max(x);
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }
}

/// Streaming per-bucket gap statistics for one axis.
#[derive(Debug, Clone)]
pub struct Aggregator {
    axis: Axis,
    width: u64,
    buckets: BTreeMap<u64, Moments>,
}

impl Aggregator {
    pub fn new(axis: Axis, width: u64) -> Result<Self> {
        if width == 0 {
            return Err(Error::Usage("bucket width must be >= 1".into()));
        }
        Ok(Aggregator {
            axis,
            width,
            buckets: BTreeMap::new(),
        })
    }

    pub fn push(&mut self, r: &ComparisonRecord) {
        let key = self.axis.key(r) / self.width * self.width;
        self.buckets
            .entry(key)
            .and_modify(|m| m.push(r.gap))
            .or_insert_with(|| Moments::new(r.gap));
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    /// Rows sorted by bucket key.
    pub fn rows(&self) -> Vec<AggregateRow> {
        self.buckets
            .iter()
            .map(|(&bucket, m)| AggregateRow {
                axis: self.axis,
                bucket,
                count: m.count,
                min_gap: m.min,
                max_gap: m.max,
                mean_gap: m.mean,
                variance: m.m2 / m.count as f64,
            })
            .collect()
    }
}

impl RecordSink for Aggregator {
    fn accept(&mut self, record: &ComparisonRecord) -> io::Result<()> {
        self.push(record);
        Ok(())
    }
}

pub fn aggregate(
    records: &[ComparisonRecord],
    axis: Axis,
    width: u64,
) -> Result<Vec<AggregateRow>> {
    if records.is_empty() {
        return Err(Error::Usage("cannot aggregate an empty record set".into()));
    }
    let mut agg = Aggregator::new(axis, width)?;
    records.iter().for_each(|r| agg.push(r));
    Ok(agg.rows())
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in rx.iter().zip(&ry) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

/// Rank correlation between bucket key and mean gap.
pub fn key_mean_correlation(rows: &[AggregateRow]) -> f64 {
    let keys: Vec<f64> = rows.iter().map(|r| r.bucket as f64).collect();
    let means: Vec<f64> = rows.iter().map(|r| r.mean_gap).collect();
    spearman(&keys, &means)
}

/// Adjacent bucket pairs whose minimum gap decreases, out of all adjacent
/// pairs.
pub fn min_gap_inversions(rows: &[AggregateRow]) -> (usize, usize) {
    let inversions = rows
        .windows(2)
        .filter(|w| w[1].min_gap < w[0].min_gap)
        .count();
    (inversions, rows.len().saturating_sub(1))
}

/// Mean within-bucket variance over buckets with at least two records,
/// split at `threshold`: `(key <= threshold, key > threshold)`.
pub fn split_bucket_variance(rows: &[AggregateRow], threshold: u64) -> (f64, f64) {
    let mean_var = |keep: &dyn Fn(&AggregateRow) -> bool| {
        let vs: Vec<f64> = rows
            .iter()
            .filter(|r| r.count >= 2 && keep(r))
            .map(|r| r.variance)
            .collect();
        vs.iter().sum::<f64>() / vs.len() as f64
    };
    (
        mean_var(&|r| r.bucket <= threshold),
        mean_var(&|r| r.bucket > threshold),
    )
}

/// Records where UB₂ is strictly sharper, classified against the published
/// exceptional list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharperAudit {
    pub records: u64,
    /// In the published list.
    pub listed: u64,
    /// Of the form `(1, 1, k)`, which the published list leaves out.
    pub repeated_ones: Vec<Triple>,
    /// Anything else; expected empty.
    pub unexplained: Vec<Triple>,
    /// Records whose exact Frobenius number exceeds either bound.
    pub bound_violations: Vec<Triple>,
}

impl SharperAudit {
    pub fn push(&mut self, r: &ComparisonRecord) {
        self.records += 1;
        if let Some(f) = r.frobenius {
            if f as f64 > r.ub1.min(r.ub2) {
                self.bound_violations.push(r.triple);
            }
        }
        if !r.ub2_strictly_sharper() {
            return;
        }
        let t = r.triple;
        if analysis::PUBLISHED_EXCEPTIONS.contains(&(t.a1, t.a2, t.a3)) {
            self.listed += 1;
        } else if t.a1 == 1 && t.a2 == 1 {
            self.repeated_ones.push(t);
        } else {
            self.unexplained.push(t);
        }
    }
}

impl RecordSink for SharperAudit {
    fn accept(&mut self, record: &ComparisonRecord) -> io::Result<()> {
        self.push(record);
        Ok(())
    }
}

/// Everything needed to judge the trend claims, gathered in one pass.
#[derive(Debug, Clone)]
pub struct TrendCollector {
    pub by_a3: Aggregator,
    pub by_prod12: Aggregator,
    pub by_prod123: Aggregator,
    pub by_sum: Aggregator,
    pub prod12_coarse: Aggregator,
    pub audit: SharperAudit,
}

/// Bucket width for the coarse `a₁a₂` view.
pub const PROD12_COARSE_WIDTH: u64 = 10_000;
/// Sum beyond which the gap spread is expected to contract.
pub const SUM_VARIANCE_SPLIT: u64 = 2000;

impl Default for TrendCollector {
    fn default() -> Self {
        let agg = |axis, width| Aggregator::new(axis, width).expect("width >= 1");
        TrendCollector {
            by_a3: agg(Axis::A3, 1),
            by_prod12: agg(Axis::Prod12, 1),
            by_prod123: agg(Axis::Prod123, 1),
            by_sum: agg(Axis::Sum, 1),
            prod12_coarse: agg(Axis::Prod12, PROD12_COARSE_WIDTH),
            audit: SharperAudit::default(),
        }
    }
}

impl RecordSink for TrendCollector {
    fn accept(&mut self, r: &ComparisonRecord) -> io::Result<()> {
        self.by_a3.push(r);
        self.by_prod12.push(r);
        self.by_prod123.push(r);
        self.by_sum.push(r);
        self.prod12_coarse.push(r);
        self.audit.push(r);
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub records: u64,
    pub a3_rank_correlation: f64,
    pub prod12_min_inversions: usize,
    pub prod12_bucket_pairs: usize,
    pub sum_variance_low: f64,
    pub sum_variance_high: f64,
    pub audit: SharperAudit,
}

impl TrendCollector {
    pub fn report(&self) -> TrendReport {
        let (prod12_min_inversions, prod12_bucket_pairs) =
            min_gap_inversions(&self.prod12_coarse.rows());
        let (sum_variance_low, sum_variance_high) =
            split_bucket_variance(&self.by_sum.rows(), SUM_VARIANCE_SPLIT);
        TrendReport {
            records: self.audit.records,
            a3_rank_correlation: key_mean_correlation(&self.by_a3.rows()),
            prod12_min_inversions,
            prod12_bucket_pairs,
            sum_variance_low,
            sum_variance_high,
            audit: self.audit.clone(),
        }
    }
}
