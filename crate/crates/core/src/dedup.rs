//! Duplicate and near-duplicate chains in a corpus.
//!
//! Chains are grouped by length and compared all-vs-all by the L∞ distance of
//! their BRI matrices. The distance between Brain vectors never exceeds the
//! BRI distance, so a pair whose Brain vectors are already further apart than
//! the threshold is skipped without looking at the full matrices.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formats::format_g17;
use crate::ingest::ChainRecord;
use crate::invariant::{compute_brain, compute_bri, linf_capped, BrainVector, BriMatrix};

/// BRI distances at or below this count as zero (Å).
pub const ZERO_DISTANCE: f64 = 1e-12;

pub const PAIRS_TSV_HEADER: &str = "entry1\tchain1\tentry2\tchain2\tm\tlinf_bri\tcoords_identical\tseqs_equal";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    /// Largest reported BRI distance, in Å.
    pub near_threshold: f64,
    /// Skip pairs whose Brain distance exceeds the threshold.
    pub prefilter: bool,
    /// Extra slack added to the threshold before pruning by Brain distance.
    pub brain_margin: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { near_threshold: 0.01, prefilter: true, brain_margin: 0.0 }
    }
}

impl ScanConfig {
    fn validate(&self) -> Result<()> {
        if !(self.near_threshold >= 0.0) || !(self.brain_margin >= 0.0) {
            return Err(Error::InvalidStats(format!(
                "threshold ({}) and margin ({}) must be non-negative",
                self.near_threshold, self.brain_margin
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChainRef {
    pub entry_id: String,
    pub chain_id: String,
}

impl ChainRef {
    fn of(chain: &ChainRecord) -> Self {
        Self { entry_id: chain.entry_id.clone(), chain_id: chain.chain_id.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DuplicatePair {
    /// The smaller of the two references.
    pub first: ChainRef,
    pub second: ChainRef,
    pub m: usize,
    pub linf_bri: f64,
    /// Every stored coordinate is bit-for-bit the same.
    pub coordinates_identical: bool,
    pub sequences_equal: bool,
}

impl DuplicatePair {
    pub fn is_exact(&self) -> bool {
        self.linf_bri <= ZERO_DISTANCE
    }
}

/// How many same-length pairs were looked at and how the Brain test split them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PrefilterStats {
    pub considered: u64,
    pub pruned: u64,
    pub compared: u64,
}

impl std::ops::Add for PrefilterStats {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            considered: self.considered + o.considered,
            pruned: self.pruned + o.pruned,
            compared: self.compared + o.compared,
        }
    }
}

struct Prepared<'a> {
    chain: &'a ChainRecord,
    bri: BriMatrix,
    brain: Option<BrainVector>,
}

fn prepare(corpus: &[ChainRecord]) -> Result<Vec<Prepared<'_>>> {
    corpus
        .par_iter()
        .map(|chain| {
            let wrap = |e: Error| Error::InChain {
                entry_id: chain.entry_id.clone(),
                chain_id: chain.chain_id.clone(),
                source: Box::new(e),
            };
            let bri = chain.backbone().and_then(|b| compute_bri(&b)).map_err(wrap)?;
            let brain = compute_brain(&bri).ok();
            Ok(Prepared { chain, bri, brain })
        })
        .collect()
}

fn coordinates_identical(a: &ChainRecord, b: &ChainRecord) -> bool {
    let bits = |c: &ChainRecord| -> Vec<u64> {
        c.residues
            .iter()
            .flat_map(|r| r.atoms().flat_map(|s| s.position.to_array()).collect::<Vec<_>>())
            .map(f64::to_bits)
            .collect()
    };
    a.residues.len() == b.residues.len() && bits(a) == bits(b)
}

fn compare(a: &Prepared, b: &Prepared, cfg: &ScanConfig) -> (PrefilterStats, Option<DuplicatePair>) {
    let mut stats = PrefilterStats { considered: 1, ..Default::default() };
    if cfg.prefilter {
        if let (Some(x), Some(y)) = (&a.brain, &b.brain) {
            if x.linf(y) > cfg.near_threshold + cfg.brain_margin {
                stats.pruned = 1;
                return (stats, None);
            }
        }
    }
    stats.compared = 1;
    let pair = linf_capped(&a.bri, &b.bri, cfg.near_threshold).map(|d| {
        let (ra, rb) = (ChainRef::of(a.chain), ChainRef::of(b.chain));
        let (first, second) = if ra <= rb { (ra, rb) } else { (rb, ra) };
        DuplicatePair {
            first,
            second,
            m: a.bri.len(),
            linf_bri: d,
            coordinates_identical: coordinates_identical(a.chain, b.chain),
            sequences_equal: a.chain.sequence() == b.chain.sequence(),
        }
    });
    (stats, pair)
}

fn pair_order(a: &DuplicatePair, b: &DuplicatePair) -> Ordering {
    a.linf_bri.total_cmp(&b.linf_bri).then_with(|| a.first.cmp(&b.first)).then_with(|| a.second.cmp(&b.second))
}

/// Scans all same-length pairs and returns those within the threshold,
/// sorted by distance then references, with the pruning counts.
pub fn scan_with_stats(corpus: &[ChainRecord], cfg: &ScanConfig) -> Result<(Vec<DuplicatePair>, PrefilterStats)> {
    cfg.validate()?;
    let prepared = prepare(corpus)?;
    let mut groups: BTreeMap<usize, Vec<&Prepared>> = BTreeMap::new();
    for p in &prepared {
        groups.entry(p.bri.len()).or_default().push(p);
    }
    let (mut pairs, stats) = groups
        .values()
        .flat_map(|g| (0..g.len()).map(move |i| (g, i)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(group, i)| {
            let mut found = Vec::new();
            let mut stats = PrefilterStats::default();
            for j in i + 1..group.len() {
                let (s, pair) = compare(group[i], group[j], cfg);
                stats = stats + s;
                found.extend(pair);
            }
            (found, stats)
        })
        .reduce(
            || (Vec::new(), PrefilterStats::default()),
            |(mut a, sa), (b, sb)| {
                a.extend(b);
                (a, sa + sb)
            },
        );
    pairs.sort_by(pair_order);
    Ok((pairs, stats))
}

pub fn scan(corpus: &[ChainRecord], cfg: &ScanConfig) -> Result<Vec<DuplicatePair>> {
    scan_with_stats(corpus, cfg).map(|(pairs, _)| pairs)
}

pub fn prefilter_stats(corpus: &[ChainRecord], cfg: &ScanConfig) -> Result<PrefilterStats> {
    scan_with_stats(corpus, cfg).map(|(_, stats)| stats)
}

pub fn write_pairs_tsv(pairs: &[DuplicatePair]) -> String {
    let mut out = format!("{PAIRS_TSV_HEADER}\n");
    for p in pairs {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            p.first.entry_id,
            p.first.chain_id,
            p.second.entry_id,
            p.second.chain_id,
            p.m,
            format_g17(p.linf_bri),
            p.coordinates_identical,
            p.sequences_equal
        )
        .unwrap();
    }
    out
}

pub fn write_stats_tsv(stats: &PrefilterStats) -> String {
    format!("considered\tpruned\tcompared\n{}\t{}\t{}\n", stats.considered, stats.pruned, stats.compared)
}
