//! Corpus-level statistics: bond-length extremes and the continuity constants
//! derived from them, plus per-column summaries of the invariants.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::backbone::Backbone;
use crate::error::{Error, Result};
use crate::formats::format_g17;
use crate::geometry::residue_frame_at;
use crate::invariant::{geometric_sum, ChainInvariants, Column, BRI_WIDTH};

/// Extreme bond lengths and triangle heights over a corpus, in Å.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BondStats {
    /// Shortest N–CA bond.
    pub min_na: f64,
    /// Longest N–CA bond.
    pub max_na: f64,
    /// Longest CA–C bond.
    pub max_ac: f64,
    /// Longest peptide bond C₍ᵢ₎–N₍ᵢ₊₁₎; absent when every chain has one residue.
    pub max_cn: Option<f64>,
    /// Smallest height of a residue triangle at C.
    pub min_height: f64,
}

/// Atom-matching constant for chains of a given length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseBound {
    /// `+∞` when `overflow` is set.
    pub value: f64,
    pub overflow: bool,
}

impl BondStats {
    pub fn new(min_na: f64, max_na: f64, max_ac: f64, max_cn: Option<f64>, min_height: f64) -> Result<Self> {
        let stats = Self { min_na, max_na, max_ac, max_cn, min_height };
        stats.validate()?;
        Ok(stats)
    }

    fn validate(&self) -> Result<()> {
        let finite_positive = |v: f64| v.is_finite() && v > 0.0;
        if !finite_positive(self.min_na) || !(self.min_na <= self.max_na) || !self.max_na.is_finite() {
            return Err(Error::InvalidStats(format!(
                "need 0 < min N-CA ({}) <= max N-CA ({})",
                self.min_na, self.max_na
            )));
        }
        if !finite_positive(self.max_ac) || !finite_positive(self.min_height) {
            return Err(Error::InvalidStats("CA-C length and height must be positive".into()));
        }
        if self.max_cn.is_some_and(|v| !finite_positive(v)) {
            return Err(Error::InvalidStats("C-N length must be positive".into()));
        }
        Ok(())
    }

    pub fn with_max_cn(self, max_cn: f64) -> Result<Self> {
        Self::new(self.min_na, self.max_na, self.max_ac, Some(max_cn), self.min_height)
    }

    /// Longest bond of any kind, `L`.
    pub fn max_bond(&self) -> Option<f64> {
        self.max_cn.map(|cn| cn.max(self.max_na).max(self.max_ac))
    }

    /// Basis-perturbation constant `K = 1/l + (2/h)(1 + 2·L_AC/l)` with `l`
    /// the shortest N–CA bond.
    pub fn k(&self) -> f64 {
        1.0 / self.min_na + (2.0 / self.min_height) * (1.0 + 2.0 * self.max_ac / self.min_na)
    }

    /// Forward Lipschitz constant `λ = 2(1 + 2LK)`.
    pub fn lipschitz(&self) -> Option<f64> {
        self.max_bond().map(|l| 2.0 * (1.0 + 2.0 * l * self.k()))
    }

    /// Growth base `8LK` of the row weights.
    pub fn growth_base(&self) -> Option<f64> {
        self.max_bond().map(|l| 8.0 * l * self.k())
    }

    /// `μ = √3((8LK)^(m−1) − 1)/(8LK − 1)` for chains of `m ≥ 2` residues.
    pub fn inverse_bound(&self, m: usize) -> Option<InverseBound> {
        let base = self.growth_base()?;
        Some(match geometric_sum(base, m.max(2) - 1) {
            Some(v) => InverseBound { value: 3f64.sqrt() * v, overflow: false },
            None => InverseBound { value: f64::INFINITY, overflow: true },
        })
    }

    /// Extremes over both corpora.
    pub fn merge(&self, other: &BondStats) -> BondStats {
        let max_cn = match (self.max_cn, other.max_cn) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        BondStats {
            min_na: self.min_na.min(other.min_na),
            max_na: self.max_na.max(other.max_na),
            max_ac: self.max_ac.max(other.max_ac),
            max_cn,
            min_height: self.min_height.min(other.min_height),
        }
    }
}

fn chain_bond_stats(backbone: &Backbone) -> Result<BondStats> {
    let residues = backbone.residues();
    let mut min_na = f64::INFINITY;
    let mut max_na = 0.0f64;
    let mut max_ac = 0.0f64;
    let mut min_height = f64::INFINITY;
    for (i, r) in residues.iter().enumerate() {
        let u = residue_frame_at(r, i)?.u;
        let an = r.n - r.a;
        let ac = r.c - r.a;
        let na_len = an.norm();
        min_na = min_na.min(na_len);
        max_na = max_na.max(na_len);
        max_ac = max_ac.max(ac.norm());
        min_height = min_height.min((ac - u * ac.dot(u)).norm());
    }
    let max_cn = residues.windows(2).map(|w| w[0].c.distance(w[1].n)).reduce(f64::max);
    BondStats::new(min_na, max_na, max_ac, max_cn, min_height)
}

/// Exact bond extremes over every residue of every chain.
pub fn compute_bond_stats<'a>(corpus: impl IntoIterator<Item = &'a Backbone>) -> Result<BondStats> {
    corpus
        .into_iter()
        .map(chain_bond_stats)
        .try_fold(None::<BondStats>, |acc, s| -> Result<_> {
            let s = s?;
            Ok(Some(acc.map_or(s, |a| a.merge(&s))))
        })?
        .ok_or(Error::EmptyCorpus)
}

/// Bond statistics of the shipped corpus, used when no corpus is given.
pub fn default_bond_stats() -> Result<BondStats> {
    let backbones = crate::ingest::builtin_chains()?.iter().map(|c| c.backbone()).collect::<Result<Vec<_>>>()?;
    compute_bond_stats(&backbones)
}

/// Population statistics of one invariant column across a corpus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnSummary {
    pub column: Column,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

/// Mean, population standard deviation, min and max of all twelve invariant
/// columns, each over its own residue domain.
pub fn corpus_invariant_stats(corpus: &[Backbone]) -> Result<Vec<ColumnSummary>> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let invariants: Vec<ChainInvariants> = corpus.par_iter().map(ChainInvariants::compute).collect::<Result<_>>()?;
    Ok(summarize_columns(&invariants))
}

pub fn summarize_columns(invariants: &[ChainInvariants]) -> Vec<ColumnSummary> {
    Column::ALL
        .into_iter()
        .map(|column| {
            let values =
                || invariants.iter().flat_map(move |inv| (0..inv.len()).filter_map(move |i| inv.value(column, i)));
            let (mut count, mut sum) = (0usize, 0.0);
            let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
            for v in values() {
                count += 1;
                sum += v;
                min = min.min(v);
                max = max.max(v);
            }
            if count == 0 {
                return ColumnSummary { column, count, mean: f64::NAN, std: f64::NAN, min: f64::NAN, max: f64::NAN };
            }
            let mean = sum / count as f64;
            let var = values().map(|v| (v - mean) * (v - mean)).sum::<f64>() / count as f64;
            ColumnSummary { column, count, mean, std: var.sqrt(), min, max }
        })
        .collect()
}

const SUMMARY_HEADER: &str = "column\tcount\tmean\tstd\tmin\tmax";

/// One line per column: `column count mean std min max`.
pub fn write_column_summary_tsv(summary: &[ColumnSummary]) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for s in summary {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            s.column,
            s.count,
            format_g17(s.mean),
            format_g17(s.std),
            format_g17(s.min),
            format_g17(s.max)
        );
    }
    out
}

/// `(min, max)` of the nine BRI columns from a column summary TSV, for
/// barcodes drawn on a common scale.
pub fn read_bri_ranges_tsv(text: &str) -> Result<[(f64, f64); BRI_WIDTH]> {
    let mut ranges = [None; BRI_WIDTH];
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.trim() == SUMMARY_HEADER {
            continue;
        }
        let err = |message: String| Error::Parse { line: n + 1, message };
        let f: Vec<&str> = line.split('\t').map(str::trim).collect();
        if f.len() != 6 {
            return Err(err(format!("expected 6 tab-separated fields, found {}", f.len())));
        }
        let column: Column = f[0].parse().map_err(err)?;
        let num = |v: &str| v.parse::<f64>().map_err(|_| err(format!("bad number `{v}`")));
        if let Some(j) = column.bri_index() {
            ranges[j] = Some((num(f[4])?, num(f[5])?));
        }
    }
    let mut out = [(0.0, 0.0); BRI_WIDTH];
    for (j, r) in ranges.iter().enumerate() {
        out[j] =
            r.ok_or_else(|| Error::Parse { line: 0, message: format!("no range for column {}", Column::BRI[j]) })?;
    }
    Ok(out)
}

/// Bond extremes and the constants derived from them, one `name value` pair
/// per line; constants needing a peptide bond are omitted without one.
pub fn write_bond_stats_tsv(stats: &BondStats) -> String {
    let mut rows = vec![
        ("min_na", stats.min_na),
        ("max_na", stats.max_na),
        ("max_ac", stats.max_ac),
        ("min_height", stats.min_height),
        ("K", stats.k()),
    ];
    if let (Some(cn), Some(l), Some(lambda), Some(b)) =
        (stats.max_cn, stats.max_bond(), stats.lipschitz(), stats.growth_base())
    {
        rows.extend([("max_cn", cn), ("L", l), ("lambda", lambda), ("growth_base", b)]);
    }
    let mut out = String::from("name\tvalue\n");
    for (name, v) in rows {
        let _ = writeln!(out, "{name}\t{}", format_g17(v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backbone::Residue;
    use crate::geometry::Vec3;
    use crate::invariant::BriMatrix;
    use crate::synth;

    fn unit_residue() -> Backbone {
        Backbone::new(vec![Residue::new(Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO, Vec3::new(0.0, 1.0, 0.0))]).unwrap()
    }

    #[test]
    fn single_residue_constants() {
        let s = compute_bond_stats([&unit_residue()]).unwrap();
        assert_eq!((s.min_na, s.max_na, s.max_ac, s.min_height), (1.0, 1.0, 1.0, 1.0));
        assert_eq!(s.max_cn, None);
        assert_eq!(s.lipschitz(), None);
        assert_eq!(s.k(), 7.0);
        let s = s.with_max_cn(1.0).unwrap();
        assert_eq!(s.lipschitz(), Some(2.0 * (1.0 + 2.0 * 7.0)));
        assert_eq!(s.growth_base(), Some(56.0));
    }

    #[test]
    fn duplicated_corpus_gives_same_stats() {
        let a = synth::random_backbone(40, 3);
        let one = compute_bond_stats([&a]).unwrap();
        assert_eq!(compute_bond_stats([&a, &a]).unwrap(), one);
        assert!(one.lipschitz().unwrap() > 2.0);
        assert!(matches!(compute_bond_stats(std::iter::empty()), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn inverse_bound_overflows_gracefully() {
        let s = compute_bond_stats([&synth::alpha_helix(10)]).unwrap();
        let b = s.growth_base().unwrap();
        let mu3 = s.inverse_bound(3).unwrap();
        assert!(!mu3.overflow);
        assert!((mu3.value - 3f64.sqrt() * (1.0 + b)).abs() < 1e-9 * mu3.value);
        let big = s.inverse_bound(10_000).unwrap();
        assert!(big.overflow && big.value.is_infinite());
    }

    #[test]
    fn default_stats_are_plausible() {
        let s = default_bond_stats().unwrap();
        assert!((1.45..1.47).contains(&s.min_na) && (1.45..1.47).contains(&s.max_na));
        assert!((1.32..1.34).contains(&s.max_cn.unwrap()));
        let lambda = s.lipschitz().unwrap();
        assert!((20.0..60.0).contains(&lambda), "{lambda}");
    }

    #[test]
    fn stats_validation() {
        assert!(BondStats::new(1.5, 1.4, 1.5, None, 1.0).is_err());
        assert!(BondStats::new(0.0, 1.4, 1.5, None, 1.0).is_err());
        assert!(BondStats::new(1.4, 1.5, 1.5, Some(-1.0), 1.0).is_err());
    }

    #[test]
    fn summaries() {
        // Identical residues: every deviation is zero.
        let helix = synth::alpha_helix(30);
        let table = corpus_invariant_stats(std::slice::from_ref(&helix)).unwrap();
        for s in &table {
            assert!(s.std < 1e-9, "{s:?}");
        }
        assert_eq!(table.iter().find(|s| s.column == Column::XAn).unwrap().count, 30);
        assert_eq!(table.iter().find(|s| s.column == Column::ZA).unwrap().count, 29);
        assert_eq!(table.iter().find(|s| s.column == Column::XN).unwrap().count, 29);

        // Two-value column {1, 3}.
        let bri =
            BriMatrix::from_rows(vec![[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 1.0, 0.0], [1.0; 9], [3.0; 9]]).unwrap();
        let trin = crate::invariant::compute_trin(&synth::random_backbone(3, 0)).unwrap();
        let s = summarize_columns(&[ChainInvariants { trin, bri }]);
        let ya = s.iter().find(|s| s.column == Column::YA).unwrap();
        assert_eq!((ya.count, ya.mean, ya.std, ya.min, ya.max), (2, 2.0, 1.0, 1.0, 3.0));
        assert!(matches!(corpus_invariant_stats(&[]), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn summary_tsv_gives_barcode_ranges() {
        let corpus = [synth::random_backbone(30, 1), synth::random_backbone(20, 2)];
        let summary = corpus_invariant_stats(&corpus).unwrap();
        let tsv = write_column_summary_tsv(&summary);
        assert_eq!(tsv.lines().count(), 13);
        let ranges = read_bri_ranges_tsv(&tsv).unwrap();
        for (j, c) in Column::BRI.iter().enumerate() {
            let s = summary.iter().find(|s| s.column == *c).unwrap();
            assert_eq!(ranges[j], (s.min, s.max));
        }
        let partial: String = tsv.lines().take(5).map(|l| format!("{l}\n")).collect();
        assert!(read_bri_ranges_tsv(&partial).is_err());
    }

    #[test]
    fn bond_stats_tsv() {
        let s = compute_bond_stats([&synth::alpha_helix(5)]).unwrap();
        let tsv = write_bond_stats_tsv(&s);
        assert!(tsv.contains(&format!("lambda\t{}", format_g17(s.lipschitz().unwrap()))));
        assert_eq!(tsv.lines().count(), 10);
    }
}
