//! `bri`: compute, compare, deduplicate and draw backbone rigid invariants.
//!
//! Exit codes: 0 on success, 1 on a usage error, 2 on a data error.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bri::compare::{compare_backbones, write_comparison_tsv};
use bri::dedup::{scan_with_stats, write_pairs_tsv, write_stats_tsv, ScanConfig};
use bri::formats::{read_bri_csv, write_bri_csv, FORMAT_VERSION};
use bri::ingest::{
    builtin_chains, chain_from_backbone, clean_directory, load_chain, load_manifest_corpus, write_coords_csv,
    write_report, ChainRecord, CleanStep,
};
use bri::stats::{read_bri_ranges_tsv, summarize_columns, write_bond_stats_tsv, write_column_summary_tsv};
use bri::viz::{
    bib_svg, bid_csv, bid_svg, build_heatmap, parse_eps_spec, perturb_experiment, render_curve_svg, render_heatmap_png,
    render_heatmap_svg, write_curve_csv, Colormap, Scale, DEFAULT_BINS,
};
use bri::{compute_bond_stats, compute_bri, reconstruct, Backbone, ChainInvariants, Column};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "bri", about = "Backbone rigid invariants of protein chains")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and clean a directory of mmCIF files into a coordinate corpus.
    Clean {
        /// Directory with *.cif or *.cif.gz files.
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        /// Directory for coordinate CSVs and manifest.tsv.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Rejection report (TSV: entry, chain, step).
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
    /// Write the BRI matrix of one chain as CSV.
    Invariant {
        #[command(flatten)]
        chain: ChainArg,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Rebuild coordinates in canonical pose from a BRI CSV.
    Reconstruct {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Coordinate CSV; standard output when absent.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Distances between two chains of equal length.
    Compare {
        first: PathBuf,
        second: PathBuf,
        /// Chain of the first file (mmCIF only).
        #[arg(long)]
        chain1: Option<String>,
        /// Chain of the second file (mmCIF only).
        #[arg(long)]
        chain2: Option<String>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Find duplicate and near-duplicate chains in a cleaned corpus.
    Dedup {
        #[arg(long, value_name = "FILE")]
        manifest: PathBuf,
        /// Largest reported L∞ BRI distance in Å.
        #[arg(long, default_value_t = 0.01)]
        threshold: f64,
        /// Pair list (TSV).
        #[arg(long, value_name = "FILE")]
        report: PathBuf,
        /// Compare every same-length pair without the Brain test.
        #[arg(long)]
        no_prefilter: bool,
        /// Slack in Å added to the threshold for the Brain test.
        #[arg(long, default_value_t = 0.0)]
        brain_margin: f64,
        /// Pruning counts (TSV).
        #[arg(long, value_name = "FILE")]
        stats: Option<PathBuf>,
    },
    /// Backbone invariant diagram: the nine BRI columns against residue index.
    Bid {
        #[command(flatten)]
        chain: ChainArg,
        /// SVG output.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Plotted values as CSV.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
        #[arg(long)]
        title: Option<String>,
    },
    /// Backbone invariant barcode: one RGB cell per residue and atom.
    Bib {
        #[command(flatten)]
        chain: ChainArg,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Column summary TSV from `bri stats`, for a scale shared across chains.
        #[arg(long, value_name = "FILE")]
        ranges: Option<PathBuf>,
        #[arg(long)]
        title: Option<String>,
    },
    /// 2D histogram of two invariant columns over every residue of a corpus.
    Heatmap {
        #[command(flatten)]
        corpus: CorpusArg,
        #[arg(long, default_value = "xA")]
        x: String,
        #[arg(long, default_value = "yA")]
        y: String,
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
        /// Colour by log10(1 + count) (default).
        #[arg(long, conflicts_with = "linear")]
        log: bool,
        /// Colour by count.
        #[arg(long)]
        linear: bool,
        #[arg(long, default_value = "rainbow")]
        colormap: String,
        /// Output format; taken from the file extension when absent.
        #[arg(long, value_enum)]
        format: Option<ImageFormat>,
        /// Fixed x range as LO:HI.
        #[arg(long, value_name = "LO:HI")]
        x_range: Option<String>,
        /// Fixed y range as LO:HI.
        #[arg(long, value_name = "LO:HI")]
        y_range: Option<String>,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// BRI distance under uniform coordinate noise, with the λ·ε bound.
    Perturb {
        #[command(flatten)]
        chain: ChainArg,
        /// START:STOP:STEP or a comma-separated list, in Å.
        #[arg(long, default_value = "0.01:0.1:0.01")]
        eps: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Curve as CSV; standard output when absent.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Per-column statistics of the invariants and corpus bond extremes.
    Stats {
        #[command(flatten)]
        corpus: CorpusArg,
        /// Column summary TSV; standard output when absent.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Bond extremes and derived constants (TSV).
        #[arg(long, value_name = "FILE")]
        bonds: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ChainArg {
    /// Coordinate CSV (`{entry}_{chain}.csv`) or mmCIF file.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Author chain name inside an mmCIF file; the first protein chain by default.
    #[arg(long)]
    chain: Option<String>,
}

#[derive(Args)]
struct CorpusArg {
    /// Manifest written by `bri clean`; the shipped sample corpus when absent.
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ImageFormat {
    Svg,
    Png,
}

fn write_output(path: Option<&Path>, data: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, data).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(data)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn load_backbone(arg: &ChainArg) -> Result<(ChainRecord, Backbone)> {
    let chain = load_chain(&arg.input, arg.chain.as_deref())?;
    let backbone =
        chain.backbone().with_context(|| format!("chain {}/{} cannot be used", chain.entry_id, chain.chain_id))?;
    Ok((chain, backbone))
}

fn load_corpus(arg: &CorpusArg) -> Result<Vec<Backbone>> {
    let chains = match &arg.manifest {
        Some(m) => load_manifest_corpus(m)?,
        None => builtin_chains()?,
    };
    if chains.is_empty() {
        bail!("corpus has no chains");
    }
    chains.par_iter().map(|c| c.backbone().with_context(|| format!("chain {}/{}", c.entry_id, c.chain_id))).collect()
}

fn parse_range(spec: &str) -> Result<(f64, f64)> {
    let (lo, hi) = spec.split_once(':').with_context(|| format!("range `{spec}` is not LO:HI"))?;
    Ok((lo.trim().parse()?, hi.trim().parse()?))
}

fn title_of(title: &Option<String>, chain: &ChainRecord) -> String {
    title.clone().unwrap_or_else(|| format!("{} chain {}", chain.entry_id, chain.chain_id))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Clean { input, out, report } => {
            let cleaned = clean_directory(&input, &out)?;
            if let Some(path) = &report {
                write_output(Some(path), write_report(&cleaned.report).as_bytes())?;
            }
            let r = &cleaned.report;
            let per_step: Vec<String> =
                CleanStep::ALL.iter().map(|s| format!("{} {}", s.name(), r.count(*s))).collect();
            eprintln!(
                "{} files, {} chains accepted, {} rejected ({})",
                cleaned.files,
                r.accepted(),
                r.rejected(),
                per_step.join(", ")
            );
        }
        Command::Invariant { chain, out } => {
            let (_, backbone) = load_backbone(&chain)?;
            write_output(out.as_deref(), write_bri_csv(&compute_bri(&backbone)?).as_bytes())?;
        }
        Command::Reconstruct { input, out } => {
            let text = fs::read_to_string(&input).with_context(|| format!("cannot read {}", input.display()))?;
            let bri = read_bri_csv(&text).with_context(|| format!("in {}", input.display()))?;
            let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("chain");
            let chain = chain_from_backbone(stem, "A", &reconstruct(&bri)?);
            write_output(out.as_deref(), write_coords_csv(&chain).as_bytes())?;
        }
        Command::Compare { first, second, chain1, chain2, out } => {
            let a = load_backbone(&ChainArg { input: first, chain: chain1 })?.1;
            let b = load_backbone(&ChainArg { input: second, chain: chain2 })?.1;
            write_output(out.as_deref(), write_comparison_tsv(&compare_backbones(&a, &b)?).as_bytes())?;
        }
        Command::Dedup { manifest, threshold, report, no_prefilter, brain_margin, stats } => {
            let corpus = load_manifest_corpus(&manifest)?;
            let cfg = ScanConfig { near_threshold: threshold, prefilter: !no_prefilter, brain_margin };
            let (pairs, counts) = scan_with_stats(&corpus, &cfg)?;
            write_output(Some(&report), write_pairs_tsv(&pairs).as_bytes())?;
            if let Some(path) = &stats {
                write_output(Some(path), write_stats_tsv(&counts).as_bytes())?;
            }
            let exact = pairs.iter().filter(|p| p.is_exact()).count();
            eprintln!("{} chains, {} pairs within {threshold} Å ({exact} at zero distance)", corpus.len(), pairs.len());
        }
        Command::Bid { chain, out, csv, title } => {
            let (record, backbone) = load_backbone(&chain)?;
            let bri = compute_bri(&backbone)?;
            write_output(Some(&out), bid_svg(&bri, &title_of(&title, &record))?.as_bytes())?;
            if let Some(path) = &csv {
                write_output(Some(path), bid_csv(&bri)?.as_bytes())?;
            }
        }
        Command::Bib { chain, out, ranges, title } => {
            let (record, backbone) = load_backbone(&chain)?;
            let ranges = match &ranges {
                Some(p) => {
                    let text = fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
                    Some(read_bri_ranges_tsv(&text).with_context(|| format!("in {}", p.display()))?)
                }
                None => None,
            };
            let svg = bib_svg(&compute_bri(&backbone)?, ranges.as_ref(), &title_of(&title, &record))?;
            write_output(Some(&out), svg.as_bytes())?;
        }
        Command::Heatmap { corpus, x, y, bins, log: _, linear, colormap, format, x_range, y_range, out } => {
            let (x, y): (Column, Column) =
                (x.parse().map_err(anyhow::Error::msg)?, y.parse().map_err(anyhow::Error::msg)?);
            let colormap: Colormap = colormap.parse().map_err(anyhow::Error::msg)?;
            let scale = if linear { Scale::Linear } else { Scale::Log };
            let x_range = x_range.as_deref().map(parse_range).transpose()?;
            let y_range = y_range.as_deref().map(parse_range).transpose()?;
            let invariants: Vec<ChainInvariants> =
                load_corpus(&corpus)?.par_iter().map(ChainInvariants::compute).collect::<bri::Result<_>>()?;
            let map = build_heatmap(&invariants, x, y, (bins, bins), x_range, y_range)?;
            let png = match format {
                Some(f) => matches!(f, ImageFormat::Png),
                None => out.extension().is_some_and(|e| e.eq_ignore_ascii_case("png")),
            };
            let data = if png {
                render_heatmap_png(&map, scale, colormap)?
            } else {
                render_heatmap_svg(&map, scale, colormap).into_bytes()
            };
            write_output(Some(&out), &data)?;
        }
        Command::Perturb { chain, eps, trials, seed, out, svg } => {
            let (record, backbone) = load_backbone(&chain)?;
            let eps = parse_eps_spec(&eps)?;
            let curve = perturb_experiment(&backbone, &eps, trials, seed)?;
            write_output(out.as_deref(), write_curve_csv(&curve).as_bytes())?;
            if let Some(path) = &svg {
                write_output(Some(path), render_curve_svg(&curve, &title_of(&None, &record)).as_bytes())?;
            }
        }
        Command::Stats { corpus, out, bonds } => {
            let backbones = load_corpus(&corpus)?;
            let invariants: Vec<ChainInvariants> =
                backbones.par_iter().map(ChainInvariants::compute).collect::<bri::Result<_>>()?;
            write_output(out.as_deref(), write_column_summary_tsv(&summarize_columns(&invariants)).as_bytes())?;
            if let Some(path) = &bonds {
                write_output(Some(path), write_bond_stats_tsv(&compute_bond_stats(&backbones)?).as_bytes())?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let command = Cli::command().version(format!("{} (BRI CSV format {FORMAT_VERSION})", bri::VERSION));
    let cli = match command.try_get_matches().and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
