use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn bri(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bri")).args(args).current_dir(dir).output().unwrap()
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = bri(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn cleaned(dir: &Path) {
    let input = fixtures().join("cleaning");
    ok(&["clean", "--in", input.to_str().unwrap(), "--out", "work", "--report", "report.tsv"], dir);
}

#[test]
fn version_help_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let version = ok(&["--version"], dir.path());
    assert!(version.contains("BRI CSV format 1"), "{version}");
    for sub in ["clean", "invariant", "reconstruct", "compare", "dedup", "bid", "bib", "heatmap", "perturb", "stats"] {
        let help = ok(&[sub, "--help"], dir.path());
        assert!(help.contains("Usage: bri"), "{sub}");
    }
    let bad = bri(&["clean", "--bogus"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("Usage"));
    assert_eq!(bri(&[], dir.path()).status.code(), Some(1));
    assert_eq!(
        bri(&["dedup", "--manifest", "m.tsv", "--report", "p.tsv", "--threshold", "x"], dir.path()).status.code(),
        Some(1)
    );
}

#[test]
fn data_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = bri(&["invariant", "--input", "missing.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.csv"));
    fs::write(dir.path().join("bad.csv"), "i,xN\n1,2\n").unwrap();
    assert_eq!(bri(&["reconstruct", "--input", "bad.csv"], dir.path()).status.code(), Some(2));
}

#[test]
fn clean_writes_manifest_coordinates_and_report() {
    let dir = tempfile::tempdir().unwrap();
    cleaned(dir.path());
    let manifest = fs::read_to_string(dir.path().join("work/manifest.tsv")).unwrap();
    assert_eq!(manifest, "entry\tchain\tm\n1CLN\tA\t24\n");
    assert!(dir.path().join("work/1CLN_A.csv").exists());
    let report = fs::read_to_string(dir.path().join("report.tsv")).unwrap();
    let steps: Vec<&str> = report.lines().skip(1).map(|l| l.rsplit('\t').next().unwrap()).collect();
    assert_eq!(steps, ["non-protein", "disordered", "non-consecutive", "clash", "incomplete", "non-standard"]);
}

#[test]
fn planted_duplicate_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    cleaned(dir.path());
    let work = dir.path().join("work");
    fs::copy(work.join("1CLN_A.csv"), work.join("9DUP_A.csv")).unwrap();
    let mut manifest = fs::read_to_string(work.join("manifest.tsv")).unwrap();
    manifest.push_str("9DUP\tA\t24\n");
    fs::write(work.join("manifest.tsv"), manifest).unwrap();

    ok(&["dedup", "--manifest", "work/manifest.tsv", "--report", "pairs.tsv", "--stats", "stats.tsv"], dir.path());
    let pairs = fs::read_to_string(dir.path().join("pairs.tsv")).unwrap();
    let rows: Vec<&str> = pairs.lines().collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1], "1CLN\tA\t9DUP\tA\t24\t0\ttrue\ttrue");
    let stats = fs::read_to_string(dir.path().join("stats.tsv")).unwrap();
    assert_eq!(stats.lines().nth(1), Some("1\t0\t1"));

    ok(
        &["--threads", "1", "dedup", "--manifest", "work/manifest.tsv", "--report", "one.tsv", "--no-prefilter"],
        dir.path(),
    );
    assert_eq!(fs::read_to_string(dir.path().join("one.tsv")).unwrap(), pairs);
}

#[test]
fn invariant_reconstruct_compare_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cif = fixtures().join("corpus/mix1.cif");
    ok(&["invariant", "--input", cif.to_str().unwrap(), "--out", "mix.csv"], dir.path());
    let bri_csv = fs::read_to_string(dir.path().join("mix.csv")).unwrap();
    assert!(bri_csv.starts_with("i,xN,yN,zN,xA,yA,zA,xC,yC,zC\n1,"));
    assert_eq!(bri_csv.lines().count(), 61);

    ok(&["reconstruct", "--input", "mix.csv", "--out", "rebuilt_A.csv"], dir.path());
    let cmp = ok(&["compare", cif.to_str().unwrap(), "rebuilt_A.csv"], dir.path());
    let row: Vec<&str> = cmp.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(row[0], "60");
    assert!(row[1].parse::<f64>().unwrap() <= 1e-9, "{cmp}");
    assert!(row[4].parse::<f64>().unwrap() <= 1e-9, "{cmp}");

    let again = ok(&["invariant", "--input", "rebuilt_A.csv"], dir.path());
    assert_eq!(again.lines().count(), 61);
}

#[test]
fn drawings_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let cif = fixtures().join("corpus/hlx1.cif");
    let input = cif.to_str().unwrap();
    ok(&["bid", "--input", input, "--out", "bid.svg", "--csv", "bid.csv"], dir.path());
    assert!(fs::read_to_string(dir.path().join("bid.svg")).unwrap().contains("<svg"));
    assert_eq!(fs::read_to_string(dir.path().join("bid.csv")).unwrap().lines().count(), 40);

    let summary = ok(&["stats", "--bonds", "bonds.tsv"], dir.path());
    assert_eq!(summary.lines().count(), 13);
    assert!(fs::read_to_string(dir.path().join("bonds.tsv")).unwrap().contains("lambda\t"));
    fs::write(dir.path().join("ranges.tsv"), &summary).unwrap();
    ok(&["bib", "--input", input, "--out", "bib.svg", "--ranges", "ranges.tsv"], dir.path());
    ok(&["bib", "--input", input, "--out", "own.svg", "--title", "helix"], dir.path());
    assert!(fs::read_to_string(dir.path().join("own.svg")).unwrap().contains("helix"));
    fs::write(dir.path().join("short.tsv"), summary.lines().take(4).collect::<Vec<_>>().join("\n")).unwrap();
    assert_eq!(
        bri(&["bib", "--input", input, "--out", "x.svg", "--ranges", "short.tsv"], dir.path()).status.code(),
        Some(2)
    );

    ok(&["heatmap", "--x", "xA", "--y", "yA", "--bins", "32", "--out", "h.png"], dir.path());
    assert!(fs::read(dir.path().join("h.png")).unwrap().starts_with(b"\x89PNG"));
    ok(&["heatmap", "--x", "xAN", "--y", "zC", "--linear", "--colormap", "viridis", "--out", "h.svg"], dir.path());
    assert!(fs::read_to_string(dir.path().join("h.svg")).unwrap().contains("<svg"));
    assert_eq!(bri(&["heatmap", "--x", "qq", "--out", "h.svg"], dir.path()).status.code(), Some(2));
}

#[test]
fn perturb_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cif = fixtures().join("corpus/str1.cif");
    let args = |threads: &'static str| {
        vec!["--threads", threads, "perturb", "--input", cif.to_str().unwrap(), "--trials", "4", "--seed", "9"]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>()
    };
    let run = |t| ok(&args(t).iter().map(String::as_str).collect::<Vec<_>>(), dir.path());
    let one = run("1");
    assert_eq!(one, run("3"));
    assert_eq!(one.lines().count(), 11);
    for line in one.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!(f[2] <= f[3], "{line}");
    }
}
