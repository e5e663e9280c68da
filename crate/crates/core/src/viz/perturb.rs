use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::svg;
use crate::backbone::Backbone;
use crate::error::{Error, Result};
use crate::formats::format_g17;
use crate::invariant::{compute_bri, linf};
use crate::stats::{compute_bond_stats, BondStats};
use crate::synth::jitter;

/// Redraws allowed per trial when noise makes a residue degenerate.
pub const MAX_DEGENERATE_RETRIES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub eps: f64,
    /// Mean of `samples`.
    pub mean: f64,
    /// L∞ BRI distance of each trial.
    pub samples: Vec<f64>,
}

impl CurvePoint {
    pub fn max(&self) -> f64 {
        self.samples.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationCurve {
    pub points: Vec<CurvePoint>,
    pub trials: usize,
    /// Least-squares slope through the origin of mean distance against ε.
    pub slope: f64,
    /// Bond statistics over the original chain and every perturbed copy.
    pub stats: BondStats,
}

impl PerturbationCurve {
    /// Theoretical Lipschitz constant for the trial set, if the chain has a
    /// peptide bond.
    pub fn lambda(&self) -> Option<f64> {
        self.stats.lipschitz()
    }
}

fn check_eps(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return Err(Error::InvalidInput("no noise levels given".into()));
    }
    if eps.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
        return Err(Error::InvalidInput("noise levels must be finite and non-negative".into()));
    }
    if eps.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("noise levels must be strictly increasing".into()));
    }
    Ok(())
}

/// Noise levels from `start:stop:step` (inclusive) or a comma-separated list.
/// Range values are rounded to 12 decimals so `0.01:0.1:0.01` gives exactly
/// the decimals one would type.
pub fn parse_eps_spec(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidInput(format!("bad noise levels `{spec}`"));
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| bad());
    let eps = match spec.split(':').collect::<Vec<_>>()[..] {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
                return Err(bad());
            }
            let n = ((stop - start) / step + 1e-9).floor();
            if n > 1e6 {
                return Err(bad());
            }
            (0..=n as usize).map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12).collect()
        }
        [_] => spec.split(',').map(num).collect::<Result<Vec<_>>>()?,
        _ => return Err(bad()),
    };
    check_eps(&eps)?;
    Ok(eps)
}

/// Adds i.i.d. uniform noise in `[−ε, ε]` to every coordinate of `s`,
/// `trials` times per ε, and records the BRI distance to the original.
pub fn perturb_experiment(s: &Backbone, eps: &[f64], trials: usize, seed: u64) -> Result<PerturbationCurve> {
    check_eps(eps)?;
    if trials == 0 {
        return Err(Error::InvalidInput("need at least one trial".into()));
    }
    let base = compute_bri(s)?;
    let mut stats = compute_bond_stats([s])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(eps.len());
    for &e in eps {
        let mut samples = Vec::with_capacity(trials);
        for _ in 0..trials {
            let mut attempt = 0;
            let (q, bri) = loop {
                let q = jitter(s, e, &mut rng);
                match compute_bri(&q) {
                    Ok(bri) => break (q, bri),
                    Err(err @ Error::DegenerateResidue { .. }) => {
                        attempt += 1;
                        if attempt > MAX_DEGENERATE_RETRIES {
                            return Err(err);
                        }
                    }
                    Err(err) => return Err(err),
                }
            };
            stats = stats.merge(&compute_bond_stats([&q])?);
            samples.push(linf(&base, &bri)?);
        }
        let mean = samples.iter().sum::<f64>() / trials as f64;
        points.push(CurvePoint { eps: e, mean, samples });
    }
    let num: f64 = points.iter().map(|p| p.eps * p.mean).sum();
    let den: f64 = points.iter().map(|p| p.eps * p.eps).sum();
    let slope = if den > 0.0 { num / den } else { 0.0 };
    Ok(PerturbationCurve { points, trials, slope, stats })
}

/// Columns `eps,mean_linf,max_linf,lambda_eps`; the last is empty when λ is unknown.
pub fn write_curve_csv(curve: &PerturbationCurve) -> String {
    let lambda = curve.lambda();
    let mut out = String::from("eps,mean_linf,max_linf,lambda_eps\n");
    for p in &curve.points {
        let bound = lambda.map(|l| format_g17(l * p.eps)).unwrap_or_default();
        writeln!(out, "{},{},{},{}", format_g17(p.eps), format_g17(p.mean), format_g17(p.max()), bound).unwrap();
    }
    out
}

/// Mean and worst distance against ε, with the fitted line and the λ·ε bound.
pub fn render_curve_svg(curve: &PerturbationCurve, title: &str) -> String {
    let emax = curve.points.last().map_or(1.0, |p| p.eps);
    let ymax = curve.points.iter().map(CurvePoint::max).fold(curve.slope * emax, f64::max);
    let lambda = curve.lambda();
    let top = ymax.max(lambda.map_or(0.0, |l| (l * emax).min(4.0 * ymax)));
    let mut plot = svg::Plot::new(760.0, 460.0, (0.0, emax), (0.0, top));
    let mean: Vec<_> = curve.points.iter().map(|p| (p.eps, p.mean)).collect();
    plot.polyline(mean.iter().copied(), "#1f4e9c", false);
    plot.markers(mean.iter().copied(), "#1f4e9c");
    plot.markers(curve.points.iter().map(|p| (p.eps, p.max())), "#e0473c");
    plot.polyline([(0.0, 0.0), (emax, curve.slope * emax)], "#1d7a33", true);
    let mut legend = vec![("mean L∞", "#1f4e9c"), ("worst trial", "#e0473c"), ("fitted slope", "#1d7a33")];
    if let Some(l) = lambda {
        let end = (top / l).min(emax);
        plot.polyline([(0.0, 0.0), (end, l * end)], "#777777", true);
        legend.push(("λ·ε bound", "#777777"));
    }
    plot.axes("noise ε (Å)", "L∞ BRI distance (Å)");
    plot.legend(&legend);
    let suffix = match lambda {
        Some(l) => format!("slope {:.3}, λ {:.3}", curve.slope, l),
        None => format!("slope {:.3}", curve.slope),
    };
    plot.finish(&format!("{title}: {suffix}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn zero_noise_gives_zero_distance() {
        let s = synth::random_backbone(20, 1);
        let c = perturb_experiment(&s, &[0.0, 0.05], 3, 7).unwrap();
        assert_eq!(c.points[0].mean, 0.0);
        assert!(c.points[1].mean > 0.0);
    }

    #[test]
    fn slope_is_least_squares_through_origin() {
        let s = synth::beta_strand(30);
        let c = perturb_experiment(&s, &[0.01, 0.02, 0.05], 5, 3).unwrap();
        let expected =
            c.points.iter().map(|p| p.eps * p.mean).sum::<f64>() / c.points.iter().map(|p| p.eps * p.eps).sum::<f64>();
        assert_eq!(c.slope, expected);
        assert!(c.slope > 0.0);
        assert!(c.slope <= c.lambda().unwrap());
    }

    #[test]
    fn deterministic_per_seed() {
        let s = synth::alpha_helix(25);
        let eps = [0.01, 0.1];
        assert_eq!(perturb_experiment(&s, &eps, 4, 11).unwrap(), perturb_experiment(&s, &eps, 4, 11).unwrap());
        assert_ne!(perturb_experiment(&s, &eps, 4, 11).unwrap(), perturb_experiment(&s, &eps, 4, 12).unwrap());
    }

    #[test]
    fn rejects_bad_noise_lists() {
        let s = synth::alpha_helix(5);
        assert!(perturb_experiment(&s, &[], 1, 0).is_err());
        assert!(perturb_experiment(&s, &[0.1, 0.1], 1, 0).is_err());
        assert!(perturb_experiment(&s, &[-0.1], 1, 0).is_err());
        assert!(perturb_experiment(&s, &[0.1], 0, 0).is_err());
    }

    #[test]
    fn eps_specs() {
        let eps = parse_eps_spec("0.01:0.1:0.01").unwrap();
        assert_eq!(eps.len(), 10);
        assert_eq!(eps[2], 0.03);
        assert_eq!(eps[9], 0.1);
        assert_eq!(parse_eps_spec("0.05, 0.1").unwrap(), vec![0.05, 0.1]);
        assert_eq!(parse_eps_spec("0.1:0.1:1").unwrap(), vec![0.1]);
        for bad in ["", "0.1:0.01:0.01", "0:1:0", "a", "0.1,0.05", "1:2"] {
            assert!(parse_eps_spec(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn csv_and_svg() {
        let s = synth::alpha_helix(12);
        let c = perturb_experiment(&s, &[0.01, 0.02], 2, 1).unwrap();
        let csv = write_curve_csv(&c);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(1).unwrap().starts_with("0.01,"));
        let svg = render_curve_svg(&c, "helix");
        assert!(svg.contains("λ·ε bound"));
    }
}
