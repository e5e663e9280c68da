use std::fmt;
use std::str::FromStr;

use super::{ChainRecord, PROTEIN_KIND};

/// Consecutive backbone atoms closer than this (Å) are a clash.
pub const CLASH_DISTANCE: f64 = 0.01;

pub const STANDARD_RESIDUES: [&str; 20] = [
    "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE", "LEU", "LYS", "MET", "PHE", "PRO", "SER",
    "THR", "TRP", "TYR", "VAL",
];

pub fn is_standard_residue(name: &str) -> bool {
    STANDARD_RESIDUES.contains(&name)
}

/// Cleaning steps in the order they are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CleanStep {
    NonProtein,
    Disordered,
    NonConsecutive,
    Clash,
    Incomplete,
    NonStandard,
}

impl CleanStep {
    pub const ALL: [CleanStep; 6] = [
        CleanStep::NonProtein,
        CleanStep::Disordered,
        CleanStep::NonConsecutive,
        CleanStep::Clash,
        CleanStep::Incomplete,
        CleanStep::NonStandard,
    ];

    /// Step number, 1 to 6.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            CleanStep::NonProtein => "non-protein",
            CleanStep::Disordered => "disordered",
            CleanStep::NonConsecutive => "non-consecutive",
            CleanStep::Clash => "clash",
            CleanStep::Incomplete => "incomplete",
            CleanStep::NonStandard => "non-standard",
        }
    }

    fn fails(self, chain: &ChainRecord) -> bool {
        match self {
            CleanStep::NonProtein => chain.entity_kind != PROTEIN_KIND,
            CleanStep::Disordered => {
                chain.residues.iter().flat_map(|r| r.atoms()).any(|a| a.altloc || !(a.occupancy >= 1.0))
            }
            CleanStep::NonConsecutive => chain.residues.windows(2).any(|w| w[1].seq_index != w[0].seq_index + 1),
            CleanStep::Clash => {
                let mut atoms = chain.residues.iter().flat_map(|r| r.atoms()).map(|a| a.position);
                let Some(mut prev) = atoms.next() else { return false };
                atoms.any(|p| {
                    let close = p.distance(prev) < CLASH_DISTANCE;
                    prev = p;
                    close
                })
            }
            CleanStep::Incomplete => chain.residues.iter().any(|r| r.n.is_none() || r.a.is_none() || r.c.is_none()),
            CleanStep::NonStandard => chain.residues.iter().any(|r| !is_standard_residue(&r.name)),
        }
    }

    /// First failing step, if any.
    pub fn first_failure(chain: &ChainRecord) -> Option<CleanStep> {
        if chain.residues.is_empty() {
            return Some(CleanStep::Incomplete);
        }
        CleanStep::ALL.into_iter().find(|s| s.fails(chain))
    }
}

impl fmt::Display for CleanStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CleanStep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CleanStep::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown cleaning step `{s}`"))
    }
}

/// Outcome for one chain; `step` is `None` when accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub entry_id: String,
    pub chain_id: String,
    pub step: Option<CleanStep>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RejectionReport {
    pub verdicts: Vec<Verdict>,
    /// Rejections per step, indexed by `step.number() - 1`.
    pub counts: [usize; 6],
}

impl RejectionReport {
    pub fn accepted(&self) -> usize {
        self.verdicts.len() - self.rejected()
    }

    pub fn rejected(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn count(&self, step: CleanStep) -> usize {
        self.counts[step as usize]
    }

    /// Appends another report, keeping verdict order.
    pub fn merge(&mut self, other: RejectionReport) {
        self.verdicts.extend(other.verdicts);
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }
}

/// Applies the six cleaning steps in order; each chain is tagged with its
/// first failing step.
pub fn clean(chains: Vec<ChainRecord>) -> (Vec<ChainRecord>, RejectionReport) {
    let mut report = RejectionReport::default();
    let mut accepted = Vec::new();
    for chain in chains {
        let step = CleanStep::first_failure(&chain);
        report.verdicts.push(Verdict { entry_id: chain.entry_id.clone(), chain_id: chain.chain_id.clone(), step });
        match step {
            Some(s) => report.counts[s as usize] += 1,
            None => accepted.push(chain),
        }
    }
    (accepted, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec3;
    use crate::ingest::{AtomSite, ResidueRecord};
    use crate::synth;

    fn chain(names: &[&str]) -> ChainRecord {
        let backbone = synth::alpha_helix(names.len());
        let residues = backbone
            .residues()
            .iter()
            .zip(names)
            .enumerate()
            .map(|(i, (r, name))| ResidueRecord {
                seq_index: i as i64 + 1,
                name: name.to_string(),
                n: Some(AtomSite::new(r.n, 1.0)),
                a: Some(AtomSite::new(r.a, 1.0)),
                c: Some(AtomSite::new(r.c, 1.0)),
            })
            .collect();
        ChainRecord { entry_id: "T".into(), chain_id: "A".into(), model: 1, entity_kind: PROTEIN_KIND.into(), residues }
    }

    fn step_of(c: &ChainRecord) -> Option<CleanStep> {
        CleanStep::first_failure(c)
    }

    #[test]
    fn all_standard_residues_accepted() {
        let c = chain(&STANDARD_RESIDUES);
        assert_eq!(step_of(&c), None);
        let (accepted, report) = clean(vec![c.clone()]);
        assert_eq!(accepted, vec![c]);
        assert_eq!((report.accepted(), report.rejected()), (1, 0));
    }

    #[test]
    fn each_step_detected() {
        let base = chain(&["ALA"; 5]);

        let mut c = base.clone();
        c.entity_kind = "polydeoxyribonucleotide".into();
        assert_eq!(step_of(&c), Some(CleanStep::NonProtein));

        let mut c = base.clone();
        c.residues[2].a.as_mut().unwrap().occupancy = 0.5;
        assert_eq!(step_of(&c), Some(CleanStep::Disordered));

        let mut c = base.clone();
        c.residues[3].seq_index = 5;
        c.residues[4].seq_index = 6;
        assert_eq!(step_of(&c), Some(CleanStep::NonConsecutive));
        let mut c = base.clone();
        c.residues.swap(1, 2);
        assert_eq!(step_of(&c), Some(CleanStep::NonConsecutive));

        let mut c = base.clone();
        let n = c.residues[1].n.unwrap().position;
        c.residues[1].a.as_mut().unwrap().position = n + Vec3::new(0.005, 0.0, 0.0);
        assert_eq!(step_of(&c), Some(CleanStep::Clash));

        let mut c = base.clone();
        c.residues[4].c = None;
        assert_eq!(step_of(&c), Some(CleanStep::Incomplete));

        let mut c = base.clone();
        c.residues[0].name = "MSE".into();
        assert_eq!(step_of(&c), Some(CleanStep::NonStandard));
    }

    #[test]
    fn first_failing_step_wins() {
        let mut c = chain(&["MSE", "ALA", "GLY"]);
        c.residues[1].c = None;
        c.residues[2].n.as_mut().unwrap().altloc = true;
        assert_eq!(step_of(&c), Some(CleanStep::Disordered));
    }

    #[test]
    fn report_counts_and_idempotence() {
        let good = chain(&["ALA"; 4]);
        let mut bad = good.clone();
        bad.residues[0].name = "UNK".into();
        let (accepted, report) = clean(vec![good.clone(), bad, good.clone()]);
        assert_eq!(accepted.len(), 2);
        assert_eq!(report.count(CleanStep::NonStandard), 1);
        assert_eq!(report.rejected(), 1);
        let (again, report2) = clean(accepted.clone());
        assert_eq!(again, accepted);
        assert_eq!(report2.rejected(), 0);
    }

    #[test]
    fn step_names_round_trip() {
        for s in CleanStep::ALL {
            assert_eq!(s.to_string().parse::<CleanStep>().unwrap(), s);
        }
        assert_eq!(CleanStep::NonStandard.number(), 6);
    }
}
