//! The triangular invariant (trin), the backbone rigid invariant (BRI) and
//! the operations built on them: mirror image, row-weighted BRI, the L∞
//! metric, column averages (Brain) and subchain extraction.

use std::fmt;
use std::str::FromStr;

use crate::backbone::{Backbone, Residue};
use crate::error::{Error, Result};
use crate::geometry::{residue_frame_at, Degeneracy, ResidueFrame};
use crate::stats::BondStats;

/// Number of BRI columns.
pub const BRI_WIDTH: usize = 9;

/// Columns of BRI row 1 that must be exactly zero: yN, zN, xA, yA, zA, zC.
const FIRST_ROW_ZERO_SLOTS: [usize; 6] = [1, 2, 3, 4, 5, 8];
const Z_COLUMNS: [usize; 3] = [2, 5, 8];

/// Per-residue triangle shape: `x(AN)`, `x(AC)`, `y(AC)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrinMatrix {
    rows: Vec<[f64; 3]>,
}

impl TrinMatrix {
    pub fn rows(&self) -> &[[f64; 3]] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// The m×9 backbone rigid invariant.
///
/// Column order is `xN yN zN xA yA zA xC yC zC`. Row `i ≥ 2` holds the
/// coordinates of the bonds C₍ᵢ₋₁₎→Nᵢ, Nᵢ→Aᵢ and Aᵢ→Cᵢ in the frame of residue
/// `i − 1`. Row 1 only carries `x(N₁)`, `x(C₁)` and `y(C₁)`; every other slot
/// of row 1 is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BriMatrix {
    rows: Vec<[f64; BRI_WIDTH]>,
}

impl BriMatrix {
    /// Validates the first-row pattern (zeros, `x(N₁) > 0`, `y(C₁) > 0`) and
    /// finiteness.
    pub fn from_rows(rows: Vec<[f64; BRI_WIDTH]>) -> Result<Self> {
        let first = rows.first().ok_or_else(|| Error::MalformedMatrix("no rows".into()))?;
        if let Some(&slot) = FIRST_ROW_ZERO_SLOTS.iter().find(|&&j| first[j] != 0.0) {
            return Err(Error::MalformedMatrix(format!(
                "row 1 column {} must be 0, found {}",
                Column::BRI[slot],
                first[slot]
            )));
        }
        if !(first[0] > 0.0 && first[7] > 0.0) {
            return Err(Error::MalformedMatrix("row 1 needs x(N1) > 0 and y(C1) > 0".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.iter().any(|v| !v.is_finite())) {
            return Err(Error::MalformedMatrix(format!("row {} is not finite", i + 1)));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[[f64; BRI_WIDTH]] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The `9m − 6` meaningful entries: the three nonzero slots of row 1
    /// followed by rows `2..m`.
    pub fn flatten(&self) -> Vec<f64> {
        let first = &self.rows[0];
        let mut out = Vec::with_capacity(9 * self.rows.len() - 6);
        out.extend([first[0], first[6], first[7]]);
        for row in &self.rows[1..] {
            out.extend_from_slice(row);
        }
        out
    }
}

/// Column averages of BRI rows `2..m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrainVector(pub [f64; BRI_WIDTH]);

impl BrainVector {
    pub fn linf(&self, other: &BrainVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// A named invariant column: the three trin columns and the nine BRI columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Column {
    XAn,
    XAc,
    YAc,
    XN,
    YN,
    ZN,
    XA,
    YA,
    ZA,
    XC,
    YC,
    ZC,
}

impl Column {
    pub const TRIN: [Column; 3] = [Column::XAn, Column::XAc, Column::YAc];
    pub const BRI: [Column; BRI_WIDTH] =
        [Column::XN, Column::YN, Column::ZN, Column::XA, Column::YA, Column::ZA, Column::XC, Column::YC, Column::ZC];
    pub const ALL: [Column; 12] = [
        Column::XAn,
        Column::XAc,
        Column::YAc,
        Column::XN,
        Column::YN,
        Column::ZN,
        Column::XA,
        Column::YA,
        Column::ZA,
        Column::XC,
        Column::YC,
        Column::ZC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::XAn => "xAN",
            Column::XAc => "xAC",
            Column::YAc => "yAC",
            Column::XN => "xN",
            Column::YN => "yN",
            Column::ZN => "zN",
            Column::XA => "xA",
            Column::YA => "yA",
            Column::ZA => "zA",
            Column::XC => "xC",
            Column::YC => "yC",
            Column::ZC => "zC",
        }
    }

    pub fn trin_index(self) -> Option<usize> {
        Column::TRIN.iter().position(|&c| c == self)
    }

    pub fn bri_index(self) -> Option<usize> {
        Column::BRI.iter().position(|&c| c == self)
    }

    /// Whether the column has a value on the first residue. Trin columns
    /// cover residues `1..m`, BRI columns residues `2..m`: the three nonzero
    /// slots of BRI row 1 repeat trin row 1 and are not counted twice.
    pub fn defined_on_first_row(self) -> bool {
        self.trin_index().is_some()
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Column {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Column::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<_> = Column::ALL.iter().map(|c| c.name()).collect();
            format!("unknown column `{s}` (expected one of {})", names.join(", "))
        })
    }
}

/// Both invariants of one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainInvariants {
    pub trin: TrinMatrix,
    pub bri: BriMatrix,
}

impl ChainInvariants {
    pub fn compute(backbone: &Backbone) -> Result<Self> {
        Ok(Self { trin: compute_trin(backbone)?, bri: compute_bri(backbone)? })
    }

    pub fn len(&self) -> usize {
        self.bri.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bri.is_empty()
    }

    /// Value of `column` at zero-based `row`, or `None` outside its domain.
    pub fn value(&self, column: Column, row: usize) -> Option<f64> {
        if row >= self.len() || (row == 0 && !column.defined_on_first_row()) {
            return None;
        }
        match (column.trin_index(), column.bri_index()) {
            (Some(j), _) => Some(self.trin.rows[row][j]),
            (_, Some(j)) => Some(self.bri.rows[row][j]),
            _ => None,
        }
    }
}

fn trin_row(residue: &Residue) -> std::result::Result<[f64; 3], Degeneracy> {
    // Same arithmetic as `residue_frame`, so x(C₁), y(C₁) agree bit for bit
    // with the frame used for row 2.
    let an = residue.n - residue.a;
    let ac = residue.c - residue.a;
    let len = an.norm();
    if !(len >= crate::geometry::MIN_BOND_LENGTH) {
        return Err(Degeneracy::ShortBond);
    }
    let u = an * (1.0 / len);
    let x_ac = ac.dot(u);
    let y_ac = (ac - u * x_ac).norm();
    if !(y_ac >= crate::geometry::MIN_TRIANGLE_HEIGHT) {
        return Err(Degeneracy::FlatTriangle);
    }
    Ok([len, x_ac, y_ac])
}

fn first_row([x_an, x_ac, y_ac]: [f64; 3]) -> [f64; BRI_WIDTH] {
    [x_an, 0.0, 0.0, 0.0, 0.0, 0.0, x_ac, y_ac, 0.0]
}

pub fn compute_trin(backbone: &Backbone) -> Result<TrinMatrix> {
    let rows = backbone
        .residues()
        .iter()
        .enumerate()
        .map(|(index, r)| trin_row(r).map_err(|reason| Error::DegenerateResidue { index, reason }))
        .collect::<Result<_>>()?;
    Ok(TrinMatrix { rows })
}

fn bond_row(frame: &ResidueFrame, prev: &Residue, cur: &Residue) -> [f64; BRI_WIDTH] {
    let n = frame.coordinates(cur.n - prev.c);
    let a = frame.coordinates(cur.a - cur.n);
    let c = frame.coordinates(cur.c - cur.a);
    [n.x, n.y, n.z, a.x, a.y, a.z, c.x, c.y, c.z]
}

/// Computes the BRI in a single pass over the residues.
pub fn compute_bri(backbone: &Backbone) -> Result<BriMatrix> {
    let residues = backbone.residues();
    let first = trin_row(&residues[0]).map_err(|reason| Error::DegenerateResidue { index: 0, reason })?;
    let mut rows = Vec::with_capacity(residues.len());
    rows.push(first_row(first));
    let mut frame = residue_frame_at(&residues[0], 0)?;
    for (i, pair) in residues.windows(2).enumerate() {
        rows.push(bond_row(&frame, &pair[0], &pair[1]));
        frame = residue_frame_at(&pair[1], i + 1)?;
    }
    Ok(BriMatrix { rows })
}

/// BRI of the mirror image: the z-columns change sign.
pub fn mirror_bri(bri: &BriMatrix) -> BriMatrix {
    let mut rows = bri.rows.clone();
    for row in rows.iter_mut().skip(1) {
        for j in Z_COLUMNS {
            row[j] = -row[j];
        }
    }
    BriMatrix { rows }
}

/// `1 + b + … + b^(terms−1)`, evaluated as `(b^terms − 1)/(b − 1)`. The
/// exponent is checked in log-space first; `None` when the value overflows.
pub(crate) fn geometric_sum(base: f64, terms: usize) -> Option<f64> {
    if terms as f64 * base.ln() >= f64::MAX.ln() || terms > i32::MAX as usize {
        return None;
    }
    let value = (base.powi(terms as i32) - 1.0) / (base - 1.0);
    value.is_finite().then_some(value)
}

fn check_base(base: f64) -> Result<()> {
    if !(base > 0.0) || (base - 1.0).abs() < 1e-12 || !base.is_finite() {
        return Err(Error::InvalidStats(format!("growth base {base} must be positive and not 1")));
    }
    Ok(())
}

/// Row weights of the hat-BRI: row 1 keeps weight 1, row `i ≥ 2` gets
/// `(b^(i−1) − 1)/(b − 1)`.
pub fn hat_factors(base: f64, rows: usize) -> Result<Vec<f64>> {
    check_base(base)?;
    let mut factors = Vec::with_capacity(rows);
    for row in 0..rows {
        if row == 0 {
            factors.push(1.0);
        } else {
            factors.push(geometric_sum(base, row).ok_or(Error::FactorOverflow { row })?);
        }
    }
    Ok(factors)
}

pub fn hat_bri_with_base(bri: &BriMatrix, base: f64) -> Result<BriMatrix> {
    let factors = hat_factors(base, bri.len())?;
    let rows = bri.rows.iter().zip(factors).map(|(row, f)| row.map(|v| v * f)).collect();
    Ok(BriMatrix { rows })
}

/// Row-weighted BRI whose L∞ distance controls atom deviations after
/// alignment; the growth base is `8LK` from `stats`.
pub fn hat_bri(bri: &BriMatrix, stats: &BondStats) -> Result<BriMatrix> {
    let base = stats.growth_base().ok_or_else(|| Error::InvalidStats("max C-N bond length is unknown".into()))?;
    hat_bri_with_base(bri, base)
}

/// Maximum absolute difference over all corresponding entries.
pub fn linf(left: &BriMatrix, right: &BriMatrix) -> Result<f64> {
    if left.len() != right.len() {
        return Err(Error::LengthMismatch { left: left.len(), right: right.len() });
    }
    Ok(left
        .rows
        .iter()
        .zip(&right.rows)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max))
}

/// L∞ distance, or `None` as soon as it is known to exceed `cap`.
pub(crate) fn linf_capped(left: &BriMatrix, right: &BriMatrix, cap: f64) -> Option<f64> {
    let mut best = 0.0f64;
    for (a, b) in left.rows.iter().zip(&right.rows) {
        for (x, y) in a.iter().zip(b) {
            best = best.max((x - y).abs());
        }
        if best > cap {
            return None;
        }
    }
    Some(best)
}

pub fn compute_brain(bri: &BriMatrix) -> Result<BrainVector> {
    let m = bri.len();
    if m < 2 {
        return Err(Error::TooShort { required: 2, actual: m });
    }
    let mut sums = [0.0; BRI_WIDTH];
    for row in &bri.rows[1..] {
        for (s, v) in sums.iter_mut().zip(row) {
            *s += v;
        }
    }
    let denom = (m - 1) as f64;
    Ok(BrainVector(sums.map(|s| s / denom)))
}

/// BRI of the subchain of `len` residues starting at zero-based `start`,
/// taken from the whole-chain invariants without touching coordinates.
pub fn subchain_bri(bri: &BriMatrix, trin: &TrinMatrix, start: usize, len: usize) -> Result<BriMatrix> {
    if bri.len() != trin.len() {
        return Err(Error::LengthMismatch { left: bri.len(), right: trin.len() });
    }
    let total = bri.len();
    if len == 0 || start.checked_add(len).is_none_or(|end| end > total) {
        return Err(Error::IndexOutOfRange { start, len, total });
    }
    if start == 0 {
        return Ok(BriMatrix { rows: bri.rows[..len].to_vec() });
    }
    let mut rows = Vec::with_capacity(len);
    rows.push(first_row(trin.rows[start]));
    rows.extend_from_slice(&bri.rows[start + 1..start + len]);
    Ok(BriMatrix { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{apply_motion, mirror, random_motion, Vec3};
    use crate::synth;

    fn unit_residue() -> Backbone {
        Backbone::new(vec![Residue::new(Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO, Vec3::new(0.0, 1.0, 0.0))]).unwrap()
    }

    fn max_diff(a: &BriMatrix, b: &BriMatrix) -> f64 {
        linf(a, b).unwrap()
    }

    #[test]
    fn trin_examples() {
        assert_eq!(compute_trin(&unit_residue()).unwrap().rows(), &[[1.0, 0.0, 1.0]]);
        let b = Backbone::new(vec![Residue::new(Vec3::new(1.46, 0.0, 0.0), Vec3::ZERO, Vec3::new(-0.53, 1.42, 0.0))])
            .unwrap();
        let row = compute_trin(&b).unwrap().rows()[0];
        for (got, want) in row.iter().zip([1.46, -0.53, 1.42]) {
            assert!((got - want).abs() < 1e-15, "{row:?}");
        }
    }

    #[test]
    fn trin_reports_degenerate_index() {
        let mut residues = synth::random_backbone(4, 3).residues().to_vec();
        residues[2].c = residues[2].a + (residues[2].n - residues[2].a) * 2.0;
        let b = Backbone::new(residues).unwrap();
        assert!(matches!(
            compute_trin(&b),
            Err(Error::DegenerateResidue { index: 2, reason: Degeneracy::FlatTriangle })
        ));
        assert!(matches!(compute_bri(&b), Err(Error::DegenerateResidue { index: 2, .. })));
    }

    #[test]
    fn single_residue_bri() {
        let bri = compute_bri(&unit_residue()).unwrap();
        assert_eq!(bri.rows(), &[[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]]);
        assert_eq!(bri.flatten(), vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn flatten_length() {
        let bri = compute_bri(&synth::random_backbone(17, 1)).unwrap();
        assert_eq!(bri.flatten().len(), 9 * 17 - 6);
    }

    #[test]
    fn trin_and_bri_are_motion_invariant() {
        for seed in 0..20 {
            let s = synth::random_backbone(30, seed);
            let q = apply_motion(&random_motion(seed + 1000), &s);
            let (ts, tq) = (compute_trin(&s).unwrap(), compute_trin(&q).unwrap());
            for (a, b) in ts.rows().iter().zip(tq.rows()) {
                for j in 0..3 {
                    assert!((a[j] - b[j]).abs() <= 1e-10);
                }
            }
            assert!(max_diff(&compute_bri(&s).unwrap(), &compute_bri(&q).unwrap()) <= 1e-10);
        }
    }

    #[test]
    fn planar_backbone_has_zero_z_columns() {
        let s = synth::planar_backbone(12, 5);
        let bri = compute_bri(&s).unwrap();
        for row in bri.rows() {
            for j in Z_COLUMNS {
                assert_eq!(row[j].abs(), 0.0);
            }
        }
        assert_eq!(mirror_bri(&bri), bri);
    }

    #[test]
    fn mirror_law_and_involution() {
        for seed in 0..20 {
            let s = synth::random_backbone(25, seed);
            let bri = compute_bri(&s).unwrap();
            let mirrored = compute_bri(&mirror(&s)).unwrap();
            assert!(max_diff(&mirrored, &mirror_bri(&bri)) <= 1e-10);
            assert_eq!(mirror_bri(&mirror_bri(&bri)), bri);
        }
    }

    #[test]
    fn hat_factor_examples() {
        let f = hat_factors(2.0, 5).unwrap();
        assert_eq!(f, vec![1.0, 1.0, 3.0, 7.0, 15.0]);
        let bri = compute_bri(&synth::random_backbone(3, 9)).unwrap();
        let hat = hat_bri_with_base(&bri, 2.0).unwrap();
        assert_eq!(hat.rows()[0], bri.rows()[0]);
        assert_eq!(hat.rows()[1], bri.rows()[1]);
        let one = compute_bri(&unit_residue()).unwrap();
        assert_eq!(hat_bri_with_base(&one, 60.0).unwrap(), one);
    }

    #[test]
    fn hat_rejects_bad_base_and_overflow() {
        let bri = compute_bri(&synth::random_backbone(300, 2)).unwrap();
        assert!(matches!(hat_bri_with_base(&bri, 1.0), Err(Error::InvalidStats(_))));
        assert!(matches!(hat_bri_with_base(&bri, -2.0), Err(Error::InvalidStats(_))));
        assert!(matches!(hat_bri_with_base(&bri, 60.0), Err(Error::FactorOverflow { .. })));
        // Bases below one give bounded factors.
        let f = hat_factors(0.5, 200).unwrap();
        assert!((f[199] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn linf_examples() {
        let a = compute_bri(&synth::random_backbone(6, 4)).unwrap();
        assert_eq!(linf(&a, &a).unwrap(), 0.0);
        let mut rows = a.rows().to_vec();
        rows[3][4] += 0.5;
        let b = BriMatrix::from_rows(rows).unwrap();
        assert!((linf(&a, &b).unwrap() - 0.5).abs() < 1e-15);
        let c = compute_bri(&synth::random_backbone(7, 4)).unwrap();
        assert!(matches!(linf(&a, &c), Err(Error::LengthMismatch { left: 6, right: 7 })));
    }

    #[test]
    fn brain_examples() {
        let rows = vec![[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 1.0, 0.0], [1.0; 9], [3.0; 9]];
        let bri = BriMatrix::from_rows(rows).unwrap();
        assert_eq!(compute_brain(&bri).unwrap(), BrainVector([2.0; 9]));
        let one = compute_bri(&unit_residue()).unwrap();
        assert!(matches!(compute_brain(&one), Err(Error::TooShort { required: 2, actual: 1 })));
    }

    #[test]
    fn subchain_examples() {
        let s = synth::random_backbone(20, 8);
        let inv = ChainInvariants::compute(&s).unwrap();
        assert_eq!(subchain_bri(&inv.bri, &inv.trin, 0, 20).unwrap(), inv.bri);
        assert_eq!(subchain_bri(&inv.bri, &inv.trin, 0, 1).unwrap().rows(), &inv.bri.rows()[..1]);
        // Residues 5..14 in one-based numbering.
        let direct = compute_bri(&s.subchain(4, 10).unwrap()).unwrap();
        let sub = subchain_bri(&inv.bri, &inv.trin, 4, 10).unwrap();
        assert!(max_diff(&direct, &sub) <= 1e-12);
        assert!(matches!(subchain_bri(&inv.bri, &inv.trin, 15, 6), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn malformed_first_row() {
        let mut row = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 1.0, 0.0];
        assert!(BriMatrix::from_rows(vec![row]).is_ok());
        row[4] = 0.1;
        assert!(matches!(BriMatrix::from_rows(vec![row]), Err(Error::MalformedMatrix(_))));
        assert!(BriMatrix::from_rows(vec![]).is_err());
    }

    #[test]
    fn column_names_round_trip() {
        for c in Column::ALL {
            assert_eq!(c.name().parse::<Column>().unwrap(), c);
        }
        assert!("qq".parse::<Column>().is_err());
    }
}
