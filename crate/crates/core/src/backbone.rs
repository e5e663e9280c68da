use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Main atoms of one residue: nitrogen, alpha-carbon and carboxyl carbon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residue {
    pub n: Vec3,
    pub a: Vec3,
    pub c: Vec3,
}

impl Residue {
    pub fn new(n: Vec3, a: Vec3, c: Vec3) -> Self {
        Self { n, a, c }
    }

    pub fn atoms(&self) -> [Vec3; 3] {
        [self.n, self.a, self.c]
    }
}

/// Ordered sequence of residues with finite coordinates, in Å.
#[derive(Debug, Clone, PartialEq)]
pub struct Backbone {
    residues: Vec<Residue>,
}

impl Backbone {
    pub fn new(residues: Vec<Residue>) -> Result<Self> {
        if residues.is_empty() {
            return Err(Error::EmptyBackbone);
        }
        if let Some(index) = residues.iter().position(|r| !r.atoms().iter().all(|p| p.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { residues })
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn residues(&self) -> &[Residue] {
        &self.residues
    }

    /// Atoms in chain order `N₁, A₁, C₁, N₂, …`.
    pub fn atoms(&self) -> impl Iterator<Item = Vec3> + '_ {
        self.residues.iter().flat_map(|r| r.atoms())
    }

    /// Consecutive residues `start..start + len` (zero-based).
    pub fn subchain(&self, start: usize, len: usize) -> Result<Backbone> {
        match start.checked_add(len) {
            Some(end) if len > 0 && end <= self.len() => Ok(Self { residues: self.residues[start..end].to_vec() }),
            _ => Err(Error::IndexOutOfRange { start, len, total: self.len() }),
        }
    }

    pub fn map_atoms(&self, mut f: impl FnMut(Vec3) -> Vec3) -> Backbone {
        let residues = self.residues.iter().map(|r| Residue::new(f(r.n), f(r.a), f(r.c))).collect();
        Backbone { residues }
    }

    /// Largest distance between corresponding atoms of two equal-length backbones.
    pub fn max_atom_deviation(&self, other: &Backbone) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { left: self.len(), right: other.len() });
        }
        Ok(self.atoms().zip(other.atoms()).map(|(p, q)| p.distance(q)).fold(0.0, f64::max))
    }
}

impl TryFrom<Vec<Residue>> for Backbone {
    type Error = Error;

    fn try_from(residues: Vec<Residue>) -> Result<Self> {
        Backbone::new(residues)
    }
}
