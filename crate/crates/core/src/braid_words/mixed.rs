use std::fmt;

use super::{free_reduce, BraidLetter, BraidWord, Invertible, SurfaceGen, SurfaceLetter, SurfaceLoopWord};
use crate::{GgError, Result};

/// A letter of the mixed generating set: Artin and band letters plus
/// per-strand surface letters carrying a surface-group generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MixedLetter {
    Sigma { i: u16, inv: bool },
    Band { i: u16, j: u16, inv: bool },
    Surface { strand: u16, gen: SurfaceGen, inv: bool },
}

impl Invertible for MixedLetter {
    fn inverse(self) -> Self {
        match self {
            MixedLetter::Sigma { i, inv } => MixedLetter::Sigma { i, inv: !inv },
            MixedLetter::Band { i, j, inv } => MixedLetter::Band { i, j, inv: !inv },
            MixedLetter::Surface { strand, gen, inv } => MixedLetter::Surface { strand, gen, inv: !inv },
        }
    }
}

impl fmt::Display for MixedLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = match *self {
            MixedLetter::Sigma { i, inv } => {
                write!(f, "s{i}")?;
                inv
            }
            MixedLetter::Band { i, j, inv } => {
                write!(f, "A{i},{j}")?;
                inv
            }
            MixedLetter::Surface { strand, gen, inv } => {
                write!(f, "{}@{strand}", gen.label())?;
                inv
            }
        };
        if inv {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

/// A freely reduced word over the mixed generating set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedBraidWord {
    n_strands: u16,
    genus: u16,
    letters: Vec<MixedLetter>,
}

impl MixedBraidWord {
    pub fn new(n_strands: u16, genus: u16, letters: Vec<MixedLetter>) -> Result<Self> {
        for l in &letters {
            match *l {
                MixedLetter::Sigma { i, .. } => {
                    if i == 0 || i >= n_strands {
                        return Err(GgError::InvalidInput(format!("s{i} out of range for {n_strands} strands")));
                    }
                }
                MixedLetter::Band { i, j, .. } => {
                    if i == 0 || i >= j || j > n_strands {
                        return Err(GgError::InvalidInput(format!("A{i},{j} invalid for {n_strands} strands")));
                    }
                }
                MixedLetter::Surface { strand, gen, .. } => {
                    if strand == 0 || strand > n_strands {
                        return Err(GgError::InvalidInput(format!("strand tag {strand} out of range")));
                    }
                    if gen.handle() > genus {
                        return Err(GgError::InvalidInput(format!(
                            "generator {} out of range for genus {genus}",
                            gen.label()
                        )));
                    }
                }
            }
        }
        Ok(Self { n_strands, genus, letters: free_reduce(&letters) })
    }

    pub fn n_strands(&self) -> u16 {
        self.n_strands
    }

    pub fn genus(&self) -> u16 {
        self.genus
    }

    pub fn letters(&self) -> &[MixedLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn has_surface_letters(&self) -> bool {
        self.letters.iter().any(|l| matches!(l, MixedLetter::Surface { .. }))
    }

    pub fn invert(&self) -> Self {
        Self {
            n_strands: self.n_strands,
            genus: self.genus,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n_strands != other.n_strands || self.genus != other.genus {
            return Err(GgError::InvalidInput("mixed word shape mismatch".into()));
        }
        let mut v = self.letters.clone();
        v.extend_from_slice(&other.letters);
        Ok(Self { n_strands: self.n_strands, genus: self.genus, letters: free_reduce(&v) })
    }

    /// The braid part, failing if surface letters are present.
    pub fn to_braid(&self) -> Result<BraidWord> {
        let mut v = Vec::new();
        for l in &self.letters {
            match *l {
                MixedLetter::Sigma { i, inv } => v.push(BraidLetter::Sigma { i, inv }),
                MixedLetter::Band { i, j, inv } => v.push(BraidLetter::Band { i, j, inv }),
                MixedLetter::Surface { .. } => {
                    return Err(GgError::InvalidInput("word contains surface letters".into()))
                }
            }
        }
        BraidWord::new(self.n_strands, v)
    }

    /// For one strand: the surface-group word carried by its surface letters.
    pub fn strand_loop(&self, strand: u16) -> Result<SurfaceLoopWord> {
        let v: Vec<SurfaceLetter> = self
            .letters
            .iter()
            .filter_map(|l| match *l {
                MixedLetter::Surface { strand: s, gen, inv } if s == strand => Some(SurfaceLetter::new(gen, inv)),
                _ => None,
            })
            .collect();
        SurfaceLoopWord::new(self.genus, v)
    }
}

impl From<&BraidWord> for MixedBraidWord {
    fn from(w: &BraidWord) -> Self {
        let letters = w
            .letters()
            .iter()
            .map(|l| match *l {
                BraidLetter::Sigma { i, inv } => MixedLetter::Sigma { i, inv },
                BraidLetter::Band { i, j, inv } => MixedLetter::Band { i, j, inv },
            })
            .collect();
        MixedBraidWord { n_strands: w.n_strands(), genus: 0, letters }
    }
}

impl fmt::Display for MixedBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}
