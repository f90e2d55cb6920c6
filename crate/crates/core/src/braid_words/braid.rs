use std::fmt;

use serde::{Deserialize, Serialize};

use super::{free_reduce, Invertible};
use crate::{GgError, Result};

/// A letter of the braid alphabet: Artin generator `sigma_i` or band
/// generator `A_{i,j}` (`i < j`), both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BraidLetter {
    Sigma { i: u16, inv: bool },
    Band { i: u16, j: u16, inv: bool },
}

impl Invertible for BraidLetter {
    fn inverse(self) -> Self {
        match self {
            BraidLetter::Sigma { i, inv } => BraidLetter::Sigma { i, inv: !inv },
            BraidLetter::Band { i, j, inv } => BraidLetter::Band { i, j, inv: !inv },
        }
    }
}

impl fmt::Display for BraidLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = match *self {
            BraidLetter::Sigma { i, inv } => {
                write!(f, "s{i}")?;
                inv
            }
            BraidLetter::Band { i, j, inv } => {
                write!(f, "A{i},{j}")?;
                inv
            }
        };
        if inv {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

/// An Artin letter `sigma_i^sign` with 1-based `i` and `sign = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArtinLetter {
    pub i: u16,
    pub sign: i8,
}

impl Invertible for ArtinLetter {
    fn inverse(self) -> Self {
        ArtinLetter { i: self.i, sign: -self.sign }
    }
}

impl ArtinLetter {
    pub fn new(i: u16, sign: i8) -> Self {
        Self { i, sign }
    }
}

/// A freely reduced braid word on `n_strands` strands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    n_strands: u16,
    letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(n_strands: u16, letters: Vec<BraidLetter>) -> Result<Self> {
        if n_strands == 0 {
            return Err(GgError::InvalidInput("braid needs at least one strand".into()));
        }
        for l in &letters {
            match *l {
                BraidLetter::Sigma { i, .. } => {
                    if i == 0 || i >= n_strands {
                        return Err(GgError::InvalidInput(format!(
                            "generator s{i} out of range for {n_strands} strands"
                        )));
                    }
                }
                BraidLetter::Band { i, j, .. } => {
                    if i == 0 || i >= j || j > n_strands {
                        return Err(GgError::InvalidInput(format!(
                            "band generator A{i},{j} invalid for {n_strands} strands"
                        )));
                    }
                }
            }
        }
        Ok(Self { n_strands, letters: free_reduce(&letters) })
    }

    pub fn identity(n_strands: u16) -> Self {
        Self { n_strands: n_strands.max(1), letters: Vec::new() }
    }

    pub fn from_artin(n_strands: u16, artin: &[ArtinLetter]) -> Result<Self> {
        Self::new(
            n_strands,
            artin.iter().map(|a| BraidLetter::Sigma { i: a.i, inv: a.sign < 0 }).collect(),
        )
    }

    pub fn n_strands(&self) -> u16 {
        self.n_strands
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Expand band generators into Artin letters:
    /// `A_{i,j} = s_{j-1} ... s_{i+1} s_i^2 s_{i+1}^-1 ... s_{j-1}^-1`.
    pub fn to_artin(&self) -> Vec<ArtinLetter> {
        let mut out = Vec::new();
        for l in &self.letters {
            match *l {
                BraidLetter::Sigma { i, inv } => out.push(ArtinLetter::new(i, if inv { -1 } else { 1 })),
                BraidLetter::Band { i, j, inv } => {
                    let s: i8 = if inv { -1 } else { 1 };
                    for k in (i + 1..j).rev() {
                        out.push(ArtinLetter::new(k, 1));
                    }
                    out.push(ArtinLetter::new(i, s));
                    out.push(ArtinLetter::new(i, s));
                    for k in i + 1..j {
                        out.push(ArtinLetter::new(k, -1));
                    }
                }
            }
        }
        free_reduce(&out)
    }

    /// The same element written with Artin letters only.
    pub fn expanded(&self) -> BraidWord {
        BraidWord::from_artin(self.n_strands, &self.to_artin()).expect("valid expansion")
    }

    /// Underlying permutation: `perm[start] = end`, 0-based positions.
    pub fn permutation(&self) -> Vec<usize> {
        let n = self.n_strands as usize;
        let mut at: Vec<usize> = (0..n).collect(); // at[pos] = strand
        for a in self.to_artin() {
            at.swap(a.i as usize - 1, a.i as usize);
        }
        let mut perm = vec![0; n];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    pub fn is_pure(&self) -> bool {
        self.permutation().iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters
            .iter()
            .map(|l| match *l {
                BraidLetter::Sigma { inv, .. } => if inv { -1 } else { 1 },
                BraidLetter::Band { inv, .. } => if inv { -2 } else { 2 },
            })
            .sum()
    }

    /// Half the signed number of crossings between the strands starting at
    /// positions `i` and `j` (1-based). Requires the permutation to map
    /// `{i, j}` to itself; the value is a half-integer when they swap.
    pub fn linking_number(&self, i: u16, j: u16) -> Result<f64> {
        let n = self.n_strands;
        if i == 0 || j == 0 || i > n || j > n || i == j {
            return Err(GgError::InvalidInput(format!("invalid strand pair ({i}, {j}) for {n} strands")));
        }
        let (si, sj) = (i as usize - 1, j as usize - 1);
        let perm = self.permutation();
        let ok = |p: usize| p == si || p == sj;
        if !ok(perm[si]) || !ok(perm[sj]) {
            return Err(GgError::InvalidInput(format!(
                "permutation moves strands {i},{j} outside {{{i},{j}}}"
            )));
        }
        Ok(self.pair_crossings(si, sj) as f64 / 2.0)
    }

    /// Signed crossing count between strands (0-based start positions).
    pub(crate) fn pair_crossings(&self, si: usize, sj: usize) -> i64 {
        let mut at: Vec<usize> = (0..self.n_strands as usize).collect();
        let mut count = 0i64;
        for a in self.to_artin() {
            let p = a.i as usize - 1;
            let (x, y) = (at[p], at[p + 1]);
            if (x == si && y == sj) || (x == sj && y == si) {
                count += a.sign as i64;
            }
            at.swap(p, p + 1);
        }
        count
    }

    fn check_n(&self, other: &Self) -> Result<()> {
        if self.n_strands != other.n_strands {
            return Err(GgError::InvalidInput(format!(
                "strand-count mismatch: {} vs {}",
                self.n_strands, other.n_strands
            )));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut v = self.letters.clone();
        v.extend_from_slice(&other.letters);
        Ok(Self { n_strands: self.n_strands, letters: free_reduce(&v) })
    }

    pub fn invert(&self) -> Self {
        Self {
            n_strands: self.n_strands,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn power(&self, k: i64) -> Self {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut v = Vec::with_capacity(base.letters.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.letters);
        }
        Self { n_strands: self.n_strands, letters: free_reduce(&v) }
    }

    /// `u w u^-1`.
    pub fn conjugate(u: &Self, w: &Self) -> Result<Self> {
        u.multiply(w)?.multiply(&u.invert())
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}
