use std::fmt;

use serde::{Deserialize, Serialize};

use super::{free_reduce, Invertible};
use crate::{GgError, Result};

/// A generator of the surface group, numbered `a1 = 0, b1 = 1, a2 = 2, ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceGen(pub u8);

impl SurfaceGen {
    pub fn alpha(i: u16) -> Self {
        SurfaceGen((2 * (i - 1)) as u8)
    }

    pub fn beta(i: u16) -> Self {
        SurfaceGen((2 * (i - 1) + 1) as u8)
    }

    pub fn is_alpha(self) -> bool {
        self.0 % 2 == 0
    }

    /// 1-based handle index.
    pub fn handle(self) -> u16 {
        (self.0 / 2) as u16 + 1
    }

    pub fn label(self) -> String {
        format!("{}{}", if self.is_alpha() { 'a' } else { 'b' }, self.handle())
    }

    pub fn parse_label(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_at(s.char_indices().nth(1).map(|(i, _)| i).unwrap_or(s.len()));
        let index: u16 = if rest.is_empty() {
            1
        } else {
            rest.parse().map_err(|_| GgError::Parse(format!("unknown generator label `{s}`")))?
        };
        if index == 0 {
            return Err(GgError::Parse(format!("unknown generator label `{s}`")));
        }
        match kind {
            "a" | "α" => Ok(SurfaceGen::alpha(index)),
            "b" | "β" => Ok(SurfaceGen::beta(index)),
            _ => Err(GgError::Parse(format!("unknown generator label `{s}`"))),
        }
    }
}

/// A signed surface-group letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceLetter {
    pub gen: SurfaceGen,
    pub inv: bool,
}

impl SurfaceLetter {
    pub fn new(gen: SurfaceGen, inv: bool) -> Self {
        Self { gen, inv }
    }

    /// Compact code `2 * gen + inv`.
    pub fn code(self) -> u8 {
        self.gen.0 * 2 + self.inv as u8
    }

    pub fn from_code(code: u8) -> Self {
        Self { gen: SurfaceGen(code / 2), inv: code % 2 == 1 }
    }
}

impl Invertible for SurfaceLetter {
    fn inverse(self) -> Self {
        Self { gen: self.gen, inv: !self.inv }
    }
}

impl fmt::Display for SurfaceLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gen.label())?;
        if self.inv {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

/// A freely reduced word in the generators of the genus-`g` surface group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SurfaceLoopWord {
    genus: u16,
    letters: Vec<SurfaceLetter>,
}

impl SurfaceLoopWord {
    pub fn new(genus: u16, letters: Vec<SurfaceLetter>) -> Result<Self> {
        for l in &letters {
            if l.gen.handle() > genus.max(1) {
                return Err(GgError::InvalidInput(format!(
                    "generator {} out of range for genus {genus}",
                    l.gen.label()
                )));
            }
        }
        Ok(Self { genus, letters: free_reduce(&letters) })
    }

    pub fn empty(genus: u16) -> Self {
        Self { genus, letters: Vec::new() }
    }

    pub fn genus(&self) -> u16 {
        self.genus
    }

    pub fn letters(&self) -> &[SurfaceLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn generator(genus: u16, gen: SurfaceGen, power: i64) -> Result<Self> {
        let l = SurfaceLetter::new(gen, power < 0);
        Self::new(genus, vec![l; power.unsigned_abs() as usize])
    }

    fn check_genus(&self, other: &Self) -> Result<()> {
        if self.genus != other.genus {
            return Err(GgError::InvalidInput(format!(
                "genus mismatch: {} vs {}",
                self.genus, other.genus
            )));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_genus(other)?;
        let mut v = self.letters.clone();
        v.extend_from_slice(&other.letters);
        Ok(Self { genus: self.genus, letters: free_reduce(&v) })
    }

    pub fn invert(&self) -> Self {
        Self {
            genus: self.genus,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn power(&self, k: i64) -> Self {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut v = Vec::with_capacity(base.letters.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.letters);
        }
        Self { genus: self.genus, letters: free_reduce(&v) }
    }

    /// `u w u^-1`.
    pub fn conjugate(u: &Self, w: &Self) -> Result<Self> {
        u.multiply(w)?.multiply(&u.invert())
    }

    /// The defining relator `[a1,b1]...[ag,bg]`.
    pub fn relator(genus: u16) -> Self {
        let mut v = Vec::new();
        for i in 1..=genus {
            let a = SurfaceGen::alpha(i);
            let b = SurfaceGen::beta(i);
            v.push(SurfaceLetter::new(a, false));
            v.push(SurfaceLetter::new(b, false));
            v.push(SurfaceLetter::new(a, true));
            v.push(SurfaceLetter::new(b, true));
        }
        Self { genus, letters: v }
    }

    /// Signed count of `gen` (a homomorphism to the integers).
    pub fn pi_count(&self, gen: SurfaceGen) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| if l.inv { -1 } else { 1 })
            .sum()
    }

    /// Signed count by label, e.g. `"a1"`.
    pub fn pi_count_label(&self, label: &str) -> Result<i64> {
        let gen = SurfaceGen::parse_label(label)?;
        if gen.handle() > self.genus.max(1) {
            return Err(GgError::InvalidInput(format!("unknown label `{label}` for genus {}", self.genus)));
        }
        Ok(self.pi_count(gen))
    }

    /// Abelianization as a vector `(a1, b1, ..., ag, bg)`.
    pub fn abelianize(&self) -> Vec<i64> {
        let g = self.genus.max(1) as usize;
        let mut v = vec![0i64; 2 * g];
        for l in &self.letters {
            v[l.gen.0 as usize] += if l.inv { -1 } else { 1 };
        }
        v
    }

    /// Normal form for the torus group: `a1^m b1^n`.
    pub fn abelian_normal_form(&self) -> Result<Self> {
        if self.genus != 1 {
            return Err(GgError::InvalidInput("abelian normal form applies to genus 1".into()));
        }
        let v = self.abelianize();
        let mut w = Self::generator(1, SurfaceGen::alpha(1), v[0])?;
        w = w.multiply(&Self::generator(1, SurfaceGen::beta(1), v[1])?)?;
        Ok(w)
    }

    /// Reduce by the Dehn algorithm (genus >= 2): the result is empty iff the
    /// word is trivial in the surface group.
    pub fn dehn_reduce(&self) -> Result<Self> {
        let reducer = DehnReducer::for_genus(self.genus)?;
        Ok(reducer.reduce(&self.letters))
    }

    /// Reduce to the canonical comparison form of the surface: Dehn-reduced
    /// for genus >= 2, abelian normal form for the torus.
    pub fn reduce(&self) -> Result<Self> {
        match self.genus {
            0 => Ok(Self::empty(0)),
            1 => self.abelian_normal_form(),
            _ => self.dehn_reduce(),
        }
    }

    pub fn is_trivial(&self) -> Result<bool> {
        Ok(self.reduce()?.is_empty())
    }

    /// Cyclically reduce (strip matching inverse letters from both ends).
    pub fn cyclically_reduced(&self) -> Self {
        let l = &self.letters;
        let mut i = 0;
        let mut j = l.len();
        while j > i + 1 && l[i] == l[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        Self { genus: self.genus, letters: l[i..j].to_vec() }
    }
}

impl fmt::Display for SurfaceLoopWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Dehn-algorithm word reduction for the genus-`g` surface group (`g >= 2`).
///
/// Every signed letter occurs exactly once in the relator and once in its
/// inverse, and adjacent pairs are unique, so the length of the longest
/// suffix that is a relator subword can be maintained incrementally. Any
/// suffix longer than half the relator is replaced by the inverse of its
/// complement.
#[derive(Debug, Clone)]
pub struct DehnReducer {
    genus: u16,
    rel_len: usize,
    /// The relator and its inverse as code sequences.
    cyclic: [Vec<u8>; 2],
    /// `pair_loc[x][y]` = position `(r, p)` with `cyclic[r][p] = x` and
    /// `cyclic[r][p+1] = y` (cyclically).
    pair_loc: Vec<Vec<Option<(u8, u8)>>>,
    /// Location of each code in each cyclic word.
    letter_pos: Vec<[u8; 2]>,
}

#[derive(Debug, Clone, Copy)]
struct RunInfo {
    /// Which cyclic word the run follows (meaningful when `run >= 2`).
    r: u8,
    /// Position of this letter within that cyclic word.
    p: u8,
    run: u8,
}

impl DehnReducer {
    pub fn new(genus: u16) -> Result<Self> {
        if genus < 2 {
            return Err(GgError::InvalidInput(format!(
                "Dehn reduction needs genus >= 2, got {genus}"
            )));
        }
        let rel: Vec<u8> = SurfaceLoopWord::relator(genus).letters.iter().map(|l| l.code()).collect();
        let inv: Vec<u8> = rel.iter().rev().map(|c| c ^ 1).collect();
        let n_codes = 4 * genus as usize;
        let l = rel.len();
        let mut pair_loc = vec![vec![None; n_codes]; n_codes];
        let mut letter_pos = vec![[0u8; 2]; n_codes];
        for (r, word) in [&rel, &inv].iter().enumerate() {
            for p in 0..l {
                let x = word[p] as usize;
                let y = word[(p + 1) % l] as usize;
                debug_assert!(pair_loc[x][y].is_none());
                pair_loc[x][y] = Some((r as u8, p as u8));
                letter_pos[x][r] = p as u8;
            }
        }
        Ok(Self { genus, rel_len: l, cyclic: [rel, inv], pair_loc, letter_pos })
    }

    /// Shared instance for genus 2.
    pub fn genus2() -> &'static DehnReducer {
        static CELL: std::sync::OnceLock<DehnReducer> = std::sync::OnceLock::new();
        CELL.get_or_init(|| DehnReducer::new(2).expect("genus 2"))
    }

    pub fn for_genus(genus: u16) -> Result<std::borrow::Cow<'static, DehnReducer>> {
        if genus == 2 {
            Ok(std::borrow::Cow::Borrowed(Self::genus2()))
        } else {
            Ok(std::borrow::Cow::Owned(Self::new(genus)?))
        }
    }

    pub fn genus(&self) -> u16 {
        self.genus
    }

    pub fn reduce(&self, letters: &[SurfaceLetter]) -> SurfaceLoopWord {
        let mut st = self.stack();
        for l in letters {
            st.push(l.code());
        }
        st.into_word()
    }

    /// Reduce a raw code sequence, returning only whether it is trivial.
    pub fn is_trivial_codes(&self, codes: &[u8]) -> bool {
        let mut st = self.stack();
        for &c in codes {
            st.push(c);
        }
        st.is_empty()
    }

    pub fn stack(&self) -> DehnStack<'_> {
        DehnStack { red: self, codes: Vec::new(), info: Vec::new() }
    }
}

/// Incremental Dehn reduction: letters are pushed one at a time and the
/// content is kept free- and Dehn-reduced after every push.
#[derive(Debug, Clone)]
pub struct DehnStack<'a> {
    red: &'a DehnReducer,
    codes: Vec<u8>,
    info: Vec<RunInfo>,
}

impl<'a> DehnStack<'a> {
    pub fn push(&mut self, code: u8) {
        if let Some(&top) = self.codes.last() {
            if top == code ^ 1 {
                self.codes.pop();
                self.info.pop();
                return;
            }
        }
        let info = match self.codes.last() {
            Some(&top) => match self.red.pair_loc[top as usize][code as usize] {
                Some((r, p)) => {
                    let prev = self.info[self.info.len() - 1];
                    let q = ((p as usize + 1) % self.red.rel_len) as u8;
                    if prev.run >= 2 && prev.r == r && prev.p == p {
                        RunInfo { r, p: q, run: prev.run + 1 }
                    } else {
                        RunInfo { r, p: q, run: 2 }
                    }
                }
                None => RunInfo { r: 0, p: self.red.letter_pos[code as usize][0], run: 1 },
            },
            None => RunInfo { r: 0, p: self.red.letter_pos[code as usize][0], run: 1 },
        };
        self.codes.push(code);
        self.info.push(info);
        let half = self.red.rel_len / 2;
        if info.run as usize > half {
            // Suffix of length half+1 ending at position p of cyclic word r:
            // replace by the inverse of the complementary relator piece.
            let l = self.red.rel_len;
            let k = info.run as usize;
            let word = &self.red.cyclic[info.r as usize];
            let end = info.p as usize;
            for _ in 0..k {
                self.codes.pop();
                self.info.pop();
            }
            let comp_len = l - k;
            let mut repl = Vec::with_capacity(comp_len);
            for s in 0..comp_len {
                // complement runs from end+1 to end+comp_len; its inverse is
                // read backwards with inverted letters
                let idx = (end + comp_len - s) % l;
                repl.push(word[idx] ^ 1);
            }
            for c in repl {
                self.push(c);
            }
        }
    }

    pub fn extend_letters(&mut self, letters: &[SurfaceLetter]) {
        for l in letters {
            self.push(l.code());
        }
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    pub fn into_word(self) -> SurfaceLoopWord {
        SurfaceLoopWord {
            genus: self.red.genus,
            letters: self.codes.iter().map(|&c| SurfaceLetter::from_code(c)).collect(),
        }
    }

    pub fn to_word(&self) -> SurfaceLoopWord {
        self.clone().into_word()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid_words::parse_surface_word;

    fn w(s: &str) -> SurfaceLoopWord {
        parse_surface_word(s, 2).unwrap()
    }

    #[test]
    fn relator_reduces_to_empty() {
        assert!(SurfaceLoopWord::relator(2).dehn_reduce().unwrap().is_empty());
        assert!(SurfaceLoopWord::relator(3).dehn_reduce().unwrap().is_empty());
        assert!(SurfaceLoopWord::relator(2).invert().dehn_reduce().unwrap().is_empty());
    }

    #[test]
    fn cyclic_rotations_of_relator_are_trivial() {
        let r = SurfaceLoopWord::relator(2);
        for k in 0..8 {
            let mut v = r.letters()[k..].to_vec();
            v.extend_from_slice(&r.letters()[..k]);
            let rot = SurfaceLoopWord::new(2, v).unwrap();
            assert!(rot.dehn_reduce().unwrap().is_empty(), "rotation {k}");
        }
    }

    #[test]
    fn generators_are_reduced() {
        assert_eq!(w("a1").dehn_reduce().unwrap(), w("a1"));
        assert_eq!(w("a1 b1 a1^-1").dehn_reduce().unwrap(), w("a1 b1 a1^-1"));
    }

    #[test]
    fn five_letter_piece_is_shortened() {
        // a1 b1 a1^-1 b1^-1 a2 = (b2 a2^-1 b2^-1)^-1 = b2 a2 b2^-1
        let r = w("a1 b1 a1^-1 b1^-1 a2").dehn_reduce().unwrap();
        assert_eq!(r, w("b2 a2 b2^-1"));
    }

    #[test]
    fn conjugated_relator_is_trivial() {
        let r = SurfaceLoopWord::relator(2);
        let u = w("a1 b2^-1 a2 a2 b1");
        let c = SurfaceLoopWord::conjugate(&u, &r).unwrap();
        assert!(c.dehn_reduce().unwrap().is_empty());
    }

    #[test]
    fn pi_count_examples() {
        let x = SurfaceLoopWord::new(
            2,
            parse_surface_word("a1 b2 a1^-1 a1", 2).unwrap().letters().to_vec(),
        )
        .unwrap();
        assert_eq!(x.pi_count_label("a1").unwrap(), 1);
        assert_eq!(w("a1").pi_count_label("b1").unwrap(), 0);
        assert!(w("a1").pi_count_label("c7").is_err());
        assert!(w("a1").pi_count_label("a3").is_err());
    }

    #[test]
    fn free_reduce_in_surface_words() {
        assert_eq!(w("a1 b1 b1^-1 a1"), w("a1 a1"));
    }

    #[test]
    fn torus_normal_form() {
        let t = parse_surface_word("b1 a1 b1^-1 a1", 1).unwrap();
        assert_eq!(t.reduce().unwrap(), parse_surface_word("a1 a1", 1).unwrap());
    }
}
