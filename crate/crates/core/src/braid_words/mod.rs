//! Word algebra for Artin braid groups, pure-braid band generators and
//! surface-group words.
//!
//! Text form: whitespace-separated letters such as `s1 s2^-1 A1,3 a1 b2^-1`.
//! `sN` is an Artin generator, `Ai,j` a band generator, `aK`/`bK` surface
//! generators (optionally tagged with a strand as `a1@2`). A suffix `^k`
//! repeats a letter `|k|` times, inverted when `k < 0`. Tokens made only of
//! the letters `abcd`/`ABCD` are read letter by letter as `a1 b1 a2 b2`,
//! upper case meaning inverse, so `abAB` is the commutator of `a1` and `b1`.

mod artin;
mod braid;
mod mixed;
mod rewrite;
mod surface_word;

pub use artin::{braid_equal, ArtinAction, ArtinOutcome};
pub use braid::{ArtinLetter, BraidLetter, BraidWord};
pub use mixed::{MixedBraidWord, MixedLetter};
pub use rewrite::random_braid_rewrite;
pub use surface_word::{DehnReducer, DehnStack, SurfaceGen, SurfaceLetter, SurfaceLoopWord};

use crate::{GgError, Result};

/// Letters with a formal inverse.
pub trait Invertible: Copy + Eq {
    fn inverse(self) -> Self;
}

/// Cancel adjacent inverse pairs.
pub fn free_reduce<L: Invertible>(letters: &[L]) -> Vec<L> {
    let mut out: Vec<L> = Vec::with_capacity(letters.len());
    for &l in letters {
        match out.last() {
            Some(&top) if top == l.inverse() => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

/// One parsed token before it is interpreted in a specific word type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Token {
    Sigma(u16),
    Band(u16, u16),
    Surface(SurfaceGen, Option<u16>),
}

/// Split text into `(token, exponent)` pairs.
pub(crate) fn tokenize(text: &str) -> Result<Vec<(Token, i64)>> {
    let mut out = Vec::new();
    for raw in text.split_whitespace() {
        if raw.chars().all(|c| "abcdABCD".contains(c)) {
            for c in raw.chars() {
                let gen = match c.to_ascii_lowercase() {
                    'a' => SurfaceGen::alpha(1),
                    'b' => SurfaceGen::beta(1),
                    'c' => SurfaceGen::alpha(2),
                    _ => SurfaceGen::beta(2),
                };
                out.push((Token::Surface(gen, None), if c.is_ascii_uppercase() { -1 } else { 1 }));
            }
            continue;
        }
        if let Some(labels) = split_run_together(raw) {
            for gen in labels {
                out.push((Token::Surface(gen, None), 1));
            }
            continue;
        }
        let (body, exp) = match raw.split_once('^') {
            Some((b, e)) => {
                let e: i64 = e.parse().map_err(|_| GgError::Parse(format!("bad exponent in `{raw}`")))?;
                (b, e)
            }
            None => (raw, 1),
        };
        let bad = || GgError::Parse(format!("unrecognized letter `{raw}`"));
        let tok = if let Some(idx) = body.strip_prefix('s').or_else(|| body.strip_prefix('σ')) {
            let i: u16 = idx.parse().map_err(|_| bad())?;
            if i == 0 {
                return Err(bad());
            }
            Token::Sigma(i)
        } else if let Some(idx) = body.strip_prefix('A') {
            let (i, j) = idx.split_once(',').or_else(|| idx.split_once('_')).ok_or_else(bad)?;
            let i: u16 = i.parse().map_err(|_| bad())?;
            let j: u16 = j.parse().map_err(|_| bad())?;
            Token::Band(i, j)
        } else {
            let (lab, strand) = match body.split_once('@') {
                Some((l, s)) => (l, Some(s.parse::<u16>().map_err(|_| bad())?)),
                None => (body, None),
            };
            Token::Surface(SurfaceGen::parse_label(lab).map_err(|_| bad())?, strand)
        };
        out.push((tok, exp));
    }
    Ok(out)
}

/// Split tokens such as `a1b1a2` into their labels; `None` unless the token
/// is at least two labels run together.
fn split_run_together(raw: &str) -> Option<Vec<SurfaceGen>> {
    let bytes = raw.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if !matches!(bytes[i], b'a' | b'b') {
            return None;
        }
        let start = i;
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == start + 1 {
            return None;
        }
        out.push(SurfaceGen::parse_label(&raw[start..i]).ok()?);
    }
    (out.len() >= 2).then_some(out)
}

/// Parse a surface-group word of the given genus.
pub fn parse_surface_word(text: &str, genus: u16) -> Result<SurfaceLoopWord> {
    SurfaceLoopWord::new(genus, parse_surface_letters(text)?)
}

/// Surface letters as written, without free reduction.
pub fn parse_surface_letters(text: &str) -> Result<Vec<SurfaceLetter>> {
    let mut letters = Vec::new();
    for (tok, exp) in tokenize(text)? {
        match tok {
            Token::Surface(g, None) => {
                for _ in 0..exp.unsigned_abs() {
                    letters.push(SurfaceLetter::new(g, exp < 0));
                }
            }
            _ => return Err(GgError::Parse(format!("not a surface-group letter in `{text}`"))),
        }
    }
    Ok(letters)
}

/// Parse a braid word on `n` strands (Artin and band letters).
pub fn parse_braid_word(text: &str, n: u16) -> Result<BraidWord> {
    let mut letters = Vec::new();
    for (tok, exp) in tokenize(text)? {
        let l = match tok {
            Token::Sigma(i) => BraidLetter::Sigma { i, inv: false },
            Token::Band(i, j) => BraidLetter::Band { i, j, inv: false },
            Token::Surface(..) => {
                return Err(GgError::Parse(format!("surface letter in braid word `{text}`")))
            }
        };
        for _ in 0..exp.unsigned_abs() {
            letters.push(if exp < 0 { l.inverse() } else { l });
        }
    }
    BraidWord::new(n, letters)
}

/// Parse a mixed word on `n` strands of a genus-`g` surface.
pub fn parse_mixed_word(text: &str, n: u16, genus: u16) -> Result<MixedBraidWord> {
    let mut letters = Vec::new();
    for (tok, exp) in tokenize(text)? {
        let l = match tok {
            Token::Sigma(i) => MixedLetter::Sigma { i, inv: false },
            Token::Band(i, j) => MixedLetter::Band { i, j, inv: false },
            Token::Surface(gen, strand) => MixedLetter::Surface { strand: strand.unwrap_or(1), gen, inv: false },
        };
        for _ in 0..exp.unsigned_abs() {
            letters.push(if exp < 0 { l.inverse() } else { l });
        }
    }
    MixedBraidWord::new(n, genus, letters)
}
