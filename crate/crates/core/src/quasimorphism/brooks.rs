//! Non-overlapping Brooks counting on free and surface-group words.

use crate::braid_words::{DehnReducer, Invertible, SurfaceLetter, SurfaceLoopWord};
use crate::{GgError, Result};

/// Signed count of a pattern: disjoint occurrences of the pattern minus
/// disjoint occurrences of its inverse, each counted greedily left to right
/// (which realizes the maximal number of disjoint copies).
///
/// With `surface_genus = Some(g)` (g >= 2) inputs are Dehn-reduced first;
/// otherwise only free reduction is applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrooksCounter {
    pattern: Vec<u8>,
    inverse: Vec<u8>,
    surface_genus: Option<u16>,
}

impl BrooksCounter {
    pub fn new(pattern: &[SurfaceLetter], surface_genus: Option<u16>) -> Result<Self> {
        if pattern.is_empty() {
            return Err(GgError::InvalidInput("empty Brooks pattern".into()));
        }
        if pattern.windows(2).any(|w| w[1] == w[0].inverse()) {
            return Err(GgError::InvalidInput("Brooks pattern is not freely reduced".into()));
        }
        let l = pattern.len();
        for d in 1..l {
            if l % d == 0 && (d..l).all(|k| pattern[k] == pattern[k - d]) {
                return Err(GgError::InvalidInput("Brooks pattern is a proper power".into()));
            }
        }
        if let Some(g) = surface_genus {
            if g < 2 {
                return Err(GgError::InvalidInput("surface Brooks counting needs genus >= 2".into()));
            }
            if pattern.iter().any(|c| c.gen.handle() > g) {
                return Err(GgError::InvalidInput("pattern letter out of range".into()));
            }
        }
        let codes: Vec<u8> = pattern.iter().map(|l| l.code()).collect();
        let inverse = codes.iter().rev().map(|&c| c ^ 1).collect();
        Ok(Self { pattern: codes, inverse, surface_genus })
    }

    pub fn pattern(&self) -> SurfaceLoopWord {
        let genus = self.surface_genus.unwrap_or_else(|| max_handle(&self.pattern));
        SurfaceLoopWord::new(genus, self.pattern.iter().map(|&c| SurfaceLetter::from_code(c)).collect())
            .expect("pattern validated on construction")
    }

    pub fn surface_genus(&self) -> Option<u16> {
        self.surface_genus
    }

    fn reduced_codes(&self, w: &SurfaceLoopWord) -> Result<Vec<u8>> {
        match self.surface_genus {
            Some(g) => {
                if w.genus() != g {
                    return Err(GgError::DomainMismatch(format!("word of genus {} for a genus-{g} counter", w.genus())));
                }
                let r = DehnReducer::for_genus(g)?.reduce(w.letters());
                Ok(r.letters().iter().map(|l| l.code()).collect())
            }
            None => Ok(w.letters().iter().map(|l| l.code()).collect()),
        }
    }

    pub fn evaluate(&self, w: &SurfaceLoopWord) -> Result<f64> {
        let codes = self.reduced_codes(w)?;
        Ok((greedy_count(&codes, &self.pattern) - greedy_count(&codes, &self.inverse)) as f64)
    }

    /// Exact homogenization `lim count(w^p)/p`, read off the eventually
    /// periodic greedy scan over the cyclic word.
    pub fn homogenized(&self, w: &SurfaceLoopWord) -> Result<f64> {
        let cyc = match self.surface_genus {
            Some(g) => {
                if w.genus() != g {
                    return Err(GgError::DomainMismatch(format!("word of genus {} for a genus-{g} counter", w.genus())));
                }
                cyclic_dehn_reduce(w)?
            }
            None => w.cyclically_reduced(),
        };
        if cyc.is_empty() {
            return Ok(0.0);
        }
        let codes: Vec<u8> = cyc.letters().iter().map(|l| l.code()).collect();
        Ok(cyclic_rate(&codes, &self.pattern) - cyclic_rate(&codes, &self.inverse))
    }
}

fn max_handle(codes: &[u8]) -> u16 {
    codes.iter().map(|&c| SurfaceLetter::from_code(c).gen.handle()).max().unwrap_or(1)
}

/// Maximal number of disjoint occurrences of `pat` in `word`.
pub fn greedy_count(word: &[u8], pat: &[u8]) -> i64 {
    let (n, l) = (word.len(), pat.len());
    let mut count = 0;
    let mut i = 0;
    while i + l <= n {
        if &word[i..i + l] == pat {
            count += 1;
            i += l;
        } else {
            i += 1;
        }
    }
    count
}

/// Occurrences per period of the greedy scan over the bi-infinite power of
/// the cyclic word `cyc`.
fn cyclic_rate(cyc: &[u8], pat: &[u8]) -> f64 {
    let m = cyc.len();
    let matches = |pos: usize| (0..pat.len()).all(|t| cyc[(pos + t) % m] == pat[t]);
    let mut seen: Vec<Option<(i64, usize)>> = vec![None; m];
    let (mut pos, mut count, mut adv) = (0usize, 0i64, 0usize);
    loop {
        if let Some((c0, a0)) = seen[pos] {
            let periods = (adv - a0) / m;
            return (count - c0) as f64 / periods as f64;
        }
        seen[pos] = Some((count, adv));
        let step = if matches(pos) {
            count += 1;
            pat.len()
        } else {
            1
        };
        adv += step;
        pos = (pos + step) % m;
    }
}

/// A Dehn-reduced cyclic conjugate: every power of the result is itself
/// Dehn-reduced.
pub fn cyclic_dehn_reduce(w: &SurfaceLoopWord) -> Result<SurfaceLoopWord> {
    let reducer = DehnReducer::for_genus(w.genus())?;
    let mut cur = reducer.reduce(w.letters()).cyclically_reduced();
    'outer: loop {
        let n = cur.len();
        for rot in 0..n {
            let mut v = cur.letters()[rot..].to_vec();
            v.extend_from_slice(&cur.letters()[..rot]);
            let r = reducer.reduce(&v).cyclically_reduced();
            if r.len() < n {
                cur = r;
                continue 'outer;
            }
        }
        return Ok(cur);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid_words::parse_surface_word;

    fn free(p: &str) -> BrooksCounter {
        let w = parse_surface_word(p, 2).unwrap();
        BrooksCounter::new(w.letters(), None).unwrap()
    }

    #[test]
    fn counts() {
        let q = free("ab");
        assert_eq!(q.evaluate(&parse_surface_word("abab", 2).unwrap()).unwrap(), 2.0);
        assert_eq!(q.evaluate(&parse_surface_word("a", 2).unwrap()).unwrap(), 0.0);
        assert_eq!(q.evaluate(&parse_surface_word("BA", 2).unwrap()).unwrap(), -1.0);
        // overlapping copies of aba in ababa count once
        let q = free("aba");
        assert_eq!(q.evaluate(&parse_surface_word("ababa", 2).unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn pattern_validation() {
        let a = parse_surface_word("a", 2).unwrap().letters()[0];
        assert!(BrooksCounter::new(&[], None).is_err());
        assert!(BrooksCounter::new(&[a, a.inverse()], None).is_err());
        assert!(BrooksCounter::new(&[a, a], None).is_err());
        let ab = parse_surface_word("abab", 2).unwrap();
        assert!(BrooksCounter::new(ab.letters(), None).is_err());
    }

    #[test]
    fn homogenized_counts() {
        let q = free("ab");
        assert_eq!(q.homogenized(&parse_surface_word("ab", 2).unwrap()).unwrap(), 1.0);
        assert_eq!(q.homogenized(&parse_surface_word("abA", 2).unwrap()).unwrap(), 0.0);
        assert_eq!(q.homogenized(&parse_surface_word("ba", 2).unwrap()).unwrap(), 1.0);
        let q = free("aba");
        // (ab)^p contains floor((2p-1)/3)... disjoint copies of aba: rate 2/3 per ab
        let oracle: f64 = {
            let w = parse_surface_word("ab", 2).unwrap();
            let p = 3000;
            q.evaluate(&w.power(p)).unwrap() / p as f64
        };
        let exact = q.homogenized(&parse_surface_word("ab", 2).unwrap()).unwrap();
        assert!((exact - oracle).abs() < 1e-3, "{exact} {oracle}");
    }

    #[test]
    fn cyclic_dehn_reduction_shortens_relator_conjugates() {
        let w = parse_surface_word("b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1 a1 a2", 2).unwrap();
        // cyclically a rotation of the relator times a2
        let c = cyclic_dehn_reduce(&w).unwrap();
        assert_eq!(c.len(), 1);
        let r = cyclic_dehn_reduce(&SurfaceLoopWord::relator(2)).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn surface_counter_uses_dehn_form() {
        let w = parse_surface_word("a1 b1", 2).unwrap();
        let q = BrooksCounter::new(w.letters(), Some(2)).unwrap();
        // a1 b1 A1 B1 a2 b2 A2 B2 = 1, so a1 b1 = B2^-1... reduces to b2 a2 B2 A2 ... shorter
        let long = parse_surface_word("a1 b1 a1^-1 b1^-1 a2", 2).unwrap();
        let v = q.evaluate(&long).unwrap();
        let direct = q.evaluate(&long.dehn_reduce().unwrap()).unwrap();
        assert_eq!(v, direct);
        assert_eq!(v, 0.0);
    }
}
