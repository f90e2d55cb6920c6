use rand::Rng;

use super::{ArtinLetter, BraidWord};

/// Apply `steps` random braid-relation moves to the Artin expansion of a
/// word: far commutation, the braid relation in either sign, or insertion of
/// a cancelling pair. The result represents the same braid.
pub fn random_braid_rewrite<R: Rng + ?Sized>(word: &BraidWord, rng: &mut R, steps: usize) -> BraidWord {
    let n = word.n_strands();
    let mut w = word.to_artin();
    for _ in 0..steps {
        let choice = rng.gen_range(0..4);
        if choice == 3 || w.len() < 2 {
            if n < 2 {
                continue;
            }
            let pos = rng.gen_range(0..=w.len());
            let i = rng.gen_range(1..n);
            let s: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
            w.splice(pos..pos, [ArtinLetter::new(i, s), ArtinLetter::new(i, -s)]);
            continue;
        }
        let pos = rng.gen_range(0..w.len() - 1);
        let (x, y) = (w[pos], w[pos + 1]);
        if x.i.abs_diff(y.i) >= 2 {
            w.swap(pos, pos + 1);
            continue;
        }
        if pos + 2 < w.len() {
            let z = w[pos + 2];
            // s_i s_j s_i = s_j s_i s_j with |i-j| = 1 and equal signs
            if x.i == z.i && x.i.abs_diff(y.i) == 1 && x.sign == y.sign && y.sign == z.sign {
                w[pos] = y;
                w[pos + 1] = x;
                w[pos + 2] = y;
                continue;
            }
        }
        if x.i == y.i && x.sign == -y.sign {
            w.drain(pos..pos + 2);
        }
    }
    BraidWord::from_artin(n, &w).expect("valid rewrite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid_words::{braid_equal, parse_braid_word, ArtinOutcome};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rewriting_preserves_the_braid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = parse_braid_word("s1 s2 s1 s3^-1 s2 A1,4", 4).unwrap();
        for _ in 0..20 {
            let r = random_braid_rewrite(&w, &mut rng, 50);
            assert_eq!(braid_equal(&w, &r), ArtinOutcome::Equal);
        }
    }
}
