use super::{ArtinLetter, BraidWord};

/// Faithful action of the braid group on the free group `F_n`:
/// `s_i: x_i -> x_i x_{i+1} x_i^-1, x_{i+1} -> x_i`. Two braid words are
/// equal in `B_n` iff they induce the same automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtinAction {
    /// `images[k]` = image of `x_{k+1}` as a reduced word; letters are
    /// `±(k+1)`.
    pub images: Vec<Vec<i32>>,
}

/// Result of a budgeted comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArtinOutcome {
    Equal,
    Different,
    /// The image words outgrew the size budget.
    Undecided,
}

fn push_reduced(out: &mut Vec<i32>, x: i32) {
    if out.last() == Some(&-x) {
        out.pop();
    } else {
        out.push(x);
    }
}

fn append_image(out: &mut Vec<i32>, images: &[Vec<i32>], x: i32) {
    let img = &images[x.unsigned_abs() as usize - 1];
    if x > 0 {
        for &y in img {
            push_reduced(out, y);
        }
    } else {
        for &y in img.iter().rev() {
            push_reduced(out, -y);
        }
    }
}

impl ArtinAction {
    pub fn identity(n: usize) -> Self {
        Self { images: (1..=n as i32).map(|k| vec![k]).collect() }
    }

    /// Compose with one more letter on the right: `phi_{w l} = phi_w o phi_l`.
    pub fn apply(&mut self, a: ArtinLetter) {
        let i = a.i as i32;
        let (fi, fj): (Vec<i32>, Vec<i32>) = if a.sign > 0 {
            (vec![i, i + 1, -i], vec![i])
        } else {
            (vec![i + 1], vec![-(i + 1), i, i + 1])
        };
        let mut new_i = Vec::new();
        for &x in &fi {
            append_image(&mut new_i, &self.images, x);
        }
        let mut new_j = Vec::new();
        for &x in &fj {
            append_image(&mut new_j, &self.images, x);
        }
        self.images[i as usize - 1] = new_i;
        self.images[i as usize] = new_j;
    }

    pub fn size(&self) -> usize {
        self.images.iter().map(|v| v.len()).sum()
    }

    /// Action of a word, or `None` if the images exceed `budget` letters.
    pub fn of_word(n: usize, letters: &[ArtinLetter], budget: usize) -> Option<Self> {
        let mut act = Self::identity(n);
        for &l in letters {
            act.apply(l);
            if act.size() > budget {
                return None;
            }
        }
        Some(act)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, v)| v.len() == 1 && v[0] == k as i32 + 1)
    }
}

/// Decide equality of two braid words (default budget one million letters).
pub fn braid_equal(u: &BraidWord, v: &BraidWord) -> ArtinOutcome {
    if u.n_strands() != v.n_strands() {
        return ArtinOutcome::Different;
    }
    let mut w = u.to_artin();
    w.extend(v.invert().to_artin());
    match ArtinAction::of_word(u.n_strands() as usize, &w, 1_000_000) {
        Some(a) if a.is_identity() => ArtinOutcome::Equal,
        Some(_) => ArtinOutcome::Different,
        None => ArtinOutcome::Undecided,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid_words::parse_braid_word;

    fn b(s: &str, n: u16) -> BraidWord {
        parse_braid_word(s, n).unwrap()
    }

    #[test]
    fn braid_relations_hold() {
        assert_eq!(braid_equal(&b("s1 s2 s1", 3), &b("s2 s1 s2", 3)), ArtinOutcome::Equal);
        assert_eq!(braid_equal(&b("s1 s3", 4), &b("s3 s1", 4)), ArtinOutcome::Equal);
        assert_eq!(braid_equal(&b("s1 s2", 3), &b("s2 s1", 3)), ArtinOutcome::Different);
        assert_eq!(braid_equal(&b("s1 s1^-1", 2), &b("", 2)), ArtinOutcome::Equal);
    }

    #[test]
    fn full_twist_is_central() {
        let d2 = b("s1 s2 s1 s2 s1 s2", 3);
        for g in ["s1", "s2", "s1^-1 s2"] {
            let x = b(g, 3);
            let lhs = d2.multiply(&x).unwrap();
            let rhs = x.multiply(&d2).unwrap();
            assert_eq!(braid_equal(&lhs, &rhs), ArtinOutcome::Equal);
        }
    }

    #[test]
    fn band_generators_commute_when_disjoint() {
        let a = b("A1,2", 4);
        let c = b("A3,4", 4);
        assert_eq!(
            braid_equal(&a.multiply(&c).unwrap(), &c.multiply(&a).unwrap()),
            ArtinOutcome::Equal
        );
        let d = b("A2,3", 4);
        assert_eq!(
            braid_equal(&a.multiply(&d).unwrap(), &d.multiply(&a).unwrap()),
            ArtinOutcome::Different
        );
    }
}
