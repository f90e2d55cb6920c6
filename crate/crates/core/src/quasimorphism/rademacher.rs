//! A homogeneous quasi-morphism on the three-strand braid group: exponent
//! sum corrected by the translation number of the lifted action of
//! `B_3 -> SL(2,Z)` on the universal cover of the projective line.

use std::f64::consts::PI;

use crate::braid_words::BraidWord;
use crate::{GgError, Result};

/// Number of iterates used to read the translation number. Translation
/// numbers here lie in `Z/6`, and the iterate error is below `1/ITERATES`.
const ITERATES: usize = 48;

/// Image of `sigma_1^{±1}` and `sigma_2^{±1}` as integer matrices
/// `[[a, b], [c, d]]`.
fn letter_matrix(i: u16, sign: i8) -> [[f64; 2]; 2] {
    match (i, sign > 0) {
        (1, true) => [[1.0, 1.0], [0.0, 1.0]],
        (1, false) => [[1.0, -1.0], [0.0, 1.0]],
        (2, true) => [[1.0, 0.0], [-1.0, 1.0]],
        (_, _) => [[1.0, 0.0], [1.0, 1.0]],
    }
}

/// Fixed line (angle in `[0, pi)`) of each parabolic letter.
fn fixed_line(i: u16) -> f64 {
    if i == 1 {
        0.0
    } else {
        PI / 2.0
    }
}

/// Lift of a parabolic letter to the line `R` covering the projective line
/// (angle `theta` of a line through the origin), normalized to fix the
/// lifts of its fixed line.
fn lift_apply(i: u16, sign: i8, theta: f64) -> f64 {
    let m = letter_matrix(i, sign);
    let base_line = fixed_line(i);
    let k = ((theta - base_line) / PI).floor();
    let base = base_line + k * PI;
    let (s, c) = theta.sin_cos();
    let x = m[0][0] * c + m[0][1] * s;
    let y = m[1][0] * c + m[1][1] * s;
    let mut phi = y.atan2(x).rem_euclid(PI);
    phi += ((base - phi) / PI).ceil() * PI;
    if phi >= base + PI {
        phi -= PI;
    }
    phi
}

/// Clockwise translation number of the lifted action, in units of a full
/// turn of the projective line. Exact multiples of 1/6.
pub fn translation_number(w: &BraidWord) -> Result<f64> {
    if w.n_strands() != 3 {
        return Err(GgError::DomainMismatch(format!("rademacher3 needs 3 strands, got {}", w.n_strands())));
    }
    let letters = w.to_artin();
    if letters.is_empty() {
        return Ok(0.0);
    }
    let theta0 = 0.318_309_886_183_790_7_f64;
    let mut theta = theta0;
    for _ in 0..ITERATES {
        for l in &letters {
            theta = lift_apply(l.i, l.sign, theta);
        }
    }
    let turns = (theta0 - theta) / PI / ITERATES as f64;
    Ok((turns * 6.0).round() / 6.0)
}

/// `expsum(w) - 6 rot(w)`; vanishes on the full twist, equals 1 on each
/// Artin generator.
pub fn rademacher3(w: &BraidWord) -> Result<f64> {
    let rot = translation_number(w)?;
    Ok(w.exponent_sum() as f64 - 6.0 * rot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid_words::parse_braid_word;

    fn psi(s: &str) -> f64 {
        rademacher3(&parse_braid_word(s, 3).unwrap()).unwrap()
    }

    #[test]
    fn values_on_generators_and_center() {
        assert_eq!(psi(""), 0.0);
        assert_eq!(psi("s1"), 1.0);
        assert_eq!(psi("s2"), 1.0);
        assert_eq!(psi("s1^-1"), -1.0);
        assert_eq!(psi("s1 s2"), 0.0);
        assert_eq!(psi("s1 s2 s1"), 0.0);
        let delta2 = "s1 s2 s1 s2 s1 s2 s1 s2 s1 s2 s1 s2";
        assert_eq!(psi(delta2), 0.0);
    }

    #[test]
    fn braid_relation_respected() {
        assert_eq!(psi("s1 s2 s1 s1"), psi("s2 s1 s2 s1"));
        assert_eq!(psi("s1 s2 s1 s2^-1"), psi("s2 s1 s2 s2^-1"));
    }

    #[test]
    fn hyperbolic_words() {
        // s1 s2^-1 maps to a hyperbolic matrix of trace 3
        assert_eq!(psi("s1 s2^-1"), 0.0);
        assert_eq!(psi("s1 s1 s2^-1"), 1.0);
    }

    #[test]
    fn defect_witness() {
        let lhs = psi("s1");
        let rhs = psi("s2^-1") + psi("s2 s1");
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn wrong_strand_count() {
        assert!(rademacher3(&parse_braid_word("s1", 2).unwrap()).is_err());
    }
}
