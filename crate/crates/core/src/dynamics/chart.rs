//! Area-preserving annulus and disc charts and their rotation profiles.
//!
//! Every chart carries coordinates `(u, theta)` with area form
//! `du ^ dtheta`, `u` in `(0, u_max)`. A profile gives the rotation speed
//! (in turns per unit time) as a function of `u`; the generated flow is
//! `theta -> theta + 2 pi speed(u) t`, the Hamiltonian flow of
//! `H(u) = 2 pi int_u^{u_max} speed`.

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::numeric::{smootherstep, smootherstep_integral};
use crate::surface::hyperbolic::{self, Mobius, Octagon};
use crate::surface::SurfaceModel;
use crate::{GgError, Result};

/// Where a chart sits on its model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Chart {
    /// Euclidean disc in a planar model; `u = rho^2/2`.
    Disc { cx: f64, cy: f64, radius: f64 },
    /// Euclidean disc on the flat torus (radius below 1/2).
    TorusDisc { cx: f64, cy: f64, radius: f64 },
    /// Round Euclidean annulus; `u = (rho^2 - r_in^2)/2`.
    Annulus { cx: f64, cy: f64, r_in: f64, r_out: f64 },
    /// Hyperbolic disc inside the octagon; `u = cosh(rho) - 1`.
    HyperbolicDisc { cx: f64, cy: f64, radius: f64 },
    /// Torus band around `y = center` (horizontal, rotating along `a1`) or
    /// `x = center` (vertical, rotating along `b1`).
    Band { horizontal: bool, center: f64, half_width: f64 },
    /// Collar of half-width `half_width` around the closed geodesic of a
    /// genus-2 generator (`gen`: 0 = a1, 1 = b1, 2 = a2, 3 = b2); rotation
    /// moves along the generator's direction.
    Collar { gen: u8, half_width: f64 },
}

/// Largest collar half-width accepted (below the collar-lemma bound for the
/// generator length).
pub fn max_collar_half_width() -> f64 {
    let l = Octagon::get().generator_length(0);
    (1.0 / (l / 2.0).sinh()).asinh() * 0.999
}

/// A point inside a chart: coordinates plus the data needed to move it.
#[derive(Debug, Clone, Copy)]
pub struct ChartPoint {
    pub u: f64,
    pub theta: f64,
    /// Collar charts: index of the axis lift used.
    lift: usize,
}

impl Chart {
    pub fn validate(&self, model: &SurfaceModel) -> Result<()> {
        let bad = |m: String| Err(GgError::InvalidInput(m));
        match (*self, model) {
            (Chart::Disc { cx, cy, radius }, SurfaceModel::Disc | SurfaceModel::Annulus { .. }) => {
                if !(radius > 0.0) || C::new(cx, cy).norm() + radius > 1.0 + 1e-12 {
                    return bad("disc chart must lie in the unit disc".into());
                }
                if let SurfaceModel::Annulus { r_in } = model {
                    if C::new(cx, cy).norm() - radius < *r_in {
                        return bad("disc chart meets the hole of the annulus".into());
                    }
                }
                Ok(())
            }
            (Chart::TorusDisc { radius, .. }, SurfaceModel::Torus) => {
                if !(radius > 0.0 && radius < 0.5) {
                    return bad("torus disc chart radius must be in (0, 1/2)".into());
                }
                Ok(())
            }
            (Chart::Annulus { cx, cy, r_in, r_out }, SurfaceModel::Disc | SurfaceModel::Annulus { .. }) => {
                if !(0.0 <= r_in && r_in < r_out) || C::new(cx, cy).norm() + r_out > 1.0 + 1e-12 {
                    return bad("annulus chart must lie in the unit disc".into());
                }
                if let SurfaceModel::Annulus { r_in: hole } = model {
                    if C::new(cx, cy).norm() + hole > r_in + 1e-12 {
                        return bad("annulus chart must surround the hole".into());
                    }
                }
                Ok(())
            }
            (Chart::HyperbolicDisc { cx, cy, radius }, SurfaceModel::Genus2) => {
                let c = C::new(cx, cy);
                if !(radius > 0.0) || c.norm() >= 1.0 || hyperbolic::dist_to_origin(c) + radius >= Octagon::get().inradius {
                    return bad("hyperbolic disc chart must lie inside the inscribed disc of the octagon".into());
                }
                Ok(())
            }
            (Chart::Band { center, half_width, .. }, SurfaceModel::Torus) => {
                if !(half_width > 0.0 && half_width < 0.5) || !center.is_finite() {
                    return bad("band half-width must be in (0, 1/2)".into());
                }
                Ok(())
            }
            (Chart::Collar { gen, half_width }, SurfaceModel::Genus2) => {
                if gen > 3 {
                    return bad(format!("collar generator index {gen} out of range"));
                }
                if !(half_width > 0.0 && half_width < max_collar_half_width()) {
                    return bad(format!("collar half-width {half_width} not embedded"));
                }
                Ok(())
            }
            _ => Err(GgError::NoChart(format!("{self:?} does not live on {}", model.key()))),
        }
    }

    /// Extent of the `u` coordinate (equals the chart area over `2 pi`).
    pub fn u_max(&self) -> f64 {
        match *self {
            Chart::Disc { radius, .. } | Chart::TorusDisc { radius, .. } => radius * radius / 2.0,
            Chart::Annulus { r_in, r_out, .. } => (r_out * r_out - r_in * r_in) / 2.0,
            Chart::HyperbolicDisc { radius, .. } => radius.cosh() - 1.0,
            Chart::Band { half_width, .. } => half_width / PI,
            Chart::Collar { gen, half_width } => Octagon::get().generator_length(gen) / PI * half_width.sinh(),
        }
    }

    pub fn area(&self) -> f64 {
        2.0 * PI * self.u_max()
    }

    /// Whether the region below `u = 0` is enclosed (disc centre side) or
    /// the chart is separating with the `u = 0` side outside.
    fn inner_side_outside(&self) -> bool {
        !matches!(self, Chart::Disc { .. } | Chart::TorusDisc { .. } | Chart::HyperbolicDisc { .. })
    }

    /// Whether the chart complement is connected (so a flux-carrying twist
    /// has no single-valued Hamiltonian).
    pub fn is_non_separating(&self) -> bool {
        matches!(self, Chart::Band { .. } | Chart::Collar { .. })
    }

    /// Chart coordinates of a point given in model coordinates (local
    /// coordinates in the octagon for genus 2; any lift for the torus).
    pub fn coords(&self, p: C) -> Option<ChartPoint> {
        let cp = |u: f64, theta: f64| Some(ChartPoint { u, theta, lift: 0 });
        match *self {
            Chart::Disc { cx, cy, radius } | Chart::TorusDisc { cx, cy, radius } => {
                let rel = self.relative(p, cx, cy);
                let r2 = rel.norm_sqr();
                if r2 >= radius * radius {
                    return None;
                }
                cp(r2 / 2.0, rel.im.atan2(rel.re))
            }
            Chart::Annulus { cx, cy, r_in, r_out } => {
                let rel = p - C::new(cx, cy);
                let r2 = rel.norm_sqr();
                if r2 <= r_in * r_in || r2 >= r_out * r_out {
                    return None;
                }
                cp((r2 - r_in * r_in) / 2.0, rel.im.atan2(rel.re))
            }
            Chart::HyperbolicDisc { cx, cy, radius } => {
                let w = Mobius::to_origin(C::new(cx, cy)).apply(p);
                let rho = hyperbolic::dist_to_origin(w);
                if rho >= radius {
                    return None;
                }
                cp(rho.cosh() - 1.0, w.im.atan2(w.re))
            }
            Chart::Band { horizontal, center, half_width } => {
                let (along, across) = if horizontal { (p.re, p.im) } else { (p.im, p.re) };
                let off = across - center;
                let off = off - off.round();
                if off.abs() >= half_width {
                    return None;
                }
                let u = if horizontal { (half_width - off) / (2.0 * PI) } else { (off + half_width) / (2.0 * PI) };
                cp(u, 2.0 * PI * along)
            }
            Chart::Collar { gen, half_width } => {
                let oct = Octagon::get();
                let l = oct.generator_length(gen);
                for (k, lift) in oct.axis_lifts(gen).iter().enumerate() {
                    let (s, d) = lift.frame.coords(p);
                    if d.abs() < half_width {
                        let u = l / (2.0 * PI) * (half_width.sinh() - d.sinh());
                        return Some(ChartPoint { u, theta: 2.0 * PI * s / l, lift: k });
                    }
                }
                None
            }
        }
    }

    /// Rotate a point by `dtheta` within the chart. Returns the new point in
    /// cover coordinates: planar models and torus give the moved point
    /// (torus: `p` plus the unwrapped displacement); genus 2 gives the
    /// local point in the octagon and the deck codes to append.
    pub fn rotate(&self, p: C, cpt: &ChartPoint, dtheta: f64) -> (C, Vec<u8>) {
        match *self {
            Chart::Disc { cx, cy, .. } | Chart::TorusDisc { cx, cy, .. } => {
                let rel = self.relative(p, cx, cy);
                let moved = rel * C::from_polar(1.0, dtheta);
                (p + (moved - rel), Vec::new())
            }
            Chart::Annulus { cx, cy, .. } => {
                let c = C::new(cx, cy);
                (c + (p - c) * C::from_polar(1.0, dtheta), Vec::new())
            }
            Chart::HyperbolicDisc { cx, cy, .. } => {
                let m = Mobius::to_origin(C::new(cx, cy));
                let w = m.apply(p) * C::from_polar(1.0, dtheta);
                (m.inverse().apply(w), Vec::new())
            }
            Chart::Band { horizontal, .. } => {
                let shift = dtheta / (2.0 * PI);
                let d = if horizontal { C::new(shift, 0.0) } else { C::new(0.0, shift) };
                (p + d, Vec::new())
            }
            Chart::Collar { gen, .. } => {
                let oct = Octagon::get();
                let l = oct.generator_length(gen);
                let lift = &oct.axis_lifts(gen)[cpt.lift];
                let ds = dtheta / (2.0 * PI) * l;
                let m = (ds / l).floor();
                let frac = ds - m * l;
                let moved = lift.frame.translate(p, frac);
                let (local, codes) = oct.reduce(moved);
                let mut deck = Vec::new();
                let reps = m.abs() as usize;
                for _ in 0..reps {
                    if m > 0.0 {
                        deck.extend_from_slice(&lift.period_word);
                    } else {
                        deck.extend(lift.period_word.iter().rev().map(|c| c ^ 1));
                    }
                }
                deck.extend(codes);
                (local, deck)
            }
        }
    }

    /// Chart point from coordinates (for sampling and tests). Collars use
    /// the lift nearest the origin.
    pub fn point_at(&self, u: f64, theta: f64) -> C {
        match *self {
            Chart::Disc { cx, cy, .. } | Chart::TorusDisc { cx, cy, .. } => {
                C::new(cx, cy) + C::from_polar((2.0 * u).sqrt(), theta)
            }
            Chart::Annulus { cx, cy, r_in, .. } => C::new(cx, cy) + C::from_polar((2.0 * u + r_in * r_in).sqrt(), theta),
            Chart::HyperbolicDisc { cx, cy, .. } => {
                let rho = (u + 1.0).acosh();
                let w = C::from_polar((rho / 2.0).tanh(), theta);
                Mobius::to_origin(C::new(cx, cy)).inverse().apply(w)
            }
            Chart::Band { horizontal, center, half_width } => {
                let along = theta / (2.0 * PI);
                if horizontal {
                    C::new(along, center + half_width - 2.0 * PI * u)
                } else {
                    C::new(center - half_width + 2.0 * PI * u, along)
                }
            }
            Chart::Collar { gen, half_width } => {
                let oct = Octagon::get();
                let l = oct.generator_length(gen);
                let d = (half_width.sinh() - 2.0 * PI * u / l).asinh();
                let s = theta / (2.0 * PI) * l;
                oct.reduce(oct.axis_lifts(gen)[0].frame.point(s, d)).0
            }
        }
    }

    /// Euclidean distance scale of the chart (bound on `|dp/dtheta|`).
    pub fn speed_scale(&self) -> f64 {
        match *self {
            Chart::Disc { radius, .. } | Chart::TorusDisc { radius, .. } => radius,
            Chart::Annulus { r_out, .. } => r_out,
            Chart::HyperbolicDisc { cx, cy, radius } => {
                let far = hyperbolic::dist_to_origin(C::new(cx, cy)) + radius;
                (far / 2.0).tanh()
            }
            Chart::Band { .. } => 1.0 / (2.0 * PI),
            Chart::Collar { gen, half_width } => Octagon::get().generator_length(gen) / (2.0 * PI) * half_width.cosh(),
        }
    }

    /// Offset from the chart centre; on the torus the shortest one.
    fn relative(&self, p: C, cx: f64, cy: f64) -> C {
        let rel = p - C::new(cx, cy);
        if matches!(self, Chart::TorusDisc { .. }) {
            C::new(rel.re - rel.re.round(), rel.im - rel.im.round())
        } else {
            rel
        }
    }

    /// Value of the Hamiltonian outside the chart on the `u = 0` side and
    /// the `u = u_max` side.
    pub fn outside_values(&self, profile: &Profile) -> Vec<f64> {
        let mut v = vec![0.0];
        if self.inner_side_outside() {
            v.push(profile.hamiltonian(0.0, self.u_max()));
        }
        v
    }
}


/// Rotation speed in turns per unit time as a function of the chart
/// coordinate `u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// `turns` on `[inner, outer]`, smootherstep ramps to 0 on
    /// `(0, inner)` and `(outer, u_max)`. `inner = 0` rotates rigidly up to
    /// the centre of a disc chart.
    Plateau { turns: f64, inner: f64, outer: f64 },
    /// Zero-flux profile with `H(u) = amplitude * 64 (s(1-s))^3`,
    /// `s = u/u_max`.
    Bump { amplitude: f64 },
    /// `H(u) = amplitude (1 - u/u_max)^exponent`, `exponent >= 2`.
    Power { amplitude: f64, exponent: f64 },
    /// Rigid rotation by `turns` per unit time on the whole chart.
    Constant { turns: f64 },
}

impl Profile {
    pub fn validate(&self, u_max: f64) -> Result<()> {
        match *self {
            Profile::Plateau { turns, inner, outer } => {
                if !turns.is_finite() || !(0.0 <= inner && inner <= outer && outer < u_max) {
                    return Err(GgError::InvalidInput(format!(
                        "plateau needs 0 <= inner <= outer < u_max = {u_max}, got {inner}, {outer}"
                    )));
                }
            }
            Profile::Bump { amplitude } => {
                if !amplitude.is_finite() {
                    return Err(GgError::InvalidInput("bump amplitude must be finite".into()));
                }
            }
            Profile::Power { amplitude, exponent } => {
                if !amplitude.is_finite() || !(exponent >= 2.0) {
                    return Err(GgError::InvalidInput("power profile needs exponent >= 2".into()));
                }
            }
            Profile::Constant { turns } => {
                if !turns.is_finite() {
                    return Err(GgError::InvalidInput("constant profile must be finite".into()));
                }
            }
        }
        Ok(())
    }

    /// Turns per unit time at `u`.
    pub fn speed(&self, u: f64, u_max: f64) -> f64 {
        if !(0.0..=u_max).contains(&u) {
            return 0.0;
        }
        match *self {
            Profile::Plateau { turns, inner, outer } => {
                if u < inner {
                    turns * smootherstep(u / inner)
                } else if u <= outer {
                    turns
                } else {
                    turns * smootherstep((u_max - u) / (u_max - outer))
                }
            }
            Profile::Bump { amplitude } => {
                // H = A 64 (s(1-s))^3, H' = A 64 * 3 (s(1-s))^2 (1-2s) / u_max
                let s = u / u_max;
                let q = s * (1.0 - s);
                -amplitude * 192.0 * q * q * (1.0 - 2.0 * s) / u_max / (2.0 * PI)
            }
            Profile::Power { amplitude, exponent } => {
                let s = 1.0 - u / u_max;
                amplitude * exponent * s.powf(exponent - 1.0) / u_max / (2.0 * PI)
            }
            Profile::Constant { turns } => turns,
        }
    }

    /// `H(u) = 2 pi int_u^{u_max} speed`.
    pub fn hamiltonian(&self, u: f64, u_max: f64) -> f64 {
        let u = u.clamp(0.0, u_max);
        match *self {
            Profile::Plateau { turns, inner, outer } => {
                // integral of the outer ramp from u to u_max, in units of its width
                let w_out = u_max - outer;
                let outer_part = |a: f64| w_out * smootherstep_integral((u_max - a) / w_out);
                let full = if u >= outer {
                    outer_part(u)
                } else if u >= inner {
                    outer_part(outer) + (outer - u)
                } else {
                    let ramp_rest = inner * (smootherstep_integral(1.0) - smootherstep_integral(u / inner));
                    outer_part(outer) + (outer - inner) + ramp_rest
                };
                2.0 * PI * turns * full
            }
            Profile::Bump { amplitude } => {
                let s = u / u_max;
                amplitude * 64.0 * (s * (1.0 - s)).powi(3)
            }
            Profile::Power { amplitude, exponent } => amplitude * (1.0 - u / u_max).powf(exponent),
            Profile::Constant { turns } => 2.0 * PI * turns * (u_max - u),
        }
    }

    /// Largest `|speed|` (turns per unit time).
    pub fn max_speed(&self, u_max: f64) -> f64 {
        match *self {
            Profile::Plateau { turns, .. } | Profile::Constant { turns } => turns.abs(),
            _ => (0..=512)
                .map(|k| self.speed(u_max * k as f64 / 512.0, u_max).abs())
                .fold(0.0, f64::max)
                * 1.05,
        }
    }

    /// `int_0^{u_max} speed du`; a twist on a non-separating chart is
    /// Hamiltonian only when this vanishes.
    pub fn flux(&self, u_max: f64) -> f64 {
        self.hamiltonian(0.0, u_max) / (2.0 * PI)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
        let n = 20_000;
        let h = (b - a) / n as f64;
        (0..n).map(|k| f(a + (k as f64 + 0.5) * h)).sum::<f64>() * h
    }

    #[test]
    fn hamiltonian_integrates_speed() {
        let um = 0.4;
        for p in [
            Profile::Plateau { turns: 1.5, inner: 0.05, outer: 0.3 },
            Profile::Plateau { turns: -1.0, inner: 0.0, outer: 0.2 },
            Profile::Bump { amplitude: 0.7 },
            Profile::Power { amplitude: 2.0, exponent: 3.0 },
            Profile::Constant { turns: 0.5 },
        ] {
            for u in [0.0, 0.03, 0.1, 0.25, 0.35, 0.4] {
                let direct = 2.0 * PI * quad(|v| p.speed(v, um), u, um);
                assert!((direct - p.hamiltonian(u, um)).abs() < 1e-6, "{p:?} at {u}: {direct} vs {}", p.hamiltonian(u, um));
            }
        }
        assert!(Profile::Bump { amplitude: 1.0 }.flux(um).abs() < 1e-15);
    }

    #[test]
    fn plateau_shape() {
        let p = Profile::Plateau { turns: 1.0, inner: 0.1, outer: 0.3 };
        assert_eq!(p.speed(0.2, 0.4), 1.0);
        let v = p.speed(0.35, 0.4);
        assert!(v > 0.0 && v < 1.0);
        assert_eq!(p.speed(0.0, 0.4), 0.0);
        assert!(p.speed(0.4, 0.4).abs() < 1e-15);
        assert!(p.validate(0.4).is_ok());
        assert!(Profile::Plateau { turns: 1.0, inner: 0.3, outer: 0.1 }.validate(0.4).is_err());
    }

    #[test]
    fn chart_areas_match_coordinates() {
        // Monte Carlo area of each chart in its model equals 2 pi u_max
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let cases = [
            (SurfaceModel::Disc, Chart::Disc { cx: 0.1, cy: 0.0, radius: 0.5 }),
            (SurfaceModel::Disc, Chart::Annulus { cx: 0.0, cy: 0.0, r_in: 0.2, r_out: 0.7 }),
            (SurfaceModel::Torus, Chart::Band { horizontal: true, center: 0.3, half_width: 0.1 }),
            (SurfaceModel::Genus2, Chart::Collar { gen: 0, half_width: 0.4 }),
            (SurfaceModel::Genus2, Chart::HyperbolicDisc { cx: 0.1, cy: 0.05, radius: 0.8 }),
        ];
        for (model, chart) in cases {
            chart.validate(&model).unwrap();
            let n = 200_000;
            let hits = (0..n).filter(|_| chart.coords(model.sample_point(&mut rng).c()).is_some()).count();
            let est = hits as f64 / n as f64 * model.total_area();
            let rel = (est - chart.area()).abs() / chart.area();
            assert!(rel < 0.02, "{chart:?}: {est} vs {}", chart.area());
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let cases = [
            Chart::Disc { cx: 0.1, cy: -0.2, radius: 0.5 },
            Chart::Annulus { cx: 0.0, cy: 0.0, r_in: 0.2, r_out: 0.7 },
            Chart::HyperbolicDisc { cx: 0.1, cy: 0.05, radius: 0.8 },
            Chart::Band { horizontal: false, center: 0.5, half_width: 0.2 },
            Chart::Collar { gen: 1, half_width: 0.5 },
        ];
        for chart in cases {
            let u = chart.u_max() * 0.37;
            let p = chart.point_at(u, 0.9);
            let c = chart.coords(p).unwrap();
            assert!((c.u - u).abs() < 1e-9, "{chart:?} {} {u}", c.u);
        }
    }

    #[test]
    fn collar_rotation_by_full_turn_is_a_deck_move() {
        let chart = Chart::Collar { gen: 0, half_width: 0.5 };
        let p = chart.point_at(chart.u_max() * 0.5, 0.3);
        let cp = chart.coords(p).unwrap();
        let (local, deck) = chart.rotate(p, &cp, 2.0 * PI);
        assert!((local - p).norm() < 1e-9);
        let w = crate::braid_words::SurfaceLoopWord::new(
            2,
            deck.iter().map(|&c| crate::braid_words::SurfaceLetter::from_code(c)).collect(),
        )
        .unwrap();
        assert_eq!(w.pi_count(crate::braid_words::SurfaceGen::alpha(1)), 1);
        assert_eq!(w.abelianize(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn collar_limits() {
        assert!(max_collar_half_width() > 0.6);
        assert!(Chart::Collar { gen: 0, half_width: 0.7 }.validate(&SurfaceModel::Genus2).is_err());
        assert!(Chart::Collar { gen: 0, half_width: 0.5 }.validate(&SurfaceModel::Disc).is_err());
    }
}
