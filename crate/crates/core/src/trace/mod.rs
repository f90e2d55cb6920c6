//! Braids and loop classes traced by an isotopy on a configuration.
//!
//! The loop of a configuration `x` runs the canonical paths `z_i -> x_i` on
//! `[0, 1/3]`, the isotopy on `[1/3, 2/3]` and `f(x_i) -> z_i` on
//! `[2/3, 1]`. On planar models the braid is read from crossings of the
//! projected strands; on the torus and in genus 2 each strand's class is the
//! deck element reached by its lift.

mod autonomous;

use num_complex::Complex64 as C;
use serde::Serialize;

pub use autonomous::{
    autonomous_decompose, classify_regularity, orbit_period, AutonomousDecomposition, Commutation, PointFlag,
    RegularityReport,
};

use crate::braid_words::{free_reduce, ArtinLetter, BraidWord, SurfaceGen, SurfaceLetter, SurfaceLoopWord};
use crate::dynamics::{Isotopy, LiftedPoint};
use crate::surface::hyperbolic::Octagon;
use crate::surface::{torus_nearest_shift, Point, SurfaceModel, COINCIDENCE_TOL};
use crate::{GgError, Result};

/// Sampling and projection controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceOptions {
    /// Largest displacement of any strand between consecutive samples.
    pub max_step: f64,
    /// Projection direction angle for crossing detection.
    pub projection_angle: f64,
    /// Further projection angles tried when a crossing is degenerate.
    pub perturb_budget: usize,
    /// Keep samples of the isotopy arc on closed models (debug dumps).
    pub keep_samples: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self { max_step: 0.02, projection_angle: 0.0, perturb_budget: 8, keep_samples: false }
    }
}

impl TraceOptions {
    pub fn refined(self) -> Self {
        Self { max_step: self.max_step / 2.0, ..self }
    }
}

/// Default basepoint configuration: a short row near the boundary of the
/// planar models, near the origin of the closed ones.
pub fn default_basepoints(model: &SurfaceModel, n: usize) -> Vec<Point> {
    let mid = (n as f64 - 1.0) / 2.0;
    (0..n)
        .map(|i| match model {
            SurfaceModel::Disc | SurfaceModel::Annulus { .. } => Point::new((i as f64 - mid) * 0.05, -0.95),
            SurfaceModel::Torus => Point::new(0.02 + 0.05 * i as f64, 0.02),
            SurfaceModel::Genus2 => Point::new(0.03 * i as f64, 0.0),
        })
        .collect()
}

/// The sampled loops of one configuration.
#[derive(Debug, Clone, Serialize)]
pub struct TracedLoop {
    #[serde(skip)]
    pub model: SurfaceModel,
    pub z: Vec<Point>,
    pub x: Vec<Point>,
    /// Lifted endpoints of the isotopy arcs.
    #[serde(skip)]
    pub image: Vec<LiftedPoint>,
    /// Loop parameter of each sample, in `[0, 1]`.
    pub times: Vec<f64>,
    /// Per sample, the strand positions (cover coordinates).
    pub samples: Vec<Vec<C>>,
    /// Closed models: per-strand loop classes.
    #[serde(skip)]
    pub classes: Vec<SurfaceLoopWord>,
}

fn check_distinct(model: &SurfaceModel, pts: &[Point]) -> Result<()> {
    for i in 0..pts.len() {
        model.validate(pts[i])?;
        for j in 0..i {
            if model.distance(pts[i], pts[j]) < COINCIDENCE_TOL {
                return Err(GgError::Collision);
            }
        }
    }
    Ok(())
}

fn check_separated(row: &[C]) -> Result<()> {
    for i in 0..row.len() {
        for j in 0..i {
            if (row[i] - row[j]).norm() < COINCIDENCE_TOL {
                return Err(GgError::Collision);
            }
        }
    }
    Ok(())
}

/// Samples of simultaneous canonical paths `from_i -> to_i` on a planar
/// model, excluding the first sample.
fn connect(model: &SurfaceModel, from: &[Point], to: &[Point], max_step: f64) -> Result<Vec<Vec<C>>> {
    let paths: Vec<_> = from.iter().zip(to).map(|(a, b)| model.geodesic(*a, *b)).collect::<Result<_>>()?;
    let longest = paths.iter().map(|p| p.length).fold(0.0, f64::max);
    let steps = ((longest / max_step).ceil() as usize).max(1);
    let mut rows: Vec<Vec<C>> = (1..steps).map(|k| paths.iter().map(|p| p.eval(k as f64 / steps as f64)).collect()).collect();
    rows.push(to.iter().map(|p| p.c()).collect());
    Ok(rows)
}

/// A configuration path on a planar model from `z` through `x` along
/// `arc` (whose first row is `x`) and back to `z`, as loop samples.
pub(crate) fn planar_loop(
    model: &SurfaceModel,
    z: &[Point],
    arc_times: &[f64],
    arc: &[Vec<C>],
    max_step: f64,
) -> Result<(Vec<f64>, Vec<Vec<C>>)> {
    let x: Vec<Point> = arc[0].iter().map(|c| Point::from_c(*c)).collect();
    let fx: Vec<Point> = arc.last().unwrap().iter().map(|c| Point::from_c(*c)).collect();
    let inbound = connect(model, z, &x, max_step)?;
    let outbound = connect(model, &fx, z, max_step)?;
    let mut times = vec![0.0];
    let mut samples = vec![z.iter().map(|p| p.c()).collect::<Vec<_>>()];
    let k = inbound.len() as f64;
    for (i, row) in inbound.into_iter().enumerate() {
        times.push((i + 1) as f64 / k / 3.0);
        samples.push(row);
    }
    let span = arc_times.last().copied().unwrap_or(0.0) - arc_times[0];
    for (t, row) in arc_times.iter().zip(arc).skip(1) {
        let s = if span > 0.0 { (t - arc_times[0]) / span } else { 1.0 };
        times.push((1.0 + s) / 3.0);
        samples.push(row.clone());
    }
    let k = outbound.len() as f64;
    for (i, row) in outbound.into_iter().enumerate() {
        times.push((2.0 + (i + 1) as f64 / k) / 3.0);
        samples.push(row);
    }
    for row in &samples {
        check_separated(row)?;
    }
    Ok((times, samples))
}

/// Class of the loop of one strand on a closed model from the lifted end
/// of its isotopy arc.
fn closed_class(model: &SurfaceModel, z: Point, x: Point, end: &LiftedPoint) -> Result<SurfaceLoopWord> {
    match model {
        SurfaceModel::Torus => {
            let s1 = torus_nearest_shift(z, x);
            let fx = end.surface_point(model);
            let unwrapped = end.pos - x.c();
            let s2 = torus_nearest_shift(fx, z);
            // the lifted loop ends at z plus a lattice vector
            let landing = x.c() + C::new(s1.0 as f64, s1.1 as f64) + unwrapped;
            let back = landing + (z.c() + C::new(s2.0 as f64, s2.1 as f64) - fx.c());
            let k = back - z.c();
            let a = SurfaceLoopWord::generator(1, SurfaceGen::alpha(1), k.re.round() as i64)?;
            a.multiply(&SurfaceLoopWord::generator(1, SurfaceGen::beta(1), k.im.round() as i64)?)
        }
        SurfaceModel::Genus2 => {
            let into = model.geodesic(z, x)?.end_deck();
            let fx = Point::from_c(end.pos);
            let out = model.geodesic(fx, z)?.end_deck();
            let codes: Vec<u8> = into.iter().chain(&end.deck).chain(&out).copied().collect();
            let letters: Vec<SurfaceLetter> = Octagon::reduce_word(&codes).into_iter().map(SurfaceLetter::from_code).collect();
            SurfaceLoopWord::new(2, letters)
        }
        _ => Ok(SurfaceLoopWord::empty(0)),
    }
}

/// Build the loops of configuration `x` (basepoints `z`) under `iso`.
pub fn build_loops(iso: &Isotopy, x: &[Point], z: &[Point], opts: &TraceOptions) -> Result<TracedLoop> {
    let model = iso.model();
    if x.len() != z.len() || x.is_empty() {
        return Err(GgError::InvalidInput(format!("{} points but {} basepoints", x.len(), z.len())));
    }
    check_distinct(&model, x)?;
    check_distinct(&model, z)?;
    let starts: Vec<LiftedPoint> = x.iter().map(|p| LiftedPoint::new(*p)).collect();
    if model.is_planar() {
        let (arc_times, arc) = iso.sample_paths(&starts, opts.max_step)?;
        let rows: Vec<Vec<C>> = arc.iter().map(|r| r.iter().map(|p| p.pos).collect()).collect();
        let image = arc.last().unwrap().clone();
        let (times, samples) = planar_loop(&model, z, &arc_times, &rows, opts.max_step)?;
        return Ok(TracedLoop { model, z: z.to_vec(), x: x.to_vec(), image, times, samples, classes: Vec::new() });
    }
    let (image, times, samples) = if opts.keep_samples {
        let (t, arc) = iso.sample_paths(&starts, opts.max_step)?;
        let total = iso.total_time();
        let times = t.iter().map(|s| if total > 0.0 { (1.0 + s / total) / 3.0 } else { 1.0 / 3.0 }).collect();
        let samples = arc.iter().map(|r| r.iter().map(|p| p.cover_position()).collect()).collect();
        (arc.last().unwrap().clone(), times, samples)
    } else {
        let mut image = starts;
        for p in image.iter_mut() {
            iso.advance(p, 0.0, iso.total_time())?;
        }
        (image, Vec::new(), Vec::new())
    };
    let classes = x.iter().zip(z).zip(&image).map(|((x, z), e)| closed_class(&model, *z, *x, e)).collect::<Result<_>>()?;
    Ok(TracedLoop { model, z: z.to_vec(), x: x.to_vec(), image, times, samples, classes })
}

/// One crossing of the projected strands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingEvent {
    pub time: f64,
    /// 1-based position of the left strand before the crossing.
    pub position: u16,
    pub sign: i8,
    pub left: usize,
    pub right: usize,
}

/// Crossings for one projection angle; `None` on a degenerate event.
fn crossings(times: &[f64], samples: &[Vec<C>], angle: f64) -> Option<Vec<CrossingEvent>> {
    let rot = C::from_polar(1.0, -angle);
    let n = samples[0].len();
    let proj = |row: &Vec<C>| row.iter().map(|p| p * rot).collect::<Vec<C>>();
    let first = proj(&samples[0]);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| first[a].re.partial_cmp(&first[b].re).unwrap());
    for w in order.windows(2) {
        if (first[w[1]].re - first[w[0]].re).abs() < 1e-12 {
            return None;
        }
    }
    let mut pos = vec![0usize; n];
    for (k, &s) in order.iter().enumerate() {
        pos[s] = k;
    }
    let mut events = Vec::new();
    let mut prev = first;
    for k in 1..samples.len() {
        let cur = proj(&samples[k]);
        let mut here: Vec<(f64, usize, usize)> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let a = prev[i].re - prev[j].re;
                let b = cur[i].re - cur[j].re;
                if b == 0.0 {
                    return None;
                }
                if a * b < 0.0 {
                    here.push((a / (a - b), i, j));
                }
            }
        }
        here.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
        for w in here.windows(2) {
            if w[1].0 - w[0].0 < 1e-12 {
                return None;
            }
        }
        for (tau, i, j) in here {
            if pos[i].abs_diff(pos[j]) != 1 {
                return None;
            }
            let (l, r) = if pos[i] < pos[j] { (i, j) } else { (j, i) };
            let yl = prev[l].im + (cur[l].im - prev[l].im) * tau;
            let yr = prev[r].im + (cur[r].im - prev[r].im) * tau;
            if (yl - yr).abs() < COINCIDENCE_TOL {
                return None;
            }
            let p = pos[l];
            events.push(CrossingEvent {
                time: times[k - 1] + (times[k] - times[k - 1]) * tau,
                position: p as u16 + 1,
                sign: if yl < yr { 1 } else { -1 },
                left: l,
                right: r,
            });
            pos[l] = p + 1;
            pos[r] = p;
        }
        prev = cur;
    }
    Some(events)
}

/// Crossing events and the braid they spell (planar models).
pub fn extract_braid_events(loops: &TracedLoop, opts: &TraceOptions) -> Result<(BraidWord, Vec<CrossingEvent>)> {
    if !loops.model.is_planar() {
        return Err(GgError::Unsupported(format!("braid extraction needs a planar model, got {}", loops.model.key())));
    }
    let n = loops.z.len() as u16;
    for k in 0..=opts.perturb_budget {
        let angle = opts.projection_angle + 0.0173 * k as f64;
        if let Some(events) = crossings(&loops.times, &loops.samples, angle) {
            let letters: Vec<ArtinLetter> = events.iter().map(|e| ArtinLetter::new(e.position, e.sign)).collect();
            let word = BraidWord::from_artin(n, &free_reduce(&letters))?;
            return Ok((word, events));
        }
    }
    Err(GgError::Degenerate(format!("crossings stayed degenerate over {} projections", opts.perturb_budget + 1)))
}

pub fn extract_braid(loops: &TracedLoop, opts: &TraceOptions) -> Result<BraidWord> {
    Ok(extract_braid_events(loops, opts)?.0)
}

/// Per-strand loop classes (closed models; trivial words on planar ones).
pub fn extract_pi1(loops: &TracedLoop) -> Vec<SurfaceLoopWord> {
    if loops.model.is_planar() {
        vec![SurfaceLoopWord::empty(0); loops.z.len()]
    } else {
        loops.classes.clone()
    }
}

/// Braid (planar) or strand-1 class (closed, one strand) traced by `iso`.
pub fn trace_word(iso: &Isotopy, x: &[Point], z: &[Point], opts: &TraceOptions) -> Result<crate::quasimorphism::Word> {
    let loops = build_loops(iso, x, z, opts)?;
    if iso.model().is_planar() {
        Ok(crate::quasimorphism::Word::Braid(extract_braid(&loops, opts)?))
    } else if x.len() == 1 {
        Ok(crate::quasimorphism::Word::Surface(loops.classes[0].clone()))
    } else {
        Err(GgError::Unsupported("braids of several strands on closed models are not extracted".into()))
    }
}

/// JSON dump of loops and crossing events.
pub fn dump_json(loops: &TracedLoop, opts: &TraceOptions) -> serde_json::Value {
    let mut v = serde_json::json!({
        "model": loops.model.key(),
        "z": loops.z.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
        "x": loops.x.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
        "times": loops.times,
        "samples": loops.samples.iter().map(|r| r.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    if loops.model.is_planar() {
        match extract_braid_events(loops, opts) {
            Ok((w, ev)) => {
                v["braid"] = serde_json::json!(w.to_string());
                v["crossings"] = serde_json::to_value(ev).unwrap_or_default();
            }
            Err(e) => v["error"] = serde_json::json!(e.to_string()),
        }
    } else {
        v["classes"] = serde_json::json!(loops.classes.iter().map(|w| w.to_string()).collect::<Vec<_>>());
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid_words::{parse_braid_word, parse_mixed_word, parse_surface_word};
    use crate::dynamics::{annulus_twist, realize_pure_braid, Chart, Flow, HamiltonianField, Profile};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn full_twists(k: f64) -> Isotopy {
        annulus_twist(SurfaceModel::Disc, Chart::Disc { cx: 0.0, cy: 0.0, radius: 0.8 }, Profile::Plateau { turns: k, inner: 0.0, outer: 0.25 })
            .unwrap()
    }

    /// Winding of the relative vector of two strands, in turns.
    fn winding(loops: &TracedLoop) -> f64 {
        let mut acc = 0.0;
        for w in loops.samples.windows(2) {
            let a = w[0][1] - w[0][0];
            let b = w[1][1] - w[1][0];
            acc += (b / a).arg();
        }
        acc / (2.0 * std::f64::consts::PI)
    }

    #[test]
    fn identity_traces_nothing() {
        let iso = Isotopy::identity(SurfaceModel::Disc);
        let x = [Point::new(0.1, 0.2), Point::new(-0.3, 0.4)];
        let z = default_basepoints(&SurfaceModel::Disc, 2);
        let l = build_loops(&iso, &x, &z, &TraceOptions::default()).unwrap();
        assert_eq!(l.samples.first(), l.samples.last());
        assert!(extract_braid(&l, &TraceOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn full_twists_give_even_powers() {
        let opts = TraceOptions::default();
        let z = default_basepoints(&SurfaceModel::Disc, 2);
        let x = [Point::new(0.2, 0.1), Point::new(-0.1, -0.4)];
        for k in 1..=3 {
            let l = build_loops(&full_twists(k as f64), &x, &z, &opts).unwrap();
            let w = extract_braid(&l, &opts).unwrap();
            assert_eq!(w, parse_braid_word(&format!("s1^{}", 2 * k), 2).unwrap());
            // winding-number oracle: lk = winding of the difference vector
            assert!((winding(&l) - k as f64).abs() < 1e-9);
            let inv = build_loops(&full_twists(k as f64).inverse(), &x, &z, &opts).unwrap();
            assert_eq!(extract_braid(&inv, &opts).unwrap(), w.invert());
        }
    }

    #[test]
    fn half_twist_orientation() {
        // counter-clockwise half twist swapping two points is positive
        let iso = annulus_twist(SurfaceModel::Disc, Chart::Disc { cx: 0.0, cy: 0.0, radius: 0.8 }, Profile::Plateau { turns: 0.5, inner: 0.0, outer: 0.25 })
            .unwrap();
        let x = [Point::new(-0.3, 0.0), Point::new(0.3, 0.0)];
        let (_, samples) = iso.sample_paths(&[LiftedPoint::new(x[0]), LiftedPoint::new(x[1])], 0.02).unwrap();
        let rows: Vec<Vec<C>> = samples.iter().map(|r| r.iter().map(|p| p.pos).collect()).collect();
        let times: Vec<f64> = (0..rows.len()).map(|k| k as f64).collect();
        let ev = crossings(&times, &rows, 0.0).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].sign, 1);
    }

    #[test]
    fn realized_braids_round_trip() {
        let opts = TraceOptions::default();
        for text in ["s1^2", "s1 s2^2 s1^-1", "A1,3 A2,3^-1", "s2^-2 s1^4"] {
            let w = parse_mixed_word(text, 3, 0).unwrap();
            let (iso, pl) = realize_pure_braid(&w, SurfaceModel::Disc).unwrap();
            let x: Vec<Point> = pl.centers.iter().map(|c| Point::from_c(*c)).collect();
            let z = default_basepoints(&SurfaceModel::Disc, 3);
            let l = build_loops(&iso, &x, &z, &opts).unwrap();
            let got = extract_braid(&l, &opts).unwrap();
            let want = w.to_braid().unwrap();
            assert_eq!(crate::braid_words::braid_equal(&got, &want), crate::braid_words::ArtinOutcome::Equal, "{text}: {got}");
            let refined = extract_braid(&build_loops(&iso, &x, &z, &opts.refined()).unwrap(), &opts).unwrap();
            assert_eq!(refined, got);
        }
    }

    #[test]
    fn annulus_model_loops() {
        let m = SurfaceModel::Annulus { r_in: 0.3 };
        let w = parse_mixed_word("s1^2", 2, 0).unwrap();
        let (iso, pl) = realize_pure_braid(&w, m).unwrap();
        let x: Vec<Point> = pl.centers.iter().map(|c| Point::from_c(*c)).collect();
        let l = build_loops(&iso, &x, &default_basepoints(&m, 2), &TraceOptions::default()).unwrap();
        assert_eq!(extract_braid(&l, &TraceOptions::default()).unwrap().to_string(), "s1 s1");
    }

    #[test]
    fn torus_wraps() {
        let m = SurfaceModel::Torus;
        let iso = Isotopy::single(m, Flow::Translation { dx: 1.0, dy: 0.0 }, 1.0).unwrap();
        let z = default_basepoints(&m, 1);
        let l = build_loops(&iso, &[Point::new(0.4, 0.7)], &z, &TraceOptions::default()).unwrap();
        assert_eq!(extract_pi1(&l)[0], parse_surface_word("a1", 1).unwrap());
        let back = build_loops(&iso.inverse(), &[Point::new(0.4, 0.7)], &z, &TraceOptions::default()).unwrap();
        assert_eq!(back.classes[0], parse_surface_word("a1^-1", 1).unwrap());
        let still = build_loops(&Isotopy::identity(m), &[Point::new(0.9, 0.9)], &z, &TraceOptions::default()).unwrap();
        assert!(still.classes[0].is_empty());
        let diag = Isotopy::single(m, Flow::Translation { dx: 0.0, dy: -2.0 }, 1.0).unwrap();
        let l = build_loops(&diag, &[Point::new(0.5, 0.5)], &z, &TraceOptions::default()).unwrap();
        assert_eq!(l.classes[0], parse_surface_word("b1^-2", 1).unwrap());
    }

    #[test]
    fn genus2_collar_twist_classes() {
        let m = SurfaceModel::Genus2;
        let w = parse_mixed_word("a1@1^3", 1, 2).unwrap();
        let (iso, pl) = realize_pure_braid(&w, m).unwrap();
        let z = default_basepoints(&m, 1);
        let l = build_loops(&iso, &[Point::from_c(pl.centers[0])], &z, &TraceOptions::default()).unwrap();
        assert_eq!(l.classes[0], parse_surface_word("a1^3", 2).unwrap());
        let constant = build_loops(&Isotopy::identity(m), &[Point::new(0.3, -0.2)], &z, &TraceOptions::default()).unwrap();
        assert!(constant.classes[0].is_empty());
    }

    #[test]
    fn composition_rule_on_disc() {
        // extract(f g; x) = extract(g; x) extract(f; g(x)) for isotopies fixing the basepoints
        let opts = TraceOptions::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = full_twists(1.0);
        let g = Isotopy::single(
            SurfaceModel::Disc,
            Flow::Hamiltonian(HamiltonianField::from_expr("(0.64 - x^2 - y^2)^2 * max(0.64 - x^2 - y^2, 0) * (1 + x)").unwrap()),
            1.0,
        )
        .unwrap();
        let z = default_basepoints(&SurfaceModel::Disc, 2);
        for _ in 0..3 {
            let x = SurfaceModel::Disc.sample_configuration(2, &mut rng).unwrap();
            let fg = Isotopy::compose(&f, &g).unwrap();
            let whole = extract_braid(&build_loops(&fg, &x, &z, &opts).unwrap(), &opts).unwrap();
            let lg = build_loops(&g, &x, &z, &opts).unwrap();
            let gx: Vec<Point> = lg.image.iter().map(|p| Point::from_c(p.pos)).collect();
            let a = extract_braid(&lg, &opts).unwrap();
            let b = extract_braid(&build_loops(&f, &gx, &z, &opts).unwrap(), &opts).unwrap();
            let prod = a.multiply(&b).unwrap();
            assert_eq!(crate::braid_words::braid_equal(&whole, &prod), crate::braid_words::ArtinOutcome::Equal);
        }
    }

    #[test]
    fn collisions_are_reported() {
        let iso = Isotopy::identity(SurfaceModel::Disc);
        let x = [Point::new(0.1, 0.2), Point::new(0.1, 0.2)];
        let z = default_basepoints(&SurfaceModel::Disc, 2);
        assert!(matches!(build_loops(&iso, &x, &z, &TraceOptions::default()), Err(GgError::Collision)));
    }
}
