//! Hamiltonian and chart-twist isotopies on the model surfaces.
//!
//! An isotopy is a sequence of segments run one after another; each segment
//! is a flow (numerically integrated Hamiltonian field, exact chart twist,
//! or torus translation) run for a duration, possibly backwards. Points are
//! carried in the universal cover so the traced classes can be read off.

pub mod chart;
mod constructions;
pub mod expr;
pub mod spec;

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use serde::Serialize;

pub use chart::{max_collar_half_width, Chart, Profile};
pub use constructions::{
    annulus_twist, collar_separation, figure_eight_pair, realize_pure_braid, word_diffeo, BraidPlacement,
    FigureEightParams, FigureEightSite, RegionInventory,
};
pub use expr::{Expression, GridFunction, ScalarField};

use crate::surface::hyperbolic::Octagon;
use crate::surface::{Point, SurfaceModel};
use crate::{GgError, Result};

/// A point of the universal cover: planar coordinates (disc, annulus),
/// unwrapped coordinates in `R^2` (torus), or a local point of the octagon
/// with the deck element as letter codes (genus 2).
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedPoint {
    pub pos: C,
    pub deck: Vec<u8>,
}

impl LiftedPoint {
    pub fn new(p: Point) -> Self {
        Self { pos: p.c(), deck: Vec::new() }
    }

    /// The point on the surface.
    pub fn surface_point(&self, model: &SurfaceModel) -> Point {
        match model {
            SurfaceModel::Torus => Point::new(self.pos.re.rem_euclid(1.0), self.pos.im.rem_euclid(1.0)),
            _ => Point::from_c(self.pos),
        }
    }

    /// Position in the cover (genus 2: the deck image of the local point).
    pub fn cover_position(&self) -> C {
        if self.deck.is_empty() {
            self.pos
        } else {
            Octagon::get().word_map(&self.deck).apply(self.pos)
        }
    }
}

/// A Hamiltonian function on a model, with the conventions
/// `X_H = (dH/dy, -dH/dx) / density` for area density `density` of the
/// chart coordinates (1 for the flat models, `4/(1-|w|^2)^2` in the
/// Poincaré disc).
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianField {
    pub field: ScalarField,
    time_dependent: bool,
}

impl HamiltonianField {
    pub fn new(field: ScalarField) -> Self {
        let time_dependent = field.depends_on_time();
        Self { field, time_dependent }
    }

    pub fn from_expr(src: &str) -> Result<Self> {
        Ok(Self::new(ScalarField::Expr(Expression::parse(src)?)))
    }

    pub fn is_time_dependent(&self) -> bool {
        self.time_dependent
    }

    pub fn value(&self, p: C, t: f64) -> f64 {
        self.field.value(p.re, p.im, t)
    }

    pub fn velocity(&self, model: &SurfaceModel, p: C, t: f64) -> C {
        let (hx, hy) = self.field.gradient(p.re, p.im, t);
        let v = C::new(hy, -hx);
        match model {
            SurfaceModel::Genus2 => {
                let f = 1.0 - p.norm_sqr();
                v * (f * f / 4.0)
            }
            _ => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Flow {
    Identity,
    Hamiltonian(HamiltonianField),
    Twist { chart: Chart, profile: Profile },
    /// Torus translation by `(dx, dy)` per unit time (symplectic, not
    /// Hamiltonian).
    Translation { dx: f64, dy: f64 },
}

impl Flow {
    fn describe(&self) -> String {
        match self {
            Flow::Identity => "identity".into(),
            Flow::Hamiltonian(h) => format!("hamiltonian {}", h.field.describe()),
            Flow::Twist { chart, profile } => format!("twist {chart:?} {profile:?}"),
            Flow::Translation { dx, dy } => format!("translation ({dx}, {dy})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub flow: Flow,
    pub duration: f64,
    /// Run the segment backwards (used for inverses).
    pub reversed: bool,
}

impl Segment {
    pub fn new(flow: Flow, duration: f64) -> Self {
        Self { flow, duration, reversed: false }
    }
}

/// Integrator controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepControl {
    /// Local error tolerance per step (step doubling).
    pub tol: f64,
    pub max_step: f64,
    pub min_step: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { tol: 1e-11, max_step: 0.02, min_step: 1e-12 }
    }
}

/// A time-dependent area-preserving flow `f_t`, `t in [0, total_time]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Isotopy {
    model: SurfaceModel,
    segments: Vec<Segment>,
    pub label: String,
    pub control: StepControl,
}

impl Isotopy {
    pub fn new(model: SurfaceModel, segments: Vec<Segment>) -> Result<Self> {
        for s in &segments {
            if !(s.duration.is_finite() && s.duration >= 0.0) {
                return Err(GgError::InvalidInput(format!("segment duration {} must be finite and >= 0", s.duration)));
            }
            match &s.flow {
                Flow::Twist { chart, profile } => {
                    chart.validate(&model)?;
                    profile.validate(chart.u_max())?;
                }
                Flow::Translation { dx, dy } => {
                    if model != SurfaceModel::Torus {
                        return Err(GgError::NoChart("translations exist only on the torus".into()));
                    }
                    if !(dx.is_finite() && dy.is_finite()) {
                        return Err(GgError::InvalidInput("translation must be finite".into()));
                    }
                }
                _ => {}
            }
        }
        let label = segments.iter().map(|s| s.flow.describe()).collect::<Vec<_>>().join(" ; ");
        Ok(Self { model, segments, label, control: StepControl::default() })
    }

    pub fn identity(model: SurfaceModel) -> Self {
        Self { model, segments: Vec::new(), label: "identity".into(), control: StepControl::default() }
    }

    pub fn single(model: SurfaceModel, flow: Flow, duration: f64) -> Result<Self> {
        Self::new(model, vec![Segment::new(flow, duration)])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn model(&self) -> SurfaceModel {
        self.model
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_time(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.segments.iter().all(|s| matches!(s.flow, Flow::Identity) || s.duration == 0.0)
    }

    /// Autonomous: one time-independent flow throughout.
    pub fn is_autonomous(&self) -> bool {
        let active: Vec<&Segment> = self.segments.iter().filter(|s| s.duration > 0.0).collect();
        let Some(first) = active.first() else {
            return true;
        };
        let time_indep = match &first.flow {
            Flow::Hamiltonian(h) => !h.is_time_dependent(),
            _ => true,
        };
        time_indep && active.iter().all(|s| s.flow == first.flow && s.reversed == first.reversed)
    }

    /// Run `self` then `other` (the time-one map is `other ∘ self`).
    pub fn then(&self, other: &Isotopy) -> Result<Isotopy> {
        if self.model != other.model {
            return Err(GgError::DomainMismatch("isotopies on different models".into()));
        }
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        Ok(Isotopy {
            model: self.model,
            segments,
            label: format!("({}) then ({})", self.label, other.label),
            control: self.control,
        })
    }

    /// The isotopy of `f ∘ g`: run `g`, then `f`.
    pub fn compose(f: &Isotopy, g: &Isotopy) -> Result<Isotopy> {
        g.then(f)
    }

    /// `t -> f_{T-t} ∘ f_T^{-1}`, an isotopy to the inverse map.
    pub fn inverse(&self) -> Isotopy {
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| Segment { flow: s.flow.clone(), duration: s.duration, reversed: !s.reversed })
            .collect();
        Isotopy { model: self.model, segments, label: format!("inverse({})", self.label), control: self.control }
    }

    /// `f^p` by repeating the segments (`p < 0` uses the inverse).
    pub fn power(&self, p: i64) -> Isotopy {
        let base = if p < 0 { self.inverse() } else { self.clone() };
        let mut segments = Vec::with_capacity(base.segments.len() * p.unsigned_abs() as usize);
        for _ in 0..p.unsigned_abs() {
            segments.extend(base.segments.iter().cloned());
        }
        Isotopy { model: self.model, segments, label: format!("({})^{p}", self.label), control: self.control }
    }

    /// `g f g^-1`: run `g^-1`, `f`, `g`.
    pub fn conjugate(g: &Isotopy, f: &Isotopy) -> Result<Isotopy> {
        g.inverse().then(f)?.then(g)
    }

    /// Move a lifted point from time `t0` to `t1` (`0 <= t0 <= t1 <= T`).
    pub fn advance(&self, p: &mut LiftedPoint, t0: f64, t1: f64) -> Result<()> {
        let mut start = 0.0;
        for seg in &self.segments {
            let end = start + seg.duration;
            let a = t0.max(start);
            let b = t1.min(end);
            if b > a {
                self.advance_segment(seg, p, a - start, b - start)?;
            }
            start = end;
            if start >= t1 {
                break;
            }
        }
        Ok(())
    }

    /// `f_t(x)` on the surface.
    pub fn flow(&self, x: Point, t: f64) -> Result<Point> {
        self.model.validate(x)?;
        let t = t.clamp(0.0, self.total_time());
        let mut p = LiftedPoint::new(x);
        self.advance(&mut p, 0.0, t)?;
        Ok(p.surface_point(&self.model))
    }

    /// The time-one map (end of the isotopy), carried in the cover.
    pub fn time_one_lifted(&self, x: Point) -> Result<LiftedPoint> {
        self.model.validate(x)?;
        let mut p = LiftedPoint::new(x);
        self.advance(&mut p, 0.0, self.total_time())?;
        Ok(p)
    }

    pub fn time_one(&self, x: Point) -> Result<Point> {
        Ok(self.time_one_lifted(x)?.surface_point(&self.model))
    }

    /// Advance within one segment from local time `a` to `b`.
    fn advance_segment(&self, seg: &Segment, p: &mut LiftedPoint, a: f64, b: f64) -> Result<()> {
        let dt = if seg.reversed { -(b - a) } else { b - a };
        match &seg.flow {
            Flow::Identity => Ok(()),
            Flow::Translation { dx, dy } => {
                p.pos += C::new(*dx, *dy) * dt;
                Ok(())
            }
            Flow::Twist { chart, profile } => {
                if let Some(cp) = chart.coords(p.pos) {
                    let dtheta = 2.0 * PI * profile.speed(cp.u, chart.u_max()) * dt;
                    if dtheta != 0.0 {
                        let (pos, deck) = chart.rotate(p.pos, &cp, dtheta);
                        p.pos = pos;
                        p.deck.extend(deck);
                    }
                }
                Ok(())
            }
            Flow::Hamiltonian(h) => {
                let d = seg.duration;
                let rev = seg.reversed;
                // reversed segments follow -X(x, D - s)
                let vel = |x: C, s: f64| {
                    if rev {
                        -h.velocity(&self.model, x, d - s)
                    } else {
                        h.velocity(&self.model, x, s)
                    }
                };
                p.pos = integrate(&vel, p.pos, a, b, &self.control)?;
                self.check_inside(p.pos)
            }
        }
    }

    fn check_inside(&self, w: C) -> Result<()> {
        match self.model {
            SurfaceModel::Torus => Ok(()),
            SurfaceModel::Genus2 => {
                if Octagon::get().contains(w) {
                    Ok(())
                } else {
                    Err(GgError::Support("Hamiltonian flow on genus 2 must stay inside the octagon".into()))
                }
            }
            m => m.validate(Point::from_c(w)),
        }
    }

    /// Bound on the Euclidean speed of points within a segment.
    fn speed_bound(&self, seg: &Segment) -> Option<f64> {
        match &seg.flow {
            Flow::Identity => Some(0.0),
            Flow::Translation { dx, dy } => Some(dx.hypot(*dy)),
            Flow::Twist { chart, profile } => Some(2.0 * PI * profile.max_speed(chart.u_max()) * chart.speed_scale()),
            Flow::Hamiltonian(_) => None,
        }
    }

    /// Positions of several points sampled on a common time grid so that no
    /// point moves more than `max_disp` between samples. Returns the times
    /// and, per time, the lifted positions.
    pub fn sample_paths(&self, starts: &[LiftedPoint], max_disp: f64) -> Result<(Vec<f64>, Vec<Vec<LiftedPoint>>)> {
        let mut times = vec![0.0];
        let mut cur: Vec<LiftedPoint> = starts.to_vec();
        let mut out = vec![cur.clone()];
        let mut seg_start = 0.0;
        for seg in &self.segments {
            let d = seg.duration;
            if d == 0.0 || matches!(seg.flow, Flow::Identity) {
                seg_start += d;
                continue;
            }
            match self.speed_bound(seg) {
                Some(v) => {
                    let steps = if v == 0.0 { 1 } else { ((v * d / max_disp).ceil() as usize).max(1) };
                    for k in 1..=steps {
                        let (a, b) = (d * (k - 1) as f64 / steps as f64, d * k as f64 / steps as f64);
                        for p in cur.iter_mut() {
                            self.advance_segment(seg, p, a, b)?;
                        }
                        times.push(seg_start + b);
                        out.push(cur.clone());
                    }
                }
                None => {
                    let mut t = 0.0;
                    let mut h = (d / 16.0).min(0.05);
                    while t < d {
                        let step = h.min(d - t);
                        let mut trial = cur.clone();
                        for p in trial.iter_mut() {
                            self.advance_segment(seg, p, t, t + step)?;
                        }
                        let moved = trial.iter().zip(&cur).map(|(a, b)| (a.pos - b.pos).norm()).fold(0.0, f64::max);
                        if moved > max_disp {
                            h = step / 2.0;
                            if h < self.control.min_step {
                                return Err(GgError::StepUnderflow { t: seg_start + t, step: h });
                            }
                            continue;
                        }
                        t += step;
                        cur = trial;
                        times.push(seg_start + t);
                        out.push(cur.clone());
                        if moved < max_disp / 2.0 {
                            h = step * 1.5;
                        }
                    }
                }
            }
            seg_start += d;
        }
        Ok((times, out))
    }

    /// Sum over segments of duration times the oscillation of the
    /// Hamiltonian: an upper bound for the Hofer norm of the time-one map.
    pub fn hofer_oscillation(&self) -> Result<f64> {
        let mut total = 0.0;
        for seg in &self.segments {
            if seg.duration == 0.0 {
                continue;
            }
            let osc = match &seg.flow {
                Flow::Identity => 0.0,
                Flow::Translation { .. } => {
                    return Err(GgError::NotHamiltonian("torus translation has nonzero flux".into()));
                }
                Flow::Twist { chart, profile } => twist_oscillation(chart, profile)?,
                Flow::Hamiltonian(h) => field_oscillation(&self.model, h, seg.duration),
            };
            total += seg.duration * osc;
        }
        Ok(total)
    }
}

/// Oscillation of a chart twist's Hamiltonian, including the value it takes
/// outside the chart.
pub fn twist_oscillation(chart: &Chart, profile: &Profile) -> Result<f64> {
    let um = chart.u_max();
    if chart.is_non_separating() && profile.flux(um).abs() > 1e-12 {
        return Err(GgError::NotHamiltonian(format!(
            "twist on a non-separating chart carries flux {}",
            profile.flux(um)
        )));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let n = 4096;
    for k in 0..=n {
        let v = profile.hamiltonian(um * k as f64 / n as f64, um);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    for v in chart.outside_values(profile) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok(hi - lo)
}

/// Grid estimate of the time-averaged oscillation of a numeric field.
fn field_oscillation(model: &SurfaceModel, h: &HamiltonianField, duration: f64) -> f64 {
    let grid = oscillation_grid(model);
    let times: Vec<f64> = if h.is_time_dependent() { (0..=16).map(|k| duration * k as f64 / 16.0).collect() } else { vec![0.0] };
    let oscs: Vec<f64> = times
        .iter()
        .map(|&t| {
            let (lo, hi) = grid.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                let v = h.value(*p, t);
                (lo.min(v), hi.max(v))
            });
            hi - lo
        })
        .collect();
    if oscs.len() == 1 {
        oscs[0]
    } else {
        // trapezoid average over the segment
        let n = oscs.len() - 1;
        (oscs[0] / 2.0 + oscs[1..n].iter().sum::<f64>() + oscs[n] / 2.0) / n as f64
    }
}

fn oscillation_grid(model: &SurfaceModel) -> Vec<C> {
    let n = 201;
    let mut pts = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let (x, y) = (i as f64 / (n - 1) as f64, j as f64 / (n - 1) as f64);
            let p = match model {
                SurfaceModel::Torus => C::new(x, y),
                _ => C::new(2.0 * x - 1.0, 2.0 * y - 1.0),
            };
            let keep = match model {
                SurfaceModel::Torus => true,
                SurfaceModel::Genus2 => Octagon::get().contains(p),
                m => m.contains(Point::from_c(p)) || p.norm() <= 1.0,
            };
            if keep {
                pts.push(p);
            }
        }
    }
    pts
}

/// Adaptive RK4 with step doubling from `t0` to `t1`.
fn integrate<F: Fn(C, f64) -> C>(vel: &F, mut x: C, t0: f64, t1: f64, ctl: &StepControl) -> Result<C> {
    let rk4 = |x: C, t: f64, h: f64| {
        let k1 = vel(x, t);
        let k2 = vel(x + k1 * (h / 2.0), t + h / 2.0);
        let k3 = vel(x + k2 * (h / 2.0), t + h / 2.0);
        let k4 = vel(x + k3 * h, t + h);
        x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
    };
    let mut t = t0;
    let mut h = ctl.max_step.min(t1 - t0);
    while t < t1 {
        let step = h.min(t1 - t);
        let full = rk4(x, t, step);
        let half = rk4(rk4(x, t, step / 2.0), t + step / 2.0, step / 2.0);
        let err = (full - half).norm();
        if !err.is_finite() {
            return Err(GgError::InvalidInput(format!("Hamiltonian field not finite near ({}, {})", x.re, x.im)));
        }
        if err > ctl.tol && step > ctl.min_step {
            h = step / 2.0;
            if h < ctl.min_step {
                return Err(GgError::StepUnderflow { t, step: h });
            }
            continue;
        }
        x = half + (half - full) / 15.0;
        t += step;
        if err < ctl.tol / 32.0 {
            h = (step * 2.0).min(ctl.max_step);
        }
    }
    Ok(x)
}
