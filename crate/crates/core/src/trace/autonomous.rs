//! Regularity of configurations under autonomous flows and the splitting of
//! their braids into per-strand orbit blocks.

use num_complex::Complex64 as C;
use serde::Serialize;

use super::{crossings, planar_loop, TraceOptions, TracedLoop};
use crate::braid_words::{braid_equal, free_reduce, ArtinLetter, ArtinOutcome, BraidWord};
use crate::dynamics::{Flow, Isotopy, LiftedPoint, Segment};
use crate::surface::{Point, SurfaceModel};
use crate::{GgError, Result};

/// Gradient norm below which a point counts as critical.
const CRITICAL_GRAD: f64 = 1e-6;
/// Gradient norm along an orbit below which its level is treated as
/// critical.
const CRITICAL_LEVEL_GRAD: f64 = 1e-4;
const ORBIT_STEP: f64 = 0.005;
const ORBIT_MAX_STEPS: usize = 40_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointFlag {
    Regular,
    /// The level component through the point contains a critical point (or
    /// the orbit does not close within the budget).
    CriticalLevel,
    CriticalPoint,
    /// Flow without closed orbits (translations).
    Uncertain,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    pub flags: Vec<PointFlag>,
    /// Orbit periods of regular points.
    pub periods: Vec<Option<f64>>,
    pub levels: Vec<f64>,
    /// `disjoint[i][j]`: the level components through `x_i` and `x_j` differ.
    pub disjoint: Vec<Vec<bool>>,
}

impl RegularityReport {
    /// Every point is regular or fixed and all level components differ.
    pub fn is_generic(&self) -> bool {
        self.flags.iter().all(|f| matches!(f, PointFlag::Regular | PointFlag::CriticalPoint))
            && self.disjoint.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &d)| i == j || d))
    }
}

/// The generating flow of an autonomous isotopy and its direction.
fn generator(iso: &Isotopy) -> Result<Option<(Flow, bool)>> {
    if !iso.is_autonomous() {
        return Err(GgError::InvalidInput(format!("`{}` is not autonomous", iso.label)));
    }
    Ok(iso.segments().iter().find(|s| s.duration > 0.0).map(|s| (s.flow.clone(), s.reversed)))
}

fn stepper(model: SurfaceModel, flow: &Flow, reversed: bool, dt: f64) -> Result<Isotopy> {
    Isotopy::new(model, vec![Segment { flow: flow.clone(), duration: dt, reversed }])
}

struct Orbit {
    period: Option<f64>,
    min_grad: f64,
    path: Vec<Point>,
}

fn trace_orbit(model: SurfaceModel, flow: &Flow, reversed: bool, x: Point) -> Result<Orbit> {
    let Flow::Hamiltonian(h) = flow else {
        unreachable!("numeric orbits only for Hamiltonian fields")
    };
    let grad = |p: C| {
        let (gx, gy) = h.field.gradient(p.re, p.im, 0.0);
        gx.hypot(gy)
    };
    let speed = h.velocity(&model, x.c(), 0.0).norm();
    let dt = ORBIT_STEP / speed.max(1e-3);
    let step = stepper(model, flow, reversed, dt)?;
    let mut p = LiftedPoint::new(x);
    let mut path = vec![x];
    let mut min_grad = grad(x.c());
    let mut far = 0.0f64;
    let mut prev_d = 0.0;
    for k in 1..=ORBIT_MAX_STEPS {
        step.advance(&mut p, 0.0, dt)?;
        let q = p.surface_point(&model);
        min_grad = min_grad.min(grad(p.pos));
        path.push(q);
        let d = model.distance(q, x);
        far = far.max(d);
        if far > 4.0 * ORBIT_STEP && d < 2.0 * ORBIT_STEP && d > prev_d {
            // the closest approach lies within the previous two steps
            let start = if k >= 2 { path[k - 2] } else { x };
            let t0 = (k as f64 - 2.0).max(0.0) * dt;
            let (mut a, mut b) = (0.0, 2.0 * dt);
            let dist_at = |s: f64| -> Result<f64> {
                let mut r = LiftedPoint::new(start);
                stepper(model, flow, reversed, s.max(1e-300))?.advance(&mut r, 0.0, s)?;
                Ok(model.distance(r.surface_point(&model), x))
            };
            let g = (5f64.sqrt() - 1.0) / 2.0;
            for _ in 0..60 {
                let c = b - g * (b - a);
                let e = a + g * (b - a);
                if dist_at(c)? < dist_at(e)? {
                    b = e;
                } else {
                    a = c;
                }
            }
            let s = (a + b) / 2.0;
            if dist_at(s)? < 1e-6 {
                return Ok(Orbit { period: Some(t0 + s), min_grad, path });
            }
        }
        prev_d = d;
    }
    Ok(Orbit { period: None, min_grad, path })
}

/// Period of the closed orbit through `x` of an autonomous isotopy's flow
/// (`None` for fixed points and non-closing orbits).
pub fn orbit_period(iso: &Isotopy, x: Point) -> Result<Option<f64>> {
    let Some((flow, reversed)) = generator(iso)? else {
        return Ok(None);
    };
    match &flow {
        Flow::Identity | Flow::Translation { .. } => Ok(None),
        Flow::Twist { chart, profile } => Ok(chart.coords(x.c()).and_then(|cp| {
            let v = profile.speed(cp.u, chart.u_max());
            (v.abs() > 1e-12).then(|| 1.0 / v.abs())
        })),
        Flow::Hamiltonian(h) => {
            let (gx, gy) = h.field.gradient(x.x, x.y, 0.0);
            if gx.hypot(gy) < CRITICAL_GRAD {
                return Ok(None);
            }
            Ok(trace_orbit(iso.model(), &flow, reversed, x)?.period)
        }
    }
}

fn near_path(path: &[Point], y: Point, model: &SurfaceModel, tol: f64) -> bool {
    path.iter().any(|p| model.distance(*p, y) < tol)
}

/// Regular / critical flags and level-component disjointness for a
/// configuration under an autonomous isotopy.
pub fn classify_regularity(iso: &Isotopy, x: &[Point]) -> Result<RegularityReport> {
    let model = iso.model();
    let n = x.len();
    let mut flags = Vec::with_capacity(n);
    let mut periods = Vec::with_capacity(n);
    let mut levels = Vec::with_capacity(n);
    let mut paths: Vec<Vec<Point>> = Vec::with_capacity(n);
    let gen = generator(iso)?;
    for &p in x {
        model.validate(p)?;
        let (flag, period, level, path) = match &gen {
            None | Some((Flow::Identity, _)) => (PointFlag::CriticalPoint, None, 0.0, vec![p]),
            Some((Flow::Translation { .. }, _)) => (PointFlag::Uncertain, None, 0.0, vec![p]),
            Some((Flow::Twist { chart, profile }, _)) => match chart.coords(p.c()) {
                None => (PointFlag::CriticalPoint, None, f64::NAN, vec![p]),
                Some(cp) => {
                    let v = profile.speed(cp.u, chart.u_max());
                    if v.abs() <= 1e-12 {
                        (PointFlag::CriticalPoint, None, cp.u, vec![p])
                    } else {
                        (PointFlag::Regular, Some(1.0 / v.abs()), cp.u, vec![p])
                    }
                }
            },
            Some((flow @ Flow::Hamiltonian(h), rev)) => {
                let level = h.value(p.c(), 0.0);
                let (gx, gy) = h.field.gradient(p.x, p.y, 0.0);
                if gx.hypot(gy) < CRITICAL_GRAD {
                    (PointFlag::CriticalPoint, None, level, vec![p])
                } else {
                    let orbit = trace_orbit(model, flow, *rev, p)?;
                    let flag = if orbit.period.is_none() || orbit.min_grad < CRITICAL_LEVEL_GRAD {
                        PointFlag::CriticalLevel
                    } else {
                        PointFlag::Regular
                    };
                    (flag, orbit.period, level, orbit.path)
                }
            }
        };
        flags.push(flag);
        periods.push(period);
        levels.push(level);
        paths.push(path);
    }
    let mut disjoint = vec![vec![true; n]; n];
    for i in 0..n {
        disjoint[i][i] = false;
        for j in 0..i {
            let same = match &gen {
                Some((Flow::Twist { .. }, _)) => {
                    // level circles of a chart are connected
                    !levels[i].is_nan() && !levels[j].is_nan() && (levels[i] - levels[j]).abs() < 1e-9
                }
                Some((Flow::Hamiltonian(_), _)) => {
                    (levels[i] - levels[j]).abs() < 1e-7
                        && (flags[i] != PointFlag::Regular
                            || flags[j] != PointFlag::Regular
                            || near_path(&paths[i], x[j], &model, 2.0 * ORBIT_STEP))
                }
                _ => flags[i] == PointFlag::Uncertain,
            };
            disjoint[i][j] = !same;
            disjoint[j][i] = !same;
        }
    }
    Ok(RegularityReport { flags, periods, levels, disjoint })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Commutation {
    Holds,
    Fails,
    /// The comparison outgrew its size budget.
    Undecided,
}

impl From<ArtinOutcome> for Commutation {
    fn from(o: ArtinOutcome) -> Self {
        match o {
            ArtinOutcome::Equal => Commutation::Holds,
            ArtinOutcome::Different => Commutation::Fails,
            ArtinOutcome::Undecided => Commutation::Undecided,
        }
    }
}

/// `traced = prefix * blocks[0]^k_0 * ... * blocks[n-1]^k_{n-1} * suffix`.
#[derive(Debug, Clone, Serialize)]
pub struct AutonomousDecomposition {
    pub prefix: String,
    pub blocks: Vec<String>,
    pub exponents: Vec<i64>,
    pub suffix: String,
    pub periods: Vec<Option<f64>>,
    /// Whether the product reassembles to the traced braid.
    pub reassembly: Commutation,
    /// `(i, j, verdict)` for each pair of blocks.
    pub commutation: Vec<(usize, usize, Commutation)>,
    #[serde(skip)]
    pub words: Vec<BraidWord>,
}

/// Braid of a scripted motion: strands move one at a time along the flow
/// for the given durations, then return to the basepoints.
fn scripted_braid(
    model: SurfaceModel,
    flow: &Flow,
    reversed: bool,
    z: &[Point],
    x: &[Point],
    script: &[(usize, f64)],
    opts: &TraceOptions,
) -> Result<BraidWord> {
    let mut current: Vec<C> = x.iter().map(|p| p.c()).collect();
    let mut times = vec![0.0];
    let mut rows = vec![current.clone()];
    let mut clock = 0.0;
    for &(i, tau) in script {
        if tau <= 0.0 {
            continue;
        }
        let iso = stepper(model, flow, reversed, tau)?;
        let (ts, arc) = iso.sample_paths(&[LiftedPoint::new(Point::from_c(current[i]))], opts.max_step)?;
        for (t, r) in ts.iter().zip(&arc).skip(1) {
            current[i] = r[0].pos;
            times.push(clock + t);
            rows.push(current.clone());
        }
        clock += tau;
    }
    let (lt, ls) = planar_loop(&model, z, &times, &rows, opts.max_step)?;
    for k in 0..=opts.perturb_budget {
        if let Some(ev) = crossings(&lt, &ls, opts.projection_angle + 0.0173 * k as f64) {
            let letters: Vec<ArtinLetter> = ev.iter().map(|e| ArtinLetter::new(e.position, e.sign)).collect();
            return BraidWord::from_artin(z.len() as u16, &free_reduce(&letters));
        }
    }
    Err(GgError::Degenerate("scripted motion has degenerate crossings".into()))
}

/// Split the braid traced by an autonomous isotopy into per-strand orbit
/// blocks and a bounded remainder, and check that blocks commute.
pub fn autonomous_decompose(
    iso: &Isotopy,
    loops: &TracedLoop,
    report: &RegularityReport,
    opts: &TraceOptions,
) -> Result<AutonomousDecomposition> {
    let model = iso.model();
    if !model.is_planar() {
        return Err(GgError::Unsupported("orbit blocks are computed on planar models".into()));
    }
    if !report.is_generic() {
        return Err(GgError::Degenerate("configuration is not regular with disjoint level components".into()));
    }
    let traced = super::extract_braid(loops, opts)?;
    let n = loops.x.len();
    let Some((flow, reversed)) = generator(iso)? else {
        let id = BraidWord::identity(n as u16);
        return Ok(AutonomousDecomposition {
            prefix: String::new(),
            blocks: vec![String::new(); n],
            exponents: vec![0; n],
            suffix: String::new(),
            periods: vec![None; n],
            reassembly: braid_equal(&traced, &id).into(),
            commutation: Vec::new(),
            words: vec![id; n],
        });
    };
    let total = iso.total_time();
    let mut blocks = Vec::with_capacity(n);
    let mut exponents = Vec::with_capacity(n);
    let mut leftover = Vec::with_capacity(n);
    for i in 0..n {
        match report.periods[i] {
            Some(p) if report.flags[i] == PointFlag::Regular => {
                let k = (total / p).floor();
                blocks.push(scripted_braid(model, &flow, reversed, &loops.z, &loops.x, &[(i, p)], opts)?);
                exponents.push(k as i64);
                leftover.push((i, total - k * p));
            }
            _ => {
                blocks.push(BraidWord::identity(n as u16));
                exponents.push(0);
            }
        }
    }
    let suffix = scripted_braid(model, &flow, reversed, &loops.z, &loops.x, &leftover, opts)?;
    let mut product = BraidWord::identity(n as u16);
    for (b, &k) in blocks.iter().zip(&exponents) {
        product = product.multiply(&b.power(k))?;
    }
    product = product.multiply(&suffix)?;
    let mut commutation = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let ab = blocks[i].multiply(&blocks[j])?;
            let ba = blocks[j].multiply(&blocks[i])?;
            commutation.push((i, j, braid_equal(&ab, &ba).into()));
        }
    }
    Ok(AutonomousDecomposition {
        prefix: String::new(),
        blocks: blocks.iter().map(|b| b.to_string()).collect(),
        exponents,
        suffix: suffix.to_string(),
        periods: report.periods.clone(),
        reassembly: braid_equal(&traced, &product).into(),
        commutation,
        words: blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{build_loops, default_basepoints, extract_braid};
    use super::*;
    use crate::dynamics::{annulus_twist, Chart, HamiltonianField, Profile};

    fn radial() -> Isotopy {
        // speed decreasing in u: nested circles turn at different rates
        let chart = Chart::Disc { cx: 0.0, cy: 0.0, radius: 0.85 };
        annulus_twist(SurfaceModel::Disc, chart, Profile::Power { amplitude: 1.5, exponent: 2.0 }).unwrap()
    }

    #[test]
    fn nested_circles_split_into_commuting_blocks() {
        let opts = TraceOptions::default();
        let iso = radial().power(3);
        let x = [Point::new(0.15, 0.05), Point::new(-0.5, 0.2)];
        let report = classify_regularity(&iso, &x).unwrap();
        assert!(report.is_generic(), "{report:?}");
        let z = default_basepoints(&SurfaceModel::Disc, 2);
        let loops = build_loops(&iso, &x, &z, &opts).unwrap();
        let dec = autonomous_decompose(&iso, &loops, &report, &opts).unwrap();
        assert_eq!(dec.reassembly, Commutation::Holds);
        assert!(dec.commutation.iter().all(|c| c.2 == Commutation::Holds));
        assert!(dec.exponents[0] >= 1);
        // the inner strand's orbit does not enclose the outer one
        assert!(dec.words[0].is_empty());
        assert_eq!(dec.words[1].to_string(), "s1 s1");
    }

    #[test]
    fn single_strand_is_trivial() {
        let opts = TraceOptions::default();
        let iso = radial();
        let x = [Point::new(0.3, 0.1)];
        let report = classify_regularity(&iso, &x).unwrap();
        let loops = build_loops(&iso, &x, &default_basepoints(&SurfaceModel::Disc, 1), &opts).unwrap();
        let dec = autonomous_decompose(&iso, &loops, &report, &opts).unwrap();
        assert_eq!(dec.reassembly, Commutation::Holds);
        assert!(extract_braid(&loops, &opts).unwrap().is_empty());
    }

    #[test]
    fn critical_points_are_flagged() {
        let h = HamiltonianField::from_expr("(1 - x^2 - y^2)^2 * (x^2 + 2*y^2)").unwrap();
        let iso = Isotopy::single(SurfaceModel::Disc, Flow::Hamiltonian(h), 1.0).unwrap();
        let report = classify_regularity(&iso, &[Point::new(0.0, 0.0), Point::new(0.3, 0.0)]).unwrap();
        assert_eq!(report.flags[0], PointFlag::CriticalPoint);
        assert_eq!(report.flags[1], PointFlag::Regular);
        assert!(report.periods[1].unwrap() > 0.0);
        // same level on the same component
        let r2 = classify_regularity(&iso, &[Point::new(0.3, 0.0), Point::new(-0.3, 0.0)]).unwrap();
        assert!(!r2.disjoint[0][1]);
    }

    #[test]
    fn numeric_period_matches_rotation() {
        let h = HamiltonianField::from_expr("(1 - x^2 - y^2)/2").unwrap();
        let iso = Isotopy::single(SurfaceModel::Disc, Flow::Hamiltonian(h), 1.0).unwrap();
        let p = orbit_period(&iso, Point::new(0.4, 0.1)).unwrap().unwrap();
        assert!((p - 2.0 * std::f64::consts::PI).abs() < 1e-6, "{p}");
    }

    #[test]
    fn morse_torus_levels() {
        let h = HamiltonianField::from_expr("cos(2*pi*x) + 0.5*cos(2*pi*y)").unwrap();
        let iso = Isotopy::single(SurfaceModel::Torus, Flow::Hamiltonian(h), 1.0).unwrap();
        let report = classify_regularity(&iso, &[Point::new(0.1, 0.2), Point::new(0.45, 0.1)]).unwrap();
        assert_eq!(report.flags, vec![PointFlag::Regular, PointFlag::Regular]);
        assert!(report.disjoint[0][1]);
        let crit = classify_regularity(&iso, &[Point::new(0.5, 0.5)]).unwrap();
        assert_eq!(crit.flags[0], PointFlag::CriticalPoint);
    }
}
