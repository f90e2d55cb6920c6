//! Monte Carlo averages of quasi-morphisms over traced configurations.
//!
//! For an isotopy `f` and a quasi-morphism `phi` on the braid group (planar
//! models) or the surface group (closed models, one strand), the estimate
//! is `vol^n * E[phi(gamma(f; x))]` over area-uniform configurations `x`.
//! Sample `k` draws from the ChaCha8 stream `k` of the master seed and
//! values are reduced in index order, so results do not depend on the
//! number of workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::braid_words::SurfaceGen;
use crate::dynamics::Isotopy;
use crate::numeric::mean_std;
use crate::quasimorphism::{QuasiMorphism, Word};
use crate::surface::{Point, SurfaceModel, RETRY_BUDGET};
use crate::trace::{build_loops, default_basepoints, extract_braid, TraceOptions};
use crate::{GgError, Result};

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "GGQM_WORKERS";

/// Default power schedule for homogenized estimates.
pub const DEFAULT_POWERS: [u32; 5] = [1, 2, 4, 8, 16];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorOptions {
    pub trace: TraceOptions,
    /// Basepoint configuration; `None` uses the model default.
    pub basepoints: Option<Vec<Point>>,
    /// Worker threads; `None` reads `GGQM_WORKERS`, else rayon's default.
    pub workers: Option<usize>,
    /// Largest accepted fraction of rejected configurations.
    pub max_reject_rate: f64,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self { trace: TraceOptions::default(), basepoints: None, workers: None, max_reject_rate: 0.05 }
    }
}

impl EstimatorOptions {
    fn basepoints(&self, model: &SurfaceModel, n: usize) -> Vec<Point> {
        self.basepoints.clone().unwrap_or_else(|| default_basepoints(model, n))
    }

    fn workers(&self) -> Option<usize> {
        self.workers.or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok())).filter(|&w| w > 0)
    }
}

/// Per-power estimates of a homogenized run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSeries {
    pub powers: Vec<u32>,
    /// `Phi_n(f^p)/p` per power (integral scaling).
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// `2 v(p_max) - v(p_max/2)`, a first-order Richardson extrapolant.
    pub richardson: f64,
    pub richardson_std_error: f64,
    /// Declared defect times `vol^n / p_max`.
    pub error_bound: f64,
    /// The extrapolant agrees with the last value within `3 sigma` plus the
    /// error bound.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GGEstimate {
    /// `vol^n` times the sample mean.
    pub value: f64,
    pub std_error: f64,
    /// The sample mean itself.
    pub mean: f64,
    pub samples: usize,
    pub rejected: u64,
    pub n: usize,
    pub qm: String,
    pub isotopy: String,
    pub power: u32,
    pub seed: u64,
    pub model: String,
    pub basepoints: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homogenization: Option<PowerSeries>,
}

impl GGEstimate {
    /// Half-width of the 95% normal interval.
    pub fn ci95(&self) -> f64 {
        1.96 * self.std_error
    }
}

/// Word traced by one application of `iso`, and the image configuration.
fn step(iso: &Isotopy, x: &[Point], z: &[Point], opts: &TraceOptions) -> Result<(Word, Vec<Point>)> {
    let model = iso.model();
    let loops = build_loops(iso, x, z, opts)?;
    let image: Vec<Point> = loops.image.iter().map(|p| p.surface_point(&model)).collect();
    let word = if model.is_planar() {
        Word::Braid(extract_braid(&loops, opts)?)
    } else if x.len() == 1 {
        Word::Surface(loops.classes[0].clone())
    } else {
        return Err(GgError::Unsupported("several strands on closed models".into()));
    };
    Ok((word, image))
}

/// Words `gamma(f^p; x)` for each `p` in an increasing schedule, built as
/// products of the words of successive iterates.
fn power_words(iso: &Isotopy, x: &[Point], z: &[Point], schedule: &[u32], opts: &TraceOptions) -> Result<Vec<Word>> {
    let mut out = Vec::with_capacity(schedule.len());
    let mut cur = x.to_vec();
    let mut acc: Option<Word> = None;
    let mut done = 0u32;
    for &p in schedule {
        while done < p {
            let (w, next) = step(iso, &cur, z, opts)?;
            acc = Some(match acc {
                None => w,
                Some(a) => a.multiply(&w)?,
            });
            cur = next;
            done += 1;
        }
        out.push(acc.clone().expect("schedule starts at 1"));
    }
    Ok(out)
}

fn check_compat(qm: &QuasiMorphism, model: &SurfaceModel, n: usize) -> Result<()> {
    if n == 0 {
        return Err(GgError::InvalidInput("n must be at least 1".into()));
    }
    if model.is_planar() {
        qm.check_input(true, n as u16)
    } else {
        if n != 1 {
            return Err(GgError::Unsupported(format!("closed models are traced for n = 1, got n = {n}")));
        }
        qm.check_input(false, 1)
    }
}

fn validate_schedule(schedule: &[u32]) -> Result<()> {
    if schedule.is_empty() || schedule[0] != 1 || schedule.windows(2).any(|p| p[1] <= p[0]) {
        return Err(GgError::InvalidInput("power schedule must start at 1 and increase".into()));
    }
    Ok(())
}

/// Per-sample values: `values[k][q][p]` for sample `k`, evaluator `q` and
/// schedule index `p` (already divided by the power).
struct Draws {
    values: Vec<Vec<Vec<f64>>>,
    rejected: u64,
}

fn draw_values(
    qms: &[QuasiMorphism],
    iso: &Isotopy,
    n: usize,
    schedule: &[u32],
    samples: usize,
    seed: u64,
    opts: &EstimatorOptions,
) -> Result<Draws> {
    if samples == 0 {
        return Err(GgError::InvalidInput("samples must be >= 1".into()));
    }
    let model = iso.model();
    let z = opts.basepoints(&model, n);
    let one = |k: usize| -> Result<(Vec<Vec<f64>>, u64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let mut rejected = 0u64;
        for _ in 0..RETRY_BUDGET {
            let x = model.sample_configuration(n, &mut rng)?;
            match power_words(iso, &x, &z, schedule, &opts.trace) {
                Ok(words) => {
                    let vals = qms
                        .iter()
                        .map(|q| words.iter().zip(schedule).map(|(w, &p)| Ok(q.evaluate(w)? / p as f64)).collect::<Result<Vec<f64>>>())
                        .collect::<Result<Vec<_>>>()?;
                    return Ok((vals, rejected));
                }
                Err(GgError::Collision | GgError::Degenerate(_)) => rejected += 1,
                Err(e) => return Err(e),
            }
        }
        Err(GgError::RetryBudget(RETRY_BUDGET))
    };
    let run = || (0..samples).into_par_iter().map(one).collect::<Vec<_>>();
    let results = match opts.workers() {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| GgError::InvalidInput(format!("worker pool: {e}")))?
            .install(run),
        None => run(),
    };
    let mut values = Vec::with_capacity(samples);
    let mut rejected = 0;
    for r in results {
        let (v, rej) = r?;
        values.push(v);
        rejected += rej;
    }
    if rejected as f64 > opts.max_reject_rate * samples as f64 {
        return Err(GgError::Rejection { rejected, samples: samples as u64 });
    }
    Ok(Draws { values, rejected })
}

fn base_estimate(qm: &QuasiMorphism, iso: &Isotopy, n: usize, seed: u64, opts: &EstimatorOptions, column: &[f64], rejected: u64) -> GGEstimate {
    let model = iso.model();
    let scale = model.total_area().powi(n as i32);
    let (mean, sd) = mean_std(column);
    let se = sd / (column.len() as f64).sqrt();
    GGEstimate {
        value: mean * scale,
        std_error: se * scale,
        mean,
        samples: column.len(),
        rejected,
        n,
        qm: qm.name().to_string(),
        isotopy: iso.label.clone(),
        power: 1,
        seed,
        model: model.key(),
        basepoints: opts.basepoints(&model, n).iter().map(|p| [p.x, p.y]).collect(),
        homogenization: None,
    }
}

/// Several raw estimates `Phi_n(f)` sharing the same configurations.
pub fn phi_n_multi(
    qms: &[QuasiMorphism],
    iso: &Isotopy,
    n: usize,
    samples: usize,
    seed: u64,
    opts: &EstimatorOptions,
) -> Result<Vec<GGEstimate>> {
    for q in qms {
        check_compat(q, &iso.model(), n)?;
    }
    let d = draw_values(qms, iso, n, &[1], samples, seed, opts)?;
    Ok((0..qms.len())
        .map(|q| {
            let col: Vec<f64> = d.values.iter().map(|v| v[q][0]).collect();
            base_estimate(&qms[q], iso, n, seed, opts, &col, d.rejected)
        })
        .collect())
}

/// `Phi_n(f)`.
pub fn phi_n(qm: &QuasiMorphism, iso: &Isotopy, n: usize, samples: usize, seed: u64, opts: &EstimatorOptions) -> Result<GGEstimate> {
    Ok(phi_n_multi(std::slice::from_ref(qm), iso, n, samples, seed, opts)?.remove(0))
}

/// Several homogenized estimates sharing configurations across evaluators
/// and powers. Homomorphisms are linear in the power in expectation and
/// are evaluated at `p = 1` only.
pub fn phi_n_homogenized_multi(
    qms: &[QuasiMorphism],
    iso: &Isotopy,
    n: usize,
    schedule: &[u32],
    samples: usize,
    seed: u64,
    opts: &EstimatorOptions,
) -> Result<Vec<GGEstimate>> {
    validate_schedule(schedule)?;
    for q in qms {
        check_compat(q, &iso.model(), n)?;
    }
    let all_hom = qms.iter().all(|q| q.is_homomorphism());
    let used: &[u32] = if all_hom { &[1] } else { schedule };
    let d = draw_values(qms, iso, n, used, samples, seed, opts)?;
    let scale = iso.model().total_area().powi(n as i32);
    let mut out = Vec::with_capacity(qms.len());
    for (q, qm) in qms.iter().enumerate() {
        let per_power: Vec<Vec<f64>> =
            (0..used.len()).map(|p| d.values.iter().map(|v| v[q][p]).collect()).collect();
        if qm.is_homomorphism() {
            let mut e = base_estimate(qm, iso, n, seed, opts, &per_power[0], d.rejected);
            e.homogenization = Some(PowerSeries {
                powers: vec![1],
                values: vec![e.value],
                std_errors: vec![e.std_error],
                richardson: e.value,
                richardson_std_error: e.std_error,
                error_bound: 0.0,
                converged: true,
            });
            out.push(e);
            continue;
        }
        let last = used.len() - 1;
        let mut e = base_estimate(qm, iso, n, seed, opts, &per_power[last], d.rejected);
        e.power = used[last];
        let stats: Vec<(f64, f64)> = per_power
            .iter()
            .map(|c| {
                let (m, s) = mean_std(c);
                (m * scale, s / (c.len() as f64).sqrt() * scale)
            })
            .collect();
        let (richardson, r_se) = if last >= 1 {
            let col: Vec<f64> = d.values.iter().map(|v| 2.0 * v[q][last] - v[q][last - 1]).collect();
            let (m, s) = mean_std(&col);
            (m * scale, s / (col.len() as f64).sqrt() * scale)
        } else {
            stats[0]
        };
        let error_bound = qm.declared_defect().unwrap_or(0.0) * scale / used[last] as f64;
        let converged = (richardson - e.value).abs() <= 3.0 * (r_se * r_se + e.std_error * e.std_error).sqrt() + error_bound;
        e.homogenization = Some(PowerSeries {
            powers: used.to_vec(),
            values: stats.iter().map(|s| s.0).collect(),
            std_errors: stats.iter().map(|s| s.1).collect(),
            richardson,
            richardson_std_error: r_se,
            error_bound,
            converged,
        });
        out.push(e);
    }
    Ok(out)
}

/// `Phi_n(f^p)/p` at the largest power of the schedule, with the per-power
/// series and its extrapolation diagnostics.
pub fn phi_n_homogenized(
    qm: &QuasiMorphism,
    iso: &Isotopy,
    n: usize,
    schedule: &[u32],
    samples: usize,
    seed: u64,
    opts: &EstimatorOptions,
) -> Result<GGEstimate> {
    Ok(phi_n_homogenized_multi(std::slice::from_ref(qm), iso, n, schedule, samples, seed, opts)?.remove(0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CalabiValue {
    Disc(f64),
    /// Components ordered `a1..ag, b1..bg`.
    Surface(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalabiResult {
    pub value: CalabiValue,
    pub std_error: CalabiValue,
    pub method: String,
    pub samples: usize,
    pub seed: u64,
}

/// Largest time-one displacement over a ring near the boundary and the
/// basepoints.
fn boundary_displacement(iso: &Isotopy, z: &[Point]) -> Result<f64> {
    let ring = (0..64).map(|k| {
        let t = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
        Point::new(0.995 * t.cos(), 0.995 * t.sin())
    });
    let mut worst = 0.0f64;
    for p in ring.chain(z.iter().copied()) {
        let q = iso.time_one(p)?;
        worst = worst.max((q.c() - p.c()).norm());
    }
    Ok(worst)
}

/// Calabi invariant of a compactly supported disc isotopy: the homogenized
/// two-strand average of the exponent sum (the homomorphism of the braid
/// group taking the value 1 on each generator).
pub fn calabi_disc(iso: &Isotopy, samples: usize, seed: u64, opts: &EstimatorOptions) -> Result<CalabiResult> {
    let model = iso.model();
    if model != SurfaceModel::Disc {
        return Err(GgError::DomainMismatch(format!("disc Calabi needs the disc model, got {}", model.key())));
    }
    let z = opts.basepoints(&model, 2);
    let moved = boundary_displacement(iso, &z)?;
    if moved > 1e-9 {
        return Err(GgError::Support(format!("isotopy moves the boundary region by {moved:.3e}")));
    }
    let e = phi_n(&QuasiMorphism::exponent_sum(), iso, 2, samples, seed, opts)?;
    Ok(CalabiResult {
        value: CalabiValue::Disc(e.value),
        std_error: CalabiValue::Disc(e.std_error),
        method: "exponent-sum, n = 2".into(),
        samples,
        seed,
    })
}

/// Closed-surface Calabi vector: one-strand averages of the generator
/// counts `a1..ag, b1..bg`.
pub fn calabi_surface(iso: &Isotopy, samples: usize, seed: u64, opts: &EstimatorOptions) -> Result<CalabiResult> {
    let model = iso.model();
    let g = model.genus();
    if !model.is_closed() || g == 0 {
        return Err(GgError::DomainMismatch(format!("surface Calabi needs a closed model, got {}", model.key())));
    }
    let qms: Vec<QuasiMorphism> = (1..=g)
        .map(SurfaceGen::alpha)
        .chain((1..=g).map(SurfaceGen::beta))
        .map(QuasiMorphism::pi_count)
        .collect();
    let est = phi_n_multi(&qms, iso, 1, samples, seed, opts)?;
    Ok(CalabiResult {
        value: CalabiValue::Surface(est.iter().map(|e| e.value).collect()),
        std_error: CalabiValue::Surface(est.iter().map(|e| e.std_error).collect()),
        method: "generator counts, n = 1".into(),
        samples,
        seed,
    })
}

/// The one-strand homogenized average of a quasi-morphism on the surface
/// group.
pub fn polterovich_psi(
    qm: &QuasiMorphism,
    iso: &Isotopy,
    schedule: &[u32],
    samples: usize,
    seed: u64,
    opts: &EstimatorOptions,
) -> Result<GGEstimate> {
    let mut e = phi_n_homogenized(qm, iso, 1, schedule, samples, seed, opts)?;
    e.qm = format!("Psi[{}]", e.qm);
    Ok(e)
}
