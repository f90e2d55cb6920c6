//! Standard isotopies: twists, realized braids, figure-eight sites and
//! words in two diffeomorphisms.

use num_complex::Complex64 as C;
use serde::Serialize;

use super::chart::{max_collar_half_width, Chart, Profile};
use super::{Flow, Isotopy, Segment};
use crate::braid_words::{BraidWord, MixedBraidWord, MixedLetter};
use crate::surface::hyperbolic::Octagon;
use crate::surface::SurfaceModel;
use crate::{GgError, Result};

/// A single chart twist run for unit time.
pub fn annulus_twist(model: SurfaceModel, chart: Chart, profile: Profile) -> Result<Isotopy> {
    let label = format!("twist {chart:?}");
    Ok(Isotopy::single(model, Flow::Twist { chart, profile }, 1.0)?.with_label(label))
}

/// Where the discs `U_i` of a realized braid sit in a planar model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BraidPlacement {
    pub centers: Vec<C>,
    /// Radius of each disc `U_i`.
    pub radius: f64,
    /// Width of the ramp around the discs.
    pub margin: f64,
    /// Spacing of consecutive centres.
    pub spacing: f64,
}

impl BraidPlacement {
    /// `n` discs on the horizontal diameter, evenly spaced.
    pub fn standard(n: u16) -> Self {
        let s = (1.6 / n.max(1) as f64).min(0.3);
        let mid = (n as f64 - 1.0) / 2.0;
        let centers = (0..n).map(|i| C::new((i as f64 - mid) * s, 0.0)).collect();
        Self { centers, radius: s / 8.0, margin: s / 8.0, spacing: s }
    }

    /// Genus-surface placement for one strand: the disc sits at the
    /// crossing of the first handle's generators.
    fn surface(model: &SurfaceModel) -> Result<Self> {
        let c = match model {
            SurfaceModel::Torus => C::new(0.5, 0.5),
            SurfaceModel::Genus2 => site_crossing(1),
            _ => return Err(GgError::NoChart("surface letters need a closed surface".into())),
        };
        Ok(Self { centers: vec![c], radius: 0.1, margin: 0.05, spacing: 0.0 })
    }

    fn half_twist_chart(&self, k: usize) -> Chart {
        let mid = (self.centers[k] + self.centers[k + 1]) / 2.0;
        let reach = (self.centers[k + 1] - self.centers[k]).norm() / 2.0 + self.radius;
        Chart::Disc { cx: mid.re, cy: mid.im, radius: reach + self.margin }
    }

    fn half_twist_profile(&self, k: usize, turns: f64) -> Profile {
        let reach = (self.centers[k + 1] - self.centers[k]).norm() / 2.0 + self.radius;
        Profile::Plateau { turns, inner: 0.0, outer: reach * reach / 2.0 }
    }

    fn disc_chart(&self, i: usize) -> (Chart, Profile) {
        let c = self.centers[i];
        let chart = Chart::Disc { cx: c.re, cy: c.im, radius: self.radius + self.margin };
        (chart, Profile::Plateau { turns: -0.5, inner: 0.0, outer: self.radius * self.radius / 2.0 })
    }
}

/// Area-preserving isotopy of a planar model whose restriction to the disc
/// centres traces the given pure braid, and whose time-one map fixes each
/// disc `U_i` pointwise. On the torus and genus 2 a single strand may carry
/// surface letters of the first handle.
pub fn realize_pure_braid(word: &MixedBraidWord, model: SurfaceModel) -> Result<(Isotopy, BraidPlacement)> {
    let n = word.n_strands();
    if word.has_surface_letters() {
        return realize_surface_letters(word, model);
    }
    if !model.is_planar() {
        return Err(GgError::NoChart(format!("braid letters need a planar model, got {}", model.key())));
    }
    let braid = word.to_braid()?;
    if !braid.is_pure() {
        return Err(GgError::InvalidInput(format!("`{braid}` is not a pure braid")));
    }
    let placement = match model {
        SurfaceModel::Annulus { r_in } => shifted(n, r_in),
        _ => BraidPlacement::standard(n),
    };
    realize_on(&braid, model, placement)
}

/// A row of discs in the lower half of an annulus, clear of the hole.
fn shifted(n: u16, r_in: f64) -> BraidPlacement {
    let s = ((1.0 - r_in) * 0.4 / n.max(2) as f64).min(0.3);
    let y = -(r_in + 1.0) / 2.0;
    let mid = (n as f64 - 1.0) / 2.0;
    BraidPlacement {
        centers: (0..n).map(|i| C::new((i as f64 - mid) * s, y)).collect(),
        radius: s / 8.0,
        margin: s / 8.0,
        spacing: s,
    }
}

fn realize_on(braid: &BraidWord, model: SurfaceModel, placement: BraidPlacement) -> Result<(Isotopy, BraidPlacement)> {
    let n = placement.centers.len();
    let mut segments = Vec::new();
    // net half-turns of each disc's contents, indexed by slot
    let mut half_turns = vec![0i64; n];
    let mut slot_of: Vec<usize> = (0..n).collect();
    for l in braid.to_artin() {
        let k = l.i as usize - 1;
        let turns = 0.5 * l.sign as f64;
        segments.push(Segment::new(
            Flow::Twist { chart: placement.half_twist_chart(k), profile: placement.half_twist_profile(k, turns) },
            1.0,
        ));
        // the contents of slots k and k+1 swap and each turns by half
        let (a, b) = (slot_of.iter().position(|&s| s == k).unwrap(), slot_of.iter().position(|&s| s == k + 1).unwrap());
        slot_of[a] = k + 1;
        slot_of[b] = k;
        half_turns[a] += l.sign as i64;
        half_turns[b] += l.sign as i64;
    }
    for (strand, &h) in half_turns.iter().enumerate() {
        if h.rem_euclid(2) == 1 {
            let (chart, profile) = placement.disc_chart(slot_of[strand]);
            segments.push(Segment::new(Flow::Twist { chart, profile }, 1.0));
        }
    }
    let iso = Isotopy::new(model, segments)?.with_label(format!("braid {braid}"));
    Ok((iso, placement))
}

fn realize_surface_letters(word: &MixedBraidWord, model: SurfaceModel) -> Result<(Isotopy, BraidPlacement)> {
    if word.n_strands() != 1 {
        return Err(GgError::Unsupported("surface letters are realized for one strand only".into()));
    }
    let placement = BraidPlacement::surface(&model)?;
    let mut segments = Vec::new();
    for l in word.letters() {
        let MixedLetter::Surface { gen, inv, .. } = *l else {
            return Err(GgError::InvalidInput("braid letters need at least two strands".into()));
        };
        if gen.handle() != 1 {
            return Err(GgError::NoChart(format!("no chart realizes {} through the basepoint disc", gen.label())));
        }
        let turns = if inv { -1.0 } else { 1.0 };
        let (chart, profile) = match model {
            SurfaceModel::Torus => {
                let hw = 0.2;
                let chart = Chart::Band { horizontal: gen.is_alpha(), center: 0.5, half_width: hw };
                let lo = (hw - placement.radius - 0.02) / (2.0 * std::f64::consts::PI);
                let hi = (hw + placement.radius + 0.02) / (2.0 * std::f64::consts::PI);
                (chart, Profile::Plateau { turns, inner: lo, outer: hi })
            }
            _ => {
                let hw = 0.5;
                let g = if gen.is_alpha() { 0 } else { 1 };
                let chart = Chart::Collar { gen: g, half_width: hw };
                let l = Octagon::get().generator_length(g);
                let scale = l / (2.0 * std::f64::consts::PI);
                let r = placement.radius + 0.05;
                (chart, Profile::Plateau { turns, inner: scale * (hw.sinh() - r.sinh()), outer: scale * (hw.sinh() + r.sinh()) })
            }
        };
        segments.push(Segment::new(Flow::Twist { chart, profile }, 1.0));
    }
    let iso = Isotopy::new(model, segments)?.with_label(format!("point push {word}"));
    Ok((iso, placement))
}

/// The lift of generator `gen`'s geodesic whose period is the generator
/// itself.
fn own_lift(gen: u8) -> &'static crate::surface::hyperbolic::AxisLift {
    Octagon::get()
        .axis_lifts(gen)
        .iter()
        .find(|l| l.period_word == [2 * gen])
        .expect("generator axis passes near the octagon")
}

/// Crossing point of the `a_i` and `b_i` geodesics inside the octagon.
pub(crate) fn site_crossing(site: u8) -> C {
    let a = own_lift(2 * (site - 1));
    let b = own_lift(2 * (site - 1) + 1);
    let f = |s: f64| b.frame.coords(a.frame.point(s, 0.0)).1;
    // bracket a sign change, then bisect
    let mut lo = -4.0;
    let mut flo = f(lo);
    let mut hi = lo;
    for k in 1..=800 {
        hi = -4.0 + k as f64 * 0.01;
        if f(hi).signum() != flo.signum() {
            break;
        }
        lo = hi;
        flo = f(lo);
    }
    for _ in 0..100 {
        let mid = (lo + hi) / 2.0;
        if f(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    a.frame.point((lo + hi) / 2.0, 0.0)
}

/// Least distance between the closed geodesics of two generators.
pub fn collar_separation(gen_a: u8, gen_b: u8) -> f64 {
    let oct = Octagon::get();
    let a = own_lift(gen_a);
    let l = oct.generator_length(gen_a);
    let n = 2000;
    (0..n)
        .map(|k| {
            let p = oct.reduce(a.frame.point(l * k as f64 / n as f64, 0.0)).0;
            oct.axis_lifts(gen_b).iter().map(|lift| lift.frame.coords(p).1.abs()).fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureEightParams {
    /// Collar half-width.
    pub half_width: f64,
    /// Ramp width as a fraction of the collar's `u` range, at each end.
    pub ramp: f64,
}

impl Default for FigureEightParams {
    fn default() -> Self {
        Self { half_width: 0.52, ramp: 0.02 }
    }
}

/// Areas of the three bands of one twist collar: the inner ramp `W`, the
/// plateau `U` where the time-one map is the identity, and the outer ramp
/// `V`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionInventory {
    pub chart: Chart,
    pub w_area: f64,
    pub u_area: f64,
    pub v_area: f64,
    pub plateau: (f64, f64),
}

/// Two full-turn collar twists around `a_i` and `b_i`.
#[derive(Debug, Clone)]
pub struct FigureEightSite {
    pub site: u8,
    pub h: Isotopy,
    pub g: Isotopy,
    /// Where the two geodesics cross (fixed at time one, inside both plateaus).
    pub crossing: C,
    /// Point fixed by both flows at all times.
    pub base_point: C,
    pub inventory: [RegionInventory; 2],
}

pub fn figure_eight_pair(site: u8, params: FigureEightParams) -> Result<FigureEightSite> {
    if !(site == 1 || site == 2) {
        return Err(GgError::InvalidInput(format!("site must be 1 or 2, got {site}")));
    }
    let hw = params.half_width;
    if !(hw > 0.0 && hw < max_collar_half_width()) {
        return Err(GgError::Support(format!("collar half-width {hw} is not embedded")));
    }
    if !(params.ramp > 0.0 && params.ramp < 0.5) {
        return Err(GgError::InvalidInput("ramp fraction must be in (0, 1/2)".into()));
    }
    // the two sites must have disjoint supports
    let sep = [(0, 2), (0, 3), (1, 2), (1, 3)].iter().map(|&(a, b)| collar_separation(a, b)).fold(f64::INFINITY, f64::min);
    if 2.0 * hw >= sep {
        return Err(GgError::Support(format!("collars of half-width {hw} overlap the other site (separation {sep:.4})")));
    }
    let base = 2 * (site - 1);
    let make = |gen: u8| -> Result<(Isotopy, RegionInventory)> {
        let chart = Chart::Collar { gen, half_width: hw };
        let um = chart.u_max();
        let (inner, outer) = (params.ramp * um, (1.0 - params.ramp) * um);
        let profile = Profile::Plateau { turns: 1.0, inner, outer };
        let iso = annulus_twist(SurfaceModel::Genus2, chart, profile)?;
        let two_pi = 2.0 * std::f64::consts::PI;
        let inv = RegionInventory {
            chart,
            w_area: two_pi * inner,
            u_area: two_pi * (outer - inner),
            v_area: two_pi * (um - outer),
            plateau: (inner, outer),
        };
        Ok((iso, inv))
    };
    let (h, ih) = make(base)?;
    let (g, ig) = make(base + 1)?;
    Ok(FigureEightSite {
        site,
        h: h.with_label(format!("twist a{site}")),
        g: g.with_label(format!("twist b{site}")),
        crossing: site_crossing(site),
        base_point: C::new(0.0, 0.0),
        inventory: [ih, ig],
    })
}

/// The isotopy of a word in `a = h`, `b = g`: letters run left to right
/// (`ab` runs `h`, then `g`). Letters are `a b A B` (upper case inverse) or
/// tokens `a^k`, `b^k`.
pub fn word_diffeo(pattern: &str, h: &Isotopy, g: &Isotopy) -> Result<Isotopy> {
    let mut out = Isotopy::identity(h.model());
    let bad = || GgError::Parse(format!("bad diffeomorphism word `{pattern}`"));
    for tok in pattern.split_whitespace() {
        let steps: Vec<(char, i64)> = if let Some((b, e)) = tok.split_once('^') {
            let e: i64 = e.parse().map_err(|_| bad())?;
            if b.len() != 1 {
                return Err(bad());
            }
            vec![(b.chars().next().unwrap(), e)]
        } else {
            tok.chars().map(|c| (c, 1)).collect()
        };
        for (c, e) in steps {
            let (f, e) = match c {
                'a' => (h, e),
                'A' => (h, -e),
                'b' => (g, e),
                'B' => (g, -e),
                _ => return Err(bad()),
            };
            out = out.then(&f.power(e))?;
        }
    }
    Ok(out.with_label(format!("{pattern} in ({}, {})", h.label, g.label)))
}
