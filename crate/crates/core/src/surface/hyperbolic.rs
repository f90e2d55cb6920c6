//! Poincaré-disc geometry and the regular octagon model of the genus-2
//! surface.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};
use std::sync::OnceLock;

use num_complex::Complex64 as C;

use crate::braid_words::{DehnReducer, SurfaceLetter};

/// Tolerance used for side tests, in units of hyperbolic distance.
pub const SIDE_TOL: f64 = 1e-12;

/// An orientation-preserving isometry of the Poincaré disc, stored as an
/// SU(1,1) matrix `[[a, b], [conj b, conj a]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: C,
    pub b: C,
}

impl Mobius {
    pub fn identity() -> Self {
        Self { a: C::new(1.0, 0.0), b: C::new(0.0, 0.0) }
    }

    /// Rotation about the origin by angle `t`.
    pub fn rotation(t: f64) -> Self {
        Self { a: C::from_polar(1.0, t / 2.0), b: C::new(0.0, 0.0) }
    }

    /// Translation by hyperbolic distance `d` along the real diameter.
    pub fn real_translation(d: f64) -> Self {
        Self { a: C::new((d / 2.0).cosh(), 0.0), b: C::new((d / 2.0).sinh(), 0.0) }
    }

    /// The isometry `w -> (w - p) / (1 - conj(p) w)` sending `p` to 0.
    pub fn to_origin(p: C) -> Self {
        let s = 1.0 / (1.0 - p.norm_sqr()).sqrt();
        Self { a: C::new(s, 0.0), b: -p * s }
    }

    pub fn apply(&self, w: C) -> C {
        (self.a * w + self.b) / (self.b.conj() * w + self.a.conj())
    }

    /// `self o other`.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        let (a1, b1) = (self.a, self.b);
        let (a2, b2) = (other.a, other.b);
        Mobius { a: a1 * a2 + b1 * b2.conj(), b: a1 * b2 + b1 * a2.conj() }
    }

    pub fn inverse(&self) -> Mobius {
        Mobius { a: self.a.conj(), b: -self.b }
    }

    /// `|trace| / 2 = |Re a|`; hyperbolic elements have this above 1.
    pub fn half_trace(&self) -> f64 {
        self.a.re.abs()
    }

    /// Translation length of a hyperbolic element.
    pub fn translation_length(&self) -> f64 {
        2.0 * self.half_trace().max(1.0).acosh()
    }

    /// Boundary fixed points `(repelling, attracting)` of a hyperbolic element.
    pub fn axis_endpoints(&self) -> (C, C) {
        // conj(b) w^2 + (conj(a) - a) w - b = 0
        let qa = self.b.conj();
        let qb = self.a.conj() - self.a;
        let qc = -self.b;
        let disc = (qb * qb - 4.0 * qa * qc).sqrt();
        let r1 = (-qb + disc) / (2.0 * qa);
        let r2 = (-qb - disc) / (2.0 * qa);
        // the attracting point has derivative of modulus < 1
        let deriv = |w: C| 1.0 / (self.b.conj() * w + self.a.conj()).norm_sqr();
        let (r1, r2) = (r1 / r1.norm(), r2 / r2.norm());
        if deriv(r1) < deriv(r2) {
            (r2, r1)
        } else {
            (r1, r2)
        }
    }
}

/// `cosh` of the hyperbolic distance between two points of the disc.
pub fn cosh_dist(x: C, y: C) -> f64 {
    1.0 + 2.0 * (x - y).norm_sqr() / ((1.0 - x.norm_sqr()) * (1.0 - y.norm_sqr()))
}

pub fn dist(x: C, y: C) -> f64 {
    cosh_dist(x, y).max(1.0).acosh()
}

pub fn dist_to_origin(x: C) -> f64 {
    2.0 * x.norm().atanh()
}

/// Point at arclength fraction `s` on the geodesic from `x` to `y`.
pub fn geodesic_point(x: C, y: C, s: f64) -> C {
    let t = Mobius::to_origin(x);
    let yy = t.apply(y);
    let r = yy.norm();
    if r == 0.0 {
        return x;
    }
    let d = 2.0 * r.atanh();
    let w = yy / r * (s * d / 2.0).tanh();
    t.inverse().apply(w)
}

/// Hyperbolic distance from the origin to the geodesic with ideal endpoints
/// `p`, `q`.
pub fn geodesic_dist_to_origin(p: C, q: C) -> f64 {
    let denom = 1.0 + (p * q.conj()).re;
    if denom.abs() < 1e-15 {
        return 0.0;
    }
    let c = (p + q) / denom;
    let r = (c.norm_sqr() - 1.0).max(0.0).sqrt();
    2.0 * (c.norm() - r).clamp(0.0, 1.0 - 1e-16).atanh()
}

/// Fermi chart along an oriented geodesic: maps the disc to the upper half
/// plane with the geodesic on the imaginary axis, oriented upwards.
#[derive(Debug, Clone, Copy)]
pub struct FermiFrame {
    /// Disc -> half plane.
    m: [C; 4],
    /// Half plane -> disc.
    minv: [C; 4],
    pub from: C,
    pub to: C,
}

fn mob_apply(m: &[C; 4], z: C) -> C {
    (m[0] * z + m[1]) / (m[2] * z + m[3])
}

impl FermiFrame {
    pub fn new(from: C, to: C) -> Self {
        // w -> lambda (w - from) / (w - to)
        let base = |w: C| (w - from) / (w - to);
        let probe = [C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(-1.0, 0.0), C::new(0.0, -1.0)]
            .into_iter()
            .max_by(|a, b| {
                let fa = (a - from).norm().min((a - to).norm());
                let fb = (b - from).norm().min((b - to).norm());
                fa.partial_cmp(&fb).unwrap()
            })
            .unwrap();
        let bdry = base(probe);
        let mut lambda = bdry.conj() / bdry.norm();
        if (lambda * base(C::new(0.0, 0.0))).im < 0.0 {
            lambda = -lambda;
        }
        let m = [lambda, -lambda * from, C::new(1.0, 0.0), -to];
        let det = m[0] * m[3] - m[1] * m[2];
        let minv = [m[3] / det, -m[1] / det, -m[2] / det, m[0] / det];
        Self { m, minv, from, to }
    }

    /// `(s, d)`: arclength coordinate along the geodesic and signed distance,
    /// positive on the left.
    pub fn coords(&self, w: C) -> (f64, f64) {
        let z = mob_apply(&self.m, w);
        (z.norm().ln(), (-z.re / z.im).asinh())
    }

    pub fn point(&self, s: f64, d: f64) -> C {
        // z = e^s (-tanh d + i sech d)
        let z = C::new(-d.tanh(), 1.0 / d.cosh()) * s.exp();
        mob_apply(&self.minv, z)
    }

    /// Translate `w` by `ds` along the geodesic.
    pub fn translate(&self, w: C, ds: f64) -> C {
        let z = mob_apply(&self.m, w) * ds.exp();
        mob_apply(&self.minv, z)
    }
}

/// One tile of the tessellation: the image `g P` of the octagon.
#[derive(Debug, Clone)]
pub struct Tile {
    pub g: Mobius,
    pub g_inv: Mobius,
    /// `g` as a shortest word in letter codes.
    pub word: Vec<u8>,
    /// `g(0)`.
    pub center: C,
    /// Distance from 0 to `g(0)`.
    pub dist: f64,
}

/// A lift of one of the four generator geodesics.
#[derive(Debug, Clone)]
pub struct AxisLift {
    pub frame: FermiFrame,
    /// Deck element translating along this lift by one period, as codes.
    pub period_word: Vec<u8>,
    pub period: Mobius,
    /// Distance from the origin.
    pub dist: f64,
}

/// The regular octagon with angles `pi/4` and side pairing giving the
/// relator `a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1`.
#[derive(Debug)]
pub struct Octagon {
    pub inradius: f64,
    pub circumradius: f64,
    pub sinh_inradius: f64,
    /// `gens[k]` maps the octagon across side `k`.
    pub gens: [Mobius; 8],
    pub gens_inv: [Mobius; 8],
    /// `gens[k](0)`.
    pub centers: [C; 8],
    /// Tiles sorted by distance from the origin, then by word.
    pub tiles: Vec<Tile>,
    axes: [Vec<AxisLift>; 4],
}

/// Side of the octagon crossed by each generator letter (by code).
pub const CODE_TO_SIDE: [usize; 8] = [3, 1, 0, 2, 7, 5, 4, 6];
/// Letter code of crossing side `k`.
pub const SIDE_TO_CODE: [u8; 8] = [2, 1, 3, 0, 6, 5, 7, 4];
/// Paired side.
pub const PARTNER: [usize; 8] = [2, 3, 0, 1, 6, 7, 4, 5];

/// Radius of the tile ball kept for lift searches.
const TILE_BALL: f64 = 7.6;

impl Octagon {
    pub fn get() -> &'static Octagon {
        static CELL: OnceLock<Octagon> = OnceLock::new();
        CELL.get_or_init(Octagon::build)
    }

    fn build() -> Octagon {
        let s2 = std::f64::consts::SQRT_2;
        let inradius = (1.0 + s2).acosh();
        let circumradius = (3.0 + 2.0 * s2).acosh();
        let theta = |k: usize| k as f64 * FRAC_PI_4;
        let mut gens = [Mobius::identity(); 8];
        for k in 0..8 {
            let p = PARTNER[k];
            gens[k] = Mobius::rotation(theta(k))
                .compose(&Mobius::real_translation(2.0 * inradius))
                .compose(&Mobius::rotation(PI - theta(p)));
        }
        let gens_inv = gens.map(|g| g.inverse());
        let centers = gens.map(|g| g.apply(C::new(0.0, 0.0)));
        let mut oct = Octagon {
            inradius,
            circumradius,
            sinh_inradius: inradius.sinh(),
            gens,
            gens_inv,
            centers,
            tiles: Vec::new(),
            axes: Default::default(),
        };
        oct.tiles = oct.build_tiles(TILE_BALL);
        oct.axes = std::array::from_fn(|g| oct.build_axes(g as u8));
        oct
    }

    /// Möbius map of a generator letter code.
    pub fn letter(&self, code: u8) -> &Mobius {
        &self.gens[CODE_TO_SIDE[code as usize]]
    }

    /// Möbius map of a word of letter codes (product in reading order).
    pub fn word_map(&self, codes: &[u8]) -> Mobius {
        codes.iter().fold(Mobius::identity(), |acc, &c| acc.compose(self.letter(c)))
    }

    fn build_tiles(&self, radius: f64) -> Vec<Tile> {
        let key = |w: C| ((w.re * 1e9).round() as i64, (w.im * 1e9).round() as i64);
        let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
        let origin = C::new(0.0, 0.0);
        let mut tiles = vec![Tile {
            g: Mobius::identity(),
            g_inv: Mobius::identity(),
            word: Vec::new(),
            center: origin,
            dist: 0.0,
        }];
        seen.insert(key(origin), 0);
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &t in &frontier {
                for code in 0..8u8 {
                    let g = tiles[t].g.compose(self.letter(code));
                    let c = g.apply(origin);
                    let d = dist_to_origin(c);
                    if d > radius {
                        continue;
                    }
                    let k = key(c);
                    if seen.contains_key(&k) {
                        continue;
                    }
                    let mut word = tiles[t].word.clone();
                    word.push(code);
                    seen.insert(k, tiles.len());
                    next.push(tiles.len());
                    tiles.push(Tile { g, g_inv: g.inverse(), word, center: c, dist: d });
                }
            }
            frontier = next;
        }
        tiles.sort_by(|a, b| {
            a.dist
                .partial_cmp(&b.dist)
                .unwrap()
                .then_with(|| a.word.cmp(&b.word))
        });
        tiles
    }

    /// Lifts of the closed geodesic of generator `gen` (0 = a1, 1 = b1,
    /// 2 = a2, 3 = b2) passing within `circumradius + 1` of the origin.
    fn build_axes(&self, gen: u8) -> Vec<AxisLift> {
        let code = gen * 2;
        let base = *self.letter(code);
        let (p0, q0) = base.axis_endpoints();
        let mut out: Vec<AxisLift> = Vec::new();
        let limit = self.circumradius + 1.0;
        for tile in self.tiles.iter().filter(|t| t.dist < 6.0) {
            let p = tile.g.apply(p0);
            let q = tile.g.apply(q0);
            let d = geodesic_dist_to_origin(p, q);
            if d > limit {
                continue;
            }
            if out.iter().any(|a| (a.frame.from - p).norm() < 1e-9 && (a.frame.to - q).norm() < 1e-9) {
                continue;
            }
            let mut word = tile.word.clone();
            word.push(code);
            word.extend(tile.word.iter().rev().map(|c| c ^ 1));
            let period = tile.g.compose(&base).compose(&tile.g_inv);
            out.push(AxisLift { frame: FermiFrame::new(p, q), period_word: word, period, dist: d });
        }
        out.sort_by(|a, b| a.dist.partial_cmp(&b.dist).unwrap());
        out
    }

    /// Lifts of generator geodesic `gen` near the octagon.
    pub fn axis_lifts(&self, gen: u8) -> &[AxisLift] {
        &self.axes[gen as usize]
    }

    /// Translation length of the generator geodesics.
    pub fn generator_length(&self, gen: u8) -> f64 {
        self.letter(gen * 2).translation_length()
    }

    /// Signed distance from `w` to the bisector of side `k` (positive when
    /// `w` lies beyond the side).
    pub fn side_distance(&self, w: C, k: usize) -> f64 {
        let n = w.norm_sqr();
        let c0 = (1.0 + n) / (1.0 - n);
        let ck = cosh_dist(w, self.centers[k]);
        ((c0 - ck) / (2.0 * self.sinh_inradius)).asinh()
    }

    pub fn contains(&self, w: C) -> bool {
        w.norm() < 1.0 && (0..8).all(|k| self.side_distance(w, k) <= SIDE_TOL)
    }

    /// Most-violated side, if any exceeds the tolerance.
    fn worst_side(&self, w: C) -> Option<usize> {
        let mut best = None;
        let mut bd = SIDE_TOL;
        for k in 0..8 {
            let d = self.side_distance(w, k);
            if d > bd {
                bd = d;
                best = Some(k);
            }
        }
        best
    }

    /// Move `w` into the octagon. Returns the local point and the letter
    /// codes `c1 c2 ...` with `w = g_{c1} g_{c2} ... (local)`.
    pub fn reduce(&self, mut w: C) -> (C, Vec<u8>) {
        let mut codes = Vec::new();
        let mut guard = 0;
        while let Some(k) = self.worst_side(w) {
            w = self.gens_inv[k].apply(w);
            codes.push(SIDE_TO_CODE[k]);
            guard += 1;
            if guard > 10_000 {
                break;
            }
        }
        (w, codes)
    }

    /// The lift `g y` (with `g` from the tile ball) closest to `x`; ties
    /// broken by the lexicographically smallest word. Both points should
    /// lie in the octagon.
    pub fn nearest_lift(&self, x: C, y: C) -> (usize, f64) {
        let dx = dist_to_origin(x);
        let mut best = (0usize, dist(x, y));
        for (i, t) in self.tiles.iter().enumerate().skip(1) {
            if t.dist > dx + best.1 + self.circumradius + 1e-9 {
                break;
            }
            let d = dist(x, t.g.apply(y));
            if d < best.1 - 1e-12 || (d < best.1 + 1e-12 && t.word < self.tiles[best.0].word) {
                best = (i, d);
            }
        }
        best
    }

    /// Reduce a code word with the Dehn algorithm.
    pub fn reduce_word(codes: &[u8]) -> Vec<u8> {
        let mut st = DehnReducer::genus2().stack();
        for &c in codes {
            st.push(c);
        }
        st.codes().to_vec()
    }

    /// Vertices of the octagon.
    pub fn vertices(&self) -> [C; 8] {
        let r = (self.circumradius / 2.0).tanh();
        std::array::from_fn(|k| C::from_polar(r, k as f64 * FRAC_PI_4 + FRAC_PI_8))
    }

    pub fn letter_of_side(k: usize) -> SurfaceLetter {
        SurfaceLetter::from_code(SIDE_TO_CODE[k])
    }
}
