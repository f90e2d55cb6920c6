//! End-to-end acceptance checks, one line per criterion.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gg_core::braid_words::{
    braid_equal, parse_surface_word, ArtinLetter, ArtinOutcome, BraidWord, MixedBraidWord, MixedLetter, SurfaceLetter,
    SurfaceLoopWord,
};
use gg_core::dynamics::{annulus_twist, realize_pure_braid, Chart, Flow, Isotopy, Profile};
use gg_core::experiments::{
    autonomous_vanishing_suite, default_metric_family, default_vanishing_cases, metric_comparison, norm_lower_bound,
    run_embedding, EmbeddingConfig, NormTag,
};
use gg_core::gg_estimator::{calabi_disc, phi_n, CalabiValue, EstimatorOptions};
use gg_core::quasimorphism::{QuasiMorphism, Word};
use gg_core::surface::hyperbolic::Octagon;
use gg_core::surface::{Point, SurfaceModel};
use gg_core::trace::{build_loops, default_basepoints, extract_braid, TraceOptions};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

// ---------- 1: Dehn reduction against a Cayley-ball oracle ----------

/// Elements of the ball of radius 4 found breadth first, identified by
/// where their deck transformation sends a generic point.
struct CayleyBall {
    edges: Vec<[Option<usize>; 8]>,
}

impl CayleyBall {
    fn build(radius: usize) -> Self {
        let oct = Octagon::get();
        let probe = num_complex::Complex64::new(0.0123, 0.0456);
        let key = |w: num_complex::Complex64| ((w.re * 1e9).round() as i64, (w.im * 1e9).round() as i64);
        let mut maps = vec![gg_core::surface::hyperbolic::Mobius::identity()];
        let mut ids: HashMap<(i64, i64), usize> = HashMap::from([(key(probe), 0)]);
        let mut edges = vec![[None; 8]];
        let mut frontier = vec![0usize];
        for _ in 0..radius {
            let mut next = Vec::new();
            for &v in &frontier {
                for c in 0..8u8 {
                    // right multiplication by the letter
                    let m = maps[v].compose(oct.letter(c));
                    let k = key(m.apply(probe));
                    let id = *ids.entry(k).or_insert_with(|| {
                        maps.push(m);
                        edges.push([None; 8]);
                        next.push(maps.len() - 1);
                        maps.len() - 1
                    });
                    edges[v][c as usize] = Some(id);
                }
            }
            frontier = next;
        }
        Self { edges }
    }

    fn walk(&self, codes: &[u8]) -> usize {
        codes.iter().fold(0, |v, &c| self.edges[v][c as usize].expect("walk stays in the ball"))
    }

    fn trivial(&self, codes: &[u8]) -> bool {
        let h = codes.len().div_ceil(2);
        let back: Vec<u8> = codes[h..].iter().rev().map(|c| c ^ 1).collect();
        self.walk(&codes[..h]) == self.walk(&back)
    }
}

fn reduced_words(len: usize, alphabet: u8, out: &mut Vec<Vec<u8>>) {
    fn rec(cur: &mut Vec<u8>, len: usize, alphabet: u8, out: &mut Vec<Vec<u8>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for c in 0..alphabet {
            if cur.last().is_some_and(|&l| l == c ^ 1) {
                continue;
            }
            cur.push(c);
            rec(cur, len, alphabet, out);
            cur.pop();
        }
    }
    rec(&mut Vec::new(), len, alphabet, out);
}

fn criterion_1() -> Outcome {
    let ball = CayleyBall::build(4);
    let mut checked = 0usize;
    let mut trivial = 0usize;
    for len in 0..=8 {
        let mut words = Vec::new();
        reduced_words(len, 8, &mut words);
        for w in words {
            let word = SurfaceLoopWord::new(2, w.iter().map(|&c| SurfaceLetter::from_code(c)).collect()).unwrap();
            let dehn = word.dehn_reduce().unwrap().is_empty();
            let oracle = ball.trivial(&w);
            if dehn != oracle {
                return Err(format!("disagreement on `{word}`: dehn {dehn}, oracle {oracle}"));
            }
            checked += 1;
            trivial += oracle as usize;
        }
    }
    ensure(trivial > 0, format!("{checked} reduced words, {trivial} trivial, all agree"))
}

// ---------- 2: defect bounds over exhaustive short products ----------

fn all_words(max_len: usize, alphabet: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for c in 0..alphabet {
                let mut v: Vec<usize> = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Largest `|q(uv) - q(u) - q(v)|` over all words `w` of length <= 6 and
/// splits `w = uv` where both factors are in the domain.
fn max_defect<F>(qm: &QuasiMorphism, alphabet: usize, make: F) -> f64
where
    F: Fn(&[usize]) -> Option<Word>,
{
    let mut worst = 0.0f64;
    for w in all_words(6, alphabet) {
        for k in 0..=w.len() {
            let (Some(u), Some(v), Some(uv)) = (make(&w[..k]), make(&w[k..]), make(&w)) else { continue };
            let (Ok(a), Ok(b), Ok(c)) = (qm.evaluate(&u), qm.evaluate(&v), qm.evaluate(&uv)) else { continue };
            worst = worst.max((c - a - b).abs());
        }
    }
    worst
}

fn criterion_2() -> Outcome {
    // B3: Artin letters s1, s1^-1, s2, s2^-1, and the pure generators
    // A12 = s1^2, A23 = s2^2, A13 = s2 s1^2 s2^-1 with inverses
    let artin = |w: &[usize]| -> Option<Word> {
        let l: Vec<ArtinLetter> = w.iter().map(|&c| ArtinLetter::new(1 + (c / 2) as u16, if c % 2 == 0 { 1 } else { -1 })).collect();
        BraidWord::from_artin(3, &l).ok().map(Word::Braid)
    };
    let pure_gens: [&[(u16, i8)]; 3] = [&[(1, 1), (1, 1)], &[(2, 1), (2, 1)], &[(2, 1), (1, 1), (1, 1), (2, -1)]];
    let pure = |w: &[usize]| -> Option<Word> {
        let mut l = Vec::new();
        for &c in w {
            let g = pure_gens[c / 2];
            if c % 2 == 0 {
                l.extend(g.iter().map(|&(i, s)| ArtinLetter::new(i, s)));
            } else {
                l.extend(g.iter().rev().map(|&(i, s)| ArtinLetter::new(i, -s)));
            }
        }
        BraidWord::from_artin(3, &l).ok().map(Word::Braid)
    };
    let surface = |genus: u16| {
        move |w: &[usize]| -> Option<Word> {
            SurfaceLoopWord::new(genus, w.iter().map(|&c| SurfaceLetter::from_code(c as u8)).collect()).ok().map(Word::Surface)
        }
    };
    let mut report = Vec::new();
    let mut check = |qm: QuasiMorphism, d: f64| -> Result<(), String> {
        let declared = qm.declared_defect().unwrap();
        let hom = qm.is_homomorphism();
        if hom && declared != 0.0 {
            return Err(format!("{} is a homomorphism with declared defect {declared}", qm.name()));
        }
        if d > declared || (hom && d != 0.0) {
            return Err(format!("{}: observed defect {d} exceeds {declared}", qm.name()));
        }
        report.push(format!("{} {d}/{declared}", qm.name()));
        Ok(())
    };
    check(QuasiMorphism::exponent_sum(), max_defect(&QuasiMorphism::exponent_sum(), 4, artin))?;
    let r3 = QuasiMorphism::rademacher3();
    let d = max_defect(&r3, 4, artin);
    check(r3, d)?;
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        let lk = QuasiMorphism::linking(i, j).unwrap();
        let d = max_defect(&lk, 6, pure);
        check(lk, d)?;
    }
    for label in ["a1", "b2"] {
        let q = QuasiMorphism::from_spec(&format!("pi:{label}"), 2).unwrap();
        let d = max_defect(&q, 8, surface(2));
        check(q, d)?;
    }
    for pat in ["a1 b1", "a1 a1 b1", "a1 b1 a1^-1 b1^-1"] {
        let free = QuasiMorphism::brooks_text(pat, None).unwrap();
        let d = max_defect(&free, 4, surface(1));
        check(free, d)?;
    }
    for pat in ["a1 b1", "a1 a1 b1 a1^-1 a1^-1 b1^-1", "a1 b2"] {
        let q = QuasiMorphism::brooks_text(pat, Some(2)).unwrap();
        let d = max_defect(&q, 8, surface(2));
        check(q, d)?;
    }
    Ok(report.join(", "))
}

// ---------- 3, 4: Calabi invariant on the disc ----------

fn smootherstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (t * (6.0 * t - 15.0) + 10.0)
}

/// `int H dA` for a radial twist with speed `s(u)` turns per unit time,
/// `u = r^2/2`: `H(u) = 2 pi int_u^U s`, `dA = 2 pi du`, so the integral
/// is `4 pi^2 int_0^U v s(v) dv`.
fn hamiltonian_integral(speed: impl Fn(f64) -> f64, u_max: f64) -> f64 {
    let n = 200_000;
    let h = u_max / n as f64;
    let s: f64 = (0..n).map(|k| {
        let v = (k as f64 + 0.5) * h;
        v * speed(v)
    }).sum();
    4.0 * PI * PI * s * h
}

struct RadialCase {
    iso: Isotopy,
    integral: f64,
}

fn radial_cases() -> Vec<RadialCase> {
    let r: f64 = 0.9;
    let um = r * r / 2.0;
    let chart = Chart::Disc { cx: 0.0, cy: 0.0, radius: r };
    let mut out = Vec::new();
    // rigid core with a smooth outer ramp
    let (turns, outer) = (1.0, 0.3);
    out.push(RadialCase {
        iso: annulus_twist(SurfaceModel::Disc, chart, Profile::Plateau { turns, inner: 0.0, outer }).unwrap(),
        integral: hamiltonian_integral(|v| if v <= outer { turns } else { turns * smootherstep((um - v) / (um - outer)) }, um),
    });
    // H = a (1 - u/U)^e, speed = a e (1 - u/U)^(e-1) / (2 pi U)
    for (a, e) in [(3.0, 2.0), (4.0, 3.0)] {
        out.push(RadialCase {
            iso: annulus_twist(SurfaceModel::Disc, chart, Profile::Power { amplitude: a, exponent: e }).unwrap(),
            integral: 2.0 * PI * a * um / (e + 1.0),
        });
    }
    out
}

fn calabi(iso: &Isotopy, samples: usize, seed: u64) -> (f64, f64) {
    let c = calabi_disc(iso, samples, seed, &EstimatorOptions::default()).unwrap();
    match (c.value, c.std_error) {
        (CalabiValue::Disc(v), CalabiValue::Disc(s)) => (v, s),
        _ => unreachable!(),
    }
}

fn criterion_3() -> Outcome {
    // rigid rotation by one turn of a disc of radius R: both points inside
    // give a full twist (exponent sum 2), so C = 2 (pi R^2)^2, while
    // int H dA = pi^2 R^4 / 2
    let rr: f64 = 0.5;
    let oracle = 2.0 * (PI * rr * rr).powi(2) / (PI * PI * rr.powi(4) / 2.0);
    let mut ratios = Vec::new();
    for (k, c) in radial_cases().iter().enumerate() {
        let (v, s) = calabi(&c.iso, 100_000, 30 + k as u64);
        ratios.push((v / c.integral, s / c.integral));
    }
    let lo = ratios.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    let spread = (hi - lo) / lo;
    let worst_oracle = ratios.iter().map(|r| (r.0 - oracle).abs() / oracle).fold(0.0, f64::max);
    let msg = format!(
        "ratios {:?}, spread {:.3}%, oracle {oracle}, worst deviation {:.3}%",
        ratios.iter().map(|r| format!("{:.4}±{:.4}", r.0, r.1)).collect::<Vec<_>>(),
        100.0 * spread,
        100.0 * worst_oracle
    );
    ensure(spread < 0.02 && worst_oracle < 0.02, msg)
}

fn random_disc_isotopy(rng: &mut ChaCha8Rng) -> Isotopy {
    let radius = rng.gen_range(0.25..0.45);
    let cx = rng.gen_range(-0.4..0.4);
    let cy = rng.gen_range(-0.4..0.4);
    let chart = Chart::Disc { cx, cy, radius };
    let profile = if rng.gen_bool(0.5) {
        Profile::Power { amplitude: rng.gen_range(-0.4..0.4), exponent: rng.gen_range(2.0..4.0) }
    } else {
        let um = radius * radius / 2.0;
        Profile::Plateau { turns: rng.gen_range(-1.0..1.0), inner: 0.0, outer: um * rng.gen_range(0.3..0.8) }
    };
    annulus_twist(SurfaceModel::Disc, chart, profile).unwrap()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst = 0.0f64;
    for k in 0..10 {
        let f = random_disc_isotopy(&mut rng);
        let g = random_disc_isotopy(&mut rng);
        let fg = Isotopy::compose(&f, &g).unwrap();
        let seed = 4000 + k;
        let (a, sa) = calabi(&f, 6000, seed);
        let (b, sb) = calabi(&g, 6000, seed);
        let (c, sc) = calabi(&fg, 6000, seed);
        let z = (c - a - b).abs() / (sa * sa + sb * sb + sc * sc).sqrt().max(1e-300);
        worst = worst.max(z);
        if z > 3.0 {
            return Err(format!("pair {k}: C(fg) = {c:.5}, C(f) + C(g) = {:.5}, {z:.2} sigma", a + b));
        }
    }
    Ok(format!("10 pairs, worst deviation {worst:.2} sigma"))
}

// ---------- 5: vanishing on the a1 twist ----------

fn criterion_5() -> Outcome {
    let rows = autonomous_vanishing_suite(&default_vanishing_cases().unwrap(), &[1, 2, 4, 8, 16], 3000, 5, &EstimatorOptions::default())
        .map_err(|e| e.to_string())?;
    let msg = rows
        .iter()
        .map(|r| format!("{} / {}: {:.4} ± {:.4} (bound {:.3})", r.label, r.qm, r.value, r.std_error, r.error_bound))
        .collect::<Vec<_>>()
        .join("; ");
    let control = rows.iter().find(|r| !r.expect_zero).unwrap();
    ensure(rows.iter().all(|r| r.passed) && control.value.abs() >= 10.0 * control.std_error, msg)
}

// ---------- 6, 7: site matrix and norm bounds ----------

fn criterion_6_7() -> (Outcome, Outcome) {
    let cfg = EmbeddingConfig { samples: 20_000, area_samples: 400_000, seed: 6, ..Default::default() };
    let exp = match run_embedding(&cfg, &EstimatorOptions::default()) {
        Ok(e) => e,
        Err(e) => return (Err(e.to_string()), Err("no matrix".into())),
    };
    let mut ok = exp.determinant > 0.5 && exp.max_commutator_displacement < 1e-8;
    for i in 0..exp.m {
        for j in 0..exp.m {
            let target = if i == j { 1.0 } else { 0.0 };
            ok &= (exp.matrix[i][j] - target).abs() < 0.1 + 3.0 * exp.std_errors[i][j];
        }
    }
    let six = ensure(
        ok,
        format!("M = {:?} ± {:?}, det {:.4}, area {:.4}", fmt_m(&exp.matrix), fmt_m(&exp.std_errors), exp.determinant, exp.area),
    );

    let expected = exp.matrix[0][0].abs() / exp.normalized_defects[0];
    let lows: Vec<f64> = (1..=10).map(|k| norm_lower_bound(&exp, &[k, 0], NormTag::Autonomous).unwrap().lower).collect();
    // least-squares slope through the origin
    let slope = lows.iter().enumerate().map(|(i, l)| (i + 1) as f64 * l).sum::<f64>() / (1..=10).map(|k| (k * k) as f64).sum::<f64>();
    let linear = lows.iter().enumerate().all(|(i, l)| (l - slope * (i + 1) as f64).abs() <= 1e-9 * (1.0 + l));
    let seven = ensure(
        linear && (slope - expected).abs() <= 0.2 * expected,
        format!("slope {slope:.6} vs |M11|/D1 = {expected:.6}, lower(10) = {:.5}", lows[9]),
    );
    (six, seven)
}

fn fmt_m(m: &[Vec<f64>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(|x| format!("{x:.4}")).collect()).collect()
}

// ---------- 8: autonomous witness versus Hofer bound ----------

fn criterion_8() -> Outcome {
    let rows = metric_comparison(&default_metric_family(2.0, 0.01, 10).unwrap()).map_err(|e| e.to_string())?;
    let big: Vec<_> = rows.iter().filter(|r| r.label.starts_with("a1")).collect();
    let small = rows.iter().find(|r| r.label.starts_with("disc")).unwrap();
    let c = big[0].hofer_oscillation;
    let ok = big.len() == 10
        && big.iter().all(|r| r.autonomous_witness == 1 && r.hofer_oscillation >= c * r.n as f64 * (1.0 - 1e-12))
        && small.autonomous_witness == 1
        && small.hofer_oscillation < 0.01
        && small.displacement > 0.0;
    ensure(ok, format!("C = {c}, Hofer(h^10) = {}, small map Hofer {}", big[9].hofer_oscillation, small.hofer_oscillation))
}

// ---------- 9: trace correctness ----------

fn full_twists(k: f64) -> Isotopy {
    annulus_twist(
        SurfaceModel::Disc,
        Chart::Disc { cx: 0.0, cy: 0.0, radius: 0.8 },
        Profile::Plateau { turns: k, inner: 0.0, outer: 0.25 },
    )
    .unwrap()
}

fn criterion_9() -> Outcome {
    let opts = TraceOptions::default();
    let disc = SurfaceModel::Disc;
    let z2 = default_basepoints(&disc, 2);
    let x = [Point::new(-0.3, 0.1), Point::new(0.25, -0.05)];
    for k in 1..=5 {
        let l = build_loops(&full_twists(k as f64), &x, &z2, &opts).map_err(|e| e.to_string())?;
        let b = extract_braid(&l, &opts).map_err(|e| e.to_string())?;
        let expect = BraidWord::from_artin(2, &vec![ArtinLetter::new(1, 1); 2 * k]).unwrap();
        if b != expect {
            return Err(format!("{k} full twists gave `{b}`"));
        }
    }
    let torus = SurfaceModel::Torus;
    let zt = default_basepoints(&torus, 1);
    for (dx, dy, w) in [(1.0, 0.0, "a1"), (0.0, -2.0, "b1^-2"), (-1.0, 0.0, "a1^-1")] {
        let iso = Isotopy::single(torus, Flow::Translation { dx, dy }, 1.0).unwrap();
        let l = build_loops(&iso, &[Point::new(0.4, 0.7)], &zt, &opts).map_err(|e| e.to_string())?;
        if l.classes[0] != parse_surface_word(w, 1).unwrap() {
            return Err(format!("torus ({dx}, {dy}) gave `{}`", l.classes[0]));
        }
    }
    let g2 = SurfaceModel::Genus2;
    for w in ["a1@1^3", "b1@1", "a1@1^-2"] {
        let word = gg_core::braid_words::parse_mixed_word(w, 1, 2).unwrap();
        let (iso, pl) = realize_pure_braid(&word, g2).map_err(|e| e.to_string())?;
        let l = build_loops(&iso, &[Point::from_c(pl.centers[0])], &default_basepoints(&g2, 1), &opts).map_err(|e| e.to_string())?;
        if l.classes[0] != word.strand_loop(1).unwrap().dehn_reduce().unwrap() {
            return Err(format!("genus-2 `{w}` gave `{}`", l.classes[0]));
        }
    }

    // refinement stability over random pure braids and configurations
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut cases = 0;
    let mut letters_seen = 0;
    while cases < 50 {
        let n = rng.gen_range(2..=4u16);
        let len = rng.gen_range(1..=4);
        let letters: Vec<MixedLetter> = (0..len)
            .map(|_| {
                let j = rng.gen_range(2..=n);
                let i = rng.gen_range(1..j);
                MixedLetter::Band { i, j, inv: rng.gen_bool(0.5) }
            })
            .collect();
        let word = MixedBraidWord::new(n, 0, letters).unwrap();
        let (iso, pl) = realize_pure_braid(&word, disc).map_err(|e| e.to_string())?;
        let iso = if rng.gen_bool(0.5) { iso.then(&full_twists(rng.gen_range(-1.0..1.0))).unwrap() } else { iso };
        // half the configurations sit in the braid's discs, the rest anywhere
        let x = if rng.gen_bool(0.5) {
            pl.centers
                .iter()
                .map(|c| {
                    let d = pl.radius * 0.8 * rng.gen::<f64>();
                    Point::from_c(c + num_complex::Complex64::from_polar(d, rng.gen_range(0.0..2.0 * PI)))
                })
                .collect()
        } else {
            disc.sample_configuration(n as usize, &mut rng).unwrap()
        };
        let z = default_basepoints(&disc, n as usize);
        let (Ok(l1), Ok(l2)) = (build_loops(&iso, &x, &z, &opts), build_loops(&iso, &x, &z, &opts.refined())) else { continue };
        let (Ok(b1), Ok(b2)) = (extract_braid(&l1, &opts), extract_braid(&l2, &opts.refined())) else { continue };
        if b1 != b2 && braid_equal(&b1, &b2) != ArtinOutcome::Equal {
            return Err(format!("case {cases}: `{b1}` vs refined `{b2}`"));
        }
        letters_seen += b1.len();
        cases += 1;
    }
    Ok(format!("full twists k <= 5, torus and genus-2 wraps, 50 refinement cases with {letters_seen} letters"))
}

// ---------- 10: three-term defect of the raw average ----------

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let qm = QuasiMorphism::linking(1, 2).unwrap();
    let opts = EstimatorOptions::default();
    let vol2 = PI * PI;
    let bound = vol2 * qm.declared_defect().unwrap();
    let mut worst = 0.0f64;
    for k in 0..10 {
        let f = random_disc_isotopy(&mut rng);
        let g = random_disc_isotopy(&mut rng);
        let fg = Isotopy::compose(&f, &g).unwrap();
        let seed = 10_000 + k;
        let e = |iso: &Isotopy| phi_n(&qm, iso, 2, 4000, seed, &opts).map_err(|e| e.to_string());
        let (a, b, c) = (e(&f)?, e(&g)?, e(&fg)?);
        let sigma = (a.std_error.powi(2) + b.std_error.powi(2) + c.std_error.powi(2)).sqrt();
        let d = (c.value - a.value - b.value).abs();
        worst = worst.max(d / sigma.max(1e-300));
        if d > bound + 3.0 * sigma {
            return Err(format!("pair {k}: defect {d:.5} > {bound} + 3 * {sigma:.5}"));
        }
    }
    Ok(format!("10 pairs, bound {bound}, worst defect {worst:.2} sigma"))
}

// ---------- 11: CLI determinism ----------

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let iso = dir.path().join("iso.json");
    std::fs::write(
        &iso,
        r#"{"model": "disc", "segments": [
            {"kind": "twist", "chart": {"kind": "disc", "cx": 0.1, "cy": 0, "radius": 0.6},
             "profile": {"kind": "power", "amplitude": 0.5, "exponent": 2}},
            {"kind": "hamiltonian", "expr": "0.3 * max(0.5 - x^2 - y^2, 0)^3 * (1 + y)"}]}"#,
    )
    .map_err(|e| e.to_string())?;
    let run = |workers: &str| -> Result<String, String> {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_ggqm"))
            .args(["estimate", "--isotopy", iso.to_str().unwrap(), "--qm", "lk:1,2", "--qm", "expsum", "--samples", "400"])
            .args(["--seed", "11", "--workers", workers])
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(String::from_utf8_lossy(&out.stderr).into_owned());
        }
        let line: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        Ok(format!("{}|{}", line["config_hash"], line["payload"]))
    };
    let a = run("1")?;
    let b = run("1")?;
    let c = run("3")?;
    ensure(a == b && b == c, format!("payload {} bytes, identical across repeats and worker counts", a.len()))
}

fn main() {
    let mut failed = 0;
    let mut report = |id: &str, name: &str, start: Instant, r: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(m) => println!("PASS {id:>2} {name} ({secs:.1}s): {m}"),
            Err(m) => {
                failed += 1;
                println!("FAIL {id:>2} {name} ({secs:.1}s): {m}");
            }
        }
    };
    let only: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let want = |id: &str| only.as_deref().is_none_or(|o| o == id);
    macro_rules! run {
        ($id:expr, $name:expr, $f:expr) => {
            if want($id) {
                let t = Instant::now();
                report($id, $name, t, $f);
            }
        };
    }
    run!("1", "word problem oracle", criterion_1());
    run!("2", "quasi-morphism defects", criterion_2());
    run!("3", "disc Calabi ratio", criterion_3());
    run!("4", "Calabi additivity", criterion_4());
    run!("5", "autonomous vanishing", criterion_5());
    if want("6") || want("7") {
        let t = Instant::now();
        let (six, seven) = criterion_6_7();
        report("6", "site matrix", t, six);
        report("7", "norm bound growth", t, seven);
    }
    run!("8", "autonomous versus Hofer", criterion_8());
    run!("9", "trace correctness", criterion_9());
    run!("10", "raw average defect", criterion_10());
    run!("11", "determinism", criterion_11());
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
