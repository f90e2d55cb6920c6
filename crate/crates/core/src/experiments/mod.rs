//! Scripted runs of the checkable constructions: the site matrix of
//! figure-eight diffeomorphisms against matched Brooks quasi-morphisms,
//! norm bounds derived from it, vanishing on autonomous flows, and the
//! Hofer versus autonomous comparison.

mod metrics;
mod table;
mod vanishing;

pub use metrics::{default_metric_family, metric_comparison, metric_table, MetricCase, MetricRow};
pub use table::Table;
pub use vanishing::{
    alpha_twist, autonomous_vanishing_suite, default_vanishing_cases, vanishing_table, VanishingCase, VanishingRow,
    ALPHA_FREE_PATTERN,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::braid_words::{SurfaceGen, SurfaceLetter, SurfaceLoopWord};
use crate::dynamics::{figure_eight_pair, word_diffeo, FigureEightParams, FigureEightSite, Isotopy};
use crate::gg_estimator::{phi_n_homogenized_multi, EstimatorOptions};
use crate::numeric::mean_std;
use crate::quasimorphism::QuasiMorphism;
use crate::surface::SurfaceModel;
use crate::{GgError, Result};
use table::fmt;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingConfig {
    /// Figure-eight sites on the genus-2 model (1 and/or 2).
    pub sites: Vec<u8>,
    /// Word in the two twists of a site, letters `a b A B` or `a^k`.
    pub word: String,
    pub params: FigureEightParams,
    pub powers: Vec<u32>,
    pub samples: usize,
    pub seed: u64,
    /// Uniform points for the overlap area and the support checks.
    pub area_samples: usize,
    pub epsilon: f64,
    /// Replace each `f_j` by `h_j f_j h_j^-1`.
    pub conjugate: bool,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self {
            sites: vec![1, 2],
            word: "a^2 b a^-2 b^-1".into(),
            params: FigureEightParams::default(),
            powers: vec![1, 2, 4, 8],
            samples: 2000,
            seed: 1,
            area_samples: 200_000,
            epsilon: 0.1,
            conjugate: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingExperiment {
    pub m: usize,
    pub sites: Vec<u8>,
    pub diffeos: Vec<String>,
    pub qms: Vec<String>,
    /// `matrix[i][j]` is the homogenized average of quasi-morphism `i` on
    /// diffeomorphism `j`, divided by `area`.
    pub matrix: Vec<Vec<f64>>,
    pub std_errors: Vec<Vec<f64>>,
    /// Unnormalized values.
    pub raw: Vec<Vec<f64>>,
    /// Area of the region where both twists of a site are full turns.
    pub area: f64,
    pub area_std_error: f64,
    /// Declared defect of each counting function on the group.
    pub defects: Vec<f64>,
    /// Defect bound of each normalized homogenized average on the
    /// diffeomorphism group: `2 vol D / area`.
    pub normalized_defects: Vec<f64>,
    pub determinant: f64,
    pub epsilon: f64,
    /// Cells within `epsilon + 3 sigma` of the identity matrix.
    pub near_identity: bool,
    /// Cells whose interval is too wide to decide the `epsilon` test.
    pub undecided_cells: Vec<(usize, usize)>,
    pub max_commutator_displacement: f64,
    /// Sampled points in the supports of two different sites.
    pub support_overlap_points: usize,
    /// Twist primitives composed in each `f_i`.
    pub factor_counts: Vec<usize>,
    /// The counting functions are matched constructively to the site words.
    pub constructive: bool,
    pub samples: usize,
    pub seed: u64,
}

/// The word `pattern` with `a`, `b` read as the generators of handle
/// `site`.
pub fn site_word(pattern: &str, site: u8) -> Result<SurfaceLoopWord> {
    let bad = || GgError::Parse(format!("bad diffeomorphism word `{pattern}`"));
    let mut letters = Vec::new();
    for tok in pattern.split_whitespace() {
        let steps: Vec<(char, i64)> = match tok.split_once('^') {
            Some((b, e)) if b.chars().count() == 1 => vec![(b.chars().next().unwrap(), e.parse().map_err(|_| bad())?)],
            Some(_) => return Err(bad()),
            None => tok.chars().map(|c| (c, 1)).collect(),
        };
        for (c, e) in steps {
            let (gen, e) = match c {
                'a' => (SurfaceGen::alpha(site as u16), e),
                'A' => (SurfaceGen::alpha(site as u16), -e),
                'b' => (SurfaceGen::beta(site as u16), e),
                'B' => (SurfaceGen::beta(site as u16), -e),
                _ => return Err(bad()),
            };
            letters.extend(std::iter::repeat_n(SurfaceLetter::new(gen, e < 0), e.unsigned_abs() as usize));
        }
    }
    SurfaceLoopWord::new(2, letters)?.reduce()
}

fn factor_count(pattern: &str) -> usize {
    pattern
        .split_whitespace()
        .map(|t| match t.split_once('^') {
            Some((_, e)) => e.parse::<i64>().map(|e| e.unsigned_abs() as usize).unwrap_or(0),
            None => t.len(),
        })
        .sum()
}

fn in_plateau(site: &FigureEightSite, p: num_complex::Complex64) -> bool {
    site.inventory.iter().all(|inv| {
        inv.chart.coords(p).is_some_and(|c| c.u >= inv.plateau.0 && c.u <= inv.plateau.1)
    })
}

fn in_support(site: &FigureEightSite, p: num_complex::Complex64) -> bool {
    site.inventory.iter().any(|inv| inv.chart.coords(p).is_some())
}

/// The matrix of matched Brooks averages against figure-eight
/// diffeomorphisms on the genus-2 model.
pub fn run_embedding(cfg: &EmbeddingConfig, opts: &EstimatorOptions) -> Result<EmbeddingExperiment> {
    let m = cfg.sites.len();
    if m == 0 {
        return Err(GgError::InvalidInput("at least one site is needed".into()));
    }
    let mut seen = cfg.sites.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != m {
        return Err(GgError::InvalidInput("sites must be distinct".into()));
    }
    let model = SurfaceModel::Genus2;
    let sites: Vec<FigureEightSite> = cfg.sites.iter().map(|&s| figure_eight_pair(s, cfg.params)).collect::<Result<_>>()?;
    let mut diffeos = Vec::with_capacity(m);
    let mut qms = Vec::with_capacity(m);
    for s in &sites {
        let f = word_diffeo(&cfg.word, &s.h, &s.g)?;
        let f = if cfg.conjugate { Isotopy::conjugate(&s.h, &f)?.with_label(format!("conj({})", f.label)) } else { f };
        diffeos.push(f);
        let w = site_word(&cfg.word, s.site)?;
        if w.is_empty() {
            return Err(GgError::InvalidInput("site word is trivial".into()));
        }
        qms.push(QuasiMorphism::brooks(&w, Some(2))?);
    }

    // overlap area and support disjointness from one uniform sample
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_a5ea);
    let vol = model.total_area();
    let mut hits = vec![Vec::with_capacity(cfg.area_samples); m];
    let mut overlap = 0;
    for _ in 0..cfg.area_samples {
        let p = model.sample_point(&mut rng).c();
        for (i, s) in sites.iter().enumerate() {
            hits[i].push(if in_plateau(s, p) { vol } else { 0.0 });
        }
        if sites.iter().filter(|s| in_support(s, p)).count() > 1 {
            overlap += 1;
        }
    }
    if overlap > 0 {
        return Err(GgError::Support(format!("{overlap} sampled points lie in two site supports")));
    }
    let areas: Vec<(f64, f64)> = hits
        .iter()
        .map(|h| {
            let (mu, sd) = mean_std(h);
            (mu, sd / (h.len() as f64).sqrt())
        })
        .collect();
    // the sites are congruent; pool their estimates
    let area = areas.iter().map(|a| a.0).sum::<f64>() / m as f64;
    let area_se = (areas.iter().map(|a| a.1 * a.1).sum::<f64>()).sqrt() / m as f64;
    if area <= 0.0 {
        return Err(GgError::Support("the twist plateaus do not overlap".into()));
    }

    let mut max_disp = 0.0f64;
    if m > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xc0ff_ee);
        let pts: Vec<_> = (0..64).map(|_| model.sample_point(&mut rng)).collect();
        for i in 0..m {
            for j in i + 1..m {
                let ij = diffeos[i].then(&diffeos[j])?;
                let ji = diffeos[j].then(&diffeos[i])?;
                for &p in &pts {
                    max_disp = max_disp.max(model.distance(ij.time_one(p)?, ji.time_one(p)?));
                }
            }
        }
    }

    let mut raw = vec![vec![0.0; m]; m];
    let mut raw_se = vec![vec![0.0; m]; m];
    for (j, f) in diffeos.iter().enumerate() {
        let est = phi_n_homogenized_multi(&qms, f, 1, &cfg.powers, cfg.samples, cfg.seed, opts)?;
        for (i, e) in est.iter().enumerate() {
            raw[i][j] = e.value;
            raw_se[i][j] = e.std_error;
        }
    }
    let matrix: Vec<Vec<f64>> = raw.iter().map(|r| r.iter().map(|v| v / area).collect()).collect();
    let std_errors: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| ((raw_se[i][j] / area).powi(2) + (raw[i][j] * area_se / (area * area)).powi(2)).sqrt())
                .collect()
        })
        .collect();
    let mut near = true;
    let mut undecided = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (matrix[i][j] - target).abs();
            if dev >= cfg.epsilon + 3.0 * std_errors[i][j] {
                near = false;
            }
            if 3.0 * std_errors[i][j] >= cfg.epsilon {
                undecided.push((i, j));
            }
        }
    }
    let defects: Vec<f64> = qms.iter().map(|q| q.declared_defect().unwrap_or(0.0)).collect();
    Ok(EmbeddingExperiment {
        m,
        sites: cfg.sites.clone(),
        diffeos: diffeos.iter().map(|d| d.label.clone()).collect(),
        qms: qms.iter().map(|q| q.name().to_string()).collect(),
        determinant: determinant(&matrix),
        normalized_defects: defects.iter().map(|d| 2.0 * vol * d / area).collect(),
        defects,
        matrix,
        std_errors,
        raw,
        area,
        area_std_error: area_se,
        epsilon: cfg.epsilon,
        near_identity: near,
        undecided_cells: undecided,
        max_commutator_displacement: max_disp,
        support_overlap_points: overlap,
        factor_counts: vec![factor_count(&cfg.word) * if cfg.conjugate { 3 } else { 1 }; m],
        constructive: true,
        samples: cfg.samples,
        seed: cfg.seed,
    })
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

impl EmbeddingExperiment {
    pub fn table(&self) -> Table {
        let mut headers = vec!["qm \\ diffeo".to_string()];
        headers.extend(self.sites.iter().map(|s| format!("f{s}")));
        let mut t = Table { title: "site matrix".into(), tag: "delta-ij".into(), headers, rows: Vec::new() };
        for i in 0..self.m {
            let mut row = vec![self.qms[i].clone()];
            row.extend((0..self.m).map(|j| format!("{} ± {}", fmt(self.matrix[i][j]), fmt(self.std_errors[i][j]))));
            t.rows.push(row);
        }
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormTag {
    Autonomous,
    Fragmentation,
    HoferOscillation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormBoundReport {
    pub exponents: Vec<i64>,
    pub norm: NormTag,
    /// `max_i |sum_j d_j M[i][j]| / D_i` with the normalized defects.
    pub lower: f64,
    /// `sum |d_i| / (m max_i D_i)`, valid when `M` is close to the identity.
    pub lower_uniform: f64,
    /// Factor count per site times `sum |d_i|`; `None` when the norm has
    /// no computable upper bound for these maps.
    pub upper: Option<f64>,
    /// A zero defect makes the ratio meaningless (homomorphism case).
    pub unbounded_witness: bool,
}

/// Norm bounds for `prod_j f_j^{d_j}` read off the site matrix. The `f_j`
/// commute and the averages are homogeneous, so their values on the
/// product are linear in `d`.
pub fn norm_lower_bound(exp: &EmbeddingExperiment, d: &[i64], norm: NormTag) -> Result<NormBoundReport> {
    if d.len() != exp.m {
        return Err(GgError::InvalidInput(format!("expected {} exponents, got {}", exp.m, d.len())));
    }
    let zero_defect = exp.normalized_defects.iter().any(|&x| x == 0.0);
    let mut lower = 0.0f64;
    for i in 0..exp.m {
        let v: f64 = (0..exp.m).map(|j| d[j] as f64 * exp.matrix[i][j]).sum();
        if exp.normalized_defects[i] > 0.0 {
            lower = lower.max(v.abs() / exp.normalized_defects[i]);
        }
    }
    let total: f64 = d.iter().map(|x| x.unsigned_abs() as f64).sum();
    let dmax = exp.normalized_defects.iter().copied().fold(0.0, f64::max);
    let lower_uniform = if dmax > 0.0 { total / (exp.m as f64 * dmax) } else { 0.0 };
    let upper = match norm {
        NormTag::Autonomous | NormTag::Fragmentation => {
            Some(exp.factor_counts.iter().zip(d).map(|(&c, &x)| c as f64 * x.unsigned_abs() as f64).sum())
        }
        // the twists carry flux, so there is no Hofer bound for them
        NormTag::HoferOscillation => None,
    };
    Ok(NormBoundReport { exponents: d.to_vec(), norm, lower, lower_uniform, upper, unbounded_witness: zero_defect })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fake(m: usize) -> EmbeddingExperiment {
        EmbeddingExperiment {
            m,
            sites: (1..=m as u8).collect(),
            diffeos: vec![String::new(); m],
            qms: vec![String::new(); m],
            matrix: (0..m).map(|i| (0..m).map(|j| if i == j { 0.97 } else { 0.02 }).collect()).collect(),
            std_errors: vec![vec![0.01; m]; m],
            raw: vec![vec![0.0; m]; m],
            area: 1.0,
            area_std_error: 0.0,
            defects: vec![4.0; m],
            normalized_defects: vec![8.0; m],
            determinant: 0.0,
            epsilon: 0.1,
            near_identity: true,
            undecided_cells: vec![],
            max_commutator_displacement: 0.0,
            support_overlap_points: 0,
            factor_counts: vec![6; m],
            constructive: true,
            samples: 0,
            seed: 0,
        }
    }

    #[test]
    fn site_words() {
        assert_eq!(site_word("a^2 b a^-2 b^-1", 2).unwrap().to_string(), site_word("aabAAB", 2).unwrap().to_string());
        assert_eq!(site_word("abAB", 1).unwrap(), crate::braid_words::parse_surface_word("a1 b1 a1^-1 b1^-1", 2).unwrap());
        assert!(site_word("abc", 1).is_err());
        assert_eq!(factor_count("a^2 b a^-2 b^-1"), 6);
        assert_eq!(factor_count("abAB"), 4);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[vec![2.0]]), 2.0);
        assert!((determinant(&[vec![0.0, 1.0], vec![1.0, 0.0]]) + 1.0).abs() < 1e-15);
        assert!((determinant(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0], vec![7.0, 8.0, 10.0]]) + 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_exponents_give_zero() {
        let r = norm_lower_bound(&fake(2), &[0, 0], NormTag::Autonomous).unwrap();
        assert_eq!((r.lower, r.upper), (0.0, Some(0.0)));
        assert!(norm_lower_bound(&fake(2), &[1], NormTag::Autonomous).is_err());
    }

    proptest! {
        #[test]
        fn bounds_are_ordered_and_homogeneous(d1 in -50i64..50, d2 in -50i64..50, k in 1i64..5) {
            let e = fake(2);
            let r = norm_lower_bound(&e, &[d1, d2], NormTag::Fragmentation).unwrap();
            prop_assert!(r.lower <= r.upper.unwrap() + 1e-12);
            let s = norm_lower_bound(&e, &[k * d1, k * d2], NormTag::Fragmentation).unwrap();
            prop_assert!((s.lower - k as f64 * r.lower).abs() <= 1e-9 * (1.0 + s.lower));
            prop_assert!((s.upper.unwrap() - k as f64 * r.upper.unwrap()).abs() < 1e-9);
        }
    }
}
