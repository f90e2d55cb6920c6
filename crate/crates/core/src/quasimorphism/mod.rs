//! Quasi-morphisms on braid and surface-group words: evaluation,
//! homogenization and defect estimation.

mod brooks;
mod rademacher;

use std::fmt;

use serde::Serialize;

pub use brooks::{cyclic_dehn_reduce, greedy_count, BrooksCounter};
pub use rademacher::{rademacher3, translation_number};

use crate::braid_words::{parse_surface_letters, BraidWord, SurfaceGen, SurfaceLoopWord};
use crate::numeric::aitken;
use crate::{GgError, Result};

/// A word in one of the groups the evaluators act on.
#[derive(Debug, Clone, PartialEq)]
pub enum Word {
    Braid(BraidWord),
    Surface(SurfaceLoopWord),
}

impl Word {
    pub fn len(&self) -> usize {
        match self {
            Word::Braid(w) => w.len(),
            Word::Surface(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        match (self, other) {
            (Word::Braid(a), Word::Braid(b)) => Ok(Word::Braid(a.multiply(b)?)),
            (Word::Surface(a), Word::Surface(b)) => Ok(Word::Surface(a.multiply(b)?)),
            _ => Err(GgError::DomainMismatch("cannot multiply braid and surface words".into())),
        }
    }

    pub fn invert(&self) -> Word {
        match self {
            Word::Braid(w) => Word::Braid(w.invert()),
            Word::Surface(w) => Word::Surface(w.invert()),
        }
    }

    pub fn power(&self, k: i64) -> Word {
        match self {
            Word::Braid(w) => Word::Braid(w.power(k)),
            Word::Surface(w) => Word::Surface(w.power(k)),
        }
    }

    /// `u w u^-1`.
    pub fn conjugate(u: &Word, w: &Word) -> Result<Word> {
        u.multiply(w)?.multiply(&u.invert())
    }

    pub fn as_braid(&self) -> Result<&BraidWord> {
        match self {
            Word::Braid(w) => Ok(w),
            Word::Surface(_) => Err(GgError::DomainMismatch("expected a braid word".into())),
        }
    }

    pub fn as_surface(&self) -> Result<&SurfaceLoopWord> {
        match self {
            Word::Surface(w) => Ok(w),
            Word::Braid(_) => Err(GgError::DomainMismatch("expected a surface-group word".into())),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Braid(w) => w.fmt(f),
            Word::Surface(w) => w.fmt(f),
        }
    }
}

/// The group a quasi-morphism is defined on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "group", rename_all = "snake_case")]
pub enum QmDomain {
    /// Full braid group; `n = None` for any strand count.
    Braid { n: Option<u16> },
    /// Pure braids (or braids whose permutation preserves the relevant pair).
    PureBraid,
    /// Surface group of the word's genus.
    SurfaceGroup,
    /// Surface letters treated as free generators.
    FreeGroup,
}

impl QmDomain {
    pub fn accepts_braids(self) -> bool {
        matches!(self, QmDomain::Braid { .. } | QmDomain::PureBraid)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QmKind {
    Linking { i: u16, j: u16 },
    ExponentSum,
    PiCount(SurfaceGen),
    Brooks(BrooksCounter),
    Rademacher3,
    Combination(Vec<(f64, QuasiMorphism)>),
}

/// A named evaluator with its defect metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiMorphism {
    name: String,
    kind: QmKind,
    declared_defect: Option<f64>,
    is_homomorphism: bool,
}

/// Defect bound for non-overlapping Brooks counting on free groups: each of
/// the three pieces in a cancelling product loses or gains at most one copy.
pub const BROOKS_FREE_DEFECT: f64 = 3.0;
/// Declared bound for Brooks counting on Dehn-reduced surface words.
pub const BROOKS_SURFACE_DEFECT: f64 = 4.0;
/// Six times the defect of the translation number.
pub const RADEMACHER_DEFECT: f64 = 6.0;

impl QuasiMorphism {
    /// Linking number of strands `i` and `j` (a homomorphism on pure braids).
    pub fn linking(i: u16, j: u16) -> Result<Self> {
        if i == 0 || j == 0 || i == j {
            return Err(GgError::InvalidInput(format!("bad strand pair {i},{j}")));
        }
        let (i, j) = (i.min(j), i.max(j));
        Ok(Self { name: format!("lk:{i},{j}"), kind: QmKind::Linking { i, j }, declared_defect: Some(0.0), is_homomorphism: true })
    }

    pub fn exponent_sum() -> Self {
        Self { name: "expsum".into(), kind: QmKind::ExponentSum, declared_defect: Some(0.0), is_homomorphism: true }
    }

    /// Signed count of a surface generator.
    pub fn pi_count(gen: SurfaceGen) -> Self {
        Self { name: format!("pi:{}", gen.label()), kind: QmKind::PiCount(gen), declared_defect: Some(0.0), is_homomorphism: true }
    }

    /// Brooks counting for `pattern`; `surface_genus = Some(g)` evaluates on
    /// Dehn-reduced words of the genus-`g` surface group.
    pub fn brooks(pattern: &SurfaceLoopWord, surface_genus: Option<u16>) -> Result<Self> {
        let counter = BrooksCounter::new(pattern.letters(), surface_genus)?;
        Ok(Self::from_counter(counter, pattern.to_string().replace(' ', "")))
    }

    /// Parse the pattern text and build a Brooks counter.
    pub fn brooks_text(pattern: &str, surface_genus: Option<u16>) -> Result<Self> {
        let letters = parse_surface_letters(pattern)?;
        let counter = BrooksCounter::new(&letters, surface_genus)?;
        Ok(Self::from_counter(counter, pattern.replace(' ', "")))
    }

    fn from_counter(counter: BrooksCounter, label: String) -> Self {
        let d = if counter.surface_genus().is_some() { BROOKS_SURFACE_DEFECT } else { BROOKS_FREE_DEFECT };
        Self { name: format!("brooks:{label}"), kind: QmKind::Brooks(counter), declared_defect: Some(d), is_homomorphism: false }
    }

    pub fn rademacher3() -> Self {
        Self {
            name: "rademacher3".into(),
            kind: QmKind::Rademacher3,
            declared_defect: Some(RADEMACHER_DEFECT),
            is_homomorphism: false,
        }
    }

    /// `sum c_k phi_k`.
    pub fn combination(terms: Vec<(f64, QuasiMorphism)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(GgError::InvalidInput("empty combination".into()));
        }
        let braid = terms[0].1.domain().accepts_braids();
        if terms.iter().any(|(_, q)| q.domain().accepts_braids() != braid) {
            return Err(GgError::DomainMismatch("combination mixes braid and surface evaluators".into()));
        }
        let name = terms.iter().map(|(c, q)| format!("{c}*{}", q.name)).collect::<Vec<_>>().join("+");
        let is_homomorphism = terms.iter().all(|(c, q)| q.is_homomorphism || *c == 0.0);
        let declared_defect = terms
            .iter()
            .map(|(c, q)| q.declared_defect.map(|d| c.abs() * d))
            .sum::<Option<f64>>();
        Ok(Self { name, kind: QmKind::Combination(terms), declared_defect, is_homomorphism })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::combination(vec![(c, self.clone())]).expect("single-term combination")
    }

    /// Registry lookup: `lk:i,j`, `expsum`, `brooks:<pattern>`,
    /// `rademacher3`, `pi:<label>`. `genus` is the genus of the surface the
    /// words come from; Brooks counters on genus >= 2 work on Dehn-reduced
    /// words.
    pub fn from_spec(spec: &str, genus: u16) -> Result<Self> {
        let spec = spec.trim();
        let bad = || GgError::Config(format!("unknown quasi-morphism `{spec}`"));
        if spec == "expsum" {
            return Ok(Self::exponent_sum());
        }
        if spec == "rademacher3" {
            return Ok(Self::rademacher3());
        }
        let (head, arg) = spec.split_once(':').ok_or_else(bad)?;
        match head {
            "lk" => {
                let (i, j) = arg.split_once(',').ok_or_else(bad)?;
                let i: u16 = i.trim().parse().map_err(|_| bad())?;
                let j: u16 = j.trim().parse().map_err(|_| bad())?;
                Self::linking(i, j)
            }
            "brooks" => Self::brooks_text(arg, if genus >= 2 { Some(genus) } else { None }),
            "pi" => Ok(Self::pi_count(SurfaceGen::parse_label(arg.trim())?)),
            _ => Err(bad()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &QmKind {
        &self.kind
    }

    pub fn declared_defect(&self) -> Option<f64> {
        self.declared_defect
    }

    pub fn is_homomorphism(&self) -> bool {
        self.is_homomorphism
    }

    pub fn domain(&self) -> QmDomain {
        match &self.kind {
            QmKind::Linking { .. } => QmDomain::PureBraid,
            QmKind::ExponentSum => QmDomain::Braid { n: None },
            QmKind::Rademacher3 => QmDomain::Braid { n: Some(3) },
            QmKind::PiCount(_) => QmDomain::SurfaceGroup,
            QmKind::Brooks(c) => {
                if c.surface_genus().is_some() {
                    QmDomain::SurfaceGroup
                } else {
                    QmDomain::FreeGroup
                }
            }
            QmKind::Combination(t) => t[0].1.domain(),
        }
    }

    /// Whether `evaluate` is already homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        match &self.kind {
            QmKind::Brooks(_) => false,
            QmKind::Combination(t) => t.iter().all(|(_, q)| q.is_homogeneous()),
            _ => true,
        }
    }

    /// Check that words of this shape can be evaluated.
    pub fn check_input(&self, braid: bool, n_strands: u16) -> Result<()> {
        let d = self.domain();
        if braid != d.accepts_braids() {
            return Err(GgError::DomainMismatch(format!(
                "{} does not act on {} words",
                self.name,
                if braid { "braid" } else { "surface-group" }
            )));
        }
        match &self.kind {
            QmKind::Linking { j, .. } if *j > n_strands => {
                Err(GgError::DomainMismatch(format!("{} needs at least {j} strands", self.name)))
            }
            QmKind::Rademacher3 if n_strands != 3 => Err(GgError::DomainMismatch("rademacher3 needs n = 3".into())),
            QmKind::Combination(t) => t.iter().try_for_each(|(_, q)| q.check_input(braid, n_strands)),
            _ => Ok(()),
        }
    }

    pub fn evaluate(&self, w: &Word) -> Result<f64> {
        match &self.kind {
            QmKind::Linking { i, j } => w.as_braid()?.linking_number(*i, *j),
            QmKind::ExponentSum => Ok(w.as_braid()?.exponent_sum() as f64),
            QmKind::Rademacher3 => rademacher3(w.as_braid()?),
            QmKind::PiCount(g) => Ok(w.as_surface()?.pi_count(*g) as f64),
            QmKind::Brooks(c) => c.evaluate(w.as_surface()?),
            QmKind::Combination(t) => {
                let mut acc = 0.0;
                for (c, q) in t {
                    acc += c * q.evaluate(w)?;
                }
                Ok(acc)
            }
        }
    }

    /// The homogenized value `lim phi(w^p)/p`, computed exactly.
    pub fn evaluate_homogenized(&self, w: &Word) -> Result<f64> {
        match &self.kind {
            QmKind::Brooks(c) => c.homogenized(w.as_surface()?),
            QmKind::Linking { i, j } => {
                let b = w.as_braid()?;
                let order = permutation_order(&b.permutation()) as i64;
                Ok(b.power(order).linking_number(*i, *j)? / order as f64)
            }
            QmKind::Combination(t) => {
                let mut acc = 0.0;
                for (c, q) in t {
                    acc += c * q.evaluate_homogenized(w)?;
                }
                Ok(acc)
            }
            _ => self.evaluate(w),
        }
    }
}

fn permutation_order(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut order = 1usize;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        order = lcm(order, len);
    }
    order
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Default power schedule for word-level homogenization.
pub const DEFAULT_SCHEDULE: [u32; 6] = [1, 2, 4, 8, 16, 32];

/// Raw values `phi(w^p)/p` for a power schedule and their extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomogenizationReport {
    pub powers: Vec<u32>,
    pub values: Vec<f64>,
    pub limit: f64,
    pub converged: bool,
    pub error_bound: f64,
}

/// Aitken-extrapolated limit of a sequence indexed by a geometric schedule;
/// returns `(limit, last change between successive extrapolants)`.
pub fn extrapolate(values: &[f64]) -> (f64, f64) {
    match values.len() {
        0 => (0.0, f64::INFINITY),
        1 => (values[0], f64::INFINITY),
        2 => (values[1], (values[1] - values[0]).abs()),
        n => {
            let ext: Vec<f64> = (2..n).map(|k| aitken(values[k - 2], values[k - 1], values[k])).collect();
            let last = *ext.last().unwrap();
            let change = if ext.len() >= 2 { (last - ext[ext.len() - 2]).abs() } else { (values[n - 1] - values[n - 2]).abs() };
            (last, change)
        }
    }
}

/// Word-level homogenization of `qm` at `w`.
pub fn homogenize(qm: &QuasiMorphism, w: &Word, schedule: &[u32]) -> Result<HomogenizationReport> {
    if schedule.is_empty() || schedule.windows(2).any(|p| p[1] <= p[0]) || schedule[0] == 0 {
        return Err(GgError::InvalidInput("power schedule must be positive and increasing".into()));
    }
    let mut values = Vec::with_capacity(schedule.len());
    for &p in schedule {
        values.push(qm.evaluate(&w.power(p as i64))? / p as f64);
    }
    let all_equal = values.iter().all(|v| *v == values[0]);
    let (limit, change) = if all_equal { (values[0], 0.0) } else { extrapolate(&values) };
    let p_max = *schedule.last().unwrap() as f64;
    let error_bound = match qm.declared_defect {
        Some(d) => d / p_max,
        None => change,
    };
    Ok(HomogenizationReport { powers: schedule.to_vec(), values, limit, converged: change < 1e-9, error_bound })
}

/// Largest observed `|phi(uv) - phi(u) - phi(v)|` over sampled pairs; a lower
/// bound for the defect.
pub fn defect_estimate<F>(qm: &QuasiMorphism, trials: usize, mut sampler: F) -> Result<f64>
where
    F: FnMut() -> (Word, Word),
{
    if trials == 0 {
        return Err(GgError::InvalidInput("trials must be >= 1".into()));
    }
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let (u, v) = sampler();
        let uv = u.multiply(&v)?;
        let d = (qm.evaluate(&uv)? - qm.evaluate(&u)? - qm.evaluate(&v)?).abs();
        worst = worst.max(d);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugationReport {
    pub max_deviation: f64,
    pub conjugators: usize,
}

/// `max |phi_bar(g w g^-1) - phi_bar(w)|` over the conjugators.
pub fn conjugation_invariance_check(qm: &QuasiMorphism, w: &Word, conjugators: &[Word]) -> Result<ConjugationReport> {
    let base = qm.evaluate_homogenized(w)?;
    let mut worst = 0.0f64;
    for g in conjugators {
        let v = qm.evaluate_homogenized(&Word::conjugate(g, w)?)?;
        worst = worst.max((v - base).abs());
    }
    Ok(ConjugationReport { max_deviation: worst, conjugators: conjugators.len() })
}
