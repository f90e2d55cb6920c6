use serde::Serialize;

use super::table::{fmt, Table};
use crate::dynamics::{annulus_twist, Chart, FigureEightParams, Isotopy, Profile};
use crate::gg_estimator::{phi_n_homogenized, EstimatorOptions};
use crate::quasimorphism::{QuasiMorphism, Word};
use crate::surface::SurfaceModel;
use crate::{GgError, Result};

/// One row of the vanishing suite.
#[derive(Debug, Clone)]
pub struct VanishingCase {
    pub label: String,
    pub iso: Isotopy,
    pub n: usize,
    pub qm: QuasiMorphism,
    /// Classes traced by the flow's invariant curves.
    pub level_classes: Vec<Word>,
    /// `false` marks a negative control, expected to stay away from zero.
    pub expect_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingRow {
    pub label: String,
    pub qm: String,
    pub value: f64,
    pub std_error: f64,
    pub error_bound: f64,
    pub max_power: u32,
    pub expect_zero: bool,
    /// `|value| < 3 sigma + error_bound` for expected zeros, `|value| >= 10
    /// sigma` for negative controls.
    pub passed: bool,
}

/// Full-turn plateau twist on the collar of `a1` of the genus-2 model,
/// the same map as the first twist of figure-eight site 1.
pub fn alpha_twist() -> Result<Isotopy> {
    let p = FigureEightParams::default();
    let chart = Chart::Collar { gen: 0, half_width: p.half_width };
    let um = chart.u_max();
    let profile = Profile::Plateau { turns: 1.0, inner: p.ramp * um, outer: (1.0 - p.ramp) * um };
    Ok(annulus_twist(SurfaceModel::Genus2, chart, profile)?.with_label("a1 collar twist"))
}

/// Brooks pattern with no copies in any power of `a1`.
pub const ALPHA_FREE_PATTERN: &str = "a1 a1 b1 a1^-1 a1^-1 b1^-1";

/// Identity and the `a1` twist against a Brooks counter that misses
/// `a1`-powers, plus the `a1` generator count as a negative control.
pub fn default_vanishing_cases() -> Result<Vec<VanishingCase>> {
    let a1 = Word::Surface(crate::braid_words::parse_surface_word("a1", 2)?);
    let brooks = QuasiMorphism::brooks_text(ALPHA_FREE_PATTERN, Some(2))?;
    let twist = alpha_twist()?;
    let case = |label: &str, iso: &Isotopy, qm: &QuasiMorphism, expect_zero| VanishingCase {
        label: label.into(),
        iso: iso.clone(),
        n: 1,
        qm: qm.clone(),
        level_classes: vec![a1.clone()],
        expect_zero,
    };
    Ok(vec![
        case("identity", &Isotopy::identity(SurfaceModel::Genus2), &brooks, true),
        case("a1 collar twist", &twist, &brooks, true),
        case("a1 collar twist", &twist, &QuasiMorphism::pi_count(crate::braid_words::SurfaceGen::alpha(1)), false),
    ])
}

/// Homogenized averages of quasi-morphisms on autonomous flows. Each
/// expected zero must use a quasi-morphism whose homogenization vanishes on
/// every listed level class.
pub fn autonomous_vanishing_suite(
    cases: &[VanishingCase],
    powers: &[u32],
    samples: usize,
    seed: u64,
    opts: &EstimatorOptions,
) -> Result<Vec<VanishingRow>> {
    let mut rows = Vec::with_capacity(cases.len());
    for c in cases {
        if !c.iso.is_autonomous() {
            return Err(GgError::InvalidInput(format!("`{}` is not autonomous", c.label)));
        }
        if c.expect_zero {
            for w in &c.level_classes {
                if c.qm.evaluate_homogenized(w)? != 0.0 {
                    return Err(GgError::InvalidInput(format!(
                        "{} does not vanish on the level classes of `{}`",
                        c.qm.name(),
                        c.label
                    )));
                }
            }
        }
        let e = phi_n_homogenized(&c.qm, &c.iso, c.n, powers, samples, seed, opts)?;
        let h = e.homogenization.as_ref().expect("homogenized estimates carry their series");
        let passed = if c.expect_zero {
            e.value.abs() < 3.0 * e.std_error + h.error_bound
        } else {
            e.value.abs() >= 10.0 * e.std_error
        };
        rows.push(VanishingRow {
            label: c.label.clone(),
            qm: c.qm.name().to_string(),
            value: e.value,
            std_error: e.std_error,
            error_bound: h.error_bound,
            max_power: e.power,
            expect_zero: c.expect_zero,
            passed,
        });
    }
    Ok(rows)
}

pub fn vanishing_table(rows: &[VanishingRow]) -> Table {
    let mut t = Table::new(
        "autonomous vanishing",
        "Aut-zero",
        &["flow", "qm", "value", "std_error", "error_bound", "p_max", "expect_zero", "passed"],
    );
    for r in rows {
        t.push(vec![
            r.label.clone(),
            r.qm.clone(),
            fmt(r.value),
            fmt(r.std_error),
            fmt(r.error_bound),
            r.max_power.to_string(),
            r.expect_zero.to_string(),
            r.passed.to_string(),
        ]);
    }
    t
}
