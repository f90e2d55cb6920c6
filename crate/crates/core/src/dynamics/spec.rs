//! JSON description of isotopies.
//!
//! ```json
//! {"model": "disc", "segments": [
//!   {"kind": "hamiltonian", "expr": "(1-x^2-y^2)^2*x", "duration": 1},
//!   {"kind": "twist", "chart": {"kind": "disc", "cx": 0, "cy": 0, "radius": 0.5},
//!    "profile": {"kind": "plateau", "turns": 1, "inner": 0, "outer": 0.05}},
//!   {"kind": "braid", "word": "s1^2"}
//! ]}
//! ```

use serde::{Deserialize, Serialize};

use super::chart::{Chart, Profile};
use super::constructions::{figure_eight_pair, realize_pure_braid, word_diffeo, FigureEightParams};
use super::expr::{Expression, GridFunction, ScalarField};
use super::{Flow, HamiltonianField, Isotopy, Segment};
use crate::braid_words::parse_mixed_word;
use crate::surface::SurfaceModel;
use crate::{GgError, Result};

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentSpec {
    Identity {
        #[serde(default = "one")]
        duration: f64,
    },
    Hamiltonian {
        #[serde(default)]
        expr: Option<String>,
        #[serde(default)]
        grid: Option<GridFunction>,
        #[serde(default = "one")]
        duration: f64,
    },
    Twist {
        chart: Chart,
        profile: Profile,
        #[serde(default = "one")]
        duration: f64,
    },
    Translation {
        dx: f64,
        dy: f64,
        #[serde(default = "one")]
        duration: f64,
    },
    /// A realized pure braid (or single-strand point push); `strands`
    /// defaults to the largest index in the word.
    Braid {
        word: String,
        #[serde(default)]
        strands: Option<u16>,
    },
    /// A word in the two twists of a genus-2 figure-eight site.
    FigureEight {
        site: u8,
        word: String,
        #[serde(default)]
        half_width: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotopySpec {
    pub model: String,
    pub segments: Vec<SegmentSpec>,
    #[serde(default)]
    pub label: Option<String>,
    /// Iterate the whole isotopy this many times (negative: inverse).
    #[serde(default)]
    pub power: Option<i64>,
}

fn strands_in(word: &str) -> u16 {
    // largest strand index mentioned by s_i, A_{i,j} or @k
    let mut best = 1;
    for tok in word.split_whitespace() {
        let body = tok.split('^').next().unwrap_or("");
        let nums: Vec<u16> = body
            .split(|c: char| !c.is_ascii_digit())
            .filter(|s| !s.is_empty())
            .filter_map(|s| s.parse().ok())
            .collect();
        if let Some(b) = body.strip_prefix('s') {
            if let Ok(i) = b.parse::<u16>() {
                best = best.max(i + 1);
            }
        } else if body.starts_with('A') {
            best = best.max(nums.iter().copied().max().unwrap_or(1));
        } else if let Some((_, s)) = body.split_once('@') {
            best = best.max(s.parse().unwrap_or(1));
        }
    }
    best
}

impl SegmentSpec {
    fn build(&self, model: SurfaceModel) -> Result<Isotopy> {
        let single = |flow: Flow, d: f64| Isotopy::new(model, vec![Segment::new(flow, d)]);
        match self {
            SegmentSpec::Identity { duration } => single(Flow::Identity, *duration),
            SegmentSpec::Hamiltonian { expr, grid, duration } => {
                let field = match (expr, grid) {
                    (Some(e), None) => ScalarField::Expr(Expression::parse(e)?),
                    (None, Some(g)) => {
                        g.validate()?;
                        ScalarField::Grid(g.clone())
                    }
                    _ => return Err(GgError::Config("hamiltonian segment needs exactly one of `expr`, `grid`".into())),
                };
                single(Flow::Hamiltonian(HamiltonianField::new(field)), *duration)
            }
            SegmentSpec::Twist { chart, profile, duration } => {
                single(Flow::Twist { chart: *chart, profile: profile.clone() }, *duration)
            }
            SegmentSpec::Translation { dx, dy, duration } => single(Flow::Translation { dx: *dx, dy: *dy }, *duration),
            SegmentSpec::Braid { word, strands } => {
                let n = strands.unwrap_or_else(|| strands_in(word));
                let w = parse_mixed_word(word, n, model.genus())?;
                Ok(realize_pure_braid(&w, model)?.0)
            }
            SegmentSpec::FigureEight { site, word, half_width } => {
                if model != SurfaceModel::Genus2 {
                    return Err(GgError::NoChart("figure-eight sites live on genus 2".into()));
                }
                let mut params = FigureEightParams::default();
                if let Some(h) = half_width {
                    params.half_width = *h;
                }
                let s = figure_eight_pair(*site, params)?;
                word_diffeo(word, &s.h, &s.g)
            }
        }
    }
}

impl IsotopySpec {
    pub fn build(&self) -> Result<Isotopy> {
        let model = SurfaceModel::from_key(&self.model)?;
        let mut iso = Isotopy::identity(model);
        for s in &self.segments {
            iso = iso.then(&s.build(model)?)?;
        }
        if let Some(p) = self.power {
            iso = iso.power(p);
        }
        if let Some(l) = &self.label {
            iso = iso.with_label(l.clone());
        }
        Ok(iso)
    }
}

pub fn isotopy_from_json(text: &str) -> Result<Isotopy> {
    let spec: IsotopySpec = serde_json::from_str(text).map_err(|e| GgError::Parse(format!("isotopy JSON: {e}")))?;
    spec.build()
}
