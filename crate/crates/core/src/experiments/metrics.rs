use serde::Serialize;

use super::table::{fmt, Table};
use crate::dynamics::{annulus_twist, Chart, Isotopy, Profile};
use crate::surface::{Point, SurfaceModel};
use crate::{GgError, Result};

/// An autonomous map and the powers to tabulate.
#[derive(Debug, Clone)]
pub struct MetricCase {
    pub label: String,
    pub iso: Isotopy,
    pub max_power: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRow {
    pub label: String,
    pub n: u32,
    /// Factors in the autonomous decomposition at hand: 1 for a power of
    /// an autonomous map (0 for the identity).
    pub autonomous_witness: u32,
    /// Time-integrated oscillation of the generating Hamiltonian of `h^n`.
    pub hofer_oscillation: f64,
    /// Oscillation of `h` times `n`.
    pub c_n: f64,
    /// Largest displacement of the time-one map over a probe grid.
    pub displacement: f64,
}

impl MetricRow {
    /// The autonomous witness stays at 1 while the Hofer bound reaches
    /// `C n`.
    pub fn diverges(&self) -> bool {
        self.autonomous_witness <= 1 && self.hofer_oscillation >= self.c_n * (1.0 - 1e-9)
    }
}

fn probe_displacement(iso: &Isotopy) -> Result<f64> {
    let model = iso.model();
    let mut worst = 0.0f64;
    for i in 0..24 {
        for j in 0..24 {
            let p = Point::new(-0.95 + 1.9 * i as f64 / 23.0, -0.95 + 1.9 * j as f64 / 23.0);
            let p = if model == SurfaceModel::Torus { Point::new((p.x + 1.0) / 2.0, (p.y + 1.0) / 2.0) } else { p };
            if model.contains(p) {
                worst = worst.max(model.distance(p, iso.time_one(p)?));
            }
        }
    }
    Ok(worst)
}

/// Rows `(autonomous witness, Hofer bound)` for `h^n`, `n = 1..=max_power`.
pub fn metric_comparison(cases: &[MetricCase]) -> Result<Vec<MetricRow>> {
    let mut rows = Vec::new();
    for c in cases {
        if !c.iso.is_autonomous() {
            return Err(GgError::InvalidInput(format!("`{}` is not autonomous", c.label)));
        }
        let osc = c.iso.hofer_oscillation()?;
        for n in 1..=c.max_power {
            let hn = c.iso.power(n as i64);
            let displacement = probe_displacement(&hn)?;
            rows.push(MetricRow {
                label: c.label.clone(),
                n,
                autonomous_witness: if hn.is_identity() { 0 } else { 1 },
                hofer_oscillation: hn.hofer_oscillation()?,
                c_n: osc * n as f64,
                displacement,
            });
        }
    }
    Ok(rows)
}

/// The default family: a zero-flux twist around `a1` on genus 2 whose
/// Hamiltonian reaches `height` on the geodesic, and a small disc twist
/// with oscillation `epsilon / 2`.
pub fn default_metric_family(height: f64, epsilon: f64, max_power: u32) -> Result<Vec<MetricCase>> {
    let collar = Chart::Collar { gen: 0, half_width: 0.5 };
    let big = annulus_twist(SurfaceModel::Genus2, collar, Profile::Bump { amplitude: height })?;
    let disc = Chart::HyperbolicDisc { cx: 0.0, cy: 0.0, radius: 0.5 };
    let small = annulus_twist(SurfaceModel::Genus2, disc, Profile::Bump { amplitude: epsilon / 2.0 })?;
    Ok(vec![
        MetricCase { label: format!("a1 collar bump, H = {height}"), iso: big, max_power },
        MetricCase { label: format!("disc bump, osc = {}", epsilon / 2.0), iso: small, max_power: 1 },
    ])
}

pub fn metric_table(rows: &[MetricRow]) -> Table {
    let mut t = Table::new(
        "autonomous witness versus Hofer bound",
        "aut-hofer",
        &["map", "n", "aut_witness", "hofer_osc", "C*n", "displacement", "diverges"],
    );
    for r in rows {
        t.push(vec![
            r.label.clone(),
            r.n.to_string(),
            r.autonomous_witness.to_string(),
            fmt(r.hofer_oscillation),
            fmt(r.c_n),
            fmt(r.displacement),
            r.diverges().to_string(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_hofer_and_small_map() {
        let fam = default_metric_family(2.0, 0.01, 4).unwrap();
        let rows = metric_comparison(&fam).unwrap();
        assert_eq!(rows.len(), 5);
        for r in &rows[..4] {
            assert_eq!(r.autonomous_witness, 1);
            assert!((r.hofer_oscillation - 2.0 * r.n as f64).abs() < 1e-9, "{r:?}");
            assert!(r.diverges());
            assert!(r.displacement > 0.0);
        }
        assert!(rows[4].hofer_oscillation < 0.01);
        assert!(rows[4].displacement > 0.0);
        assert!(metric_comparison(&[]).unwrap().is_empty());
        assert_eq!(metric_table(&rows).rows.len(), 5);
    }
}
