//! The `ggqm` command line.

mod config;

pub use config::{ExperimentConfig, RunConfig, DEFAULT_SAMPLES, DEFAULT_SEED};

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::spec::isotopy_from_json;
use crate::dynamics::{FigureEightParams, Isotopy};
use crate::experiments::{
    default_metric_family, default_vanishing_cases, metric_comparison, metric_table, norm_lower_bound, run_embedding,
    vanishing_table, autonomous_vanishing_suite, EmbeddingConfig, NormTag, Table,
};
use crate::gg_estimator::{calabi_disc, calabi_surface, phi_n_homogenized_multi, phi_n_multi, EstimatorOptions, DEFAULT_POWERS};
use crate::quasimorphism::QuasiMorphism;
use crate::surface::{Point, SurfaceModel};
use crate::trace::{build_loops, default_basepoints, dump_json, trace_word, TraceOptions};
use crate::{GgError, Result};

#[derive(Debug, Parser)]
#[command(name = "ggqm", version, about = "Quasi-morphism averages of surface isotopies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo average of quasi-morphisms over traced configurations.
    Estimate(CommonArgs),
    /// Trace one configuration and print its braid or loop classes.
    Trace {
        #[command(flatten)]
        common: CommonArgs,
        /// Write the sampled loops and crossings as JSON.
        #[arg(long)]
        dump_trace: Option<PathBuf>,
    },
    /// Calabi invariant (disc) or generator-count vector (closed models).
    Calabi(CommonArgs),
    /// Scripted experiments.
    Experiment {
        #[arg(value_enum)]
        which: Which,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Quick internal consistency checks.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Embedding,
    Vanishing,
    Metrics,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Model key, used when no isotopy file is given.
    #[arg(long)]
    pub model: Option<String>,
    /// Isotopy JSON file.
    #[arg(long)]
    pub isotopy: Option<PathBuf>,
    /// Quasi-morphism spec (repeatable), e.g. `lk:1,2`, `brooks:a1 b1`.
    #[arg(long)]
    pub qm: Vec<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated power schedule, e.g. `1,2,4,8`.
    #[arg(long, value_delimiter = ',')]
    pub powers: Option<Vec<u32>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
}

impl CommonArgs {
    /// File values overlaid with flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let base = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            model: self.model.clone(),
            isotopy: self.isotopy.clone(),
            qm: self.qm.clone(),
            n: self.n,
            samples: self.samples,
            seed: self.seed,
            powers: self.powers.clone(),
            output_dir: self.out.clone(),
            workers: self.workers,
            ..Default::default()
        };
        let cfg = base.overlay(flags);
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub timestamp: u64,
    pub config_hash: String,
    pub operation: String,
    /// The statement the payload checks, e.g. `Calabi-disc`.
    pub tag: String,
    pub payload: serde_json::Value,
}

impl ResultRecord {
    fn new(cfg: &RunConfig, operation: &str, tag: &str, payload: impl Serialize) -> Result<Self> {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Ok(Self {
            timestamp,
            config_hash: cfg.hash()?,
            operation: operation.into(),
            tag: tag.into(),
            payload: serde_json::to_value(payload).map_err(|e| GgError::Io(e.to_string()))?,
        })
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

fn options(cfg: &RunConfig) -> EstimatorOptions {
    EstimatorOptions { workers: cfg.workers, ..Default::default() }
}

fn load_isotopy(cfg: &RunConfig) -> Result<Isotopy> {
    match &cfg.isotopy {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| GgError::Config(format!("{}: {e}", p.display())))?;
            let iso = isotopy_from_json(&text)?;
            if let Some(m) = &cfg.model {
                if SurfaceModel::from_key(m)? != iso.model() {
                    return Err(GgError::Config(format!("model `{m}` differs from the isotopy's {}", iso.model().key())));
                }
            }
            Ok(iso)
        }
        None => Ok(Isotopy::identity(SurfaceModel::from_key(cfg.model.as_deref().unwrap_or("disc"))?)),
    }
}

fn persist(cfg: &RunConfig, rec: &ResultRecord, tables: &[Table]) -> Result<()> {
    let Some(dir) = &cfg.output_dir else {
        return Ok(());
    };
    std::fs::create_dir_all(dir)?;
    let mut f = std::fs::OpenOptions::new().create(true).append(true).open(dir.join("results.jsonl"))?;
    writeln!(f, "{}", rec.to_line())?;
    for t in tables {
        let stem = format!("{}-{}", rec.operation, t.tag);
        std::fs::write(dir.join(format!("{stem}.md")), t.to_markdown())?;
        std::fs::write(dir.join(format!("{stem}.csv")), t.to_csv()?)?;
    }
    Ok(())
}

pub fn cmd_estimate(cfg: &RunConfig) -> Result<ResultRecord> {
    let iso = load_isotopy(cfg)?;
    let model = iso.model();
    let n = cfg.n.unwrap_or(if model.is_planar() { 2 } else { 1 });
    let specs = if cfg.qm.is_empty() {
        vec![if model.is_planar() { "lk:1,2".to_string() } else { "pi:a1".to_string() }]
    } else {
        cfg.qm.clone()
    };
    let qms: Vec<QuasiMorphism> = specs.iter().map(|s| QuasiMorphism::from_spec(s, model.genus())).collect::<Result<_>>()?;
    let opts = options(cfg);
    let est = match &cfg.powers {
        Some(p) if p.len() > 1 || p.first() != Some(&1) => {
            phi_n_homogenized_multi(&qms, &iso, n, p, cfg.samples(), cfg.seed(), &opts)?
        }
        _ => phi_n_multi(&qms, &iso, n, cfg.samples(), cfg.seed(), &opts)?,
    };
    for e in &est {
        eprintln!("{} on {}: {:.6} ± {:.6} ({} samples, {} rejected)", e.qm, e.isotopy, e.value, e.std_error, e.samples, e.rejected);
    }
    let tag = if est.iter().any(|e| e.homogenization.is_some()) { "Phi-bar-n" } else { "Phi-n" };
    let rec = ResultRecord::new(cfg, "estimate", tag, &est)?;
    persist(cfg, &rec, &[])?;
    Ok(rec)
}

pub fn cmd_trace(cfg: &RunConfig, dump: Option<&Path>) -> Result<ResultRecord> {
    let iso = load_isotopy(cfg)?;
    let model = iso.model();
    let x: Vec<Point> = match &cfg.points {
        Some(p) => p.iter().map(|q| Point::new(q[0], q[1])).collect(),
        None => {
            let n = cfg.n.unwrap_or(1);
            model.sample_configuration(n, &mut ChaCha8Rng::seed_from_u64(cfg.seed()))?
        }
    };
    let z = default_basepoints(&model, x.len());
    let opts = TraceOptions { keep_samples: dump.is_some(), ..Default::default() };
    let word = trace_word(&iso, &x, &z, &opts)?;
    if let Some(path) = dump {
        let loops = build_loops(&iso, &x, &z, &opts)?;
        let text = serde_json::to_string_pretty(&dump_json(&loops, &opts)).map_err(|e| GgError::Io(e.to_string()))?;
        std::fs::write(path, text)?;
    }
    let payload = serde_json::json!({
        "model": model.key(),
        "points": x.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
        "word": word.to_string(),
        "length": word.len(),
    });
    eprintln!("traced word: `{word}`");
    let rec = ResultRecord::new(cfg, "trace", "gamma", payload)?;
    persist(cfg, &rec, &[])?;
    Ok(rec)
}

pub fn cmd_calabi(cfg: &RunConfig) -> Result<ResultRecord> {
    let iso = load_isotopy(cfg)?;
    let opts = options(cfg);
    let (res, tag) = if iso.model() == SurfaceModel::Disc {
        (calabi_disc(&iso, cfg.samples(), cfg.seed(), &opts)?, "Calabi-disc")
    } else {
        (calabi_surface(&iso, cfg.samples(), cfg.seed(), &opts)?, "Calabi-surface")
    };
    eprintln!("calabi: {:?} ± {:?} ({} samples)", res.value, res.std_error, res.samples);
    let rec = ResultRecord::new(cfg, "calabi", tag, &res)?;
    persist(cfg, &rec, &[])?;
    Ok(rec)
}

pub fn cmd_experiment(cfg: &RunConfig, which: Which) -> Result<ResultRecord> {
    let e = &cfg.experiment;
    let opts = options(cfg);
    let (payload, tables, tag, op) = match which {
        Which::Embedding => {
            let mut params = FigureEightParams::default();
            if let Some(h) = e.half_width {
                params.half_width = h;
            }
            let d = EmbeddingConfig::default();
            let ec = EmbeddingConfig {
                sites: e.sites.clone().unwrap_or(d.sites),
                word: e.word.clone().unwrap_or(d.word),
                params,
                powers: cfg.powers.clone().unwrap_or(d.powers),
                samples: cfg.samples.unwrap_or(d.samples),
                seed: cfg.seed(),
                area_samples: e.area_samples.unwrap_or(d.area_samples),
                epsilon: e.epsilon.unwrap_or(d.epsilon),
                conjugate: e.conjugate.unwrap_or(false),
            };
            let exp = run_embedding(&ec, &opts)?;
            let default_d: Vec<Vec<i64>> = (1..=10).map(|k| (0..exp.m).map(|i| if i == 0 { k } else { 0 }).collect()).collect();
            let bounds = e
                .exponents
                .clone()
                .unwrap_or(default_d)
                .iter()
                .map(|d| norm_lower_bound(&exp, d, NormTag::Autonomous))
                .collect::<Result<Vec<_>>>()?;
            let mut bt = Table::new("norm bounds", "L-norms", &["d", "lower", "lower_uniform", "upper"]);
            for b in &bounds {
                bt.push(vec![
                    format!("{:?}", b.exponents),
                    format!("{:.6}", b.lower),
                    format!("{:.6}", b.lower_uniform),
                    b.upper.map(|u| format!("{u}")).unwrap_or_else(|| "-".into()),
                ]);
            }
            eprintln!("det M = {:.4}, near identity: {}", exp.determinant, exp.near_identity);
            let tables = vec![exp.table(), bt];
            (serde_json::json!({ "experiment": exp, "bounds": bounds }), tables, "delta-ij", "embedding")
        }
        Which::Vanishing => {
            let rows = autonomous_vanishing_suite(
                &default_vanishing_cases()?,
                cfg.powers.as_deref().unwrap_or(&DEFAULT_POWERS),
                cfg.samples.unwrap_or(2000),
                cfg.seed(),
                &opts,
            )?;
            let t = vanishing_table(&rows);
            (serde_json::to_value(&rows).unwrap_or_default(), vec![t], "Aut-zero", "vanishing")
        }
        Which::Metrics => {
            let fam = default_metric_family(
                e.height.unwrap_or(2.0),
                e.small_oscillation.unwrap_or(0.01),
                e.max_power.unwrap_or(10),
            )?;
            let members = e.family.clone().unwrap_or_else(|| vec!["collar".into(), "disc".into()]);
            let chosen: Vec<_> = fam
                .into_iter()
                .zip(["collar", "disc"])
                .filter(|(_, k)| members.iter().any(|m| m == k))
                .map(|(c, _)| c)
                .collect();
            let rows = metric_comparison(&chosen)?;
            let t = metric_table(&rows);
            (serde_json::to_value(&rows).unwrap_or_default(), vec![t], "aut-hofer", "metrics")
        }
    };
    for t in &tables {
        eprintln!("{}", t.to_markdown());
    }
    let rec = ResultRecord::new(cfg, &format!("experiment-{op}"), tag, payload)?;
    persist(cfg, &rec, &tables)?;
    Ok(rec)
}

/// Small end-to-end checks; returns `(name, passed)` pairs.
pub fn selftest() -> Vec<(String, bool)> {
    let mut out = Vec::new();
    let mut check = |name: &str, f: &dyn Fn() -> Result<bool>| out.push((name.to_string(), f().unwrap_or(false)));
    check("identity estimate is zero", &|| {
        let e = phi_n_multi(&[QuasiMorphism::exponent_sum()], &Isotopy::identity(SurfaceModel::Disc), 2, 50, 1, &EstimatorOptions::default())?;
        Ok(e[0].value == 0.0 && e[0].std_error == 0.0)
    });
    check("full twist traces s1^2", &|| {
        let text = r#"{"model": "disc", "segments": [{"kind": "twist",
            "chart": {"kind": "disc", "cx": 0, "cy": 0, "radius": 0.8},
            "profile": {"kind": "plateau", "turns": 1, "inner": 0, "outer": 0.3}}]}"#;
        let iso = isotopy_from_json(text)?;
        let x = [Point::new(-0.2, 0.0), Point::new(0.2, 0.0)];
        let w = trace_word(&iso, &x, &default_basepoints(&SurfaceModel::Disc, 2), &TraceOptions::default())?;
        Ok(w.to_string() == "s1^2" || w.to_string() == "s1 s1")
    });
    check("surface relator reduces to the identity", &|| {
        Ok(crate::braid_words::SurfaceLoopWord::relator(2).dehn_reduce()?.is_empty())
    });
    out
}

pub fn run(cli: Cli) -> Result<()> {
    let rec = match &cli.command {
        Command::Estimate(c) => cmd_estimate(&c.resolve()?)?,
        Command::Trace { common, dump_trace } => cmd_trace(&common.resolve()?, dump_trace.as_deref())?,
        Command::Calabi(c) => cmd_calabi(&c.resolve()?)?,
        Command::Experiment { which, common } => cmd_experiment(&common.resolve()?, *which)?,
        Command::Selftest => {
            let results = selftest();
            for (name, ok) in &results {
                println!("{} {name}", if *ok { "PASS" } else { "FAIL" });
            }
            if results.iter().all(|r| r.1) {
                return Ok(());
            }
            return Err(GgError::InvalidInput("selftest failed".into()));
        }
    };
    println!("{}", rec.to_line());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_estimate_record() {
        let cfg = RunConfig { model: Some("disc".into()), samples: Some(20), ..Default::default() };
        let a = cmd_estimate(&cfg).unwrap();
        let b = cmd_estimate(&cfg).unwrap();
        assert_eq!(a.payload, b.payload);
        assert_eq!(a.payload[0]["value"], 0.0);
        assert_eq!(a.config_hash.len(), 64);
    }

    #[test]
    fn selftest_passes() {
        for (name, ok) in selftest() {
            assert!(ok, "{name}");
        }
    }

    #[test]
    fn clap_parses() {
        let c = Cli::try_parse_from(["ggqm", "estimate", "--qm", "lk:1,2", "--powers", "1,2,4", "--samples", "5"]).unwrap();
        match c.command {
            Command::Estimate(a) => assert_eq!(a.powers, Some(vec![1, 2, 4])),
            _ => panic!(),
        }
        assert!(Cli::try_parse_from(["ggqm", "experiment", "bogus"]).is_err());
    }
}
