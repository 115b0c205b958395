use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use smoothlab::scenario::{CellMode, Scenario};
use smoothlab::verify1d::verify_1d_construction;
use smoothlab::{emit, run_scenario, spheres, ExitStatus};

#[derive(Parser)]
#[command(
    name = "smoothlab",
    about = "Exact and Monte-Carlo experiments on randomized-smoothed classifiers",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario file and write CSV/JSON/SVG results.
    Run {
        /// Scenario JSON file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (defaults to the scenario file's `out` field).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Force the evaluation mode (exact|mc); default is the scenario's.
        #[arg(long)]
        mode: Option<String>,
        /// Override the Monte-Carlo point budget per risk.
        #[arg(long = "mc-samples")]
        mc_samples: Option<usize>,
        /// Worker threads (results are independent of this).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Check the 1D two-interval construction at the given parameters.
    #[command(name = "verify-1d")]
    Verify1d {
        /// Inradius of the positive intervals, in (0, 0.25].
        #[arg(long)]
        omega: f64,
        /// Augmentation noise width (uniform support length).
        #[arg(long)]
        alpha: f64,
        /// Smoothing noise width (uniform support length).
        #[arg(long)]
        beta: f64,
        /// Central gap of the widened variant; default alpha/2 + 0.01.
        #[arg(long = "widened-gap")]
        widened_gap: Option<f64>,
        /// Optional directory for verdict.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a disjoint sphere configuration and write it as JSON.
    #[command(name = "sample-spheres")]
    SampleSpheres {
        /// Required interference distance between spheres.
        #[arg(long)]
        zeta: f64,
        #[arg(long)]
        seed: u64,
        /// Output JSON file.
        #[arg(long)]
        out: PathBuf,
        /// Sphere radius.
        #[arg(long, default_value_t = 10.0)]
        r: f64,
        /// Number of rejection-sampling proposals.
        #[arg(long, default_value_t = 500)]
        attempts: usize,
        /// Confidence margin of the conditional on the spheres.
        #[arg(long, default_value_t = 0.25)]
        tau: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ExitStatus::InvalidConfig.code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitStatus> {
    match cli.cmd {
        Cmd::Run {
            config,
            out,
            seed,
            mode,
            mc_samples,
            jobs,
        } => {
            if let Some(n) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .context("configuring worker threads")?;
            }
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let mut sc = Scenario::from_json(&text)?;
            let mode = mode.as_deref().map(CellMode::parse).transpose()?;
            sc.apply_overrides(seed, mode, mc_samples);
            sc.validate()?;
            let out = out
                .or_else(|| sc.configured_out().map(PathBuf::from))
                .context("no output directory: pass --out or set `out` in the scenario")?;
            let report = run_scenario(&sc, &out).context("running scenario")?;
            println!("{}", report.summary);
            for p in &report.outputs {
                println!("wrote {}", p.display());
            }
            Ok(report.status)
        }
        Cmd::Verify1d {
            omega,
            alpha,
            beta,
            widened_gap,
            out,
        } => {
            let verdict = verify_1d_construction(omega, alpha, beta, widened_gap)?;
            for c in &verdict.constraints {
                println!(
                    "{} {} (lhs {}, rhs {})",
                    if c.satisfied { "PASS" } else { "FAIL" },
                    c.name,
                    c.lhs,
                    c.rhs
                );
            }
            println!(
                "{} unaugmented smoothed classifier predicts 0 everywhere",
                pass(verdict.construction.unaugmented_predicts_zero)
            );
            println!(
                "{} augmented classifier predicts 1 on [c1, c4]",
                pass(verdict.construction.augmented_stage_positive)
            );
            println!(
                "{} augmented smoothed pipeline predicts 1 on [c1, c4]",
                pass(verdict.construction.pipeline_positive)
            );
            println!(
                "risks: unaugmented {} vs augmented {}",
                verdict.construction.unaugmented_risk, verdict.construction.augmented_risk
            );
            println!(
                "{} augmentation strictly lowers the smoothed risk",
                pass(verdict.augmentation_beneficial)
            );
            println!(
                "widened gap {}: unaugmented {} vs augmented {} -> {}",
                verdict.widened.gap,
                verdict.widened.unaugmented_risk,
                verdict.widened.augmented_risk,
                pass(verdict.widened_not_beneficial)
            );
            println!(
                "VERDICT: {}",
                if verdict.all_pass { "PASS" } else { "FAIL" }
            );
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                let path = dir.join("verdict.json");
                emit::write_manifest(&path, &verdict)?;
                println!("wrote {}", path.display());
            }
            Ok(ExitStatus::Success)
        }
        Cmd::SampleSpheres {
            zeta,
            seed,
            out,
            r,
            attempts,
            tau,
        } => {
            let domain =
                smoothlab_core::geometry::BoxDomain::new(vec![0.0, 0.0], vec![100.0, 100.0])?;
            let config = spheres::sample_sphere_config(&domain, zeta, r, attempts, seed, tau)?;
            let mut text = serde_json::to_string_pretty(&config)?;
            text.push('\n');
            emit::write_text(&out, &text)?;
            println!(
                "sampled {} spheres (zeta {}, seed {}) -> {}",
                config.balls().len(),
                zeta,
                seed,
                out.display()
            );
            Ok(ExitStatus::Success)
        }
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
