//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 assertion failure, 2 certification violated,
//! 3 synthesis failure, 4 configuration or I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pmreact_core::certify::{check_subsolution, check_supersolution, default_time_grid};
use pmreact_core::error::Error;
use pmreact_core::harness::config::FileConfig;
use pmreact_core::harness::output::{emit_scenario_outputs, emit_sweep_outputs};
use pmreact_core::harness::{regime_sweep, run_scenario};
use pmreact_core::solver::{build_initial_data, ground_state, solve_ball, RadialGrid};
use pmreact_core::barrier::BarrierKind;

#[derive(Parser)]
#[command(name = "pmreact", about = "Radial porous-medium-with-reaction simulator and barrier certifier", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the solver on configured initial data and write the series.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "./out")]
        out: PathBuf,
    },
    /// Check a configured barrier and write its certificate.
    Certify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "./out")]
        out: PathBuf,
        /// Probe count of the time grid.
        #[arg(long, default_value_t = 1000)]
        probes: usize,
    },
    /// Run a full comparison scenario (synthesize, certify, solve, assert).
    Sandwich {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "./out")]
        out: PathBuf,
    },
    /// Sweep an (m, p) grid and emit the regime map.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "./out")]
        out: PathBuf,
    },
    /// Tabulate the hyperbolic ground state.
    Groundstate {
        #[arg(long = "N")]
        dim: u32,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        rmax: f64,
        #[arg(long, default_value_t = 1001)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::SynthesisFailed { .. } => 3,
        Error::Io { .. } | Error::Config(_) => 4,
        _ => 1,
    }
}

fn run() -> Result<u8, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate { config, out } => {
            let cfg = FileConfig::load(&config)?;
            let manifold = cfg.require_manifold()?;
            let eq = cfg.require_equation()?;
            let solver = cfg.solver.unwrap_or_default();
            let initial = cfg
                .initial
                .ok_or_else(|| Error::Config("missing `initial` section".into()))?;
            let grid = RadialGrid::new(&manifold, solver.r_max, solver.n_cells)?;
            let u0 = build_initial_data(&initial, &grid)?;
            let report = solve_ball(&u0, eq.m, eq.p, solver.t_end, &solver.solver_config())?;
            std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
            report.write_csv(&out.join("series.csv"))?;
            report.write_verdict(&out.join("verdict.txt"))?;
            println!("{}", report.verdict);
            Ok(0)
        }
        Command::Certify {
            config,
            out,
            probes,
        } => {
            let cfg = FileConfig::load(&config)?;
            let eq = cfg.require_equation()?;
            let barrier = cfg
                .barrier
                .as_ref()
                .ok_or_else(|| Error::Config("missing `barrier` section".into()))?
                .build(&eq)?;
            let dim = cfg
                .manifold
                .as_ref()
                .map(|m| m.dim)
                .ok_or_else(|| Error::Config("missing `manifold` section".into()))?;
            let (h, k) = cfg.curvature_constants();
            let grid = default_time_grid(barrier.profile(), probes.max(2));
            let cert = match barrier.kind() {
                BarrierKind::OuterSupersolution => {
                    let h = h.ok_or_else(|| {
                        Error::Config("supersolution check needs an upper curvature bound h".into())
                    })?;
                    check_supersolution(&barrier, dim, h, &grid)?
                }
                BarrierKind::GluedSubsolution => {
                    let k = k.ok_or_else(|| {
                        Error::Config("subsolution check needs a lower curvature bound k".into())
                    })?;
                    let c0 = cfg.require_manifold()?.unit_ball_drift_constant()?;
                    check_subsolution(&barrier, dim, k, c0, &grid)?
                }
            };
            std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
            let path = out.join("certificate.txt");
            std::fs::write(&path, cert.render_text()).map_err(|e| Error::io(&path, e))?;
            print!("{}", cert.render_text());
            Ok(if cert.is_certified() { 0 } else { 2 })
        }
        Command::Sandwich { config, out } => {
            let cfg = FileConfig::load(&config)?;
            let scenario = cfg
                .scenario
                .as_ref()
                .ok_or_else(|| Error::Config("missing `scenario` section".into()))?
                .build();
            let report = run_scenario(&scenario)?;
            emit_scenario_outputs(&report, &out)?;
            for a in &report.assertions {
                println!(
                    "{:24} margin={:+.6e} {}",
                    a.name,
                    a.margin,
                    if a.passed { "pass" } else { "FAIL" }
                );
            }
            println!("scenario {:?}: {}", scenario.tag, if report.passed { "pass" } else { "fail" });
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Sweep { config, out } => {
            let cfg = FileConfig::load(&config)?;
            let section = cfg
                .sweep
                .as_ref()
                .ok_or_else(|| Error::Config("missing `sweep` section".into()))?;
            let sweep = regime_sweep(&section.m_values, &section.p_values, &section.template())?;
            emit_sweep_outputs(&sweep, &out)?;
            let consistent = sweep.cells.iter().all(|c| c.consistent);
            println!(
                "sweep of {} cells: {}",
                sweep.cells.len(),
                if consistent { "consistent" } else { "INCONSISTENT" }
            );
            Ok(if consistent { 0 } else { 1 })
        }
        Command::Groundstate {
            dim,
            h,
            rmax,
            points,
            out,
        } => {
            let gs = ground_state(dim, h, rmax, points)?;
            let mut text = String::from("r,v\n");
            for (r, v) in gs.radii().iter().zip(gs.values()) {
                text.push_str(&format!("{r:.16e},{v:.16e}\n"));
            }
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                    let path = dir.join("ground_state.csv");
                    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
                    println!("lambda1: {}", gs.lambda1());
                    println!("wrote {}", path.display());
                }
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
