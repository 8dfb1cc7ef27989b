//! File outputs: CSV series, structured-text verdicts and static plots.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::plot::{heat_map, line_plot, SERIES_COLORS};
use super::scenario::ScenarioReport;
use super::sweep::SweepResult;

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes `series.csv`, `verdict.txt`, `supnorm.png` and
/// `free_boundary.png` (plus `certificate.txt` when present) for a
/// completed scenario; returns the created paths.
pub fn emit_scenario_outputs(report: &ScenarioReport, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut written = Vec::new();

    let series_path = dir.join("series.csv");
    report.run.write_csv(&series_path)?;
    written.push(series_path);

    let mut verdict = String::new();
    writeln!(verdict, "scenario: {:?}", report.scenario.tag).unwrap();
    writeln!(verdict, "result: {}", if report.passed { "pass" } else { "fail" }).unwrap();
    writeln!(verdict, "{}", report.run.verdict).unwrap();
    writeln!(verdict, "assertions:").unwrap();
    for a in &report.assertions {
        writeln!(
            verdict,
            "  {:24} margin={:+.6e} {}",
            a.name,
            a.margin,
            if a.passed { "pass" } else { "FAIL" }
        )
        .unwrap();
    }
    let verdict_path = dir.join("verdict.txt");
    std::fs::write(&verdict_path, verdict).map_err(|e| Error::io(&verdict_path, e))?;
    written.push(verdict_path);

    if let Some(cert) = &report.certificate {
        let cert_path = dir.join("certificate.txt");
        std::fs::write(&cert_path, cert.render_text()).map_err(|e| Error::io(&cert_path, e))?;
        written.push(cert_path);
    }

    let sup: Vec<(f64, f64)> = report
        .run
        .series
        .iter()
        .map(|r| (r.t, r.sup_norm))
        .collect();
    let sup_path = dir.join("supnorm.png");
    line_plot(
        &sup_path,
        &[
            (&sup, SERIES_COLORS[0]),
            (&report.barrier_amplitude, SERIES_COLORS[1]),
        ],
        true,
        true,
    )?;
    written.push(sup_path);

    let fb: Vec<(f64, f64)> = report
        .run
        .series
        .iter()
        .map(|r| (r.t, r.free_boundary))
        .collect();
    let fb_path = dir.join("free_boundary.png");
    line_plot(&fb_path, &[(&fb, SERIES_COLORS[2])], false, false)?;
    written.push(fb_path);

    Ok(written)
}

/// Writes `sweep.csv`, `verdict.txt` and `regime_map.png` for a sweep.
pub fn emit_sweep_outputs(sweep: &SweepResult, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut written = Vec::new();

    let mut csv = String::from("m,p,verdict,expected,consistent,empirical_only\n");
    for cell in &sweep.cells {
        writeln!(
            csv,
            "{:.16e},{:.16e},{},{},{},{}",
            cell.m,
            cell.p,
            cell.verdict.short_label(),
            match cell.expected {
                Some(super::sweep::Expectation::FiniteBlowup) => "finite-blowup",
                Some(super::sweep::Expectation::NoFiniteBlowup) => "no-finite-blowup",
                None => "-",
            },
            cell.consistent,
            cell.empirical_only
        )
        .unwrap();
    }
    let csv_path = dir.join("sweep.csv");
    std::fs::write(&csv_path, csv).map_err(|e| Error::io(&csv_path, e))?;
    written.push(csv_path);

    let mut verdict = String::new();
    writeln!(verdict, "provenance: {}", sweep.provenance).unwrap();
    writeln!(
        verdict,
        "consistent: {}",
        sweep.cells.iter().all(|c| c.consistent)
    )
    .unwrap();
    for cell in &sweep.cells {
        writeln!(
            verdict,
            "  m={:<6} p={:<6} {:32} {}",
            cell.m,
            cell.p,
            format!("{:?}", cell.verdict),
            if cell.empirical_only {
                "(empirical only)"
            } else if cell.consistent {
                "consistent"
            } else {
                "INCONSISTENT"
            }
        )
        .unwrap();
    }
    let verdict_path = dir.join("verdict.txt");
    std::fs::write(&verdict_path, verdict).map_err(|e| Error::io(&verdict_path, e))?;
    written.push(verdict_path);

    // Cells are m-major; the map wants p-major rows.
    let (n_m, n_p) = (sweep.m_values.len(), sweep.p_values.len());
    let mut classes = vec![3usize; n_m * n_p];
    for (idx, cell) in sweep.cells.iter().enumerate() {
        let (i_m, i_p) = (idx / n_p, idx % n_p);
        classes[i_p * n_m + i_m] = cell.verdict.class_index();
    }
    let map_path = dir.join("regime_map.png");
    heat_map(&map_path, n_m, n_p, &classes)?;
    written.push(map_path);

    Ok(written)
}
