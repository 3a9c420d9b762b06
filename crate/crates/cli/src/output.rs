//! CSV emission, run manifests and the rendered text table.
//!
//! Every CSV starts with one comment line `# seed=<u64> version=<v>
//! config_hash=<h>` followed by a plain header row. Frequencies are written
//! as decimals; the rendered tables show percentages. All numbers go through
//! f64's shortest round-trip formatting, so identical runs produce identical
//! bytes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use siglab_core::experiments::{Exp1Report, Exp2Report, Exp3Report};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// First 16 hex characters of the SHA-256 of the resolved config's JSON.
pub fn config_hash<C: Serialize>(config: &C) -> String {
    let json = serde_json::to_string(config).expect("config serializes");
    let digest = Sha256::digest(json.as_bytes());
    let mut hex = String::with_capacity(16);
    for byte in digest.iter().take(8) {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

fn meta_line(seed: u64, hash: &str) -> String {
    format!("# seed={seed} version={VERSION} config_hash={hash}")
}

fn write_lines(path: &Path, lines: &[String]) -> std::io::Result<()> {
    let mut out = String::new();
    for line in lines {
        out.push_str(line);
        out.push('\n');
    }
    let mut f = fs::File::create(path)?;
    f.write_all(out.as_bytes())
}

/// `exp1_events.csv` and `exp1_fwer.csv`.
pub fn write_exp1_csvs(
    dir: &Path,
    report: &Exp1Report,
    hash: &str,
) -> std::io::Result<Vec<PathBuf>> {
    let seed = report.config.seed;
    let mut lines = vec![
        meta_line(seed, hash),
        "event,members,prob,rejections,reps,frequency,mc_se".to_string(),
    ];
    for (event, cell) in report.config.events.iter().zip(&report.event_cells) {
        lines.push(format!(
            "{},{},{},{},{},{},{}",
            event.name(),
            event.members().len(),
            event.prob(),
            cell.rejections,
            cell.reps,
            cell.frequency(),
            cell.mc_se()
        ));
    }
    let events_path = dir.join("exp1_events.csv");
    write_lines(&events_path, &lines)?;

    let fwer_lines = vec![
        meta_line(seed, hash),
        "k_events,fwer_freq,sidak,bonferroni".to_string(),
        format!(
            "{},{},{},{}",
            report.config.events.len(),
            report.fwer.frequency(),
            report.sidak,
            report.bonferroni
        ),
    ];
    let fwer_path = dir.join("exp1_fwer.csv");
    write_lines(&fwer_path, &fwer_lines)?;
    Ok(vec![events_path, fwer_path])
}

/// `exp2_size.csv`: one row per (alpha, k, statistic).
pub fn write_exp2_csv(
    dir: &Path,
    report: &Exp2Report,
    hash: &str,
) -> std::io::Result<Vec<PathBuf>> {
    let mut lines = vec![
        meta_line(report.config.seed, hash),
        "alpha,k,stat,rejections,reps,frequency,mc_se,analytic_sidak".to_string(),
    ];
    for cell in &report.cells {
        lines.push(format!(
            "{},{},tmax,{},{},{},{},{}",
            cell.alpha,
            cell.k,
            cell.tmax.rejections,
            cell.tmax.reps,
            cell.tmax.frequency(),
            cell.tmax.mc_se(),
            cell.analytic_sidak
        ));
        lines.push(format!(
            "{},{},f,{},{},{},{},",
            cell.alpha,
            cell.k,
            cell.f.rejections,
            cell.f.reps,
            cell.f.frequency(),
            cell.f.mc_se()
        ));
    }
    let path = dir.join("exp2_size.csv");
    write_lines(&path, &lines)?;
    Ok(vec![path])
}

/// Text rendering of the size grid in the familiar two-block layout,
/// percentages with two decimals.
pub fn render_exp2_table(report: &Exp2Report) -> String {
    let ks = &report.config.k_values;
    let alphas = &report.config.alphas;
    let mut out = String::new();
    out.push_str("Relative frequency (in %) of rejecting true H0\n");
    let mut header = String::from("        ");
    let mut subheader = String::from("        ");
    for alpha in alphas {
        let block = format!("alpha = {}%", alpha * 100.0);
        header.push_str(&format!("{block:^width$}", width = 8 * ks.len() + 2));
        for k in ks {
            subheader.push_str(&format!("{:>8}", format!("k={k}")));
        }
        subheader.push_str("  ");
    }
    out.push_str(header.trim_end());
    out.push('\n');
    out.push_str(subheader.trim_end());
    out.push('\n');
    for (label, pick) in [("T_max", true), ("F_k", false)] {
        let mut row = format!("{label:<8}");
        for alpha in alphas {
            for k in ks {
                let cell = report.cell(*alpha, *k).expect("grid cell exists");
                let stats = if pick { &cell.tmax } else { &cell.f };
                row.push_str(&format!("{:>8.2}", 100.0 * stats.frequency()));
            }
            row.push_str("  ");
        }
        out.push_str(row.trim_end());
        out.push('\n');
    }
    let mut row = format!("{:<8}", "sidak");
    for alpha in alphas {
        for k in ks {
            let cell = report.cell(*alpha, *k).expect("grid cell exists");
            row.push_str(&format!("{:>8.2}", 100.0 * cell.analytic_sidak));
        }
        row.push_str("  ");
    }
    out.push_str(row.trim_end());
    out.push('\n');
    out
}

/// Column label for a pretest level: `au005` for 0.05; non-integral percents
/// fall back to a per-mille label such as `au25m` for 0.025.
pub fn alpha_u_label(level: f64) -> String {
    let permille = (level * 1000.0).round() as u32;
    if permille.is_multiple_of(10) {
        format!("au{:03}", permille / 10)
    } else {
        format!("au{permille}m")
    }
}

/// One `exp3_rho<r>.csv` per correlation: the plotted series.
pub fn write_exp3_csvs(
    dir: &Path,
    report: &Exp3Report,
    hash: &str,
) -> std::io::Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    let labels: Vec<String> = report
        .config
        .alpha_u_levels
        .iter()
        .map(|&l| alpha_u_label(l))
        .collect();
    for curve in &report.curves {
        let mut header = String::from("gamma");
        for label in &labels {
            header.push_str(&format!(",rej_pms_{label}"));
        }
        header.push_str(",rej_unrestricted,reps");
        let mut lines = vec![meta_line(report.config.seed, hash), header];
        for row in &curve.rows {
            let mut line = format!("{}", row.gamma);
            for cell in &row.pms {
                line.push_str(&format!(",{}", cell.frequency()));
            }
            line.push_str(&format!(
                ",{},{}",
                row.unrestricted.frequency(),
                report.config.reps
            ));
            lines.push(line);
        }
        let path = dir.join(format!("exp3_rho{}.csv", curve.rho));
        write_lines(&path, &lines)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Sidecar describing one run; reruns with the same resolved config and seed
/// reproduce the data files byte for byte (timestamps live only here).
#[derive(Debug, Serialize)]
pub struct RunManifest<C: Serialize> {
    pub version: String,
    pub subcommand: String,
    pub seed: u64,
    pub workers: usize,
    pub config: C,
    pub config_hash: String,
    pub started_at: String,
    pub finished_at: String,
    pub outputs: Vec<String>,
}

pub fn write_manifest<C: Serialize>(
    dir: &Path,
    manifest: &RunManifest<C>,
) -> std::io::Result<PathBuf> {
    let path = dir.join(format!("{}_manifest.json", manifest.subcommand));
    let json = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    fs::write(&path, json + "\n")?;
    Ok(path)
}
