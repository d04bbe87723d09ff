use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::PenaltyReport;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One line per `(W, i)`:
/// `bandwidth_hz,L,realization,eps_s,g_m0,...,g_m{M-1},penalty`.
/// Values use the shortest representation that round-trips.
pub fn realization_csv<T: Real>(report: &PenaltyReport<T>) -> String {
    let mut out = String::from("bandwidth_hz,L,realization,eps_s");
    for m in 0..report.phases {
        let _ = write!(out, ",g_m{m}");
    }
    out.push_str(",penalty\n");
    for row in &report.rows {
        for r in &row.realizations {
            let _ = write!(
                out,
                "{},{},{},{}",
                row.bandwidth, row.taps, r.record.id, r.eps
            );
            for g in &r.record.gains {
                let _ = write!(out, ",{g}");
            }
            let _ = writeln!(out, ",{}", r.record.max_penalty);
        }
    }
    out
}

/// `bandwidth_hz,L,P_max,P_mean`, one line per bandwidth.
pub fn aggregate_csv<T: Real>(report: &PenaltyReport<T>) -> String {
    let mut out = String::from("bandwidth_hz,L,P_max,P_mean\n");
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.bandwidth, row.taps, row.worst, row.mean
        );
    }
    out
}

/// Bandwidths as columns; rows `W [MHz]`, `P [%]`, `Pbar [%]`, `L`, with
/// penalties at one decimal.
pub fn summary_table<T: Real>(report: &PenaltyReport<T>) -> String {
    let width = 8;
    let mut lines = [
        String::from("W [MHz] "),
        String::from("P [%]   "),
        String::from("Pbar [%]"),
        String::from("L       "),
    ];
    for row in &report.rows {
        let mhz = row.bandwidth.to_f64_lossy() / 1e6;
        let _ = write!(lines[0], "{mhz:>width$}");
        let _ = write!(lines[1], "{:>width$.1}", 100.0 * row.worst.to_f64_lossy());
        let _ = write!(lines[2], "{:>width$.1}", 100.0 * row.mean.to_f64_lossy());
        let _ = write!(lines[3], "{:>width$}", row.taps);
    }
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

/// `runs/out.csv` → `runs/out.aggregate.csv`.
pub fn aggregate_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    path.with_file_name(format!("{stem}.aggregate.{ext}"))
}

/// Writes the per-realization CSV to `path`, the aggregate CSV next to it
/// (see [`aggregate_path`]) and the summary table to `summary`. Returns the
/// aggregate path.
pub fn emit_report<T: Real>(
    report: &PenaltyReport<T>,
    path: &Path,
    summary: &mut dyn Write,
) -> Result<PathBuf> {
    fs::write(path, realization_csv(report))
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    let agg = aggregate_path(path);
    fs::write(&agg, aggregate_csv(report))
        .map_err(|e| Error::io(format!("writing {}", agg.display()), e))?;
    summary
        .write_all(summary_table(report).as_bytes())
        .map_err(|e| Error::io("writing summary", e))?;
    Ok(agg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candidates::PenaltyRecord;
    use crate::experiment::{BandwidthRow, RealizationResult};

    fn report() -> PenaltyReport<f64> {
        let rec = |id, gains: Vec<f64>| RealizationResult {
            eps: 1.25e-8,
            record: PenaltyRecord::from_gains(id, gains),
        };
        PenaltyReport {
            phases: 2,
            delay_spread: 279e-9,
            rows: vec![BandwidthRow {
                bandwidth: 4e6,
                taps: 1,
                worst: 0.6891,
                mean: 0.4676,
                realizations: vec![rec(0, vec![1.0, 0.5]), rec(1, vec![0.25, 0.2])],
            }],
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = PenaltyReport::<f64> {
            phases: 4,
            delay_spread: 1.0,
            rows: vec![],
        };
        assert_eq!(
            realization_csv(&r),
            "bandwidth_hz,L,realization,eps_s,g_m0,g_m1,g_m2,g_m3,penalty\n"
        );
        assert_eq!(aggregate_csv(&r), "bandwidth_hz,L,P_max,P_mean\n");
    }

    #[test]
    fn csv_keeps_full_precision() {
        let text = realization_csv(&report());
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[1], "4000000,1,0,0.0000000125,1,0.5,0.5");
        assert_eq!(
            lines[2],
            "4000000,1,1,0.0000000125,0.25,0.2,0.19999999999999996"
        );
        assert_eq!(
            aggregate_csv(&report()).lines().nth(1),
            Some("4000000,1,0.6891,0.4676")
        );
    }

    #[test]
    fn summary_rounds_to_one_decimal() {
        let s = summary_table(&report());
        let lines: Vec<_> = s.lines().collect();
        assert!(lines[0].ends_with("       4"));
        assert!(lines[1].ends_with("    68.9"));
        assert!(lines[2].ends_with("    46.8"));
        assert!(lines[3].ends_with("       1"));
    }

    #[test]
    fn aggregate_path_naming() {
        assert_eq!(
            aggregate_path(Path::new("a/out.csv")),
            PathBuf::from("a/out.aggregate.csv")
        );
        assert_eq!(
            aggregate_path(Path::new("out")),
            PathBuf::from("out.aggregate.csv")
        );
    }

    #[test]
    fn emit_writes_both_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pen.csv");
        let mut sink = Vec::new();
        let agg = emit_report(&report(), &path, &mut sink).unwrap();
        assert_eq!(
            fs::read_to_string(&path).unwrap(),
            realization_csv(&report())
        );
        assert_eq!(fs::read_to_string(agg).unwrap(), aggregate_csv(&report()));
        assert_eq!(String::from_utf8(sink).unwrap(), summary_table(&report()));
        assert!(emit_report(
            &report(),
            &dir.path().join("missing/x.csv"),
            &mut Vec::new()
        )
        .is_err());
    }
}
