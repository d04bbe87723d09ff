//! `#cirv1` text format.
//!
//! ```text
//! #cirv1 ds=<seconds> n=<count>
//! #i=<index>
//! <time_s>,<re>,<im>
//! ...
//! ```
//!
//! Each data line is one discrete path: complex amplitude `re + j·im` at
//! delay `time_s`. Times are strictly increasing within a record and lie
//! in `[0, ds]`. On ingest a path lands on the nearest grid sample as
//! `amplitude/Δ`; paths past `ds` are dropped and every record is
//! normalized to unit energy.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex;

use super::{CirRecord, RecordSource};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sigkit::{support_len, ImpulseResponse, GRID_SNAP};

const MAGIC: &str = "#cirv";

/// Serializes `records` (all sharing delay spread `ds`). Only nonzero grid
/// samples are written.
pub fn format_cir<T: Real>(records: &[CirRecord<T>], ds: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "#cirv1 ds={ds:e} n={}", records.len());
    for r in records {
        let _ = writeln!(out, "#i={}", r.id);
        let x = r.response.signal();
        let dt = x.grid_step().to_f64_lossy();
        for (n, z) in x.samples().iter().enumerate() {
            if z.re == T::zero() && z.im == T::zero() {
                continue;
            }
            let t = x.time(n).to_f64_lossy().max(0.0);
            let _ = writeln!(
                out,
                "{t:e},{:e},{:e}",
                z.re.to_f64_lossy() * dt,
                z.im.to_f64_lossy() * dt
            );
        }
    }
    out
}

pub fn write_cir_file<T: Real>(path: &Path, records: &[CirRecord<T>], ds: f64) -> Result<()> {
    fs::write(path, format_cir(records, ds))
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// Reads a CIR file and resamples its records onto a grid of step
/// `grid_step`.
pub fn ingest<T: Real>(path: &Path, grid_step: f64) -> Result<Vec<CirRecord<T>>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    parse_cir(&text, path, grid_step)
}

struct Pending {
    id: usize,
    line: usize,
    paths: Vec<(f64, Complex<f64>)>,
}

/// Parses CIR text; `path` is only used in error messages.
pub fn parse_cir<T: Real>(text: &str, path: &Path, grid_step: f64) -> Result<Vec<CirRecord<T>>> {
    let err = |line: usize, column: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message,
    };

    let mut lines = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)));
    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| err(1, 1, "empty file".into()))?;
    let (ds, count) = parse_header(header).map_err(|(col, msg)| {
        if col == 0 {
            Error::UnsupportedVersion(msg)
        } else {
            err(hline, col, msg)
        }
    })?;
    if !(grid_step > 0.0 && grid_step < ds) {
        return Err(Error::Config(format!(
            "grid step {grid_step:e} s must be positive and below ds = {ds:e} s"
        )));
    }

    let mut pending: Vec<Pending> = Vec::new();
    let mut last_line = hline;
    for (no, line) in lines {
        last_line = no;
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#i=") {
            let id = rest
                .trim()
                .parse::<usize>()
                .map_err(|e| err(no, 4, format!("bad record index: {e}")))?;
            pending.push(Pending {
                id,
                line: no,
                paths: Vec::new(),
            });
            continue;
        }
        if line.starts_with('#') {
            return Err(err(no, 1, format!("unexpected directive `{line}`")));
        }
        let rec = pending
            .last_mut()
            .ok_or_else(|| err(no, 1, "data line before any `#i=` record header".into()))?;
        let mut fields = [0.0f64; 3];
        let mut column = 1;
        let mut parts = line.split(',');
        for (k, slot) in fields.iter_mut().enumerate() {
            let field = parts
                .next()
                .ok_or_else(|| err(no, column, format!("expected 3 fields, found {k}")))?;
            *slot = field
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(no, column, format!("invalid number `{field}`")))?;
            if k == 0 && *slot < 0.0 {
                return Err(err(no, column, format!("negative time {field}")));
            }
            column += field.len() + 1;
        }
        if parts.next().is_some() {
            return Err(err(no, column, "expected 3 fields, found more".into()));
        }
        if let Some(&(prev, _)) = rec.paths.last() {
            if fields[0] <= prev {
                return Err(err(
                    no,
                    1,
                    format!("time {:e} not after {prev:e}", fields[0]),
                ));
            }
        }
        rec.paths
            .push((fields[0], Complex::new(fields[1], fields[2])));
    }
    if pending.len() != count {
        return Err(err(
            last_line,
            1,
            format!("header declares {count} records, found {}", pending.len()),
        ));
    }

    let len = support_len(grid_step, ds);
    let limit = ds + GRID_SNAP * grid_step;
    pending
        .into_iter()
        .map(|p| {
            let mut samples = vec![Complex::<f64>::default(); len];
            for &(t, a) in p.paths.iter().filter(|(t, _)| *t <= limit) {
                let n = ((t / grid_step).round() as usize).min(len - 1);
                samples[n] += a / grid_step;
            }
            let samples = samples
                .into_iter()
                .map(|z| Complex::new(T::lit(z.re), T::lit(z.im)))
                .collect();
            let response = ImpulseResponse::truncated(samples, T::lit(grid_step), T::lit(ds))?
                .normalized()
                .map_err(|_| err(p.line, 1, format!("record {} has zero energy", p.id)))?;
            Ok(CirRecord {
                id: p.id,
                response,
                source: RecordSource::File(PathBuf::from(path)),
            })
        })
        .collect()
}

/// `(ds, n)` from the header line. Column 0 in the error flags a version
/// mismatch.
fn parse_header(line: &str) -> std::result::Result<(f64, usize), (usize, String)> {
    let mut tokens = line.split_whitespace();
    let magic = tokens.next().unwrap_or_default();
    let Some(version) = magic.strip_prefix(MAGIC) else {
        return Err((1, format!("expected `#cirv1` header, found `{magic}`")));
    };
    if version != "1" {
        return Err((0, magic.trim_start_matches('#').to_string()));
    }
    let mut ds = None;
    let mut count = None;
    for tok in tokens {
        let column = line.find(tok).map_or(1, |c| c + 1);
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| (column, format!("expected key=value, found `{tok}`")))?;
        match key {
            "ds" => {
                let v = value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| *v > 0.0 && v.is_finite())
                    .ok_or_else(|| (column, format!("invalid ds `{value}`")))?;
                ds = Some(v);
            }
            "n" => {
                let v = value
                    .parse::<usize>()
                    .map_err(|_| (column, format!("invalid n `{value}`")))?;
                count = Some(v);
            }
            _ => return Err((column, format!("unknown header key `{key}`"))),
        }
    }
    match (ds, count) {
        (Some(ds), Some(n)) => Ok((ds, n)),
        _ => Err((1, "header needs ds=<seconds> and n=<count>".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chanmodel::{generate, ClusterModelParams};

    const DT: f64 = 0.5e-9;

    fn parse(text: &str) -> Result<Vec<CirRecord<f64>>> {
        parse_cir(text, Path::new("mem.cir"), DT)
    }

    #[test]
    fn single_delta_at_origin() {
        let recs = parse("#cirv1 ds=1e-8 n=1\n#i=0\n0,0.5,0\n").unwrap();
        assert_eq!(recs.len(), 1);
        let h = &recs[0].response;
        assert!((h.energy() - 1.0).abs() < 1e-12);
        assert!(h.signal().samples()[0].norm() > 0.0);
        assert_eq!(h.delay_spread(), 1e-8);
    }

    #[test]
    fn negative_time_is_a_parse_error_with_position() {
        match parse("#cirv1 ds=1e-8 n=1\n#i=0\n0,1,0\n-1e-9,1,0\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (4, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_field_reports_its_column() {
        match parse("#cirv1 ds=1e-8 n=1\n#i=0\n1e-9,1,x\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 8)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn structural_errors() {
        assert!(
            matches!(parse("#cirv2 ds=1e-8 n=1\n"), Err(Error::UnsupportedVersion(v)) if v == "cirv2")
        );
        assert!(matches!(parse("hello\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse("#cirv1 ds=1e-8\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse("#cirv1 ds=1e-8 n=2\n#i=0\n0,1,0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse("#cirv1 ds=1e-8 n=1\n0,1,0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse("#cirv1 ds=1e-8 n=1\n#i=0\n2e-9,1,0\n1e-9,1,0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse("#cirv1 ds=1e-8 n=1\n#i=0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse("#cirv1 ds=1e-8 n=1\n#i=0\n0,1,0,4\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn paths_past_ds_are_truncated() {
        let recs = parse("#cirv1 ds=1e-8 n=1\n#i=0\n0,1,0\n5e-8,1,0\n").unwrap();
        let x = recs[0].response.signal();
        assert_eq!(x.len(), 21);
        assert!((x.samples()[0].norm() - (1.0 / DT).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn crlf_is_tolerated() {
        assert!(parse("#cirv1 ds=1e-8 n=1\r\n#i=0\r\n0,1,0\r\n").is_ok());
    }

    #[test]
    fn export_ingest_round_trip() {
        let params = ClusterModelParams {
            delay_spread: 50e-9,
            rng_seed: 3,
            ..Default::default()
        };
        let recs = generate::<f64>(&params, 5, DT).unwrap();
        let text = format_cir(&recs, params.delay_spread);
        let back = parse(&text).unwrap();
        assert_eq!(back.len(), recs.len());
        for (a, b) in recs.iter().zip(&back) {
            assert_eq!(a.id, b.id);
            let (x, y) = (a.response.signal(), b.response.signal());
            assert_eq!(x.len(), y.len());
            for (u, v) in x.samples().iter().zip(y.samples()) {
                assert!((u - v).norm() <= 1e-9 * u.norm().max(1.0));
            }
        }
    }
}
