//! CSV artifacts. Files are written to a temporary file in the target
//! directory and renamed into place.

use std::io::Write;
use std::path::Path;

use entropic_core::theory::InequalityReport;
use entropic_core::ExperimentRecord;

use crate::experiments::ConvergenceSeries;

pub const TRAJECTORY_HEADER: &str = "t,entropy,l2_rel_error,fix_fired,beta,mass";

/// 17 significant digits, enough to round-trip an `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn trajectory_csv(records: &[ExperimentRecord]) -> String {
    let mut s = String::with_capacity(110 * (records.len() + 1));
    s.push_str(TRAJECTORY_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            num(r.t),
            num(r.entropy),
            num(r.l2_rel_error),
            u8::from(r.fix_fired),
            num(r.beta),
            num(r.mass)
        ));
    }
    s
}

pub fn convergence_csv(series: &[ConvergenceSeries]) -> String {
    let mut s = String::from("scheme,fix,dt,error,observed_order\n");
    for ser in series {
        for (i, (dt, err)) in ser.dts.iter().zip(&ser.errors).enumerate() {
            let order = if i == 0 {
                String::new()
            } else {
                num((err / ser.errors[i - 1]).ln() / (dt / ser.dts[i - 1]).ln())
            };
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                ser.label(),
                u8::from(ser.fix),
                num(*dt),
                num(*err),
                order
            ));
        }
    }
    s
}

pub fn convergence_summary_csv(series: &[ConvergenceSeries]) -> String {
    let mut s = String::from("scheme,fix,dt_min,dt_max,points,slope\n");
    for ser in series {
        let (lo, hi) = ser
            .dts
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &d| {
                (lo.min(d), hi.max(d))
            });
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            ser.label(),
            u8::from(ser.fix),
            num(lo),
            num(hi),
            ser.dts.len(),
            num(ser.slope)
        ));
    }
    s
}

pub fn theory_csv(reports: &[InequalityReport]) -> String {
    let mut s = String::from("check,samples,skipped,satisfied,worst_margin,worst_scale\n");
    for r in reports {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.name,
            r.samples,
            r.skipped,
            u8::from(r.satisfied),
            num(r.worst_margin),
            num(r.worst_scale)
        ));
    }
    s
}

pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
