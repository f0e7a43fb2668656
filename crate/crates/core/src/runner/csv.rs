use std::fmt::Write as _;
use std::path::Path;

use super::RunnerError;
use crate::analysis::PopulationSeries;
use crate::spectra::SweepTable;

/// Fixed-point with 12 decimals; `-0` prints as `0`.
pub fn format_number(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Header row plus one comma-separated row per record, LF line endings.
pub fn render_table<I, R>(header: &[String], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), RunnerError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| RunnerError::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| RunnerError::io(path, e))
}

pub fn population_csv(series: &PopulationSeries) -> String {
    let mut header = vec!["t".to_string()];
    header.extend(series.labels.iter().cloned());
    render_table(
        &header,
        series.times.iter().zip(&series.values).map(|(&t, row)| {
            std::iter::once(format_number(t)).chain(row.iter().map(|&p| format_number(p)))
        }),
    )
}

/// Columns `t` and one per basis label.
pub fn write_population_csv(series: &PopulationSeries, path: &Path) -> Result<(), RunnerError> {
    write_file(path, &population_csv(series))
}

pub fn sweep_csv(table: &SweepTable) -> String {
    let n_levels = table.rows.first().map_or(0, |r| r.len());
    let mut header = vec![table.param.clone()];
    header.extend((1..=n_levels).map(|k| format!("E{k}")));
    render_table(
        &header,
        table.grid.iter().zip(&table.rows).map(|(&x, row)| {
            std::iter::once(format_number(x)).chain(row.iter().map(|&e| format_number(e)))
        }),
    )
}

/// Columns: the swept parameter, then `E1..E_dim` ascending.
pub fn write_sweep_csv(table: &SweepTable, path: &Path) -> Result<(), RunnerError> {
    write_file(path, &sweep_csv(table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(1.0), "1.000000000000");
        assert_eq!(format_number(-0.0), "0.000000000000");
        assert_eq!(format_number(-1e-15), "0.000000000000");
        assert_eq!(format_number(-0.5), "-0.500000000000");
        assert_eq!(format_number(std::f64::consts::FRAC_1_SQRT_2), "0.707106781187");
    }

    #[test]
    fn population_header_and_rows() {
        let series = PopulationSeries {
            times: vec![0.0, 0.5],
            labels: (0..8).map(|k| format!("f{k}")).collect(),
            values: vec![vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]; 2],
        };
        let csv = population_csv(&series);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,f0,f1,f2,f3,f4,f5,f6,f7");
        assert_eq!(lines.len(), 3);
        for line in &lines[1..] {
            assert_eq!(line.split(',').nth(3), Some("1.000000000000"));
            assert!(!line.ends_with(','));
        }
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
    }

    #[test]
    fn sweep_rows() {
        let table = SweepTable { param: "K".into(), grid: vec![0.0, 1.0], rows: vec![vec![-1.0, 2.0]; 2] };
        let csv = sweep_csv(&table);
        assert_eq!(csv, "K,E1,E2\n0.000000000000,-1.000000000000,2.000000000000\n1.000000000000,-1.000000000000,2.000000000000\n");
    }
}
