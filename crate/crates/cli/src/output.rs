use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use zakframe::FrameBoundsEstimate;

use crate::CliError;

pub const CSV_HEADER: &str = "b,a,sqrtA,sqrtB,argmin_x,argmin_gamma,max_trunc";

/// Shortest representation that round-trips.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e16).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn scan_csv(rows: &[FrameBoundsEstimate]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            num(r.b),
            num(r.a),
            num(r.sqrt_a),
            num(r.sqrt_b),
            num(r.argmin.0.to_f64()),
            num(r.argmin.1.to_f64()),
            num(r.max_truncation)
        );
    }
    s
}

pub fn gnuplot_script(csv: &Path, title: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set logscale x\n\
         set logscale y\n\
         set xlabel 'b'\n\
         set title '{title}'\n\
         plot '{csv}' using 1:3 with lines title 'sqrt(A)', \\\n     \
         '{csv}' using 1:4 with lines title 'sqrt(B)'\n",
        csv = csv.display()
    )
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn write_stdout(contents: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(contents.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Io(format!("cannot write to standard output: {e}")))
}
