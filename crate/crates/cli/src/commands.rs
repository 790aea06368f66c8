use std::fs;
use std::path::{Path, PathBuf};

use zakframe::framescan::{PointStatus, ProbeStatus};
use zakframe::identities::{catalog_with, verify_all, CatalogOptions, IdentityId};
use zakframe::xprec::Real;
use zakframe::{
    certify_obstruction, obstruction_points, scan_hyperbola, with_precision, zak_eval,
    Coord, FrameBoundsEstimate, GridSpec, HermiteWindow, HyperbolaScan, Precision, RationalDensity,
};

use crate::output::{gnuplot_script, num, scan_csv, write_file, write_stdout};
use crate::{CliError, EvalArgs, FigArgs, GridArgs, ObstructionArgs, ScanArgs, VerifyArgs, ZakArgs};

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn format_real<T: Real>(v: T, precision: Precision) -> String {
    if v == T::zero() {
        "0".into()
    } else if precision == Precision::Bits53 {
        num(v.to_f64())
    } else {
        let digits = (precision.bits() as f64 * std::f64::consts::LOG10_2) as usize;
        v.to_sci_string(digits)
    }
}

pub fn eval(a: EvalArgs) -> Result<(), CliError> {
    let line = with_precision!(a.precision, T => {
        let x = T::parse_decimal(&a.x).map_err(usage)?;
        format_real(a.window.eval(x), a.precision)
    });
    write_stdout(&format!("{line}\n"))
}

fn default_tol(precision: Precision, w: &HermiteWindow) -> f64 {
    precision.unit_roundoff() * 1024.0 * (1.0 + w.l1_norm())
}

pub fn zak(a: ZakArgs) -> Result<(), CliError> {
    let x: Coord = a.x.parse().map_err(usage)?;
    let gamma: Coord = a.gamma.parse().map_err(usage)?;
    let tol = a.tol.unwrap_or_else(|| default_tol(a.precision, &a.window));
    let out = with_precision!(a.precision, T => {
        let z = zak_eval::<T>(&a.window, a.lambda, x, gamma, tol).map_err(usage)?;
        format!(
            "re = {}\nim = {}\nabs = {}\ntruncation_bound = {:e}\nterms_used = {}\n",
            format_real(z.value.re, a.precision),
            format_real(z.value.im, a.precision),
            format_real(z.abs(), a.precision),
            z.truncation_bound,
            z.terms_used
        )
    });
    write_stdout(&out)
}

fn parse_probe(s: &str) -> Result<(Coord, Coord), CliError> {
    let (x, g) = s
        .split_once(',')
        .ok_or_else(|| usage(format!("probe `{s}` must be `x,gamma`")))?;
    Ok((x.trim().parse().map_err(usage)?, g.trim().parse().map_err(usage)?))
}

fn grid_spec(g: &GridArgs) -> Result<GridSpec, CliError> {
    let probes = g.probes.iter().map(|p| parse_probe(p)).collect::<Result<Vec<_>, _>>()?;
    Ok(GridSpec::uniform(g.nx, g.ngamma).with_probes(probes))
}

fn run_scan(
    window: &HermiteWindow,
    density: RationalDensity,
    b_range: (f64, f64),
    samples: usize,
    extra_b: Vec<zakframe::ZakParameter>,
    grid: &GridArgs,
) -> Result<Vec<FrameBoundsEstimate>, CliError> {
    let mut scan = HyperbolaScan::new(b_range.0, b_range.1, samples);
    scan.grid = grid_spec(grid)?;
    scan.tol = grid.tol;
    scan.inject_known_probes = !grid.no_probes;
    scan.extra_b = extra_b;
    let rows = scan_hyperbola(window, density, &scan).map_err(usage)?;
    report_scan(window, density, &rows);
    Ok(rows)
}

fn report_scan(window: &HermiteWindow, density: RationalDensity, rows: &[FrameBoundsEstimate]) {
    let low = rows.iter().filter(|r| r.sqrt_a <= 1e-12).count();
    eprintln!(
        "h={window} ab={density}: {} rows, {low} with sqrt(A) <= 1e-12",
        rows.len()
    );
    for r in rows.iter().filter(|r| r.probe.is_some()) {
        let p = r.probe.as_ref().expect("filtered");
        let kind = match p.status {
            ProbeStatus::ExpectedZero => "expected zero",
            ProbeStatus::ExpectedInconclusive => "expected inconclusive",
        };
        eprintln!("  probe {} ({kind}): b={} sqrt(A)={:e}", p.label, num(r.b), r.sqrt_a);
    }
    if rows.iter().all(|r| r.sqrt_a > 1e-12) {
        eprintln!("  no obstruction found on the grid (this does not certify a frame)");
    }
}

fn emit(rows: &[FrameBoundsEstimate], out: Option<&Path>, gp: Option<&Path>, title: &str) -> Result<(), CliError> {
    let csv = scan_csv(rows);
    match out {
        Some(p) => write_file(p, &csv)?,
        None => write_stdout(&csv)?,
    }
    if let Some(gp) = gp {
        let data = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("scan.csv"));
        write_file(gp, &gnuplot_script(&data, title))?;
    }
    Ok(())
}

pub fn scan(a: ScanArgs) -> Result<(), CliError> {
    let rows = run_scan(&a.window, a.density, (a.b_min, a.b_max), a.samples, a.extra_b, &a.grid)?;
    let title = format!("h = {} along ab = {}", a.window, a.density);
    emit(&rows, a.out.as_deref(), a.gnuplot.as_deref(), &title)
}

fn figure(out_dir: &Path, stem: &str, window: u32, density: (u32, u32), b_range: (f64, f64), a: &FigArgs) -> Result<(), CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out_dir.display())))?;
    let w = HermiteWindow::single(window).map_err(usage)?;
    let d = RationalDensity::new(density.0, density.1).map_err(usage)?;
    let rows = run_scan(&w, d, b_range, a.samples, Vec::new(), &a.grid)?;
    let csv = out_dir.join(format!("{stem}.csv"));
    let gp = out_dir.join(format!("{stem}.gp"));
    let title = format!("h{window} along ab = {d}");
    emit(&rows, Some(&csv), Some(&gp), &title)?;
    eprintln!("wrote {} and {}", csv.display(), gp.display());
    Ok(())
}

pub fn fig2(a: FigArgs) -> Result<(), CliError> {
    figure(&a.out_dir, "fig2_h2", 2, (1, 2), (0.125, 4.0), &a)
}

pub fn fig3(a: FigArgs) -> Result<(), CliError> {
    figure(&a.out_dir, "fig3_h4", 4, (1, 2), (0.125, 4.0), &a)?;
    figure(&a.out_dir, "fig3_h5", 5, (1, 3), (1.0 / 12.0, 4.0), &a)
}

fn parse_ids(sel: &[String]) -> Result<Vec<IdentityId>, CliError> {
    use IdentityId::*;
    let all = [I1, I2, I3, I4, I5, I6, I7];
    let mut out = Vec::new();
    for s in sel {
        if s.eq_ignore_ascii_case("all") {
            return Ok(all.to_vec());
        }
        let id = all
            .iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| usage(format!("unknown identity `{s}` (expected I1..I7 or all)")))?;
        if !out.contains(id) {
            out.push(*id);
        }
    }
    Ok(out)
}

pub fn verify(a: VerifyArgs) -> Result<(), CliError> {
    let ids = parse_ids(&a.cases)?;
    let tol = a.tol.unwrap_or(match a.precision {
        Precision::Bits53 => 1e-12,
        Precision::Bits106 => 1e-25,
        Precision::Bits212 => 1e-30,
    });
    let mut opts = CatalogOptions {
        m_values: a.m,
        class_windows: a.class_windows,
        ..Default::default()
    };
    if let Some(seed) = a.seed {
        opts.seed = seed;
    }
    let cases: Vec<_> = catalog_with(&opts)
        .into_iter()
        .filter(|c| ids.contains(&c.id))
        .collect();
    let mut lines = String::new();
    let mut failed = 0;
    for rep in verify_all(&cases, a.precision, tol) {
        let rep = rep.map_err(usage)?;
        if !rep.passed() {
            failed += 1;
        }
        let json = serde_json::to_string(&rep.record()).expect("records serialize");
        lines.push_str(&json);
        lines.push('\n');
    }
    write_stdout(&lines)?;
    eprintln!(
        "{} cases at {} bits, tol {tol:e}: {} PASS, {failed} FAIL",
        cases.len(),
        a.precision.bits(),
        cases.len() - failed
    );
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} identities failed")));
    }
    Ok(())
}

pub fn obstructions(a: ObstructionArgs) -> Result<(), CliError> {
    let class = a
        .window
        .eigenclass()
        .ok_or_else(|| usage(format!("window {} is not in a single Fourier eigenspace", a.window)))?;
    let mut out = String::new();
    let mut failed = 0;
    let mut applied = 0;
    for pt in obstruction_points() {
        let head = format!("point {} (a,b)=({}, {}) ab={}", pt.id, pt.a, pt.b, pt.density);
        match pt.status_for(&a.window) {
            PointStatus::Applies => {
                applied += 1;
                let r = certify_obstruction(&a.window, &pt, a.tol, a.precision).map_err(usage)?;
                if !r.pass {
                    failed += 1;
                }
                let partner = r
                    .partner
                    .map(|(id, ok)| format!(" swap-partner={id}:{}", if ok { "PASS" } else { "FAIL" }))
                    .unwrap_or_default();
                out.push_str(&format!(
                    "{head}: {} witness=({}, {}) residual={:e} truncation={:e}{partner}\n",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.witness.0,
                    r.witness.1,
                    r.residual,
                    r.truncation_bound
                ));
            }
            PointStatus::CoveredByOddSymmetry => {
                out.push_str(&format!("{head}: covered by odd symmetry\n"));
            }
            PointStatus::NotApplicable => {
                let classes: Vec<String> = pt.classes().iter().map(|c| format!("H{c}")).collect();
                out.push_str(&format!("{head}: skipped (applies to {})\n", classes.join(", ")));
            }
        }
    }
    if applied == 0 {
        out.push_str(&format!("no obstruction points apply to class H{class}\n"));
    }
    write_stdout(&out)?;
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} certificates failed")));
    }
    Ok(())
}
