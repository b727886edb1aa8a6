use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use cql_core::bubbles::{
    bubble_energy_with, bubble_mass_with, deficit_expansion_4d_with, deficit_expansion_with, sobolev_constant,
    BubbleSpec,
};
use cql_core::grid::load_grid;
use cql_core::lorentz::{decreasing_rearrangement, lorentz_norm, split_domain, LorentzExponents, LorentzIndex};
use cql_core::minimize::minimize_quotient;
use cql_core::quad::QuadOptions;
use rayon::prelude::*;

use crate::config::Scenario;
use crate::error::CliError;

/// Writes `contents` to `dir/name` through a temporary file in the same directory.
pub fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf, CliError> {
    let target = dir.join(name);
    let err = |source| CliError::Output {
        path: target.clone(),
        source,
    };
    std::fs::create_dir_all(dir).map_err(err)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(contents).map_err(err)?;
    tmp.persist(&target).map_err(|e| err(e.error))?;
    Ok(target)
}

fn csv<F>(f: F) -> Result<Vec<u8>, CliError>
where
    F: FnOnce(&mut Vec<u8>) -> cql_core::Result<()>,
{
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn relative_spread(values: &[f64], target: f64) -> f64 {
    values.iter().map(|v| (v - target).abs() / target.abs()).fold(0.0, f64::max)
}

pub struct BubbleVerify {
    pub n: usize,
    pub eps: Vec<f64>,
    pub quad_tol: f64,
    pub check_tol: f64,
}

pub fn bubble_verify(args: &BubbleVerify, out: &Path) -> Result<String, CliError> {
    let opts = QuadOptions::with_rel_tol(args.quad_tol);
    let rows: Vec<(f64, f64, f64)> = args
        .eps
        .par_iter()
        .map(|&e| {
            let spec = BubbleSpec::new(args.n, e)?;
            Ok((e, bubble_energy_with(&spec, 0.0, opts)?, bubble_mass_with(&spec, opts)))
        })
        .collect::<Result<_, CliError>>()?;
    let target = sobolev_constant(args.n)?.powf(args.n as f64 / 2.0);

    let mut text = String::from("eps,energy,mass,target\n");
    for &(e, en, m) in &rows {
        writeln!(text, "{e},{en},{m},{target}").unwrap();
    }
    write_atomic(out, &format!("bubble_verify_n{}.csv", args.n), text.as_bytes())?;

    let values: Vec<f64> = rows.iter().flat_map(|&(_, en, m)| [en, m]).collect();
    let spread = relative_spread(&values, values[0]);
    if spread > args.check_tol {
        return Err(CliError::Check(format!(
            "bubble energies and masses spread by {spread:e}, above {:e}",
            args.check_tol
        )));
    }
    Ok(format!("n={} value={} S^(n/2)={} spread={spread:e}", args.n, values[0], target))
}

pub struct Deficit {
    pub n: usize,
    pub lambda: f64,
    pub mu: f64,
    pub eps: Vec<f64>,
    pub quad_tol: f64,
}

pub fn deficit(args: &Deficit, out: &Path) -> Result<String, CliError> {
    let opts = QuadOptions::with_rel_tol(args.quad_tol);
    let stem = format!("deficit_n{}_lambda{}_mu{}", args.n, args.lambda, args.mu);
    let mut summary = String::from("n,lambda,mu,fitted_exponent,fitted_constant,residual");
    if args.n == 4 {
        let d = deficit_expansion_4d_with(args.lambda, args.mu, &args.eps, opts)?;
        let fit = &d.fit;
        summary.push_str(",pure_residual,residual_ratio,preferred,cutoff_constant,sign_radius\n");
        let preferred = if d.residual_ratio > 1.0 { "log" } else { "pure" };
        let radius = d.sign_radius.map_or("none".to_string(), |r| r.to_string());
        writeln!(
            summary,
            "4,{},{},{},{},{},{},{},{preferred},{},{radius}",
            fit.lambda, fit.mu, fit.fitted_exponent, fit.fitted_constant, fit.residual, d.pure_residual,
            d.residual_ratio, d.cutoff_constant
        )
        .unwrap();
        write_atomic(out, &format!("{stem}.csv"), &csv(|w| fit.write_csv(w))?)?;
        let mut bracket = String::from("R,phi,bracket\n");
        for (&(r, p), b) in d.phi_table.iter().zip(&d.bracket) {
            writeln!(bracket, "{r},{p},{b}").unwrap();
        }
        write_atomic(out, &format!("{stem}_bracket.csv"), bracket.as_bytes())?;
    } else {
        let fit = deficit_expansion_with(args.n, args.lambda, args.mu, &args.eps, opts)?;
        summary.push('\n');
        writeln!(
            summary,
            "{},{},{},{},{},{}",
            fit.n, fit.lambda, fit.mu, fit.fitted_exponent, fit.fitted_constant, fit.residual
        )
        .unwrap();
        write_atomic(out, &format!("{stem}.csv"), &csv(|w| fit.write_csv(w))?)?;
    }
    write_atomic(out, &format!("{stem}_summary.csv"), summary.as_bytes())?;
    Ok(summary.lines().nth(1).unwrap().to_string())
}

/// Runs every scenario; reports are written for all that succeed and the first
/// failure, in argument order, is returned.
pub fn minimize(configs: &[PathBuf], seed: Option<u64>, out: &Path) -> Result<String, CliError> {
    let results: Vec<Result<String, CliError>> = configs
        .par_iter()
        .map(|path| {
            let mut sc = Scenario::load(path)?;
            if seed.is_some() {
                sc.options.seed = seed;
            }
            let rep = minimize_quotient(&sc.potential, &sc.domain, sc.init.clone(), &sc.options)?;
            write_atomic(out, &format!("{}.csv", sc.name), &csv(|w| rep.write_csv(w))?)?;
            write_atomic(out, &format!("{}_summary.csv", sc.name), &csv(|w| rep.write_summary(w))?)?;
            Ok(format!(
                "{}: s_a={} S={} status={} iterations={} el_residual={}",
                sc.name,
                rep.s_a_estimate,
                rep.sobolev,
                rep.status,
                rep.iterations(),
                rep.el_residual
            ))
        })
        .collect();
    let mut lines = Vec::new();
    for r in results {
        lines.push(r?);
    }
    Ok(lines.join("\n"))
}

pub fn parse_index(s: &str) -> Result<LorentzIndex, String> {
    match s {
        "inf" | "infinity" => Ok(LorentzIndex::Infinity),
        _ => s.parse().map(LorentzIndex::Finite).map_err(|_| format!("invalid index `{s}`")),
    }
}

fn index_str(d: LorentzIndex) -> String {
    match d {
        LorentzIndex::Finite(v) => v.to_string(),
        LorentzIndex::Infinity => "inf".into(),
    }
}

fn grid_stem(path: &Path) -> &str {
    path.file_stem().and_then(|s| s.to_str()).unwrap_or("grid")
}

pub fn lorentz(grid: &Path, p: &[f64], d: &[LorentzIndex], out: &Path) -> Result<String, CliError> {
    let f = load_grid(grid)?;
    let profile = decreasing_rearrangement(&f);
    let mut text = String::from("p,d,norm\n");
    for &p in p {
        for &d in d {
            let norm = lorentz_norm(&profile, LorentzExponents::new(p, d)?);
            writeln!(text, "{p},{},{norm}", index_str(d)).unwrap();
        }
    }
    write_atomic(out, &format!("lorentz_{}.csv", grid_stem(grid)), text.as_bytes())?;
    Ok(text.trim_end().to_string())
}

pub fn split(grid: &Path, p: f64, d: LorentzIndex, tol: f64, out: &Path) -> Result<String, CliError> {
    let a = load_grid(grid)?;
    let r = split_domain(&a, LorentzExponents::new(p, d)?, tol)?;
    let count = |m: &[bool]| m.iter().filter(|&&b| b).count();
    let mut text = String::from("p,d,tol,bound_k,tail_norm,inner_cells,outer_cells\n");
    writeln!(
        text,
        "{p},{},{tol},{},{},{},{}",
        index_str(d),
        r.bound_k,
        r.tail_norm,
        count(&r.inner_mask),
        count(&r.outer_mask)
    )
    .unwrap();
    write_atomic(out, &format!("split_{}.csv", grid_stem(grid)), text.as_bytes())?;
    Ok(text.lines().nth(1).unwrap().to_string())
}
