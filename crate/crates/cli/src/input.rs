//! Flag-value parsing: numeric grids, Laguerre level lists, and profile
//! specs (named profiles or a tabulated CSV with header r,rho,value).

use crate::fail::{CliError, CliResult};
use htype_core::biradial::tabulated_profile;
use htype_core::{BiradialProfile, HTypeGroup, PoissonKernel};
use std::path::Path;
use std::sync::Arc;

pub fn parse_f64_list(s: &str) -> CliResult<Vec<f64>> {
    let vals: Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let vals = vals.map_err(|_| CliError::config(format!("`{s}` is not a comma-separated list of numbers")))?;
    if vals.is_empty() {
        return Err(CliError::config(format!("empty list `{s}`")));
    }
    Ok(vals)
}

/// Laguerre levels: either `0,1,3` or a range `0..5` (inclusive).
pub fn parse_levels(s: &str) -> CliResult<Vec<u32>> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| CliError::config(format!("bad range `{s}`")))?;
        let hi: u32 = hi.trim().parse().map_err(|_| CliError::config(format!("bad range `{s}`")))?;
        if hi < lo {
            return Err(CliError::config(format!("empty range `{s}`")));
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| CliError::config(format!("bad level list `{s}`"))))
        .collect()
}

/// Profile spec: `gaussian`, `bump:RADIUS`, `poisson:HEIGHT`, or `csv:PATH`.
pub fn build_profile(group: &Arc<HTypeGroup>, spec: &str) -> CliResult<BiradialProfile> {
    match spec.split_once(':') {
        None if spec == "gaussian" => Ok(BiradialProfile::gaussian(group.clone())),
        Some(("bump", r)) => {
            let radius: f64 = r
                .parse()
                .map_err(|_| CliError::config(format!("bump radius `{r}` is not a number")))?;
            if !(radius > 0.0) {
                return Err(CliError::config("bump radius must be > 0".into()));
            }
            Ok(BiradialProfile::bump(group.clone(), radius))
        }
        Some(("poisson", a)) => {
            let a: f64 = a
                .parse()
                .map_err(|_| CliError::config(format!("poisson height `{a}` is not a number")))?;
            Ok(PoissonKernel::new(group.clone(), a)?.profile())
        }
        Some(("csv", path)) => load_csv_profile(group, Path::new(path)),
        _ => Err(CliError::config(format!(
            "unknown profile `{spec}` (gaussian, bump:R, poisson:A, csv:PATH)"
        ))),
    }
}

/// Tabulated profile: rows (r, rho, value) on a uniform square grid over
/// [0, r_max] x [0, rho_max]. Interpolation is bilinear and therefore
/// lower accuracy than the named function profiles.
fn load_csv_profile(group: &Arc<HTypeGroup>, path: &Path) -> CliResult<BiradialProfile> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let head = rdr
        .headers()
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    if head.iter().collect::<Vec<_>>() != ["r", "rho", "value"] {
        return Err(CliError::config(format!(
            "{}: header must be r,rho,value",
            path.display()
        )));
    }
    let mut triples = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let f = |i: usize| -> CliResult<f64> {
            rec.get(i)
                .and_then(|t| t.trim().parse().ok())
                .ok_or_else(|| CliError::config(format!("{}: bad row {rec:?}", path.display())))
        };
        triples.push((f(0)?, f(1)?, f(2)?));
    }
    let axis = |vals: Vec<f64>| -> CliResult<Vec<f64>> {
        let mut v = vals;
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let n = v.len();
        if n < 2 || v[0].abs() > 1e-12 {
            return Err(CliError::config("grid must start at 0 with >= 2 points per axis".into()));
        }
        let step = v[n - 1] / (n - 1) as f64;
        for (i, x) in v.iter().enumerate() {
            if (x - step * i as f64).abs() > 1e-9 * v[n - 1] {
                return Err(CliError::config("grid spacing must be uniform".into()));
            }
        }
        Ok(v)
    };
    let rs = axis(triples.iter().map(|t| t.0).collect())?;
    let rhos = axis(triples.iter().map(|t| t.1).collect())?;
    if rs.len() != rhos.len() {
        return Err(CliError::config(format!(
            "grid must be square: {} r-values vs {} rho-values",
            rs.len(),
            rhos.len()
        )));
    }
    let nr = rs.len();
    if triples.len() != nr * nr {
        return Err(CliError::config(format!(
            "expected {} rows for a {nr}x{nr} grid, got {}",
            nr * nr,
            triples.len()
        )));
    }
    let (r_max, rho_max) = (rs[nr - 1], rhos[nr - 1]);
    let idx = |x: f64, max: f64| ((x / max) * (nr - 1) as f64).round() as usize;
    let mut values = vec![f64::NAN; nr * nr];
    for (r, rho, v) in triples {
        values[idx(r, r_max) * nr + idx(rho, rho_max)] = v;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(CliError::config("grid has missing or duplicate points".into()));
    }
    Ok(tabulated_profile(group.clone(), r_max, rho_max, nr - 1, values))
}
