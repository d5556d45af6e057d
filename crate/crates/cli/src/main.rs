//! `htype`: experiment runner for the harmonic analysis library. Every
//! command reads an optional JSON config, writes diff-able CSV/JSON/SVG
//! artifacts into the output directory, and exits 0 on pass, 1 on a
//! verification failure, 2 on a usage or config error.

mod config;
mod fail;
mod input;
mod out;

use clap::{Parser, Subcommand, ValueEnum};
use config::{parse_group, RunConfig};
use fail::{CliError, CliResult};
use htype_core::gelfand::gelfand_transform;
use htype_core::group::DomainPoint;
use htype_core::harmonic::{residual_scan, tangential_demo, BoundaryDatum, Extension};
use htype_core::poisson::LaguerreVariant;
use htype_core::verify::{failed_axioms, verify_suite, VerifyOptions};
use htype_core::{GroupDescriptor, HTypeGroup, PoissonKernel, SpectrumPoint};
use input::{build_profile, parse_f64_list, parse_levels};
use out::num;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "htype", version, about = "Harmonic analysis on H-type groups")]
struct Cli {
    /// JSON run configuration; defaults are used when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Group override, e.g. heisenberg:1 or quaternionic:1.
    #[arg(long, global = true)]
    group: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Group structure checks.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Gelfand transform of a biradial profile on a spectrum grid.
    Transform {
        /// gaussian, bump:R, poisson:A, or csv:PATH (header r,rho,value).
        #[arg(long, default_value = "gaussian")]
        profile: String,
        #[arg(long = "bessel-mu", default_value = "0.5,1,2")]
        bessel_mu: String,
        #[arg(long = "laguerre-nu", default_value = "0.5,1,2")]
        laguerre_nu: String,
        /// Levels as a list (0,1,3) or inclusive range (0..3).
        #[arg(long = "laguerre-l", default_value = "0..2")]
        laguerre_l: String,
    },
    /// Poisson kernel commands.
    Poisson {
        #[command(subcommand)]
        cmd: PoissonCmd,
    },
    /// Harmonic extension commands.
    Harmonic {
        #[command(subcommand)]
        cmd: HarmonicCmd,
    },
    /// Single JSON bundling the full consistency suite.
    Report {
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Validate the H-type axioms at seeded random points.
    Validate,
}

#[derive(Subcommand)]
enum PoissonCmd {
    /// Closed-form transform values against the defining-integral oracle.
    Hat {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, value_enum, default_value_t = Variant::Corrected)]
        variant: Variant,
        #[arg(long = "bessel-mu", default_value = "0.5,1,2")]
        bessel_mu: String,
        #[arg(long = "laguerre-nu", default_value = "0.5,1,2")]
        laguerre_nu: String,
        #[arg(long = "laguerre-l", default_value = "0..2")]
        laguerre_l: String,
    },
    /// Full consistency suite; exits nonzero on any failure.
    Verify {
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Subcommand)]
enum HarmonicCmd {
    /// Tangential-convergence table (CSV) and tail plot (SVG).
    Demo {
        #[arg(long, default_value_t = 0.25)]
        alpha: f64,
        #[arg(long = "bump-radius", default_value_t = 1.0)]
        bump_radius: f64,
        #[arg(long, default_value = "0.5,1,2")]
        heights: String,
        #[arg(long, default_value = "4,8,16")]
        radii: String,
        #[arg(long, default_value_t = 10)]
        resolution: usize,
    },
    /// Laplace-Beltrami residual of the extension across step sizes.
    Residual {
        #[arg(long, default_value_t = 0.25)]
        alpha: f64,
        #[arg(long = "bump-radius", default_value_t = 1.0)]
        bump_radius: f64,
        #[arg(long, default_value_t = 0.5)]
        height: f64,
        /// Interior point as x-coords then z-coords, e.g. 0.2,0.1,0.05.
        #[arg(long, default_value = "0.2,0.1,0.05")]
        point: String,
        #[arg(long, default_value = "0.2,0.1,0.05")]
        steps: String,
        #[arg(long, default_value_t = 10)]
        resolution: usize,
    },
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Variant {
    Corrected,
    Paper,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&e).expect("error serializes"));
            ExitCode::from(e.exit)
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let mut cfg = RunConfig::load(cli.config.as_ref())?;
    if let Some(g) = &cli.group {
        cfg.group = parse_group(g)?;
    }
    match cli.cmd {
        Cmd::Group { cmd: GroupCmd::Validate } => cmd_group_validate(&cfg),
        Cmd::Transform { profile, bessel_mu, laguerre_nu, laguerre_l } => {
            cmd_transform(&cfg, &profile, &bessel_mu, &laguerre_nu, &laguerre_l)
        }
        Cmd::Poisson { cmd } => match cmd {
            PoissonCmd::Hat { a, variant, bessel_mu, laguerre_nu, laguerre_l } => {
                cmd_poisson_hat(&cfg, a, variant, &bessel_mu, &laguerre_nu, &laguerre_l)
            }
            PoissonCmd::Verify { quick } => cmd_poisson_verify(&cfg, quick),
        },
        Cmd::Harmonic { cmd } => match cmd {
            HarmonicCmd::Demo { alpha, bump_radius, heights, radii, resolution } => {
                cmd_harmonic_demo(&cfg, alpha, bump_radius, &heights, &radii, resolution)
            }
            HarmonicCmd::Residual {
                alpha,
                bump_radius,
                height,
                point,
                steps,
                resolution,
            } => cmd_harmonic_residual(&cfg, alpha, bump_radius, height, &point, &steps, resolution),
        },
        Cmd::Report { quick } => cmd_report(&cfg, quick),
    }
}

fn make_group(desc: &GroupDescriptor) -> CliResult<Arc<HTypeGroup>> {
    Ok(Arc::new(HTypeGroup::from_descriptor(desc)?))
}

#[derive(Serialize)]
struct ValidateOut<'a> {
    config: &'a RunConfig,
    report: htype_core::ValidationReport,
    failed_axioms: Vec<&'static str>,
}

fn cmd_group_validate(cfg: &RunConfig) -> CliResult<ExitCode> {
    let group = make_group(&cfg.group)?;
    let report = group.validate(cfg.seed);
    let doc = ValidateOut {
        config: cfg,
        failed_axioms: failed_axioms(&report),
        report,
    };
    let text = out::write_json(&cfg.out_path("group_validate.json")?, &doc)?;
    println!("{text}");
    Ok(if doc.report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_transform(
    cfg: &RunConfig,
    profile: &str,
    bessel_mu: &str,
    laguerre_nu: &str,
    laguerre_l: &str,
) -> CliResult<ExitCode> {
    let group = make_group(&cfg.group)?;
    let f = build_profile(&group, profile)?;
    let mut rows = Vec::new();
    for &mu in &parse_f64_list(bessel_mu)? {
        let q = gelfand_transform(&f, &SpectrumPoint::bessel(mu)?, cfg.transform_tol)?;
        rows.push(vec!["bessel".into(), num(mu), String::new(), num(q.value), num(q.error)]);
    }
    for &nu in &parse_f64_list(laguerre_nu)? {
        for &l in &parse_levels(laguerre_l)? {
            let q = gelfand_transform(&f, &SpectrumPoint::laguerre(nu, l)?, cfg.transform_tol)?;
            rows.push(vec!["laguerre".into(), num(nu), l.to_string(), num(q.value), num(q.error)]);
        }
    }
    let path = cfg.out_path("transform.csv")?;
    out::write_csv(&path, &["branch", "nu_or_mu", "l", "value", "err_estimate"], &rows)?;
    println!("wrote {} ({} rows)", path.display(), rows.len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_poisson_hat(
    cfg: &RunConfig,
    a: f64,
    variant: Variant,
    bessel_mu: &str,
    laguerre_nu: &str,
    laguerre_l: &str,
) -> CliResult<ExitCode> {
    let group = make_group(&cfg.group)?;
    let kernel = PoissonKernel::new(group, a)?;
    let profile = kernel.profile();
    let oracle_tol = cfg.transform_tol;
    let mut rows = Vec::new();
    let mut push = |branch: String, x: f64, l: String, closed: f64, oracle: f64| {
        let rel = (closed - oracle).abs() / oracle.abs().max(1e-300);
        rows.push(vec![branch, num(x), l, num(closed), num(oracle), num(rel)]);
    };
    for &mu in &parse_f64_list(bessel_mu)? {
        let closed = kernel.hat_bessel(mu, cfg.quad_tol)?.value;
        let oracle = gelfand_transform(&profile, &SpectrumPoint::bessel(mu)?, oracle_tol)?.value;
        push("bessel".into(), mu, String::new(), closed, oracle);
    }
    let variants: &[(LaguerreVariant, &str)] = match variant {
        Variant::Corrected => &[(LaguerreVariant::Corrected, "laguerre-corrected")],
        Variant::Paper => &[(LaguerreVariant::Paper, "laguerre-paper")],
        Variant::Both => &[
            (LaguerreVariant::Corrected, "laguerre-corrected"),
            (LaguerreVariant::Paper, "laguerre-paper"),
        ],
    };
    for &nu in &parse_f64_list(laguerre_nu)? {
        for &l in &parse_levels(laguerre_l)? {
            let oracle =
                gelfand_transform(&profile, &SpectrumPoint::laguerre(nu, l)?, oracle_tol)?.value;
            for &(v, name) in variants {
                let closed = kernel.hat_laguerre(nu, l, v, cfg.quad_tol)?.value;
                push(name.into(), nu, l.to_string(), closed, oracle);
            }
        }
    }
    let path = cfg.out_path("poisson_hat.csv")?;
    out::write_csv(
        &path,
        &["branch", "nu_or_mu", "l", "closed_form", "oracle", "rel_err"],
        &rows,
    )?;
    println!("wrote {} ({} rows)", path.display(), rows.len());
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyOut<'a> {
    config: &'a RunConfig,
    report: htype_core::VerifyReport,
}

fn cmd_poisson_verify(cfg: &RunConfig, quick: bool) -> CliResult<ExitCode> {
    let opts = VerifyOptions { tol: cfg.transform_tol, seed: cfg.seed, quick };
    let report = verify_suite(&cfg.group, &opts)?;
    let pass = report.pass;
    let doc = VerifyOut { config: cfg, report };
    let text = out::write_json(&cfg.out_path("poisson_verify.json")?, &doc)?;
    println!("{text}");
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn demo_budget(cfg: &RunConfig, resolution: usize) -> CliResult<()> {
    // Extension sums a (2n+1)^2 x (2n+1) boundary grid twice per eval.
    let n = 2 * resolution + 1;
    if 2 * n * n * n > cfg.node_budget {
        return Err(CliError::config(format!(
            "resolution {resolution} needs {} nodes per eval, over node_budget {}",
            2 * n * n * n,
            cfg.node_budget
        )));
    }
    Ok(())
}

fn cmd_harmonic_demo(
    cfg: &RunConfig,
    alpha: f64,
    bump_radius: f64,
    heights: &str,
    radii: &str,
    resolution: usize,
) -> CliResult<ExitCode> {
    demo_budget(cfg, resolution)?;
    let group = make_group(&cfg.group)?;
    let heights = parse_f64_list(heights)?;
    let radii = parse_f64_list(radii)?;
    let datum = BoundaryDatum::bump(group, alpha, bump_radius)?;
    let table = tangential_demo(&datum, &heights, &radii, resolution)?;
    let mut rows = Vec::new();
    for (i, a) in table.heights.iter().enumerate() {
        for (j, r) in table.radii.iter().enumerate() {
            let cell = &table.rows[i][j];
            rows.push(vec![num(*a), num(*r), num(cell.value), num(cell.error)]);
        }
    }
    let csv_path = cfg.out_path("harmonic_demo.csv")?;
    out::write_csv(&csv_path, &["a", "radius", "sup_gap", "err_estimate"], &rows)?;
    let tails: Vec<Vec<f64>> = table
        .rows
        .iter()
        .map(|row| row.iter().map(|c| c.value).collect())
        .collect();
    let svg_path = cfg.out_path("harmonic_demo.svg")?;
    std::fs::write(&svg_path, out::tail_plot_svg(&table.heights, &table.radii, &tails))
        .map_err(fail::CliError::io)?;
    println!(
        "wrote {} and {}; columns decrease: {}, final entries agree: {}",
        csv_path.display(),
        svg_path.display(),
        table.columns_decrease(),
        table.final_entries_agree()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_harmonic_residual(
    cfg: &RunConfig,
    alpha: f64,
    bump_radius: f64,
    height: f64,
    point: &str,
    steps: &str,
    resolution: usize,
) -> CliResult<ExitCode> {
    demo_budget(cfg, resolution)?;
    let group = make_group(&cfg.group)?;
    let coords = parse_f64_list(point)?;
    if coords.len() != group.dim_v() + group.dim_z() {
        return Err(CliError::config(format!(
            "point needs {} coordinates for this group, got {}",
            group.dim_v() + group.dim_z(),
            coords.len()
        )));
    }
    let (xs, zs) = coords.split_at(group.dim_v());
    let element = group.element(xs.to_vec(), zs.to_vec())?;
    let p = DomainPoint::new(element, height)?;
    let hs = parse_f64_list(steps)?;
    let datum = BoundaryDatum::bump(group.clone(), alpha, bump_radius)?;
    let ext = Extension::new(&datum, resolution)?;
    let noise_floor = 1e-9 + alpha.abs() * 1e-6;
    let scan = residual_scan(&group, |n, a| ext.eval(n, a), &p, &hs, noise_floor)?;
    let rows: Vec<Vec<String>> = scan
        .iter()
        .map(|row| {
            vec![
                num(row.h),
                num(row.residual),
                row.ratio.map(num).unwrap_or_default(),
                num(noise_floor),
            ]
        })
        .collect();
    let path = cfg.out_path("harmonic_residual.csv")?;
    out::write_csv(&path, &["h", "residual", "ratio", "err_estimate"], &rows)?;
    println!("wrote {} ({} rows)", path.display(), rows.len());
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ReportOut<'a> {
    config: &'a RunConfig,
    validation: htype_core::ValidationReport,
    verify: htype_core::VerifyReport,
    paper_variant_sign_pattern: Vec<i8>,
    corrected_variant_min_abs: f64,
    oracle_max_rel_err: f64,
    pass: bool,
}

fn cmd_report(cfg: &RunConfig, quick: bool) -> CliResult<ExitCode> {
    let group = make_group(&cfg.group)?;
    let validation = group.validate(cfg.seed);
    let opts = VerifyOptions { tol: cfg.transform_tol, seed: cfg.seed, quick };
    let verify = verify_suite(&cfg.group, &opts)?;
    let pass = validation.pass && verify.pass;
    let doc = ReportOut {
        config: cfg,
        validation,
        paper_variant_sign_pattern: verify.erratum.paper_variant_sign_pattern.clone(),
        corrected_variant_min_abs: verify.erratum.corrected_variant_min_abs,
        oracle_max_rel_err: verify.erratum.oracle_max_rel_err,
        verify,
        pass,
    };
    let text = out::write_json(&cfg.out_path("report.json")?, &doc)?;
    println!("{text}");
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
