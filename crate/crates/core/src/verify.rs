//! The end-to-end consistency suite behind `poisson verify` and `report`:
//! axiom validation, kernel normalization, the two-route partial Fourier
//! transform, the Laplace-transform identity, the β-representation of the
//! reduced transform, closed forms against the defining-integral oracle,
//! the nonvanishing scan, and the erratum adjudication for the printed
//! Laguerre-branch formula.

use crate::error::{Error, Result};
use crate::gelfand::{gelfand_transform, SpectrumPoint};
use crate::group::{GroupDescriptor, HTypeGroup, ValidationReport};
use crate::poisson::{normalization_constant, LaguerreVariant, PoissonKernel};
use crate::quad;
use crate::special::ln_gamma_fn;
use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOptions {
    pub tol: f64,
    pub seed: u64,
    /// Smaller grids for the expensive oracle comparisons.
    pub quick: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tol: 1e-4, seed: 17, quick: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NormCheck {
    pub a: f64,
    pub mass: f64,
    pub error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RouteCheck {
    pub x_norm: f64,
    pub nu: f64,
    pub direct: f64,
    pub direct_imag: f64,
    pub reduced: f64,
    pub rel_diff: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LaplaceCheck {
    pub order: u32,
    pub big_a: f64,
    pub z_norm: f64,
    pub abs_err: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaRepCheck {
    pub x_norm: f64,
    pub nu: f64,
    pub reduced: f64,
    pub beta_form: f64,
    pub rel_diff: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HatCheck {
    pub a: f64,
    pub point: SpectrumPoint,
    pub closed: f64,
    pub oracle: f64,
    pub rel_err: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErratumEntry {
    pub l: u32,
    pub paper_value: f64,
    pub corrected_value: f64,
    pub oracle_value: f64,
}

/// Adjudication of the printed Laguerre-branch closed form against the
/// corrected derivation, with the defining integral as the referee.
#[derive(Debug, Clone, Serialize)]
pub struct ErratumReport {
    pub a: f64,
    pub nu: f64,
    pub entries: Vec<ErratumEntry>,
    pub paper_variant_sign_pattern: Vec<i8>,
    pub oracle_sign_pattern: Vec<i8>,
    pub corrected_variant_min_abs: f64,
    pub oracle_max_rel_err: f64,
    pub verdict: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub group: GroupDescriptor,
    pub options: VerifyOptions,
    pub validation: ValidationReport,
    pub c_norm: f64,
    pub norm_checks: Vec<NormCheck>,
    pub partial_fourier: Vec<RouteCheck>,
    pub laplace_identity: Vec<LaplaceCheck>,
    pub beta_representation: Vec<BetaRepCheck>,
    pub hat_bessel: Vec<HatCheck>,
    pub hat_laguerre: Vec<HatCheck>,
    pub nonvanishing_min_abs: f64,
    pub erratum: ErratumReport,
    pub pass: bool,
}

/// 1/(A + i|Z|)^{r+1} = (1/r!) ∫₀^∞ e^{−α(A+i|Z|)} α^r dα, checked in both
/// real and imaginary parts at quadrature accuracy.
fn laplace_identity_check(order: u32, big_a: f64, z: f64) -> Result<LaplaceCheck> {
    let r = order as f64;
    let denom = nalgebra::Complex::new(big_a, z).powf(r + 1.0);
    let closed = nalgebra::Complex::new(1.0, 0.0) / denom;
    let inv_fact = (-ln_gamma_fn(r + 1.0)).exp();
    let re = quad::integrate_halfline(
        |al| inv_fact * (-al * big_a).exp() * (al * z).cos() * al.powf(r),
        1e-12,
    )?;
    let im = quad::integrate_halfline(
        |al| -inv_fact * (-al * big_a).exp() * (al * z).sin() * al.powf(r),
        1e-12,
    )?;
    let abs_err = ((re.value - closed.re).powi(2) + (im.value - closed.im).powi(2)).sqrt();
    Ok(LaplaceCheck { order, big_a, z_norm: z, abs_err, pass: abs_err < 1e-8 })
}

/// Reduced partial Fourier value against its β-representation
/// C″ e^{−νA} Σ-free form ∫₀^∞ e^{−(2β+ν)A}(β+ν)^S β^S dβ with
/// S = (2m+k−1)/2, the constant pinned at the first grid point.
fn beta_rep_value(group: &HTypeGroup, big_a: f64, nu: f64) -> Result<f64> {
    let m = group.m() as f64;
    let k = group.k() as f64;
    let big_s = (2.0 * m + k - 1.0) / 2.0;
    let q = quad::integrate_halfline(
        move |b| {
            if b <= 0.0 {
                0.0
            } else {
                (-(2.0 * b + nu) * big_a + big_s * ((b + nu).ln() + b.ln())).exp()
            }
        },
        1e-12,
    )?;
    Ok(q.value)
}

pub fn erratum_report(kernel: &PoissonKernel, a: f64, nu: f64, l_max: u32) -> Result<ErratumReport> {
    let profile = kernel.profile();
    let mut entries = Vec::new();
    let mut paper_signs = Vec::new();
    let mut oracle_signs = Vec::new();
    let mut min_abs = f64::INFINITY;
    let mut max_rel: f64 = 0.0;
    for l in 0..=l_max {
        let paper = kernel.hat_laguerre(nu, l, LaguerreVariant::Paper, 1e-9)?.value;
        let corrected = kernel.hat_laguerre(nu, l, LaguerreVariant::Corrected, 1e-9)?.value;
        let p = SpectrumPoint::laguerre(nu, l)?;
        let oracle = gelfand_transform(&profile, &p, 1e-9)?.value;
        paper_signs.push(paper.signum() as i8);
        oracle_signs.push(oracle.signum() as i8);
        min_abs = min_abs.min(corrected.abs());
        max_rel = max_rel.max((corrected - oracle).abs() / oracle.abs().max(1e-12));
        entries.push(ErratumEntry { l, paper_value: paper, corrected_value: corrected, oracle_value: oracle });
    }
    let alternates = paper_signs.iter().enumerate().all(|(l, s)| *s == if l % 2 == 0 { 1 } else { -1 });
    let all_positive = oracle_signs.iter().all(|s| *s == 1);
    let verdict = if alternates && all_positive && max_rel < 1e-3 {
        "printed formula alternates in sign with l while the defining integral stays positive; \
         the corrected variant matches the integral, so the printed exponents drop the \
         l-dependent Gaussian factor"
            .to_string()
    } else {
        "unexpected pattern; adjudication inconclusive".to_string()
    };
    Ok(ErratumReport {
        a,
        nu,
        entries,
        paper_variant_sign_pattern: paper_signs,
        oracle_sign_pattern: oracle_signs,
        corrected_variant_min_abs: min_abs,
        oracle_max_rel_err: max_rel,
        verdict,
    })
}

/// Names of the axioms whose residual exceeds the validation tolerance.
pub fn failed_axioms(v: &ValidationReport) -> Vec<&'static str> {
    let mut out = Vec::new();
    if v.skew_residual > v.tolerance {
        out.push("skew-symmetry of J_Z");
    }
    if v.htype_residual > v.tolerance {
        out.push("J_Z^2 = -|Z|^2 I");
    }
    if v.compat_residual > v.tolerance {
        out.push("bracket compatibility <J_Z X, X'> = <Z, [X, X']>");
    }
    out
}

pub fn verify_suite(desc: &GroupDescriptor, opts: &VerifyOptions) -> Result<VerifyReport> {
    let group = Arc::new(HTypeGroup::from_descriptor(desc)?);
    let validation = group.validate(opts.seed);
    if !validation.pass {
        return Err(Error::NotHType(format!(
            "axiom validation failed ({}): skew {:.3e}, htype {:.3e}, compat {:.3e}",
            failed_axioms(&validation).join(", "),
            validation.skew_residual,
            validation.htype_residual,
            validation.compat_residual
        )));
    }
    let is_h1 = group.m() == 1 && group.k() == 1;
    let c_norm = normalization_constant(&group, 1e-8)?;
    let mut pass = true;

    let mut norm_checks = Vec::new();
    for &a in &[0.5, 1.0, 2.0] {
        let kernel = PoissonKernel::with_constant(group.clone(), a, c_norm)?;
        let mass = kernel.profile().l1_norm(1e-8)?;
        let ok = (mass.value - 1.0).abs() < 1e-6;
        pass &= ok;
        norm_checks.push(NormCheck { a, mass: mass.value, error: mass.error, pass: ok });
    }

    let kernel = PoissonKernel::with_constant(group.clone(), 1.0, c_norm)?;
    let mut partial_fourier = Vec::new();
    let route_grid: &[(f64, f64)] = if opts.quick {
        &[(0.0, 1.0), (1.0, 0.5)]
    } else {
        &[(0.0, 0.5), (0.0, 2.0), (1.0, 1.0), (2.0, 0.5)]
    };
    for &(xn, nu) in route_grid {
        let mut x = DVector::zeros(group.dim_v());
        x[0] = xn;
        let mut w = DVector::zeros(group.dim_z());
        w[0] = 1.0;
        let (direct, reduced) = kernel.partial_fourier_routes(&x, nu, &w, opts.tol)?;
        let rel = (direct.re - reduced).abs() / direct.re.abs().max(1e-12);
        let ok = rel < opts.tol && direct.im.abs() < 1e-8;
        pass &= ok;
        partial_fourier.push(RouteCheck {
            x_norm: xn,
            nu,
            direct: direct.re,
            direct_imag: direct.im,
            reduced,
            rel_diff: rel,
            pass: ok,
        });
    }

    let mut laplace_identity = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..5 {
        let order = rng.gen_range(1..=2u32);
        let big_a = rng.gen_range(0.5..3.0);
        let z = rng.gen_range(0.0..2.0);
        let chk = laplace_identity_check(order, big_a, z)?;
        pass &= chk.pass;
        laplace_identity.push(chk);
    }

    // The β-representation shares its pinned constant across the grid; it
    // must track the reduced route everywhere, not only at the pin.
    let mut beta_representation = Vec::new();
    {
        let grid: &[(f64, f64)] = &[(0.0, 0.5), (0.0, 1.0), (1.0, 0.5), (1.0, 2.0)];
        let mut c_pin = None;
        for &(xn, nu) in grid {
            let mut x = DVector::zeros(group.dim_v());
            x[0] = xn;
            let mut w = DVector::zeros(group.dim_z());
            w[0] = 1.0;
            let big_a = 1.0 + xn * xn / 4.0;
            let (_, reduced) = kernel.partial_fourier_routes(&x, nu, &w, opts.tol)?;
            let shape = beta_rep_value(&group, big_a, nu)?;
            let c = *c_pin.get_or_insert(reduced / shape);
            let beta_form = c * shape;
            let rel = (reduced - beta_form).abs() / reduced.abs().max(1e-12);
            let ok = rel < 1e-4;
            pass &= ok;
            beta_representation.push(BetaRepCheck {
                x_norm: xn,
                nu,
                reduced,
                beta_form,
                rel_diff: rel,
                pass: ok,
            });
        }
    }

    let mut hat_bessel = Vec::new();
    let mut hat_laguerre = Vec::new();
    let mut nonvanishing_min = f64::INFINITY;
    if is_h1 {
        let heights: &[f64] = if opts.quick { &[1.0] } else { &[0.5, 1.0, 2.0] };
        let mus: &[f64] = if opts.quick { &[1.0] } else { &[0.5, 1.0, 2.0] };
        for &a in heights {
            let ka = PoissonKernel::with_constant(group.clone(), a, c_norm)?;
            let profile = ka.profile();
            for &mu in mus {
                let closed = ka.hat_bessel(mu, 1e-9)?.value;
                let p = SpectrumPoint::bessel(mu)?;
                let oracle = gelfand_transform(&profile, &p, 1e-8)?.value;
                let rel = (closed - oracle).abs() / oracle.abs().max(1e-12);
                let ok = rel < 1e-4;
                pass &= ok;
                nonvanishing_min = nonvanishing_min.min(closed.abs());
                hat_bessel.push(HatCheck { a, point: p, closed, oracle, rel_err: rel, pass: ok });
            }
            let nus: &[f64] = if opts.quick { &[1.0] } else { &[0.5, 1.0, 2.0] };
            let l_max = if opts.quick { 1 } else { 5 };
            for &nu in nus {
                for l in 0..=l_max {
                    let closed = ka.hat_laguerre(nu, l, LaguerreVariant::Corrected, 1e-9)?.value;
                    let p = SpectrumPoint::laguerre(nu, l)?;
                    let oracle = gelfand_transform(&profile, &p, 1e-9)?.value;
                    let rel = (closed - oracle).abs() / oracle.abs().max(1e-12);
                    let ok = rel < 1e-3;
                    pass &= ok;
                    nonvanishing_min = nonvanishing_min.min(closed.abs());
                    hat_laguerre.push(HatCheck { a, point: p, closed, oracle, rel_err: rel, pass: ok });
                }
            }
        }
    }
    let nonvanishing_ok = !is_h1 || nonvanishing_min > 1e-6;
    pass &= nonvanishing_ok;

    let erratum = if is_h1 {
        let rep = erratum_report(&kernel, 1.0, 1.0, if opts.quick { 2 } else { 5 })?;
        pass &= rep.oracle_max_rel_err < 1e-3;
        rep
    } else {
        // The adjudication lives on H_1 where the full oracle is cheap.
        let h1 = Arc::new(HTypeGroup::heisenberg(1)?);
        let c1 = normalization_constant(&h1, 1e-8)?;
        let k1 = PoissonKernel::with_constant(h1, 1.0, c1)?;
        erratum_report(&k1, 1.0, 1.0, 2)?
    };

    Ok(VerifyReport {
        group: desc.clone(),
        options: opts.clone(),
        validation,
        c_norm,
        norm_checks,
        partial_fourier,
        laplace_identity,
        beta_representation,
        hat_bessel,
        hat_laguerre,
        nonvanishing_min_abs: nonvanishing_min,
        erratum,
        pass,
    })
}
