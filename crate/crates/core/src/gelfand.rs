//! Bounded spherical functions of the biradial algebra and the Gelfand
//! transform on both spectrum branches.
//!
//! The spectrum is the disjoint union of the Laguerre branch (ν > 0, l ∈ ℕ)
//! and the Bessel branch (μ ≥ 0); the point μ = 0 is the trivial character.

use crate::biradial::BiradialProfile;
use crate::error::{Error, Result};
use crate::group::{GroupElement, HTypeGroup};
use crate::quad::Quadrature;
use crate::special::{bessel_gen, laguerre, ln_binomial};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "branch", rename_all = "lowercase")]
pub enum SpectrumPoint {
    Laguerre { nu: f64, l: u32 },
    Bessel { mu: f64 },
}

impl SpectrumPoint {
    pub fn laguerre(nu: f64, l: u32) -> Result<Self> {
        if !(nu > 0.0) {
            return Err(Error::InvalidParam(format!(
                "Laguerre branch requires nu > 0, got {nu}"
            )));
        }
        Ok(SpectrumPoint::Laguerre { nu, l })
    }

    pub fn bessel(mu: f64) -> Result<Self> {
        if !(mu >= 0.0) {
            return Err(Error::InvalidParam(format!(
                "Bessel branch requires mu >= 0, got {mu}"
            )));
        }
        Ok(SpectrumPoint::Bessel { mu })
    }
}

/// Bounded spherical function at the spectrum point `p`, as a function of
/// the radial coordinates (r, ρ) = (|X|, |Z|).
///
/// Laguerre branch: e^{−νr²/4} · L_l^{m−1}(νr²/2)/C(l+m−1, l) · 𝒥_{(k−2)/2}(νρ).
/// Bessel branch: 𝒥_{m−1}(μ r), independent of ρ.
pub fn spherical_fn_radial(group: &HTypeGroup, p: &SpectrumPoint, r: f64, rho: f64) -> Result<f64> {
    let m = group.m() as f64;
    match *p {
        SpectrumPoint::Laguerre { nu, l } => {
            let lag = laguerre(l, m - 1.0, nu * r * r / 2.0)?;
            let binom = ln_binomial(l as f64 + m - 1.0, l as f64).exp();
            let bes = bessel_gen((group.k() as f64 - 2.0) / 2.0, nu * rho)?;
            Ok((-nu * r * r / 4.0).exp() * lag / binom * bes)
        }
        SpectrumPoint::Bessel { mu } => bessel_gen(m - 1.0, mu * r),
    }
}

pub fn spherical_fn(group: &HTypeGroup, p: &SpectrumPoint, n: &GroupElement) -> Result<f64> {
    spherical_fn_radial(group, p, n.x.norm(), n.z.norm())
}

/// Gelfand transform f̂(p) = ∫_N f(n) φ_p(n) dn by radial-reduced 2D
/// quadrature, sharing the measure convention of `BiradialProfile::l1_norm`.
pub fn gelfand_transform(f: &BiradialProfile, p: &SpectrumPoint, tol: f64) -> Result<Quadrature> {
    let group = f.group().clone();
    let p = *p;
    // |φ| ≤ 1, so the profile's own truncation radii are valid for the
    // transform integrand.
    f.weighted_integral(
        move |r, rho| spherical_fn_radial(&group, &p, r, rho).unwrap_or(f64::NAN),
        tol,
    )
}
