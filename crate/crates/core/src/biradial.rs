//! Biradial functions on N: profiles f(X, Z) = f0(|X|, |Z|), their L¹
//! geometry, the dilation action, and a direct group-convolution oracle on
//! the three-dimensional Heisenberg group.

use crate::error::{Error, Result};
use crate::group::{GroupElement, HTypeGroup};
use crate::quad::{self, CompositeGrid, Quadrature};
use crate::special::sphere_area;
use std::sync::Arc;

pub type ProfileFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Declared decay of a profile in one radial variable, used to choose
/// truncation radii so the neglected tail integrates below tolerance.
#[derive(Debug, Clone, Copy)]
pub enum Decay {
    /// |f| ≤ amp · e^{−rate·x} beyond the core.
    Exponential { rate: f64, amp: f64 },
    /// |f| ≤ amp · e^{−rate·x²}.
    Gaussian { rate: f64, amp: f64 },
    /// |f| ≤ amp · x^{−degree} for x ≥ 1.
    Polynomial { degree: f64, amp: f64 },
    /// f vanishes beyond `radius`.
    Compact { radius: f64 },
}

impl Decay {
    pub fn bound(&self, x: f64) -> f64 {
        match *self {
            Decay::Exponential { rate, amp } => amp * (-rate * x).exp(),
            Decay::Gaussian { rate, amp } => amp * (-rate * x * x).exp(),
            Decay::Polynomial { degree, amp } => amp * x.max(1.0).powf(-degree),
            Decay::Compact { radius } => {
                if x < radius {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }

    /// Radius R with ∫_R^∞ bound(x) x^weight dx < tol. Solved by doubling
    /// against a crude closed-form tail majorant.
    pub fn truncation_radius(&self, tol: f64, weight: f64) -> Result<f64> {
        if let Decay::Compact { radius } = *self {
            return Ok(radius);
        }
        if let Decay::Polynomial { degree, .. } = *self {
            if degree <= weight + 1.0 {
                return Err(Error::TruncationBound(format!(
                    "polynomial decay degree {degree} too weak for measure weight {weight}"
                )));
            }
        }
        let mut r: f64 = 1.0;
        for _ in 0..200 {
            let tail = match *self {
                Decay::Exponential { rate, amp } => {
                    amp * (-rate * r).exp() * (r.powf(weight) + weight / rate.max(1e-6)) / rate
                }
                Decay::Gaussian { rate, amp } => {
                    amp * (-rate * r * r).exp() * r.powf(weight) / (2.0 * rate * r).max(1e-6)
                }
                Decay::Polynomial { degree, amp } => {
                    amp * r.powf(weight - degree + 1.0) / (degree - weight - 1.0)
                }
                Decay::Compact { .. } => unreachable!(),
            };
            if tail < tol {
                return Ok(r);
            }
            r *= 1.5;
        }
        Err(Error::TruncationBound(
            "no finite truncation radius under declared decay".into(),
        ))
    }
}

/// A biradial function on N, represented by its radial profile and decay
/// metadata. The declared decay is spot-checked against the profile at the
/// truncation boundary whenever a truncated integral is set up.
#[derive(Clone)]
pub struct BiradialProfile {
    group: Arc<HTypeGroup>,
    f0: ProfileFn,
    r_decay: Decay,
    z_decay: Decay,
}

impl BiradialProfile {
    pub fn new(group: Arc<HTypeGroup>, f0: ProfileFn, r_decay: Decay, z_decay: Decay) -> Self {
        BiradialProfile { group, f0, r_decay, z_decay }
    }

    /// The standard Gaussian profile e^{−(r² + ρ²)}.
    pub fn gaussian(group: Arc<HTypeGroup>) -> Self {
        Self::new(
            group,
            Arc::new(|r, rho| (-(r * r + rho * rho)).exp()),
            Decay::Gaussian { rate: 1.0, amp: 1.0 },
            Decay::Gaussian { rate: 1.0, amp: 1.0 },
        )
    }

    /// Smooth compactly supported bump of the given radius in (r, ρ),
    /// normalized to 1 at the origin.
    pub fn bump(group: Arc<HTypeGroup>, radius: f64) -> Self {
        let r2 = radius * radius;
        Self::new(
            group,
            Arc::new(move |r, rho| {
                let q = (r * r + rho * rho) / r2;
                if q >= 1.0 {
                    0.0
                } else {
                    (-q / (1.0 - q)).exp()
                }
            }),
            Decay::Compact { radius },
            Decay::Compact { radius },
        )
    }

    pub fn group(&self) -> &Arc<HTypeGroup> {
        &self.group
    }

    pub fn r_decay(&self) -> Decay {
        self.r_decay
    }

    pub fn z_decay(&self) -> Decay {
        self.z_decay
    }

    pub fn eval_radial(&self, r: f64, rho: f64) -> f64 {
        (self.f0)(r, rho)
    }

    pub fn evaluate(&self, n: &GroupElement) -> f64 {
        (self.f0)(n.x.norm(), n.z.norm())
    }

    /// Truncation radii (R_r, R_ρ) for integrals against a kernel bounded by
    /// 1, with the radial measure weights r^{2m−1}, ρ^{k−1} folded in; the
    /// declared decay is checked against sampled profile values at the
    /// boundary.
    pub fn truncation_radii(&self, tol: f64) -> Result<(f64, f64)> {
        let m = self.group.m();
        let k = self.group.k();
        let c = measure_constant(m, k);
        let wr = (2 * m - 1) as f64;
        let wz = (k - 1) as f64;
        let mut rr = self.r_decay.truncation_radius(tol / (2.0 * c), wr)?;
        let mut rz = self.z_decay.truncation_radius(tol / (2.0 * c), wz)?;
        // Each axis tail multiplies the other axis's weighted volume
        // ∫_0^R x^w dx, so fold that into the tolerance and iterate. The
        // radii enter through a high root, so two passes settle it.
        for _ in 0..2 {
            let vol_z = rz.powf(wz + 1.0) / (wz + 1.0);
            let vol_r = rr.powf(wr + 1.0) / (wr + 1.0);
            rr = self
                .r_decay
                .truncation_radius(tol / (2.0 * c * vol_z.max(1.0)), wr)?;
            rz = self
                .z_decay
                .truncation_radius(tol / (2.0 * c * vol_r.max(1.0)), wz)?;
        }
        // Majorization spot-check at the boundary.
        for i in 0..8 {
            let t = i as f64 / 7.0;
            let (r, rho) = (rr * t, rz * (1.0 - t));
            let v = self.eval_radial(r, rho).abs();
            let b = self.r_decay.bound(r).min(self.z_decay.bound(rho)) + 1e-300;
            if v > 1e-12 && v > 10.0 * b {
                return Err(Error::TruncationBound(format!(
                    "profile value {v:.3e} at (r, rho) = ({r:.2}, {rho:.2}) exceeds declared decay bound {b:.3e}"
                )));
            }
        }
        Ok((rr, rz))
    }

    /// ‖f‖₁ = c_{m,k} ∬ |f0| r^{2m−1} ρ^{k−1} dr dρ.
    pub fn l1_norm(&self, tol: f64) -> Result<Quadrature> {
        self.weighted_integral(|_, _| 1.0, tol)
    }

    /// c_{m,k} ∬ f0(r,ρ) w(r,ρ) r^{2m−1} ρ^{k−1} dr dρ for a kernel |w| ≤ 1.
    /// This is the shared radial-reduction used by both the L¹ norm and the
    /// Gelfand transform.
    pub fn weighted_integral<W: Fn(f64, f64) -> f64>(&self, w: W, tol: f64) -> Result<Quadrature> {
        let m = self.group.m();
        let k = self.group.k();
        let c = measure_constant(m, k);
        let (rr, rz) = self.truncation_radii(tol / 10.0)?;
        let f0 = &self.f0;
        let q = quad::integrate_rect2d(
            |r, rho| {
                f0(r, rho)
                    * w(r, rho)
                    * r.powi(2 * m as i32 - 1)
                    * if k > 1 { rho.powi(k as i32 - 1) } else { 1.0 }
            },
            rr,
            rz,
            tol / (2.0 * c),
        )?;
        Ok(Quadrature {
            value: c * q.value,
            error: c * q.error + tol / 10.0,
            evals: q.evals,
        })
    }

    /// The dilated profile (δ_a f)0(r, ρ) = a^Q f0(a^{1/2} r, a ρ).
    pub fn dilate(&self, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::InvalidParam(format!("dilate_fn: a = {a} must be > 0")));
        }
        let qh = self.group.q() as f64;
        let f0 = self.f0.clone();
        let scale = a.powf(qh);
        let sa = a.sqrt();
        Ok(BiradialProfile {
            group: self.group.clone(),
            f0: Arc::new(move |r, rho| scale * f0(sa * r, a * rho)),
            r_decay: scale_decay(self.r_decay, sa, scale),
            z_decay: scale_decay(self.z_decay, a, scale),
        })
    }
}

fn scale_decay(d: Decay, arg_scale: f64, amp_scale: f64) -> Decay {
    match d {
        Decay::Exponential { rate, amp } => Decay::Exponential {
            rate: rate * arg_scale,
            amp: amp * amp_scale,
        },
        Decay::Gaussian { rate, amp } => Decay::Gaussian {
            rate: rate * arg_scale * arg_scale,
            amp: amp * amp_scale,
        },
        Decay::Polynomial { degree, amp } => Decay::Polynomial {
            degree,
            amp: amp * amp_scale * arg_scale.powf(-degree).max(1.0),
        },
        Decay::Compact { radius } => Decay::Compact {
            radius: radius / arg_scale,
        },
    }
}

/// c_{m,k}: the angular volume of the radial reduction. The k = 1 centre is
/// a line, so |Z| folds it in half and contributes a factor 2 instead of a
/// sphere area.
pub fn measure_constant(m: usize, k: usize) -> f64 {
    let v = sphere_area(2 * m);
    if k == 1 {
        2.0 * v
    } else {
        v * sphere_area(k)
    }
}

/// Direct group convolution (f ∗ g)(n) = ∫_N f(n′) g(n′⁻¹ n) dn′ on H₁ by
/// tensor-product quadrature over the truncation box of f. Desk-scale
/// oracle only; larger groups go through the transform domain.
pub fn convolve_direct(
    f: &BiradialProfile,
    g: &BiradialProfile,
    n: &GroupElement,
    resolution: usize,
) -> Result<Quadrature> {
    let group = f.group.clone();
    if group.dim_v() != 2 || group.dim_z() != 1 {
        return Err(Error::Unsupported(
            "convolve_direct: direct quadrature is desk-scale only (H_1)".into(),
        ));
    }
    if resolution < 2 {
        return Err(Error::InvalidParam("convolve_direct: resolution < 2".into()));
    }
    let (bx, bz) = f.truncation_radii(1e-10)?;

    let value_at = |cells: usize| -> f64 {
        let gx = CompositeGrid::uniform(-bx, bx, cells, 8);
        let gz = CompositeGrid::uniform(-bz, bz, cells, 8);
        let mut acc = 0.0;
        for &(x1, w1) in &gx.points {
            for &(x2, w2) in &gx.points {
                let fr = (x1 * x1 + x2 * x2).sqrt();
                for &(z1, w3) in &gz.points {
                    let fv = f.eval_radial(fr, z1.abs());
                    if fv == 0.0 {
                        continue;
                    }
                    // n'^{-1} n with n' = ((x1,x2), z1) on H_1:
                    // X-part: n.x - (x1,x2); Z-part: n.z - z1 - ½[(x1,x2), n.x]
                    let dx1 = n.x[0] - x1;
                    let dx2 = n.x[1] - x2;
                    let br = x1 * n.x[1] - x2 * n.x[0];
                    let dz = n.z[0] - z1 - 0.5 * br;
                    let gr = (dx1 * dx1 + dx2 * dx2).sqrt();
                    acc += w1 * w2 * w3 * fv * g.eval_radial(gr, dz.abs());
                }
            }
        }
        acc
    };

    let coarse = value_at(resolution / 2);
    let fine = value_at(resolution);
    Ok(Quadrature {
        value: fine,
        error: (fine - coarse).abs() + 1e-10,
        evals: (resolution / 2 + resolution) * 8 * 8 * 8,
    })
}

/// Sample (f ∗ g) on a uniform (r, ρ) grid via `convolve_direct` and re-wrap
/// it as a biradial profile with bilinear interpolation, zero beyond the
/// grid. Interpolation is documented as lower accuracy than the function
/// handles it is built from.
pub fn tabulate_convolution(
    f: &BiradialProfile,
    g: &BiradialProfile,
    r_max: f64,
    rho_max: f64,
    cells: usize,
    resolution: usize,
) -> Result<BiradialProfile> {
    let group = f.group().clone();
    let nr = cells + 1;
    let mut values = vec![0.0f64; nr * nr];
    for i in 0..nr {
        let r = r_max * i as f64 / cells as f64;
        for j in 0..nr {
            let rho = rho_max * j as f64 / cells as f64;
            let n = group.element(vec![r, 0.0], vec![rho])?;
            values[i * nr + j] = convolve_direct(f, g, &n, resolution)?.value;
        }
    }
    Ok(tabulated_profile(group, r_max, rho_max, cells, values))
}

/// Wrap a uniform grid of samples over [0, r_max] × [0, rho_max] as a
/// biradial profile (bilinear interpolation, zero outside).
pub fn tabulated_profile(
    group: Arc<HTypeGroup>,
    r_max: f64,
    rho_max: f64,
    cells: usize,
    values: Vec<f64>,
) -> BiradialProfile {
    let nr = cells + 1;
    assert_eq!(values.len(), nr * nr);
    BiradialProfile::new(
        group,
        Arc::new(move |r, rho| {
            if r >= r_max || rho >= rho_max || r < 0.0 || rho < 0.0 {
                return 0.0;
            }
            let x = r / r_max * cells as f64;
            let y = rho / rho_max * cells as f64;
            let (i, j) = (x.floor() as usize, y.floor() as usize);
            let (tx, ty) = (x - i as f64, y - j as f64);
            let v00 = values[i * nr + j];
            let v10 = values[(i + 1) * nr + j];
            let v01 = values[i * nr + j + 1];
            let v11 = values[(i + 1) * nr + j + 1];
            v00 * (1.0 - tx) * (1.0 - ty)
                + v10 * tx * (1.0 - ty)
                + v01 * (1.0 - tx) * ty
                + v11 * tx * ty
        }),
        Decay::Compact { radius: r_max },
        Decay::Compact { radius: rho_max },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn h1() -> Arc<HTypeGroup> {
        Arc::new(HTypeGroup::heisenberg(1).unwrap())
    }

    #[test]
    fn evaluate_is_radial() {
        let g = h1();
        let f = BiradialProfile::gaussian(g.clone());
        let n = g.element(vec![1.0, 0.0], vec![0.0]).unwrap();
        assert!((f.evaluate(&n) - (-1.0f64).exp()).abs() < 1e-15);
        // rotation invariance by construction
        let n2 = g.element(vec![0.6, 0.8], vec![0.0]).unwrap();
        assert!((f.evaluate(&n) - f.evaluate(&n2)).abs() < 1e-15);
        let one = BiradialProfile::new(
            g,
            Arc::new(|_, _| 1.0),
            Decay::Compact { radius: 1.0 },
            Decay::Compact { radius: 1.0 },
        );
        let id = one.group().identity();
        assert_eq!(one.evaluate(&id), 1.0);
    }

    #[test]
    fn gaussian_l1_norm_h1() {
        // 2·(2π)·(∫ e^{−r²} r dr)(∫ e^{−ρ²} dρ) = π^{3/2}
        let f = BiradialProfile::gaussian(h1());
        let q = f.l1_norm(1e-8).unwrap();
        let exact = PI.powf(1.5);
        assert!((q.value - exact).abs() < 1e-6, "{} vs {exact}", q.value);
        assert!((q.value - exact).abs() <= q.error);
    }

    #[test]
    fn zero_profile_norm() {
        let f = BiradialProfile::new(
            h1(),
            Arc::new(|_, _| 0.0),
            Decay::Compact { radius: 2.0 },
            Decay::Compact { radius: 2.0 },
        );
        assert_eq!(f.l1_norm(1e-8).unwrap().value, 0.0);
    }

    #[test]
    fn dilation_preserves_l1() {
        let f = BiradialProfile::gaussian(h1());
        let base = f.l1_norm(1e-8).unwrap().value;
        for &a in &[0.1, 0.5, 2.0, 10.0] {
            let q = f.dilate(a).unwrap().l1_norm(1e-8).unwrap();
            assert!(
                (q.value - base).abs() < 1e-6,
                "a={a}: {} vs {base}",
                q.value
            );
        }
    }

    #[test]
    fn dilation_composes_pointwise() {
        let f = BiradialProfile::gaussian(h1());
        let lhs = f.dilate(2.0).unwrap().dilate(3.0).unwrap();
        let rhs = f.dilate(6.0).unwrap();
        for (r, rho) in [(0.0, 0.0), (0.5, 0.3), (1.0, 2.0)] {
            assert!((lhs.eval_radial(r, rho) - rhs.eval_radial(r, rho)).abs() < 1e-10);
        }
        let id = f.dilate(1.0).unwrap();
        assert_eq!(id.eval_radial(0.7, 0.3), f.eval_radial(0.7, 0.3));
    }

    #[test]
    fn truncation_rejects_lying_decay() {
        let f = BiradialProfile::new(
            h1(),
            Arc::new(|_, _| 1.0),
            Decay::Gaussian { rate: 1.0, amp: 1.0 },
            Decay::Gaussian { rate: 1.0, amp: 1.0 },
        );
        assert!(matches!(
            f.l1_norm(1e-8),
            Err(Error::TruncationBound(_))
        ));
    }

    #[test]
    fn convolve_identity_approximation() {
        // f ∗ (δ_a g) → f(n) as a → 0 when ‖g‖₁ = 1.
        let g = h1();
        let f = BiradialProfile::gaussian(g.clone());
        let bump = BiradialProfile::gaussian(g.clone());
        let mass = bump.l1_norm(1e-9).unwrap().value;
        let unit = BiradialProfile::new(
            g.clone(),
            {
                let b = bump.clone();
                Arc::new(move |r, rho| b.eval_radial(r, rho) / mass)
            },
            bump.r_decay(),
            bump.z_decay(),
        );
        let n = g.element(vec![0.4, 0.1], vec![0.2]).unwrap();
        let target = f.evaluate(&n);
        let mut errs = Vec::new();
        for &a in &[0.5, 0.1, 0.02] {
            let approx_id = unit.dilate(1.0 / a).unwrap();
            let v = convolve_direct(&approx_id, &f, &n, 24).unwrap().value;
            errs.push((v - target).abs());
        }
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
        assert!(errs[2] < 0.05, "{errs:?}");
    }

    #[test]
    fn convolution_commutes_for_biradial() {
        let g = h1();
        let f = BiradialProfile::gaussian(g.clone());
        let gg = BiradialProfile::new(
            g.clone(),
            Arc::new(|r, rho| (-(2.0 * r * r + rho * rho)).exp()),
            Decay::Gaussian { rate: 2.0, amp: 1.0 },
            Decay::Gaussian { rate: 1.0, amp: 1.0 },
        );
        let n = g.element(vec![0.8, -0.3], vec![0.5]).unwrap();
        let a = convolve_direct(&f, &gg, &n, 24).unwrap();
        let b = convolve_direct(&gg, &f, &n, 24).unwrap();
        assert!((a.value - b.value).abs() < 5e-4, "{} vs {}", a.value, b.value);
    }

    #[test]
    fn convolution_output_is_biradial() {
        let g = h1();
        let f = BiradialProfile::gaussian(g.clone());
        // same |X|, |Z| through a rotation of X and sign flip of Z
        let n1 = g.element(vec![0.5, 0.5], vec![0.3]).unwrap();
        let n2 = g.element(vec![0.5_f64.hypot(0.5), 0.0], vec![-0.3]).unwrap();
        let a = convolve_direct(&f, &f, &n1, 24).unwrap();
        let b = convolve_direct(&f, &f, &n2, 24).unwrap();
        assert!((a.value - b.value).abs() < 5e-4);
    }

    #[test]
    fn convolution_self_convergence() {
        let g = h1();
        let f = BiradialProfile::gaussian(g.clone());
        let mass = f.l1_norm(1e-9).unwrap().value;
        let unit = BiradialProfile::new(
            g.clone(),
            {
                let b = f.clone();
                Arc::new(move |r, rho| b.eval_radial(r, rho) / mass)
            },
            f.r_decay(),
            f.z_decay(),
        );
        let id = g.identity();
        let coarse = convolve_direct(&unit, &unit, &id, 8).unwrap().value;
        let fine = convolve_direct(&unit, &unit, &id, 48).unwrap().value;
        assert!(((coarse - fine) / fine).abs() < 1e-3, "{coarse} vs {fine}");
    }

    #[test]
    fn banach_algebra_inequality() {
        let g = h1();
        let f = BiradialProfile::gaussian(g.clone());
        let nf = f.l1_norm(1e-8).unwrap().value;
        // ‖f∗f‖₁ ≤ ‖f‖₁² sampled on a coarse grid of the output
        let mut acc: f64 = 0.0;
        for (r, rho) in [(0.0, 0.0), (0.5, 0.0), (1.0, 0.5), (2.0, 1.0)] {
            let n = g.element(vec![r, 0.0], vec![rho]).unwrap();
            let v = convolve_direct(&f, &f, &n, 16).unwrap().value;
            acc = acc.max(v);
        }
        // pointwise bound ‖f∗g‖_∞ ≤ ‖f‖₁‖g‖_∞ is cruder but implied
        assert!(acc <= nf * 1.0 + 1e-6);
    }

    #[test]
    fn convolve_rejects_large_groups() {
        let g = Arc::new(HTypeGroup::quaternionic(1).unwrap());
        let f = BiradialProfile::gaussian(g.clone());
        let id = g.identity();
        assert!(matches!(
            convolve_direct(&f, &f, &id, 8),
            Err(Error::Unsupported(_))
        ));
    }
}
