//! H-type groups: construction, validation of the defining axioms, the
//! group law, inversion, and the anisotropic dilations.
//!
//! The Lie algebra is 𝔳 ⊕ 𝔷 with dim 𝔳 = 2m, dim 𝔷 = k. The structure is
//! stored as the k skew maps J applied to an orthonormal basis of the
//! centre; J_Z for general Z is assembled by linearity, and the bracket is
//! recovered from ⟨J_Z X, Y⟩ = ⟨[X, Y], Z⟩.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Residual tolerance for the H-type axioms: ~100× double-precision
/// accumulation for 2m ≤ 12.
pub const AXIOM_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct HTypeGroup {
    m: usize,
    k: usize,
    j_maps: Vec<DMatrix<f64>>,
}

/// A point (X, Z) of N.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub x: DVector<f64>,
    pub z: DVector<f64>,
}

/// A point of the Siegel domain model: a boundary point plus height a > 0.
#[derive(Debug, Clone)]
pub struct DomainPoint {
    pub element: GroupElement,
    pub a: f64,
}

impl DomainPoint {
    pub fn new(element: GroupElement, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::InvalidParam(format!("height a = {a} must be > 0")));
        }
        Ok(DomainPoint { element, a })
    }
}

/// Serializable group descriptor.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GroupDescriptor {
    Heisenberg { r: usize },
    Quaternionic { n: usize },
    Custom { m: usize, k: usize, j_maps: Vec<Vec<Vec<f64>>> },
}

/// Per-axiom residuals from validate_htype.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub skew_residual: f64,
    pub htype_residual: f64,
    pub compat_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl HTypeGroup {
    /// Build a group from explicit J-maps. Only dimensions are checked here;
    /// the H-type axioms are the job of [`HTypeGroup::validate`] and no
    /// repair is attempted.
    pub fn new(m: usize, k: usize, j_maps: Vec<DMatrix<f64>>) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(Error::InvalidParam("m and k must be >= 1".into()));
        }
        if j_maps.len() != k {
            return Err(Error::Dimension(format!(
                "expected {k} J-maps, got {}",
                j_maps.len()
            )));
        }
        for j in &j_maps {
            if j.nrows() != 2 * m || j.ncols() != 2 * m {
                return Err(Error::Dimension(format!(
                    "J-map must be {0}x{0}, got {1}x{2}",
                    2 * m,
                    j.nrows(),
                    j.ncols()
                )));
            }
        }
        Ok(HTypeGroup { m, k, j_maps })
    }

    /// Heisenberg group H_r: m = r, k = 1, J the standard symplectic
    /// structure (block-diagonal 2×2 rotations by π/2).
    pub fn heisenberg(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParam("heisenberg: r must be >= 1".into()));
        }
        let mut j = DMatrix::zeros(2 * r, 2 * r);
        for b in 0..r {
            j[(2 * b, 2 * b + 1)] = -1.0;
            j[(2 * b + 1, 2 * b)] = 1.0;
        }
        Self::new(r, 1, vec![j])
    }

    /// Quaternionic family: m = 2n, k = 3, J-maps given by left quaternion
    /// multiplication by i, j, k on ℍ^n ≅ ℝ^{4n}.
    pub fn quaternionic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParam("quaternionic: n must be >= 1".into()));
        }
        let d = 4 * n;
        // Left multiplication on the basis (1, i, j, k) per quaternion slot.
        let tables: [[(usize, f64); 4]; 3] = [
            // i * (1,i,j,k) = (i, -1, k, -j)
            [(1, 1.0), (0, -1.0), (3, 1.0), (2, -1.0)],
            // j * (1,i,j,k) = (j, -k, -1, i)
            [(2, 1.0), (3, -1.0), (0, -1.0), (1, 1.0)],
            // k * (1,i,j,k) = (k, j, -i, -1)
            [(3, 1.0), (2, 1.0), (1, -1.0), (0, -1.0)],
        ];
        let mut maps = Vec::with_capacity(3);
        for table in &tables {
            let mut mat = DMatrix::zeros(d, d);
            for slot in 0..n {
                for (col, &(row, sign)) in table.iter().enumerate() {
                    mat[(4 * slot + row, 4 * slot + col)] = sign;
                }
            }
            maps.push(mat);
        }
        Self::new(2 * n, 3, maps)
    }

    pub fn from_descriptor(desc: &GroupDescriptor) -> Result<Self> {
        match desc {
            GroupDescriptor::Heisenberg { r } => Self::heisenberg(*r),
            GroupDescriptor::Quaternionic { n } => Self::quaternionic(*n),
            GroupDescriptor::Custom { m, k, j_maps } => {
                let maps = j_maps
                    .iter()
                    .map(|rows| {
                        let nr = rows.len();
                        let nc = rows.first().map(|r| r.len()).unwrap_or(0);
                        DMatrix::from_fn(nr, nc, |i, j| rows[i][j])
                    })
                    .collect();
                Self::new(*m, *k, maps)
            }
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim_v(&self) -> usize {
        2 * self.m
    }

    pub fn dim_z(&self) -> usize {
        self.k
    }

    /// Homogeneous dimension Q = m + k.
    pub fn q(&self) -> usize {
        self.m + self.k
    }

    /// s = (Q − 1)/2.
    pub fn s(&self) -> f64 {
        (self.q() as f64 - 1.0) / 2.0
    }

    pub fn j_maps(&self) -> &[DMatrix<f64>] {
        &self.j_maps
    }

    /// J_Z assembled by linearity from the stored basis maps.
    pub fn j_z(&self, z: &DVector<f64>) -> Result<DMatrix<f64>> {
        if z.len() != self.k {
            return Err(Error::Dimension(format!(
                "z has length {}, expected {}",
                z.len(),
                self.k
            )));
        }
        let mut out = DMatrix::zeros(2 * self.m, 2 * self.m);
        for (i, j) in self.j_maps.iter().enumerate() {
            out += j * z[i];
        }
        Ok(out)
    }

    /// [X, Y]_i = ⟨J_{e_i} X, Y⟩.
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != 2 * self.m || y.len() != 2 * self.m {
            return Err(Error::Dimension("bracket: v-vector length mismatch".into()));
        }
        let mut out = DVector::zeros(self.k);
        for (i, j) in self.j_maps.iter().enumerate() {
            out[i] = (j * x).dot(y);
        }
        Ok(out)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            x: DVector::zeros(2 * self.m),
            z: DVector::zeros(self.k),
        }
    }

    pub fn element(&self, x: Vec<f64>, z: Vec<f64>) -> Result<GroupElement> {
        if x.len() != 2 * self.m || z.len() != self.k {
            return Err(Error::Dimension(format!(
                "element: expected lengths ({}, {}), got ({}, {})",
                2 * self.m,
                self.k,
                x.len(),
                z.len()
            )));
        }
        Ok(GroupElement {
            x: DVector::from_vec(x),
            z: DVector::from_vec(z),
        })
    }

    /// (X,Z)(X₁,Z₁) = (X+X₁, Z+Z₁+½[X,X₁]).
    pub fn mul(&self, n1: &GroupElement, n2: &GroupElement) -> Result<GroupElement> {
        let br = self.bracket(&n1.x, &n2.x)?;
        Ok(GroupElement {
            x: &n1.x + &n2.x,
            z: &n1.z + &n2.z + br * 0.5,
        })
    }

    pub fn inv(&self, n: &GroupElement) -> GroupElement {
        GroupElement { x: -&n.x, z: -&n.z }
    }

    /// δ_a(X, Z) = (a^{1/2} X, a Z).
    pub fn dilate(&self, a: f64, n: &GroupElement) -> Result<GroupElement> {
        if !(a > 0.0) {
            return Err(Error::InvalidParam(format!("dilate: a = {a} must be > 0")));
        }
        Ok(GroupElement {
            x: &n.x * a.sqrt(),
            z: &n.z * a,
        })
    }

    /// Homogeneous gauge ((|X|²/4)² + |Z|²)^{1/4}, the "(X,Z) → ∞" scale.
    pub fn gauge(&self, n: &GroupElement) -> f64 {
        let r2 = n.x.norm_squared();
        ((r2 / 4.0) * (r2 / 4.0) + n.z.norm_squared()).powf(0.25)
    }

    /// Brute-force validation of the H-type axioms: skewness of each J-map,
    /// J_Z² = −|Z|² I on 100 pseudo-random unit Z, and the compatibility
    /// ⟨J_Z X, Y⟩ = ⟨[X,Y], Z⟩ on random triples.
    pub fn validate(&self, seed: u64) -> ValidationReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dv = 2 * self.m;

        let mut skew: f64 = 0.0;
        for j in &self.j_maps {
            let r = j + j.transpose();
            skew = skew.max(r.amax());
        }

        let id = DMatrix::<f64>::identity(dv, dv);
        let mut htype: f64 = 0.0;
        for _ in 0..100 {
            let z = random_unit(&mut rng, self.k);
            let jz = self.j_z(&z).expect("dimensions checked at construction");
            let r = &jz * &jz + &id * z.norm_squared();
            htype = htype.max(r.amax());
        }

        let mut compat: f64 = 0.0;
        for _ in 0..100 {
            let x = random_unit(&mut rng, dv);
            let y = random_unit(&mut rng, dv);
            let z = random_unit(&mut rng, self.k);
            let jz = self.j_z(&z).expect("dimensions checked at construction");
            let lhs = (&jz * &x).dot(&y);
            let rhs = self.bracket(&x, &y).unwrap().dot(&z);
            compat = compat.max((lhs - rhs).abs());
        }

        // Skewness gets the tighter tolerance (it is exact arithmetic).
        let pass = skew <= 1e-12 && htype <= AXIOM_TOL && compat <= AXIOM_TOL;
        ValidationReport {
            skew_residual: skew,
            htype_residual: htype,
            compat_residual: compat,
            tolerance: AXIOM_TOL,
            pass,
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 {
            return v / n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng as _;

    fn random_element(g: &HTypeGroup, rng: &mut ChaCha8Rng) -> GroupElement {
        GroupElement {
            x: DVector::from_fn(g.dim_v(), |_, _| rng.gen_range(-2.0..2.0)),
            z: DVector::from_fn(g.dim_z(), |_, _| rng.gen_range(-2.0..2.0)),
        }
    }

    #[test]
    fn heisenberg_j_is_symplectic() {
        let g = HTypeGroup::heisenberg(1).unwrap();
        let j = &g.j_maps()[0];
        assert_eq!(j[(0, 1)], -1.0);
        assert_eq!(j[(1, 0)], 1.0);
        let jj = j * j;
        assert!((jj + DMatrix::<f64>::identity(2, 2)).amax() < 1e-15);
    }

    #[test]
    fn heisenberg_derived_constants() {
        let g = HTypeGroup::heisenberg(3).unwrap();
        assert_eq!(g.q(), 4);
        assert_eq!(g.s(), 1.5);
    }

    #[test]
    fn constructors_reject_zero() {
        assert!(HTypeGroup::heisenberg(0).is_err());
        assert!(HTypeGroup::quaternionic(0).is_err());
    }

    #[test]
    fn families_pass_validation() {
        for r in 1..=3 {
            let rep = HTypeGroup::heisenberg(r).unwrap().validate(7);
            assert!(rep.pass, "H_{r}: {rep:?}");
        }
        for n in 1..=2 {
            let g = HTypeGroup::quaternionic(n).unwrap();
            assert_eq!((g.m(), g.k()), (2 * n, 3));
            let rep = g.validate(7);
            assert!(rep.pass, "quat n={n}: {rep:?}");
        }
        let g = HTypeGroup::quaternionic(1).unwrap();
        assert_eq!(g.q(), 5);
        assert_eq!(g.s(), 2.0);
    }

    #[test]
    fn quaternionic_j_anticommute() {
        let g = HTypeGroup::quaternionic(1).unwrap();
        let [ji, jj] = [&g.j_maps()[0], &g.j_maps()[1]];
        let anti = ji * jj + jj * ji;
        assert!(anti.amax() < 1e-12);
    }

    #[test]
    fn zero_j_fails_with_expected_residual() {
        let g = HTypeGroup::new(1, 1, vec![DMatrix::zeros(2, 2)]).unwrap();
        let rep = g.validate(7);
        assert!(!rep.pass);
        // J² = 0, so the residual is exactly |Z|² = 1 on unit Z.
        assert!((rep.htype_residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perturbed_j_fails() {
        let mut g = HTypeGroup::heisenberg(2).unwrap();
        g.j_maps[0][(0, 1)] += 1e-3;
        assert!(!g.validate(7).pass);
    }

    #[test]
    fn bracket_heisenberg() {
        let g = HTypeGroup::heisenberg(1).unwrap();
        let e1 = DVector::from_vec(vec![1.0, 0.0]);
        let e2 = DVector::from_vec(vec![0.0, 1.0]);
        let b = g.bracket(&e1, &e2).unwrap();
        // ⟨J e_1, e_2⟩ with the constructed J
        let j = &g.j_maps()[0];
        assert!((b[0] - (j * &e1).dot(&e2)).abs() < 1e-15);
        assert!((b[0] - 1.0).abs() < 1e-15);
        // antisymmetry and bilinearity
        let bb = g.bracket(&e2, &e1).unwrap();
        assert!((b[0] + bb[0]).abs() < 1e-15);
        let b2 = g.bracket(&(&e1 * 2.0), &e2).unwrap();
        assert!((b2[0] - 2.0 * b[0]).abs() < 1e-15);
        assert!(g.bracket(&e1, &e1).unwrap().norm() < 1e-15);
    }

    #[test]
    fn group_law_examples() {
        let g = HTypeGroup::heisenberg(1).unwrap();
        let e1 = g.element(vec![1.0, 0.0], vec![0.0]).unwrap();
        let e2 = g.element(vec![0.0, 1.0], vec![0.0]).unwrap();
        let p = g.mul(&e1, &e2).unwrap();
        assert_eq!(p.x, DVector::from_vec(vec![1.0, 1.0]));
        assert!((p.z[0] - 0.5).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = random_element(&g, &mut rng);
            let prod = g.mul(&n, &g.inv(&n)).unwrap();
            assert!(prod.x.norm() < 1e-14 && prod.z.norm() < 1e-14);
            let idp = g.mul(&n, &g.identity()).unwrap();
            assert!((&idp.x - &n.x).norm() < 1e-14);
        }
        let id = g.identity();
        assert_eq!(g.inv(&id), id);
    }

    #[test]
    fn dilation_is_automorphism() {
        let g = HTypeGroup::heisenberg(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = rng.gen_range(0.1..5.0);
            let n1 = random_element(&g, &mut rng);
            let n2 = random_element(&g, &mut rng);
            let lhs = g.dilate(a, &g.mul(&n1, &n2).unwrap()).unwrap();
            let rhs = g
                .mul(&g.dilate(a, &n1).unwrap(), &g.dilate(a, &n2).unwrap())
                .unwrap();
            assert!((&lhs.x - &rhs.x).norm() < 1e-12);
            assert!((&lhs.z - &rhs.z).norm() < 1e-12);
        }
        assert!(g.dilate(0.0, &g.identity()).is_err());
        assert!(g.dilate(-1.0, &g.identity()).is_err());
    }

    #[test]
    fn descriptor_roundtrip() {
        let d: GroupDescriptor = serde_json::from_str(r#"{"family":"heisenberg","r":1}"#).unwrap();
        let g = HTypeGroup::from_descriptor(&d).unwrap();
        assert_eq!((g.m(), g.k()), (1, 1));
        let d: GroupDescriptor = serde_json::from_str(r#"{"family":"quaternionic","n":1}"#).unwrap();
        assert_eq!(HTypeGroup::from_descriptor(&d).unwrap().q(), 5);
        let d: GroupDescriptor = serde_json::from_str(
            r#"{"family":"custom","m":1,"k":1,"j_maps":[[[0.0,-1.0],[1.0,0.0]]]}"#,
        )
        .unwrap();
        assert!(HTypeGroup::from_descriptor(&d).unwrap().validate(1).pass);
    }

    #[test]
    fn domain_point_requires_positive_height() {
        let g = HTypeGroup::heisenberg(1).unwrap();
        assert!(DomainPoint::new(g.identity(), 0.0).is_err());
        assert!(DomainPoint::new(g.identity(), 1.0).is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn associativity(seed in 0u64..1000) {
            let g = HTypeGroup::heisenberg(2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_element(&g, &mut rng);
            let b = random_element(&g, &mut rng);
            let c = random_element(&g, &mut rng);
            let lhs = g.mul(&g.mul(&a, &b).unwrap(), &c).unwrap();
            let rhs = g.mul(&a, &g.mul(&b, &c).unwrap()).unwrap();
            prop_assert!((&lhs.x - &rhs.x).norm() < 1e-12);
            prop_assert!((&lhs.z - &rhs.z).norm() < 1e-12);
        }

        #[test]
        fn dilation_composes(a in 0.1f64..4.0, b in 0.1f64..4.0, seed in 0u64..1000) {
            let g = HTypeGroup::quaternionic(1).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = random_element(&g, &mut rng);
            let lhs = g.dilate(a, &g.dilate(b, &n).unwrap()).unwrap();
            let rhs = g.dilate(a * b, &n).unwrap();
            prop_assert!((&lhs.x - &rhs.x).norm() < 1e-10);
            prop_assert!((&lhs.z - &rhs.z).norm() < 1e-10);
        }
    }
}
