//! Trivial branches of the compressed cylinder: the nonlinear Saint
//! Venant-Kirchhoff branch and the linear branches with a load imperfection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::StressField;
use crate::tensor::{
    gradient_partials, stiffness_apply, stress_divergence, strain, CylPoint, FieldJet, SecondOrderField, ShellParams,
    SymTensor3, Tensor3, VectorField,
};
use crate::{Error, Result};

/// Homogeneous SVK branch `y = ((1 + a) r, theta, (1 - lambda) z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvkBranch {
    pub lambda: f64,
    pub a: f64,
    /// Deformation gradient `diag(1 + a, 1 + a, 1 - lambda)`.
    pub f: Tensor3,
    /// Green strain `(F^T F - I) / 2`.
    pub green: SymTensor3,
}

/// Transverse stretch that leaves the lateral faces traction free.
pub fn svk_stretch(lambda: f64, nu: f64) -> Result<f64> {
    let radicand = 1.0 + 2.0 * nu * lambda - nu * lambda * lambda;
    if !(radicand > 0.0) {
        return Err(Error::Domain(format!("1 + 2 nu lambda - nu lambda^2 = {radicand} must be positive")));
    }
    Ok(radicand.sqrt() - 1.0)
}

pub fn svk_branch(lambda: f64, p: &ShellParams) -> Result<SvkBranch> {
    let a = svk_stretch(lambda, p.nu)?;
    let f = Tensor3::diag(1.0 + a, 1.0 + a, 1.0 - lambda);
    let green = (f.transpose().matmul(&f) - Tensor3::identity()).sym() * 0.5;
    Ok(SvkBranch { lambda, a, f, green })
}

impl SvkBranch {
    /// First Piola-Kirchhoff stress `F L0 E`.
    pub fn piola(&self, p: &ShellParams) -> Result<Tensor3> {
        Ok(self.f.matmul(&stiffness_apply(&self.green, p)?.to_tensor()))
    }

    /// `|P e_r|` on the lateral faces; the branch is homogeneous, so one
    /// evaluation covers both faces.
    pub fn traction_residual(&self, p: &ShellParams) -> Result<f64> {
        let pk = self.piola(p)?;
        let t = pk.apply([1.0, 0.0, 0.0]);
        Ok(t.iter().map(|v| v * v).sum::<f64>().sqrt())
    }

    /// `F - I - lambda * grad u0` with `grad u0 = diag(nu, nu, -1)`.
    pub fn linear_remainder(&self, nu: f64) -> Tensor3 {
        self.f - Tensor3::identity() - Tensor3::diag(nu, nu, -1.0) * self.lambda
    }
}

/// Uniform axial compression `-E e_z (x) e_z`.
pub fn perfect_stress(p: &ShellParams) -> StressField {
    StressField::constant(SymTensor3::new(0.0, 0.0, -p.young, 0.0, 0.0, 0.0))
}

/// Displacement `(c_r r, c_theta r z, c_z z)`, the shape of every linear
/// branch here.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearDisplacement {
    pub radial: f64,
    pub twist: f64,
    pub axial: f64,
}

impl VectorField for LinearDisplacement {
    fn jet(&self, p: CylPoint) -> FieldJet {
        FieldJet {
            value: [self.radial * p.r, self.twist * p.r * p.z, self.axial * p.z],
            d: [[self.radial, 0.0, 0.0], [self.twist * p.z, 0.0, self.twist * p.r], [0.0, 0.0, self.axial]],
        }
    }
}

impl SecondOrderField for LinearDisplacement {
    fn hessian(&self, _p: CylPoint) -> [[[f64; 3]; 3]; 3] {
        let mut hs = [[[0.0; 3]; 3]; 3];
        hs[1][0][2] = self.twist;
        hs[1][2][0] = self.twist;
        hs
    }
}

/// Linear branch with a torsional load imperfection of size `eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImperfectBranch {
    pub eps: f64,
    pub params: ShellParams,
    pub stress: StressField,
}

impl ImperfectBranch {
    /// `u = (nu r, eps r z, -z)`.
    pub fn displacement(&self) -> LinearDisplacement {
        LinearDisplacement { radial: self.params.nu, twist: self.eps, axial: -1.0 }
    }
}

/// Stress `-E e_z (x) e_z` plus `theta z` shear `eps E r / (2 (1 + nu))`.
pub fn imperfect_branch(eps: f64, p: &ShellParams) -> ImperfectBranch {
    let shear = eps * p.young / (2.0 * (1.0 + p.nu));
    let stress = StressField {
        sigma0: SymTensor3::new(0.0, 0.0, -p.young, 0.0, 0.0, shear),
        sigma1: SymTensor3::new(0.0, 0.0, 0.0, 0.0, 0.0, shear),
    };
    ImperfectBranch { eps, params: *p, stress }
}

/// Displacement with limiting stress `theta z = s`, `zz = t`, and that stress.
pub fn sigma0_family(s: f64, t: f64, p: &ShellParams) -> (LinearDisplacement, SymTensor3) {
    let u = LinearDisplacement {
        radial: -t * p.nu / p.young,
        twist: 2.0 * (1.0 + p.nu) * s / p.young,
        axial: t / p.young,
    };
    (u, SymTensor3::new(0.0, 0.0, t, 0.0, 0.0, s))
}

/// Worst residuals of the linear equilibrium problem over a point set.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ResidualReport {
    /// `max |div L0 e(u)|` at interior points.
    pub equilibrium: f64,
    /// `max |L0 e(u) e_r|` on the lateral faces.
    pub traction: f64,
    /// `max |(u_theta, u_z)|` on the bottom end.
    pub clamp: f64,
    pub points: usize,
}

/// `L0 e(u)` at a point.
pub fn linear_stress<U: SecondOrderField>(u: &U, pt: CylPoint, p: &ShellParams) -> Result<SymTensor3> {
    let g = crate::tensor::cyl_gradient(u, pt)?;
    stiffness_apply(&strain(&g), p)
}

/// `div L0 e(u)` at a point, from the closed-form second partials of `u`.
pub fn linear_divergence<U: SecondOrderField>(u: &U, pt: CylPoint, p: &ShellParams) -> Result<[f64; 3]> {
    let sigma = linear_stress(u, pt, p)?;
    let dg = gradient_partials(u, pt)?;
    let mut ds = [SymTensor3::ZERO; 3];
    for (d, g) in ds.iter_mut().zip(dg.iter()) {
        *d = stiffness_apply(&strain(g), p)?;
    }
    Ok(stress_divergence(&sigma, &ds, pt.r))
}

/// The deterministic `5 x 8 x 8` grid plus `extra` seeded random points.
pub fn check_points(p: &ShellParams, extra: usize, seed: u64) -> Vec<CylPoint> {
    let mut pts = Vec::with_capacity(320 + extra);
    let (r0, r1) = (p.inner_radius(), p.outer_radius());
    for i in 0..5 {
        let r = r0 + (r1 - r0) * i as f64 / 4.0;
        for j in 0..8 {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / 8.0;
            for k in 0..8 {
                pts.push(CylPoint::new(r, theta, p.length * k as f64 / 7.0));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..extra {
        pts.push(CylPoint::new(
            rng.gen_range(r0..r1),
            rng.gen_range(0.0..2.0 * std::f64::consts::PI),
            rng.gen_range(0.0..p.length),
        ));
    }
    pts
}

/// Residuals of `div L0 e(u) = 0`, traction-free lateral faces, and
/// `u_theta = u_z = 0` at `z = 0`.
pub fn linear_residuals<U: SecondOrderField>(u: &U, p: &ShellParams, points: &[CylPoint]) -> Result<ResidualReport> {
    let mut rep = ResidualReport { points: points.len(), ..Default::default() };
    let norm = |v: [f64; 3]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for &pt in points {
        rep.equilibrium = rep.equilibrium.max(norm(linear_divergence(u, pt, p)?));
        for r in [p.inner_radius(), p.outer_radius()] {
            let s = linear_stress(u, CylPoint::new(r, pt.theta, pt.z), p)?;
            rep.traction = rep.traction.max(norm([s.get(0, 0), s.get(0, 1), s.get(0, 2)]));
        }
        let v = u.jet(CylPoint::new(pt.r, pt.theta, 0.0)).value;
        rep.clamp = rep.clamp.max(v[1].abs().max(v[2].abs()));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::compression_tensor;

    fn params(nu: f64) -> ShellParams {
        ShellParams::new(0.05, 2.0, 1.0, nu).unwrap()
    }

    #[test]
    fn stretch_examples() {
        assert_eq!(svk_stretch(0.0, 0.3).unwrap(), 0.0);
        assert_eq!(svk_stretch(0.4, 0.0).unwrap(), 0.0);
        assert!((svk_stretch(0.1, 0.3).unwrap() - 0.0281051).abs() < 5e-8);
        assert!(svk_stretch(3.0, 0.5).is_err());
    }

    #[test]
    fn unloaded_branch_is_identity() {
        let b = svk_branch(0.0, &params(0.3)).unwrap();
        assert_eq!(b.f, Tensor3::identity());
        assert_eq!(b.green, SymTensor3::ZERO);
    }

    #[test]
    fn svk_faces_are_traction_free() {
        for nu in [-0.5, 0.0, 0.3, 0.45] {
            let p = params(nu);
            for lambda in [0.01, 0.05, 0.2] {
                assert!(svk_branch(lambda, &p).unwrap().traction_residual(&p).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn perfect_stress_is_degenerate_compression() {
        let p = ShellParams::new(0.05, 2.0, 3.0, 0.3).unwrap();
        let s = perfect_stress(&p);
        assert_eq!(compression_tensor(&s.at(1.0)), SymTensor3::new(-3.0, -3.0, 0.0, 0.0, 0.0, 0.0));
        assert_eq!(s.at(1.02).trace(), -3.0);
        assert_eq!(perfect_stress(&p.with_h(0.5).unwrap()), s);
    }

    #[test]
    fn imperfect_branch_reduces_to_perfect() {
        let p = params(0.3);
        assert_eq!(imperfect_branch(0.0, &p).stress.at(1.01), perfect_stress(&p).at(1.01));
        let p = ShellParams::new(0.05, 2.0, 1.0, 0.5).unwrap();
        assert!((imperfect_branch(0.5, &p).stress.at(1.0).get(1, 2) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn imperfect_branch_is_affine_in_eps() {
        let p = params(0.3);
        for r in [0.98, 1.0, 1.02] {
            let avg = (imperfect_branch(0.7, &p).stress.at(r) + imperfect_branch(-0.7, &p).stress.at(r)) * 0.5;
            assert_eq!(avg, perfect_stress(&p).at(r));
        }
    }

    #[test]
    fn imperfect_stress_matches_stiffness_of_displacement() {
        let p = params(0.3);
        let b = imperfect_branch(0.4, &p);
        for pt in check_points(&p, 5, 1) {
            let s = linear_stress(&b.displacement(), pt, &p).unwrap();
            assert!((s - b.stress.at(pt.r)).max_abs() < 1e-14);
        }
    }

    #[test]
    fn imperfect_branch_residuals() {
        let p = params(0.3);
        let b = imperfect_branch(0.5, &p);
        let rep = linear_residuals(&b.displacement(), &p, &check_points(&p, 20, 42)).unwrap();
        assert_eq!(rep.points, 340);
        assert!(rep.equilibrium < 1e-12 && rep.traction < 1e-12 && rep.clamp < 1e-12, "{rep:?}");
    }

    #[test]
    fn sigma0_family_consistency() {
        let p = ShellParams::new(0.05, 2.0, 1.0, 0.5).unwrap();
        let (u, s) = sigma0_family(1.0 / 3.0, -1.0, &p);
        assert!((u.twist - 1.0).abs() < 1e-15);
        assert_eq!((u.radial, u.axial), (0.5, -1.0));
        assert_eq!(s, SymTensor3::new(0.0, 0.0, -1.0, 0.0, 0.0, 1.0 / 3.0));

        let p = params(0.3);
        let eps = 0.35;
        let (u, _) = sigma0_family(eps * p.young / (2.0 * (1.0 + p.nu)), -p.young, &p);
        let want = imperfect_branch(eps, &p).displacement();
        assert!((u.radial - want.radial).abs() < 1e-15);
        assert!((u.twist - want.twist).abs() < 1e-15);
        assert_eq!(u.axial, want.axial);
    }

    #[test]
    fn sigma0_family_stress_at_mid_surface() {
        let p = params(0.25);
        let (u, s) = sigma0_family(0.3, -0.8, &p);
        let got = linear_stress(&u, CylPoint::new(1.0, 0.2, 0.4), &p).unwrap();
        assert!((got - s).max_abs() < 1e-15);
    }
}
