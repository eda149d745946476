//! The explicit test field built from a profile `W(eta, z)` with
//! `eta = theta / h^{1/4}`:
//!
//! ```text
//! phi_r     = -W_eta2
//! phi_theta = r h^{1/4} W_eta + (r - 1) h^{-1/4} W_eta3
//! phi_z     = (r - 1) W_eta2z - h^{1/2} W_z
//! ```
//!
//! and its Rayleigh ratios, integrated in the scaled coordinates
//! `(t, eta, z)` with `r = 1 + t h / 2`.

use std::f64::consts::PI;

use crate::quadrature::GaussRule;
use crate::tensor::{
    apply_lame, gradient_from_jet, strain, CylPoint, FieldJet, ShellParams, SymTensor3, Tensor3, VectorField,
};
use crate::{Error, Result};

/// Dense polynomial, constant term first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![0.0]);
        }
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly(vec![1.0]), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    /// Exact `int_a^b`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let anti = |x: f64| self.0.iter().enumerate().rev().fold(0.0, |acc, (k, c)| acc * x + c / (k as f64 + 1.0)) * x;
        anti(b) - anti(a)
    }
}

/// A polynomial on `[lo, hi]`, zero outside.
#[derive(Clone, Debug, PartialEq)]
pub struct Bump {
    pub poly: Poly,
    pub lo: f64,
    pub hi: f64,
}

impl Bump {
    /// `(1 - x^2)^6` on `[-1, 1]`.
    pub fn unit() -> Bump {
        Bump { poly: Poly(vec![1.0, 0.0, -1.0]).pow(6), lo: -1.0, hi: 1.0 }
    }

    /// `(z (L - z) / L^2)^power` on `[0, L]`, scaled by `scale`.
    pub fn axial(length: f64, power: u32, scale: f64) -> Bump {
        let base = Poly(vec![0.0, 1.0 / length, -1.0 / (length * length)]);
        Bump { poly: base.pow(power).scale(scale), lo: 0.0, hi: length }
    }

    pub fn derivative(&self) -> Bump {
        Bump { poly: self.poly.derivative(), lo: self.lo, hi: self.hi }
    }

    pub fn nth_derivative(&self, n: usize) -> Bump {
        (0..n).fold(self.clone(), |b, _| b.derivative())
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi {
            0.0
        } else {
            self.poly.eval(x)
        }
    }

    /// Exact integral of `self * other` over the common support.
    pub fn inner(&self, other: &Bump) -> f64 {
        let (a, b) = (self.lo.max(other.lo), self.hi.min(other.hi));
        if a >= b {
            0.0
        } else {
            self.poly.mul(&other.poly).integral(a, b)
        }
    }
}

const ETA_ORDER: usize = 5;
const Z_ORDER: usize = 3;

/// Profile `W = sum_i A_i(eta) B_i(z)` with support in `[-1, 1] x [0, L]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzProfile {
    terms: Vec<(Bump, Bump)>,
    length: f64,
}

/// `d[i][j] = d^i/d eta^i d^j/dz^j W`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ProfileJet {
    pub d: [[f64; Z_ORDER]; ETA_ORDER],
}

impl AnsatzProfile {
    pub fn new(terms: Vec<(Bump, Bump)>, length: f64) -> Result<Self> {
        for (a, b) in &terms {
            if a.lo < -1.0 || a.hi > 1.0 || b.lo < 0.0 || b.hi > length {
                return Err(Error::Domain("profile support must lie in [-1, 1] x [0, L]".into()));
            }
        }
        Ok(Self { terms, length })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn jet(&self, eta: f64, z: f64) -> ProfileJet {
        let mut out = ProfileJet::default();
        for (a, b) in &self.terms {
            if eta < a.lo || eta > a.hi || z < b.lo || z > b.hi {
                continue;
            }
            let mut av = [0.0; ETA_ORDER];
            let mut p = a.poly.clone();
            for v in av.iter_mut() {
                *v = p.eval(eta);
                p = p.derivative();
            }
            let mut bv = [0.0; Z_ORDER];
            let mut q = b.poly.clone();
            for v in bv.iter_mut() {
                *v = q.eval(z);
                q = q.derivative();
            }
            for i in 0..ETA_ORDER {
                for j in 0..Z_ORDER {
                    out.d[i][j] += av[i] * bv[j];
                }
            }
        }
        out
    }

    pub fn value(&self, eta: f64, z: f64) -> f64 {
        self.jet(eta, z).d[0][0]
    }
}

/// `(1 - eta^2)^6 (z (L - z) / L^2)^6`, scaled to unit maximum.
pub fn bump_profile(length: f64) -> Result<AnsatzProfile> {
    if !(length > 0.0) {
        return Err(Error::Domain(format!("length must be positive, got {length}")));
    }
    AnsatzProfile::new(vec![(Bump::unit(), Bump::axial(length, 6, 4096.0))], length)
}

/// `W = phi(eta) psi'(z) + phi'(eta) psi(z)`.
pub fn phipsi_profile(phi: &Bump, psi: &Bump) -> Result<AnsatzProfile> {
    AnsatzProfile::new(vec![(phi.clone(), psi.derivative()), (phi.derivative(), psi.clone())], psi.hi)
}

/// `psi(z) = z^3 (L - z)^3 / L^6`.
pub fn cubic_axial_bump(length: f64) -> Bump {
    Bump::axial(length, 3, 1.0)
}

/// `2 int phi'''^2 deta * int psi'^2 dz`, the closed form of the cross
/// integral for a `phi psi` profile.
pub fn phipsi_cross_identity(phi: &Bump, psi: &Bump) -> f64 {
    let p3 = phi.nth_derivative(3);
    let q1 = psi.derivative();
    2.0 * p3.inner(&p3) * q1.inner(&q1)
}

/// The displacement field of a profile at thickness `h`.
#[derive(Clone, Debug)]
pub struct AnsatzField {
    profile: AnsatzProfile,
    q: f64,
}

pub fn ansatz_field(profile: &AnsatzProfile, p: &ShellParams) -> Result<AnsatzField> {
    let q = p.h.powf(0.25);
    if !(q < PI) {
        return Err(Error::Domain(format!("h^(1/4) = {q} must be below pi")));
    }
    if (profile.length - p.length).abs() > 1e-12 * p.length {
        return Err(Error::Domain(format!(
            "profile length {} does not match the shell length {}",
            profile.length, p.length
        )));
    }
    Ok(AnsatzField { profile: profile.clone(), q })
}

impl AnsatzField {
    fn jet_scaled(&self, r: f64, eta: f64, z: f64) -> FieldJet {
        let w = self.profile.jet(eta, z).d;
        let q = self.q;
        let s = r - 1.0;
        FieldJet {
            value: [-w[2][0], r * q * w[1][0] + s / q * w[3][0], s * w[2][1] - q * q * w[0][1]],
            d: [
                [0.0, -w[3][0] / q, -w[2][1]],
                [q * w[1][0] + w[3][0] / q, r * w[2][0] + s / (q * q) * w[4][0], r * q * w[1][1] + s / q * w[3][1]],
                [w[2][1], s / q * w[3][1] - q * w[1][1], s * w[2][2] - q * q * w[0][2]],
            ],
        }
    }
}

impl VectorField for AnsatzField {
    fn jet(&self, p: CylPoint) -> FieldJet {
        let theta = p.theta - 2.0 * PI * (p.theta / (2.0 * PI)).round();
        self.jet_scaled(p.r, theta / self.q, p.z)
    }
}

/// Squared norms and forms of the ansatz field at one thickness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnsatzReport {
    pub h: f64,
    pub strain_sq: f64,
    pub grad_sq: f64,
    pub theta_z_sq: f64,
    pub r_z_sq: f64,
    pub z_z_sq: f64,
    /// `int (L0 e, e)`.
    pub stability: f64,
    /// `-int (sigma, grad^T grad)` for `sigma = -E e_z (x) e_z`.
    pub neg_compression: f64,
    /// `int (grad)_rz (grad)_r theta`, the entries paired by a `theta z` stress.
    pub cross: f64,
}

impl AnsatzReport {
    pub fn korn_ratio(&self) -> f64 {
        self.strain_sq / self.grad_sq
    }

    pub fn theta_z_ratio(&self) -> f64 {
        self.theta_z_sq / self.strain_sq
    }

    pub fn r_z_ratio(&self) -> f64 {
        self.r_z_sq / self.strain_sq
    }

    /// `S / (-c)`, an upper bound for the buckling load.
    pub fn load_ratio(&self) -> f64 {
        self.stability / self.neg_compression
    }

    fn values(&self) -> [f64; 8] {
        [
            self.strain_sq,
            self.grad_sq,
            self.theta_z_sq,
            self.r_z_sq,
            self.z_z_sq,
            self.stability,
            self.neg_compression,
            self.cross,
        ]
    }
}

fn integrate_report(field: &AnsatzField, p: &ShellParams, n: [usize; 3]) -> Result<AnsatzReport> {
    let lame = p.lame()?;
    let rt = GaussRule::new(n[0])?;
    let re = GaussRule::new(n[1])?;
    let rz = GaussRule::new(n[2])?;
    let (h, q) = (p.h, field.q);
    let mut acc = [0.0; 8];
    for (t, wt) in rt.mapped(-1.0, 1.0) {
        let r = 1.0 + 0.5 * h * t;
        let wr = wt * 0.5 * h * r;
        for (eta, we) in re.mapped(-1.0, 1.0) {
            for (z, wz) in rz.mapped(0.0, p.length) {
                let w = wr * we * q * wz;
                let g: Tensor3 = gradient_from_jet(&field.jet_scaled(r, eta, z), r);
                let e: SymTensor3 = strain(&g);
                acc[0] += w * e.dot(&e);
                acc[1] += w * g.dot(&g);
                acc[2] += w * g.get(1, 2).powi(2);
                acc[3] += w * g.get(0, 2).powi(2);
                acc[4] += w * g.get(2, 2).powi(2);
                acc[5] += w * apply_lame(&e, &lame).dot(&e);
                acc[6] += w * p.young * (0..3).map(|c| g.get(c, 2).powi(2)).sum::<f64>();
                acc[7] += w * g.get(0, 2) * g.get(0, 1);
            }
        }
    }
    Ok(AnsatzReport {
        h,
        strain_sq: acc[0],
        grad_sq: acc[1],
        theta_z_sq: acc[2],
        r_z_sq: acc[3],
        z_z_sq: acc[4],
        stability: acc[5],
        neg_compression: acc[6],
        cross: acc[7],
    })
}

/// Ratios of the ansatz field, checked by doubling every quadrature order.
pub fn ansatz_ratios(profile: &AnsatzProfile, p: &ShellParams) -> Result<AnsatzReport> {
    let field = ansatz_field(profile, p)?;
    let base = integrate_report(&field, p, [6, 16, 16])?;
    let fine = integrate_report(&field, p, [12, 32, 32])?;
    let (b, f) = (base.values(), fine.values());
    for k in 0..8 {
        // The cross entry may vanish; measure it against its Cauchy-Schwarz scale.
        let scale = if k == 7 { (f[3] * f[1]).sqrt() } else { f[k].abs() };
        if (b[k] - f[k]).abs() > 1e-8 * scale {
            return Err(Error::Numerical(format!(
                "ansatz quadrature did not converge at h = {}: entry {k} changed from {:e} to {:e}",
                p.h, b[k], f[k]
            )));
        }
    }
    Ok(fine)
}

/// `int int W_eta3 W_eta2z deta dz` by 2D Gauss quadrature with a doubling check.
pub fn cross_limit(profile: &AnsatzProfile) -> Result<f64> {
    let eval = |n: usize| -> Result<(f64, f64)> {
        let rule = GaussRule::new(n)?;
        let (mut s, mut scale) = (0.0, 0.0);
        for (eta, we) in rule.mapped(-1.0, 1.0) {
            for (z, wz) in rule.mapped(0.0, profile.length) {
                let d = profile.jet(eta, z).d;
                s += we * wz * d[3][0] * d[2][1];
                scale += we * wz * (d[3][0] * d[2][1]).abs();
            }
        }
        Ok((s, scale))
    };
    let ((a, _), (b, scale)) = (eval(20)?, eval(40)?);
    if (a - b).abs() > 1e-8 * scale {
        return Err(Error::Numerical(format!("cross integral did not converge: {a:e} vs {b:e}")));
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::cyl_gradient;

    #[test]
    fn poly_basics() {
        let p = Poly(vec![1.0, 0.0, -1.0]).pow(2);
        assert_eq!(p.0, vec![1.0, 0.0, -2.0, 0.0, 1.0]);
        assert_eq!(p.derivative().0, vec![0.0, -4.0, 0.0, 4.0]);
        assert!((p.integral(-1.0, 1.0) - 16.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn bump_vanishes_to_high_order_at_support_edge() {
        let b = Bump::unit();
        for k in 0..6 {
            let d = b.nth_derivative(k);
            assert!(d.poly.eval(1.0).abs() < 1e-12 && d.poly.eval(-1.0).abs() < 1e-12, "order {k}");
        }
        assert!(b.nth_derivative(6).poly.eval(1.0).abs() > 1.0);
    }

    #[test]
    fn bump_profile_has_unit_max() {
        let w = bump_profile(2.0).unwrap();
        assert!((w.value(0.0, 1.0) - 1.0).abs() < 1e-12);
        assert_eq!(w.value(1.0, 1.0), 0.0);
        assert_eq!(w.value(1.5, 1.0), 0.0);
        let mut max = 0.0_f64;
        for i in 0..41 {
            for j in 0..41 {
                max = max.max(w.value(-1.0 + i as f64 / 20.0, j as f64 / 20.0).abs());
            }
        }
        assert!((max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_phi_gives_zero_profile() {
        let zero = Bump { poly: Poly(vec![0.0]), lo: -1.0, hi: 1.0 };
        let w = phipsi_profile(&zero, &cubic_axial_bump(2.0)).unwrap();
        assert_eq!(w.value(0.3, 0.7), 0.0);
    }

    #[test]
    fn tangential_components_vanish_at_ends() {
        let p = ShellParams::new(0.01, 2.0, 1.0, 0.3).unwrap();
        for profile in [bump_profile(2.0).unwrap(), phipsi_profile(&Bump::unit(), &cubic_axial_bump(2.0)).unwrap()] {
            let f = ansatz_field(&profile, &p).unwrap();
            for z in [0.0, 2.0] {
                for theta in [-0.2, 0.0, 0.1] {
                    let v = f.jet(CylPoint::new(1.004, theta, z)).value;
                    assert!(v[1].abs() < 1e-14 && v[2].abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn field_vanishes_outside_window() {
        let p = ShellParams::new(0.01, 2.0, 1.0, 0.3).unwrap();
        let f = ansatz_field(&bump_profile(2.0).unwrap(), &p).unwrap();
        let j = f.jet(CylPoint::new(1.0, 0.5, 1.0));
        assert_eq!(j.value, [0.0; 3]);
        // Periodic extension.
        let a = f.jet(CylPoint::new(1.0, 0.1, 1.0));
        let b = f.jet(CylPoint::new(1.0, 0.1 + 2.0 * PI, 1.0));
        assert!((a.value[0] - b.value[0]).abs() < 1e-9);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = ShellParams::new(0.01, 2.0, 1.0, 0.3).unwrap();
        let f = ansatz_field(&phipsi_profile(&Bump::unit(), &cubic_axial_bump(2.0)).unwrap(), &p).unwrap();
        let pt = CylPoint::new(1.002, 0.07, 0.8);
        let j = f.jet(pt);
        let step = 1e-6;
        for k in 0..3 {
            let mut hi = pt;
            let mut lo = pt;
            match k {
                0 => (hi.r, lo.r) = (pt.r + step, pt.r - step),
                1 => (hi.theta, lo.theta) = (pt.theta + step, pt.theta - step),
                _ => (hi.z, lo.z) = (pt.z + step, pt.z - step),
            }
            let (a, b) = (f.jet(hi).value, f.jet(lo).value);
            for c in 0..3 {
                let fd = (a[c] - b[c]) / (2.0 * step);
                assert!((fd - j.d[c][k]).abs() < 1e-6 * j.d[c][k].abs().max(1.0), "c={c} k={k}");
            }
        }
        assert!(cyl_gradient(&f, pt).is_ok());
    }

    #[test]
    fn mismatched_length_rejected() {
        let p = ShellParams::new(0.5, 2.0, 1.0, 0.3).unwrap();
        assert!(ansatz_field(&bump_profile(2.0).unwrap(), &p).is_ok());
        let p = ShellParams::new(0.1, 3.0, 1.0, 0.3).unwrap();
        assert!(ansatz_field(&bump_profile(2.0).unwrap(), &p).is_err());
    }

    #[test]
    fn cross_identity_holds() {
        let (phi, psi) = (Bump::unit(), cubic_axial_bump(2.0));
        let w = phipsi_profile(&phi, &psi).unwrap();
        let quad = cross_limit(&w).unwrap();
        let exact = phipsi_cross_identity(&phi, &psi);
        assert!(exact > 0.0);
        assert!((quad - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn separable_profile_has_no_cross_integral() {
        let w = bump_profile(2.0).unwrap();
        let scale = {
            let rule = GaussRule::new(30).unwrap();
            let mut s = 0.0;
            for (eta, we) in rule.mapped(-1.0, 1.0) {
                for (z, wz) in rule.mapped(0.0, 2.0) {
                    let d = w.jet(eta, z).d;
                    s += we * wz * d[3][0].abs() * d[2][1].abs();
                }
            }
            s
        };
        assert!(cross_limit(&w).unwrap().abs() < 1e-12 * scale);
    }
}
