//! Cylindrical-coordinate tensor calculus and the isotropic elasticity tensor.
//!
//! Index convention everywhere: 0 = r, 1 = theta, 2 = z. For a vector field
//! `phi`, the gradient matrix has rows indexed by the component of `phi` and
//! columns by the direction of differentiation, in the physical (orthonormal)
//! cylindrical frame.

use std::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

pub const R: usize = 0;
pub const THETA: usize = 1;
pub const Z: usize = 2;

/// Geometry and material of the shell `[1-h/2, 1+h/2] x T x [0, L]`.
///
/// Lengths are scaled by the mid-surface radius. `nu = 0.5` is accepted so
/// that incompressible branches can share the type, but
/// [`ShellParams::lame`] and [`stiffness_apply`] refuse it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShellParams {
    pub h: f64,
    pub length: f64,
    pub young: f64,
    pub nu: f64,
}

/// Lamé constants of the isotropic tensor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lame {
    pub lambda: f64,
    pub mu: f64,
}

impl Lame {
    /// Lower coercivity constant: `(L0 xi, xi) >= alpha |xi|^2` on symmetric `xi`.
    pub fn coercivity_lower(&self) -> f64 {
        (2.0 * self.mu).min(3.0 * self.lambda + 2.0 * self.mu)
    }

    pub fn coercivity_upper(&self) -> f64 {
        (2.0 * self.mu).max(3.0 * self.lambda + 2.0 * self.mu)
    }
}

impl ShellParams {
    pub fn new(h: f64, length: f64, young: f64, nu: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::Domain(format!("thickness ratio h must lie in (0, 1), got {h}")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Domain(format!("length L must be positive, got {length}")));
        }
        if !(young > 0.0 && young.is_finite()) {
            return Err(Error::Domain(format!("Young modulus E must be positive, got {young}")));
        }
        if !(nu > -1.0 && nu <= 0.5) {
            return Err(Error::Domain(format!("Poisson ratio must lie in (-1, 0.5], got {nu}")));
        }
        Ok(Self { h, length, young, nu })
    }

    pub fn with_h(&self, h: f64) -> Result<Self> {
        Self::new(h, self.length, self.young, self.nu)
    }

    pub fn with_young(&self, young: f64) -> Result<Self> {
        Self::new(self.h, self.length, young, self.nu)
    }

    pub fn inner_radius(&self) -> f64 {
        1.0 - 0.5 * self.h
    }

    pub fn outer_radius(&self) -> f64 {
        1.0 + 0.5 * self.h
    }

    pub fn lame(&self) -> Result<Lame> {
        if self.nu >= 0.5 {
            return Err(Error::Incompressible { nu: self.nu });
        }
        let (e, nu) = (self.young, self.nu);
        Ok(Lame {
            lambda: e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)),
            mu: e / (2.0 * (1.0 + nu)),
        })
    }

    pub fn shear_modulus(&self) -> f64 {
        self.young / (2.0 * (1.0 + self.nu))
    }
}

/// General 3x3 matrix in the cylindrical frame.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Tensor3(pub [[f64; 3]; 3]);

impl Tensor3 {
    pub const ZERO: Tensor3 = Tensor3([[0.0; 3]; 3]);

    pub fn identity() -> Self {
        Self::diag(1.0, 1.0, 1.0)
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        Tensor3([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn transpose(&self) -> Self {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in self.0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t[j][i] = *v;
            }
        }
        Tensor3(t)
    }

    pub fn sym(&self) -> SymTensor3 {
        SymTensor3::from_tensor(self)
    }

    /// `(A - A^T) / 2`.
    pub fn skew(&self) -> Self {
        (*self - self.transpose()) * 0.5
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Frobenius inner product `tr(A B^T)`.
    pub fn dot(&self, other: &Self) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.0[i][j] * other.0[i][j];
            }
        }
        s
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.0[i][k] * other.0[k][j]).sum();
            }
        }
        Tensor3(t)
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|k| self.0[i][k] * v[k]).sum();
        }
        out
    }

    pub fn det(&self) -> f64 {
        let a = &self.0;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

impl Add for Tensor3 {
    type Output = Tensor3;
    fn add(self, rhs: Tensor3) -> Tensor3 {
        let mut t = self.0;
        for i in 0..3 {
            for j in 0..3 {
                t[i][j] += rhs.0[i][j];
            }
        }
        Tensor3(t)
    }
}

impl Sub for Tensor3 {
    type Output = Tensor3;
    fn sub(self, rhs: Tensor3) -> Tensor3 {
        self + rhs * -1.0
    }
}

impl Mul<f64> for Tensor3 {
    type Output = Tensor3;
    fn mul(self, s: f64) -> Tensor3 {
        let mut t = self.0;
        t.iter_mut().flatten().for_each(|v| *v *= s);
        Tensor3(t)
    }
}

impl Neg for Tensor3 {
    type Output = Tensor3;
    fn neg(self) -> Tensor3 {
        self * -1.0
    }
}

/// Symmetric 3x3 tensor stored as `[rr, tt, zz, rt, rz, tz]`.
///
/// Off-diagonal entries are stored once, so `(t,z)` and `(z,t)` cannot drift
/// apart.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct SymTensor3(pub [f64; 6]);

/// Packed slot of the `(i, j)` entry.
pub const fn packed_index(i: usize, j: usize) -> usize {
    match (i, j) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (0, 1) | (1, 0) => 3,
        (0, 2) | (2, 0) => 4,
        _ => 5,
    }
}

/// `(i, j)` pair of each packed slot.
pub const PACKED_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

impl SymTensor3 {
    pub const ZERO: SymTensor3 = SymTensor3([0.0; 6]);

    pub fn new(rr: f64, tt: f64, zz: f64, rt: f64, rz: f64, tz: f64) -> Self {
        SymTensor3([rr, tt, zz, rt, rz, tz])
    }

    pub fn identity() -> Self {
        Self::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0)
    }

    /// Symmetric part of a general matrix.
    pub fn from_tensor(t: &Tensor3) -> Self {
        let a = &t.0;
        Self::new(
            a[0][0],
            a[1][1],
            a[2][2],
            0.5 * (a[0][1] + a[1][0]),
            0.5 * (a[0][2] + a[2][0]),
            0.5 * (a[1][2] + a[2][1]),
        )
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[packed_index(i, j)]
    }

    pub fn to_tensor(&self) -> Tensor3 {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.get(i, j);
            }
        }
        Tensor3(t)
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[1] + self.0[2]
    }

    /// Frobenius inner product (off-diagonal slots count twice).
    pub fn dot(&self, other: &Self) -> f64 {
        let a = &self.0;
        let b = &other.0;
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + 2.0 * (a[3] * b[3] + a[4] * b[4] + a[5] * b[5])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

impl Add for SymTensor3 {
    type Output = SymTensor3;
    fn add(self, rhs: SymTensor3) -> SymTensor3 {
        let mut t = self.0;
        t.iter_mut().zip(rhs.0).for_each(|(a, b)| *a += b);
        SymTensor3(t)
    }
}

impl Sub for SymTensor3 {
    type Output = SymTensor3;
    fn sub(self, rhs: SymTensor3) -> SymTensor3 {
        self + rhs * -1.0
    }
}

impl Mul<f64> for SymTensor3 {
    type Output = SymTensor3;
    fn mul(self, s: f64) -> SymTensor3 {
        let mut t = self.0;
        t.iter_mut().for_each(|v| *v *= s);
        SymTensor3(t)
    }
}

impl Neg for SymTensor3 {
    type Output = SymTensor3;
    fn neg(self) -> SymTensor3 {
        self * -1.0
    }
}

/// A point `(r, theta, z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylPoint {
    pub r: f64,
    pub theta: f64,
    pub z: f64,
}

impl CylPoint {
    pub fn new(r: f64, theta: f64, z: f64) -> Self {
        Self { r, theta, z }
    }
}

/// Value and first coordinate partials of a vector field.
///
/// `d[c][k]` is the partial of the physical component `c` with respect to the
/// coordinate `k` (r, theta or z).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct FieldJet {
    pub value: [f64; 3],
    pub d: [[f64; 3]; 3],
}

impl Add for FieldJet {
    type Output = FieldJet;
    fn add(self, rhs: FieldJet) -> FieldJet {
        let mut out = self;
        for c in 0..3 {
            out.value[c] += rhs.value[c];
            for k in 0..3 {
                out.d[c][k] += rhs.d[c][k];
            }
        }
        out
    }
}

impl Mul<f64> for FieldJet {
    type Output = FieldJet;
    fn mul(self, s: f64) -> FieldJet {
        let mut out = self;
        out.value.iter_mut().for_each(|v| *v *= s);
        out.d.iter_mut().flatten().for_each(|v| *v *= s);
        out
    }
}

/// A vector field given in closed form together with its partials.
pub trait VectorField {
    fn jet(&self, p: CylPoint) -> FieldJet;
}

/// Fields that also know their second partials, `hessian[c][k][l]`.
pub trait SecondOrderField: VectorField {
    fn hessian(&self, p: CylPoint) -> [[[f64; 3]; 3]; 3];
}

/// Adapter turning a closure into a [`VectorField`].
pub struct FnField<F>(pub F);

impl<F: Fn(CylPoint) -> FieldJet> VectorField for FnField<F> {
    fn jet(&self, p: CylPoint) -> FieldJet {
        (self.0)(p)
    }
}

impl<T: VectorField + ?Sized> VectorField for &T {
    fn jet(&self, p: CylPoint) -> FieldJet {
        (**self).jet(p)
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("cylindrical derivatives need r > 0, got r = {r}")))
    }
}

/// Gradient matrix from a jet at radius `r`.
pub fn gradient_from_jet(j: &FieldJet, r: f64) -> Tensor3 {
    let v = &j.value;
    let d = &j.d;
    Tensor3([
        [d[R][R], (d[R][THETA] - v[THETA]) / r, d[R][Z]],
        [d[THETA][R], (d[THETA][THETA] + v[R]) / r, d[THETA][Z]],
        [d[Z][R], d[Z][THETA] / r, d[Z][Z]],
    ])
}

pub fn cyl_gradient(field: &impl VectorField, p: CylPoint) -> Result<Tensor3> {
    check_radius(p.r)?;
    Ok(gradient_from_jet(&field.jet(p), p.r))
}

/// Curl from a jet at radius `r`.
pub fn curl_from_jet(j: &FieldJet, r: f64) -> [f64; 3] {
    let v = &j.value;
    let d = &j.d;
    [
        d[Z][THETA] / r - d[THETA][Z],
        d[R][Z] - d[Z][R],
        d[THETA][R] + (v[THETA] - d[R][THETA]) / r,
    ]
}

/// Curl in cylindrical coordinates; satisfies `grad - grad^T = pi(curl)`.
pub fn cyl_curl(field: &impl VectorField, p: CylPoint) -> Result<[f64; 3]> {
    check_radius(p.r)?;
    Ok(curl_from_jet(&field.jet(p), p.r))
}

/// Cross-product matrix: `pi(a) u = a x u`.
pub fn cross_matrix(a: [f64; 3]) -> Tensor3 {
    Tensor3([[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]])
}

/// `e = (g + g^T) / 2`.
pub fn strain(g: &Tensor3) -> SymTensor3 {
    SymTensor3::from_tensor(g)
}

/// Isotropic stiffness: `lambda tr(xi) I + 2 mu xi`.
pub fn stiffness_apply(xi: &SymTensor3, p: &ShellParams) -> Result<SymTensor3> {
    let lame = p.lame()?;
    Ok(apply_lame(xi, &lame))
}

pub(crate) fn apply_lame(xi: &SymTensor3, lame: &Lame) -> SymTensor3 {
    SymTensor3::identity() * (lame.lambda * xi.trace()) + *xi * (2.0 * lame.mu)
}

/// Compression tensor `tr(sigma) I - sigma`.
pub fn compression_tensor(sigma: &SymTensor3) -> SymTensor3 {
    SymTensor3::identity() * sigma.trace() - *sigma
}

/// Partials of the gradient matrix with respect to `(r, theta, z)`.
pub fn gradient_partials<F: SecondOrderField + ?Sized>(field: &F, p: CylPoint) -> Result<[Tensor3; 3]> {
    check_radius(p.r)?;
    let j = field.jet(p);
    let hs = field.hessian(p);
    let (v, d, r) = (&j.value, &j.d, p.r);
    let mut out = [Tensor3::ZERO; 3];
    for (l, t) in out.iter_mut().enumerate() {
        let dr = if l == R { 1.0 } else { 0.0 };
        let x_rt = d[R][THETA] - v[THETA];
        let x_tt = d[THETA][THETA] + v[R];
        let x_zt = d[Z][THETA];
        *t = Tensor3([
            [
                hs[R][R][l],
                (hs[R][THETA][l] - d[THETA][l]) / r - dr * x_rt / (r * r),
                hs[R][Z][l],
            ],
            [
                hs[THETA][R][l],
                (hs[THETA][THETA][l] + d[R][l]) / r - dr * x_tt / (r * r),
                hs[THETA][Z][l],
            ],
            [hs[Z][R][l], hs[Z][THETA][l] / r - dr * x_zt / (r * r), hs[Z][Z][l]],
        ]);
    }
    Ok(out)
}

/// Divergence of a symmetric tensor field from its value and coordinate
/// partials `[d/dr, d/dtheta, d/dz]` at radius `r`.
pub fn stress_divergence(sigma: &SymTensor3, dsigma: &[SymTensor3; 3], r: f64) -> [f64; 3] {
    let s = |i, j| sigma.get(i, j);
    let ds = |l: usize, i, j| dsigma[l].get(i, j);
    [
        ds(R, R, R) + ds(THETA, R, THETA) / r + ds(Z, R, Z) + (s(R, R) - s(THETA, THETA)) / r,
        ds(R, R, THETA) + ds(THETA, THETA, THETA) / r + ds(Z, THETA, Z) + 2.0 * s(R, THETA) / r,
        ds(R, R, Z) + ds(THETA, THETA, Z) / r + ds(Z, Z, Z) + s(R, Z) / r,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(nu: f64) -> ShellParams {
        ShellParams::new(0.05, 2.0, 1.0, nu).unwrap()
    }

    /// A smooth field with nontrivial dependence on all three coordinates.
    fn wavy() -> FnField<impl Fn(CylPoint) -> FieldJet> {
        FnField(|p: CylPoint| {
            let (r, t, z) = (p.r, p.theta, p.z);
            let (st, ct) = t.sin_cos();
            FieldJet {
                value: [r * r * ct * z, r * st + z * z, (r * t).sin()],
                d: [
                    [2.0 * r * ct * z, -r * r * st * z, r * r * ct],
                    [st, r * ct, 2.0 * z],
                    [t * (r * t).cos(), r * (r * t).cos(), 0.0],
                ],
            }
        })
    }

    #[test]
    fn radial_dilation_gradient() {
        let f = FnField(|p: CylPoint| FieldJet {
            value: [p.r, 0.0, 0.0],
            d: [[1.0, 0.0, 0.0], [0.0; 3], [0.0; 3]],
        });
        let g = cyl_gradient(&f, CylPoint::new(1.3, 0.4, 0.2)).unwrap();
        assert_eq!(g, Tensor3::diag(1.0, 1.0, 0.0));
    }

    #[test]
    fn constant_axial_field_has_zero_gradient() {
        let f = FnField(|_| FieldJet { value: [0.0, 0.0, 2.5], d: [[0.0; 3]; 3] });
        assert_eq!(cyl_gradient(&f, CylPoint::new(0.7, 1.0, 3.0)).unwrap(), Tensor3::ZERO);
    }

    fn z_theta_field() -> FnField<impl Fn(CylPoint) -> FieldJet> {
        FnField(|p: CylPoint| FieldJet {
            value: [0.0, p.z, 0.0],
            d: [[0.0; 3], [0.0, 0.0, 1.0], [0.0; 3]],
        })
    }

    #[test]
    fn axial_shear_gradient_by_hand() {
        let g = cyl_gradient(&z_theta_field(), CylPoint::new(2.0, 0.0, 3.0)).unwrap();
        let mut expected = Tensor3::ZERO;
        expected.0[THETA][Z] = 1.0;
        expected.0[R][THETA] = -1.5;
        assert_eq!(g, expected);
    }

    #[test]
    fn nonpositive_radius_is_rejected() {
        assert!(matches!(cyl_gradient(&z_theta_field(), CylPoint::new(0.0, 0.0, 0.0)), Err(Error::Domain(_))));
        assert!(cyl_curl(&z_theta_field(), CylPoint::new(-1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn strain_examples() {
        let skew = Tensor3([[0.0, 1.0, -2.0], [-1.0, 0.0, 3.0], [2.0, -3.0, 0.0]]);
        assert_eq!(strain(&skew), SymTensor3::ZERO);
        let sym = Tensor3([[1.0, 2.0, 3.0], [2.0, 4.0, 5.0], [3.0, 5.0, 6.0]]);
        assert_eq!(strain(&sym).to_tensor(), sym);
        let mut g = Tensor3::ZERO;
        g.0[THETA][Z] = 1.0;
        assert_eq!(strain(&g).get(THETA, Z), 0.5);
        assert_eq!(strain(&g).get(Z, THETA), 0.5);
    }

    #[test]
    fn stiffness_examples() {
        let p = params(0.0);
        assert_eq!(stiffness_apply(&SymTensor3::ZERO, &p).unwrap(), SymTensor3::ZERO);
        let s = stiffness_apply(&SymTensor3::identity(), &p).unwrap();
        assert_abs_diff_eq!(s.0[..], SymTensor3::identity().0[..], epsilon = 1e-15);

        let p = params(0.3);
        let ezz = SymTensor3::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0);
        let s = stiffness_apply(&ezz, &p).unwrap();
        assert_abs_diff_eq!(s.get(Z, Z), 1.346154, epsilon = 5e-7);
        assert_abs_diff_eq!(s.get(R, R), 0.576923, epsilon = 5e-7);
        assert_abs_diff_eq!(s.get(THETA, THETA), 0.576923, epsilon = 5e-7);
        assert_eq!(s.get(THETA, Z), 0.0);

        let p = ShellParams::new(0.05, 2.0, 1.0, 0.5).unwrap();
        assert_eq!(stiffness_apply(&ezz, &p), Err(Error::Incompressible { nu: 0.5 }));
    }

    #[test]
    fn compression_tensor_examples() {
        let sigma = SymTensor3::new(0.0, 0.0, -3.0, 0.0, 0.0, 0.0);
        assert_eq!(compression_tensor(&sigma), SymTensor3::new(-3.0, -3.0, 0.0, 0.0, 0.0, 0.0));
        assert_eq!(compression_tensor(&SymTensor3::identity()), SymTensor3::identity() * 2.0);
        let shear = SymTensor3::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.7);
        assert_eq!(compression_tensor(&shear), SymTensor3::new(0.0, 0.0, 0.0, 0.0, 0.0, -0.7));
    }

    #[test]
    fn curl_of_axial_shear() {
        let p = CylPoint::new(1.0, 0.0, 0.0);
        let f = z_theta_field();
        let w = cyl_curl(&f, p).unwrap();
        assert_eq!(w, [-1.0, 0.0, 0.0]);
        let g = cyl_gradient(&f, p).unwrap();
        let diff = g - g.transpose() - cross_matrix(w);
        assert!(diff.max_abs() < 1e-15);
    }

    #[test]
    fn curl_of_gradient_field_vanishes() {
        // phi = grad f with f = r^2 z cos(theta):
        // phi_r = 2 r z cos, phi_t = r z (-sin) , phi_z = r^2 cos
        let f = FnField(|p: CylPoint| {
            let (r, z) = (p.r, p.z);
            let (s, c) = p.theta.sin_cos();
            FieldJet {
                value: [2.0 * r * z * c, -r * z * s, r * r * c],
                d: [
                    [2.0 * z * c, -2.0 * r * z * s, 2.0 * r * c],
                    [-z * s, -r * z * c, -r * s],
                    [2.0 * r * c, -r * r * s, 0.0],
                ],
            }
        });
        let w = cyl_curl(&f, CylPoint::new(1.2, 0.3, 0.8)).unwrap();
        assert!(w.iter().all(|v| v.abs() < 1e-14), "{w:?}");
    }

    #[test]
    fn gradient_splits_into_strain_and_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = wavy();
        for _ in 0..10 {
            let p = CylPoint::new(rng.gen_range(0.5..1.5), rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(0.0..2.0));
            let g = cyl_gradient(&f, p).unwrap();
            let w = cyl_curl(&f, p).unwrap();
            let rebuilt = strain(&g).to_tensor() + cross_matrix(w) * 0.5;
            assert!((rebuilt - g).max_abs() < 1e-13);
            assert!((g - g.transpose() - cross_matrix(w)).max_abs() < 1e-13);
            assert!((cross_matrix(w) * 0.5 - g.skew()).max_abs() < 1e-13);
        }
    }

    #[test]
    fn stiffness_is_coercive_and_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &nu in &[-0.9, -0.3, 0.0, 0.3, 0.49] {
            let p = params(nu);
            let lame = p.lame().unwrap();
            let alpha = lame.coercivity_lower();
            assert!(alpha > 0.0);
            for _ in 0..50 {
                let xi = SymTensor3(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
                let eta = SymTensor3(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
                let lx = stiffness_apply(&xi, &p).unwrap();
                assert!(lx.dot(&xi) >= alpha * xi.dot(&xi) * (1.0 - 1e-12));
                assert!(lx.dot(&xi) <= lame.coercivity_upper() * xi.dot(&xi) * (1.0 + 1e-12));
                let lin = stiffness_apply(&(xi * 2.0 + eta), &p).unwrap() - (lx * 2.0 + stiffness_apply(&eta, &p).unwrap());
                assert!(lin.max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn compression_tensor_doubles_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let s = SymTensor3(std::array::from_fn(|_| rng.gen_range(-5.0..5.0)));
            assert!((compression_tensor(&s).trace() - 2.0 * s.trace()).abs() < 1e-12);
        }
    }

    #[test]
    fn params_validation() {
        assert!(ShellParams::new(0.0, 2.0, 1.0, 0.3).is_err());
        assert!(ShellParams::new(1.0, 2.0, 1.0, 0.3).is_err());
        assert!(ShellParams::new(0.1, -2.0, 1.0, 0.3).is_err());
        assert!(ShellParams::new(0.1, 2.0, 0.0, 0.3).is_err());
        assert!(ShellParams::new(0.1, 2.0, 1.0, 0.51).is_err());
        assert!(ShellParams::new(0.1, 2.0, 1.0, -1.0).is_err());
        assert!(ShellParams::new(0.1, 2.0, 1.0, 0.5).is_ok());
    }
}
