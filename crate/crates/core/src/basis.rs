//! Spectral discretization of the admissible displacements for one
//! circumferential wavenumber, and assembly of the quadratic forms.
//!
//! A basis field has a single nonzero component `c`, equal to
//! `P_p(t) * A_k(z) * Theta(theta)` with `t = 2(r - 1)/h`. The axial factor is
//! `cos(k pi z / L)` (k = 0..K-1) for the radial component and
//! `sin(k pi z / L)` (k = 1..K) for the other two, so the ends clamp the
//! tangential displacements and leave the radial one free.
//!
//! Every entry of the gradient of such a field is again a product of a radial
//! function, one axial trig factor and one angular factor. Gram matrices are
//! therefore assembled from a radial Gauss rule times closed-form axial and
//! angular integrals.

use std::f64::consts::PI;

use faer::Mat;

use crate::quadrature::{legendre_table, GaussRule};
use crate::tensor::{
    apply_lame, compression_tensor, CylPoint, FieldJet, ShellParams, SymTensor3, VectorField, PACKED_PAIRS,
};
use crate::{Error, Result};

pub const DEFAULT_P_RAD: usize = 3;
pub const MAX_K_AX: usize = 64;

/// Default number of axial modes: `ceil(4 L / (pi sqrt h))`, capped.
pub fn default_k_ax(h: f64, length: f64) -> usize {
    scaled_k_ax(h, length, 1.0)
}

/// Default axial count multiplied by `factor`, capped at [`MAX_K_AX`].
pub fn scaled_k_ax(h: f64, length: f64, factor: f64) -> usize {
    let k = (factor * 4.0 * length / (PI * h.sqrt())).ceil() as usize;
    k.clamp(1, MAX_K_AX)
}

/// Which angular pairing the basis uses.
///
/// `Even`: `(cos, sin, cos)` for the `(r, theta, z)` components; `Odd` swaps
/// them. `Both` is their union and is needed when the stress has a
/// `theta`-shear (`r theta` or `theta z`) component, which couples the two
/// classes. At `m = 0` all angular factors are 1 and the classes coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trig {
    Sin(u32),
    Cos(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ang {
    One,
    Cos,
    Sin,
}

/// Identity of one basis field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisFn {
    pub component: usize,
    pub trig: Trig,
    pub ang: Ang,
    pub degree: usize,
}

/// Resolution record attached to results.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisMeta {
    pub m: u32,
    pub parity: Parity,
    pub k_ax: usize,
    pub p_rad: usize,
    pub radial_points: usize,
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct BlockBasis {
    params: ShellParams,
    m: u32,
    parity: Parity,
    k_ax: usize,
    p_rad: usize,
    rule: GaussRule,
    functions: Vec<BasisFn>,
    radii: Vec<f64>,
    // Gauss weight times the Jacobian h/2 times r.
    vol_weights: Vec<f64>,
}

/// Stress affine in `r - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct StressField {
    pub sigma0: SymTensor3,
    pub sigma1: SymTensor3,
}

impl StressField {
    pub fn constant(sigma0: SymTensor3) -> Self {
        Self { sigma0, sigma1: SymTensor3::ZERO }
    }

    pub fn at(&self, r: f64) -> SymTensor3 {
        self.sigma0 + self.sigma1 * (r - 1.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { sigma0: self.sigma0 * s, sigma1: self.sigma1 * s }
    }

    /// Largest Frobenius norm over the shell; attained on a lateral face
    /// because the field is affine in `r`.
    pub fn sup_norm(&self, p: &ShellParams) -> f64 {
        self.at(p.inner_radius()).norm().max(self.at(p.outer_radius()).norm())
    }

    /// True when the stress has `r theta` or `theta z` shear somewhere.
    pub fn has_theta_shear(&self) -> bool {
        [3, 5].iter().any(|&k| self.sigma0.0[k] != 0.0 || self.sigma1.0[k] != 0.0)
    }
}

/// Gram matrices of the stability, compression, gradient and strain forms.
#[derive(Clone, Debug)]
pub struct FormMatrices {
    pub s: Mat<f64>,
    pub c: Mat<f64>,
    pub g: Mat<f64>,
    pub ee: Mat<f64>,
    pub n: usize,
    pub warnings: Vec<String>,
}

/// Selects a gradient entry, or the symmetrized cross pair of the
/// `(r, z)` and `(r, theta)` entries that pairs with a `theta z` stress.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GradComponent {
    Entry(usize, usize),
    Cross,
}

impl GradComponent {
    pub const RZ: GradComponent = GradComponent::Entry(0, 2);
    pub const THETA_Z: GradComponent = GradComponent::Entry(1, 2);
    pub const ZZ: GradComponent = GradComponent::Entry(2, 2);
    pub const THETA_R: GradComponent = GradComponent::Entry(1, 0);

    pub fn label(&self) -> String {
        const N: [&str; 3] = ["r", "theta", "z"];
        match self {
            GradComponent::Entry(a, b) => format!("{}{}", N[*a], N[*b]),
            GradComponent::Cross => "cross".to_string(),
        }
    }
}

impl std::str::FromStr for GradComponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let idx = |c: &str| match c {
            "r" => Some(0),
            "theta" | "t" => Some(1),
            "z" => Some(2),
            _ => None,
        };
        if s == "cross" {
            return Ok(GradComponent::Cross);
        }
        let parts: Vec<&str> = s.split([',', '-', '_']).collect();
        if let [a, b] = parts.as_slice() {
            if let (Some(a), Some(b)) = (idx(a), idx(b)) {
                return Ok(GradComponent::Entry(a, b));
            }
        }
        match s {
            "rz" => Ok(GradComponent::RZ),
            "thetaz" | "tz" => Ok(GradComponent::THETA_Z),
            "zz" => Ok(GradComponent::ZZ),
            "thetar" | "tr" => Ok(GradComponent::THETA_R),
            _ => Err(Error::Config(format!("unknown gradient component '{s}' (try rz, theta-z, zz, theta-r, cross)"))),
        }
    }
}

// Feature slots: gradient entries 0..9 (row * 3 + col), packed strain 9..15,
// trace 15, curl 16..19.
const N_SLOTS: usize = 19;
const STRAIN: usize = 9;
const TRACE: usize = 15;
const CURL: usize = 16;

#[derive(Clone, Debug)]
struct Feature {
    rad: Vec<f64>,
    trig: Trig,
    ang: Ang,
}

impl Feature {
    fn scaled(&self, s: f64) -> Feature {
        Feature { rad: self.rad.iter().map(|v| v * s).collect(), trig: self.trig, ang: self.ang }
    }
}

fn combine(a: &Option<Feature>, sa: f64, b: &Option<Feature>, sb: f64) -> Option<Feature> {
    match (a, b) {
        (None, None) => None,
        (Some(f), None) => Some(f.scaled(sa)),
        (None, Some(f)) => Some(f.scaled(sb)),
        (Some(f), Some(g)) => {
            debug_assert!(f.trig == g.trig && f.ang == g.ang);
            let rad = f.rad.iter().zip(&g.rad).map(|(x, y)| sa * x + sb * y).collect();
            Some(Feature { rad, trig: f.trig, ang: f.ang })
        }
    }
}

type FeatureSet = [Option<Feature>; N_SLOTS];

/// `(coefficient, factor)` of the z-derivative of an axial factor.
fn trig_derivative(t: Trig, length: f64) -> Option<(f64, Trig)> {
    match t {
        Trig::Sin(k) => Some((k as f64 * PI / length, Trig::Cos(k))),
        Trig::Cos(0) => None,
        Trig::Cos(k) => Some((-(k as f64) * PI / length, Trig::Sin(k))),
    }
}

fn ang_derivative(a: Ang, m: u32) -> Option<(f64, Ang)> {
    match a {
        Ang::One => None,
        Ang::Cos => Some((-(m as f64), Ang::Sin)),
        Ang::Sin => Some((m as f64, Ang::Cos)),
    }
}

fn trig_value(t: Trig, z: f64, length: f64) -> f64 {
    match t {
        Trig::Sin(k) => (k as f64 * PI * z / length).sin(),
        Trig::Cos(k) => (k as f64 * PI * z / length).cos(),
    }
}

fn ang_value(a: Ang, m: u32, theta: f64) -> f64 {
    match a {
        Ang::One => 1.0,
        Ang::Cos => (m as f64 * theta).cos(),
        Ang::Sin => (m as f64 * theta).sin(),
    }
}

/// `int_0^L A_a A_b dz` in closed form.
fn axial_integral(a: Trig, b: Trig, length: f64) -> f64 {
    match (a, b) {
        (Trig::Sin(i), Trig::Sin(j)) => {
            if i == j {
                0.5 * length
            } else {
                0.0
            }
        }
        (Trig::Cos(i), Trig::Cos(j)) => {
            if i != j {
                0.0
            } else if i == 0 {
                length
            } else {
                0.5 * length
            }
        }
        (Trig::Sin(i), Trig::Cos(j)) | (Trig::Cos(j), Trig::Sin(i)) => {
            if (i + j) % 2 == 0 {
                0.0
            } else {
                let (fi, fj) = (i as f64, j as f64);
                length / PI * 2.0 * fi / (fi * fi - fj * fj)
            }
        }
    }
}

/// `int_0^{2 pi} Theta_a Theta_b dtheta` for `m >= 1` (or both `One`).
fn angular_integral(a: Ang, b: Ang) -> f64 {
    match (a, b) {
        (Ang::One, Ang::One) => 2.0 * PI,
        (Ang::Cos, Ang::Cos) | (Ang::Sin, Ang::Sin) => PI,
        _ => 0.0,
    }
}

impl BlockBasis {
    /// Basis with the default radial rule of `p_rad + 3` points.
    pub fn new(params: ShellParams, m: u32, parity: Parity, k_ax: usize, p_rad: usize) -> Result<Self> {
        Self::with_radial_points(params, m, parity, k_ax, p_rad, p_rad + 3)
    }

    pub fn with_radial_points(
        params: ShellParams,
        m: u32,
        parity: Parity,
        k_ax: usize,
        p_rad: usize,
        radial_points: usize,
    ) -> Result<Self> {
        if k_ax < 1 {
            return Err(Error::Config(format!("K_ax must be at least 1, got {k_ax}")));
        }
        if p_rad < 1 {
            return Err(Error::Config(format!("P_rad must be at least 1, got {p_rad}")));
        }
        let rule = GaussRule::new(radial_points)?;
        let h = params.h;
        let radii: Vec<f64> = rule.nodes.iter().map(|t| 1.0 + 0.5 * h * t).collect();
        let vol_weights = rule.weights.iter().zip(&radii).map(|(w, r)| w * 0.5 * h * r).collect();

        let classes: &[[Ang; 3]] = if m == 0 {
            &[[Ang::One; 3]]
        } else {
            match parity {
                Parity::Even => &[[Ang::Cos, Ang::Sin, Ang::Cos]],
                Parity::Odd => &[[Ang::Sin, Ang::Cos, Ang::Sin]],
                Parity::Both => &[[Ang::Cos, Ang::Sin, Ang::Cos], [Ang::Sin, Ang::Cos, Ang::Sin]],
            }
        };
        let mut functions = Vec::new();
        for angs in classes {
            for (component, &ang) in angs.iter().enumerate() {
                for k in 0..k_ax as u32 {
                    let trig = if component == 0 { Trig::Cos(k) } else { Trig::Sin(k + 1) };
                    for degree in 0..=p_rad {
                        functions.push(BasisFn { component, trig, ang, degree });
                    }
                }
            }
        }
        let parity = if m == 0 { Parity::Even } else { parity };
        Ok(Self { params, m, parity, k_ax, p_rad, rule, functions, radii, vol_weights })
    }

    pub fn params(&self) -> &ShellParams {
        &self.params
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn k_ax(&self) -> usize {
        self.k_ax
    }

    pub fn p_rad(&self) -> usize {
        self.p_rad
    }

    pub fn size(&self) -> usize {
        self.functions.len()
    }

    pub fn functions(&self) -> &[BasisFn] {
        &self.functions
    }

    pub fn meta(&self) -> BasisMeta {
        BasisMeta {
            m: self.m,
            parity: self.parity,
            k_ax: self.k_ax,
            p_rad: self.p_rad,
            radial_points: self.rule.len(),
            size: self.size(),
        }
    }

    /// Quadrature of the constant weight over the shell: `2 pi h L`.
    pub fn shell_volume(&self) -> f64 {
        self.vol_weights.iter().sum::<f64>() * 2.0 * PI * self.params.length
    }

    fn radial_values(&self, degree: usize) -> (Vec<f64>, Vec<f64>) {
        let h = self.params.h;
        self.rule
            .nodes
            .iter()
            .map(|&t| {
                let (p, d) = legendre_table(degree, t)[degree];
                (p, 2.0 / h * d)
            })
            .unzip()
    }

    fn features(&self, f: &BasisFn) -> FeatureSet {
        let length = self.params.length;
        let (rv, drv) = self.radial_values(f.degree);
        let r_over: Vec<f64> = rv.iter().zip(&self.radii).map(|(v, r)| v / r).collect();
        let scale = |v: &[f64], s: f64| v.iter().map(|x| x * s).collect::<Vec<f64>>();

        let base = |rad: Vec<f64>| Feature { rad, trig: f.trig, ang: f.ang };
        let d_theta = |rad: &[f64]| {
            ang_derivative(f.ang, self.m).map(|(s, ang)| Feature { rad: scale(rad, s), trig: f.trig, ang })
        };
        let d_z = |rad: &[f64]| {
            trig_derivative(f.trig, length).map(|(s, trig)| Feature { rad: scale(rad, s), trig, ang: f.ang })
        };

        let mut g: [[Option<Feature>; 3]; 3] = Default::default();
        match f.component {
            0 => {
                g[0][0] = Some(base(drv.clone()));
                g[0][1] = d_theta(&r_over);
                g[0][2] = d_z(&rv);
                g[1][1] = Some(base(r_over.clone()));
            }
            1 => {
                g[0][1] = Some(base(scale(&r_over, -1.0)));
                g[1][0] = Some(base(drv.clone()));
                g[1][1] = d_theta(&r_over);
                g[1][2] = d_z(&rv);
            }
            _ => {
                g[2][0] = Some(base(drv.clone()));
                g[2][1] = d_theta(&r_over);
                g[2][2] = d_z(&rv);
            }
        }

        let mut out: FeatureSet = Default::default();
        for a in 0..3 {
            for b in 0..3 {
                out[a * 3 + b] = g[a][b].clone();
            }
        }
        for (k, &(a, b)) in PACKED_PAIRS.iter().enumerate() {
            out[STRAIN + k] = if a == b { g[a][a].clone() } else { combine(&g[a][b], 0.5, &g[b][a], 0.5) };
        }
        out[TRACE] = combine(&combine(&g[0][0], 1.0, &g[1][1], 1.0), 1.0, &g[2][2], 1.0);
        out[CURL] = combine(&g[2][1], 1.0, &g[1][2], -1.0);
        out[CURL + 1] = combine(&g[0][2], 1.0, &g[2][0], -1.0);
        out[CURL + 2] = combine(&g[1][0], 1.0, &g[0][1], -1.0);
        out
    }

    fn all_features(&self) -> Vec<FeatureSet> {
        self.functions.iter().map(|f| self.features(f)).collect()
    }

    /// Symmetric Gram matrix of `sum over terms of int w(r) f_i^{s1} f_j^{s2}`.
    /// The term list must be symmetric under swapping the two slots.
    fn gram(&self, feats: &[FeatureSet], terms: &[(usize, usize, Vec<f64>)]) -> Mat<f64> {
        let n = feats.len();
        let length = self.params.length;
        let mut out = Mat::<f64>::zeros(n, n);
        let mut weighted = vec![0.0; self.radii.len()];
        for (s1, s2, w) in terms {
            for i in 0..n {
                let Some(fi) = &feats[i][*s1] else { continue };
                for (q, wq) in weighted.iter_mut().enumerate() {
                    *wq = fi.rad[q] * w[q];
                }
                for j in i..n {
                    let Some(fj) = &feats[j][*s2] else { continue };
                    let ang = angular_integral(fi.ang, fj.ang);
                    if ang == 0.0 {
                        continue;
                    }
                    let ax = axial_integral(fi.trig, fj.trig, length);
                    if ax == 0.0 {
                        continue;
                    }
                    let rad: f64 = weighted.iter().zip(&fj.rad).map(|(a, b)| a * b).sum();
                    out[(i, j)] += rad * ax * ang;
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                out[(i, j)] = out[(j, i)];
            }
        }
        out
    }

    fn uniform_weights(&self, s: f64) -> Vec<f64> {
        self.vol_weights.iter().map(|w| w * s).collect()
    }

    fn gradient_terms(&self) -> Vec<(usize, usize, Vec<f64>)> {
        (0..9).map(|s| (s, s, self.uniform_weights(1.0))).collect()
    }

    fn strain_terms(&self, scale: f64) -> Vec<(usize, usize, Vec<f64>)> {
        (0..6).map(|k| (STRAIN + k, STRAIN + k, self.uniform_weights(if k < 3 { scale } else { 2.0 * scale }))).collect()
    }

    fn stress_weights(&self, stress: &StressField, a: usize, b: usize) -> Vec<f64> {
        self.radii.iter().zip(&self.vol_weights).map(|(&r, w)| w * stress.at(r).get(a, b)).collect()
    }

    fn compression_terms(&self, stress: &StressField) -> Vec<(usize, usize, Vec<f64>)> {
        let mut terms = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                let w = self.stress_weights(stress, a, b);
                if w.iter().all(|v| *v == 0.0) {
                    continue;
                }
                for c in 0..3 {
                    terms.push((c * 3 + a, c * 3 + b, w.clone()));
                }
            }
        }
        terms
    }

    fn quadrature_warnings(&self) -> Vec<String> {
        // Polynomial part of the integrands has degree 2 P_rad + 1 in t.
        let needed = self.p_rad + 1;
        if self.rule.len() < needed {
            vec![format!(
                "radial rule with {} points is below the exactness threshold of {} for P_rad = {}",
                self.rule.len(),
                needed,
                self.p_rad
            )]
        } else {
            Vec::new()
        }
    }

    /// Assemble all four Gram matrices.
    pub fn assemble(&self, stress: &StressField) -> Result<FormMatrices> {
        let lame = self.params.lame()?;
        let feats = self.all_features();
        let g = self.gram(&feats, &self.gradient_terms());
        let ee = self.gram(&feats, &self.strain_terms(1.0));
        let mut s_terms = self.strain_terms(2.0 * lame.mu);
        s_terms.push((TRACE, TRACE, self.uniform_weights(lame.lambda)));
        let s = self.gram(&feats, &s_terms);
        let c = self.gram(&feats, &self.compression_terms(stress));
        Ok(FormMatrices { n: self.size(), s, c, g, ee, warnings: self.quadrature_warnings() })
    }

    /// Gram of `int (L0 e(phi_i), e(phi_j))` for any `nu < 1/2`.
    pub fn stability_gram(&self) -> Result<Mat<f64>> {
        let lame = self.params.lame()?;
        let feats = self.all_features();
        let mut terms = self.strain_terms(2.0 * lame.mu);
        terms.push((TRACE, TRACE, self.uniform_weights(lame.lambda)));
        Ok(self.gram(&feats, &terms))
    }

    pub fn gradient_gram(&self) -> Mat<f64> {
        self.gram(&self.all_features(), &self.gradient_terms())
    }

    pub fn strain_gram(&self) -> Mat<f64> {
        self.gram(&self.all_features(), &self.strain_terms(1.0))
    }

    pub fn compression_gram(&self, stress: &StressField) -> Mat<f64> {
        self.gram(&self.all_features(), &self.compression_terms(stress))
    }

    /// Gram of one gradient entry, or of the symmetrized cross pair.
    pub fn component_gram(&self, component: GradComponent) -> Result<Mat<f64>> {
        let feats = self.all_features();
        let terms = match component {
            GradComponent::Entry(a, b) => {
                if a > 2 || b > 2 {
                    return Err(Error::Config(format!("gradient entry ({a}, {b}) out of range")));
                }
                vec![(a * 3 + b, a * 3 + b, self.uniform_weights(1.0))]
            }
            GradComponent::Cross => {
                let w = self.uniform_weights(0.5);
                vec![(2, 1, w.clone()), (1, 2, w)]
            }
        };
        Ok(self.gram(&feats, &terms))
    }

    /// Gram of `1/4 int (sigma~ curl phi_i, curl phi_j)`, the curl form of the
    /// compression functional.
    pub fn curl_compression_gram(&self, stress: &StressField) -> Mat<f64> {
        let feats = self.all_features();
        let mut terms = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                let w: Vec<f64> = self
                    .radii
                    .iter()
                    .zip(&self.vol_weights)
                    .map(|(&r, w)| 0.25 * w * compression_tensor(&stress.at(r)).get(a, b))
                    .collect();
                if w.iter().any(|v| *v != 0.0) {
                    terms.push((CURL + a, CURL + b, w));
                }
            }
        }
        self.gram(&feats, &terms)
    }

    /// Jet of basis field `i` at a point.
    pub fn basis_jet(&self, i: usize, p: CylPoint) -> FieldJet {
        let f = &self.functions[i];
        let length = self.params.length;
        let t = 2.0 * (p.r - 1.0) / self.params.h;
        let (rv, drv) = legendre_table(f.degree, t)[f.degree];
        let drv = drv * 2.0 / self.params.h;
        let a = trig_value(f.trig, p.z, length);
        let da = trig_derivative(f.trig, length).map_or(0.0, |(s, tr)| s * trig_value(tr, p.z, length));
        let th = ang_value(f.ang, self.m, p.theta);
        let dth = ang_derivative(f.ang, self.m).map_or(0.0, |(s, an)| s * ang_value(an, self.m, p.theta));
        let mut jet = FieldJet::default();
        let c = f.component;
        jet.value[c] = rv * a * th;
        jet.d[c] = [drv * a * th, rv * a * dth, rv * da * th];
        jet
    }

    /// The field with the given coefficients, as a closed-form evaluator.
    pub fn field<'a>(&'a self, coeffs: &'a [f64]) -> BasisField<'a> {
        BasisField { basis: self, coeffs }
    }
}

/// Linear combination of basis fields.
pub struct BasisField<'a> {
    basis: &'a BlockBasis,
    coeffs: &'a [f64],
}

impl VectorField for BasisField<'_> {
    fn jet(&self, p: CylPoint) -> FieldJet {
        let mut out = FieldJet::default();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                out = out + self.basis.basis_jet(i, p) * c;
            }
        }
        out
    }
}

/// Stiffness applied with explicit Lamé constants; used by oracles that
/// integrate the stability form pointwise.
pub fn stability_density(e: &SymTensor3, p: &ShellParams) -> Result<f64> {
    let lame = p.lame()?;
    Ok(apply_lame(e, &lame).dot(e))
}

/// `x^T A y`.
pub fn bilinear(a: &Mat<f64>, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for j in 0..n {
        if y[j] == 0.0 {
            continue;
        }
        let mut col = 0.0;
        for i in 0..n {
            col += a[(i, j)] * x[i];
        }
        s += col * y[j];
    }
    s
}

pub fn quadratic(a: &Mat<f64>, x: &[f64]) -> f64 {
    bilinear(a, x, x)
}
