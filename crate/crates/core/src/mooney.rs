//! Helical trivial branch of an incompressible Mooney-Rivlin cylinder,
//! `y = (psi(r) cos(alpha z), psi(r) sin(alpha z), (1 - lambda) z)`.

use crate::basis::StressField;
use crate::branch::LinearDisplacement;
use crate::tensor::{cyl_gradient, CylPoint, FieldJet, SymTensor3, Tensor3, VectorField};
use crate::{Error, Result};

/// Radial profile `sqrt(r^2 / (1 - lambda) + beta)` that makes `det grad y = 1`.
pub fn mr_psi(r: f64, lambda: f64, beta: f64) -> Result<f64> {
    if !(lambda < 1.0) {
        return Err(Error::Domain(format!("strain lambda must be below 1, got {lambda}")));
    }
    let radicand = r * r / (1.0 - lambda) + beta;
    if !(radicand > 0.0) {
        return Err(Error::Domain(format!("r^2/(1 - lambda) + beta = {radicand} must be positive at r = {r}")));
    }
    Ok(radicand.sqrt())
}

/// `beta` tied to the strain: `-beta0^2 lambda^2 / 2`.
pub fn mr_beta(lambda: f64, beta0: f64) -> f64 {
    -0.5 * beta0 * beta0 * lambda * lambda
}

/// `ln(1/(1 - lambda) + beta/r^2) - r^2 / (r^2 + beta (1 - lambda))`.
pub fn mr_phi(r: f64, lambda: f64, beta: f64) -> f64 {
    let b = beta * (1.0 - lambda);
    (1.0 / (1.0 - lambda) + beta / (r * r)).ln() - r * r / (r * r + b)
}

/// `alpha^2 = (Phi(1 + h/2) - Phi(1 - h/2)) / (2h)`, evaluated without the
/// cancellation of the two logarithms.
fn alpha_squared(lambda: f64, h: f64, beta: f64) -> f64 {
    let rp2 = (1.0 + 0.5 * h).powi(2);
    let rm2 = (1.0 - 0.5 * h).powi(2);
    let b = beta * (1.0 - lambda);
    let x_minus = 1.0 / (1.0 - lambda) + beta / rm2;
    let log_part = (-2.0 * h * beta / (rp2 * rm2 * x_minus)).ln_1p() / (2.0 * h);
    log_part - b / ((rp2 + b) * (rm2 + b))
}

fn check_inputs(lambda: f64, h: f64) -> Result<()> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::Domain(format!("thickness ratio h must lie in (0, 1), got {h}")));
    }
    if !(lambda < 1.0) {
        return Err(Error::Domain(format!("strain lambda must be below 1, got {lambda}")));
    }
    Ok(())
}

/// Twist rate of the branch.
pub fn mr_alpha(lambda: f64, h: f64, beta0: f64) -> Result<f64> {
    check_inputs(lambda, h)?;
    let beta = mr_beta(lambda, beta0);
    let inner = (1.0 - 0.5 * h).powi(2);
    if !(beta > -inner / (1.0 - lambda)) {
        return Err(Error::Domain(format!("beta = {beta} makes psi imaginary on the inner face")));
    }
    let a2 = alpha_squared(lambda, h, beta);
    if a2 < 0.0 {
        return Err(Error::Domain(format!(
            "Phi(1 + h/2) - Phi(1 - h/2) = {:e} is negative",
            2.0 * h * a2
        )));
    }
    Ok(a2.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MrBranch {
    pub lambda: f64,
    pub h: f64,
    pub beta0: f64,
    pub beta: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub young: f64,
}

/// Branch with `gamma` fixed by the outer-face traction condition.
pub fn mr_branch(lambda: f64, h: f64, beta0: f64, young: f64) -> Result<MrBranch> {
    let alpha = mr_alpha(lambda, h, beta0)?;
    let beta = mr_beta(lambda, beta0);
    let rp = 1.0 + 0.5 * h;
    let gamma = alpha * alpha * rp * rp - mr_phi(rp, lambda, beta) + 1.0;
    Ok(MrBranch { lambda, h, beta0, beta, alpha, gamma, young })
}

impl MrBranch {
    fn b(&self) -> f64 {
        self.beta * (1.0 - self.lambda)
    }

    pub fn psi(&self, r: f64) -> Result<f64> {
        mr_psi(r, self.lambda, self.beta)
    }

    /// `(psi, psi', psi'')`.
    pub fn psi_derivatives(&self, r: f64) -> Result<(f64, f64, f64)> {
        let psi = self.psi(r)?;
        let k = 1.0 - self.lambda;
        let d1 = r / (k * psi);
        let d2 = (psi - r * d1) / (k * psi * psi);
        Ok((psi, d1, d2))
    }

    /// Scaled pressure `p(r)`.
    pub fn pressure(&self, r: f64) -> Result<f64> {
        self.psi(r)?;
        let k = 1.0 - self.lambda;
        let b = self.b();
        let a2 = self.alpha * self.alpha;
        Ok(((1.0 / k + self.beta / (r * r)).ln() - r * r * a2 - b / (r * r + b) + self.gamma) / (2.0 * k))
    }

    pub fn pressure_derivative(&self, r: f64) -> Result<f64> {
        self.psi(r)?;
        let k = 1.0 - self.lambda;
        let b = self.b();
        let a2 = self.alpha * self.alpha;
        let dlog = (-2.0 * self.beta / (r * r * r)) / (1.0 / k + self.beta / (r * r));
        Ok((dlog - 2.0 * r * a2 + 2.0 * r * b / (r * r + b).powi(2)) / (2.0 * k))
    }

    /// Stress functions `(s1, s2, s3)` of the scaled Piola stress.
    pub fn stress_functions(&self, r: f64) -> Result<(f64, f64, f64)> {
        let (psi, d1, _) = self.psi_derivatives(r)?;
        let p = self.pressure(r)?;
        Ok((d1 - p / d1, psi / r - r * p / psi, self.alpha * psi))
    }

    /// `(r s1)' - s2 - alpha r s3` with `(r s1)'` differentiated in closed form.
    pub fn ode_residual(&self, r: f64) -> Result<f64> {
        let (_, d1, d2) = self.psi_derivatives(r)?;
        let p = self.pressure(r)?;
        let dp = self.pressure_derivative(r)?;
        let (s1, s2, s3) = self.stress_functions(r)?;
        let ds1 = d2 - (dp * d1 - p * d2) / (d1 * d1);
        Ok(s1 + r * ds1 - s2 - self.alpha * r * s3)
    }

    /// `p - psi'^2`; vanishes on both lateral faces.
    pub fn traction_residual(&self, r: f64) -> Result<f64> {
        let (_, d1, _) = self.psi_derivatives(r)?;
        Ok(self.pressure(r)? - d1 * d1)
    }

    /// Residuals of the two face conditions `alpha^2 r^2 = Phi(r) + gamma - 1`.
    pub fn face_condition_residuals(&self) -> [f64; 2] {
        let a2 = self.alpha * self.alpha;
        [1.0 + 0.5 * self.h, 1.0 - 0.5 * self.h]
            .map(|r| a2 * r * r - mr_phi(r, self.lambda, self.beta) - self.gamma + 1.0)
    }

    /// The deformation `y` as a closed-form field.
    pub fn deformation(&self) -> MrDeformation {
        MrDeformation { branch: *self }
    }

    /// `grad y` in the cylindrical frame.
    pub fn deformation_gradient(&self, pt: CylPoint) -> Result<Tensor3> {
        self.psi(pt.r)?;
        cyl_gradient(&self.deformation(), pt)
    }
}

/// Position field of the branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MrDeformation {
    branch: MrBranch,
}

impl VectorField for MrDeformation {
    fn jet(&self, p: CylPoint) -> FieldJet {
        let b = &self.branch;
        let (psi, d1, _) = b.psi_derivatives(p.r).unwrap_or((f64::NAN, f64::NAN, f64::NAN));
        let (s, c) = (b.alpha * p.z).sin_cos();
        FieldJet {
            value: [psi * c, psi * s, (1.0 - b.lambda) * p.z],
            d: [
                [d1 * c, 0.0, -b.alpha * psi * s],
                [d1 * s, 0.0, b.alpha * psi * c],
                [0.0, 0.0, 1.0 - b.lambda],
            ],
        }
    }
}

/// Worst residuals of the branch over a point set.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct MrResidualReport {
    pub ode: f64,
    pub det: f64,
    pub traction: f64,
    pub face_conditions: f64,
    pub points: usize,
}

pub fn mr_residuals(branch: &MrBranch, grid: &[CylPoint]) -> Result<MrResidualReport> {
    let mut rep = MrResidualReport { points: grid.len(), ..Default::default() };
    for &pt in grid {
        rep.ode = rep.ode.max(branch.ode_residual(pt.r)?.abs());
        rep.det = rep.det.max((branch.deformation_gradient(pt)?.det() - 1.0).abs());
    }
    for r in [1.0 - 0.5 * branch.h, 1.0 + 0.5 * branch.h] {
        rep.traction = rep.traction.max(branch.traction_residual(r)?.abs());
    }
    rep.face_conditions = branch.face_condition_residuals().iter().fold(0.0, |m, v| m.max(v.abs()));
    Ok(rep)
}

/// Linearization of the branch at `lambda = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MrLinearization {
    pub displacement: LinearDisplacement,
    pub stress: StressField,
    /// Thin-shell limit of the stress.
    pub limit_stress: SymTensor3,
}

/// Displacement `(r/2, 4 beta0 r z / (4 - h^2), -z)` and its incompressible
/// linear stress `-p I + (2E/3) e(u)` with `p` set by `sigma_rr = 0`.
pub fn mr_linearize(h: f64, beta0: f64, young: f64) -> Result<MrLinearization> {
    check_inputs(0.0, h)?;
    let twist = 4.0 * beta0 / (4.0 - h * h);
    let displacement = LinearDisplacement { radial: 0.5, twist, axial: -1.0 };
    let shear = 2.0 * young / 3.0;
    // e(u) = diag(1/2, 1/2, -1) + theta z entry twist r / 2.
    let pressure = shear * 0.5;
    let diag = |e: f64| shear * e - pressure;
    let tz = shear * 0.5 * twist;
    let stress = StressField {
        sigma0: SymTensor3::new(diag(0.5), diag(0.5), diag(-1.0), 0.0, 0.0, tz),
        sigma1: SymTensor3::new(0.0, 0.0, 0.0, 0.0, 0.0, tz),
    };
    let limit_stress = SymTensor3::new(0.0, 0.0, -young, 0.0, 0.0, young * beta0 / 3.0);
    Ok(MrLinearization { displacement, stress, limit_stress })
}
