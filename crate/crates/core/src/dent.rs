//! First-order stress redistribution around a localized dent.
//!
//! With the dent depth `rho(eta, zeta)` and the stress potential `s`
//! (hoop stress `s_zeta2`, shear `-s_eta_zeta`, axial `s_eta2`), the
//! redistribution equation reads
//!
//! ```text
//! (rho_eta2 - 1) s_zeta2 + rho_zeta2 s_eta2 - 2 rho_eta_zeta s_eta_zeta = E rho_zeta2
//! ```
//!
//! on a rectangle with zero boundary values. The two second-derivative terms
//! are kept implicit and the mixed term is lagged, giving a fixed-point
//! iteration started from the leading-order solution `s = -E rho`.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

use crate::{Error, Result};

/// `rho = A (1 - q)^6` for `q < 1`, `q = (eta/w_eta)^2 + (zeta/w_zeta)^2`.
///
/// A negative amplitude is an inward dent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DentProfile {
    pub amplitude: f64,
    pub width_eta: f64,
    pub width_zeta: f64,
}

/// Value and partials of the dent depth.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct DentJet {
    pub value: f64,
    pub d_eta: f64,
    pub d_zeta: f64,
    pub d_eta2: f64,
    pub d_zeta2: f64,
    pub d_eta_zeta: f64,
}

impl DentProfile {
    pub fn new(amplitude: f64, width_eta: f64, width_zeta: f64) -> Result<Self> {
        let ok = |w: f64| w > 0.0 && w <= 1.0;
        if !(ok(width_eta) && ok(width_zeta)) {
            return Err(Error::Config(format!(
                "dent widths must lie in (0, 1], got ({width_eta}, {width_zeta})"
            )));
        }
        if !amplitude.is_finite() {
            return Err(Error::Config("dent amplitude must be finite".into()));
        }
        Ok(Self { amplitude, width_eta, width_zeta })
    }

    /// Profile whose hoop curvature `rho_zeta2` peaks at `curvature` in the
    /// center; positive curvature is an inward dent.
    pub fn from_center_curvature(curvature: f64, width_eta: f64, width_zeta: f64) -> Result<Self> {
        Self::new(-curvature * width_zeta * width_zeta / 12.0, width_eta, width_zeta)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { amplitude: self.amplitude * s, ..*self }
    }

    pub fn jet(&self, eta: f64, zeta: f64) -> DentJet {
        let (we2, wz2) = (self.width_eta.powi(2), self.width_zeta.powi(2));
        let q = eta * eta / we2 + zeta * zeta / wz2;
        if q >= 1.0 {
            return DentJet::default();
        }
        let a = self.amplitude;
        let u = 1.0 - q;
        let f0 = u.powi(6);
        let f1 = -6.0 * u.powi(5);
        let f2 = 30.0 * u.powi(4);
        let (qe, qz) = (2.0 * eta / we2, 2.0 * zeta / wz2);
        DentJet {
            value: a * f0,
            d_eta: a * f1 * qe,
            d_zeta: a * f1 * qz,
            d_eta2: a * (f2 * qe * qe + f1 * 2.0 / we2),
            d_zeta2: a * (f2 * qz * qz + f1 * 2.0 / wz2),
            d_eta_zeta: a * f2 * qe * qz,
        }
    }
}

/// Uniform grid on `[-half_eta, half_eta] x [-half_zeta, half_zeta]` with the
/// dent sampled at the nodes. Storage is row-major in `eta`.
#[derive(Clone, Debug)]
pub struct DentGrid {
    pub n_eta: usize,
    pub n_zeta: usize,
    pub half_eta: f64,
    pub half_zeta: f64,
    pub spacing: (f64, f64),
    pub profile: DentProfile,
    pub rho: Vec<f64>,
    pub drho: Vec<DentJet>,
}

impl DentGrid {
    pub fn new(profile: DentProfile, n_eta: usize, n_zeta: usize, half_eta: f64, half_zeta: f64) -> Result<Self> {
        if n_eta < 5 || n_zeta < 5 {
            return Err(Error::Config(format!("dent grid needs at least 5 nodes per side, got {n_eta} x {n_zeta}")));
        }
        if !(half_eta > profile.width_eta && half_zeta > profile.width_zeta) {
            return Err(Error::Config("the dent support must lie strictly inside the grid rectangle".into()));
        }
        let de = 2.0 * half_eta / (n_eta - 1) as f64;
        let dz = 2.0 * half_zeta / (n_zeta - 1) as f64;
        let mut drho = Vec::with_capacity(n_eta * n_zeta);
        for i in 0..n_eta {
            for j in 0..n_zeta {
                drho.push(profile.jet(-half_eta + i as f64 * de, -half_zeta + j as f64 * dz));
            }
        }
        let rho = drho.iter().map(|d| d.value).collect();
        Ok(Self { n_eta, n_zeta, half_eta, half_zeta, spacing: (de, dz), profile, rho, drho })
    }

    /// Square grid on `[-1.5, 1.5]^2` with `n` nodes per side.
    pub fn square(profile: DentProfile, n: usize) -> Result<Self> {
        Self::new(profile, n, n, 1.5, 1.5)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_zeta + j
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (-self.half_eta + i as f64 * self.spacing.0, -self.half_zeta + j as f64 * self.spacing.1)
    }

    fn d_zeta2(&self, f: &[f64], i: usize, j: usize) -> f64 {
        let k = self.index(i, j);
        (f[k + 1] - 2.0 * f[k] + f[k - 1]) / self.spacing.1.powi(2)
    }

    fn d_eta2(&self, f: &[f64], i: usize, j: usize) -> f64 {
        let (k, step) = (self.index(i, j), self.n_zeta);
        (f[k + step] - 2.0 * f[k] + f[k - step]) / self.spacing.0.powi(2)
    }

    fn d_eta_zeta(&self, f: &[f64], i: usize, j: usize) -> f64 {
        let g = |a: usize, b: usize| f[self.index(a, b)];
        (g(i + 1, j + 1) - g(i + 1, j - 1) - g(i - 1, j + 1) + g(i - 1, j - 1)) / (4.0 * self.spacing.0 * self.spacing.1)
    }

    fn max_abs(&self, f: impl Fn(&DentJet) -> f64) -> f64 {
        self.drho.iter().fold(0.0, |m, d| m.max(f(d).abs()))
    }
}

#[derive(Clone, Debug)]
pub struct DentSolution {
    pub s: Vec<f64>,
    /// Max PDE residual over interior nodes, relative to `E max |rho_zeta2|`
    /// (absolute when the dent is flat).
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub young: f64,
}

/// Solve for the stress potential.
///
/// The source term uses the discrete second difference of the sampled
/// depth, so that `s = -E rho` is the exact discrete leading-order solution.
pub fn dent_solve(grid: &DentGrid, young: f64, tol: f64, max_iter: usize) -> Result<DentSolution> {
    let eta2_max = grid.max_abs(|d| d.d_eta2);
    if eta2_max >= 1.0 {
        return Err(Error::Config(format!("dent too deep: max |rho_eta2| = {eta2_max} must stay below 1")));
    }
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::Config("tolerance must be positive and max_iter at least 1".into()));
    }
    let (ne, nz) = (grid.n_eta, grid.n_zeta);
    let (mi, mj) = (ne - 2, nz - 2);
    let unknown = |i: usize, j: usize| (i - 1) * mj + (j - 1);
    let (de2, dz2) = (grid.spacing.0.powi(2), grid.spacing.1.powi(2));

    let mut triplets = Vec::with_capacity(5 * mi * mj);
    for i in 1..ne - 1 {
        for j in 1..nz - 1 {
            let d = &grid.drho[grid.index(i, j)];
            let row = unknown(i, j);
            let cz = (d.d_eta2 - 1.0) / dz2;
            let ce = d.d_zeta2 / de2;
            triplets.push(Triplet::new(row, row, -2.0 * cz - 2.0 * ce));
            if j > 1 {
                triplets.push(Triplet::new(row, unknown(i, j - 1), cz));
            }
            if j < nz - 2 {
                triplets.push(Triplet::new(row, unknown(i, j + 1), cz));
            }
            if ce != 0.0 {
                if i > 1 {
                    triplets.push(Triplet::new(row, unknown(i - 1, j), ce));
                }
                if i < ne - 2 {
                    triplets.push(Triplet::new(row, unknown(i + 1, j), ce));
                }
            }
        }
    }
    let n = mi * mj;
    let matrix = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
        .map_err(|e| Error::Numerical(format!("could not build the dent operator: {e:?}")))?;
    let lu = matrix.sp_lu().map_err(|e| Error::Numerical(format!("dent operator is singular: {e:?}")))?;

    let source: Vec<f64> = (0..n)
        .map(|k| {
            let (i, j) = (k / mj + 1, k % mj + 1);
            young * grid.d_zeta2(&grid.rho, i, j)
        })
        .collect();
    let scale = young.abs() * grid.max_abs(|d| d.d_zeta2);
    let scale = if scale > 0.0 { scale } else { 1.0 };

    let mut s: Vec<f64> = grid.rho.iter().map(|r| -young * r).collect();
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    let initial = pde_residual(grid, &s, young) / scale;
    while iterations < max_iter {
        iterations += 1;
        let rhs = Mat::<f64>::from_fn(n, 1, |k, _| {
            let (i, j) = (k / mj + 1, k % mj + 1);
            let d = &grid.drho[grid.index(i, j)];
            source[k] + 2.0 * d.d_eta_zeta * grid.d_eta_zeta(&s, i, j)
        });
        let sol = lu.solve(&rhs);
        for k in 0..n {
            let (i, j) = (k / mj + 1, k % mj + 1);
            s[grid.index(i, j)] = sol[(k, 0)];
        }
        residual = pde_residual(grid, &s, young) / scale;
        if residual < tol {
            converged = true;
            break;
        }
        if !residual.is_finite() || residual > 1e6 * initial.max(tol) {
            break;
        }
    }
    Ok(DentSolution { s, residual, iterations, converged, young })
}

/// Max over interior nodes of the full discrete PDE residual.
pub fn pde_residual(grid: &DentGrid, s: &[f64], young: f64) -> f64 {
    let mut worst = 0.0_f64;
    for i in 1..grid.n_eta - 1 {
        for j in 1..grid.n_zeta - 1 {
            let d = &grid.drho[grid.index(i, j)];
            let r = (d.d_eta2 - 1.0) * grid.d_zeta2(s, i, j) + d.d_zeta2 * grid.d_eta2(s, i, j)
                - 2.0 * d.d_eta_zeta * grid.d_eta_zeta(s, i, j)
                - young * grid.d_zeta2(&grid.rho, i, j);
            worst = worst.max(r.abs());
        }
    }
    worst
}

/// Hoop stress `s_zeta2` on the grid (zero on the boundary rows).
#[derive(Clone, Debug)]
pub struct HoopStress {
    pub values: Vec<f64>,
    pub min: f64,
    /// `(eta, zeta)` of the minimum.
    pub argmin: (f64, f64),
}

pub fn dent_hoop_stress(grid: &DentGrid, sol: &DentSolution) -> HoopStress {
    let mut values = vec![0.0; grid.n_eta * grid.n_zeta];
    let (mut min, mut argmin) = (f64::INFINITY, (0.0, 0.0));
    for i in 1..grid.n_eta - 1 {
        for j in 1..grid.n_zeta - 1 {
            let v = grid.d_zeta2(&sol.s, i, j);
            values[grid.index(i, j)] = v;
            if v < min {
                min = v;
                argmin = grid.node(i, j);
            }
        }
    }
    HoopStress { values, min, argmin }
}

/// Value of a grid function at the node nearest to `(eta, zeta)`.
pub fn sample(grid: &DentGrid, f: &[f64], eta: f64, zeta: f64) -> f64 {
    let i = ((eta + grid.half_eta) / grid.spacing.0).round() as usize;
    let j = ((zeta + grid.half_zeta) / grid.spacing.1).round() as usize;
    f[grid.index(i.min(grid.n_eta - 1), j.min(grid.n_zeta - 1))]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inward(kappa: f64) -> DentProfile {
        DentProfile::from_center_curvature(kappa, 1.0, 0.5).unwrap()
    }

    fn sup(v: &[f64]) -> f64 {
        v.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    #[test]
    fn profile_partials_match_finite_differences() {
        let p = DentProfile::new(0.3, 0.8, 0.4).unwrap();
        let (e, z, st) = (0.21, -0.13, 1e-5);
        let j = p.jet(e, z);
        let fd_e = (p.jet(e + st, z).value - p.jet(e - st, z).value) / (2.0 * st);
        let fd_z = (p.jet(e, z + st).value - p.jet(e, z - st).value) / (2.0 * st);
        let fd_ee = (p.jet(e + st, z).d_eta - p.jet(e - st, z).d_eta) / (2.0 * st);
        let fd_zz = (p.jet(e, z + st).d_zeta - p.jet(e, z - st).d_zeta) / (2.0 * st);
        let fd_ez = (p.jet(e, z + st).d_eta - p.jet(e, z - st).d_eta) / (2.0 * st);
        for (a, b) in [(fd_e, j.d_eta), (fd_z, j.d_zeta), (fd_ee, j.d_eta2), (fd_zz, j.d_zeta2), (fd_ez, j.d_eta_zeta)] {
            assert!((a - b).abs() < 1e-6 * b.abs().max(1.0));
        }
        assert_eq!(p.jet(0.9, 0.0).value, 0.0);
    }

    #[test]
    fn center_curvature_is_the_peak_hoop_curvature() {
        let g = DentGrid::square(inward(0.3), 61).unwrap();
        assert!((g.drho[g.index(30, 30)].d_zeta2 - 0.3).abs() < 1e-14);
        assert!((g.max_abs(|d| d.d_zeta2) - 0.3).abs() < 1e-14);
    }

    #[test]
    fn flat_dent_gives_zero_potential() {
        let g = DentGrid::square(inward(0.0), 31).unwrap();
        let sol = dent_solve(&g, 1.0, 1e-6, 200).unwrap();
        assert!(sol.converged);
        assert_eq!(sol.iterations, 1);
        assert!(sol.s.iter().all(|v| *v == 0.0));
        let hoop = dent_hoop_stress(&g, &sol);
        assert!(hoop.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn boundary_is_zero_and_residual_small() {
        let g = DentGrid::square(inward(1e-2), 41).unwrap();
        let sol = dent_solve(&g, 1.0, 1e-6, 200).unwrap();
        assert!(sol.converged && sol.residual < 1e-6);
        for i in 0..41 {
            for &j in &[0, 40] {
                assert_eq!(sol.s[g.index(i, j)], 0.0);
                assert_eq!(sol.s[g.index(j, i)], 0.0);
            }
        }
    }

    #[test]
    fn leading_order_gap_is_linear_in_amplitude() {
        let gap = |a: f64| {
            let g = DentGrid::square(inward(a), 41).unwrap();
            let sol = dent_solve(&g, 1.0, 1e-10, 200).unwrap();
            let diff: Vec<f64> = sol.s.iter().zip(&g.rho).map(|(s, r)| s + r).collect();
            sup(&diff) / sup(&g.rho)
        };
        let ratio = gap(1e-2) / gap(1e-3);
        assert!((ratio - 10.0).abs() < 3.0, "ratio {ratio}");
    }

    #[test]
    fn inward_dent_has_compressive_hoop_stress_at_center() {
        let g = DentGrid::square(inward(1e-2), 41).unwrap();
        assert!(g.drho[g.index(20, 20)].d_zeta2 > 0.0);
        let sol = dent_solve(&g, 1.0, 1e-8, 200).unwrap();
        let hoop = dent_hoop_stress(&g, &sol);
        assert!(sample(&g, &hoop.values, 0.0, 0.0) < 0.0);
        assert!(hoop.argmin.0.abs() <= g.spacing.0 && hoop.argmin.1.abs() <= g.spacing.1);
    }

    #[test]
    fn outward_dent_flips_sign() {
        let g_in = DentGrid::square(inward(1e-3), 41).unwrap();
        let g_out = DentGrid::square(inward(-1e-3), 41).unwrap();
        let h_in = dent_hoop_stress(&g_in, &dent_solve(&g_in, 1.0, 1e-10, 200).unwrap());
        let h_out = dent_hoop_stress(&g_out, &dent_solve(&g_out, 1.0, 1e-10, 200).unwrap());
        let (a, b) = (sample(&g_in, &h_in.values, 0.0, 0.0), sample(&g_out, &h_out.values, 0.0, 0.0));
        assert!(a < 0.0 && b > 0.0);
    }

    #[test]
    fn potential_is_linear_in_young_modulus() {
        let g = DentGrid::square(inward(1e-2), 31).unwrap();
        let a = dent_solve(&g, 1.0, 1e-10, 200).unwrap();
        let b = dent_solve(&g, 2.0, 1e-10, 200).unwrap();
        for (x, y) in a.s.iter().zip(&b.s) {
            assert!((2.0 * x - y).abs() < 1e-9 * sup(&b.s));
        }
    }

    #[test]
    fn grid_refinement_is_second_order() {
        let solve = |n: usize| {
            let g = DentGrid::square(inward(1e-2), n).unwrap();
            let sol = dent_solve(&g, 1.0, 1e-12, 200).unwrap();
            assert!(sol.converged);
            (g, sol.s)
        };
        let (g1, s1) = solve(31);
        let (g2, s2) = solve(61);
        let (g4, s4) = solve(121);
        let (mut d12, mut d24) = (0.0_f64, 0.0_f64);
        for i in 0..31 {
            for j in 0..31 {
                let (a, b, c) = (s1[g1.index(i, j)], s2[g2.index(2 * i, 2 * j)], s4[g4.index(4 * i, 4 * j)]);
                d12 = d12.max((a - b).abs());
                d24 = d24.max((b - c).abs());
            }
        }
        let order = (d12 / d24).log2();
        assert!(order >= 1.8, "observed order {order}");
    }

    #[test]
    fn deep_dent_rejected() {
        let g = DentGrid::square(inward(50.0), 31).unwrap();
        assert!(matches!(dent_solve(&g, 1.0, 1e-6, 200), Err(Error::Config(_))));
    }

    #[test]
    fn grid_validation() {
        assert!(DentGrid::square(inward(1e-2), 3).is_err());
        assert!(DentGrid::new(inward(1e-2), 21, 21, 0.9, 1.5).is_err());
        assert!(DentProfile::new(0.1, 0.0, 0.5).is_err());
    }
}
