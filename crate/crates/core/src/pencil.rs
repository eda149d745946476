//! Symmetric-definite generalized eigenproblems `A x = mu B x`.
//!
//! `B` is diagonally equilibrated, Cholesky-factored, and the problem reduced
//! to the standard symmetric eigenproblem of `L^{-1} A L^{-T}`.

use faer::linalg::triangular_solve::{solve_lower_triangular_in_place, solve_upper_triangular_in_place};
use faer::linalg::solvers::Solve;
use faer::{Mat, Par, Side};

use crate::{Error, Result};

/// All eigenpairs of a pencil, eigenvalues nondecreasing, eigenvectors
/// normalized to `x^T B x = 1`.
#[derive(Clone, Debug)]
pub struct PencilEigen {
    pub values: Vec<f64>,
    pub vectors: Mat<f64>,
}

impl PencilEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.col(k).iter().copied().collect()
    }

    pub fn min(&self) -> (f64, Vec<f64>) {
        (self.values[0], self.vector(0))
    }

    pub fn max(&self) -> (f64, Vec<f64>) {
        let k = self.values.len() - 1;
        (self.values[k], self.vector(k))
    }
}

fn check_square(a: &Mat<f64>, b: &Mat<f64>) -> Result<usize> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::Numerical(format!(
            "pencil shapes do not match: A is {}x{}, B is {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(n)
}

/// Solve the full pencil.
pub fn solve(a: &Mat<f64>, b: &Mat<f64>) -> Result<PencilEigen> {
    let n = check_square(a, b)?;
    let mut d = vec![0.0; n];
    for (i, di) in d.iter_mut().enumerate() {
        let bii = b[(i, i)];
        if !(bii > 0.0 && bii.is_finite()) {
            return Err(Error::Numerical(format!("B has non-positive diagonal entry {bii:e} at {i}")));
        }
        *di = 1.0 / bii.sqrt();
    }
    let bs = Mat::<f64>::from_fn(n, n, |i, j| d[i] * d[j] * 0.5 * (b[(i, j)] + b[(j, i)]));
    let mut x = Mat::<f64>::from_fn(n, n, |i, j| d[i] * d[j] * 0.5 * (a[(i, j)] + a[(j, i)]));

    let llt = bs
        .llt(Side::Lower)
        .map_err(|e| Error::Numerical(format!("B is not numerically positive definite: {e:?}")))?;
    let l = llt.L();

    // X = L^{-1} A, then M = L^{-1} X^T = L^{-1} A L^{-T}.
    solve_lower_triangular_in_place(l, x.as_mut(), Par::Seq);
    let mut m = x.transpose().to_owned();
    solve_lower_triangular_in_place(l, m.as_mut(), Par::Seq);
    let m = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));

    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("symmetric eigensolver failed: {e:?}")))?;
    let values: Vec<f64> = evd.S().column_vector().iter().copied().collect();
    let mut vectors = evd.U().to_owned();
    solve_upper_triangular_in_place(l.transpose(), vectors.as_mut(), Par::Seq);
    for j in 0..n {
        for i in 0..n {
            vectors[(i, j)] *= d[i];
        }
    }
    for k in 0..n {
        let col: Vec<f64> = vectors.col(k).iter().copied().collect();
        let bn = quad(b, &col).sqrt();
        if bn > 0.0 {
            for i in 0..n {
                vectors[(i, k)] /= bn;
            }
        }
    }
    Ok(PencilEigen { values, vectors })
}

/// Extreme eigenpair, refined so that its residual meets `1e-12` when possible.
pub fn extreme(a: &Mat<f64>, b: &Mat<f64>, largest: bool) -> Result<(f64, Vec<f64>)> {
    let eig = solve(a, b)?;
    let (mu, x) = if largest { eig.max() } else { eig.min() };
    Ok(refine(a, b, mu, x))
}

fn mat_vec(a: &Mat<f64>, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut y = vec![0.0; n];
    for j in 0..n {
        let xj = x[j];
        if xj == 0.0 {
            continue;
        }
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += a[(i, j)] * xj;
        }
    }
    y
}

fn quad(a: &Mat<f64>, x: &[f64]) -> f64 {
    mat_vec(a, x).iter().zip(x).map(|(u, v)| u * v).sum()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `||A x - mu B x|| / (||A x|| + |mu| ||B x||)`.
pub fn residual(a: &Mat<f64>, b: &Mat<f64>, mu: f64, x: &[f64]) -> f64 {
    let ax = mat_vec(a, x);
    let bx = mat_vec(b, x);
    let r: Vec<f64> = ax.iter().zip(&bx).map(|(u, v)| u - mu * v).collect();
    let denom = norm(&ax) + mu.abs() * norm(&bx);
    if denom == 0.0 {
        0.0
    } else {
        norm(&r) / denom
    }
}

/// Rayleigh-quotient update followed by inverse iteration steps on the
/// shifted pencil, keeping the refined pair only if its residual improves.
fn refine(a: &Mat<f64>, b: &Mat<f64>, mu: f64, x: Vec<f64>) -> (f64, Vec<f64>) {
    let mut best = (residual(a, b, mu, &x), mu, x);
    if best.0 < 1e-12 {
        return (best.1, best.2);
    }
    let n = best.2.len();
    for _ in 0..3 {
        let (_, mu, ref x) = best;
        let bx = mat_vec(b, x);
        // Slight offset keeps the shifted matrix invertible.
        let shift = mu * (1.0 + 1e-10) + 1e-300;
        let shifted = Mat::<f64>::from_fn(n, n, |i, j| a[(i, j)] - shift * b[(i, j)]);
        let lu = shifted.partial_piv_lu();
        let rhs = Mat::<f64>::from_fn(n, 1, |i, _| bx[i]);
        let sol = lu.solve(&rhs);
        let mut y: Vec<f64> = sol.col(0).iter().copied().collect();
        let bn = quad(b, &y);
        if !(bn.is_finite() && bn > 0.0) {
            break;
        }
        let s = bn.sqrt();
        y.iter_mut().for_each(|v| *v /= s);
        let mu_new = quad(a, &y);
        let res = residual(a, b, mu_new, &y);
        if res < best.0 {
            best = (res, mu_new, y);
        } else {
            break;
        }
        if best.0 < 1e-13 {
            break;
        }
    }
    (best.1, best.2)
}
