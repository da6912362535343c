//! Strictly convex dual subproblem: given a datum f acting through the
//! quadrature pairing, minimize
//!
//!   E_f(u) = (1/p)||u||^p + (lambda/s)||u||_s^s - <f, u>.
//!
//! The discrete energy is strictly convex, so the minimizer is unique; it
//! is found by preconditioned gradient descent with Barzilai-Borwein steps
//! and a backtracking line search that never accepts an energy increase.
//! The free unknowns are the interior nodes; the origin value is tied to
//! its neighbour (the origin node carries no quadrature mass and the tie is
//! exactly the stationarity of the first cell) and the last node is pinned
//! by the Dirichlet truncation.

use std::sync::Arc;

use thiserror::Error;

use crate::functionals::{dirichlet_pp, dual_norm, grad_dirichlet_pp, phi, pow_abs, weighted_power};
use crate::params::Params;
use crate::radial_core::{RadialError, RadialFunction, RadialGrid};

/// A discrete dual datum acting by <f, u> = sum w_i f_i u_i.
#[derive(Debug, Clone)]
pub struct DualDatum {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

impl DualDatum {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self, RadialError> {
        if values.len() != grid.len() {
            return Err(RadialError::LengthMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(RadialError::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn pair(&self, u: &RadialFunction) -> Result<f64, RadialError> {
        if !self.grid.same_as(u.grid()) {
            return Err(RadialError::GridMismatch);
        }
        Ok(self
            .grid
            .weights()
            .iter()
            .zip(self.values.iter().zip(u.values()))
            .map(|(w, (f, u))| w * f * u)
            .sum())
    }

    /// Lower estimate of the dual norm through a probe: <f, u> / ||u||_X.
    pub fn dual_norm_lower(&self, probe: &RadialFunction, params: &Params) -> f64 {
        let x_norm = crate::functionals::base_norm(probe, params)
            + probe.lp_norm(params.s()).unwrap_or(0.0);
        if x_norm == 0.0 {
            return 0.0;
        }
        self.pair(probe).map(|v| v.abs() / x_norm).unwrap_or(0.0)
    }
}

#[derive(Debug, Error)]
pub enum DualError {
    #[error("lambda must be positive and finite, got {0}")]
    BadLambda(f64),
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("descent did not reach tolerance after {iterations} iterations (gradient norm {grad_norm})")]
    NonConvergence {
        iterations: usize,
        grad_norm: f64,
        last_iterate: Box<RadialFunction>,
    },
    #[error(transparent)]
    Radial(#[from] RadialError),
}

pub fn dual_energy(
    u: &RadialFunction,
    f: &DualDatum,
    lambda: f64,
    params: &Params,
) -> Result<f64, RadialError> {
    if !u.grid().same_as(f.grid()) {
        return Err(RadialError::GridMismatch);
    }
    let p = params.p();
    let s = params.s();
    let mut e = dirichlet_pp(u, p) / p + lambda * weighted_power(u, s) / s - f.pair(u)?;
    if params.sgn_term() > 0.0 {
        e += weighted_power(u, p) / p;
    }
    Ok(e)
}

/// Gradient covector of the discrete E_f (d E / d u_i over all nodes).
fn grad_dual(u: &RadialFunction, f: &DualDatum, lambda: f64, params: &Params) -> Vec<f64> {
    let p = params.p();
    let s = params.s();
    let sgn = params.sgn_term();
    let weights = u.grid().weights();
    let mut g = grad_dirichlet_pp(u, p);
    for x in g.iter_mut() {
        *x /= p;
    }
    for i in 0..g.len() {
        let ui = u.values()[i];
        let mut c = lambda * phi(ui, s) - f.values()[i];
        if sgn > 0.0 {
            c += phi(ui, p);
        }
        g[i] += weights[i] * c;
    }
    g
}

/// Jacobi-style diagonal preconditioner: cell curvatures of the Dirichlet
/// term plus a quadrature-mass floor. Only conditioning depends on it, not
/// the minimizer.
fn preconditioner(u: &RadialFunction, lambda: f64, params: &Params) -> Vec<f64> {
    let p = params.p();
    let grid = u.grid();
    let nodes = grid.nodes();
    let shells = grid.shell_volumes();
    let weights = grid.weights();
    let vals = u.values();
    let n = vals.len() - 1;

    let mut slope_floor = 0.0_f64;
    for i in 0..n {
        let d = (vals[i + 1] - vals[i]) / (nodes[i + 1] - nodes[i]);
        slope_floor = slope_floor.max(d.abs());
    }
    slope_floor = (0.01 * slope_floor).max(1e-12);

    let mut diag = vec![0.0; n + 1];
    for i in 0..n {
        let h = nodes[i + 1] - nodes[i];
        let d = ((vals[i + 1] - vals[i]) / h).abs().max(slope_floor);
        let curvature = (p - 1.0) * shells[i] * pow_abs(d, p - 2.0) / (h * h);
        diag[i] += curvature;
        diag[i + 1] += curvature;
    }
    for i in 0..=n {
        diag[i] += weights[i] * (1.0 + lambda);
        diag[i] = diag[i].max(1e-300);
    }
    diag
}

const MAX_DUAL_ITER: usize = 400_000;

/// Minimizes the discrete E_f. The returned profile satisfies
/// E_f(u) <= E_f(0) = 0 and a dual-norm gradient bound of `tol`.
pub fn solve_dual(
    f: &DualDatum,
    lambda: f64,
    params: &Params,
    tol: f64,
) -> Result<RadialFunction, DualError> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(DualError::BadLambda(lambda));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(DualError::BadTolerance(tol));
    }
    let grid = Arc::clone(f.grid());
    let n = grid.len() - 1;

    let mut u = RadialFunction::zero(&grid);
    let mut energy = 0.0_f64;
    let mut grad = grad_dual(&u, f, lambda, params);
    let mut grad_norm = dual_norm(&grid, &grad);

    let mut eta = 1.0_f64;
    let mut prev_step: Option<(Vec<f64>, Vec<f64>)> = None; // (delta x, delta dir)
    let mut iterations = 0usize;
    while grad_norm > tol {
        if iterations >= MAX_DUAL_ITER {
            return Err(DualError::NonConvergence {
                iterations,
                grad_norm,
                last_iterate: Box::new(u),
            });
        }
        iterations += 1;

        let diag = preconditioner(&u, lambda, params);
        let mut dir = vec![0.0; n + 1];
        for i in 1..n {
            dir[i] = grad[i] / diag[i];
        }
        // slope of the line search: <g, d> in the plain pairing
        let slope: f64 = (1..n).map(|i| grad[i] * dir[i]).sum();

        if let Some((dx, dd)) = &prev_step {
            let num: f64 = dx.iter().map(|x| x * x).sum();
            let den: f64 = dx.iter().zip(dd.iter()).map(|(x, d)| x * d).sum();
            if den.abs() > 1e-300 && num > 0.0 {
                eta = (num / den).abs().clamp(1e-12, 1e10);
            }
        }

        let mut accepted = false;
        let mut trial_vals = Vec::new();
        let mut trial_energy = 0.0;
        for _ in 0..80 {
            trial_vals = u.values().to_vec();
            for i in 1..n {
                trial_vals[i] -= eta * dir[i];
            }
            trial_vals[0] = trial_vals[1];
            let trial = RadialFunction::from_values_unchecked(Arc::clone(&grid), trial_vals.clone());
            trial_energy = dual_energy(&trial, f, lambda, params)?;
            if trial_energy <= energy - 1e-4 * eta * slope {
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            return Err(DualError::NonConvergence {
                iterations,
                grad_norm,
                last_iterate: Box::new(u),
            });
        }

        let dx: Vec<f64> = trial_vals
            .iter()
            .zip(u.values())
            .map(|(a, b)| a - b)
            .collect();
        u = RadialFunction::from_values_unchecked(Arc::clone(&grid), trial_vals);
        energy = trial_energy;
        let new_grad = grad_dual(&u, f, lambda, params);
        let diag_new = preconditioner(&u, lambda, params);
        let dd: Vec<f64> = (0..=n)
            .map(|i| {
                if i == 0 || i == n {
                    0.0
                } else {
                    new_grad[i] / diag_new[i] - grad[i] / diag[i]
                }
            })
            .collect();
        prev_step = Some((dx, dd));
        grad = new_grad;
        grad_norm = dual_norm(&grid, &grad);
    }
    debug_assert!(energy <= 1e-12);
    Ok(u)
}

/// Discrete image of a profile under the operator the dual solve inverts
/// (manufactured-datum construction): f_i such that the quadrature pairing
/// reproduces the gradient covector of the norm terms at `u`.
pub fn operator_image(u: &RadialFunction, lambda: f64, params: &Params) -> DualDatum {
    let grid = u.grid();
    let p = params.p();
    let s = params.s();
    let sgn = params.sgn_term();
    let weights = grid.weights();
    let n = grid.len() - 1;
    let mut g = grad_dirichlet_pp(u, p);
    for x in g.iter_mut() {
        *x /= p;
    }
    let mut f = vec![0.0; n + 1];
    for i in 1..n {
        let ui = u.values()[i];
        let mut c = lambda * phi(ui, s);
        if sgn > 0.0 {
            c += phi(ui, p);
        }
        f[i] = g[i] / weights[i] + c;
    }
    DualDatum {
        grid: Arc::clone(grid),
        values: f,
    }
}
