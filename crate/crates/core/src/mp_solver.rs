//! Constrained mountain-pass solver.
//!
//! The flow lives on the mass sphere { ||u||_s = rho }. A dilation path
//! t -> u^t furnishes the mountain-pass geometry: the endpoint radii come
//! from the one-dimensional barrier f(t) built out of the
//! Gagliardo-Nirenberg estimate. Starting from the maximizer of the energy
//! along that path, the solver alternates
//!
//!   (a) a dilation step replacing u by the local maximizer of
//!       t -> J_V(u^t) near t = 1 (this damps the Pohozaev functional,
//!       which is the t-derivative of the energy along the dilation), and
//!   (b) a tangent-projected descent step with backtracking; trial steps
//!       are accepted only if the energy does not increase.
//!
//! Termination requires both a small constrained gradient and a small
//! Pohozaev value. Every accepted state is re-projected onto the sphere,
//! and profiles are clamped to their absolute value periodically (the
//! discrete energy never increases under u -> |u|).

use std::sync::Arc;

use thiserror::Error;

use crate::certify::{
    diagnostics, equation_residual, moser_bound, pohozaev_residual, tail_mass, SolveReport,
};
use crate::functionals::{
    base_norm, constraint_normal, dirichlet_pp, energy_j, estimate_gn_constant,
    estimate_sobolev_constant, gn_theta, grad_energy_j, lagrange_multiplier, pow_abs,
    weighted_inner, weighted_norm, FunctionalError,
};
use crate::params::Params;
use crate::potentials::{check_v1, Alpha, Potential, V1Report};
use crate::radial_core::{RadialError, RadialFunction, RadialGrid};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MpError {
    #[error("norm-smallness admissibility check failed (lhs {lhs} >= rhs {rhs}); pass --override-v1-check to proceed")]
    V1Failed { lhs: f64, rhs: f64 },
    #[error("mountain-pass geometry needs ||V^-||_alpha < S; got {vminus} >= {s_estimate}")]
    GeometryHypothesisFailed { vminus: f64, s_estimate: f64 },
    #[error("dilation path never reached negative energy (t up to {t_reached}); truncation radius or exponents are unsuitable")]
    NoNegativeEnergy { t_reached: f64 },
    #[error("seed profile must be nonzero")]
    SeedInvalid,
    #[error("descent stagnated at iteration {iteration}: no energy decrease at minimal step (gradient norm {grad_norm}, pohozaev {pohozaev})")]
    Stagnation {
        iteration: usize,
        grad_norm: f64,
        pohozaev: f64,
    },
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Radial(#[from] RadialError),
}

/// Mountain-pass geometry data: the barrier f(t) has its unique maximum at
/// t0 = k2, and k1 bounds the norm of admissible path starting points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpGeometry {
    pub k1: f64,
    pub k2: f64,
    pub t0: f64,
    pub f_t0: f64,
    pub c_gn: f64,
    pub s_est: f64,
}

/// Barrier value f(t) for the geometry defined by (params, coefficients).
fn barrier(t: f64, a: f64, b: f64, p: f64, theta_q: f64) -> f64 {
    a * t.powf(p) - b * t.powf(theta_q)
}

pub fn compute_geometry(
    params: &Params,
    potential: &Potential,
    c_gn: f64,
    s_est: f64,
) -> Result<MpGeometry, MpError> {
    let p = params.p();
    let q = params.q();
    let rho = params.rho();
    let theta = gn_theta(params);
    let vminus = potential.norm_minus();
    if vminus >= s_est {
        return Err(MpError::GeometryHypothesisFailed {
            vminus,
            s_estimate: s_est,
        });
    }
    let slack = 1.0 - vminus / s_est;
    let a = slack / p;
    let b = c_gn.powf(q) / q * rho.powf((1.0 - theta) * q);
    let theta_q = theta * q;
    let t0 = (slack / (c_gn.powf(q) * theta * rho.powf((1.0 - theta) * q)))
        .powf(1.0 / (theta_q - p));
    let f_t0 = barrier(t0, a, b, p, theta_q);
    let k2 = t0;
    let vplus_term = 1.0 + potential.norm_plus() / s_est;
    let k1 = (p * f_t0 / vplus_term).powf(1.0 / p).min(k2) * (1.0 - 1e-6);
    Ok(MpGeometry {
        k1,
        k2,
        t0,
        f_t0,
        c_gn,
        s_est,
    })
}

/// Endpoints of the dilation path: a small-norm start and a
/// negative-energy end, both on the mass sphere.
#[derive(Debug, Clone)]
pub struct InitialPath {
    pub u_low: RadialFunction,
    pub u_high: RadialFunction,
    pub t_low: f64,
    pub t_high: f64,
}

pub fn initial_path(
    params: &Params,
    potential: &Potential,
    geometry: &MpGeometry,
    seed: &RadialFunction,
) -> Result<InitialPath, MpError> {
    let s = params.s();
    let rho = params.rho();
    if seed.is_zero() {
        return Err(MpError::SeedInvalid);
    }
    let base = seed.abs().project_sphere(rho, s)?;

    let at = |t: f64| -> Result<RadialFunction, MpError> {
        Ok(base.rescale(t, s)?.project_sphere(rho, s)?)
    };

    let mut t_high = 1.0;
    let mut u_high = at(t_high)?;
    while energy_j(&u_high, potential, params)?.value >= 0.0 {
        t_high *= 2.0;
        if t_high > 1e6 {
            return Err(MpError::NoNegativeEnergy { t_reached: t_high });
        }
        u_high = at(t_high)?;
    }

    let mut t_low = 1.0;
    let mut u_low = at(t_low)?;
    while base_norm(&u_low, params) > geometry.k1 {
        t_low *= 0.5;
        if t_low < 1e-9 {
            break;
        }
        u_low = at(t_low)?;
    }

    Ok(InitialPath {
        u_low,
        u_high,
        t_low,
        t_high,
    })
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub tol_grad: f64,
    pub tol_poh: f64,
    pub max_iter: usize,
    /// Seed profile; a unit-width Gaussian when absent.
    pub seed: Option<RadialFunction>,
    pub seed_width: f64,
    /// Clamp u -> |u| every this many iterations.
    pub clamp_interval: usize,
    pub override_v1: bool,
    /// Record per-iteration invariants (energy decrease, mass deviation,
    /// tangency) for audit.
    pub keep_log: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_grad: 1e-5,
            tol_poh: 1e-4,
            max_iter: 60_000,
            seed: None,
            seed_width: 1.0,
            clamp_interval: 25,
            override_v1: false,
            keep_log: false,
        }
    }
}

/// Invariants recorded at an accepted descent step.
#[derive(Debug, Clone, Copy)]
pub struct IterationRecord {
    pub energy_before: f64,
    pub energy_after: f64,
    pub mass_rel_dev: f64,
    /// |<g_T, n>| / (||g_T|| ||n||) in the quadrature inner product.
    pub tangency: f64,
    pub grad_norm: f64,
    pub step: f64,
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub profile: RadialFunction,
    pub report: SolveReport,
    pub geometry: MpGeometry,
    pub v1: V1Report,
    pub log: Vec<IterationRecord>,
}

fn tie_origin(u: &mut RadialFunction) {
    let v1 = u.values()[1];
    u.values_mut()[0] = v1;
}

/// Riesz representative of a covector in the quadrature metric over the
/// interior nodes (origin tied, last node pinned).
fn riesz(grid: &RadialGrid, g: &[f64]) -> Vec<f64> {
    let w = grid.weights();
    let n = g.len() - 1;
    let mut out = vec![0.0; n + 1];
    for i in 1..n {
        out[i] = g[i] / w[i];
    }
    out
}

fn jacobi_diagonal(u: &RadialFunction, params: &Params) -> Vec<f64> {
    let p = params.p();
    let grid = u.grid();
    let nodes = grid.nodes();
    let shells = grid.shell_volumes();
    let weights = grid.weights();
    let vals = u.values();
    let n = vals.len() - 1;
    let mut slope_floor = 0.0_f64;
    for i in 0..n {
        slope_floor = slope_floor.max(((vals[i + 1] - vals[i]) / (nodes[i + 1] - nodes[i])).abs());
    }
    slope_floor = (0.01 * slope_floor).max(1e-12);
    let mut diag = vec![0.0; n + 1];
    for i in 0..n {
        let h = nodes[i + 1] - nodes[i];
        let d = ((vals[i + 1] - vals[i]) / h).abs().max(slope_floor);
        let c = (p - 1.0) * shells[i] * pow_abs(d, p - 2.0) / (h * h);
        diag[i] += c;
        diag[i + 1] += c;
    }
    let scale = u.max_abs().max(1e-12);
    for i in 0..=n {
        diag[i] += weights[i] * (1.0 + pow_abs(scale, params.q() - 2.0));
        diag[i] = diag[i].max(1e-300);
    }
    diag
}

struct DilationScan<'a> {
    base: &'a RadialFunction,
    rho: f64,
    s: f64,
}

impl<'a> DilationScan<'a> {
    fn at(&self, t: f64) -> Result<RadialFunction, MpError> {
        Ok(self
            .base
            .rescale(t, self.s)?
            .project_sphere(self.rho, self.s)?)
    }
}

/// Golden-section maximization of t -> J(u^t) on [lo, hi].
fn golden_max<F: FnMut(f64) -> Result<f64, MpError>>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, MpError> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

pub fn solve_ground_state(
    params: &Params,
    potential: &Potential,
    opts: &SolverOptions,
) -> Result<GroundState, MpError> {
    let grid = Arc::clone(potential.grid());
    let s = params.s();
    let rho = params.rho();
    let mut flags: Vec<String> = potential.flags().to_vec();

    let s_alpha = estimate_sobolev_constant(params, potential.alpha(), &grid)?;
    let v1 = check_v1(potential, params, &s_alpha);
    if !v1.pass {
        if !opts.override_v1 {
            return Err(MpError::V1Failed {
                lhs: v1.lhs,
                rhs: v1.rhs,
            });
        }
        flags.push("v1-check-overridden".to_string());
    }
    if !v1.certified {
        flags.push("sobolev-estimate-not-certified".to_string());
    }

    let c_gn = estimate_gn_constant(params, &grid).value;
    let geometry = compute_geometry(params, potential, c_gn, s_alpha.value)?;

    let seed = match &opts.seed {
        Some(u) => u.clone(),
        None => {
            let w = opts.seed_width;
            RadialFunction::sample(&grid, |r| (-r * r / (2.0 * w * w)).exp())?
        }
    };
    let path = initial_path(params, potential, &geometry, &seed)?;
    let base = seed.abs().project_sphere(rho, s)?;

    // start from the first global maximizer of the energy along the path,
    // scanning in increasing t
    let scan_points = 96;
    let (lo_ln, hi_ln) = (path.t_low.ln(), path.t_high.ln());
    let mut best_t = path.t_low;
    let mut best_e = f64::NEG_INFINITY;
    for k in 0..=scan_points {
        let t = (lo_ln + (hi_ln - lo_ln) * k as f64 / scan_points as f64).exp();
        let cand = base.rescale(t, s)?.project_sphere(rho, s)?;
        let e = energy_j(&cand, potential, params)?.value;
        if e > best_e {
            best_e = e;
            best_t = t;
        }
    }
    let mut u = base.rescale(best_t, s)?.project_sphere(rho, s)?;
    tie_origin(&mut u);
    u = u.project_sphere(rho, s)?;
    let mut energy = energy_j(&u, potential, params)?.value;

    let mut log = Vec::new();
    let mut prev_bb: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut eta = 1e-2;
    let mut iterations = 0usize;
    let mut converged = false;
    let mut last_grad_norm = f64::INFINITY;
    let mut last_poh = f64::INFINITY;

    while iterations < opts.max_iter {
        iterations += 1;

        // (a) dilation step: local maximization of the energy along the
        // mass-preserving dilation damps the Pohozaev functional
        {
            let scan = DilationScan { base: &u, rho, s };
            let t_star = golden_max(
                |t| {
                    let cand = scan.at(t)?;
                    Ok(energy_j(&cand, potential, params)?.value)
                },
                0.5,
                2.0,
                1e-5,
            )?;
            let mut cand = scan.at(t_star)?;
            tie_origin(&mut cand);
            let cand = cand.project_sphere(rho, s)?;
            let cand_e = energy_j(&cand, potential, params)?.value;
            if cand_e >= energy {
                u = cand;
                energy = cand_e;
            }
        }

        // gradient, constraint normal and tangent projection in the
        // quadrature metric
        let g_cov = grad_energy_j(&u, potential, params)?;
        let normal = constraint_normal(&u, s);
        let ghat = riesz(&grid, &g_cov);
        let nn = weighted_inner(&grid, &normal, &normal);
        let gn = weighted_inner(&grid, &ghat, &normal);
        let coef = gn / nn;
        let n_nodes = grid.len() - 1;
        let mut g_t = vec![0.0; n_nodes + 1];
        for i in 1..n_nodes {
            g_t[i] = ghat[i] - coef * normal[i];
        }
        let grad_norm = weighted_norm(&grid, &g_t);
        let poh = crate::functionals::pohozaev_p(&u, potential, params)?;
        let a_term = dirichlet_pp(&u, params.p());
        last_grad_norm = grad_norm;
        last_poh = poh;

        if grad_norm <= opts.tol_grad && poh.abs() <= opts.tol_poh * (1.0 + a_term) {
            converged = true;
            break;
        }

        // preconditioned tangent direction: d = D^{-1}(g - nu n_cov) with
        // nu chosen so that <d, n> vanishes in the quadrature metric
        let diag = jacobi_diagonal(&u, params);
        let weights = grid.weights();
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 1..n_nodes {
            let ncov = weights[i] * normal[i];
            num += ncov * g_cov[i] / diag[i];
            den += ncov * ncov / diag[i];
        }
        let nu = if den > 0.0 { num / den } else { 0.0 };
        let mut dir = vec![0.0; n_nodes + 1];
        for i in 1..n_nodes {
            dir[i] = (g_cov[i] - nu * weights[i] * normal[i]) / diag[i];
        }

        if let Some((dx, dd)) = &prev_bb {
            let num: f64 = dx.iter().map(|x| x * x).sum();
            let den: f64 = dx.iter().zip(dd.iter()).map(|(x, d)| x * d).sum();
            if den.abs() > 1e-300 && num > 0.0 {
                eta = (num / den).abs().clamp(1e-10, 1e6);
            }
        }
        // trust-region style cap on the relative step size
        let dir_norm = weighted_norm(&grid, &dir);
        let u_norm = weighted_norm(&grid, u.values()).max(1e-12);
        if dir_norm > 0.0 {
            eta = eta.min(0.2 * u_norm / dir_norm);
        }

        // (b) tangent descent with backtracking; accept only if the energy
        // does not increase
        let energy_before = energy;
        let mut accepted = false;
        let mut trial = u.clone();
        let mut trial_e = energy;
        for _ in 0..60 {
            let mut vals = u.values().to_vec();
            for i in 1..n_nodes {
                vals[i] -= eta * dir[i];
            }
            vals[0] = vals[1];
            let cand = RadialFunction::from_values_unchecked(Arc::clone(&grid), vals)
                .project_sphere(rho, s)?;
            let cand_e = energy_j(&cand, potential, params)?.value;
            if cand_e <= energy {
                trial = cand;
                trial_e = cand_e;
                accepted = true;
                break;
            }
            eta *= 0.5;
            if eta < 1e-17 {
                break;
            }
        }
        if !accepted {
            return Err(MpError::Stagnation {
                iteration: iterations,
                grad_norm,
                pohozaev: poh,
            });
        }

        let dx: Vec<f64> = trial
            .values()
            .iter()
            .zip(u.values())
            .map(|(a, b)| a - b)
            .collect();
        let g_new = grad_energy_j(&trial, potential, params)?;
        let diag_new = jacobi_diagonal(&trial, params);
        let dd: Vec<f64> = (0..=n_nodes)
            .map(|i| {
                if i == 0 || i == n_nodes {
                    0.0
                } else {
                    g_new[i] / diag_new[i] - g_cov[i] / diag[i]
                }
            })
            .collect();
        prev_bb = Some((dx, dd));

        u = trial;
        energy = trial_e;

        if opts.clamp_interval > 0 && iterations % opts.clamp_interval == 0 {
            let clamped = u.abs();
            let e_clamped = energy_j(&clamped, potential, params)?.value;
            if e_clamped > energy + 1e-12 * energy.abs().max(1.0) {
                flags.push("clamp-raised-energy".to_string());
            } else {
                u = clamped;
                energy = e_clamped;
            }
        }

        if opts.keep_log {
            let mass = u.lp_norm(s)?;
            let gt_norm = weighted_norm(&grid, &g_t).max(1e-300);
            let n_norm = weighted_norm(&grid, &normal).max(1e-300);
            log.push(IterationRecord {
                energy_before,
                energy_after: energy,
                mass_rel_dev: (mass - rho).abs() / rho,
                tangency: weighted_inner(&grid, &g_t, &normal).abs() / (gt_norm * n_norm),
                grad_norm,
                step: eta,
            });
        }
    }

    if !converged {
        flags.push("max-iterations-reached".to_string());
    }

    let lambda = lagrange_multiplier(&u, potential, params)?;
    let poh_res = pohozaev_residual(&u, potential, params)?;
    let eq_res = equation_residual(&u, lambda, potential, params)?;
    let s_np = estimate_sobolev_constant(
        params,
        Alpha::Finite(params.dim_f() / params.p()),
        &grid,
    )?;
    let cert = moser_bound(&u, params, s_np.value)?;
    let report = SolveReport {
        energy,
        lambda,
        pohozaev_residual: poh_res,
        equation_residual: eq_res,
        linf_bound: cert.bound,
        max_abs_u: u.max_abs(),
        tail_mass_fraction: tail_mass(&u, s, 0.75),
        diagnostics: diagnostics(&u, potential, params)?,
        iterations,
        converged,
        flags,
    };
    let _ = (last_grad_norm, last_poh);
    Ok(GroundState {
        profile: u,
        report,
        geometry,
        v1,
        log,
    })
}

/// One row of a mass sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub rho: f64,
    pub c_rho: f64,
    pub lambda: f64,
    pub rho_s_lambda: f64,
    pub pohozaev_residual: f64,
    pub equation_residual: f64,
    pub converged: bool,
}

/// Independent solves along a strictly decreasing mass list, warm-started
/// by mass re-projection of the previous solution within each thread's
/// contiguous chunk. Results keep the input order.
pub fn mass_sweep(
    params: &Params,
    potential: &Potential,
    rho_list: &[f64],
    opts: &SolverOptions,
    threads: usize,
) -> Result<Vec<SweepRow>, MpError> {
    let threads = threads.max(1).min(rho_list.len().max(1));
    let chunk_len = rho_list.len().div_ceil(threads);
    let mut rows: Vec<Option<SweepRow>> = vec![None; rho_list.len()];

    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (chunk_idx, chunk) in rho_list.chunks(chunk_len).enumerate() {
            let opts = opts.clone();
            let handle = scope.spawn(move || {
                let mut out = Vec::with_capacity(chunk.len());
                let mut warm: Option<RadialFunction> = None;
                for &rho in chunk {
                    let p_rho = match params.with_rho(rho) {
                        Ok(p) => p,
                        Err(_) => {
                            out.push(SweepRow {
                                rho,
                                c_rho: f64::NAN,
                                lambda: f64::NAN,
                                rho_s_lambda: f64::NAN,
                                pohozaev_residual: f64::NAN,
                                equation_residual: f64::NAN,
                                converged: false,
                            });
                            continue;
                        }
                    };
                    let mut local = opts.clone();
                    if let Some(w) = &warm {
                        local.seed = w.project_sphere(rho, params.s()).ok();
                    }
                    match solve_ground_state(&p_rho, potential, &local) {
                        Ok(state) => {
                            let row = SweepRow {
                                rho,
                                c_rho: state.report.energy,
                                lambda: state.report.lambda,
                                rho_s_lambda: rho.powf(params.s()) * state.report.lambda,
                                pohozaev_residual: state.report.pohozaev_residual,
                                equation_residual: state.report.equation_residual,
                                converged: state.report.converged,
                            };
                            warm = Some(state.profile);
                            out.push(row);
                        }
                        Err(_) => out.push(SweepRow {
                            rho,
                            c_rho: f64::NAN,
                            lambda: f64::NAN,
                            rho_s_lambda: f64::NAN,
                            pohozaev_residual: f64::NAN,
                            equation_residual: f64::NAN,
                            converged: false,
                        }),
                    }
                }
                (chunk_idx, out)
            });
            handles.push(handle);
        }
        for handle in handles {
            let (chunk_idx, out) = handle.join().expect("sweep worker panicked");
            for (offset, row) in out.into_iter().enumerate() {
                rows[chunk_idx * chunk_len + offset] = Some(row);
            }
        }
    });

    Ok(rows.into_iter().map(|r| r.expect("row filled")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials;
    use crate::radial_core::{build_grid, Grading};

    fn baseline(rho: f64) -> Params {
        Params::new(3, 2.0, 2.0, 4.0, rho).unwrap()
    }

    fn grid3() -> Arc<RadialGrid> {
        build_grid(3, 15.0, 2000, Grading::Uniform).unwrap()
    }

    #[test]
    fn geometry_stationarity_and_monotonicity() {
        let grid = grid3();
        let params = baseline(1.0);
        let v = potentials::zero(&grid);
        let c_gn = estimate_gn_constant(&params, &grid).value;
        let geom = compute_geometry(&params, &v, c_gn, 1.0).unwrap();
        assert!(geom.k1 > 0.0 && geom.k1 < geom.k2);
        assert!((geom.k2 - geom.t0).abs() < 1e-14);
        assert!(geom.f_t0 > 0.0);

        // finite-difference stationarity of the barrier at t0
        let theta = gn_theta(&params);
        let p = params.p();
        let q = params.q();
        let a = 1.0 / p;
        let b = c_gn.powf(q) / q * params.rho().powf((1.0 - theta) * q);
        let h = 1e-6 * geom.t0;
        let df = (barrier(geom.t0 + h, a, b, p, theta * q)
            - barrier(geom.t0 - h, a, b, p, theta * q))
            / (2.0 * h);
        assert!(df.abs() <= 1e-6 * (1.0 + geom.f_t0), "f'(t0) = {df}");

        // halving the mass raises the stationary dilation scale
        let params_half = baseline(0.5);
        let geom_half = compute_geometry(&params_half, &v, c_gn, 1.0).unwrap();
        assert!(geom_half.t0 > geom.t0);
    }

    #[test]
    fn geometry_rejects_large_negative_part() {
        let grid = grid3();
        let params = baseline(1.0);
        let v = potentials::make_potential(
            &potentials::PotentialSpec::GaussianBump {
                amplitude: 2.0,
                width: 1.0,
                sign: -1.0,
            },
            Alpha::Infinity,
            &grid,
            &params,
        )
        .unwrap();
        assert!(matches!(
            compute_geometry(&params, &v, 0.5, 1.0),
            Err(MpError::GeometryHypothesisFailed { .. })
        ));
    }

    #[test]
    fn initial_path_brackets_the_pass() {
        let grid = grid3();
        let params = baseline(2.0);
        let v = potentials::zero(&grid);
        let c_gn = estimate_gn_constant(&params, &grid).value;
        let geom = compute_geometry(&params, &v, c_gn, 1.0).unwrap();
        let seed = RadialFunction::sample(&grid, |r| (-r * r / 2.0).exp()).unwrap();
        let path = initial_path(&params, &v, &geom, &seed).unwrap();
        assert!(base_norm(&path.u_low, &params) <= geom.k1 * (1.0 + 1e-12));
        assert!(energy_j(&path.u_high, &v, &params).unwrap().value < 0.0);
        assert!(path.t_low <= 1.0 && path.t_high >= 1.0);
        assert!(matches!(
            initial_path(&params, &v, &geom, &RadialFunction::zero(&grid)),
            Err(MpError::SeedInvalid)
        ));
    }
}
