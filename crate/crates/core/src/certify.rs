//! Independent verification of computed profiles: Pohozaev and weak-form
//! equation residuals, an explicit L-infinity certificate built from the
//! Moser iteration ladder, a shooting-method oracle for the radial ODE,
//! and a tail-mass dichotomy diagnostic.
//!
//! The oracle integrates the radial ODE in the flux variable
//! v = r^{N-1} |u'|^{p-2} u', which avoids differentiating through the
//! degenerate |u'|^{p-2} at u' = 0, and bisects on the center height u(0).
//! It shares only the discretization layer with the solvers.

use std::sync::Arc;

use thiserror::Error;

use crate::functionals::{
    base_norm, dirichlet_pp, dual_norm, energy_j, grad_energy_j, lagrange_multiplier, phi,
    pohozaev_p, weighted_power, Estimate, FunctionalError,
};
use crate::params::Params;
use crate::potentials::Potential;
use crate::radial_core::{MonotoneCubic, RadialError, RadialFunction, RadialGrid};

/// The Palais-Smale bookkeeping quantities of a profile: gradient mass A,
/// signed p-mass B, potential coupling C, dilation coupling D and the
/// nonlinear mass E.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

pub fn diagnostics(
    u: &RadialFunction,
    potential: &Potential,
    params: &Params,
) -> Result<Diagnostics, FunctionalError> {
    let p = params.p();
    let a = dirichlet_pp(u, p);
    let b = params.sgn_term() * weighted_power(u, p);
    let (c, d) = if potential.is_zero() {
        (0.0, 0.0)
    } else {
        if !u.grid().same_as(potential.grid()) {
            return Err(FunctionalError::GridMismatch);
        }
        let du = u.derivative();
        let weights = u.grid().weights();
        let nodes = u.grid().nodes();
        let mut c = 0.0;
        let mut d = 0.0;
        for i in 0..weights.len() {
            let ui = u.values()[i];
            c += weights[i] * potential.values()[i] * crate::functionals::pow_abs(ui, p);
            d += weights[i] * potential.values()[i] * phi(ui, p) * du.values()[i] * nodes[i];
        }
        (c, d)
    };
    let e = weighted_power(u, params.q());
    Ok(Diagnostics { a, b, c, d, e })
}

/// Certification record attached to every solve or ingested profile.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub energy: f64,
    pub lambda: f64,
    pub pohozaev_residual: f64,
    pub equation_residual: f64,
    pub linf_bound: f64,
    pub max_abs_u: f64,
    pub tail_mass_fraction: f64,
    pub diagnostics: Diagnostics,
    pub iterations: usize,
    pub converged: bool,
    pub flags: Vec<String>,
}

/// |P_V(u)| normalized by (1 + ||grad u||_p^p).
pub fn pohozaev_residual(
    u: &RadialFunction,
    potential: &Potential,
    params: &Params,
) -> Result<f64, FunctionalError> {
    let p = pohozaev_p(u, potential, params)?;
    Ok(p.abs() / (1.0 + dirichlet_pp(u, params.p())))
}

/// Quadrature-weighted dual norm of the discrete weak-form residual of the
/// stationary equation at multiplier `lambda`, normalized by (1 + ||u||).
/// Tested against the nodal hat functions at interior nodes.
pub fn equation_residual(
    u: &RadialFunction,
    lambda: f64,
    potential: &Potential,
    params: &Params,
) -> Result<f64, FunctionalError> {
    let grid = u.grid();
    let weights = grid.weights();
    let s = params.s();
    let mut res = grad_energy_j(u, potential, params)?;
    for (i, r) in res.iter_mut().enumerate() {
        *r += lambda * weights[i] * phi(u.values()[i], s);
    }
    Ok(dual_norm(grid, &res) / (1.0 + base_norm(u, params)))
}

/// Explicit L-infinity certificate from the bootstrap ladder with rungs
/// 1 + chi_k = (p*/gamma0)^k, gamma0 = p p* / (p* + p - q).
#[derive(Debug, Clone, PartialEq)]
pub struct MoserCertificate {
    pub bound: f64,
    pub gamma0: f64,
    pub prefactor: f64,
    pub sobolev_exponent: f64,
    /// Ladder evidence: (exponent p*(chi_k + 1), computed norm) for the
    /// first rungs.
    pub ladder: Vec<(f64, f64)>,
}

pub fn moser_bound(
    u: &RadialFunction,
    params: &Params,
    s_est: f64,
) -> Result<MoserCertificate, RadialError> {
    moser_bound_with_growth(u, params, s_est, 1.0)
}

/// Same certificate with the nonlinearity growth constant exposed
/// (pure-power right-hand sides have c = 1).
pub fn moser_bound_with_growth(
    u: &RadialFunction,
    params: &Params,
    s_est: f64,
    c_growth: f64,
) -> Result<MoserCertificate, RadialError> {
    let p = params.p();
    let q = params.q();
    let p_star = params.p_star();
    let gamma0 = p * p_star / (p_star + p - q);
    let ratio = gamma0 / p_star;

    let abs_u = u.abs();
    let norm_pstar = abs_u.lp_norm(p_star)?;

    let mut ladder = Vec::new();
    for k in 1..=6usize {
        let exponent = p_star * ratio.powi(-(k as i32));
        ladder.push((exponent, abs_u.lp_norm(exponent)?));
    }

    if norm_pstar == 0.0 {
        return Ok(MoserCertificate {
            bound: 0.0,
            gamma0,
            prefactor: 0.0,
            sobolev_exponent: 0.0,
            ladder,
        });
    }

    // finite product of the iteration factors until the geometric tail
    // drops below 1e-8
    let mut log_a = 0.0;
    let mut exp_sum = 0.0;
    let mut rk = ratio;
    while rk >= 1e-8 {
        let chi_plus_1 = 1.0 / rk;
        let factor = c_growth * chi_plus_1.powf(p) / (p * (chi_plus_1 - 1.0) + 1.0);
        log_a += factor.ln() / (p * chi_plus_1);
        exp_sum += rk;
        rk *= ratio;
    }
    let prefactor = log_a.exp();
    let sobolev_exponent = exp_sum / p;
    let growth = 1.0 + (q - p) / (p_star - q);
    let bound = prefactor
        * s_est.powf(-sobolev_exponent)
        * norm_pstar.max(norm_pstar.powf(growth));
    Ok(MoserCertificate {
        bound,
        gamma0,
        prefactor,
        sobolev_exponent,
        ladder,
    })
}

/// Fraction of the s-mass (integral of |u|^s) carried beyond
/// fraction_radius * R_max.
pub fn tail_mass(u: &RadialFunction, s: f64, fraction_radius: f64) -> f64 {
    let grid = u.grid();
    let cut = fraction_radius * grid.r_max();
    let weights = grid.weights();
    let nodes = grid.nodes();
    let mut total = 0.0;
    let mut tail = 0.0;
    for i in 0..nodes.len() {
        let m = weights[i] * crate::functionals::pow_abs(u.values()[i], s);
        total += m;
        if nodes[i] > cut {
            tail += m;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShotClass {
    /// Stays positive and turns upward: center height too low.
    Undershoot,
    /// Crosses zero: center height too high.
    Overshoot,
    /// Decays below resolution without turning or crossing.
    Decayed,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("center-height bracket must satisfy 0 < low < high, got ({0}, {1})")]
    BadBracket(f64, f64),
    #[error("lambda must be positive and finite, got {0}")]
    BadLambda(f64),
    #[error(
        "bracket does not straddle the ground state: low shot classified {low:?}, high shot classified {high:?}"
    )]
    BracketDoesNotStraddle { low: ShotClass, high: ShotClass },
    #[error("integrated profile never decays below 1e-6 of the center value (best ratio {0})")]
    TailNotResolved(f64),
    #[error(transparent)]
    Radial(#[from] RadialError),
}

#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub profile: RadialFunction,
    /// Integral of |u|^s (the conserved mass the constraint prescribes).
    pub mass: f64,
    pub center_value: f64,
    pub bisection_steps: usize,
    /// Bracket widths per bisection step; strictly decreasing.
    pub bracket_widths: Vec<f64>,
}

struct OdeSetup {
    dim_m1: f64,
    p: f64,
    s: f64,
    q: f64,
    sgn: f64,
    lambda: f64,
}

impl OdeSetup {
    fn reaction(&self, u: f64) -> f64 {
        self.sgn * phi(u, self.p) + self.lambda * phi(u, self.s) - phi(u, self.q)
    }

    /// d/dr of (u, v) with v = r^{N-1} |u'|^{p-2} u'.
    fn rhs(&self, r: f64, u: f64, v: f64) -> (f64, f64) {
        let rp = r.powf(self.dim_m1);
        let slope = if v == 0.0 {
            0.0
        } else {
            let a = (v.abs() / rp).powf(1.0 / (self.p - 1.0));
            a * v.signum()
        };
        (slope, rp * self.reaction(u))
    }
}

struct ShotOutcome {
    class: ShotClass,
    path: Vec<(f64, f64)>,
    min_ratio: f64,
    min_index: usize,
}

fn integrate_shot(setup: &OdeSetup, center: f64, r_stop: f64, keep_path: bool) -> ShotOutcome {
    // series start: u(r0) = h + sign(G) (|G|/N)^{1/(p-1)} r0^{p'} / p',
    // v(r0) = G(h) r0^N / N with G the reaction at the center height
    let dim = setup.dim_m1 + 1.0;
    let g0 = setup.reaction(center);
    let r0: f64 = 1e-8;
    let pc = setup.p / (setup.p - 1.0);
    let mut r = r0;
    let mut u = center + g0.signum() * (g0.abs() / dim).powf(1.0 / (setup.p - 1.0)) * r0.powf(pc)
        / pc;
    let mut v = g0 * r0.powf(dim) / dim;

    let mut h: f64 = 1e-6;
    let h_max = (0.02 / (1.0 + setup.lambda.sqrt())).min(r_stop / 400.0);
    let tol = 1e-11 * center.max(1.0);

    let mut path = Vec::new();
    if keep_path {
        path.push((0.0, center));
        path.push((r, u));
    }
    let mut min_ratio = 1.0_f64;
    let mut min_index = if keep_path { 1 } else { 0 };

    let mut class = ShotClass::Decayed;
    while r < r_stop {
        let step = h.min(r_stop - r).max(1e-12);
        // two half steps vs one full step of classical RK4
        let full = rk4_step(setup, r, u, v, step);
        let half1 = rk4_step(setup, r, u, v, 0.5 * step);
        let half2 = rk4_step(setup, r + 0.5 * step, half1.0, half1.1, 0.5 * step);
        let err = (full.0 - half2.0).abs().max((full.1 - half2.1).abs());
        if err > tol && step > 1e-12 {
            h = (step * 0.5).max(1e-12);
            continue;
        }
        r += step;
        u = half2.0;
        v = half2.1;
        if err < 0.1 * tol {
            h = (step * 1.6).min(h_max);
        }
        if keep_path {
            path.push((r, u));
        }
        if u <= 0.0 {
            class = ShotClass::Overshoot;
            break;
        }
        let ratio = u / center;
        if ratio < min_ratio {
            min_ratio = ratio;
            min_index = path.len().saturating_sub(1);
        }
        if v > 0.0 && u > 0.0 && ratio > 2.0 * min_ratio {
            class = ShotClass::Undershoot;
            break;
        }
        if ratio < 1e-14 {
            class = ShotClass::Decayed;
            break;
        }
    }
    ShotOutcome {
        class,
        path,
        min_ratio,
        min_index,
    }
}

fn rk4_step(setup: &OdeSetup, r: f64, u: f64, v: f64, h: f64) -> (f64, f64) {
    let (k1u, k1v) = setup.rhs(r, u, v);
    let (k2u, k2v) = setup.rhs(r + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
    let (k3u, k3v) = setup.rhs(r + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
    let (k4u, k4v) = setup.rhs(r + h, u + h * k3u, v + h * k3v);
    (
        u + h * (k1u + 2.0 * k2u + 2.0 * k3u + k4u) / 6.0,
        v + h * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0,
    )
}

/// Ground-state profile by bisection on the center height with u'(0) = 0.
/// `bracket.0` must undershoot (turn upward) and `bracket.1` must
/// overshoot (hit zero).
pub fn shoot_oracle(
    params: &Params,
    grid: &Arc<RadialGrid>,
    lambda: f64,
    bracket: (f64, f64),
) -> Result<OracleSolution, OracleError> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(OracleError::BadLambda(lambda));
    }
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
        return Err(OracleError::BadBracket(lo, hi));
    }
    let setup = OdeSetup {
        dim_m1: params.dim_f() - 1.0,
        p: params.p(),
        s: params.s(),
        q: params.q(),
        sgn: params.sgn_term(),
        lambda,
    };
    let r_stop = grid.r_max();

    let low_class = integrate_shot(&setup, lo, r_stop, false).class;
    let high_class = integrate_shot(&setup, hi, r_stop, false).class;
    if low_class != ShotClass::Undershoot || high_class != ShotClass::Overshoot {
        return Err(OracleError::BracketDoesNotStraddle {
            low: low_class,
            high: high_class,
        });
    }

    let mut widths = Vec::new();
    let mut steps = 0usize;
    while hi - lo > 1e-15 * hi.max(1.0) && steps < 200 {
        widths.push(hi - lo);
        let mid = 0.5 * (lo + hi);
        match integrate_shot(&setup, mid, r_stop, false).class {
            ShotClass::Undershoot => lo = mid,
            ShotClass::Overshoot => hi = mid,
            ShotClass::Decayed => {
                lo = mid;
                break;
            }
        }
        steps += 1;
    }

    // the undershoot side stays positive through the decay window
    let outcome = integrate_shot(&setup, lo, r_stop, true);
    if outcome.min_ratio > 1e-6 {
        return Err(OracleError::TailNotResolved(outcome.min_ratio));
    }
    let cut = outcome.min_index.max(2).min(outcome.path.len() - 1);
    let xs: Vec<f64> = outcome.path[..=cut].iter().map(|p| p.0).collect();
    let ys: Vec<f64> = outcome.path[..=cut].iter().map(|p| p.1).collect();
    let interp = MonotoneCubic::new(&xs, &ys);
    let r_trunc = xs[cut];
    let mut values: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&r| if r >= r_trunc { 0.0 } else { interp.eval(r) })
        .collect();
    *values.last_mut().unwrap() = 0.0;
    let profile = RadialFunction::from_values(Arc::clone(grid), values)?;
    let mass = weighted_power(&profile, params.s());
    Ok(OracleSolution {
        profile,
        mass,
        center_value: lo,
        bisection_steps: steps,
        bracket_widths: widths,
    })
}

/// Full certification of an ingested profile: multiplier, residuals,
/// boundedness certificate and tail diagnostic.
pub fn certify_profile(
    u: &RadialFunction,
    potential: &Potential,
    params: &Params,
    s_est: &Estimate,
) -> Result<SolveReport, FunctionalError> {
    let mut flags: Vec<String> = potential.flags().to_vec();
    if u.is_zero() {
        flags.push("degenerate-zero-profile".to_string());
        return Ok(SolveReport {
            energy: 0.0,
            lambda: 0.0,
            pohozaev_residual: 0.0,
            equation_residual: 0.0,
            linf_bound: 0.0,
            max_abs_u: 0.0,
            tail_mass_fraction: 0.0,
            diagnostics: Diagnostics {
                a: 0.0,
                b: 0.0,
                c: 0.0,
                d: 0.0,
                e: 0.0,
            },
            iterations: 0,
            converged: true,
            flags,
        });
    }
    let lambda = lagrange_multiplier(u, potential, params)?;
    let energy = energy_j(u, potential, params)?.value;
    let poh = pohozaev_residual(u, potential, params)?;
    let eq = equation_residual(u, lambda, potential, params)?;
    let cert = moser_bound(u, params, s_est.value)?;
    if !s_est.certified {
        flags.push("sobolev-estimate-not-certified".to_string());
    }
    Ok(SolveReport {
        energy,
        lambda,
        pohozaev_residual: poh,
        equation_residual: eq,
        linf_bound: cert.bound,
        max_abs_u: u.max_abs(),
        tail_mass_fraction: tail_mass(u, params.s(), 0.75),
        diagnostics: diagnostics(u, potential, params)?,
        iterations: 0,
        converged: true,
        flags,
    })
}
