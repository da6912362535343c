//! The constrained energy functional, the Pohozaev functional obtained by
//! differentiating the energy along the mass-preserving dilation, the
//! Gagliardo-Nirenberg data governing the mountain-pass geometry, and the
//! Lagrange multiplier formula.
//!
//! Discretization: mass-type integrals use the grid's trapezoid weights;
//! the Dirichlet term treats profiles as piecewise linear, so |u'| is
//! constant on each cell and weighted by the exact shell volume. Gradients
//! of the discrete functionals are computed analytically from these sums.

use std::sync::Arc;

use thiserror::Error;

use crate::params::Params;
use crate::potentials::{Alpha, Potential};
use crate::radial_core::{build_grid, Grading, RadialError, RadialFunction, RadialGrid};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctionalError {
    #[error("potential and profile live on different grids")]
    GridMismatch,
    #[error("non-finite integrand at node {index} (r = {r})")]
    NonFiniteIntegrand { index: usize, r: f64 },
    #[error("the x.grad(u) term needs the composite weight V(.)|.| integrable; potential lacks the flag")]
    WtildeNotIntegrable,
    #[error("zero mass: the multiplier formula divides by the L^s norm")]
    ZeroMass,
    #[error("Sobolev exponent alpha must satisfy alpha >= N/p = {min}, got {alpha}")]
    AlphaBelowRange { alpha: f64, min: f64 },
    #[error(transparent)]
    Radial(#[from] RadialError),
}

/// |x|^{t-2} x, safe at x = 0 for every t > 1.
#[inline]
pub(crate) fn phi(x: f64, t: f64) -> f64 {
    if t == 2.0 {
        x
    } else if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(t - 1.0)
    }
}

#[inline]
pub(crate) fn pow_abs(x: f64, t: f64) -> f64 {
    if t == 2.0 {
        x * x
    } else if t == 4.0 {
        let y = x * x;
        y * y
    } else if t == 3.0 {
        let a = x.abs();
        a * a * a
    } else {
        x.abs().powf(t)
    }
}

pub(crate) fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Integral of |u'|^p in the piecewise-linear (cell) form.
pub fn dirichlet_pp(u: &RadialFunction, p: f64) -> f64 {
    let nodes = u.grid().nodes();
    let shells = u.grid().shell_volumes();
    let vals = u.values();
    let mut acc = 0.0;
    for i in 0..shells.len() {
        let slope = (vals[i + 1] - vals[i]) / (nodes[i + 1] - nodes[i]);
        acc += shells[i] * pow_abs(slope, p);
    }
    acc
}

/// Gradient covector of `dirichlet_pp` with respect to the nodal values.
pub fn grad_dirichlet_pp(u: &RadialFunction, p: f64) -> Vec<f64> {
    let nodes = u.grid().nodes();
    let shells = u.grid().shell_volumes();
    let vals = u.values();
    let mut g = vec![0.0; vals.len()];
    for i in 0..shells.len() {
        let h = nodes[i + 1] - nodes[i];
        let slope = (vals[i + 1] - vals[i]) / h;
        let c = p * shells[i] * phi(slope, p) / h;
        g[i] -= c;
        g[i + 1] += c;
    }
    g
}

/// Integral of |u|^t against the quadrature weights (no root).
pub fn weighted_power(u: &RadialFunction, t: f64) -> f64 {
    u.grid()
        .weights()
        .iter()
        .zip(u.values())
        .map(|(w, v)| w * pow_abs(*v, t))
        .sum()
}

/// Base norm ||u|| = (||grad u||_p^p + sgn(p-s) ||u||_p^p)^{1/p}.
pub fn base_norm(u: &RadialFunction, params: &Params) -> f64 {
    let p = params.p();
    let mut total = dirichlet_pp(u, p);
    if params.sgn_term() > 0.0 {
        total += weighted_power(u, p);
    }
    total.powf(1.0 / p)
}

/// Labeled breakdown of the energy: gradient, sgn(p-s) mass, potential and
/// nonlinear parts are the signed addends, so `value` is their plain sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParts {
    pub gradient: f64,
    pub mass: f64,
    pub potential: f64,
    pub nonlinear: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalValue {
    pub value: f64,
    pub parts: EnergyParts,
}

fn potential_term(
    u: &RadialFunction,
    potential: &Potential,
    p: f64,
) -> Result<f64, FunctionalError> {
    if !u.grid().same_as(potential.grid()) {
        return Err(FunctionalError::GridMismatch);
    }
    if potential.is_zero() {
        return Ok(0.0);
    }
    let weights = u.grid().weights();
    let nodes = u.grid().nodes();
    let mut acc = 0.0;
    for (i, ((w, v), val)) in weights
        .iter()
        .zip(potential.values())
        .zip(u.values())
        .enumerate()
    {
        let term = w * v * pow_abs(*val, p);
        if !term.is_finite() {
            return Err(FunctionalError::NonFiniteIntegrand { index: i, r: nodes[i] });
        }
        acc += term;
    }
    Ok(acc)
}

/// J_V(u) = (1/p)||grad u||_p^p + (sgn(p-s)/p)||u||_p^p + (1/p) int V |u|^p
///        - (1/q)||u||_q^q.
pub fn energy_j(
    u: &RadialFunction,
    potential: &Potential,
    params: &Params,
) -> Result<FunctionalValue, FunctionalError> {
    let p = params.p();
    let q = params.q();
    let gradient = dirichlet_pp(u, p) / p;
    let mass = if params.sgn_term() > 0.0 {
        weighted_power(u, p) / p
    } else {
        0.0
    };
    let pot = potential_term(u, potential, p)? / p;
    let nonlinear = -weighted_power(u, q) / q;
    let parts = EnergyParts {
        gradient,
        mass,
        potential: pot,
        nonlinear,
    };
    Ok(FunctionalValue {
        value: gradient + mass + pot + nonlinear,
        parts,
    })
}

/// Gradient covector of the discrete J_V (entries are d J / d u_i).
pub fn grad_energy_j(
    u: &RadialFunction,
    potential: &Potential,
    params: &Params,
) -> Result<Vec<f64>, FunctionalError> {
    if !potential.is_zero() && !u.grid().same_as(potential.grid()) {
        return Err(FunctionalError::GridMismatch);
    }
    let p = params.p();
    let q = params.q();
    let sgn = params.sgn_term();
    let weights = u.grid().weights();
    let mut g = grad_dirichlet_pp(u, p);
    for x in g.iter_mut() {
        *x /= p;
    }
    let vpot = potential.values();
    for (i, (gi, (&w, &ui))) in g
        .iter_mut()
        .zip(weights.iter().zip(u.values()))
        .enumerate()
    {
        let mut c = -phi(ui, q);
        if sgn > 0.0 {
            c += phi(ui, p);
        }
        if !potential.is_zero() {
            c += vpot[i] * phi(ui, p);
        }
        *gi += w * c;
    }
    Ok(g)
}

/// Gradient of the mass constraint ||u||_s^s, as a nodal function
/// n_i = s |u_i|^{s-2} u_i (the covector is w_i n_i).
pub fn constraint_normal(u: &RadialFunction, s: f64) -> Vec<f64> {
    u.values().iter().map(|&v| s * phi(v, s)).collect()
}

/// The Pohozaev functional P_V(u) = d/dt J_V(u^t) at t = 1, in the closed
/// coefficient form. The x.grad(u) term uses the discrete derivative
/// directly (no integration by parts).
pub fn pohozaev_p(
    u: &RadialFunction,
    potential: &Potential,
    params: &Params,
) -> Result<f64, FunctionalError> {
    let n = params.dim_f();
    let p = params.p();
    let s = params.s();
    let q = params.q();
    let c_grad = (p * (n + s) - s * n) / (s * p);
    let c_mass = n * (p - s) / (s * p);
    let c_nl = n * (q - s) / (s * q);

    let mut total = c_grad * dirichlet_pp(u, p) - c_nl * weighted_power(u, q);
    if params.sgn_term() > 0.0 {
        total += c_mass * weighted_power(u, p);
    }
    if !potential.is_zero() {
        if !u.grid().same_as(potential.grid()) {
            return Err(FunctionalError::GridMismatch);
        }
        if !potential.wtilde_finite() {
            return Err(FunctionalError::WtildeNotIntegrable);
        }
        let du = u.derivative();
        let weights = u.grid().weights();
        let nodes = u.grid().nodes();
        for i in 0..weights.len() {
            let ui = u.values()[i];
            let term = weights[i]
                * potential.values()[i]
                * ((n / s) * pow_abs(ui, p) + phi(ui, p) * du.values()[i] * nodes[i]);
            if !term.is_finite() {
                return Err(FunctionalError::NonFiniteIntegrand { index: i, r: nodes[i] });
            }
            total += term;
        }
    }
    Ok(total)
}

/// Gagliardo-Nirenberg interpolation exponent
/// theta = pN(q-s) / (q (p(N+s) - sN)), in (0,1) for admissible parameters.
pub fn gn_theta(params: &Params) -> f64 {
    let n = params.dim_f();
    let p = params.p();
    let s = params.s();
    let q = params.q();
    p * n * (q - s) / (q * (p * (n + s) - s * n))
}

/// A numerical estimate, with a flag recording whether the value is exact
/// by convention or an empirical family bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub certified: bool,
}

fn gaussian_profile(grid: &Arc<RadialGrid>, width: f64) -> RadialFunction {
    RadialFunction::sample(grid, |r| (-r * r / (2.0 * width * width)).exp())
        .expect("gaussian sample is finite")
}

fn bump_profile(grid: &Arc<RadialGrid>, width: f64) -> RadialFunction {
    RadialFunction::sample(grid, |r| {
        let x = r / width;
        let t = 1.0 - x * x;
        if t > 0.0 {
            t * t
        } else {
            0.0
        }
    })
    .expect("bump sample is finite")
}

fn talenti_bubble(grid: &Arc<RadialGrid>, params: &Params, width: f64) -> RadialFunction {
    let p = params.p();
    let n = params.dim_f();
    let expo = p / (p - 1.0);
    let power = -(n - p) / p;
    let raw = |r: f64| (1.0 + (r / width).powf(expo)).powf(power);
    let shift = raw(grid.r_max());
    RadialFunction::sample(grid, |r| (raw(r) - shift).max(0.0))
        .expect("bubble sample is finite")
}

/// Gagliardo-Nirenberg quotient ||u||_q / (||grad u||_p^theta ||u||_s^{1-theta}).
pub fn gn_quotient(u: &RadialFunction, params: &Params) -> f64 {
    let theta = gn_theta(params);
    let nq = u.lp_norm(params.q()).expect("q >= 1");
    let ns = u.lp_norm(params.s()).expect("s >= 1");
    let ng = dirichlet_pp(u, params.p()).powf(1.0 / params.p());
    nq / (ng.powf(theta) * ns.powf(1.0 - theta))
}

/// Empirical estimate of the smallest Gagliardo-Nirenberg constant:
/// the quotient is maximized over Gaussian and compact-bump families with a
/// width sweep, then inflated by a 5% safety margin. Never certified.
pub fn estimate_gn_constant(params: &Params, grid: &Arc<RadialGrid>) -> Estimate {
    let r = grid.r_max();
    let mut best: f64 = 0.0;
    for width in logspace(0.3, r / 4.0, 24) {
        best = best.max(gn_quotient(&gaussian_profile(grid, width), params));
        best = best.max(gn_quotient(&bump_profile(grid, (2.0 * width).min(0.9 * r)), params));
    }
    Estimate {
        value: 1.05 * best,
        certified: false,
    }
}

/// Estimate of the embedding constant S_{p,alpha}:
/// - alpha = infinity: exactly 1 by convention;
/// - alpha = N/p: minimization of ||grad u||_p^p / ||u||_{p*}^p over the
///   Talenti bubble family with a width sweep;
/// - alpha in (N/p, infinity): minimization of ||u||^p / ||u||_t^p,
///   t = p alpha/(alpha - 1), over Gaussians, bumps and bubbles.
///
/// All finite-alpha outputs are upper estimates of an infimum and are
/// reported as non-certified.
pub fn estimate_sobolev_constant(
    params: &Params,
    alpha: Alpha,
    grid: &Arc<RadialGrid>,
) -> Result<Estimate, FunctionalError> {
    let n = params.dim_f();
    let p = params.p();
    match alpha {
        Alpha::Infinity => Ok(Estimate {
            value: 1.0,
            certified: true,
        }),
        Alpha::Finite(a) => {
            let min_alpha = n / p;
            if a < min_alpha * (1.0 - 1e-12) {
                return Err(FunctionalError::AlphaBelowRange {
                    alpha: a,
                    min: min_alpha,
                });
            }
            let critical = (a - min_alpha).abs() <= 1e-9 * min_alpha;
            let mut best = f64::INFINITY;
            if critical {
                for width in logspace(0.08, 0.8, 32) {
                    let u = talenti_bubble(grid, params, width);
                    let num = dirichlet_pp(&u, p);
                    let den = u.lp_norm(params.p_star())?.powf(p);
                    if den > 0.0 {
                        best = best.min(num / den);
                    }
                }
            } else {
                let t = p * a / (a - 1.0);
                for width in logspace(0.2, grid.r_max() / 3.0, 24) {
                    for u in [
                        gaussian_profile(grid, width),
                        bump_profile(grid, (2.0 * width).min(0.9 * grid.r_max())),
                        talenti_bubble(grid, params, width),
                    ] {
                        let num = base_norm(&u, params).powf(p);
                        let den = u.lp_norm(t)?.powf(p);
                        if den > 0.0 && num.is_finite() {
                            best = best.min(num / den);
                        }
                    }
                }
            }
            Ok(Estimate {
                value: best,
                certified: false,
            })
        }
    }
}

/// The multiplier making the tested equation exact:
/// lambda = (||u||_q^q - ||grad u||_p^p - sgn(p-s)||u||_p^p - int V|u|^p)
///          / ||u||_s^s.
pub fn lagrange_multiplier(
    u: &RadialFunction,
    potential: &Potential,
    params: &Params,
) -> Result<f64, FunctionalError> {
    let mass_s = weighted_power(u, params.s());
    if mass_s == 0.0 {
        return Err(FunctionalError::ZeroMass);
    }
    let p = params.p();
    let a = dirichlet_pp(u, p);
    let b = params.sgn_term() * weighted_power(u, p);
    let c = potential_term(u, potential, p)?;
    let e = weighted_power(u, params.q());
    Ok((e - a - b - c) / mass_s)
}

/// Weighted inner product sum w_i a_i b_i (the discrete L^2 pairing).
pub fn weighted_inner(grid: &RadialGrid, a: &[f64], b: &[f64]) -> f64 {
    grid.weights()
        .iter()
        .zip(a.iter().zip(b))
        .map(|(w, (x, y))| w * x * y)
        .sum()
}

/// Weighted norm of a nodal function.
pub fn weighted_norm(grid: &RadialGrid, a: &[f64]) -> f64 {
    weighted_inner(grid, a, a).sqrt()
}

/// Quadrature-weighted dual norm of a covector: (sum g_i^2 / w_i)^{1/2}
/// over interior nodes (the origin carries no quadrature mass and the last
/// node is pinned by the Dirichlet truncation).
pub fn dual_norm(grid: &RadialGrid, g: &[f64]) -> f64 {
    let w = grid.weights();
    let n = g.len() - 1;
    (1..n).map(|i| g[i] * g[i] / w[i]).sum::<f64>().sqrt()
}

/// Grid used by self-contained estimates when the caller has none handy.
pub fn default_estimate_grid(dim: u32) -> Arc<RadialGrid> {
    build_grid(dim, 15.0, 1500, Grading::Uniform).expect("static grid parameters are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{self, PotentialSpec};
    use std::f64::consts::PI;

    fn baseline() -> Params {
        Params::new(3, 2.0, 2.0, 4.0, 1.0).unwrap()
    }

    fn grid3() -> Arc<RadialGrid> {
        build_grid(3, 12.0, 2000, Grading::Uniform).unwrap()
    }

    #[test]
    fn energy_of_zero_profile_vanishes() {
        let grid = grid3();
        let params = baseline();
        let v = potentials::zero(&grid);
        let u = RadialFunction::zero(&grid);
        let e = energy_j(&u, &v, &params).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.parts.gradient, 0.0);
        assert_eq!(e.parts.mass, 0.0);
        assert_eq!(e.parts.potential, 0.0);
        assert_eq!(e.parts.nonlinear, 0.0);
    }

    #[test]
    fn gaussian_energy_matches_closed_form() {
        let grid = grid3();
        let params = baseline();
        let v = potentials::zero(&grid);
        let u = gaussian_profile(&grid, 1.0);
        let e = energy_j(&u, &v, &params).unwrap();
        let expected = 0.5 * 1.5 * PI.powf(1.5) - 0.25 * (PI / 2.0_f64).powf(1.5);
        assert!(
            (e.value - expected).abs() < 1e-3,
            "got {}, want {expected}",
            e.value
        );
        // p = s: the sgn mass part vanishes identically
        assert_eq!(e.parts.mass, 0.0);
        let sum = e.parts.gradient + e.parts.mass + e.parts.potential + e.parts.nonlinear;
        assert!((e.value - sum).abs() <= 1e-12 * e.value.abs().max(1.0));
    }

    #[test]
    fn energy_parts_scale_homogeneously() {
        let grid = grid3();
        let params = Params::new(5, 3.0, 2.0, 4.5, 1.0).unwrap();
        let grid5 = build_grid(5, 12.0, 1200, Grading::Uniform).unwrap();
        let v = potentials::make_potential(
            &PotentialSpec::GaussianBump {
                amplitude: 0.3,
                width: 1.0,
                sign: 1.0,
            },
            Alpha::Infinity,
            &grid5,
            &params,
        )
        .unwrap();
        let u = gaussian_profile(&grid5, 1.0);
        let two = RadialFunction::from_values(
            Arc::clone(&grid5),
            u.values().iter().map(|x| 2.0 * x).collect(),
        )
        .unwrap();
        let e1 = energy_j(&u, &v, &params).unwrap();
        let e2 = energy_j(&two, &v, &params).unwrap();
        let p = params.p();
        let q = params.q();
        assert!((e2.parts.gradient - 2.0_f64.powf(p) * e1.parts.gradient).abs() < 1e-9);
        assert!((e2.parts.mass - 2.0_f64.powf(p) * e1.parts.mass).abs() < 1e-9);
        assert!((e2.parts.potential - 2.0_f64.powf(p) * e1.parts.potential).abs() < 1e-9);
        assert!((e2.parts.nonlinear - 2.0_f64.powf(q) * e1.parts.nonlinear).abs() < 1e-8);
    }

    #[test]
    fn pohozaev_matches_closed_form_for_gaussian() {
        let grid = grid3();
        let params = baseline();
        let v = potentials::zero(&grid);
        let u = gaussian_profile(&grid, 1.0);
        let p = pohozaev_p(&u, &v, &params).unwrap();
        let expected = 1.5 * PI.powf(1.5) - 0.75 * (PI / 2.0_f64).powf(1.5);
        assert!((p - expected).abs() < 1e-3, "got {p}, want {expected}");
        assert_eq!(
            pohozaev_p(&RadialFunction::zero(&grid), &v, &params).unwrap(),
            0.0
        );
    }

    #[test]
    fn pohozaev_equals_dilation_derivative_by_finite_difference() {
        let grid = grid3();
        let params = baseline();
        let v = potentials::zero(&grid);
        let width = 1.0;
        let s = params.s();
        let nd = grid.dim_f();
        let h = 1e-3;
        let j_at = |t: f64| {
            let ut = RadialFunction::sample(&grid, |r| {
                t.powf(nd / s) * (-(t * r) * (t * r) / (2.0 * width * width)).exp()
            })
            .unwrap();
            energy_j(&ut, &v, &params).unwrap().value
        };
        let fd = (j_at(1.0 + h) - j_at(1.0 - h)) / (2.0 * h);
        let u = gaussian_profile(&grid, width);
        let p = pohozaev_p(&u, &v, &params).unwrap();
        assert!(
            (p - fd).abs() <= 1e-4 * (1.0 + p.abs()),
            "P = {p}, FD = {fd}"
        );
    }

    #[test]
    fn pohozaev_requires_wtilde_flag() {
        let grid = grid3();
        let params = baseline();
        // decay too slow for the weighted norm on the whole space
        let v = potentials::make_potential(
            &PotentialSpec::PowerTail {
                amplitude: 0.1,
                decay: 2.0,
                cutoff: 1.0,
            },
            Alpha::Infinity,
            &grid,
            &params,
        )
        .unwrap();
        let u = gaussian_profile(&grid, 1.0);
        assert!(matches!(
            pohozaev_p(&u, &v, &params),
            Err(FunctionalError::WtildeNotIntegrable)
        ));
    }

    #[test]
    fn gn_theta_values() {
        assert!((gn_theta(&baseline()) - 0.75).abs() < 1e-15);
        let p2 = Params::new(4, 2.0, 2.0, 3.0, 1.0).unwrap();
        assert!((gn_theta(&p2) - 2.0 / 3.0).abs() < 1e-15);
        // q near the admissibility floor drives theta toward 0
        let p3 = Params::new(3, 2.0, 2.0, 10.0 / 3.0 + 1e-6, 1.0).unwrap();
        assert!(gn_theta(&p3) < 0.51);
        for params in [
            baseline(),
            Params::new(5, 3.0, 2.0, 4.5, 1.0).unwrap(),
            Params::new(4, 2.0, 1.5, 3.5, 1.0).unwrap(),
        ] {
            let th = gn_theta(&params);
            assert!(th > 0.0 && th < 1.0, "theta out of range: {th}");
            // the mountain-pass geometry needs theta*q > p
            assert!(th * params.q() > params.p());
        }
    }

    #[test]
    fn gn_estimate_dominates_family_and_is_dilation_invariant() {
        let grid = grid3();
        let params = baseline();
        let est = estimate_gn_constant(&params, &grid);
        assert!(!est.certified);
        for width in [0.5, 1.0, 2.0] {
            let q = gn_quotient(&gaussian_profile(&grid, width), &params);
            assert!(est.value >= q, "family member beats estimate: {q}");
        }
        // the quotient is invariant under u -> 2u and dilation
        let u = gaussian_profile(&grid, 1.0);
        let q0 = gn_quotient(&u, &params);
        let doubled = RadialFunction::from_values(
            Arc::clone(&grid),
            u.values().iter().map(|x| 2.0 * x).collect(),
        )
        .unwrap();
        assert!((gn_quotient(&doubled, &params) - q0).abs() < 1e-12);
        let dilated = u.rescale(1.5, params.s()).unwrap();
        assert!((gn_quotient(&dilated, &params) - q0).abs() < 1e-3);
    }

    #[test]
    fn sobolev_estimate_conventions_and_talenti_value() {
        let grid = build_grid(3, 15.0, 2000, Grading::Uniform).unwrap();
        let params = baseline();
        let inf = estimate_sobolev_constant(&params, Alpha::Infinity, &grid).unwrap();
        assert_eq!(inf.value, 1.0);
        assert!(inf.certified);

        let est = estimate_sobolev_constant(&params, Alpha::Finite(1.5), &grid).unwrap();
        // exact Aubin-Talenti value for p = 2, N = 3
        let exact = 3.0 * (PI / 2.0_f64).powf(4.0 / 3.0);
        assert!(!est.certified);
        assert!(
            (est.value - exact).abs() / exact < 0.02,
            "estimate {} vs exact {exact}",
            est.value
        );

        let coarse = build_grid(3, 15.0, 1000, Grading::Uniform).unwrap();
        let est2 = estimate_sobolev_constant(&params, Alpha::Finite(1.5), &coarse).unwrap();
        assert!((est2.value - est.value).abs() / est.value < 0.01);

        assert!(matches!(
            estimate_sobolev_constant(&params, Alpha::Finite(1.0), &grid),
            Err(FunctionalError::AlphaBelowRange { .. })
        ));
    }

    #[test]
    fn multiplier_formula_makes_tested_identity_exact() {
        let grid = grid3();
        let params = baseline();
        let v = potentials::zero(&grid);
        let u = gaussian_profile(&grid, 0.8);
        let lambda = lagrange_multiplier(&u, &v, &params).unwrap();
        let a = dirichlet_pp(&u, params.p());
        let e = weighted_power(&u, params.q());
        let mass = weighted_power(&u, params.s());
        assert!((a + lambda * mass - e).abs() <= 1e-12 * e.abs().max(1.0));
        assert!(matches!(
            lagrange_multiplier(&RadialFunction::zero(&grid), &v, &params),
            Err(FunctionalError::ZeroMass)
        ));
    }

    #[test]
    fn grad_energy_matches_finite_differences() {
        let grid = build_grid(3, 8.0, 120, Grading::Uniform).unwrap();
        let params = Params::new(3, 2.0, 1.5, 4.0, 1.0).unwrap();
        let v = potentials::make_potential(
            &PotentialSpec::GaussianBump {
                amplitude: 0.4,
                width: 2.0,
                sign: -1.0,
            },
            Alpha::Finite(2.0),
            &grid,
            &params,
        )
        .unwrap();
        let u = gaussian_profile(&grid, 1.3);
        let g = grad_energy_j(&u, &v, &params).unwrap();
        let h = 1e-6;
        for idx in [1usize, 7, 40, 80, 118] {
            let mut up = u.clone();
            up.values_mut()[idx] += h;
            let mut dn = u.clone();
            dn.values_mut()[idx] -= h;
            let fd = (energy_j(&up, &v, &params).unwrap().value
                - energy_j(&dn, &v, &params).unwrap().value)
                / (2.0 * h);
            assert!(
                (fd - g[idx]).abs() <= 1e-6 * (1.0 + fd.abs()),
                "node {idx}: fd {fd} vs grad {}",
                g[idx]
            );
        }
    }
}
