//! Radial discretization on a truncated domain [0, R_max].
//!
//! Integrals of radial functions over R^N reduce to one-dimensional
//! integrals against the measure omega_{N-1} r^{N-1} dr; they are
//! approximated by a composite trapezoid rule with precomputed nonnegative
//! weights. The Dirichlet integral uses the piecewise-linear edge form
//! (profiles are treated as linear on each cell, so |u'| is constant per
//! cell and weighted by the exact shell volume); this keeps the discrete
//! energies convex and well behaved at the origin. Profiles carry a
//! Dirichlet truncation u(R_max) = 0; the tail loss is monitored by the
//! certification layer, not assumed away.

use std::f64::consts::PI;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grading {
    Uniform,
    /// Cell widths grow by the given ratio (> 1 clusters nodes near 0).
    Geometric(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadialError {
    #[error("truncation radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("grid needs at least 16 cells, got {0}")]
    TooFewCells(usize),
    #[error("dimension must satisfy N >= 2, got {0}")]
    BadDimension(u32),
    #[error("geometric grading ratio must be positive and finite, got {0}")]
    BadRatio(f64),
    #[error("radial function does not live on the same grid")]
    GridMismatch,
    #[error("expected {expected} nodal values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("non-finite value at node {index}")]
    NonFinite { index: usize },
    #[error("Dirichlet truncation requires u(R_max) = 0, got {value}")]
    DirichletViolation { value: f64 },
    #[error("norm exponent must satisfy t >= 1, got {0}")]
    BadNormExponent(f64),
    #[error("dilation factor must be positive and finite, got {0}")]
    BadDilation(f64),
    #[error("zero profile admits no retraction onto the mass sphere")]
    ZeroProfile,
}

/// Surface measure of the unit sphere S^{N-1}: 2 pi^{N/2} / Gamma(N/2).
pub fn unit_sphere_area(dim: u32) -> f64 {
    let half = f64::from(dim) / 2.0;
    let (mut gamma, mut x) = if dim % 2 == 0 {
        (1.0, 1.0)
    } else {
        (PI.sqrt(), 0.5)
    };
    while x + 0.5 < half + 0.25 {
        gamma *= x;
        x += 1.0;
    }
    2.0 * PI.powf(half) / gamma
}

/// Truncated radial mesh with quadrature weights for N-dimensional radial
/// integrals. Nodes run r_0 = 0 < r_1 < ... < r_n = R_max.
#[derive(Debug)]
pub struct RadialGrid {
    dim: u32,
    r_max: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    shell_volumes: Vec<f64>,
}

impl RadialGrid {
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn dim_f(&self) -> f64 {
        f64::from(self.dim)
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Exact volumes omega_{N-1} (r_{i+1}^N - r_i^N) / N of the spherical
    /// shells between consecutive nodes (one per cell).
    pub fn shell_volumes(&self) -> &[f64] {
        &self.shell_volumes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn same_as(&self, other: &RadialGrid) -> bool {
        std::ptr::eq(self, other) || (self.dim == other.dim && self.nodes == other.nodes)
    }

    /// Sum of w_i g(r_i), the discrete radial integral of a nodal integrand.
    pub fn integrate(&self, g: &RadialFunction) -> Result<f64, RadialError> {
        if !self.same_as(g.grid()) {
            return Err(RadialError::GridMismatch);
        }
        Ok(self
            .weights
            .iter()
            .zip(g.values())
            .map(|(w, v)| w * v)
            .sum())
    }
}

/// Builds a radial grid with trapezoid quadrature weights against
/// omega_{N-1} r^{N-1} dr.
pub fn build_grid(
    dim: u32,
    r_max: f64,
    n: usize,
    grading: Grading,
) -> Result<Arc<RadialGrid>, RadialError> {
    if dim < 2 {
        return Err(RadialError::BadDimension(dim));
    }
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(RadialError::BadRadius(r_max));
    }
    if n < 16 {
        return Err(RadialError::TooFewCells(n));
    }

    let mut nodes = Vec::with_capacity(n + 1);
    match grading {
        Grading::Uniform => {
            for i in 0..=n {
                nodes.push(r_max * i as f64 / n as f64);
            }
        }
        Grading::Geometric(ratio) => {
            if !(ratio.is_finite() && ratio > 0.0) {
                return Err(RadialError::BadRatio(ratio));
            }
            if (ratio - 1.0).abs() < 1e-12 {
                for i in 0..=n {
                    nodes.push(r_max * i as f64 / n as f64);
                }
            } else {
                // r_i = h0 (ratio^i - 1)/(ratio - 1), scaled so r_n = R_max.
                let denom = ratio.powi(n as i32) - 1.0;
                for i in 0..=n {
                    nodes.push(r_max * (ratio.powi(i as i32) - 1.0) / denom);
                }
            }
        }
    }
    nodes[0] = 0.0;
    nodes[n] = r_max;
    for i in 1..=n {
        if !(nodes[i] > nodes[i - 1]) {
            return Err(RadialError::BadRatio(match grading {
                Grading::Geometric(r) => r,
                Grading::Uniform => 1.0,
            }));
        }
    }

    let area = unit_sphere_area(dim);
    let measure = |r: f64| area * r.powi(dim as i32 - 1);
    let mut weights = vec![0.0; n + 1];
    for i in 0..n {
        let h = nodes[i + 1] - nodes[i];
        weights[i] += 0.5 * h * measure(nodes[i]);
        weights[i + 1] += 0.5 * h * measure(nodes[i + 1]);
    }

    let mut shell_volumes = Vec::with_capacity(n);
    for i in 0..n {
        let v = area * (nodes[i + 1].powi(dim as i32) - nodes[i].powi(dim as i32))
            / f64::from(dim);
        shell_volumes.push(v);
    }

    Ok(Arc::new(RadialGrid {
        dim,
        r_max,
        nodes,
        weights,
        shell_volumes,
    }))
}

/// Rule for the derivative value at the origin node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OriginRule {
    /// Profile treated as even in r: u'(0) = 0. Default.
    EvenProfile,
    /// One-sided second-order difference at r = 0.
    OneSided,
}

/// Nodal values of a radial profile on a grid, with u(R_max) = 0.
#[derive(Debug, Clone)]
pub struct RadialFunction {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

impl RadialFunction {
    pub fn from_values(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self, RadialError> {
        if values.len() != grid.len() {
            return Err(RadialError::LengthMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(RadialError::NonFinite { index });
        }
        let last = *values.last().expect("grid has at least 17 nodes");
        if last != 0.0 {
            return Err(RadialError::DirichletViolation { value: last });
        }
        Ok(Self { grid, values })
    }

    /// Samples f on the nodes; the last node is clamped to 0 (Dirichlet
    /// truncation).
    pub fn sample<F: Fn(f64) -> f64>(grid: &Arc<RadialGrid>, f: F) -> Result<Self, RadialError> {
        let mut values: Vec<f64> = grid.nodes().iter().map(|&r| f(r)).collect();
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(RadialError::NonFinite { index });
        }
        *values.last_mut().unwrap() = 0.0;
        Ok(Self {
            grid: Arc::clone(grid),
            values,
        })
    }

    pub fn zero(grid: &Arc<RadialGrid>) -> Self {
        Self {
            grid: Arc::clone(grid),
            values: vec![0.0; grid.len()],
        }
    }

    pub(crate) fn from_values_unchecked(grid: Arc<RadialGrid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn abs(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    /// (integral of |u|^t)^{1/t}, computed with peak scaling so that large
    /// exponents (Moser ladder rungs) do not overflow.
    pub fn lp_norm(&self, t: f64) -> Result<f64, RadialError> {
        if !(t.is_finite() && t >= 1.0) {
            return Err(RadialError::BadNormExponent(t));
        }
        let peak = self.max_abs();
        if peak == 0.0 {
            return Ok(0.0);
        }
        let sum: f64 = self
            .grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * (v.abs() / peak).powf(t))
            .sum();
        Ok(peak * sum.powf(1.0 / t))
    }

    /// Integral of |u|^t (no root), same scaling safeguards.
    pub fn lp_norm_pow(&self, t: f64) -> Result<f64, RadialError> {
        Ok(self.lp_norm(t)?.powf(t))
    }

    pub fn derivative(&self) -> RadialFunction {
        self.derivative_with(OriginRule::EvenProfile)
    }

    /// Second-order finite differences: three-point central at interior
    /// nodes, one-sided at the boundary nodes. The result is a nodal
    /// integrand, exempt from the Dirichlet truncation invariant.
    pub fn derivative_with(&self, origin: OriginRule) -> RadialFunction {
        let r = self.grid.nodes();
        let u = &self.values;
        let n = u.len() - 1;
        let mut d = vec![0.0; n + 1];

        d[0] = match origin {
            OriginRule::EvenProfile => 0.0,
            OriginRule::OneSided => {
                let h1 = r[1] - r[0];
                let h2 = r[2] - r[1];
                -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * u[0] + (h1 + h2) / (h1 * h2) * u[1]
                    - h1 / (h2 * (h1 + h2)) * u[2]
            }
        };
        for i in 1..n {
            let hm = r[i] - r[i - 1];
            let hp = r[i + 1] - r[i];
            d[i] = -hp / (hm * (hm + hp)) * u[i - 1] + (hp - hm) / (hm * hp) * u[i]
                + hm / (hp * (hm + hp)) * u[i + 1];
        }
        let h1 = r[n - 1] - r[n - 2];
        let h2 = r[n] - r[n - 1];
        d[n] = h2 / (h1 * (h1 + h2)) * u[n - 2] - (h1 + h2) / (h1 * h2) * u[n - 1]
            + (2.0 * h2 + h1) / (h2 * (h1 + h2)) * u[n];

        RadialFunction::from_values_unchecked(Arc::clone(&self.grid), d)
    }

    /// Mass-preserving dilation u^t(r) = t^{N/s} u(t r), evaluated through
    /// monotone cubic interpolation with zero extension beyond R_max.
    pub fn rescale(&self, t: f64, s: f64) -> Result<RadialFunction, RadialError> {
        if !(t.is_finite() && t > 0.0) {
            return Err(RadialError::BadDilation(t));
        }
        let interp = MonotoneCubic::new(self.grid.nodes(), &self.values);
        let amp = t.powf(self.grid.dim_f() / s);
        let mut values = Vec::with_capacity(self.grid.len());
        let mut cursor = 0usize;
        for &r in self.grid.nodes() {
            values.push(amp * interp.eval_advancing(t * r, &mut cursor));
        }
        *values.last_mut().unwrap() = 0.0;
        Ok(RadialFunction::from_values_unchecked(
            Arc::clone(&self.grid),
            values,
        ))
    }

    /// Retraction onto the mass sphere { ||u||_s = rho }.
    pub fn project_sphere(&self, rho: f64, s: f64) -> Result<RadialFunction, RadialError> {
        let norm = self.lp_norm(s)?;
        if norm == 0.0 {
            return Err(RadialError::ZeroProfile);
        }
        let c = rho / norm;
        Ok(RadialFunction::from_values_unchecked(
            Arc::clone(&self.grid),
            self.values.iter().map(|v| c * v).collect(),
        ))
    }
}

/// Shape-preserving cubic Hermite interpolant (Fritsch-Carlson slopes).
/// Evaluation beyond the right endpoint returns 0, matching the zero
/// extension of truncated profiles.
pub(crate) struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ms: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: &[f64], ys: &[f64]) -> Self {
        let n = xs.len();
        assert!(n >= 3 && n == ys.len());
        let mut secants = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            secants.push((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
        }
        let mut ms = vec![0.0; n];
        ms[0] = endpoint_slope(
            xs[1] - xs[0],
            xs[2] - xs[1],
            secants[0],
            secants[1],
        );
        for i in 1..n - 1 {
            let d0 = secants[i - 1];
            let d1 = secants[i];
            if d0 * d1 <= 0.0 {
                ms[i] = 0.0;
            } else {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                ms[i] = (w1 + w2) / (w1 / d0 + w2 / d1);
            }
        }
        ms[n - 1] = endpoint_slope(
            xs[n - 1] - xs[n - 2],
            xs[n - 2] - xs[n - 3],
            secants[n - 2],
            secants[n - 3],
        );
        Self {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            ms,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut cursor = match self
            .xs
            .binary_search_by(|probe| probe.total_cmp(&x))
        {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        self.eval_advancing(x, &mut cursor)
    }

    /// Evaluation for nondecreasing query sequences: the cursor marches
    /// forward instead of re-searching.
    pub fn eval_advancing(&self, x: f64, cursor: &mut usize) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return if x > self.xs[n - 1] { 0.0 } else { self.ys[n - 1] };
        }
        let mut i = (*cursor).min(n - 2);
        if self.xs[i] > x {
            i = 0;
        }
        while self.xs[i + 1] < x {
            i += 1;
        }
        *cursor = i;
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h * h10 * self.ms[i] + h01 * self.ys[i + 1] + h * h11 * self.ms[i + 1]
    }
}

fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 < 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(width: f64) -> impl Fn(f64) -> f64 {
        move |r| (-r * r / (2.0 * width * width)).exp()
    }

    #[test]
    fn sphere_areas_match_closed_forms() {
        assert!((unit_sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((unit_sphere_area(5) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn weight_sum_is_ball_volume() {
        let grid = build_grid(3, 1.0, 1000, Grading::Uniform).unwrap();
        let total: f64 = grid.weights().iter().sum();
        let ball = 4.0 * PI / 3.0;
        assert!((total - ball).abs() / ball < 1e-6);

        let grid2 = build_grid(3, 2.0, 1000, Grading::Uniform).unwrap();
        let total2: f64 = grid2.weights().iter().sum();
        let ball2 = 32.0 * PI / 3.0;
        assert!((total2 - ball2).abs() / ball2 < 1e-6);
    }

    #[test]
    fn geometric_grading_is_strictly_increasing_to_r_max() {
        let grid = build_grid(3, 10.0, 2000, Grading::Geometric(1.002)).unwrap();
        let nodes = grid.nodes();
        assert_eq!(nodes[0], 0.0);
        assert_eq!(*nodes.last().unwrap(), 10.0);
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        // clustering near zero: first cell much smaller than last
        let first = nodes[1] - nodes[0];
        let last = nodes[2000] - nodes[1999];
        assert!(first < last / 10.0);
    }

    #[test]
    fn build_grid_rejects_bad_inputs() {
        assert!(build_grid(3, -1.0, 100, Grading::Uniform).is_err());
        assert!(build_grid(3, 1.0, 8, Grading::Uniform).is_err());
        assert!(build_grid(3, 1.0, 100, Grading::Geometric(0.0)).is_err());
        assert!(build_grid(3, 1.0, 100, Grading::Geometric(-2.0)).is_err());
    }

    #[test]
    fn gaussian_integrals_reproduce_closed_forms() {
        let grid = build_grid(3, 10.0, 2000, Grading::Uniform).unwrap();
        let g1 = RadialFunction::sample(&grid, |r| (-r * r).exp()).unwrap();
        let g2 = RadialFunction::sample(&grid, |r| (-2.0 * r * r).exp()).unwrap();
        let i1 = grid.integrate(&g1).unwrap();
        let i2 = grid.integrate(&g2).unwrap();
        let e1 = PI.powf(1.5);
        let e2 = (PI / 2.0).powf(1.5);
        assert!((i1 - e1).abs() / e1 < 1e-5, "got {i1}, want {e1}");
        assert!((i2 - e2).abs() / e2 < 1e-5, "got {i2}, want {e2}");

        let zero = RadialFunction::zero(&grid);
        assert_eq!(grid.integrate(&zero).unwrap(), 0.0);
    }

    #[test]
    fn integrate_rejects_grid_mismatch() {
        let grid_a = build_grid(3, 10.0, 200, Grading::Uniform).unwrap();
        let grid_b = build_grid(3, 10.0, 201, Grading::Uniform).unwrap();
        let u = RadialFunction::zero(&grid_b);
        assert!(matches!(
            grid_a.integrate(&u),
            Err(RadialError::GridMismatch)
        ));
    }

    #[test]
    fn lp_norms_of_gaussian() {
        let grid = build_grid(3, 12.0, 2000, Grading::Uniform).unwrap();
        let u = RadialFunction::sample(&grid, gaussian(1.0)).unwrap();
        let n2 = u.lp_norm(2.0).unwrap();
        let n4 = u.lp_norm(4.0).unwrap();
        let e2 = PI.powf(0.75);
        let e4 = (PI / 2.0_f64).powf(1.5).powf(0.25);
        assert!((n2 - e2).abs() < 1e-4);
        assert!((n4 - e4).abs() < 1e-4);
        assert_eq!(RadialFunction::zero(&grid).lp_norm(2.0).unwrap(), 0.0);
        assert!(u.lp_norm(0.5).is_err());
    }

    #[test]
    fn high_exponent_norms_do_not_overflow() {
        let grid = build_grid(3, 12.0, 400, Grading::Uniform).unwrap();
        let u = RadialFunction::sample(&grid, |r| 7.0 * gaussian(1.0)(r)).unwrap();
        let n = u.lp_norm(384.0).unwrap();
        assert!(n.is_finite() && n > 0.0 && n < 7.0 * 1.01);
    }

    #[test]
    fn derivative_of_constantish_profile_is_zero() {
        let grid = build_grid(3, 5.0, 64, Grading::Uniform).unwrap();
        let mut values = vec![3.5; grid.len()];
        *values.last_mut().unwrap() = 0.0;
        let u = RadialFunction::from_values_unchecked(Arc::clone(&grid), {
            let mut v = values;
            *v.last_mut().unwrap() = 3.5; // constant everywhere for this check
            v
        });
        let d = u.derivative();
        // interior nodes see the constant; only the boundary stencils touch it
        for (i, &di) in d.values().iter().enumerate() {
            assert!(di.abs() < 1e-12, "node {i}: {di}");
        }
    }

    #[test]
    fn derivative_matches_gaussian_analytic() {
        let grid = build_grid(3, 10.0, 2000, Grading::Uniform).unwrap();
        let u = RadialFunction::sample(&grid, gaussian(1.0)).unwrap();
        let d = u.derivative();
        let mut err = 0.0_f64;
        for (i, &r) in grid.nodes().iter().enumerate().take(grid.len() - 1) {
            let exact = -r * (-r * r / 2.0).exp();
            err = err.max((d.values()[i] - exact).abs());
        }
        assert!(err <= 1e-5, "max error {err}");
        assert_eq!(d.values()[0], 0.0);
    }

    #[test]
    fn one_sided_origin_derivative_exact_on_quadratic() {
        let r_max = 3.0;
        let grid = build_grid(3, r_max, 300, Grading::Uniform).unwrap();
        let u = RadialFunction::sample(&grid, |r| r * (r_max - r)).unwrap();
        let d = u.derivative_with(OriginRule::OneSided);
        assert!((d.values()[0] - r_max).abs() < 1e-9);
    }

    #[test]
    fn derivative_converges_at_second_order() {
        let orders: Vec<f64> = [500usize, 1000]
            .iter()
            .map(|&n| {
                let grid = build_grid(3, 10.0, n, Grading::Uniform).unwrap();
                let u = RadialFunction::sample(&grid, gaussian(1.0)).unwrap();
                let d = u.derivative();
                grid.nodes()
                    .iter()
                    .zip(d.values())
                    .take(n)
                    .map(|(&r, &di)| (di + r * (-r * r / 2.0).exp()).abs())
                    .fold(0.0_f64, f64::max)
            })
            .collect();
        let observed = (orders[0] / orders[1]).log2();
        assert!(observed >= 1.9, "observed order {observed}");
    }

    #[test]
    fn rescale_identity_and_mass_preservation() {
        let grid = build_grid(3, 12.0, 1500, Grading::Uniform).unwrap();
        let u = RadialFunction::sample(&grid, gaussian(1.0)).unwrap();
        let same = u.rescale(1.0, 2.0).unwrap();
        for (a, b) in u.values().iter().zip(same.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let mass0 = u.lp_norm(2.0).unwrap();
        for t in [0.25, 0.5, 2.0, 4.0] {
            let v = u.rescale(t, 2.0).unwrap();
            let mass = v.lp_norm(2.0).unwrap();
            assert!(
                (mass - mass0).abs() / mass0 <= 1e-3,
                "t={t}: mass {mass} vs {mass0}"
            );
        }
        assert!(u.rescale(0.0, 2.0).is_err());
        assert!(u.rescale(-1.0, 2.0).is_err());
    }

    #[test]
    fn rescale_round_trip_is_small_on_smooth_profiles() {
        let grid = build_grid(3, 12.0, 1500, Grading::Uniform).unwrap();
        let u = RadialFunction::sample(&grid, gaussian(1.5)).unwrap();
        let back = u
            .rescale(2.0, 2.0)
            .unwrap()
            .rescale(0.5, 2.0)
            .unwrap();
        let mut err = 0.0_f64;
        for (a, b) in u.values().iter().zip(back.values()) {
            err = err.max((a - b).abs());
        }
        assert!(err <= 1e-3, "round-trip error {err}");
    }

    #[test]
    fn project_sphere_contracts_and_errors_on_zero() {
        let grid = build_grid(3, 12.0, 800, Grading::Uniform).unwrap();
        let u = RadialFunction::sample(&grid, gaussian(1.0)).unwrap();
        let rho = 2.0 * u.lp_norm(2.0).unwrap();
        let v = u.project_sphere(rho, 2.0).unwrap();
        for (a, b) in u.values().iter().zip(v.values()) {
            assert!((2.0 * a - b).abs() < 1e-12);
        }
        let w = v.project_sphere(rho, 2.0).unwrap();
        for (a, b) in v.values().iter().zip(w.values()) {
            assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
        }
        assert!(matches!(
            RadialFunction::zero(&grid).project_sphere(1.0, 2.0),
            Err(RadialError::ZeroProfile)
        ));
    }

    #[test]
    fn from_values_enforces_invariants() {
        let grid = build_grid(3, 5.0, 64, Grading::Uniform).unwrap();
        let mut vals = vec![1.0; grid.len()];
        assert!(matches!(
            RadialFunction::from_values(Arc::clone(&grid), vals.clone()),
            Err(RadialError::DirichletViolation { .. })
        ));
        *vals.last_mut().unwrap() = 0.0;
        assert!(RadialFunction::from_values(Arc::clone(&grid), vals.clone()).is_ok());
        vals[3] = f64::NAN;
        assert!(matches!(
            RadialFunction::from_values(Arc::clone(&grid), vals),
            Err(RadialError::NonFinite { index: 3 })
        ));
    }
}
