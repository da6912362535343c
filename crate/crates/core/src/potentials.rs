//! Radial potentials, their integrability data and the admissibility
//! checker for the norm-smallness hypothesis that the solver relies on.
//!
//! A potential is evaluated once on the solver grid. Alongside the plain
//! L^alpha norm it carries the norm of the composite weight V(.)|.| in the
//! exponent alpha p/(p-1) (sup norms when the exponent is infinite), the
//! pointwise positive/negative part norms, and flags recording when the
//! truncated domain may be masking non-integrability.

use std::sync::Arc;

use thiserror::Error;

use crate::functionals::{pow_abs, Estimate};
use crate::params::Params;
use crate::radial_core::{RadialError, RadialGrid};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Finite(f64),
    Infinity,
}

impl Alpha {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Alpha::Infinity)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Zero,
    GaussianBump {
        amplitude: f64,
        width: f64,
        sign: f64,
    },
    PowerTail {
        amplitude: f64,
        decay: f64,
        cutoff: f64,
    },
    Tabulated {
        rs: Vec<f64>,
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("integrability exponent alpha must satisfy alpha >= N/p = {min}, got {alpha}")]
    AlphaBelowRange { alpha: f64, min: f64 },
    #[error("alpha must be positive and finite, got {0}")]
    BadAlpha(f64),
    #[error("bump width must be positive and finite, got {0}")]
    BadWidth(f64),
    #[error("bump sign must be +1 or -1, got {0}")]
    BadSign(f64),
    #[error("power tail needs positive finite decay and cutoff, got decay = {decay}, cutoff = {cutoff}")]
    BadTail { decay: f64, cutoff: f64 },
    #[error("amplitude must be finite, got {0}")]
    BadAmplitude(f64),
    #[error("tabulated potential needs at least 2 samples, got {0}")]
    TabulatedTooShort(usize),
    #[error("tabulated radii must be strictly increasing and start at or below 0 coverage; violation near entry {index}")]
    TabulatedNotIncreasing { index: usize },
    #[error("tabulated CSV line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Radial(#[from] RadialError),
}

/// Evaluable radial potential with precomputed integrability data.
#[derive(Debug, Clone)]
pub struct Potential {
    grid: Arc<RadialGrid>,
    spec: PotentialSpec,
    alpha: Alpha,
    values: Vec<f64>,
    norm_alpha: f64,
    norm_wtilde: f64,
    norm_plus: f64,
    norm_minus: f64,
    vanishes_at_infinity: bool,
    wtilde_finite: bool,
    flags: Vec<String>,
}

impl Potential {
    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.spec, PotentialSpec::Zero)
    }

    /// ||V||_alpha on the truncated domain.
    pub fn norm_alpha(&self) -> f64 {
        self.norm_alpha
    }

    /// ||V(.)|.| ||_{alpha p/(p-1)} on the truncated domain.
    pub fn norm_wtilde(&self) -> f64 {
        self.norm_wtilde
    }

    pub fn norm_plus(&self) -> f64 {
        self.norm_plus
    }

    pub fn norm_minus(&self) -> f64 {
        self.norm_minus
    }

    pub fn vanishes_at_infinity(&self) -> bool {
        self.vanishes_at_infinity
    }

    pub fn wtilde_finite(&self) -> bool {
        self.wtilde_finite
    }

    pub fn flags(&self) -> &[String] {
        &self.flags
    }

    /// Recomputes both quadrature norms from the stored nodal values
    /// (determinism check for ingested potentials).
    pub fn recompute_norms(&self, params: &Params) -> (f64, f64) {
        let wt_exp = wtilde_exponent(self.alpha, params.p());
        (
            signed_norm(&self.grid, &self.values, self.alpha, |v| v.abs()),
            signed_norm_exp(&self.grid, &self.values, wt_exp, |i, v| {
                (v * self.grid.nodes()[i]).abs()
            }),
        )
    }
}

fn wtilde_exponent(alpha: Alpha, p: f64) -> Alpha {
    match alpha {
        Alpha::Infinity => Alpha::Infinity,
        Alpha::Finite(a) => Alpha::Finite(a * p / (p - 1.0)),
    }
}

fn signed_norm(grid: &RadialGrid, values: &[f64], alpha: Alpha, f: impl Fn(f64) -> f64) -> f64 {
    signed_norm_exp(grid, values, alpha, |_, v| f(v))
}

fn signed_norm_exp(
    grid: &RadialGrid,
    values: &[f64],
    alpha: Alpha,
    f: impl Fn(usize, f64) -> f64,
) -> f64 {
    match alpha {
        Alpha::Infinity => values
            .iter()
            .enumerate()
            .fold(0.0_f64, |m, (i, &v)| m.max(f(i, v))),
        Alpha::Finite(a) => {
            let sum: f64 = grid
                .weights()
                .iter()
                .enumerate()
                .map(|(i, &w)| w * pow_abs(f(i, values[i]), a))
                .sum();
            sum.powf(1.0 / a)
        }
    }
}

/// The zero potential: both norms vanish and every admissibility check is
/// immediate.
pub fn zero(grid: &Arc<RadialGrid>) -> Potential {
    Potential {
        grid: Arc::clone(grid),
        spec: PotentialSpec::Zero,
        alpha: Alpha::Infinity,
        values: vec![0.0; grid.len()],
        norm_alpha: 0.0,
        norm_wtilde: 0.0,
        norm_plus: 0.0,
        norm_minus: 0.0,
        vanishes_at_infinity: true,
        wtilde_finite: true,
        flags: Vec::new(),
    }
}

pub fn make_potential(
    spec: &PotentialSpec,
    alpha: Alpha,
    grid: &Arc<RadialGrid>,
    params: &Params,
) -> Result<Potential, PotentialError> {
    let min_alpha = params.dim_f() / params.p();
    if let Alpha::Finite(a) = alpha {
        if !(a.is_finite() && a > 0.0) {
            return Err(PotentialError::BadAlpha(a));
        }
        if a < min_alpha * (1.0 - 1e-12) {
            return Err(PotentialError::AlphaBelowRange {
                alpha: a,
                min: min_alpha,
            });
        }
    }

    let mut flags = Vec::new();
    let mut wtilde_finite = true;
    let n = params.dim_f();
    let p = params.p();

    let values: Vec<f64> = match spec {
        PotentialSpec::Zero => return Ok(zero(grid)),
        PotentialSpec::GaussianBump {
            amplitude,
            width,
            sign,
        } => {
            if !amplitude.is_finite() {
                return Err(PotentialError::BadAmplitude(*amplitude));
            }
            if !(width.is_finite() && *width > 0.0) {
                return Err(PotentialError::BadWidth(*width));
            }
            if *sign != 1.0 && *sign != -1.0 {
                return Err(PotentialError::BadSign(*sign));
            }
            grid.nodes()
                .iter()
                .map(|&r| sign * amplitude * (-(r / width) * (r / width)).exp())
                .collect()
        }
        PotentialSpec::PowerTail {
            amplitude,
            decay,
            cutoff,
        } => {
            if !amplitude.is_finite() {
                return Err(PotentialError::BadAmplitude(*amplitude));
            }
            if !(decay.is_finite() && *decay > 0.0 && cutoff.is_finite() && *cutoff > 0.0) {
                return Err(PotentialError::BadTail {
                    decay: *decay,
                    cutoff: *cutoff,
                });
            }
            // integrability on the whole space, not just the truncation
            if let Alpha::Finite(a) = alpha {
                if decay * a <= n {
                    flags.push("alpha-norm-masked-by-truncation".to_string());
                }
                let e = a * p / (p - 1.0);
                if (decay - 1.0) * e <= n {
                    flags.push("wtilde-norm-masked-by-truncation".to_string());
                    wtilde_finite = false;
                }
            } else if *decay <= 1.0 {
                // sup of V(r) r grows without bound
                flags.push("wtilde-norm-masked-by-truncation".to_string());
                wtilde_finite = false;
            }
            grid.nodes()
                .iter()
                .map(|&r| amplitude * (1.0 + r / cutoff).powf(-decay))
                .collect()
        }
        PotentialSpec::Tabulated { rs, values } => {
            if rs.len() < 2 || rs.len() != values.len() {
                return Err(PotentialError::TabulatedTooShort(rs.len()));
            }
            for i in 1..rs.len() {
                if !(rs[i] > rs[i - 1]) {
                    return Err(PotentialError::TabulatedNotIncreasing { index: i });
                }
            }
            flags.push("tabulated-known-on-truncation-only".to_string());
            let interp = |r: f64| -> f64 {
                if r <= rs[0] {
                    return values[0];
                }
                if r >= rs[rs.len() - 1] {
                    return values[values.len() - 1];
                }
                let j = rs.partition_point(|&x| x < r).max(1);
                let t = (r - rs[j - 1]) / (rs[j] - rs[j - 1]);
                values[j - 1] * (1.0 - t) + values[j] * t
            };
            grid.nodes().iter().map(|&r| interp(r)).collect()
        }
    };

    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(PotentialError::Radial(RadialError::NonFinite { index }));
    }

    let wt_exp = wtilde_exponent(alpha, p);
    let norm_alpha = signed_norm(grid, &values, alpha, |v| v.abs());
    let norm_wtilde = signed_norm_exp(grid, &values, wt_exp, |i, v| (v * grid.nodes()[i]).abs());
    let norm_plus = signed_norm(grid, &values, alpha, |v| v.max(0.0));
    let norm_minus = signed_norm(grid, &values, alpha, |v| (-v).max(0.0));

    let max_abs = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let vanishes_at_infinity = match spec {
        PotentialSpec::Zero | PotentialSpec::GaussianBump { .. } | PotentialSpec::PowerTail { .. } => {
            true
        }
        PotentialSpec::Tabulated { .. } => {
            values.last().map(|v| v.abs()).unwrap_or(0.0) <= 1e-10 * max_abs.max(1e-300)
        }
    };

    Ok(Potential {
        grid: Arc::clone(grid),
        spec: spec.clone(),
        alpha,
        values,
        norm_alpha,
        norm_wtilde,
        norm_plus,
        norm_minus,
        vanishes_at_infinity,
        wtilde_finite,
        flags,
    })
}

/// Norm of the composite weight V(.)|.| in the exponent alpha p/(p-1).
pub fn wtilde_norm(potential: &Potential, _params: &Params) -> f64 {
    potential.norm_wtilde()
}

/// Parses a two-column UTF-8 CSV "r,value" with strictly increasing radii.
pub fn tabulated_from_csv(text: &str) -> Result<PotentialSpec, PotentialError> {
    let mut rs = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if idx == 0 && trimmed.chars().any(|c| c.is_alphabetic()) {
            continue; // header row
        }
        let mut parts = trimmed.split(',');
        let r: f64 = parts
            .next()
            .unwrap_or("")
            .trim()
            .parse()
            .map_err(|_| PotentialError::Csv {
                line: line_no,
                message: format!("non-numeric radius in {trimmed:?}"),
            })?;
        let v: f64 = parts
            .next()
            .ok_or_else(|| PotentialError::Csv {
                line: line_no,
                message: "missing value column".to_string(),
            })?
            .trim()
            .parse()
            .map_err(|_| PotentialError::Csv {
                line: line_no,
                message: format!("non-numeric value in {trimmed:?}"),
            })?;
        if !r.is_finite() || !v.is_finite() {
            return Err(PotentialError::Csv {
                line: line_no,
                message: "non-finite entry".to_string(),
            });
        }
        if let Some(&prev) = rs.last() {
            if r <= prev {
                return Err(PotentialError::Csv {
                    line: line_no,
                    message: format!("radii not strictly increasing ({prev} then {r})"),
                });
            }
        }
        rs.push(r);
        values.push(v);
    }
    if rs.len() < 2 {
        return Err(PotentialError::TabulatedTooShort(rs.len()));
    }
    Ok(PotentialSpec::Tabulated { rs, values })
}

/// Outcome of the norm-smallness admissibility check. `lhs`/`rhs` follow
/// the stated condition with the S power alpha p/(p-1) on the composite
/// weight term; `lhs_proof_exponent` is the same bound with the S power
/// (p-1)/p that the boundedness argument actually uses. Both are surfaced
/// since the two conventions disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct V1Report {
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_proof_exponent: f64,
    pub norm_alpha: f64,
    pub norm_wtilde: f64,
    pub norm_minus: f64,
    pub s_estimate: f64,
    pub norm_below_s: bool,
    pub vminus_below_s: bool,
    pub pass: bool,
    pub certified: bool,
}

pub fn check_v1(potential: &Potential, params: &Params, s_est: &Estimate) -> V1Report {
    let n = params.dim_f();
    let p = params.p();
    let s = params.s();
    let q = params.q();
    let s_val = s_est.value;

    let (s_pow_wtilde, s_pow_proof) = match potential.alpha() {
        // S_{p,infinity} = 1 by convention, and 1 to any power is 1
        Alpha::Infinity => (1.0, 1.0),
        Alpha::Finite(a) => (
            s_val.powf(-a * p / (p - 1.0)),
            s_val.powf(-(p - 1.0) / p),
        ),
    };
    let s_inv = 1.0 / s_val;
    let coupling = n * (q - p - s).abs().max(1.0) * s_inv * potential.norm_alpha();
    let lhs = s * p * s_pow_wtilde * potential.norm_wtilde() + coupling;
    let lhs_proof_exponent = s * p * s_pow_proof * potential.norm_wtilde() + coupling;
    let rhs = (s * (n / q - (n - p) / p)).min(n * q - p * (n + s));

    let norm_below_s = potential.norm_alpha() < s_val;
    let vminus_below_s = potential.norm_minus() < s_val;
    V1Report {
        lhs,
        rhs,
        lhs_proof_exponent,
        norm_alpha: potential.norm_alpha(),
        norm_wtilde: potential.norm_wtilde(),
        norm_minus: potential.norm_minus(),
        s_estimate: s_val,
        norm_below_s,
        vminus_below_s,
        pass: lhs < rhs && norm_below_s,
        certified: s_est.certified,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_core::{build_grid, Grading};
    use std::f64::consts::PI;

    fn baseline() -> Params {
        Params::new(3, 2.0, 2.0, 4.0, 1.0).unwrap()
    }

    fn grid3() -> Arc<RadialGrid> {
        build_grid(3, 12.0, 2000, Grading::Uniform).unwrap()
    }

    #[test]
    fn zero_potential_has_zero_norms() {
        let grid = grid3();
        let v = zero(&grid);
        assert_eq!(v.norm_alpha(), 0.0);
        assert_eq!(v.norm_wtilde(), 0.0);
        assert!(v.vanishes_at_infinity());
        assert!(v.wtilde_finite());
    }

    #[test]
    fn gaussian_bump_norms() {
        let grid = grid3();
        let params = baseline();
        let spec = PotentialSpec::GaussianBump {
            amplitude: 1.0,
            width: 1.0,
            sign: 1.0,
        };
        let vinf = make_potential(&spec, Alpha::Infinity, &grid, &params).unwrap();
        assert!((vinf.norm_alpha() - 1.0).abs() < 1e-12);

        let v2 = make_potential(&spec, Alpha::Finite(2.0), &grid, &params).unwrap();
        let expected = (PI / 2.0_f64).powf(0.75);
        assert!(
            (v2.norm_alpha() - expected).abs() < 1e-4,
            "got {}, want {expected}",
            v2.norm_alpha()
        );
    }

    #[test]
    fn wtilde_sup_bounded_by_support_bound() {
        let grid = grid3();
        let params = baseline();
        // smooth bump supported in [0, 1]: |V(r) r| <= sup |V| * 1 there
        let rs: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0 * 12.0).collect();
        let values: Vec<f64> = rs
            .iter()
            .map(|&r| if r < 1.0 { (1.0 - r * r).powi(2) } else { 0.0 })
            .collect();
        let v = make_potential(
            &PotentialSpec::Tabulated { rs, values },
            Alpha::Infinity,
            &grid,
            &params,
        )
        .unwrap();
        assert!(v.norm_wtilde() <= v.norm_alpha() * 1.0 + 1e-12);
    }

    #[test]
    fn tabulated_norm_recomputation_is_deterministic() {
        let grid = grid3();
        let params = baseline();
        let rs: Vec<f64> = (0..=50).map(|i| i as f64 * 0.25).collect();
        let values: Vec<f64> = rs.iter().map(|&r| 0.3 * (-r).exp()).collect();
        let v = make_potential(
            &PotentialSpec::Tabulated { rs, values },
            Alpha::Finite(2.0),
            &grid,
            &params,
        )
        .unwrap();
        let (na, nw) = v.recompute_norms(&params);
        assert!((na - v.norm_alpha()).abs() <= 1e-12 * na.max(1.0));
        assert!((nw - v.norm_wtilde()).abs() <= 1e-12 * nw.max(1.0));
    }

    #[test]
    fn power_tail_truncation_masking_is_flagged() {
        let grid = grid3();
        let params = baseline();
        let v = make_potential(
            &PotentialSpec::PowerTail {
                amplitude: 1.0,
                decay: 1.5,
                cutoff: 1.0,
            },
            Alpha::Finite(1.5),
            &grid,
            &params,
        )
        .unwrap();
        assert!(v
            .flags()
            .iter()
            .any(|f| f.contains("alpha-norm-masked")));
        assert!(!v.wtilde_finite());
    }

    #[test]
    fn alpha_below_range_rejected() {
        let grid = grid3();
        let params = baseline();
        let err = make_potential(
            &PotentialSpec::GaussianBump {
                amplitude: 1.0,
                width: 1.0,
                sign: 1.0,
            },
            Alpha::Finite(1.0),
            &grid,
            &params,
        )
        .unwrap_err();
        assert!(matches!(err, PotentialError::AlphaBelowRange { .. }));
    }

    #[test]
    fn v1_zero_potential_passes_and_baseline_rhs_is_half() {
        let grid = grid3();
        let params = baseline();
        let v = zero(&grid);
        let s_est = Estimate {
            value: 1.0,
            certified: true,
        };
        let report = check_v1(&v, &params, &s_est);
        assert_eq!(report.lhs, 0.0);
        assert!((report.rhs - 0.5).abs() < 1e-14);
        assert!(report.pass);
        assert!(report.certified);
    }

    #[test]
    fn v1_rhs_positive_for_admissible_params() {
        for params in [
            baseline(),
            Params::new(5, 3.0, 2.0, 4.5, 1.0).unwrap(),
            Params::new(4, 2.0, 1.5, 3.2, 1.0).unwrap(),
            Params::new(3, 2.0, 1.2, 3.0, 1.0).unwrap(),
        ] {
            let grid = build_grid(params.dim(), 12.0, 200, Grading::Uniform).unwrap();
            let report = check_v1(
                &zero(&grid),
                &params,
                &Estimate {
                    value: 1.0,
                    certified: true,
                },
            );
            assert!(report.rhs > 0.0, "rhs must be positive, got {}", report.rhs);
        }
    }

    #[test]
    fn v1_fails_at_large_amplitude_and_scaling_is_monotone() {
        let grid = grid3();
        let params = baseline();
        let s_est = Estimate {
            value: 1.0,
            certified: true,
        };
        let lhs_at = |amp: f64| {
            let v = make_potential(
                &PotentialSpec::GaussianBump {
                    amplitude: amp,
                    width: 1.0,
                    sign: 1.0,
                },
                Alpha::Infinity,
                &grid,
                &params,
            )
            .unwrap();
            check_v1(&v, &params, &s_est)
        };
        // bisection on the amplitude, using the checker itself as oracle
        let (mut lo, mut hi) = (1e-4, 10.0);
        assert!(lhs_at(lo).pass);
        assert!(!lhs_at(hi).pass);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if lhs_at(mid).pass {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let fail_report = lhs_at(hi);
        assert!(!fail_report.pass && fail_report.lhs >= fail_report.rhs);
        // scaling up never turns fail into pass
        assert!(!lhs_at(hi * 3.0).pass);
        assert!((lhs_at(2.0).lhs - 2.0 * lhs_at(1.0).lhs).abs() < 1e-9);
    }

    #[test]
    fn csv_parsing_rules() {
        let ok = tabulated_from_csv("r,value\n0.0,1.0\n0.5,0.5\n1.0,0.1\n").unwrap();
        match ok {
            PotentialSpec::Tabulated { rs, values } => {
                assert_eq!(rs.len(), 3);
                assert_eq!(values[2], 0.1);
            }
            other => panic!("unexpected spec {other:?}"),
        }
        let err = tabulated_from_csv("0.0,1.0\n0.5,abc\n").unwrap_err();
        match err {
            PotentialError::Csv { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        let err = tabulated_from_csv("0.0,1.0\n0.5,0.4\n0.5,0.3\n").unwrap_err();
        match err {
            PotentialError::Csv { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
