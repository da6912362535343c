use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("dimension must satisfy N >= 3, got N = {0}")]
    DimensionTooSmall(u32),
    #[error("exponent p must satisfy 2 <= p < N, got p = {p} with N = {dim}")]
    ExponentPOutOfRange { p: f64, dim: u32 },
    #[error("constraint exponent s must satisfy 1 < s <= p, got s = {s} with p = {p}")]
    ExponentSOutOfRange { s: f64, p: f64 },
    #[error(
        "nonlinearity exponent q must satisfy q > p(N+s)/N = {lower} and q < Np/(N-p) = {upper}, got q = {q}"
    )]
    ExponentQOutOfRange { q: f64, lower: f64, upper: f64 },
    #[error("mass level rho must be positive and finite, got {0}")]
    MassLevelNotPositive(f64),
    #[error("parameter {name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
}

/// The problem quintuple (N, p, s, q, rho) with admissibility enforced at
/// construction: N >= 3, 2 <= p < N, 1 < s <= p, p(N+s)/N < q < Np/(N-p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    dim: u32,
    p: f64,
    s: f64,
    q: f64,
    rho: f64,
    p_star: f64,
}

impl Params {
    pub fn new(dim: u32, p: f64, s: f64, q: f64, rho: f64) -> Result<Self, ParamsError> {
        for (name, value) in [("p", p), ("s", s), ("q", q), ("rho", rho)] {
            if !value.is_finite() {
                return Err(ParamsError::NonFinite { name, value });
            }
        }
        if dim < 3 {
            return Err(ParamsError::DimensionTooSmall(dim));
        }
        let n = f64::from(dim);
        if !(2.0..).contains(&p) || p >= n {
            return Err(ParamsError::ExponentPOutOfRange { p, dim });
        }
        if s <= 1.0 || s > p {
            return Err(ParamsError::ExponentSOutOfRange { s, p });
        }
        let p_star = n * p / (n - p);
        let q_lower = p * (n + s) / n;
        if q <= q_lower || q >= p_star {
            return Err(ParamsError::ExponentQOutOfRange {
                q,
                lower: q_lower,
                upper: p_star,
            });
        }
        if rho <= 0.0 {
            return Err(ParamsError::MassLevelNotPositive(rho));
        }
        Ok(Self {
            dim,
            p,
            s,
            q,
            rho,
            p_star,
        })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn dim_f(&self) -> f64 {
        f64::from(self.dim)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Critical Sobolev exponent Np/(N-p).
    pub fn p_star(&self) -> f64 {
        self.p_star
    }

    /// sign(p - s) with s <= p: equals 0 iff s = p, else 1.
    pub fn sgn_term(&self) -> f64 {
        if self.s < self.p {
            1.0
        } else {
            0.0
        }
    }

    /// Lower admissibility bound p(N+s)/N for the nonlinearity exponent.
    pub fn q_lower_bound(&self) -> f64 {
        self.p * (self.dim_f() + self.s) / self.dim_f()
    }

    /// Same exponents at a different mass level.
    pub fn with_rho(&self, rho: f64) -> Result<Self, ParamsError> {
        Self::new(self.dim, self.p, self.s, self.q, rho)
    }
}

/// Hoelder conjugate t/(t-1).
pub fn conjugate_exponent(t: f64) -> f64 {
    t / (t - 1.0)
}
