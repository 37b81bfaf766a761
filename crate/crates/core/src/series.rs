//! Closed forms for `sum_{n>=N} n^p q^n`, `p = 0, 1, 2`, and the bound on the
//! tail series used in the second-Hermite sign argument.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Start index `N >= 1` and ratio `|q| < 1` of a geometric-type series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeomParams {
    start: u32,
    q: f64,
}

impl GeomParams {
    pub fn new(start: u32, q: f64) -> Result<Self> {
        if start < 1 {
            return Err(Error::Precondition(
                "series start index must be >= 1".into(),
            ));
        }
        if q.is_nan() || q.abs() >= 1.0 {
            return Err(Error::Precondition(format!("|q| must be < 1, got {q}")));
        }
        Ok(Self { start, q })
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// `sum_{n>=N} q^n = q^N / (1 - q)`.
pub fn geom0(p: GeomParams) -> f64 {
    let GeomParams { start, q } = p;
    q.powi(start as i32) / (1.0 - q)
}

/// `sum_{n>=N} n q^n = N q^N / (1 - q) + q^{N+1} / (1 - q)^2`.
pub fn geom1(p: GeomParams) -> f64 {
    let GeomParams { start, q } = p;
    let n = f64::from(start);
    let qn = q.powi(start as i32);
    n * qn / (1.0 - q) + qn * q / ((1.0 - q) * (1.0 - q))
}

/// `sum_{n>=N} n^2 q^n = q^N ((N + (1 - N) q)^2 + q) / (1 - q)^3`.
pub fn geom2(p: GeomParams) -> f64 {
    let GeomParams { start, q } = p;
    let n = f64::from(start);
    let lead = n + (1.0 - n) * q;
    q.powi(start as i32) * (lead * lead + q) / (1.0 - q).powi(3)
}

/// The four-term expansion of `sum_{n>=N} n^2 q^n`, kept to cross-check
/// [`geom2`]:
/// `N^2 q^N/(1-q) + N q^{N+1}/(1-q)^2 + (N+1) q^{N+1}/(1-q)^2 + 2 q^{N+2}/(1-q)^3`.
pub fn geom2_expanded(p: GeomParams) -> f64 {
    let GeomParams { start, q } = p;
    let n = f64::from(start);
    let qn = q.powi(start as i32);
    let d = 1.0 - q;
    n * n * qn / d
        + n * qn * q / (d * d)
        + (n + 1.0) * qn * q / (d * d)
        + 2.0 * qn * q * q / (d * d * d)
}

/// `2 sum_{n>=2} (1 + 2 pi n^2) e^{-pi n}` via the closed forms.
pub fn h2_tail_bound() -> f64 {
    tail_series(-PI)
}

/// `2 sum_{n>=2} (1 + 2 pi n^2) e^{rate n}`; `rate < 0`.
pub(crate) fn tail_series(rate: f64) -> f64 {
    let p = GeomParams {
        start: 2,
        q: rate.exp(),
    };
    2.0 * (geom0(p) + 2.0 * PI * geom2(p))
}
