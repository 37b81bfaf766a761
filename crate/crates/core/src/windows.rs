//! Hermite windows.
//!
//! The n-th Hermite function is written as `h_n(t) = p_n(t) e^{-pi t^2}` with
//! `p_n` built from the Rodrigues form
//! `h_n(t) = (-1)^n C_n e^{pi t^2} d^n/dt^n e^{-2 pi t^2}`,
//! `C_n = 2^{1/4} / sqrt(n! (2 pi)^n 2^n)`, which makes `||h_n||_2 = 1` and
//! `F h_n = (-i)^n h_n` for `F f(y) = int f(t) e^{-2 pi i y t} dt`.
//!
//! Differentiating `q(t) e^{-2 pi t^2}` gives `(q' - 4 pi t q) e^{-2 pi t^2}`.
//! Writing the coefficient of `t^j` after `n` steps as `a_{n,j} (4 pi)^{(n+j)/2}`
//! turns the recurrence into the integer recurrence
//! `a_{n+1,j} = (j+1) a_{n,j+1} - a_{n,j-1}`, which is carried out exactly with
//! big integers. The normalisation then collapses to
//! `p_n[j] = (-1)^n 2^{1/4} a_{n,j} (4 pi)^{j/2} / sqrt(n!)`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported Hermite order.
pub const MAX_ORDER: u32 = 60;

/// Polynomial factor of a Hermite function, `h_n(t) = p_n(t) e^{-pi t^2}`.
///
/// Coefficients are stored in ascending powers of `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermitePoly {
    order: u32,
    coeffs: Vec<f64>,
}

impl GaussHermitePoly {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Horner evaluation of `p_n(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// Envelope `sum |c_j| t^j`, which dominates `|p_n(t')|` for `|t'| <= t`.
    pub fn envelope(&self, t: f64) -> f64 {
        let t = t.abs();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * t + c.abs())
    }
}

/// Builds `p_n` by the exact Rodrigues recurrence.
pub fn build_poly(order: u32) -> Result<GaussHermitePoly> {
    if order > MAX_ORDER {
        return Err(Error::OrderOutOfRange {
            order,
            max: MAX_ORDER,
        });
    }
    let n = order as usize;
    // a[j] is the integer part of the t^j coefficient in front of e^{-2 pi t^2}.
    let mut a: Vec<BigInt> = vec![BigInt::from(1)];
    for _ in 0..n {
        let mut next = vec![BigInt::zero(); a.len() + 1];
        for (j, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // derivative: j a_j t^{j-1}
            if j > 0 {
                next[j - 1] += c * BigInt::from(j);
            }
            // -4 pi t q: the (4 pi) factor is absorbed by the exponent bookkeeping
            next[j + 1] -= c;
        }
        a = next;
    }

    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    let inv_sqrt_fact = (-0.5 * log_fact).exp();
    let base = sign * 2f64.powf(0.25) * inv_sqrt_fact;
    let four_pi = 4.0 * PI;

    let coeffs = a
        .iter()
        .enumerate()
        .map(|(j, c)| {
            if c.is_zero() {
                return Ok(0.0);
            }
            let c = c
                .to_f64()
                .filter(|v| v.is_finite())
                .ok_or(Error::OrderOutOfRange {
                    order,
                    max: MAX_ORDER,
                })?;
            let value = base * c * four_pi.powf(j as f64 / 2.0);
            if value.is_finite() {
                Ok(value)
            } else {
                Err(Error::OrderOutOfRange {
                    order,
                    max: MAX_ORDER,
                })
            }
        })
        .collect::<Result<Vec<f64>>>()?;

    Ok(GaussHermitePoly { order, coeffs })
}

/// A dilated and chirped Hermite window
/// `t -> a^{-1/2} h_n(t/a) e^{pi i s t^2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteWindow {
    order: u32,
    dilation: f64,
    chirp: f64,
    poly: GaussHermitePoly,
}

/// Plain-data description of a window, used in reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowSpec {
    pub order: u32,
    pub dilation: f64,
    pub chirp: f64,
}

impl HermiteWindow {
    pub fn new(order: u32, dilation: f64, chirp: f64) -> Result<Self> {
        if !(dilation.is_finite() && dilation > 0.0) {
            return Err(Error::Precondition(format!(
                "dilation must be positive and finite, got {dilation}"
            )));
        }
        if !chirp.is_finite() {
            return Err(Error::Precondition(format!(
                "chirp must be finite, got {chirp}"
            )));
        }
        Ok(Self {
            order,
            dilation,
            chirp,
            poly: build_poly(order)?,
        })
    }

    /// The undilated, unchirped `h_n`.
    pub fn hermite(order: u32) -> Result<Self> {
        Self::new(order, 1.0, 0.0)
    }

    /// `D_a h_n`.
    pub fn dilated_hermite(order: u32, dilation: f64) -> Result<Self> {
        Self::new(order, dilation, 0.0)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dilation(&self) -> f64 {
        self.dilation
    }

    pub fn chirp(&self) -> f64 {
        self.chirp
    }

    pub fn poly(&self) -> &GaussHermitePoly {
        &self.poly
    }

    pub fn spec(&self) -> WindowSpec {
        WindowSpec {
            order: self.order,
            dilation: self.dilation,
            chirp: self.chirp,
        }
    }

    /// `(-1)^n`.
    pub fn parity_sign(&self) -> f64 {
        if self.order % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn is_even(&self) -> bool {
        self.order % 2 == 0
    }

    /// Composes with a further dilation: `D_c (D_a h_n) = D_{ac} h_n`.
    pub fn dilate(&self, factor: f64) -> Result<Self> {
        Self::new(self.order, self.dilation * factor, self.chirp)
    }

    pub(crate) fn require_unchirped(&self, what: &str) -> Result<()> {
        if self.chirp != 0.0 {
            return Err(Error::Unsupported(format!(
                "{what} requires an unchirped window (chirp = {})",
                self.chirp
            )));
        }
        Ok(())
    }

    /// Real value of the window, ignoring the chirp factor.
    pub fn eval_real(&self, t: f64) -> f64 {
        let u = t / self.dilation;
        self.poly.eval(u) * (-PI * u * u).exp() / self.dilation.sqrt()
    }

    /// Full complex value including the chirp factor.
    pub fn eval(&self, t: f64) -> Complex64 {
        let re = self.eval_real(t);
        if self.chirp == 0.0 {
            Complex64::new(re, 0.0)
        } else {
            re * Complex64::from_polar(1.0, PI * self.chirp * t * t)
        }
    }

    /// `a^{-1/2} env(t/a) e^{-pi (t/a)^2}`.
    fn envelope_at(&self, t: f64) -> f64 {
        let u = t / self.dilation;
        self.poly.envelope(u) * (-PI * u * u).exp() / self.dilation.sqrt()
    }
}

/// Evaluates a window at `t`.
pub fn eval_window(w: &HermiteWindow, t: f64) -> Complex64 {
    w.eval(t)
}

/// Fourier transform of an unchirped dilated Hermite window:
/// `F(D_a h_n) = (-i)^n D_{1/a} h_n`.
pub fn fourier_window(w: &HermiteWindow) -> Result<(Complex64, HermiteWindow)> {
    w.require_unchirped("Fourier transform")?;
    let phase = match w.order % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    Ok((phase, HermiteWindow::new(w.order, 1.0 / w.dilation, 0.0)?))
}

/// Smallest admissible truncation index for [`tail_bound`].
pub fn min_truncation(w: &HermiteWindow) -> u32 {
    w.order + 2
}

/// Single-`K` bound on `sum_{|k|>K} |w(k - x)|` for `x` in `[0, 1)`.
///
/// Every sample point satisfies `|k - x| >= T + j`, `j = 0, 1, ...`, with
/// `T = K - 1` on both sides of the origin. For `u >= T`:
///  - `p(u/a) <= env(T/a) (u/T)^n <= env(T/a) e^{n (u-T)/T}`,
///  - `e^{-pi (u/a)^2} <= e^{-pi (T/a)^2} e^{-2 pi (T/a^2) (u-T)}`,
///
/// so each side is dominated by a geometric series with ratio
/// `rho = exp(n/T - 2 pi T / a^2)`.
pub(crate) fn raw_tail_bound(w: &HermiteWindow, k: u32) -> f64 {
    let t = f64::from(k) - 1.0;
    let a = w.dilation;
    let rho = (f64::from(w.order) / t - 2.0 * PI * t / (a * a)).exp();
    if rho.is_nan() || rho >= 1.0 {
        return f64::INFINITY;
    }
    2.0 * w.envelope_at(t) / (1.0 - rho)
}

/// Rigorous bound on the truncated part of the Zak series,
/// `sum_{|k| > K} |w(k - x)| <= tail_bound(w, x, K)` for `x` in `[0, 1)`.
///
/// The bound is made monotone in `K` by taking the minimum over all
/// admissible truncations up to `K`.
pub fn tail_bound(w: &HermiteWindow, x: f64, k: u32) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Precondition(format!("x = {x} must lie in [0, 1)")));
    }
    let k_min = min_truncation(w);
    if k < k_min {
        return Err(Error::Precondition(format!(
            "truncation K = {k} below the minimum {k_min} for order {}",
            w.order
        )));
    }
    Ok((k_min..=k)
        .map(|kk| raw_tail_bound(w, kk))
        .fold(f64::INFINITY, f64::min))
}
