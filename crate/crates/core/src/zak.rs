//! Zak transforms of Hermite windows with certified truncation error.
//!
//! `Z f(x, w) = sum_k f(k - x) e^{2 pi i k w}`, quasi-periodic on the integer
//! lattice: `Z f(x+1, w) = e^{2 pi i w} Z f(x, w)` and `Z f(x, w+1) = Z f(x, w)`.
//! Evaluation always reduces to the fundamental cell `[0,1)^2` first and sums
//! `|k| <= K`, with `K` the smallest truncation whose rigorous tail bound is
//! below the requested tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::windows::{fourier_window, min_truncation, raw_tail_bound, HermiteWindow};

/// Default absolute tolerance for Zak evaluations.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_TERMS: u32 = 10_000;

/// A point `(x, omega)` of the time-frequency plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub omega: f64,
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { x: 0.0, omega: 0.0 };

    pub const fn new(x: f64, omega: f64) -> Self {
        Self { x, omega }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.omega.is_finite()
    }

    /// Image under `D_a = diag(a, 1/a)`.
    pub fn dilate(self, a: f64) -> Self {
        Self::new(self.x * a, self.omega / a)
    }

    /// Image under `D_a^{-1}`.
    pub fn dilate_inv(self, a: f64) -> Self {
        Self::new(self.x / a, self.omega * a)
    }

    /// Componentwise reduction into `[0,1)^2`.
    pub fn wrap_unit(self) -> Self {
        Self::new(frac(self.x), frac(self.omega))
    }

    /// Distance on the torus `R^2 / Z^2`.
    pub fn torus_distance(self, other: Self) -> f64 {
        let dx = self.x - other.x;
        let dw = self.omega - other.omega;
        let dx = dx - dx.round();
        let dw = dw - dw.round();
        dx.hypot(dw)
    }
}

impl std::ops::Add for PlanePoint {
    type Output = PlanePoint;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.omega + rhs.omega)
    }
}

impl std::ops::Sub for PlanePoint {
    type Output = PlanePoint;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.omega - rhs.omega)
    }
}

impl std::ops::Neg for PlanePoint {
    type Output = PlanePoint;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.omega)
    }
}

/// A Zak transform value together with a bound on its truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZakValue {
    pub value: Complex64,
    pub tail: f64,
}

impl ZakValue {
    /// True when `|value| <= tail`, i.e. zero is not excluded.
    pub fn contains_zero(&self) -> bool {
        self.value.norm() <= self.tail
    }
}

/// `t - floor(t)`, clamped into `[0, 1)`.
pub(crate) fn frac(t: f64) -> f64 {
    let r = t - t.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// `e^{2 pi i t}`, exact at quarter turns.
pub fn cis_turns(t: f64) -> Complex64 {
    let r = frac(t);
    if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if r == 0.25 {
        Complex64::new(0.0, 1.0)
    } else if r == 0.5 {
        Complex64::new(-1.0, 0.0)
    } else if r == 0.75 {
        Complex64::new(0.0, -1.0)
    } else {
        let (s, c) = (2.0 * PI * r).sin_cos();
        Complex64::new(c, s)
    }
}

/// Reduces `z` into `[0,1)^2`: `Z f(z) = phase * Z f(z0)`, with
/// `phase = e^{2 pi i floor(x) omega}`.
pub fn reduce_fundamental(z: PlanePoint) -> (PlanePoint, Complex64) {
    let fx = z.x.floor();
    let mut x0 = z.x - fx;
    let mut fx = fx;
    if x0 >= 1.0 {
        x0 = 0.0;
        fx += 1.0;
    }
    let w0 = frac(z.omega);
    (PlanePoint::new(x0, w0), cis_turns(fx * w0))
}

/// Truncated Zak evaluator for one window at one tolerance.
///
/// Construction fixes the truncation `K` once; every evaluation then sums
/// `2K + 1` samples and reports the same tail bound.
#[derive(Debug, Clone)]
pub struct ZakEvaluator {
    window: HermiteWindow,
    terms: u32,
    tail: f64,
}

impl ZakEvaluator {
    pub fn new(window: &HermiteWindow, tol: f64) -> Result<Self> {
        window.require_unchirped("Zak evaluation")?;
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::Precondition(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        let mut best = f64::INFINITY;
        for k in min_truncation(window)..=MAX_TERMS {
            best = best.min(raw_tail_bound(window, k));
            if best < tol {
                return Ok(Self {
                    window: window.clone(),
                    terms: k,
                    tail: best,
                });
            }
        }
        Err(Error::ToleranceUnreachable {
            tol,
            max_terms: MAX_TERMS,
        })
    }

    pub fn window(&self) -> &HermiteWindow {
        &self.window
    }

    /// Truncation index `K`.
    pub fn terms(&self) -> u32 {
        self.terms
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// Samples `w(k - x0)`, `|k| <= K`, for the column through `x`.
    pub fn column(&self, x: f64) -> ZakColumn {
        let (z0, _) = reduce_fundamental(PlanePoint::new(x, 0.0));
        let shift = (x - z0.x).round();
        let k = self.terms as i64;
        let samples = (-k..=k)
            .map(|j| self.window.eval_real(j as f64 - z0.x))
            .collect();
        ZakColumn {
            shift,
            samples,
            terms: self.terms,
            tail: self.tail,
        }
    }

    pub fn eval(&self, z: PlanePoint) -> ZakValue {
        self.column(z.x).at(z.omega)
    }

    /// Value plus `sum |terms|`, the scale of the floating-point rounding error.
    pub fn eval_with_scale(&self, z: PlanePoint) -> (ZakValue, f64) {
        let col = self.column(z.x);
        (col.at(z.omega), col.abs_sum())
    }
}

/// Window samples along one `x` column; cheap to evaluate at many `omega`.
#[derive(Debug, Clone)]
pub struct ZakColumn {
    shift: f64,
    samples: Vec<f64>,
    terms: u32,
    tail: f64,
}

impl ZakColumn {
    pub fn at(&self, omega: f64) -> ZakValue {
        let w0 = frac(omega);
        let k = self.terms as i64;
        let sum: Complex64 = self
            .samples
            .iter()
            .zip(-k..=k)
            .map(|(&s, j)| s * cis_turns(j as f64 * w0))
            .sum();
        ZakValue {
            value: cis_turns(self.shift * w0) * sum,
            tail: self.tail,
        }
    }

    pub fn abs_sum(&self) -> f64 {
        self.samples.iter().map(|s| s.abs()).sum()
    }
}

/// `Z w(z)` with truncation error below `tol`.
pub fn zak(w: &HermiteWindow, z: PlanePoint, tol: f64) -> Result<ZakValue> {
    Ok(ZakEvaluator::new(w, tol)?.eval(z))
}

/// Zak transform of the indicator of `[0, 1)`; a single surviving term.
pub fn zak_indicator(z: PlanePoint) -> Complex64 {
    let k = z.x.ceil();
    cis_turns(k * z.omega)
}

/// `~Z_a f = Z(D_a^{-1} f)`.
pub fn zak_tilde(w: &HermiteWindow, z: PlanePoint, a: f64, tol: f64) -> Result<ZakValue> {
    check_dilation(a)?;
    zak(&w.dilate(1.0 / a)?, z, tol)
}

/// `Z_a f(z) = Z(D_a^{-1} f)(D_a^{-1} z)`, quasi-periodic over `aZ x (1/a)Z`.
pub fn zak_dilated(w: &HermiteWindow, z: PlanePoint, a: f64, tol: f64) -> Result<ZakValue> {
    check_dilation(a)?;
    zak_tilde(w, z.dilate_inv(a), a, tol)
}

pub(crate) fn check_dilation(a: f64) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "dilation must be positive, got {a}"
        )))
    }
}

/// Residual of `Z(M_eta T_xi w)(x, omega) = e^{-2 pi i eta x} Z w(x + xi, omega + eta)`.
///
/// The left side samples `M_eta T_xi w` at `k - x` directly.
pub fn tf_shift_covariance_check(
    w: &HermiteWindow,
    xi: f64,
    eta: f64,
    z: PlanePoint,
    tol: f64,
) -> Result<f64> {
    let ev = ZakEvaluator::new(w, tol)?;
    // centre the summation on the shifted window so the tail bound applies
    let center = (z.x + xi).floor();
    let k_max = ev.terms() as i64;
    let lhs: Complex64 = (-k_max..=k_max)
        .map(|j| {
            let k = center + j as f64;
            let sample = w.eval_real(k - z.x - xi);
            sample * cis_turns(eta * (k - z.x) + k * z.omega)
        })
        .sum();
    let rhs = cis_turns(-eta * z.x) * ev.eval(PlanePoint::new(z.x + xi, z.omega + eta)).value;
    Ok((lhs - rhs).norm())
}

/// Residual of `Z w_hat(x, omega) = e^{2 pi i x omega} Z w(-omega, x)`.
///
/// The form `Z w(omega, -x)` agrees with this only for even windows.
pub fn fourier_zak_check(w: &HermiteWindow, z: PlanePoint, tol: f64) -> Result<f64> {
    let (phase, w_hat) = fourier_window(w)?;
    let lhs = phase * zak(&w_hat, z, tol)?.value;
    let rhs = cis_turns(z.x * z.omega) * zak(w, PlanePoint::new(-z.omega, z.x), tol)?.value;
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn h(n: u32) -> HermiteWindow {
        HermiteWindow::hermite(n).unwrap()
    }

    /// Independent summation with a fixed, generous truncation.
    fn direct_zak(w: &HermiteWindow, z: PlanePoint, k_max: i64) -> Complex64 {
        (-k_max..=k_max)
            .map(|k| {
                let k = k as f64;
                w.eval_real(k - z.x) * Complex64::from_polar(1.0, 2.0 * PI * k * z.omega)
            })
            .sum()
    }

    #[test]
    fn gaussian_at_origin() {
        let v = zak(&h(0), PlanePoint::ORIGIN, DEFAULT_TOL).unwrap();
        let oracle = direct_zak(&h(0), PlanePoint::ORIGIN, 10);
        assert!((v.value - oracle).norm() < 1e-12);
        assert!((v.value.re - 1.291996007481504).abs() < 1e-12);
        assert!(v.tail < DEFAULT_TOL);
    }

    #[test]
    fn parity_zeros() {
        let v = zak(&h(1), PlanePoint::ORIGIN, DEFAULT_TOL).unwrap();
        assert!(v.value.norm() <= v.tail.max(1e-15));
        let v = zak(&h(0), PlanePoint::new(0.5, 0.5), DEFAULT_TOL).unwrap();
        assert!(v.value.norm() <= v.tail.max(1e-15));
    }

    #[test]
    fn indicator_examples() {
        let v = zak_indicator(PlanePoint::new(0.3, 0.7));
        assert!((v - Complex64::from_polar(1.0, 2.0 * PI * 0.7)).norm() < 1e-15);
        assert_eq!(
            zak_indicator(PlanePoint::new(0.5, 0.0)),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(
            zak_indicator(PlanePoint::new(0.9, 0.25)),
            Complex64::new(0.0, 1.0)
        );
    }

    #[test]
    fn reduction_examples() {
        let (z0, ph) = reduce_fundamental(PlanePoint::new(1.25, 0.5));
        assert_eq!(z0, PlanePoint::new(0.25, 0.5));
        assert_eq!(ph, Complex64::new(-1.0, 0.0));

        let (z0, ph) = reduce_fundamental(PlanePoint::new(0.3, 2.7));
        assert!((z0.omega - 0.7).abs() < 1e-15);
        assert_eq!(z0.x, 0.3);
        assert_eq!(ph, Complex64::new(1.0, 0.0));

        let z = PlanePoint::new(-0.75, 0.25);
        let (z0, ph) = reduce_fundamental(z);
        assert_eq!(z0, PlanePoint::new(0.25, 0.25));
        assert_eq!(ph, Complex64::new(0.0, -1.0));
        // oracle: ratio of independently summed values
        let ratio = direct_zak(&h(0), z, 20) / direct_zak(&h(0), z0, 20);
        assert!((ratio - ph).norm() < 1e-13);
    }

    #[test]
    fn tilde_examples() {
        let h2 = h(2);
        let v = zak_tilde(&h2, PlanePoint::new(0.5, 0.0), SQRT2, DEFAULT_TOL).unwrap();
        assert!(v.value.re > 2.0);
        assert_eq!(v.value.im, 0.0);
        let cosine: f64 = (-10i32..=10)
            .map(|k| {
                let k = f64::from(k);
                (1.0 - 2.0 * PI * k * k) * (-PI * k * k / 2.0).exp() * (PI * k).cos()
            })
            .sum::<f64>()
            / SQRT2;
        assert!((v.value.re - cosine).abs() < 1e-12);

        let v0 = zak_tilde(&h2, PlanePoint::ORIGIN, SQRT2, DEFAULT_TOL).unwrap();
        assert!(v0.value.re + v0.tail < 0.0);

        let z = PlanePoint::new(0.37, 0.81);
        for n in 0..4 {
            let a = zak_tilde(&h(n), z, 1.0, DEFAULT_TOL).unwrap();
            let b = zak(&h(n), z, DEFAULT_TOL).unwrap();
            assert_eq!(a.value, b.value);
        }
    }

    #[test]
    fn dilated_tabulated_points() {
        let h3 = h(3);
        let s3 = 3f64.sqrt();
        let cases = [
            (SQRT2, PlanePoint::new(SQRT2 / 2.0, 0.0)),
            (s3, PlanePoint::new(s3 / 3.0, 0.0)),
            (2.0, PlanePoint::new(0.0, 0.25)),
        ];
        for (a, z) in cases {
            let v = zak_dilated(&h3, z, a, DEFAULT_TOL).unwrap();
            assert!(v.value.norm() < 1e-12, "a={a}: {}", v.value);
        }
    }

    #[test]
    fn dilated_matches_scratch_sum() {
        // sqrt(a) sum_k w(a k - x) e^{2 pi i a k omega}
        let z = PlanePoint::new(0.41, 0.13);
        for &a in &[SQRT2, 3f64.sqrt(), 2.0] {
            for n in 0..5 {
                let w = h(n);
                let got = zak_dilated(&w, z, a, DEFAULT_TOL).unwrap();
                let scratch: Complex64 = (-40i32..=40)
                    .map(|k| {
                        let k = f64::from(k);
                        a.sqrt()
                            * w.eval_real(a * k - z.x)
                            * Complex64::from_polar(1.0, 2.0 * PI * a * k * z.omega)
                    })
                    .sum();
                assert!((got.value - scratch).norm() < 2e-12, "a={a} n={n}");
            }
        }
    }

    #[test]
    fn covariance_examples() {
        let r =
            tf_shift_covariance_check(&h(1), 0.5, 0.0, PlanePoint::ORIGIN, DEFAULT_TOL).unwrap();
        assert!(r < 2.0 * DEFAULT_TOL);
        let rhs = zak(&h(1), PlanePoint::new(0.5, 0.0), DEFAULT_TOL).unwrap();
        assert!(rhs.value.norm() < 1e-15);

        let r = tf_shift_covariance_check(&h(0), 0.3, 0.4, PlanePoint::new(0.1, 0.2), DEFAULT_TOL)
            .unwrap();
        assert!(r < 2.0 * DEFAULT_TOL);
    }

    #[test]
    fn fourier_zak_examples() {
        assert!(
            fourier_zak_check(&h(0), PlanePoint::new(0.2, 0.7), DEFAULT_TOL).unwrap()
                < 2.0 * DEFAULT_TOL
        );
        // both sides vanish at an odd parity zero
        let z = PlanePoint::new(0.0, 0.5);
        assert!(fourier_zak_check(&h(1), z, DEFAULT_TOL).unwrap() < 2.0 * DEFAULT_TOL);
        assert!(zak(&h(1), z, DEFAULT_TOL).unwrap().value.norm() < 1e-15);
        assert!(
            zak(&h(1), PlanePoint::new(-0.5, 0.0), DEFAULT_TOL)
                .unwrap()
                .value
                .norm()
                < 1e-15
        );
        // odd windows need the rotation (x, omega) -> (-omega, x)
        for z in [PlanePoint::new(0.3, 0.1), PlanePoint::new(0.5, 0.5)] {
            assert!(fourier_zak_check(&h(1), z, DEFAULT_TOL).unwrap() < 2.0 * DEFAULT_TOL);
        }
        let w = HermiteWindow::dilated_hermite(3, SQRT2).unwrap();
        assert!(
            fourier_zak_check(&w, PlanePoint::new(0.3, 0.1), DEFAULT_TOL).unwrap()
                < 2.0 * DEFAULT_TOL
        );
    }

    #[test]
    fn chirped_and_bad_tolerance_rejected() {
        let w = HermiteWindow::new(1, 1.0, 0.3).unwrap();
        assert!(matches!(
            zak(&w, PlanePoint::ORIGIN, 1e-12),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            zak(&h(0), PlanePoint::ORIGIN, 0.0),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            zak(&h(0), PlanePoint::ORIGIN, f64::NAN),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn real_slices_are_real() {
        for n in 0..6 {
            for i in 0..20 {
                let x = f64::from(i) / 20.0 + 0.013;
                for &w in &[0.0, 0.5, 1.5, -0.5] {
                    let v = zak(&h(n), PlanePoint::new(x, w), DEFAULT_TOL).unwrap();
                    assert!(v.value.im.abs() < 1e-14, "n={n} x={x} w={w}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn quasi_periodicity(n in 0u32..=5, x in -3.0f64..3.0, w in -3.0f64..3.0) {
            let ev = ZakEvaluator::new(&h(n), DEFAULT_TOL).unwrap();
            let base = ev.eval(PlanePoint::new(x, w)).value;
            let shifted_x = ev.eval(PlanePoint::new(x + 1.0, w)).value;
            let shifted_w = ev.eval(PlanePoint::new(x, w + 1.0)).value;
            prop_assert!((shifted_x - cis_turns(w) * base).norm() < 2.0 * DEFAULT_TOL);
            prop_assert!((shifted_w - base).norm() < 2.0 * DEFAULT_TOL);
        }

        #[test]
        fn reduction_phase_consistent(x in -5.0f64..5.0, w in -5.0f64..5.0) {
            let z = PlanePoint::new(x, w);
            let (z0, ph) = reduce_fundamental(z);
            prop_assert!((0.0..1.0).contains(&z0.x) && (0.0..1.0).contains(&z0.omega));
            prop_assert!((ph.norm() - 1.0).abs() < 1e-15);
            let lhs = direct_zak(&h(2), z, 30);
            let rhs = ph * direct_zak(&h(2), z0, 30);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn matches_direct_summation(n in 0u32..=6, x in 0.0f64..1.0, w in 0.0f64..1.0) {
            let v = zak(&h(n), PlanePoint::new(x, w), DEFAULT_TOL).unwrap();
            let oracle = direct_zak(&h(n), PlanePoint::new(x, w), 30);
            prop_assert!((v.value - oracle).norm() < v.tail + 1e-14);
        }
    }
}
