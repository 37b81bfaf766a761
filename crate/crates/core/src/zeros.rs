//! Zeros of Zak transforms: parity zeros, the known zeros of `Z_a h_{4l+3}`,
//! sign-change certificates on real slices, and grid scans for candidates.

use std::f64::consts::PI;

use serde::Serialize;

use crate::config::COSET_TOL;
use crate::error::{Error, Result};
use crate::par::{map_indices, Exec};
use crate::series::h2_tail_bound;
use crate::windows::HermiteWindow;
use crate::zak::{check_dilation, frac, PlanePoint, ZakEvaluator, DEFAULT_TOL};

/// Tolerance used by real slices and certificates.
pub const SLICE_TOL: f64 = 1e-14;

/// Multiple of `eps * sum |terms|` added to every enclosure to absorb
/// floating-point rounding in the truncated sum.
const ROUNDING_SLACK: f64 = 1e3;

/// Value threshold for reporting a scan minimum as a zero candidate.
const CANDIDATE_THRESHOLD: f64 = 1e-10;
const CANDIDATE_DEDUP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(w: &HermiteWindow) -> Self {
        if w.is_even() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroKind {
    TrivialEven,
    TrivialOdd,
    Tabulated,
    CertifiedSignChange,
    NumericCandidate,
}

impl ZeroKind {
    /// Everything except a bare numerical candidate.
    pub fn is_certified(self) -> bool {
        self != ZeroKind::NumericCandidate
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ZeroKind::TrivialEven => "trivial_even",
            ZeroKind::TrivialOdd => "trivial_odd",
            ZeroKind::Tabulated => "tabulated",
            ZeroKind::CertifiedSignChange => "certified_sign_change",
            ZeroKind::NumericCandidate => "numeric_candidate",
        }
    }
}

/// A located zero of some Zak transform.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroWitness {
    pub point: PlanePoint,
    pub kind: ZeroKind,
    /// Enclosure half-width; 0 for exact zeros.
    pub radius: f64,
    /// Zak variant and window the zero belongs to.
    pub context: String,
}

impl ZeroWitness {
    pub const CSV_HEADER: &'static str = "x,omega,kind,radius";
}

/// Zeros forced by parity, in `[0,1)^2`.
pub fn trivial_zeros(parity: Parity) -> Vec<PlanePoint> {
    match parity {
        Parity::Even => vec![PlanePoint::new(0.5, 0.5)],
        Parity::Odd => vec![
            PlanePoint::new(0.0, 0.0),
            PlanePoint::new(0.5, 0.0),
            PlanePoint::new(0.0, 0.5),
        ],
    }
}

/// Dilations for which the zeros of `Z_a h_{4l+3}` are tabulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TabulatedDilation {
    Sqrt2,
    Sqrt3,
    Two,
}

impl TabulatedDilation {
    pub const ALL: [TabulatedDilation; 3] = [Self::Sqrt2, Self::Sqrt3, Self::Two];

    pub fn value(self) -> f64 {
        match self {
            Self::Sqrt2 => std::f64::consts::SQRT_2,
            Self::Sqrt3 => 3f64.sqrt(),
            Self::Two => 2.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Sqrt2 => "sqrt2",
            Self::Sqrt3 => "sqrt3",
            Self::Two => "2",
        }
    }

    /// Matches a decimal dilation to one of the supported values within 1e-9.
    pub fn from_value(a: f64) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|d| (d.value() - a).abs() <= 1e-9)
            .ok_or_else(|| Error::Unsupported(format!("no tabulated zeros for dilation {a}")))
    }

    /// The five known zeros in the fundamental cell `[0,a) x [0,1/a)`.
    pub fn zeros(self) -> Vec<PlanePoint> {
        let p = PlanePoint::new;
        match self {
            Self::Sqrt2 => {
                let s = std::f64::consts::SQRT_2;
                vec![
                    p(0.0, 0.0),
                    p(s / 2.0, 0.0),
                    p(0.0, 1.0 / (2.0 * s)),
                    p(s / 4.0, 1.0 / (2.0 * s)),
                    p(3.0 * s / 4.0, 1.0 / (2.0 * s)),
                ]
            }
            Self::Sqrt3 => {
                let s = 3f64.sqrt();
                vec![
                    p(0.0, 0.0),
                    p(0.0, 1.0 / (2.0 * s)),
                    p(s / 2.0, 0.0),
                    p(s / 3.0, 0.0),
                    p(2.0 * s / 3.0, 0.0),
                ]
            }
            Self::Two => vec![
                p(0.0, 0.0),
                p(0.0, 0.25),
                p(1.0, 0.0),
                p(0.5, 0.0),
                p(1.5, 0.0),
            ],
        }
    }

    /// The same zeros mapped by `D_a^{-1}` into `[0,1)^2`, i.e. zeros of
    /// `Z(D_a^{-1} h_{4l+3})`.
    pub fn unit_zeros(self) -> Vec<PlanePoint> {
        let a = self.value();
        self.zeros()
            .into_iter()
            .map(|z| z.dilate_inv(a).wrap_unit())
            .collect()
    }
}

/// Known zeros of `Z_a h_{4l+3}` for `a` in `{sqrt 2, sqrt 3, 2}`.
pub fn tabulated_zeros(a: f64) -> Result<Vec<PlanePoint>> {
    Ok(TabulatedDilation::from_value(a)?.zeros())
}

/// Which Zak transform a slice or scan refers to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "variant", content = "a", rename_all = "snake_case")]
pub enum ZakVariant {
    Plain,
    /// `~Z_a f = Z(D_a^{-1} f)`.
    Tilde(f64),
    /// `Z_a f(z) = Z(D_a^{-1} f)(D_a^{-1} z)`.
    Dilated(f64),
}

impl ZakVariant {
    fn check(self) -> Result<()> {
        match self {
            ZakVariant::Plain => Ok(()),
            ZakVariant::Tilde(a) | ZakVariant::Dilated(a) => check_dilation(a),
        }
    }

    /// The window whose plain Zak transform this variant evaluates.
    pub fn effective_window(self, w: &HermiteWindow) -> Result<HermiteWindow> {
        self.check()?;
        match self {
            ZakVariant::Plain => Ok(w.clone()),
            ZakVariant::Tilde(a) | ZakVariant::Dilated(a) => w.dilate(1.0 / a),
        }
    }

    /// Variant coordinates to plain coordinates.
    pub fn to_unit(self, z: PlanePoint) -> PlanePoint {
        match self {
            ZakVariant::Dilated(a) => z.dilate_inv(a),
            _ => z,
        }
    }

    /// Plain coordinates to variant coordinates.
    pub fn from_unit(self, z: PlanePoint) -> PlanePoint {
        match self {
            ZakVariant::Dilated(a) => z.dilate(a),
            _ => z,
        }
    }

    /// Period of real slices in the time coordinate.
    pub fn period(self) -> f64 {
        match self {
            ZakVariant::Dilated(a) => a,
            _ => 1.0,
        }
    }

    pub fn describe(self, w: &HermiteWindow) -> String {
        let base = window_label(w);
        match self {
            ZakVariant::Plain => format!("Z {base}"),
            ZakVariant::Tilde(a) => format!("~Z_{} {base}", dilation_label(a)),
            ZakVariant::Dilated(a) => format!("Z_{} {base}", dilation_label(a)),
        }
    }
}

/// Symbolic label for common dilations (`sqrt2`, `1/sqrt3`, ...).
pub fn dilation_label(a: f64) -> String {
    let named = [
        (1.0, "1"),
        (std::f64::consts::SQRT_2, "sqrt2"),
        (3f64.sqrt(), "sqrt3"),
        (2.0, "2"),
    ];
    for (v, name) in named {
        if (a - v).abs() <= 1e-9 {
            return name.to_string();
        }
        if (a - 1.0 / v).abs() <= 1e-9 {
            return format!("1/{name}");
        }
    }
    format!("{a}")
}

pub fn window_label(w: &HermiteWindow) -> String {
    let mut s = format!("h{}", w.order());
    if w.dilation() != 1.0 {
        s = format!("D_{} {s}", dilation_label(w.dilation()));
    }
    if w.chirp() != 0.0 {
        s.push_str(&format!(" chirp {}", w.chirp()));
    }
    s
}

/// Snaps `z` onto a parity zero of `w` when within the coset tolerance.
fn nearest_trivial(w: &HermiteWindow, z: PlanePoint) -> Option<PlanePoint> {
    trivial_zeros(Parity::of(w))
        .into_iter()
        .find(|t| t.torus_distance(z) <= COSET_TOL)
}

/// Verifies a parity zero by exact cancellation of paired terms.
///
/// The truncated sum at a trivial zero splits into pairs (`k, -k` at
/// `x = 0`, `k, 1 - k` at `x = 1/2`) whose window samples are equal or
/// opposite in exact arithmetic and whose phases are `+-1`. The check
/// confirms the sample symmetry bit-for-bit, so the paired sum is exactly
/// zero rather than small.
pub fn exact_parity_zero(w: &HermiteWindow, z: PlanePoint) -> bool {
    if w.chirp() != 0.0 {
        return false;
    }
    let Some(t) = nearest_trivial(w, z) else {
        return false;
    };
    let sign = w.parity_sign();
    let k_max = 64;
    if t.x == 0.0 {
        // pairs k <-> -k; phases e^{2 pi i k omega} = e^{-2 pi i k omega} for omega in {0, 1/2}
        if sign > 0.0 {
            return false;
        }
        w.eval_real(0.0) == 0.0
            && (1..=k_max).all(|k| {
                let k = f64::from(k);
                w.eval_real(-k) == -w.eval_real(k)
            })
    } else {
        // x = 1/2: pairs k <-> 1-k, samples w(k - 1/2) and w(1/2 - k)
        (1..=k_max).all(|k| {
            let k = f64::from(k);
            let a = w.eval_real(k - 0.5);
            let b = w.eval_real(0.5 - k);
            if t.omega == 0.0 {
                // phases both 1: need b = -a (odd)
                sign < 0.0 && b == -a
            } else {
                // phases (-1)^k and (-1)^{1-k} = -(-1)^k: need b = a (even)
                sign > 0.0 && b == a
            }
        })
    }
}

/// Classifies a point where `|Z w|` does not exceed its error bound.
pub fn classify_zero(w: &HermiteWindow, z: PlanePoint) -> ZeroKind {
    if exact_parity_zero(w, z) {
        return if w.is_even() {
            ZeroKind::TrivialEven
        } else {
            ZeroKind::TrivialOdd
        };
    }
    if w.chirp() == 0.0 && w.order() % 4 == 3 {
        for d in TabulatedDilation::ALL {
            if (w.dilation() * d.value() - 1.0).abs() <= 1e-9
                && d.unit_zeros()
                    .iter()
                    .any(|t| t.torus_distance(z) <= COSET_TOL)
            {
                return ZeroKind::Tabulated;
            }
        }
    }
    ZeroKind::NumericCandidate
}

/// Value of a real slice with its rigorous error radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceValue {
    pub value: f64,
    /// Truncation tail plus rounding slack.
    pub err: f64,
}

impl SliceValue {
    pub fn lower(&self) -> f64 {
        self.value - self.err
    }

    pub fn upper(&self) -> f64 {
        self.value + self.err
    }

    /// `Some(+-1)` when the enclosure excludes zero.
    pub fn sign(&self) -> Option<i8> {
        if self.lower() > 0.0 {
            Some(1)
        } else if self.upper() < 0.0 {
            Some(-1)
        } else {
            None
        }
    }
}

/// A real-valued horizontal slice `x -> Z(x, omega_level)`.
#[derive(Debug, Clone)]
pub struct RealSlice {
    evaluator: ZakEvaluator,
    variant: ZakVariant,
    /// Level in plain coordinates, exactly 0 or 1/2.
    unit_level: f64,
    omega: f64,
    context: String,
}

/// Builds a real slice; `omega_level` must make every phase factor real.
pub fn real_slice(w: &HermiteWindow, variant: ZakVariant, omega_level: f64) -> Result<RealSlice> {
    w.require_unchirped("real slice")?;
    let eff = variant.effective_window(w)?;
    let unit = variant.to_unit(PlanePoint::new(0.0, omega_level)).omega;
    let r = frac(unit + 1e-12);
    let unit_level = if r <= 2e-12 {
        0.0
    } else if (r - 0.5).abs() <= 2e-12 {
        0.5
    } else {
        return Err(Error::Precondition(format!(
            "omega = {omega_level} does not give a real slice for {variant:?}"
        )));
    };
    Ok(RealSlice {
        evaluator: ZakEvaluator::new(&eff, SLICE_TOL)?,
        variant,
        unit_level,
        omega: omega_level,
        context: format!("{} at omega = {omega_level}", variant.describe(w)),
    })
}

impl RealSlice {
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn variant(&self) -> ZakVariant {
        self.variant
    }

    pub fn context(&self) -> &str {
        &self.context
    }

    /// Evaluates at `x` (variant coordinates).
    pub fn eval(&self, x: f64) -> Result<SliceValue> {
        let xu = self.variant.to_unit(PlanePoint::new(x, 0.0)).x;
        let (v, scale) = self
            .evaluator
            .eval_with_scale(PlanePoint::new(xu, self.unit_level));
        if v.value.im.abs() >= 1e-14 {
            return Err(Error::Precondition(format!(
                "slice value at x = {x} is not real (imaginary part {:e})",
                v.value.im
            )));
        }
        Ok(SliceValue {
            value: v.value.re,
            err: v.tail + ROUNDING_SLACK * f64::EPSILON * scale,
        })
    }

    fn sign_at(&self, x: f64) -> Result<(i8, SliceValue)> {
        let v = self.eval(x)?;
        v.sign().map(|s| (s, v)).ok_or(Error::CannotCertify {
            x,
            lo: v.lower(),
            hi: v.upper(),
        })
    }
}

/// One bisection step: the bracket and its endpoint enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BisectionStep {
    pub lo: f64,
    pub hi: f64,
    pub lo_value: SliceValue,
    pub hi_value: SliceValue,
}

/// A certified sign change together with the full bisection trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignChangeCertificate {
    pub witness: ZeroWitness,
    pub lo: f64,
    pub hi: f64,
    pub steps: Vec<BisectionStep>,
}

/// Certifies a zero of a real slice in `[lo, hi]` by bisection on rigorous
/// enclosures.
pub fn certify_sign_change(
    slice: &RealSlice,
    lo: f64,
    hi: f64,
    width_tol: f64,
) -> Result<ZeroWitness> {
    Ok(certify_sign_change_traced(slice, lo, hi, width_tol)?.witness)
}

pub fn certify_sign_change_traced(
    slice: &RealSlice,
    lo: f64,
    hi: f64,
    width_tol: f64,
) -> Result<SignChangeCertificate> {
    if lo.is_nan() || hi.is_nan() || lo >= hi || width_tol.is_nan() || width_tol <= 0.0 {
        return Err(Error::Precondition(format!(
            "need lo < hi and width_tol > 0 (lo = {lo}, hi = {hi}, width_tol = {width_tol})"
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    let (s_lo, mut v_lo) = slice.sign_at(lo)?;
    let (s_hi, mut v_hi) = slice.sign_at(hi)?;
    if s_lo == s_hi {
        return Err(Error::Precondition(format!(
            "no sign change on [{lo}, {hi}]: both enclosures have sign {s_lo}"
        )));
    }
    let mut steps = vec![BisectionStep {
        lo,
        hi,
        lo_value: v_lo,
        hi_value: v_hi,
    }];
    while hi - lo >= width_tol {
        let width = hi - lo;
        // the midpoint can land inside the error band of the root; nudge it
        let probes = [0.5, 0.375, 0.625, 0.25, 0.75];
        let mut decided = None;
        for f in probes {
            let x = lo + f * width;
            if let Ok(found) = slice.sign_at(x) {
                decided = Some((x, found));
                break;
            }
        }
        let Some((x, (s, v))) = decided else {
            let v = slice.eval(lo + 0.5 * width)?;
            return Err(Error::CannotCertify {
                x: lo + 0.5 * width,
                lo: v.lower(),
                hi: v.upper(),
            });
        };
        if x <= lo || x >= hi {
            break;
        }
        if s == s_lo {
            lo = x;
            v_lo = v;
        } else {
            hi = x;
            v_hi = v;
        }
        steps.push(BisectionStep {
            lo,
            hi,
            lo_value: v_lo,
            hi_value: v_hi,
        });
    }
    let mid = 0.5 * (lo + hi);
    Ok(SignChangeCertificate {
        witness: ZeroWitness {
            point: PlanePoint::new(mid, slice.omega),
            kind: ZeroKind::CertifiedSignChange,
            radius: 0.5 * (hi - lo),
            context: slice.context.clone(),
        },
        lo,
        hi,
        steps,
    })
}

/// Certifies every sign change seen between `samples` equally spaced points
/// of `[lo, hi]`. Sample points whose enclosure contains zero are skipped.
pub fn certify_all_sign_changes(
    slice: &RealSlice,
    lo: f64,
    hi: f64,
    samples: usize,
    width_tol: f64,
) -> Result<Vec<SignChangeCertificate>> {
    let samples = samples.max(2);
    let step = (hi - lo) / samples as f64;
    let mut signed = Vec::new();
    for i in 0..samples {
        let x = lo + (i as f64 + 0.5) * step;
        if let Some(s) = slice.eval(x)?.sign() {
            signed.push((x, s));
        }
    }
    signed
        .windows(2)
        .filter(|p| p[0].1 != p[1].1)
        .map(|p| certify_sign_change_traced(slice, p[0].0, p[1].0, width_tol))
        .collect()
}

/// One verified inequality with its margin (positive when it holds).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub label: &'static str,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub checks: Vec<InequalityCheck>,
}

impl InequalityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// The inequalities that force a sign change of `~Z_{sqrt2} h_2(., 0)` on
/// `(0, 1/2)`.
pub fn h2_inequality_check() -> Result<InequalityReport> {
    let e = (-PI / 2.0).exp();
    let gt = |label, value: f64, bound: f64| InequalityCheck {
        label,
        value,
        bound,
        margin: value - bound,
        holds: value > bound,
    };
    let lt = |label, value: f64, bound: f64| InequalityCheck {
        label,
        value,
        bound,
        margin: bound - value,
        holds: value < bound,
    };

    let h2 = HermiteWindow::hermite(2)?;
    let slice = real_slice(&h2, ZakVariant::Tilde(std::f64::consts::SQRT_2), 0.0)?;
    let at0 = slice.eval(0.0)?;
    let scaled = std::f64::consts::SQRT_2 * at0.value;
    let scaled_upper = std::f64::consts::SQRT_2 * at0.upper();

    Ok(InequalityReport {
        checks: vec![
            gt("exp(-pi/2) > 1/5", e, 0.2),
            lt(
                "2 sum_{n>=2} (1 + 2 pi n^2) exp(-pi n) < 0.11",
                h2_tail_bound(),
                0.11,
            ),
            gt(
                "1 + 2 (2 pi - 1) exp(-pi/2) > 3",
                1.0 + 2.0 * (2.0 * PI - 1.0) * e,
                3.0,
            ),
            InequalityCheck {
                label: "sqrt(2) ~Z_sqrt2 h2 (0, 0) < 0",
                value: scaled,
                bound: 0.0,
                margin: -scaled_upper,
                holds: scaled_upper < 0.0,
            },
        ],
    })
}

/// Grid scan of `|Z|^2` over the fundamental cell followed by local pattern
/// search from every discrete local minimum.
pub fn scan_zero_candidates(
    w: &HermiteWindow,
    variant: ZakVariant,
    grid_n: usize,
) -> Result<Vec<ZeroWitness>> {
    scan_zero_candidates_with(w, variant, grid_n, Exec::default())
}

pub fn scan_zero_candidates_with(
    w: &HermiteWindow,
    variant: ZakVariant,
    grid_n: usize,
    exec: Exec,
) -> Result<Vec<ZeroWitness>> {
    w.require_unchirped("zero scan")?;
    if grid_n < 4 {
        return Err(Error::Precondition(format!("grid_n = {grid_n} too small")));
    }
    let eff = variant.effective_window(w)?;
    let ev = ZakEvaluator::new(&eff, DEFAULT_TOL)?;
    let n = grid_n;
    let h = 1.0 / n as f64;

    // values[i * n + j] = |Z(i h, j h)|^2
    let columns = map_indices(exec, n, |i| {
        let col = ev.column(i as f64 * h);
        (0..n)
            .map(|j| col.at(j as f64 * h).value.norm_sqr())
            .collect::<Vec<f64>>()
    });
    let at = |i: usize, j: usize| columns[i % n][j % n];

    let mut minima = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = at(i, j);
            let is_min = (0..3).all(|di| {
                (0..3).all(|dj| (di == 1 && dj == 1) || v <= at(i + n + di - 1, j + n + dj - 1))
            });
            if is_min {
                minima.push(PlanePoint::new(i as f64 * h, j as f64 * h));
            }
        }
    }

    let objective = |z: PlanePoint| ev.eval(z).value.norm_sqr();
    let refined = map_indices(exec, minima.len(), |k| {
        pattern_search(&objective, minima[k], h, 1e-13)
    });

    let mut found: Vec<(PlanePoint, f64)> = Vec::new();
    for (z, v) in refined {
        if v >= CANDIDATE_THRESHOLD {
            continue;
        }
        let z = snap_unit(z);
        match found
            .iter_mut()
            .find(|(p, _)| p.torus_distance(z) < CANDIDATE_DEDUP)
        {
            Some(existing) if v < existing.1 => *existing = (z, v),
            Some(_) => {}
            None => found.push((z, v)),
        }
    }
    found.sort_by(|a, b| {
        (a.0.omega, a.0.x)
            .partial_cmp(&(b.0.omega, b.0.x))
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let context = variant.describe(w);
    Ok(found
        .into_iter()
        .map(|(z, _)| ZeroWitness {
            point: variant.from_unit(z),
            kind: ZeroKind::NumericCandidate,
            radius: 0.0,
            context: context.clone(),
        })
        .collect())
}

/// Wraps into `[0,1)^2` and maps coordinates within 1e-10 of 1 to 0.
fn snap_unit(z: PlanePoint) -> PlanePoint {
    let snap = |t: f64| {
        let t = frac(t);
        if t > 1.0 - 1e-10 {
            0.0
        } else {
            t
        }
    };
    PlanePoint::new(snap(z.x), snap(z.omega))
}

/// Compass search over the eight axis and diagonal directions with step
/// halving from `step` down to `min_step`.
pub(crate) fn pattern_search<F>(
    f: &F,
    start: PlanePoint,
    step: f64,
    min_step: f64,
) -> (PlanePoint, f64)
where
    F: Fn(PlanePoint) -> f64,
{
    const DIRS: [(f64, f64); 8] = [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (1.0, 1.0),
        (1.0, -1.0),
        (-1.0, 1.0),
        (-1.0, -1.0),
    ];
    let mut best = start;
    let mut best_v = f(start);
    let mut h = step;
    let mut iterations = 0;
    while h >= min_step && iterations < 20_000 {
        iterations += 1;
        let mut improved = false;
        for (dx, dw) in DIRS {
            let cand = PlanePoint::new(best.x + dx * h, best.omega + dw * h);
            let v = f(cand);
            if v < best_v {
                best = cand;
                best_v = v;
                improved = true;
                break;
            }
        }
        if !improved {
            h *= 0.5;
        }
        if best_v == 0.0 {
            break;
        }
    }
    (best, best_v)
}
