//! The Zak multiplier of integer-oversampled Gabor systems over `Z^2`-cosets,
//! frame-bound estimates and non-frame certificates.

use num_complex::Complex64;
use serde::Serialize;

use crate::config::PeriodicConfig;
use crate::error::{Error, Result};
use crate::par::{map_indices, Exec};
use crate::quad::adaptive_simpson;
use crate::windows::HermiteWindow;
use crate::zak::{cis_turns, PlanePoint, ZakColumn, ZakEvaluator};
use crate::zeros::{
    classify_zero, trivial_zeros, window_label, Parity, TabulatedDilation, ZeroWitness,
};

/// Tolerance used when certifying individual Zak zeros.
pub const CERTIFY_TOL: f64 = 1e-14;

/// Smallest grid accepted by [`frame_bounds`].
pub const MIN_GRID: usize = 64;

pub const DEFAULT_GRID: usize = 512;

const REFINE_STARTS: usize = 10;
const REFINE_MIN_STEP: f64 = 1e-10;
const ROUNDING_SLACK: f64 = 1e3;
const ORACLE_QUAD_TOL: f64 = 1e-10;
const ORACLE_PANELS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Frame,
    NotFrameCertified,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Frame => "frame",
            Verdict::NotFrameCertified => "not_frame_certified",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameDiagnostic {
    pub verdict: Verdict,
    pub multiplier_min: f64,
    pub multiplier_max: f64,
    /// Location of `multiplier_min`; the certified zero when there is one.
    pub argmin: PlanePoint,
    pub witnesses: Vec<ZeroWitness>,
    pub grid_n: usize,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl FrameDiagnostic {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// `sum_m |Z w(z + z_m)|^2` with its propagated error.
struct Multiplier {
    ev: ZakEvaluator,
    shifts: Vec<PlanePoint>,
}

impl Multiplier {
    fn new(w: &HermiteWindow, shifts: &[PlanePoint], tol: f64) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::DegenerateConfig("no shifts given".into()));
        }
        Ok(Self {
            ev: ZakEvaluator::new(w, tol)?,
            shifts: shifts.to_vec(),
        })
    }

    /// Per-shift columns through `x + x_m` with their error radii.
    fn columns(&self, x: f64) -> Vec<(ZakColumn, f64)> {
        self.shifts
            .iter()
            .map(|s| {
                let col = self.ev.column(x + s.x);
                let r = self.ev.tail() + ROUNDING_SLACK * f64::EPSILON * col.abs_sum();
                (col, r)
            })
            .collect()
    }

    fn combine(&self, cols: &[(ZakColumn, f64)], omega: f64) -> (f64, f64) {
        cols.iter()
            .zip(&self.shifts)
            .fold((0.0, 0.0), |(v, e), ((col, r), s)| {
                let z = col.at(omega + s.omega).value.norm();
                (v + z * z, e + 2.0 * z * r + r * r)
            })
    }

    fn eval(&self, z: PlanePoint) -> (f64, f64) {
        self.combine(&self.columns(z.x), z.omega)
    }
}

/// The multiplier `sum_m |Z w(z + z_m)|^2` and the bound
/// `sum_m (2 |v_m| r_m + r_m^2)` on its error, where `r_m` is the truncation
/// tail plus rounding slack.
pub fn multiplier(
    w: &HermiteWindow,
    shifts: &[PlanePoint],
    z: PlanePoint,
    tol: f64,
) -> Result<(f64, f64)> {
    Ok(Multiplier::new(w, shifts, tol)?.eval(z))
}

fn require_integer(c: &PeriodicConfig) -> Result<()> {
    if c.lattice().is_integer(1e-12) {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "frame bounds need the integer lattice; map other lattices by a dilation first".into(),
        ))
    }
}

/// Known zeros of `Z w` that can be certified exactly.
fn known_zeros(w: &HermiteWindow) -> Vec<PlanePoint> {
    let mut zs = trivial_zeros(Parity::of(w));
    if w.order() % 4 == 3 {
        for d in TabulatedDilation::ALL {
            if (w.dilation() * d.value() - 1.0).abs() <= 1e-9 {
                zs.extend(d.unit_zeros());
            }
        }
    }
    zs
}

fn shift_witnesses(w: &HermiteWindow, m: &Multiplier, z: PlanePoint) -> Vec<ZeroWitness> {
    let cols = m.columns(z.x);
    m.shifts
        .iter()
        .zip(&cols)
        .map(|(s, (_, r))| {
            let p = (z + *s).wrap_unit();
            ZeroWitness {
                point: p,
                kind: classify_zero(w, p),
                radius: *r,
                context: format!("Z {}", window_label(w)),
            }
        })
        .collect()
}

/// Estimates the optimal frame bounds by a grid scan with local refinement.
pub fn frame_bounds(
    w: &HermiteWindow,
    c: &PeriodicConfig,
    grid_n: usize,
    tol: f64,
) -> Result<FrameDiagnostic> {
    frame_bounds_with(w, c, grid_n, tol, Exec::default())
}

pub fn frame_bounds_with(
    w: &HermiteWindow,
    c: &PeriodicConfig,
    grid_n: usize,
    tol: f64,
    exec: Exec,
) -> Result<FrameDiagnostic> {
    require_integer(c)?;
    if grid_n < MIN_GRID {
        return Err(Error::Precondition(format!(
            "grid_n = {grid_n} is below {MIN_GRID}"
        )));
    }
    let m = Multiplier::new(w, &c.effective_shifts(), tol)?;
    let n = grid_n;
    let h = 1.0 / n as f64;
    let mid = |i: usize| (i as f64 + 0.5) * h;

    let grid: Vec<(f64, f64)> = map_indices(exec, n, |i| {
        let cols = m.columns(mid(i));
        (0..n).map(|j| m.combine(&cols, mid(j))).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();

    let max_err = grid.iter().map(|g| g.1).fold(0.0, f64::max);
    let mut multiplier_max = grid.iter().map(|g| g.0).fold(0.0, f64::max);

    // (value, err, point) for every point that may carry the minimum
    let mut points: Vec<(f64, f64, PlanePoint)> = Vec::new();
    for s in &m.shifts {
        points.push((0.0, 0.0, (-*s).wrap_unit()));
        for k in known_zeros(w) {
            points.push((0.0, 0.0, (k - *s).wrap_unit()));
        }
    }
    for p in &mut points {
        let (v, e) = m.eval(p.2);
        p.0 = v;
        p.1 = e;
    }

    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[a].0.total_cmp(&grid[b].0).then(a.cmp(&b)));
    let starts: Vec<PlanePoint> = order
        .iter()
        .take(REFINE_STARTS)
        .map(|&k| PlanePoint::new(mid(k / n), mid(k % n)))
        .collect();
    let refined = map_indices(exec, starts.len(), |k| coordinate_descent(&m, starts[k], h));
    points.extend(refined);
    for (k, g) in grid.iter().enumerate() {
        points.push((g.0, g.1, PlanePoint::new(mid(k / n), mid(k % n))));
    }
    multiplier_max = points.iter().map(|p| p.0).fold(multiplier_max, f64::max);

    // certified zero: value within its error and every z + z_m a certified zero of Z w
    let mut certified = None;
    for p in &points {
        if p.0 <= p.1 {
            let witnesses = shift_witnesses(w, &m, p.2);
            if witnesses.iter().all(|wt| wt.kind.is_certified()) {
                certified = Some((p.0, p.2, witnesses));
                break;
            }
        }
    }

    let (best_v, _, best_z) = points
        .iter()
        .copied()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("grid is non-empty");

    let (verdict, multiplier_min, argmin, witnesses) = match certified {
        Some((v, z, wt)) => (Verdict::NotFrameCertified, v, z, wt),
        None if best_v > 10.0 * max_err => (Verdict::Frame, best_v, best_z, Vec::new()),
        None => (Verdict::Inconclusive, best_v, best_z, Vec::new()),
    };
    Ok(FrameDiagnostic {
        verdict,
        multiplier_min,
        multiplier_max,
        argmin: argmin.wrap_unit(),
        witnesses,
        grid_n,
        tol,
        seed: None,
    })
}

/// Alternating axis moves with step halving from `step` to 1e-10.
fn coordinate_descent(m: &Multiplier, start: PlanePoint, step: f64) -> (f64, f64, PlanePoint) {
    let mut z = start;
    let (mut v, mut e) = m.eval(z);
    let mut h = step;
    while h >= REFINE_MIN_STEP {
        let mut moved = false;
        for d in [
            PlanePoint::new(h, 0.0),
            PlanePoint::new(-h, 0.0),
            PlanePoint::new(0.0, h),
            PlanePoint::new(0.0, -h),
        ] {
            let cand = z + d;
            let (cv, ce) = m.eval(cand);
            if cv < v {
                (z, v, e) = (cand, cv, ce);
                moved = true;
                break;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    (v, e, z.wrap_unit())
}

/// Certified zeros of `Z w` at the coset shifts of `c`.
///
/// When every shift is returned, the multiplier vanishes at `z = 0` and the
/// system is not a frame. The global shift is ignored: it moves all zeros
/// of the multiplier together.
pub fn certify_not_frame(w: &HermiteWindow, c: &PeriodicConfig) -> Result<Vec<ZeroWitness>> {
    require_integer(c)?;
    let ev = ZakEvaluator::new(w, CERTIFY_TOL)?;
    let mut out = Vec::new();
    for s in c.shifts() {
        let p = s.wrap_unit();
        let (v, scale) = ev.eval_with_scale(p);
        let r = v.tail + ROUNDING_SLACK * f64::EPSILON * scale;
        let kind = classify_zero(w, p);
        if v.value.norm() <= r && kind.is_certified() {
            out.push(ZeroWitness {
                point: p,
                kind,
                radius: r,
                context: format!("Z {}", window_label(w)),
            });
        }
    }
    Ok(out)
}

/// Whether every coset shift of `c` is a certified zero of `Z w`.
pub fn is_certified_non_frame(w: &HermiteWindow, c: &PeriodicConfig) -> Result<bool> {
    Ok(certify_not_frame(w, c)?.len() == c.len())
}

/// The frame operator built from explicit Gabor coefficients.
///
/// Computes `S f = sum_m sum_{|k|,|l| <= K} <f, M_l T_k g_m> M_l T_k g_m`
/// with `g_m = M_{omega_m} T_{x_m} w` and quadrature for every coefficient.
/// Evaluating its Zak transform gives an independent check of the
/// diagonalisation by the multiplier.
#[derive(Debug, Clone)]
pub struct FrameOperatorOracle {
    window: HermiteWindow,
    shifts: Vec<PlanePoint>,
    truncation: i64,
    /// `coeffs[m][k + K][l + K]`.
    coeffs: Vec<Vec<Vec<Complex64>>>,
    support: f64,
}

impl FrameOperatorOracle {
    pub fn new(
        w: &HermiteWindow,
        shifts: &[PlanePoint],
        f: &HermiteWindow,
        truncation: u32,
    ) -> Result<Self> {
        w.require_unchirped("frame operator oracle")?;
        f.require_unchirped("frame operator oracle")?;
        if truncation < 15 {
            return Err(Error::Precondition(format!(
                "truncation K = {truncation} is below 15"
            )));
        }
        if shifts.is_empty() {
            return Err(Error::DegenerateConfig("no shifts given".into()));
        }
        let kk = i64::from(truncation);
        let order = f64::from(w.order().max(f.order()));
        let support = (10.0 + order) * f.dilation().max(w.dilation()).max(1.0);
        let width = (2 * kk + 1) as usize;

        let jobs = shifts.len() * width * width;
        let flat = map_indices(Exec::default(), jobs, |idx| {
            let m = idx / (width * width);
            let k = (idx / width % width) as i64 - kk;
            let l = (idx % width) as i64 - kk;
            let s = shifts[m];
            let (k, l) = (k as f64, l as f64);
            let integrand = |t: f64| {
                let g = w.eval_real(t - k - s.x);
                if g == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                f.eval_real(t) * g * cis_turns(-(l * t + s.omega * (t - k)))
            };
            adaptive_simpson(
                &integrand,
                -support,
                support,
                ORACLE_QUAD_TOL,
                ORACLE_PANELS,
            )
        });
        let flat: Vec<Complex64> = flat.into_iter().collect::<Result<_>>()?;
        let coeffs = flat
            .chunks(width * width)
            .map(|block| block.chunks(width).map(<[Complex64]>::to_vec).collect())
            .collect();
        Ok(Self {
            window: w.clone(),
            shifts: shifts.to_vec(),
            truncation: kk,
            coeffs,
            support,
        })
    }

    /// `S f(t)`.
    pub fn apply(&self, t: f64) -> Complex64 {
        let kk = self.truncation;
        let base = cis_turns(t);
        let start = cis_turns(-(kk as f64) * t);
        let mut total = Complex64::new(0.0, 0.0);
        for (s, block) in self.shifts.iter().zip(&self.coeffs) {
            for (row, k) in block.iter().zip(-kk..=kk) {
                let k = k as f64;
                let g = self.window.eval_real(t - k - s.x);
                if g == 0.0 {
                    continue;
                }
                let mut phase = start;
                let mut series = Complex64::new(0.0, 0.0);
                for c in row {
                    series += c * phase;
                    phase *= base;
                }
                total += g * cis_turns(s.omega * (t - k)) * series;
            }
        }
        total
    }

    /// `Z(S f)(z)` by direct summation over the support of `S f`.
    pub fn zak(&self, z: PlanePoint) -> Complex64 {
        let centre = z.x.floor() as i64;
        let reach = self.support.ceil() as i64 + 2;
        (centre - reach..=centre + reach)
            .map(|j| {
                let j = j as f64;
                self.apply(j - z.x) * cis_turns(j * z.omega)
            })
            .sum()
    }
}

/// `Z(S f)(z)` for the frame operator of `{M_l T_k g_m}`, truncated at `K`.
pub fn frame_operator_oracle(
    w: &HermiteWindow,
    shifts: &[PlanePoint],
    f: &HermiteWindow,
    z: PlanePoint,
    truncation: u32,
) -> Result<Complex64> {
    Ok(FrameOperatorOracle::new(w, shifts, f, truncation)?.zak(z))
}

/// Largest discrepancy between the sorted multiplier fields of `(w, c)` and
/// of `(D_a w, D_a c)`, the latter evaluated through `Z_a` at `D_a z`.
pub fn dilation_equivalence_check(
    w: &HermiteWindow,
    c: &PeriodicConfig,
    a: f64,
    grid_n: usize,
) -> Result<f64> {
    require_integer(c)?;
    crate::zak::check_dilation(a)?;
    let tol = crate::zak::DEFAULT_TOL;
    let n = grid_n.max(1);
    let h = 1.0 / n as f64;
    let shifts = c.effective_shifts();

    let plain = Multiplier::new(w, &shifts, tol)?;
    let dilated_window = w.dilate(a)?;
    // Z_a g(zeta) = Z(D_a^{-1} g)(D_a^{-1} zeta)
    let dilated = ZakEvaluator::new(&dilated_window.dilate(1.0 / a)?, tol)?;

    let mut v1 = Vec::with_capacity(n * n);
    let mut v2 = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let z = PlanePoint::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
            v1.push(plain.eval(z).0);
            v2.push(
                shifts
                    .iter()
                    .map(|s| {
                        let zeta = (z + *s).dilate(a);
                        let v = dilated.eval(zeta.dilate_inv(a)).value.norm();
                        v * v
                    })
                    .sum::<f64>(),
            );
        }
    }
    v1.sort_by(f64::total_cmp);
    v2.sort_by(f64::total_cmp);
    Ok(v1
        .iter()
        .zip(&v2)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}
