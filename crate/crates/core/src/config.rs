//! Lattices and periodic configurations `Gamma(L, {z_m}) = U_m (L + z_m) + xi`.
//!
//! A lattice is `B Z^2` for an invertible 2x2 matrix `B` whose columns are the
//! basis vectors. Shifts are kept in cell coordinates of `B`, reduced mod 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zak::{frac, PlanePoint};

/// Tolerance, in cell coordinates, for deciding that two cosets coincide.
pub const COSET_TOL: f64 = 1e-9;

/// `B Z^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    /// Row-major; the columns are the basis vectors.
    basis: [[f64; 2]; 2],
}

impl Lattice {
    pub fn new(basis: [[f64; 2]; 2]) -> Result<Self> {
        let lat = Self { basis };
        let det = lat.det();
        if !(det.is_finite() && det.abs() > 1e-300)
            || basis.iter().flatten().any(|v| !v.is_finite())
        {
            return Err(Error::Precondition(format!(
                "lattice basis {basis:?} is singular"
            )));
        }
        Ok(lat)
    }

    pub fn integer() -> Self {
        Self {
            basis: [[1.0, 0.0], [0.0, 1.0]],
        }
    }

    /// `D_a Z^2 = aZ x (1/a)Z`.
    pub fn dilated_integer(a: f64) -> Result<Self> {
        Self::new([[a, 0.0], [0.0, 1.0 / a]])
    }

    pub fn basis(&self) -> [[f64; 2]; 2] {
        self.basis
    }

    pub fn det(&self) -> f64 {
        let [[a, b], [c, d]] = self.basis;
        a * d - b * c
    }

    /// `D(L) = 1 / |det B|`.
    pub fn density(&self) -> f64 {
        1.0 / self.det().abs()
    }

    pub fn is_integer(&self, tol: f64) -> bool {
        let [[a, b], [c, d]] = self.basis;
        (a - 1.0).abs() <= tol && b.abs() <= tol && c.abs() <= tol && (d - 1.0).abs() <= tol
    }

    /// `B c`.
    pub fn to_plane(&self, cell: [f64; 2]) -> PlanePoint {
        let [[a, b], [c, d]] = self.basis;
        PlanePoint::new(a * cell[0] + b * cell[1], c * cell[0] + d * cell[1])
    }

    /// `B^{-1} z`.
    pub fn to_cell(&self, z: PlanePoint) -> [f64; 2] {
        let [[a, b], [c, d]] = self.basis;
        let det = self.det();
        [
            (d * z.x - b * z.omega) / det,
            (-c * z.x + a * z.omega) / det,
        ]
    }

    /// `D_a B`.
    pub fn dilate(&self, a: f64) -> Result<Self> {
        let [[p, q], [r, s]] = self.basis;
        Self::new([[a * p, a * q], [r / a, s / a]])
    }

    fn column_norms(&self) -> [f64; 2] {
        let [[a, b], [c, d]] = self.basis;
        [a.hypot(c), b.hypot(d)]
    }
}

/// JSON literal accepted for configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSpec {
    pub basis: [[f64; 2]; 2],
    pub shifts: Vec<[f64; 2]>,
    #[serde(default)]
    pub global_shift: Option<[f64; 2]>,
}

/// A finite union of shifted copies of one lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicConfig {
    lattice: Lattice,
    cells: Vec<[f64; 2]>,
    global_shift: PlanePoint,
}

fn reduce_cell(c: [f64; 2]) -> [f64; 2] {
    [frac(c[0]), frac(c[1])]
}

fn same_coset(a: [f64; 2], b: [f64; 2], tol: f64) -> bool {
    let d0 = a[0] - b[0];
    let d1 = a[1] - b[1];
    (d0 - d0.round()).abs() <= tol && (d1 - d1.round()).abs() <= tol
}

impl PeriodicConfig {
    pub fn new(lattice: Lattice, shifts: &[PlanePoint], global_shift: PlanePoint) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::DegenerateConfig("no coset shifts given".into()));
        }
        if !global_shift.is_finite() || shifts.iter().any(|z| !z.is_finite()) {
            return Err(Error::Precondition("shifts must be finite".into()));
        }
        let cells: Vec<[f64; 2]> = shifts
            .iter()
            .map(|&z| reduce_cell(lattice.to_cell(z)))
            .collect();
        for i in 0..cells.len() {
            for j in 0..i {
                if same_coset(cells[i], cells[j], COSET_TOL) {
                    return Err(Error::DegenerateConfig(format!(
                        "shifts {j} and {i} ({:?}, {:?}) lie in the same coset",
                        shifts[j], shifts[i]
                    )));
                }
            }
        }
        Ok(Self {
            lattice,
            cells,
            global_shift,
        })
    }

    /// A configuration over `Z^2` with no global shift.
    pub fn integer(shifts: &[PlanePoint]) -> Result<Self> {
        Self::new(Lattice::integer(), shifts, PlanePoint::ORIGIN)
    }

    pub fn from_spec(spec: &ConfigSpec) -> Result<Self> {
        let shifts: Vec<PlanePoint> = spec
            .shifts
            .iter()
            .map(|s| PlanePoint::new(s[0], s[1]))
            .collect();
        let xi = spec
            .global_shift
            .map(|g| PlanePoint::new(g[0], g[1]))
            .unwrap_or(PlanePoint::ORIGIN);
        Self::new(Lattice::new(spec.basis)?, &shifts, xi)
    }

    pub fn to_spec(&self) -> ConfigSpec {
        let xi = self.global_shift;
        ConfigSpec {
            basis: self.lattice.basis(),
            shifts: self.shifts().iter().map(|z| [z.x, z.omega]).collect(),
            global_shift: (xi != PlanePoint::ORIGIN).then_some([xi.x, xi.omega]),
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn global_shift(&self) -> PlanePoint {
        self.global_shift
    }

    /// Reduced cell coordinates of the coset shifts.
    pub fn cells(&self) -> &[[f64; 2]] {
        &self.cells
    }

    /// Coset representatives in the plane (inside the fundamental cell).
    pub fn shifts(&self) -> Vec<PlanePoint> {
        self.cells
            .iter()
            .map(|&c| self.lattice.to_plane(c))
            .collect()
    }

    /// Coset representatives including the global shift.
    pub fn effective_shifts(&self) -> Vec<PlanePoint> {
        self.shifts()
            .into_iter()
            .map(|z| z + self.global_shift)
            .collect()
    }

    pub fn with_global_shift(&self, xi: PlanePoint) -> Self {
        Self {
            global_shift: xi,
            ..self.clone()
        }
    }

    /// Image under `D_a`; basis, shifts and global shift are all mapped.
    pub fn dilate(&self, a: f64) -> Result<Self> {
        let shifts: Vec<PlanePoint> = self.shifts().into_iter().map(|z| z.dilate(a)).collect();
        Self::new(
            self.lattice.dilate(a)?,
            &shifts,
            self.global_shift.dilate(a),
        )
    }

    /// Whether `z` lies in the point set, within `tol` in cell coordinates.
    pub fn contains(&self, z: PlanePoint, tol: f64) -> bool {
        let c = self.lattice.to_cell(z - self.global_shift);
        self.cells.iter().any(|&cell| same_coset(c, cell, tol))
    }

    /// All points `B(c_m + n) + xi` with `n` in `{-r..=r}^2`.
    pub fn window_points(&self, r: i32) -> Vec<PlanePoint> {
        let mut pts = Vec::with_capacity(self.cells.len() * ((2 * r + 1) * (2 * r + 1)) as usize);
        for &c in &self.cells {
            for i in -r..=r {
                for j in -r..=r {
                    pts.push(
                        self.lattice
                            .to_plane([c[0] + f64::from(i), c[1] + f64::from(j)])
                            + self.global_shift,
                    );
                }
            }
        }
        pts
    }
}

/// `M D(L)`.
pub fn density(c: &PeriodicConfig) -> f64 {
    c.len() as f64 * c.lattice.density()
}

/// Minimum distance between distinct points of the configuration.
///
/// Enumerates `z_i - z_j + l` over lattice vectors `l` with
/// `|l| <= 2 (covering radius + max shift norm)`; the covering radius is
/// replaced by the upper bound `|b_1| + |b_2|`.
pub fn separation(c: &PeriodicConfig) -> Result<f64> {
    let lat = &c.lattice;
    let shifts = c.shifts();
    let [n1, n2] = lat.column_norms();
    let max_shift = shifts
        .iter()
        .map(|z| z.x.hypot(z.omega))
        .fold(0.0, f64::max);
    let radius = 2.0 * (n1 + n2 + max_shift);

    // |i| <= radius |row_i(B^{-1})|
    let [[a, b], [cc, d]] = lat.basis();
    let det = lat.det();
    let r0 = (d.hypot(b) / det.abs() * radius).ceil() as i64 + 1;
    let r1 = (cc.hypot(a) / det.abs() * radius).ceil() as i64 + 1;

    let mut best = f64::INFINITY;
    for zi in &shifts {
        for zj in &shifts {
            for i in -r0..=r0 {
                for j in -r1..=r1 {
                    let l = lat.to_plane([i as f64, j as f64]);
                    let v = *zi - *zj + l;
                    let dist = v.x.hypot(v.omega);
                    if dist > radius {
                        continue;
                    }
                    if dist == 0.0 {
                        continue;
                    }
                    best = best.min(dist);
                }
            }
        }
    }
    if best.is_finite() && best > 0.0 {
        Ok(best)
    } else {
        Err(Error::DegenerateConfig(
            "configuration has no positive separation".into(),
        ))
    }
}

/// `Gamma_N x Z`-type configuration: shifts `(x, 0)` over `lattice`.
pub fn semi_regular(shift_xs: &[f64], lattice: Lattice) -> Result<PeriodicConfig> {
    let shifts: Vec<PlanePoint> = shift_xs.iter().map(|&x| PlanePoint::new(x, 0.0)).collect();
    PeriodicConfig::new(lattice, &shifts, PlanePoint::ORIGIN)
}

/// Closure-under-subtraction test on a 3x3-cell window.
///
/// After translating the first coset representative to the origin, a lattice
/// must contain every difference of its points. This is a finite-window
/// operationalisation, not a decision procedure.
pub fn is_lattice(c: &PeriodicConfig, tol: f64) -> bool {
    let pts = c.window_points(1);
    let origin = c.shifts()[0] + c.global_shift;
    pts.iter().all(|&p| {
        pts.iter().all(|&q| {
            // (p - o) - (q - o) + o must lie in the configuration
            c.contains(p - q + origin, tol)
        })
    })
}

/// `count` shifts drawn uniformly from `[0,1)^2` by a seeded ChaCha8 stream.
pub fn random_shifts(seed: u64, count: usize) -> Vec<PlanePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| PlanePoint::new(rng.random::<f64>(), rng.random::<f64>()))
        .collect()
}
