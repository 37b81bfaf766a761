//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::{PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zakframe::config::{density, is_lattice, random_shifts, semi_regular};
use zakframe::frame::{
    certify_not_frame, frame_bounds, multiplier, FrameOperatorOracle, DEFAULT_GRID,
};
use zakframe::series::{geom0, geom1, geom2, GeomParams};
use zakframe::zak::{
    cis_turns, fourier_zak_check, tf_shift_covariance_check, zak, zak_dilated, zak_indicator,
    zak_tilde, ZakEvaluator,
};
use zakframe::zeros::{
    certify_sign_change, h2_inequality_check, real_slice, trivial_zeros, Parity, TabulatedDilation,
    ZakVariant,
};
use zakframe::{HermiteWindow, Lattice, PeriodicConfig, PlanePoint, Verdict, DEFAULT_TOL};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn h(n: u32) -> HermiteWindow {
    HermiteWindow::hermite(n).unwrap()
}

fn p(x: f64, w: f64) -> PlanePoint {
    PlanePoint::new(x, w)
}

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn appendix_values() -> Outcome {
    let q = (-PI).exp();
    let params = GeomParams::new(2, q).unwrap();
    let g0 = geom0(params);
    let g2 = geom2(params);
    let g0_ok = (g0 - 0.00195179).abs() <= 5e-9;
    let g2_ok = (g2 - 0.0082588).abs() <= 5e-8;

    let mut worst: f64 = 0.0;
    for start in 1..=6 {
        for &q in &[q, (-PI / 2.0).exp(), 0.5, -0.3, 0.9] {
            let gp = GeomParams::new(start, q).unwrap();
            let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
            for k in (start..4000).rev() {
                let t = q.powi(k as i32);
                let n = f64::from(k);
                s0 += t;
                s1 += n * t;
                s2 += n * n * t;
            }
            worst = worst
                .max(((geom0(gp) - s0) / s0).abs())
                .max(((geom1(gp) - s1) / s1).abs())
                .max(((geom2(gp) - s2) / s2).abs());
        }
    }
    let forms_ok = worst <= 1e-13;
    check(
        g0_ok && g2_ok && forms_ok,
        format!(
            "geom0 = {g0:.12} (target 0.00195179 +- 5e-9: {}), geom2 = {g2:.12} (target 0.0082588 +- 5e-8: {}, off by {:.3e}), worst closed-form relative error {worst:.2e}",
            ok_str(g0_ok),
            ok_str(g2_ok),
            (g2 - 0.0082588).abs()
        ),
    )
}

fn ok_str(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "MISS"
    }
}

fn inequality_chain() -> Outcome {
    let r = h2_inequality_check().map_err(|e| e.to_string())?;
    let margins: Vec<String> = r
        .checks
        .iter()
        .map(|c| format!("{:.4e}", c.margin))
        .collect();
    check(
        r.all_hold() && r.checks.iter().all(|c| c.margin > 0.0),
        format!("margins [{}]", margins.join(", ")),
    )
}

fn trivial_zeros_vanish() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 0..=7u32 {
        let parity = if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        };
        for z in trivial_zeros(parity) {
            worst = worst.max(zak(&h(n), z, DEFAULT_TOL).unwrap().value.norm());
        }
    }
    check(
        worst < 1e-12,
        format!("max |Z h_n| at parity zeros = {worst:.2e}"),
    )
}

fn tabulated_zeros_vanish() -> Outcome {
    let (mut w3, mut w7): (f64, f64) = (0.0, 0.0);
    let mut count = 0;
    for d in TabulatedDilation::ALL {
        for z in d.zeros() {
            count += 1;
            w3 = w3.max(
                zak_dilated(&h(3), z, d.value(), DEFAULT_TOL)
                    .unwrap()
                    .value
                    .norm(),
            );
            w7 = w7.max(
                zak_dilated(&h(7), z, d.value(), DEFAULT_TOL)
                    .unwrap()
                    .value
                    .norm(),
            );
        }
    }
    check(
        count == 15 && w3 < 1e-11 && w7 < 1e-10,
        format!("{count} points, max |Z_a h3| = {w3:.2e}, max |Z_a h7| = {w7:.2e}"),
    )
}

fn new_zeros() -> Outcome {
    let s3 = 3f64.sqrt();
    let slice2 = real_slice(&h(2), ZakVariant::Tilde(SQRT_2), 0.0).map_err(|e| e.to_string())?;
    let a = certify_sign_change(&slice2, 0.0, 0.5, 1e-7).map_err(|e| e.to_string())?;
    let b = certify_sign_change(&slice2, 0.5, 1.0, 1e-7).map_err(|e| e.to_string())?;
    let slice3 =
        real_slice(&h(3), ZakVariant::Dilated(s3), 1.0 / (2.0 * s3)).map_err(|e| e.to_string())?;
    let c = certify_sign_change(&slice3, 0.2 * s3, 0.35 * s3, 1e-7).map_err(|e| e.to_string())?;

    let x0 = a.point.x;
    let ok = (0.166..=0.176).contains(&x0)
        && (0.824..=0.834).contains(&b.point.x)
        && (0.246..=0.266).contains(&(c.point.x / s3))
        && [&a, &b, &c].iter().all(|w| 2.0 * w.radius < 1e-6);
    check(
        ok,
        format!(
            "x0 = {:.10} +- {:.1e}, 1 - x0 = {:.10} +- {:.1e}, x/sqrt3 = {:.10} +- {:.1e}",
            x0,
            a.radius,
            b.point.x,
            b.radius,
            c.point.x / s3,
            c.radius / s3
        ),
    )
}

fn thm2() -> PeriodicConfig {
    PeriodicConfig::integer(&[p(0.0, 0.0), p(0.5, 0.0), p(0.0, 0.5)]).unwrap()
}

fn theorem2() -> Outcome {
    let c = thm2();
    let d = frame_bounds(&h(1), &c, DEFAULT_GRID, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let (m0, _) = multiplier(&h(1), &c.shifts(), PlanePoint::ORIGIN, DEFAULT_TOL).unwrap();
    let dens = density(&c);
    let lat = is_lattice(&c, 1e-9);
    check(
        d.verdict == Verdict::NotFrameCertified && m0 < 1e-12 && (dens - 3.0).abs() < 1e-12 && !lat,
        format!(
            "verdict {}, multiplier(0) = {m0:.2e}, density {dens}, is_lattice {lat}",
            d.verdict.as_str()
        ),
    )
}

fn semi_regular_examples() -> Outcome {
    let s3 = 3f64.sqrt();
    let w = HermiteWindow::dilated_hermite(3, 1.0 / s3).unwrap();
    let sets: [&[f64]; 3] = [
        &[0.0, 0.5],
        &[0.0, 1.0 / 3.0, 2.0 / 3.0],
        &[0.0, 1.0 / 3.0, 0.5, 2.0 / 3.0],
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for xs in sets {
        let c = semi_regular(xs, Lattice::integer()).unwrap();
        let d = frame_bounds(&w, &c, DEFAULT_GRID, DEFAULT_TOL).map_err(|e| e.to_string())?;
        ok &= d.verdict == Verdict::NotFrameCertified;
        parts.push(format!("N={}: {}", xs.len(), d.verdict.as_str()));
    }
    check(ok, parts.join(", "))
}

fn density_five() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for d in TabulatedDilation::ALL {
        let w = HermiteWindow::dilated_hermite(3, 1.0 / d.value()).unwrap();
        let c = PeriodicConfig::integer(&d.unit_zeros()).unwrap();
        let witnesses = certify_not_frame(&w, &c).map_err(|e| e.to_string())?;
        let diag = frame_bounds(&w, &c, DEFAULT_GRID, DEFAULT_TOL).map_err(|e| e.to_string())?;
        ok &= witnesses.len() == 5
            && diag.verdict == Verdict::NotFrameCertified
            && density(&c) == 5.0;
        parts.push(format!(
            "a={}: {} witnesses, {}",
            d.label(),
            witnesses.len(),
            diag.verdict.as_str()
        ));
    }
    check(ok, parts.join("; "))
}

fn proposition1() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut bad = Vec::new();
    for seed in 0..20u64 {
        let c = PeriodicConfig::integer(&random_shifts(seed, 3)).map_err(|e| e.to_string())?;
        let d = frame_bounds(&h(1), &c, DEFAULT_GRID, DEFAULT_TOL).map_err(|e| e.to_string())?;
        worst = worst.min(d.multiplier_min);
        if d.verdict != Verdict::Frame || d.multiplier_min <= 1e-3 {
            bad.push(format!(
                "seed {seed}: {} {:.3e}",
                d.verdict.as_str(),
                d.multiplier_min
            ));
        }
    }
    check(
        bad.is_empty(),
        format!(
            "20 seeds, smallest multiplier_min {worst:.4e}{}",
            if bad.is_empty() {
                String::new()
            } else {
                format!("; failing {}", bad.join(", "))
            }
        ),
    )
}

fn diagonalization() -> Outcome {
    let configs = [vec![PlanePoint::ORIGIN], thm2().shifts()];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let zs: Vec<PlanePoint> = (0..20)
        .map(|_| p(rng.random::<f64>(), rng.random::<f64>()))
        .collect();
    let mut worst: f64 = 0.0;
    for shifts in &configs {
        for wn in 0..3 {
            for fn_ in 0..3 {
                let oracle = FrameOperatorOracle::new(&h(wn), shifts, &h(fn_), 20)
                    .map_err(|e| e.to_string())?;
                for &z in &zs {
                    let zf = zak(&h(fn_), z, DEFAULT_TOL).unwrap().value;
                    let (m, _) = multiplier(&h(wn), shifts, z, DEFAULT_TOL).unwrap();
                    let r = (oracle.zak(z) - m * zf).norm() / (1.0 + zf.norm());
                    worst = worst.max(r);
                }
            }
        }
    }
    check(
        worst < 1e-5,
        format!("max scaled residual {worst:.3e} over 360 evaluations"),
    )
}

fn identity_suite() -> Outcome {
    let tol = DEFAULT_TOL;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut qp, mut cov, mut fz, mut var): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for n in 0..=4 {
        let w = h(n);
        for _ in 0..100 {
            let z = p(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let base = zak(&w, z, tol).unwrap().value;
            let r1 = (zak(&w, p(z.x + 1.0, z.omega), tol).unwrap().value
                - cis_turns(z.omega) * base)
                .norm();
            let r2 = (zak(&w, p(z.x, z.omega + 1.0), tol).unwrap().value - base).norm();
            qp = qp.max(r1).max(r2);

            let (xi, eta) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            cov = cov.max(tf_shift_covariance_check(&w, xi, eta, z, tol).unwrap());
            fz = fz.max(fourier_zak_check(&w, z, tol).unwrap());

            let a = rng.random_range(0.5..2.5);
            let dil = zak_dilated(&w, z, a, tol).unwrap().value;
            let via_tilde = zak_tilde(&w, z.dilate_inv(a), a, tol).unwrap().value;
            // sqrt(a) sum_k w(a k - x) e^{2 pi i a k omega}
            let scratch: Complex64 = (-60i32..=60)
                .map(|k| {
                    let k = f64::from(k);
                    a.sqrt()
                        * w.eval_real(a * k - z.x)
                        * Complex64::from_polar(1.0, 2.0 * PI * a * k * z.omega)
                })
                .sum();
            var = var
                .max((dil - via_tilde).norm())
                .max((dil - scratch).norm());
        }
    }
    let mut ind: f64 = 0.0;
    for _ in 0..50 {
        let z = p(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
        ind = ind.max((zak_indicator(z).norm() - 1.0).abs());
    }
    let lim = 2.0 * tol;
    check(
        qp < lim && cov < lim && fz < lim && var < lim && ind < 1e-15,
        format!(
            "quasi-periodicity {qp:.2e}, covariance {cov:.2e}, Fourier-Zak {fz:.2e}, variants {var:.2e}, | |Z chi| - 1 | {ind:.1e} (limit {lim:.0e})"
        ),
    )
}

fn unitarity() -> Outcome {
    let n_grid = 400;
    let h_step = 1.0 / n_grid as f64;
    let mut worst: f64 = 0.0;
    for n in 0..=4 {
        let ev = ZakEvaluator::new(&h(n), DEFAULT_TOL).unwrap();
        let mut total = 0.0;
        for i in 0..n_grid {
            let col = ev.column((i as f64 + 0.5) * h_step);
            for j in 0..n_grid {
                total += col.at((j as f64 + 0.5) * h_step).value.norm_sqr();
            }
        }
        worst = worst.max((total * h_step * h_step - 1.0).abs());
    }
    check(
        worst < 1e-4,
        format!("max |midpoint sum - 1| = {worst:.2e} for n <= 4"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("appendix values", appendix_values),
        ("inequality chain", inequality_chain),
        ("trivial zeros", trivial_zeros_vanish),
        ("tabulated zeros", tabulated_zeros_vanish),
        ("new zeros", new_zeros),
        ("theorem 2 configuration", theorem2),
        ("semi-regular examples", semi_regular_examples),
        ("density-5 non-frames", density_five),
        ("random configurations are frames", proposition1),
        ("diagonalization oracle", diagonalization),
        ("identity suite", identity_suite),
        ("unitarity quadrature", unitarity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name} ({secs:.1}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {msg}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
