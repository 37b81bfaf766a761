mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use zakframe::config::{random_shifts, ConfigSpec};
use zakframe::frame::{frame_bounds, FrameDiagnostic, DEFAULT_GRID};
use zakframe::series::{geom0, geom2, geom2_expanded, h2_tail_bound, GeomParams};
use zakframe::windows::WindowSpec;
use zakframe::zak::{reduce_fundamental, ZakEvaluator};
use zakframe::zeros::{
    certify_all_sign_changes, h2_inequality_check, real_slice, scan_zero_candidates, trivial_zeros,
    window_label, Parity, TabulatedDilation, ZakVariant, ZeroWitness,
};
use zakframe::{Error, HermiteWindow, PeriodicConfig, PlanePoint, Verdict, DEFAULT_TOL};

use output::{emit, num, Csv, Manifest, SCHEMA_VERSION};

#[derive(Parser, Debug)]
#[command(
    name = "zakframe",
    version,
    about = "Zak transforms of Hermite windows and Gabor frame diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a Zak transform at one point.
    Zak(ZakArgs),
    /// Frame diagnostic for a window over a Z^2-periodic configuration.
    FrameCheck(FrameArgs),
    /// Emit the data behind a figure as CSV.
    Figure(FigureArgs),
    /// Scan for zeros or certify sign changes on a real slice.
    Zeros(ZerosArgs),
    /// Geometric-series values and the inequalities behind the h2 sign change.
    Appendix(AppendixArgs),
}

#[derive(Args, Debug, Serialize)]
struct WindowArgs {
    /// Hermite window `hN`.
    #[arg(long, default_value = "h0", value_parser = parse_window_order)]
    window: u32,
    /// Window dilation a (window t -> a^{-1/2} h(t/a)).
    #[arg(long, conflicts_with = "dilation_inv")]
    dilation: Option<f64>,
    /// Window dilation 1/a.
    #[arg(long)]
    dilation_inv: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    chirp: f64,
}

/// Decimal flags within 1e-9 of sqrt 2, sqrt 3 or 2 (or a reciprocal) denote
/// that exact value; a truncated decimal moves the zeros being certified.
fn snap_dilation(a: f64) -> f64 {
    let named = [std::f64::consts::SQRT_2, 3f64.sqrt(), 2.0];
    for v in named {
        if (a - v).abs() <= 1e-9 {
            return v;
        }
        if (a - 1.0 / v).abs() <= 1e-9 {
            return 1.0 / v;
        }
    }
    a
}

impl WindowArgs {
    fn build(&self) -> Result<HermiteWindow> {
        let dilation = match (self.dilation, self.dilation_inv) {
            (Some(a), _) => snap_dilation(a),
            (None, Some(a)) => {
                if !(a.is_finite() && a > 0.0) {
                    bail!(Error::Precondition(format!(
                        "dilation must be positive, got {a}"
                    )));
                }
                1.0 / snap_dilation(a)
            }
            (None, None) => 1.0,
        };
        Ok(HermiteWindow::new(self.window, dilation, self.chirp)?)
    }
}

fn parse_window_order(s: &str) -> std::result::Result<u32, String> {
    s.strip_prefix('h')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| format!("expected a window of the form hN, got '{s}'"))
}

#[derive(Args, Debug, Serialize)]
struct VariantArgs {
    /// Use ~Z_a f = Z(D_a^{-1} f).
    #[arg(long, conflicts_with = "zak_dilated")]
    tilde: Option<f64>,
    /// Use Z_a f(z) = Z(D_a^{-1} f)(D_a^{-1} z).
    #[arg(long)]
    zak_dilated: Option<f64>,
}

impl VariantArgs {
    fn variant(&self) -> ZakVariant {
        match (self.tilde, self.zak_dilated) {
            (Some(a), _) => ZakVariant::Tilde(snap_dilation(a)),
            (None, Some(a)) => ZakVariant::Dilated(snap_dilation(a)),
            (None, None) => ZakVariant::Plain,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug, Serialize)]
struct ZakArgs {
    #[command(flatten)]
    window: WindowArgs,
    #[command(flatten)]
    variant: VariantArgs,
    /// Point (x, omega).
    #[arg(long, num_args = 2, value_names = ["X", "OMEGA"], allow_hyphen_values = true, required = true)]
    point: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
struct FrameArgs {
    #[command(flatten)]
    window: WindowArgs,
    /// Configuration JSON: {"basis": [[..],[..]], "shifts": [[x, omega], ..], "global_shift": [x, omega]}.
    #[arg(
        long,
        conflicts_with = "random_shifts",
        required_unless_present = "random_shifts"
    )]
    config: Option<PathBuf>,
    /// Draw this many shifts uniformly from [0,1)^2.
    #[arg(long)]
    random_shifts: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
struct FigureArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=7))]
    id: u8,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ZerosArgs {
    #[command(flatten)]
    window: WindowArgs,
    #[command(flatten)]
    variant: VariantArgs,
    /// Grid scan of |Z|^2 with this many points per axis.
    #[arg(long, conflicts_with = "certify", required_unless_present = "certify")]
    scan: Option<usize>,
    /// Certify every sign change of the real slice at --omega.
    #[arg(long)]
    certify: bool,
    #[arg(long, default_value_t = 0.0)]
    omega: f64,
    /// Samples used to bracket sign changes.
    #[arg(long, default_value_t = 400)]
    samples: usize,
    /// Target enclosure width.
    #[arg(long, default_value_t = 1e-7)]
    width: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
struct AppendixArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Serialize)]
struct FrameReport<'a> {
    schema_version: u32,
    window: WindowSpec,
    config: ConfigSpec,
    #[serde(flatten)]
    diagnostic: &'a FrameDiagnostic,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("ZAKFRAME_THREADS")
        .ok()
        .and_then(|t| t.parse().ok())
    {
        zakframe::par::init_threads(threads);
    }
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let usage = matches!(
                err.downcast_ref::<Error>(),
                Some(
                    Error::Precondition(_)
                        | Error::OrderOutOfRange { .. }
                        | Error::Unsupported(_)
                        | Error::DegenerateConfig(_)
                )
            );
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Zak(args) => cmd_zak(&args),
        Command::FrameCheck(args) => cmd_frame_check(&args),
        Command::Figure(args) => cmd_figure(&args),
        Command::Zeros(args) => cmd_zeros(&args),
        Command::Appendix(args) => cmd_appendix(&args),
    }
    .map(|code| code.unwrap_or(ExitCode::SUCCESS))
}

fn cmd_zak(args: &ZakArgs) -> Result<Option<ExitCode>> {
    let w = args.window.build()?;
    let variant = args.variant.variant();
    let z = PlanePoint::new(args.point[0], args.point[1]);
    let eff = variant.effective_window(&w)?;
    let ev = ZakEvaluator::new(&eff, args.tol)?;
    let unit = variant.to_unit(z);
    let v = ev.eval(unit);
    let (reduced, phase) = reduce_fundamental(unit);

    let body = match args.format {
        Format::Json => output::json(&json!({
            "schema_version": SCHEMA_VERSION,
            "transform": variant.describe(&w),
            "window": w.spec(),
            "variant": variant,
            "point": z,
            "reduced": reduced,
            "phase": [phase.re, phase.im],
            "value": [v.value.re, v.value.im],
            "tail": v.tail,
            "terms": ev.terms(),
        }))?,
        Format::Csv => {
            let mut c = Csv::new("x,omega,re,im,tail,terms");
            c.row(&[num(z.x), num(z.omega), num(v.value.re), num(v.value.im), num(v.tail), ev.terms().to_string()]);
            c.finish()
        }
        Format::Text => format!(
            "transform  {}\npoint      {} {}\nreduced    {} {} (phase {} {})\nvalue      {} {}\ntail       {}\nterms      {}\n",
            variant.describe(&w),
            num(z.x),
            num(z.omega),
            num(reduced.x),
            num(reduced.omega),
            num(phase.re),
            num(phase.im),
            num(v.value.re),
            num(v.value.im),
            num(v.tail),
            ev.terms()
        ),
    };
    emit::<()>(&body, None, None)?;
    Ok(None)
}

fn load_config(args: &FrameArgs) -> Result<PeriodicConfig> {
    if let Some(path) = &args.config {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let spec: ConfigSpec = serde_json::from_str(&text)
            .with_context(|| format!("parsing configuration {}", path.display()))?;
        Ok(PeriodicConfig::from_spec(&spec)?)
    } else {
        let m = args.random_shifts.unwrap_or(0);
        Ok(PeriodicConfig::integer(&random_shifts(args.seed, m))?)
    }
}

fn cmd_frame_check(args: &FrameArgs) -> Result<Option<ExitCode>> {
    let start = Instant::now();
    let w = args.window.build()?;
    let c = load_config(args)?;
    let mut diag = frame_bounds(&w, &c, args.grid, args.tol)?;
    let seed = args.random_shifts.map(|_| args.seed);
    if let Some(s) = seed {
        diag = diag.with_seed(s);
    }
    let body = match args.format {
        Format::Csv => {
            let mut csv = Csv::new(ZeroWitness::CSV_HEADER);
            for wt in &diag.witnesses {
                csv.row(&witness_row(wt));
            }
            csv.finish()
        }
        _ => output::json(&FrameReport {
            schema_version: SCHEMA_VERSION,
            window: w.spec(),
            config: c.to_spec(),
            diagnostic: &diag,
        })?,
    };
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        command: "frame-check",
        parameters: args,
        tolerances: json!({ "zak": args.tol, "certify": zakframe::frame::CERTIFY_TOL }),
        seed,
        version: env!("CARGO_PKG_VERSION"),
        duration_secs: start.elapsed().as_secs_f64(),
    };
    emit(&body, args.out.as_deref(), Some(manifest))?;
    let code = match diag.verdict {
        Verdict::Frame => 0,
        Verdict::NotFrameCertified => 3,
        Verdict::Inconclusive => 4,
    };
    Ok(Some(ExitCode::from(code)))
}

fn witness_row(w: &ZeroWitness) -> Vec<String> {
    vec![
        num(w.point.x),
        num(w.point.omega),
        w.kind.as_str().to_string(),
        num(w.radius),
    ]
}

fn cmd_figure(args: &FigureArgs) -> Result<Option<ExitCode>> {
    let start = Instant::now();
    let body = match args.id {
        1 => {
            let mut c = Csv::new("x,omega,kind");
            for (parity, kind) in [(Parity::Even, "trivial_even"), (Parity::Odd, "trivial_odd")] {
                for z in trivial_zeros(parity) {
                    c.row(&[num(z.x), num(z.omega), kind.to_string()]);
                }
            }
            c.finish()
        }
        id @ 2..=4 => {
            let d = TabulatedDilation::ALL[usize::from(id - 2)];
            let mut c = Csv::new("x,omega,dilation");
            for z in d.zeros() {
                c.row(&[num(z.x), num(z.omega), d.label().to_string()]);
            }
            c.finish()
        }
        5 => {
            let slice = real_slice(
                &HermiteWindow::hermite(2)?,
                ZakVariant::Tilde(std::f64::consts::SQRT_2),
                0.0,
            )?;
            slice_csv(&slice, 1.0)?
        }
        6 => {
            let shifts = [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5)];
            let mut c = Csv::new("x,omega,coset");
            for (m, (sx, sw)) in shifts.iter().enumerate() {
                for i in -2..=2 {
                    for j in -2..=2 {
                        let (x, w) = (sx + f64::from(i), sw + f64::from(j));
                        if (-2.0..=2.0).contains(&x) && (-2.0..=2.0).contains(&w) {
                            c.row(&[num(x), num(w), m.to_string()]);
                        }
                    }
                }
            }
            c.finish()
        }
        _ => {
            let s3 = 3f64.sqrt();
            let slice = real_slice(
                &HermiteWindow::hermite(3)?,
                ZakVariant::Dilated(s3),
                1.0 / (2.0 * s3),
            )?;
            slice_csv(&slice, s3)?
        }
    };
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        command: "figure",
        parameters: args,
        tolerances: json!({ "slice": zakframe::zeros::SLICE_TOL }),
        seed: None,
        version: env!("CARGO_PKG_VERSION"),
        duration_secs: start.elapsed().as_secs_f64(),
    };
    emit(&body, args.out.as_deref(), Some(manifest))?;
    Ok(None)
}

fn slice_csv(slice: &zakframe::zeros::RealSlice, length: f64) -> Result<String> {
    let mut c = Csv::new("x,value,err");
    for i in 0..=1000 {
        let x = length * f64::from(i) / 1000.0;
        let v = slice.eval(x)?;
        c.row(&[num(x), num(v.value), num(v.err)]);
    }
    Ok(c.finish())
}

fn cmd_zeros(args: &ZerosArgs) -> Result<Option<ExitCode>> {
    let start = Instant::now();
    let w = args.window.build()?;
    let variant = args.variant.variant();
    let witnesses: Vec<ZeroWitness> = if let Some(n) = args.scan {
        scan_zero_candidates(&w, variant, n)?
    } else {
        let slice = real_slice(&w, variant, args.omega)?;
        certify_all_sign_changes(&slice, 0.0, variant.period(), args.samples, args.width)?
            .into_iter()
            .map(|c| c.witness)
            .collect()
    };
    let body = match args.format {
        Format::Json => output::json(&json!({
            "schema_version": SCHEMA_VERSION,
            "transform": variant.describe(&w),
            "window": window_label(&w),
            "witnesses": witnesses,
        }))?,
        _ => {
            let mut c = Csv::new(ZeroWitness::CSV_HEADER);
            for wt in &witnesses {
                c.row(&witness_row(wt));
            }
            c.finish()
        }
    };
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        command: "zeros",
        parameters: args,
        tolerances: json!({ "slice": zakframe::zeros::SLICE_TOL, "scan": DEFAULT_TOL, "width": args.width }),
        seed: None,
        version: env!("CARGO_PKG_VERSION"),
        duration_secs: start.elapsed().as_secs_f64(),
    };
    emit(&body, args.out.as_deref(), Some(manifest))?;
    Ok(None)
}

fn cmd_appendix(args: &AppendixArgs) -> Result<Option<ExitCode>> {
    let p = GeomParams::new(2, (-std::f64::consts::PI).exp())?;
    let report = h2_inequality_check()?;
    let body = if args.format == Format::Json {
        output::json(&json!({
            "schema_version": SCHEMA_VERSION,
            "geom0": geom0(p),
            "geom2": geom2(p),
            "geom2_expanded": geom2_expanded(p),
            "h2_tail_bound": h2_tail_bound(),
            "checks": report.checks,
            "all_hold": report.all_hold(),
        }))?
    } else {
        let mut s = String::new();
        s.push_str(&format!(
            "sum_(n>=2) q^n,     q = e^-pi   {:.14}\n",
            geom0(p)
        ));
        s.push_str(&format!(
            "sum_(n>=2) n^2 q^n, q = e^-pi   {:.14}\n",
            geom2(p)
        ));
        s.push_str(&format!(
            "  expanded form                  {:.14}\n",
            geom2_expanded(p)
        ));
        s.push_str(&format!(
            "tail bound                       {:.14} < 0.11\n",
            h2_tail_bound()
        ));
        for c in &report.checks {
            s.push_str(&format!(
                "{:<4} {:<48} value {:>12.8} margin {:.4e}\n",
                if c.holds { "pass" } else { "FAIL" },
                c.label,
                c.value,
                c.margin
            ));
        }
        s.push_str(if report.all_hold() {
            "all pass\n"
        } else {
            "FAILED\n"
        });
        s
    };
    emit::<()>(&body, None, None)?;
    Ok(if report.all_hold() {
        None
    } else {
        Some(ExitCode::from(1))
    })
}
