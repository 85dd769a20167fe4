//! `wext`: set generation, measures, dimension estimates, extension grids,
//! the disk variant and the verification suites, as file-to-file steps.

mod jets;
mod output;

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex;
use whitney_ext::holo::{check_assumption6, Assumption6Config};
use whitney_ext::verify::{reports_to_text, RestrictionConfig};
use whitney_ext::{
    assemble_g, build_measure, certify, estimate_dimensions, generate_set, run_suite, CertifyConfig, CircleSet,
    DimensionConfig, DiskExtension, DiskKernelParams, Extension, ExtensionParams, GridSpec, Measure64, MultiIndex,
    Set64, SetKind, SuiteConfig,
};

use output::{resolve, write_atomic, Header};

#[derive(Parser)]
#[command(name = "wext", version, about = "Integral Whitney-type extension of jets from compact sets")]
struct Cli {
    /// Worker threads; defaults to the available cores. Results do not
    /// depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for outputs written without an explicit `-o`.
    #[arg(long, global = true, env = "WHEXT_OUT_DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a sampled compact set as a point file.
    Gen(GenArgs),
    /// Build the dyadic doubling measure on a point file.
    Measure(MeasureArgs),
    /// Estimate the upper and lower dimensions of a point file.
    Dims(DimsArgs),
    /// Evaluate the extension and its derivatives on a grid.
    Extend(ExtendArgs),
    /// Evaluate the holomorphic extension on a polar grid of the disk.
    Holo(HoloArgs),
    /// Run a verification suite and write its reports.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    /// interval, cantor, sierpinski, circle, arc:A,B
    #[arg(long)]
    kind: String,
    #[arg(long)]
    depth: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MeasureArgs {
    /// Point file.
    set: PathBuf,
    #[arg(long)]
    depth: usize,
    /// Certify upper/lower growth exponents `GAMMA,LAMBDA`.
    #[arg(long, value_name = "GAMMA,LAMBDA")]
    certify: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DimsArgs {
    set: PathBuf,
    #[arg(long, default_value_t = 64)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExtendArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    measure: PathBuf,
    /// const1, sin, poly:c0,c1,.. or file:PATH
    #[arg(long, default_value = "const1")]
    jet: String,
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
    /// Kernel exponent; defaults to `n + alpha + 1`.
    #[arg(long)]
    q: Option<f64>,
    /// `lo:hi:count` per axis, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Derivative columns, comma separated; multi-index entries joined
    /// with `:` (e.g. `0:0,1:0,0:1`).
    #[arg(long, default_value = "0")]
    derivs: String,
    /// Multiply by a smooth cut-off equal to 1 on `B(0, R)`.
    #[arg(long, value_name = "R")]
    window: Option<f64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct HoloArgs {
    /// Circle-set file with one angle per line; overrides `--kind`.
    #[arg(long)]
    set: Option<PathBuf>,
    /// circle or arc:A,B
    #[arg(long, default_value = "circle")]
    kind: String,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// const1, identity or exp
    #[arg(long, default_value = "identity")]
    jet: String,
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Radius of the certified zero-free disk and of the output grid.
    #[arg(long, default_value_t = 0.95)]
    radius: f64,
    #[arg(long, default_value_t = 16)]
    rings: usize,
    #[arg(long, default_value_t = 64)]
    angles: usize,
    /// Also run the kernel-mass lower-bound scan.
    #[arg(long)]
    assumption6: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check or suite names (core, holo, all), comma separated.
    #[arg(long, default_value = "core")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "8,10,12")]
    depths: String,
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
    #[arg(long, default_value_t = 3.5)]
    q: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, default_value_t = 16)]
    partners: usize,
    #[arg(long, default_value_t = 0.25)]
    max_growth: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Pass,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let threads = cli.threads.unwrap_or_else(rayon::current_num_threads);
    if threads == 0 {
        bail!("--threads must be at least 1");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("cannot start the worker pool")?;
    println!("# threads = {threads}");
    let out_dir = cli.out_dir.as_deref();
    pool.install(|| match cli.command {
        Command::Gen(a) => cmd_gen(a, out_dir),
        Command::Measure(a) => cmd_measure(a, out_dir),
        Command::Dims(a) => cmd_dims(a, out_dir),
        Command::Extend(a) => cmd_extend(a, out_dir),
        Command::Holo(a) => cmd_holo(a, out_dir),
        Command::Verify(a) => cmd_verify(a, out_dir),
    })
}

fn load_set(path: &Path) -> Result<Set64> {
    Set64::load(path).with_context(|| format!("cannot load point file {}", path.display()))
}

fn load_measure(path: &Path, set: &Set64) -> Result<Measure64> {
    Measure64::load_on(path, set).with_context(|| format!("cannot load measure file {}", path.display()))
}

fn cmd_gen(a: GenArgs, out_dir: Option<&Path>) -> Result<Outcome> {
    let kind: SetKind = a.kind.parse()?;
    let set: Set64 = generate_set(&kind, a.depth)?;
    let path = resolve(a.output.as_deref(), out_dir, "E.pts");
    let mut h = Header::new("gen");
    h.set("kind", &a.kind)
        .set("depth", a.depth)
        .set("atoms", set.len())
        .set("dimension", set.dim())
        .set("resolution", set.resolution())
        .set("output", path.display());
    print!("{}", h.render());
    write_atomic(&path, &set.to_text())?;
    Ok(Outcome::Pass)
}

fn cmd_measure(a: MeasureArgs, out_dir: Option<&Path>) -> Result<Outcome> {
    let set = load_set(&a.set)?;
    let mu = build_measure(&set, a.depth)?;
    let path = resolve(a.output.as_deref(), out_dir, "mu.msr");
    let mut h = Header::new("measure");
    h.set("set", a.set.display())
        .set("depth", a.depth)
        .set("support", mu.support().len())
        .set("output", path.display());
    let mut outcome = Outcome::Pass;
    let mut report = String::new();
    if let Some(spec) = &a.certify {
        let (g, l) = spec
            .split_once(',')
            .ok_or_else(|| anyhow!("--certify expects GAMMA,LAMBDA, got `{spec}`"))?;
        let gamma: f64 = g.trim().parse().map_err(|_| anyhow!("bad gamma `{g}`"))?;
        let lambda: f64 = l.trim().parse().map_err(|_| anyhow!("bad lambda `{l}`"))?;
        let cfg = CertifyConfig::new(a.trials, a.seed);
        h.set("gamma", gamma)
            .set("lambda", lambda)
            .set("trials", a.trials)
            .set("seed", a.seed)
            .set("bound", cfg.bound);
        let cert = certify(&mu, gamma, lambda, &cfg)?;
        report = format!(
            "c_up = {}\nc_low = {}\nsamples = {}\nscale_floor = {}\npass = {}\n",
            cert.c_up, cert.c_low, cert.samples, cert.scale_floor, cert.pass
        );
        if !cert.pass {
            outcome = Outcome::CheckFailed;
        }
    }
    print!("{}{report}", h.render());
    write_atomic(&path, &mu.to_text())?;
    Ok(outcome)
}

fn cmd_dims(a: DimsArgs, out_dir: Option<&Path>) -> Result<Outcome> {
    let set = load_set(&a.set)?;
    let cfg = DimensionConfig {
        trials: a.trials,
        seed: a.seed,
        ..DimensionConfig::default()
    };
    let est = estimate_dimensions(&set, &cfg)?;
    let path = resolve(a.output.as_deref(), out_dir, "dims.tsv");
    let mut h = Header::new("dims");
    h.set("set", a.set.display())
        .set("trials", cfg.trials)
        .set("seed", cfg.seed)
        .set(
            "outer_radii",
            cfg.outer_radii.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
        )
        .set("steps_per_octave", cfg.steps_per_octave)
        .set("k_min", cfg.k_min)
        .set("floor_factor", cfg.floor_factor)
        .set("upper", est.upper)
        .set("lower", est.lower)
        .set("fit_residual", est.fit_residual);
    let mut body = h.render();
    // two blocks of `log k  log N`: largest counts, then smallest
    body.push_str("# log_k log_max_N\n");
    for r in &est.table {
        body.push_str(&format!("{} {}\n", r.k.ln(), (r.max_count as f64).ln()));
    }
    body.push_str("\n\n# log_k log_min_N\n");
    for r in &est.table {
        body.push_str(&format!("{} {}\n", r.k.ln(), (r.min_count as f64).ln()));
    }
    print!("{}", h.render());
    write_atomic(&path, &body)?;
    Ok(Outcome::Pass)
}

fn parse_grid(spec: &str, n: usize) -> Result<GridSpec<f64>> {
    let axes: Vec<&str> = spec.split(',').collect();
    if axes.len() != n {
        bail!("--grid has {} axes, the set has dimension {n}", axes.len());
    }
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    let mut counts = Vec::new();
    for ax in axes {
        let parts: Vec<&str> = ax.split(':').collect();
        let [l, h, c] = parts.as_slice() else {
            bail!("grid axis `{ax}` is not lo:hi:count");
        };
        lo.push(l.trim().parse::<f64>().map_err(|_| anyhow!("bad grid bound `{l}`"))?);
        hi.push(h.trim().parse::<f64>().map_err(|_| anyhow!("bad grid bound `{h}`"))?);
        counts.push(c.trim().parse::<usize>().map_err(|_| anyhow!("bad grid count `{c}`"))?);
    }
    Ok(GridSpec::spanning(lo, hi, counts)?)
}

fn default_grid(set: &Set64) -> Result<GridSpec<f64>> {
    let (lo, hi) = set.bbox();
    let pad = 0.25 * set.diameter().max(1e-3);
    let counts = vec![if set.dim() == 1 { 101 } else { 41 }; set.dim()];
    Ok(GridSpec::spanning(
        lo.iter().map(|v| v - pad).collect(),
        hi.iter().map(|v| v + pad).collect(),
        counts,
    )?)
}

fn parse_derivs(spec: &str, n: usize) -> Result<Vec<MultiIndex>> {
    spec.split(',')
        .map(|d| {
            let m = MultiIndex::parse(&d.replace(':', ",")).ok_or_else(|| anyhow!("bad derivative `{d}`"))?;
            if m.dim() != n {
                bail!("derivative `{d}` has {} entries, the set has dimension {n}", m.dim());
            }
            Ok(m)
        })
        .collect()
}

fn cmd_extend(a: ExtendArgs, out_dir: Option<&Path>) -> Result<Outcome> {
    let set = load_set(&a.set)?;
    let mu = load_measure(&a.measure, &set)?;
    let n = set.dim();
    let jet = jets::real_jet(&a.jet, &set, a.alpha)?;
    let q = a.q.unwrap_or(n as f64 + a.alpha + 1.0);
    let params = ExtensionParams::new(q, a.alpha)?;
    let spec = match &a.grid {
        Some(g) => parse_grid(g, n)?,
        None => default_grid(&set)?,
    };
    let columns = parse_derivs(&a.derivs, n)?;
    let path = resolve(a.output.as_deref(), out_dir, "grid.txt");
    let mut h = Header::new("extend");
    h.set("set", a.set.display())
        .set("measure", a.measure.display())
        .set("jet", &a.jet)
        .set("alpha", a.alpha)
        .set("q", q)
        .set("grid_counts", spec.counts.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
        .set("derivs", columns.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
        .set("window", a.window.map_or("none".to_string(), |r| r.to_string()))
        .set("output", path.display());
    print!("{}", h.render());
    let ext = Extension::new(&jet, &set, &mu, params)?;
    let grid = assemble_g(&ext, &spec, &columns, a.window)?;
    write_atomic(&path, &grid.to_text())?;
    Ok(Outcome::Pass)
}

fn cmd_holo(a: HoloArgs, out_dir: Option<&Path>) -> Result<Outcome> {
    let set = match &a.set {
        Some(p) => CircleSet::load(p).with_context(|| format!("cannot load circle-set file {}", p.display()))?,
        None => {
            let kind: SetKind = a.kind.parse()?;
            if !matches!(kind, SetKind::CircleArc { .. }) {
                bail!("holo needs a subset of the circle: circle or arc:A,B, got `{}`", a.kind);
            }
            CircleSet::from_planar(&generate_set(&kind, a.depth)?)?
        }
    };
    let mu = set.measure(a.depth)?;
    let jet = jets::complex_jet(&a.jet, &set, a.alpha)?;
    let params = DiskKernelParams::new(a.q, a.alpha)?;
    let path = resolve(a.output.as_deref(), out_dir, "disk.txt");
    let mut h = Header::new("holo");
    h.set("set", a.set.as_ref().map_or(a.kind.clone(), |p| p.display().to_string()))
        .set("atoms", set.len())
        .set("depth", a.depth)
        .set("jet", &a.jet)
        .set("q", a.q)
        .set("alpha", a.alpha)
        .set("radius", a.radius)
        .set("rings", a.rings)
        .set("angles", a.angles);
    let ext = DiskExtension::new(&jet, &set, &mu, params, a.radius)?;
    let cert = ext.certificate();
    h.set("winding", cert.winding).set("min_abs_h_on_contour", cert.min_modulus);
    println!("{}# output = {}", h.render(), path.display());
    let mut body = h.render();
    body.push_str("# r theta re im\n");
    let rings = a.rings.max(1);
    let angles = a.angles.max(1);
    for i in 0..=rings {
        let r = a.radius * i as f64 / rings as f64;
        for k in 0..angles {
            let theta = TAU * k as f64 / angles as f64;
            let f = ext.value(Complex::from_polar(r, theta))?;
            body.push_str(&format!("{r:.16e} {theta:.16e} {:.16e} {:.16e}\n", f.re, f.im));
        }
    }
    write_atomic(&path, &body)?;
    if a.assumption6 {
        let rep = check_assumption6(&set, &mu, a.q, &Assumption6Config::default())?;
        print!("{}", rep.to_text());
        if !rep.pass {
            return Ok(Outcome::CheckFailed);
        }
    }
    Ok(Outcome::Pass)
}

fn cmd_verify(a: VerifyArgs, out_dir: Option<&Path>) -> Result<Outcome> {
    let depths = a
        .depths
        .split(',')
        .map(|d| d.trim().parse::<usize>().map_err(|_| anyhow!("bad depth `{d}`")))
        .collect::<Result<Vec<_>>>()?;
    let cfg = SuiteConfig {
        selection: a.suite.split(',').map(str::to_string).collect(),
        seed: a.seed,
        depths,
        alpha: a.alpha,
        q: a.q,
        points: a.points,
        partners: a.partners,
        max_growth: a.max_growth,
        ..SuiteConfig::default()
    };
    let checks = cfg.checks()?;
    let path = resolve(a.output.as_deref(), out_dir, "reports.txt");
    let r: &RestrictionConfig = &cfg.restriction;
    let mut h = Header::new("verify");
    h.set("suite", &a.suite)
        .set("checks", checks.join(","))
        .set("seed", cfg.seed)
        .set("depths", &a.depths)
        .set("alpha", cfg.alpha)
        .set("q", cfg.q)
        .set("points", cfg.points)
        .set("partners", cfg.partners)
        .set("max_growth", cfg.max_growth)
        .set("restriction_centres", r.centres)
        .set("restriction_cells", r.cells)
        .set("circle_atoms", cfg.circle_atoms)
        .set("holo_q", cfg.holo_q)
        .set("spread", cfg.spread);
    print!("{}", h.render());
    let reports = run_suite(&cfg)?;
    for rep in &reports {
        println!("{}: pass={} C={}", rep.check, rep.pass, rep.constant);
    }
    let mut body = h.render();
    body.push('\n');
    body.push_str(&reports_to_text(&reports));
    write_atomic(&path, &body)?;
    Ok(if reports.iter().all(|r| r.pass) {
        Outcome::Pass
    } else {
        Outcome::CheckFailed
    })
}
