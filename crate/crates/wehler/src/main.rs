use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use wehler_core::dynamics::PhaseSpace;
use wehler_core::random::{random_surface, Degeneracy};
use wehler_core::stats::{empirical_curve, sanity_windows, ZVariant, DEFAULT_GRID_STEP};
use wehler_core::{is_prime, FpSurface, Side};

use wehler::experiment::{run_experiment, write_outputs, ExperimentConfig};
use wehler::fixtures::{format_point, signed_last_normalized, verify_fixtures};
use wehler::report::{census_csv, census_detail, curve_csv, header, points_csv, to_json, window_rows, windows_csv};
use wehler::surface_file;

const DEFAULT_PRIMES: &str = "29,37,59,61,83,113,131,149,167,181,191,223,251,269,307,353,401,457,503";

#[derive(Parser)]
#[command(name = "wehler", version, about = "Involution dynamics on Wehler K3 surfaces over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Nondegenerate,
    Degenerate,
}

impl From<Mode> for Degeneracy {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Nondegenerate => Degeneracy::NonDegenerate,
            Mode::Degenerate => Degeneracy::Degenerate,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Definition,
    SymmetricMean,
}

impl From<Variant> for ZVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Definition => ZVariant::Definition,
            Variant::SymmetricMean => ZVariant::SymmetricMean,
        }
    }
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if p < 3 || p > u64::from(u32::MAX) || !is_prime(p) {
        return Err(format!("{p} is not an odd prime below 2^32"));
    }
    Ok(p)
}

#[derive(clap::Args)]
struct SurfaceArgs {
    /// Surface file.
    #[arg(long)]
    surface: PathBuf,
    /// Prime to reduce a rational surface modulo.
    #[arg(long, value_parser = parse_prime)]
    prime: Option<u64>,
}

#[derive(clap::Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Directory for output files instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Rational points and the point-count lower bound.
    Points {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cycle census of phi, symmetric classification and pairing.
    Cycles {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_enum, default_value = "symmetric-mean")]
        z_variant: Variant,
        #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
        grid_step: f64,
    },
    /// Random surfaces per prime with averaged distribution curves.
    Experiment {
        #[arg(long, value_delimiter = ',', value_parser = parse_prime, default_value = DEFAULT_PRIMES)]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "nondegenerate")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "symmetric-mean")]
        z_variant: Variant,
        #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
        grid_step: f64,
        #[arg(long, default_value = "experiment-out")]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Golden checks on the bundled W1 surface.
    VerifyFixtures,
    /// Draw one random surface and print it as a surface file.
    RandomSurface {
        #[arg(long, value_parser = parse_prime)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "nondegenerate")]
        mode: Mode,
        /// Output file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failed checks map to exit code 1.
struct Outcome {
    pass: bool,
}

fn load(args: &SurfaceArgs) -> Result<FpSurface> {
    let text = fs::read_to_string(&args.surface).with_context(|| format!("reading {}", args.surface.display()))?;
    let file = surface_file::parse(&text).with_context(|| format!("parsing {}", args.surface.display()))?;
    Ok(file.to_fp(args.prime)?)
}

fn emit(out: &Option<PathBuf>, name: &str, text: &str) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(name);
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_points(surface: &SurfaceArgs, output: &OutputArgs) -> Result<Outcome> {
    let s = load(surface)?;
    let p = s.field().modulus();
    let mut points = s.enumerate_points();
    points.sort();
    let bound = (p * p + 1) as i128 - 22 * p as i128;
    let pass = points.len() as i128 >= bound;
    let status = if pass { "PASS" } else { "FAIL" };
    let summary = format!("p {p}\npoints {}\npoints >= p^2-22p+1 = {bound} : {status}\n", points.len());
    let head = header("points", None);
    match output.format {
        Some(Format::Csv) => {
            emit(&output.out, "points.csv", &points_csv(&points, &head)?)?;
            eprint!("{summary}");
        }
        Some(Format::Json) => {
            let json = serde_json::json!({
                "seed": null,
                "prime": p,
                "count": points.len(),
                "lower_bound": bound,
                "lower_bound_pass": pass,
                "points": points.iter().map(format_point).collect::<Vec<_>>(),
            });
            emit(&output.out, "points.json", &to_json(&json)?)?;
            eprint!("{summary}");
        }
        None => emit(&output.out, "points.txt", &(head + &summary))?,
    }
    Ok(Outcome { pass })
}

fn cmd_cycles(surface: &SurfaceArgs, output: &OutputArgs, variant: ZVariant, step: f64) -> Result<Outcome> {
    let s = load(surface)?;
    let space = PhaseSpace::build(&s)?;
    let census = space.census();
    let head = header("cycles", None);
    let identity = 2 * census.symmetric_count() == census.fix_x + census.fix_y;
    let pairing = census.asymmetric_pairing();
    let windows = sanity_windows(&space, &census);
    let pass = identity && pairing.is_ok() && windows.all_pass();
    let verdict = |b: bool| if b { "PASS" } else { "FAIL" };

    let mut text = head.clone();
    text += &format!("p {}\n", s.field().modulus());
    for side in Side::BOTH {
        let centers: Vec<String> = space
            .charts()
            .keys()
            .filter(|(sd, _)| *sd == side)
            .map(|(_, c)| format!("{:?}", signed_last_normalized(c)))
            .collect();
        text += &format!("degenerate_{} {} [{}]\n", side.name(), centers.len(), centers.join(", "));
    }
    text += &format!("points {}\nboundary_points {}\n", census.total, census.boundary);
    text += &format!("fix_x {}\nfix_y {}\n", census.fix_x, census.fix_y);
    for ((t, sym), n) in census.counts() {
        text += &format!("cycles period={t} {} count={n}\n", if sym { "symmetric" } else { "asymmetric" });
    }
    match &pairing {
        Ok(m) => {
            for (a, b) in m.iter().filter(|(a, b)| a < b) {
                let ca = &census.cycles[*a];
                let cb = &census.cycles[*b];
                text += &format!(
                    "pair period={} {} <-> {}\n",
                    ca.period,
                    format_point(&space.points()[ca.representative].point),
                    format_point(&space.points()[cb.representative].point)
                );
            }
        }
        Err(e) => text += &format!("pairing error: {e}\n"),
    }
    for c in &windows.checks {
        text += &format!("window {} bound={:.3} actual={} : {}\n", c.check, c.bound, c.actual, verdict(c.pass));
    }
    if !space.unresolved.is_empty() {
        text += &format!("unresolved_boundary_points {}\n", space.unresolved.len());
    }
    let identity_line = format!("sym_cycles == (fix_x+fix_y)/2 : {}\n", verdict(identity));

    match output.format {
        Some(Format::Csv) => {
            emit(&output.out, "census.csv", &census_csv(&census, &head)?)?;
            if let Some(dir) = &output.out {
                if let Ok(curve) = empirical_curve(&census, variant, step) {
                    emit(&Some(dir.clone()), "curve.csv", &curve_csv(&curve, &head)?)?;
                }
                emit(&Some(dir.clone()), "windows.csv", &windows_csv(window_rows(&windows, ""), &head)?)?;
            }
            eprint!("{identity_line}");
        }
        Some(Format::Json) => {
            emit(&output.out, "census.json", &to_json(&census_detail(&space, &census, None))?)?;
            eprint!("{identity_line}");
        }
        None => emit(&output.out, "cycles.txt", &(text + &identity_line))?,
    }
    Ok(Outcome { pass })
}

fn cmd_verify() -> Result<Outcome> {
    let mut pass = true;
    for c in verify_fixtures()? {
        println!("{} : {} ({})", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail);
        pass &= c.pass;
    }
    Ok(Outcome { pass })
}

fn cmd_random(prime: u64, seed: u64, mode: Degeneracy, out: &Option<PathBuf>) -> Result<Outcome> {
    let s = random_surface(prime, seed, mode)?;
    let text = header("random-surface", Some(seed)) + &surface_file::serialize(&s);
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(Outcome { pass: true })
}

fn cmd_experiment(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let report = run_experiment(cfg)?;
    let files = write_outputs(&report, out)?;
    for pr in &report.primes {
        println!(
            "p {} surfaces {} failures {} averaged_area_error {} mean_area_error {} symmetric_fraction {} windows {}",
            pr.prime,
            pr.surfaces.len(),
            pr.failures.len(),
            pr.averaged_area_error.map_or("-".into(), |x| format!("{x:.3}")),
            pr.mean_area_error.map_or("-".into(), |x| format!("{x:.3}")),
            pr.mean_symmetric_fraction.map_or("-".into(), |x| format!("{x:.4}")),
            if pr.windows_pass { "PASS" } else { "FAIL" },
        );
    }
    println!("wrote {} files to {}", files.len(), out.display());
    Ok(Outcome { pass: report.all_windows_pass() && report.failure_count() == 0 })
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Points { surface, output } => cmd_points(&surface, &output),
        Command::Cycles { surface, output, z_variant, grid_step } => {
            cmd_cycles(&surface, &output, z_variant.into(), grid_step)
        }
        Command::Experiment { primes, count, seed, mode, z_variant, grid_step, out, threads } => {
            let cfg = ExperimentConfig {
                count,
                primes,
                seed,
                mode: mode.into(),
                variant: z_variant.into(),
                grid_step,
                threads,
            };
            cmd_experiment(&cfg, &out)
        }
        Command::VerifyFixtures => cmd_verify(),
        Command::RandomSurface { prime, seed, mode, out } => cmd_random(prime, seed, mode.into(), &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome { pass: true }) => ExitCode::SUCCESS,
        Ok(Outcome { pass: false }) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
