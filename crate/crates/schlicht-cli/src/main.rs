//! Command line front end for the verification harness.
//!
//! Exit codes: 0 when every scanned point passes, 1 when a scan or a stored
//! report carries violations or unconfirmed dips, 2 for configuration and
//! usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use schlicht::catalog::{affine_sigma, koebe, koebe_root, sigma_root_map};
use schlicht::functional::{FunctionalSpec, TermSpec};
use schlicht::maps::circle_inversion;
use schlicht::num::{cexact, parse_rational, rat, rat_int, Angle, Mode, PolarParam, Value};
use schlicht::report::VerificationReport;
use schlicht::scan::{
    grunsky_convergence_check, run_scan, zalcman_subdominance_check, ScanConfig,
};

#[derive(Parser)]
#[command(
    name = "schlicht",
    about = "Sharp coefficient inequality scans over truncated univalent maps",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    /// Rational complex arithmetic; equalities are certified
    Exact,
    /// Double precision; negative dips are replayed exactly when possible
    Approx,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Approx => Mode::Approx,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Clone)]
struct ScanTuning {
    /// Truncation order override
    #[arg(long)]
    order: Option<i64>,
    /// Arithmetic mode override
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Margin tolerance override
    #[arg(long)]
    tolerance: Option<f64>,
    /// Worker threads for the grid (default: the global pool)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Commands {
    /// Run the functional battery from a JSON configuration over the family grid
    Scan {
        /// JSON scan configuration (defaults when omitted)
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        tuning: ScanTuning,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Scan the coefficient difference functional for chosen indices
    Zalcman {
        /// Index n of a_n^2 - a_{2n-1}; repeat for several
        #[arg(long = "n", default_values_t = vec![3u32, 4, 5, 6])]
        indices: Vec<u32>,
        /// JSON array of perturbation terms added to the functional; each
        /// term must stay subdominant on the scanned grid
        #[arg(long)]
        perturb_json: Option<String>,
        #[command(flatten)]
        tuning: ScanTuning,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Block-norm convergence of the pair matrix for a root-family exterior map
    Grunsky {
        /// Branching order of the family
        #[arg(long, default_value_t = 3)]
        m: u32,
        /// Parameter modulus, as a rational like 1/2
        #[arg(long, default_value = "1/2")]
        modulus: String,
        /// Parameter phase in turns, as a rational like 1/8
        #[arg(long, default_value = "0")]
        phase: String,
        /// Coefficient window depth of the generated map
        #[arg(long, default_value_t = 70)]
        depth: i64,
        /// Matrix sizes to compare
        #[arg(long, value_delimiter = ',', default_values_t = vec![4usize, 8, 16, 32])]
        sizes: Vec<usize>,
        /// Known limiting norm to report the final gap against
        #[arg(long)]
        expected: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the built-in map families with their leading coefficients
    Catalog {
        /// Number of coefficients per map
        #[arg(long, default_value_t = 6)]
        count: u32,
    },
    /// Re-render a stored JSON report
    Report {
        /// Report file written by scan or zalcman
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Commands::Scan {
            config,
            tuning,
            output,
        } => {
            let mut cfg = load_config(config.as_deref())?;
            apply_tuning(&mut cfg, &tuning);
            scan_and_emit(&cfg, tuning.workers, &output)
        }
        Commands::Zalcman {
            indices,
            perturb_json,
            tuning,
            output,
        } => {
            let mut cfg = ScanConfig::default();
            apply_tuning(&mut cfg, &tuning);
            cfg.functionals = match &perturb_json {
                None => indices
                    .iter()
                    .map(|&n| FunctionalSpec::Zalcman { n })
                    .collect(),
                Some(raw) => {
                    let terms: Vec<TermSpec> = serde_json::from_str(raw)
                        .context("parsing --perturb-json")?;
                    for &n in &indices {
                        let sub = zalcman_subdominance_check(&cfg, n, &terms)?;
                        if !sub.ok {
                            bail!(
                                "perturbation is not subdominant for n={n}: grid maximum \
                                 {:.6} at {} exceeds {:.6}",
                                sub.max_abs,
                                sub.argmax_family,
                                sub.threshold
                            );
                        }
                    }
                    indices
                        .iter()
                        .map(|&n| FunctionalSpec::ZalcmanPerturbed {
                            n,
                            perturbation: terms.clone(),
                        })
                        .collect()
                }
            };
            scan_and_emit(&cfg, tuning.workers, &output)
        }
        Commands::Grunsky {
            m,
            modulus,
            phase,
            depth,
            sizes,
            expected,
            output,
        } => {
            let t = polar_from_strings(&modulus, &phase)?;
            let map = sigma_root_map(m, &t, depth, Mode::Approx)?;
            let check = grunsky_convergence_check(&map, &sizes, expected)?;
            let rendered = match output.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&check)?;
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    let mut s = String::from("size,norm\n");
                    for (size, norm) in sizes.iter().zip(&check.norms) {
                        s.push_str(&format!("{size},{norm:?}\n"));
                    }
                    s
                }
                Format::Text => {
                    let mut s = format!(
                        "{}: monotone={} admissible={}\n",
                        check.label, check.monotone, check.admissible
                    );
                    for (size, norm) in sizes.iter().zip(&check.norms) {
                        s.push_str(&format!("  size {size:>3}: {norm:.9}\n"));
                    }
                    if let Some(gap) = check.final_gap {
                        s.push_str(&format!("  final gap {gap:.3e}\n"));
                    }
                    s
                }
            };
            emit(&rendered, output.out.as_deref())?;
            Ok(if check.monotone && check.admissible { 0 } else { 1 })
        }
        Commands::Catalog { count } => {
            emit(&render_catalog(count)?, None)?;
            Ok(0)
        }
        Commands::Report { input, output } => {
            let raw = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let report = VerificationReport::from_json(&raw)?;
            let rendered = match output.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
                Format::Text => report.render_text(),
            };
            emit(&rendered, output.out.as_deref())?;
            Ok(if report.clean() { 0 } else { 1 })
        }
    }
}

fn load_config(path: Option<&std::path::Path>) -> Result<ScanConfig> {
    match path {
        None => Ok(ScanConfig::default()),
        Some(p) => {
            let raw = fs::read_to_string(p)
                .with_context(|| format!("reading {}", p.display()))?;
            Ok(ScanConfig::from_json(&raw)?)
        }
    }
}

fn apply_tuning(cfg: &mut ScanConfig, tuning: &ScanTuning) {
    if let Some(order) = tuning.order {
        cfg.order = order;
    }
    if let Some(mode) = tuning.mode {
        cfg.mode = mode.into();
    }
    if let Some(tolerance) = tuning.tolerance {
        cfg.tolerance = tolerance;
    }
}

fn scan_and_emit(cfg: &ScanConfig, workers: Option<usize>, output: &OutputArgs) -> Result<u8> {
    let report = run_scan(cfg, workers)?;
    let rendered = match output.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report.render_text(),
    };
    emit(&rendered, output.out.as_deref())?;
    Ok(if report.clean() { 0 } else { 1 })
}

fn emit(rendered: &str, out: Option<&std::path::Path>) -> Result<()> {
    match out {
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(rendered.as_bytes()).and_then(|_| stdout.flush()) {
                Ok(()) => Ok(()),
                // Downstream closed the pipe; it has all it wanted.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(e).context("writing to stdout"),
            }
        }
        Some(p) => fs::write(p, rendered)
            .with_context(|| format!("writing {}", p.display())),
    }
}

fn polar_from_strings(modulus: &str, phase: &str) -> Result<PolarParam> {
    let m = parse_rational(modulus)?;
    let ph = parse_rational(phase)?;
    Ok(PolarParam::new(m, Angle::from_turns(ph))?)
}

fn format_value(v: &Value) -> String {
    let c = v.approx();
    format!("{:+.6}{:+.6}i", c.re, c.im)
}

fn render_catalog(count: u32) -> Result<String> {
    let mut out = String::new();
    let order = count.max(2) as i64 + 2;

    out.push_str("disk maps (coefficients a_2..):\n");
    let cusp = koebe(&Angle::zero(), order, Mode::Approx)?;
    let quarter = koebe(&Angle::turns_fraction(1, 4), order, Mode::Approx)?;
    let mut disk = vec![cusp, quarter];
    for m in 2..=4u32 {
        disk.push(koebe_root(
            m,
            &PolarParam::new(rat_int(1), Angle::zero())?,
            order,
            Mode::Approx,
        )?);
    }
    for map in &disk {
        out.push_str(&format!("  {:<28}", map.label()));
        for n in 2..2 + count {
            out.push_str(&format!(" {}", format_value(&map.a(n)?)));
        }
        out.push('\n');
    }

    out.push_str("exterior maps (coefficients b_0..):\n");
    let mut ext = vec![
        circle_inversion(&koebe(&Angle::zero(), order + 2, Mode::Approx)?)?,
        affine_sigma(
            &Value::Exact(cexact(rat_int(0), rat_int(0))),
            &Value::Exact(cexact(rat(1, 2), rat_int(0))),
        )?,
    ];
    for m in 2..=4u32 {
        ext.push(sigma_root_map(
            m,
            &PolarParam::real(rat(1, 2)),
            order + 2,
            Mode::Approx,
        )?);
    }
    for map in &ext {
        out.push_str(&format!("  {:<28}", map.label()));
        for n in 0..count {
            out.push_str(&format!(" {}", format_value(&map.b(n)?)));
        }
        out.push('\n');
    }
    Ok(out)
}
