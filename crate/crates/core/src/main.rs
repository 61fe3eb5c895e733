//! `ramanujan`: command-line front end for the ORS/ORPT library.
//!
//! Exit codes: 0 success, 2 usage error, 3 format error, 4 verification failure.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orpt::filterbank::{equivalent_filters, Cascade, FilterBank, WaveletDecomposition};
use orpt::image2d::{
    coefficients_to_reach, cumulative_energy, forward2d, inverse2d, BandLayout, ImagePlane,
    Transform2d,
};
use orpt::io::{
    fmt_real, read_pgm, read_signal, read_table, write_pgm, write_signal, write_table, FormatError,
    Table,
};
use orpt::orpt::{Normalization, OrptBasis, DEFAULT_PERIOD_THRESHOLD};
use orpt::ors::ors_divisor;

#[derive(Parser)]
#[command(
    name = "ramanujan",
    version,
    about = "Orthogonal Ramanujan sums, ORPT and q-band wavelets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orthogonal Ramanujan sequences.
    #[command(subcommand)]
    Ors(OrsCommand),
    /// The periodic transform `R_N`.
    #[command(subcommand)]
    Orpt(OrptCommand),
    /// Hidden-period detection.
    #[command(subcommand)]
    Period(PeriodCommand),
    /// q-band wavelet analysis and synthesis of 1-D signals.
    #[command(subcommand)]
    Dwt(DwtCommand),
    /// Separable 2-D transform of PGM images.
    #[command(subcommand)]
    Image(ImageCommand),
    /// Check unitarity and perfect reconstruction of the q-band bank.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum OrsCommand {
    /// Print one sequence as CSV.
    Gen {
        /// Period (divisor) of the sequence.
        #[arg(long)]
        q: usize,
        /// Phase per prime factor, comma separated.
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        /// Shift per prime factor, comma separated.
        #[arg(long, value_delimiter = ',')]
        j: Vec<usize>,
        /// Output length (multiple of q); defaults to q.
        #[arg(long = "N")]
        n: Option<usize>,
    },
}

#[derive(Subcommand)]
enum OrptCommand {
    /// Write `R_N` as CSV, one labelled column per basis sequence.
    Build {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Signal file to coefficient CSV.
    Forward(OrptArgs),
    /// Coefficient CSV (the `beta` column) to signal file.
    Inverse(OrptArgs),
}

#[derive(Args)]
struct OrptArgs {
    #[arg(long = "N")]
    n: usize,
    #[arg(long = "in")]
    input: PathBuf,
    /// Use the orthonormal (energy preserving) scaling.
    #[arg(long)]
    normalized: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum PeriodCommand {
    /// Report divisor-subspace energies and the detected period.
    Detect {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PERIOD_THRESHOLD)]
        threshold: f64,
    },
}

#[derive(Subcommand)]
enum DwtCommand {
    /// Signal file to band CSV (`stage,band,index,value`).
    Analyze(DwtArgs),
    /// Band CSV back to a signal file.
    Synthesize(DwtArgs),
}

#[derive(Args)]
struct DwtArgs {
    #[arg(long)]
    q: usize,
    #[arg(long)]
    stages: u32,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Use the single-filter equivalents instead of the recursive cascade.
    #[arg(long)]
    nonrecursive: bool,
}

#[derive(Subcommand)]
enum ImageCommand {
    /// Transform an image; writes the coefficient CSV and a log-magnitude view.
    Forward {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        stages: u32,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        coeffs: PathBuf,
    },
    /// Rebuild an image from a coefficient CSV.
    Inverse {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        stages: u32,
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cumulative-energy curves for several band counts plus the pixel basis.
    Energy {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "q-list", value_delimiter = ',', required = true)]
        q_list: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        stages: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    q: usize,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Random signals per round-trip check.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Test hook: perturb one analysis coefficient before checking.
    #[arg(long, hide = true)]
    corrupt_filter: bool,
}

enum CliError {
    Usage(String),
    Format(String),
    Verification(String),
}

impl From<orpt::Error> for CliError {
    fn from(e: orpt::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Format(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ors(OrsCommand::Gen { q, k, j, n }) => ors_gen(q, k, j, n),
        Command::Orpt(cmd) => orpt_cmd(cmd),
        Command::Period(PeriodCommand::Detect { input, threshold }) => {
            period_detect(&input, threshold)
        }
        Command::Dwt(DwtCommand::Analyze(args)) => dwt_analyze(&args),
        Command::Dwt(DwtCommand::Synthesize(args)) => dwt_synthesize(&args),
        Command::Image(cmd) => image_cmd(cmd),
        Command::Verify(args) => verify(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Format(m)) => {
            eprintln!("format error: {m}");
            ExitCode::from(3)
        }
        Err(CliError::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(4)
        }
    }
}

fn print_table(t: &Table) -> CliResult {
    t.to_writer(std::io::stdout().lock())
        .map_err(|e| CliError::Format(e.to_string()))
}

fn ors_gen(q: usize, mut k: Vec<usize>, mut j: Vec<usize>, n: Option<usize>) -> CliResult {
    let primes = orpt::number_theory::factorize(q)?.len();
    // omitted tuples default to all zeros
    if k.is_empty() {
        k = vec![0; primes];
    }
    if j.is_empty() {
        j = vec![0; primes];
    }
    let v = ors_divisor(q, &k, &j, n.unwrap_or(q))?;
    let mut t = Table::new(["n", "value"]);
    for (i, s) in v.samples().iter().enumerate() {
        t.push(vec![i.to_string(), s.to_string()]);
    }
    print_table(&t)
}

fn orpt_cmd(cmd: OrptCommand) -> CliResult {
    match cmd {
        OrptCommand::Build { n, out } => {
            let basis = OrptBasis::new(n)?;
            let mut t = Table::new(
                std::iter::once("n".to_string()).chain(basis.labels().map(|l| l.to_string())),
            );
            for (i, row) in basis.matrix().into_iter().enumerate() {
                t.push(
                    std::iter::once(i.to_string())
                        .chain(row.iter().map(i64::to_string))
                        .collect(),
                );
            }
            write_table(&t, &out)?;
        }
        OrptCommand::Forward(args) => {
            let x = read_signal(&args.input)?;
            let basis = OrptBasis::new(args.n)?;
            let coeffs = basis.forward(&x, normalization(args.normalized))?;
            let mut t = Table::new(["index", "label", "divisor", "sq_norm", "beta"]);
            for (i, (c, b)) in basis.columns().iter().zip(&coeffs.beta).enumerate() {
                t.push(vec![
                    i.to_string(),
                    c.label().to_string(),
                    c.period().to_string(),
                    c.sq_norm().to_string(),
                    fmt_real(*b),
                ]);
            }
            write_table(&t, &args.out)?;
        }
        OrptCommand::Inverse(args) => {
            let table = read_table(&args.input)?;
            let beta = table
                .reals("beta")
                .map_err(|m| CliError::Format(format!("{}: {m}", args.input.display())))?;
            let basis = OrptBasis::new(args.n)?;
            let x = basis.synthesize(&beta, normalization(args.normalized))?;
            write_signal(&x, &args.out)?;
        }
    }
    Ok(())
}

fn normalization(flag: bool) -> Normalization {
    if flag {
        Normalization::Orthonormal
    } else {
        Normalization::Integer
    }
}

fn period_detect(input: &Path, threshold: f64) -> CliResult {
    let x = read_signal(input)?;
    let basis = OrptBasis::new(x.len())?;
    let report = basis.detect_periods(&x, threshold)?;
    println!("divisor,energy,fraction");
    for (d, e) in &report.energies {
        let frac = if report.total > 0.0 {
            e / report.total
        } else {
            0.0
        };
        println!("{d},{},{}", fmt_real(*e), fmt_real(frac));
    }
    let divisors: Vec<String> = report.divisors.iter().map(usize::to_string).collect();
    println!("detected: {}", divisors.join(" "));
    match report.period {
        Some(p) => println!("period: {p}"),
        None => println!("period: none (zero signal)"),
    }
    Ok(())
}

fn dwt_analyze(args: &DwtArgs) -> CliResult {
    let z = read_signal(&args.input)?;
    let dec = if args.nonrecursive {
        equivalent_filters(args.q, z.len(), args.stages)?.analyze(&z)?
    } else {
        Cascade::new(args.q, z.len(), args.stages)?.analyze(&z)?
    };
    let mut t = Table::new(["stage", "band", "index", "value"]);
    let mut push = |stage: usize, band: usize, values: &[f64]| {
        for (i, v) in values.iter().enumerate() {
            t.push(vec![
                stage.to_string(),
                band.to_string(),
                i.to_string(),
                fmt_real(*v),
            ]);
        }
    };
    for (l, stage) in dec.details.iter().enumerate() {
        for (i, band) in stage.iter().enumerate() {
            push(l + 1, i + 2, band);
        }
    }
    push(dec.stages(), 1, &dec.smooth);
    write_table(&t, &args.out)?;
    Ok(())
}

fn dwt_synthesize(args: &DwtArgs) -> CliResult {
    let table = read_table(&args.input)?;
    let bad = |m: String| CliError::Format(format!("{}: {m}", args.input.display()));
    let stage = table.reals("stage").map_err(bad)?;
    let band = table.reals("band").map_err(bad)?;
    let index = table.reals("index").map_err(bad)?;
    let value = table.reals("value").map_err(bad)?;
    let mut bands: BTreeMap<(usize, usize), BTreeMap<usize, f64>> = BTreeMap::new();
    for i in 0..value.len() {
        bands
            .entry((stage[i] as usize, band[i] as usize))
            .or_default()
            .insert(index[i] as usize, value[i]);
    }
    let (q, p) = (args.q, args.stages as usize);
    let n = value.len();
    let mut take = |stage: usize, band: usize, len: usize| -> CliResult<Vec<f64>> {
        let entries = bands
            .remove(&(stage, band))
            .ok_or_else(|| bad(format!("missing band {band} of stage {stage}")))?;
        if entries.len() != len || entries.keys().last() != Some(&(len - 1)) {
            return Err(bad(format!(
                "band {band} of stage {stage} should hold {len} samples"
            )));
        }
        Ok(entries.into_values().collect())
    };
    if q < 2 || p == 0 || n % q.pow(p as u32) != 0 {
        return Err(CliError::Usage(format!(
            "{n} samples cannot hold {p} stages of {q} bands"
        )));
    }
    let details = (1..=p)
        .map(|l| {
            (2..=q)
                .map(|i| take(l, i, n / q.pow(l as u32)))
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    let smooth = take(p, 1, n / q.pow(p as u32))?;
    if !bands.is_empty() {
        return Err(bad("unexpected extra bands".into()));
    }
    let dec = WaveletDecomposition {
        q,
        len: n,
        details,
        smooth,
    };
    let z = if args.nonrecursive {
        equivalent_filters(q, n, args.stages)?.synthesize(&dec)?
    } else {
        Cascade::new(q, n, args.stages)?.synthesize(&dec)?
    };
    write_signal(&z, &args.out)?;
    Ok(())
}

fn plane_table(plane: &ImagePlane) -> Table {
    let mut t = Table::new((0..plane.width).map(|c| format!("c{c}")));
    for r in 0..plane.height {
        t.push(plane.row(r).iter().map(|v| fmt_real(*v)).collect());
    }
    t
}

fn plane_from_table(table: &Table, path: &Path) -> CliResult<ImagePlane> {
    let width = table.header.len();
    let mut samples = Vec::with_capacity(width * table.rows.len());
    for (r, row) in table.rows.iter().enumerate() {
        if row.len() != width {
            return Err(CliError::Format(format!(
                "{}: row {} is not {width} wide",
                path.display(),
                r + 1
            )));
        }
        for cell in row {
            samples.push(cell.trim().parse().map_err(|_| {
                CliError::Format(format!(
                    "{}: bad coefficient {cell:?} in row {}",
                    path.display(),
                    r + 1
                ))
            })?);
        }
    }
    Ok(ImagePlane::new(table.rows.len(), width, 255, samples)?)
}

/// `log(1 + |c|)` stretched to the 8-bit range.
fn magnitude_view(coeffs: &ImagePlane) -> ImagePlane {
    let logs: Vec<f64> = coeffs.samples.iter().map(|c| c.abs().ln_1p()).collect();
    let peak = logs.iter().copied().fold(0.0, f64::max);
    let scale = if peak > 0.0 { 255.0 / peak } else { 0.0 };
    ImagePlane {
        samples: logs.into_iter().map(|v| v * scale).collect(),
        maxval: 255,
        ..coeffs.clone()
    }
}

fn image_cmd(cmd: ImageCommand) -> CliResult {
    match cmd {
        ImageCommand::Forward {
            q,
            stages,
            input,
            out,
            coeffs,
        } => {
            let img = read_pgm(&input)?;
            let t = forward2d(&img, q, stages)?;
            write_table(&plane_table(&t.coeffs), &coeffs)?;
            write_pgm(&magnitude_view(&t.coeffs), &out)?;
        }
        ImageCommand::Inverse {
            q,
            stages,
            coeffs,
            out,
        } => {
            let plane = plane_from_table(&read_table(&coeffs)?, &coeffs)?;
            let layout = BandLayout {
                height: plane.height,
                width: plane.width,
                q_rows: q,
                q_cols: q,
                stages,
            };
            let img = inverse2d(&Transform2d {
                coeffs: plane,
                layout,
            })?;
            write_pgm(&img, &out)?;
        }
        ImageCommand::Energy {
            input,
            q_list,
            stages,
            out,
        } => {
            let img = read_pgm(&input)?;
            let mut curves = vec![("identity".to_string(), cumulative_energy(&img.samples)?)];
            for &q in &q_list {
                let t = forward2d(&img, q, stages)?;
                let energy = t.coeffs.energy();
                let drift = (energy - img.energy()).abs() / img.energy().max(f64::MIN_POSITIVE);
                if drift > 1e-9 {
                    return Err(CliError::Verification(format!(
                        "R_{q}: energy drift {drift:e}"
                    )));
                }
                curves.push((format!("R_{q}"), cumulative_energy(&t.coeffs.samples)?));
            }
            let mut t = Table::new(curves.iter().map(|(name, _)| name.clone()));
            for i in 0..img.samples.len() {
                t.push(curves.iter().map(|(_, c)| fmt_real(c[i])).collect());
            }
            write_table(&t, &out)?;
            for (name, curve) in &curves {
                println!(
                    "{name}: 99% energy in {} coefficients",
                    coefficients_to_reach(curve, 0.99)
                );
            }
        }
    }
    Ok(())
}

fn verify(args: &VerifyArgs) -> CliResult {
    let mut bank = FilterBank::from_orpt(args.q, args.n)?;
    if args.corrupt_filter {
        let mut filters = bank.into_filters();
        filters[args.q - 1][0] += 1e-3;
        bank = FilterBank::from_filters(args.q, filters)?;
    }
    let unitary = bank.verify_unitary();
    let reconstruction = bank.reconstruction_deviation();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut round_trip: f64 = 0.0;
    for _ in 0..args.trials {
        let z: Vec<f64> = (0..args.n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let back = bank.synthesize(&bank.analyze(&z)?)?;
        let err = z
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        round_trip = round_trip.max(err);
    }
    let tol = orpt::filterbank::VERIFY_TOLERANCE;
    let checks = [
        ("system matrix unitary", unitary.max_deviation),
        ("reconstruction vector", reconstruction),
        ("analysis/synthesis round trip", round_trip),
    ];
    let mut failed = Vec::new();
    for (name, dev) in checks {
        let ok = dev < tol;
        println!(
            "{} {name}: max deviation {dev:.3e}",
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}
