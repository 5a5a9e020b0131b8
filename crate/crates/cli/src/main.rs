use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ffwavelet::field::{find_k, PrimeModulus};
use ffwavelet::fourier::TransformConvention;
use ffwavelet::frames::{
    build_system_with, demo_no_full_space_parseval, duplication_experiment, frame_bounds_with,
    mother_wavelet_with, scan_orthogonal_systems, FrameOptions, DEFAULT_SEED,
};
use ffwavelet::geometry::{circles, lifted_rotation_group, rotation_group, Automorphism};
use ffwavelet::points::{PointSet, Space};
use ffwavelet::tiling::{
    canonical_spectrum, construct_wavelet_frame_set, spectrum_search, verify_multiplicative_tiling,
    verify_q1mod4_obstruction, verify_spectral_pair_with_tol, verify_translational_tiling,
    wavelet_tiling_partner, DEFAULT_SEARCH_LIMIT,
};
use ffwavelet::tolerance::CERTIFICATE;
use ffwavelet::{Error, ModClass};

#[derive(Parser, Debug)]
#[command(
    name = "ffwavelet",
    version,
    about = "Wavelet frame sets over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct the wavelet frame set for q ≡ 3 (mod 4).
    Construct(ConstructArgs),
    /// Run tiling and spectral certificates on a point-set file.
    Verify(VerifyArgs),
    /// Frame bounds of the wavelet system generated by a point set.
    Analyze(AnalyzeArgs),
    /// Exhaustive search for a spectrum of a point set.
    SearchSpectrum(SearchArgs),
    /// Falsification and counterexample experiments.
    Demo(DemoArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Also write the canonical spectrum.
    #[arg(long)]
    spectrum_out: Option<PathBuf>,
    /// Also write the rotation group (block-lifted for d > 2).
    #[arg(long)]
    group_out: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Multiplicative,
    Translational,
    Spectral,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long, value_enum, default_value_t = Check::All)]
    check: Check,
    /// Translation partner Λ; defaults to {t·e₂ : t ∈ F_q}.
    #[arg(long)]
    partner: Option<PathBuf>,
    /// Spectrum L; defaults to the canonical spectrum of a graph.
    #[arg(long)]
    spectrum: Option<PathBuf>,
    #[arg(long, default_value_t = CERTIFICATE)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long)]
    set: PathBuf,
    /// Omit R^k from the rotation group.
    #[arg(long)]
    skip_rotation: Vec<u64>,
    #[arg(long, default_value_t = CERTIFICATE)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value = "unitary")]
    convention: TransformConvention,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEARCH_LIMIT)]
    limit: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Experiment {
    /// No Parseval wavelet system on all of L²(F_q^d).
    NoParseval,
    /// Bounds of the duplicated system W ∪ W.
    Duplicate,
    /// Rotational orbits for q ≡ 1 (mod 4) miss S₀ \ {0}.
    Q1mod4,
    /// Scan for orthogonal systems whose set contains the origin.
    Orthogonal,
}

#[derive(Args, Debug)]
struct DemoArgs {
    #[arg(value_enum)]
    experiment: Experiment,
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] Error),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Certified outcome of a command.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Valid,
    Invalid,
}

impl Outcome {
    fn from_bool(valid: bool) -> Self {
        if valid {
            Outcome::Valid
        } else {
            Outcome::Invalid
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Analyze(a) => analyze(a),
        Command::SearchSpectrum(a) => search(a),
        Command::Demo(a) => demo(a),
    };
    match result {
        Ok(Outcome::Valid) => ExitCode::SUCCESS,
        Ok(Outcome::Invalid) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn modulus(q: u64) -> CliResult<PrimeModulus> {
    Ok(PrimeModulus::new(q)?)
}

fn require_three_mod_four(q: PrimeModulus) -> CliResult<()> {
    if q.require(ModClass::ThreeModFour).is_err() {
        return Err(CliError::Usage(format!(
            "q = {} ≡ 1 (mod 4) unsupported: S₀ has {} points and no rotational orbit reaches \
             S₀ \\ {{0}} (see `demo q1mod4 --q {}`)",
            q.get(),
            2 * q.get() - 1,
            q.get()
        )));
    }
    Ok(())
}

fn read_set(path: &Path) -> CliResult<PointSet> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

/// Writes the report to `--out`, then prints either the JSON or the summary.
fn emit<T: Serialize>(output: &OutputArgs, report: &T, summary: &str) -> CliResult<()> {
    let text = to_json(report);
    if let Some(path) = &output.out {
        write_text(path, &text)?;
    }
    if output.json {
        print!("{text}");
    } else {
        print!("{summary}");
    }
    Ok(())
}

fn group_for(space: Space) -> CliResult<Vec<Automorphism>> {
    let q = space.modulus();
    require_three_mod_four(q)?;
    Ok(match space.dim() {
        2 => rotation_group(q)?,
        d if d > 2 => lifted_rotation_group(q, d)?,
        d => return Err(CliError::Input(Error::InvalidDimension(d))),
    })
}

fn construct(args: ConstructArgs) -> CliResult<Outcome> {
    let q = modulus(args.q)?;
    require_three_mod_four(q)?;
    let set = construct_wavelet_frame_set(q, args.d)?;
    let k = find_k(q)?;
    let base = construct_wavelet_frame_set(q, 2)?;
    let per_circle: Vec<usize> = circles(q)?
        .iter()
        .map(|c| base.intersection(&c.points).len())
        .collect();
    if let Some(path) = &args.spectrum_out {
        write_text(path, &to_json(&canonical_spectrum(&set)?))?;
    }
    if let Some(path) = &args.group_out {
        write_text(path, &to_json(&group_for(set.space())?))?;
    }
    let mut summary = format!(
        "constructed E in F_{}^{}: #E = {}, k = {}\n",
        q.get(),
        args.d,
        set.len(),
        k.value()
    );
    let counts: Vec<String> = per_circle
        .iter()
        .enumerate()
        .map(|(r, c)| format!("S_{r}:{c}"))
        .collect();
    summary.push_str(&format!(
        "points per circle (plane factor): {}\n",
        counts.join(" ")
    ));
    let text = to_json(&set);
    if let Some(path) = &args.output.out {
        write_text(path, &text)?;
    }
    if args.output.json {
        print!("{text}");
    } else {
        print!("{summary}");
    }
    Ok(Outcome::Valid)
}

fn verify(args: VerifyArgs) -> CliResult<Outcome> {
    if args.tol <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let set = read_set(&args.set)?;
    let space = set.space();
    let mut report = serde_json::Map::new();
    let mut summary = String::new();
    let mut valid = true;
    let wants = |c: Check| args.check == c || args.check == Check::All;

    if wants(Check::Translational) {
        let partner = match &args.partner {
            Some(p) => read_set(p)?,
            None => wavelet_tiling_partner(space.modulus(), space.dim())?,
        };
        let cert = verify_translational_tiling(&set, &partner)?;
        valid &= cert.is_valid();
        summary.push_str(&format!("translational: {}\n", verdict(cert.is_valid())));
        report.insert(
            "translational".into(),
            serde_json::to_value(&cert).expect("serializable"),
        );
    }
    if wants(Check::Multiplicative) {
        // `all` checks E*; an explicit multiplicative check takes E as given.
        let target = if args.check == Check::All {
            set.star()
        } else {
            set.clone()
        };
        let cert = verify_multiplicative_tiling(&target, &group_for(space)?)?;
        valid &= cert.is_valid();
        summary.push_str(&format!("multiplicative: {}\n", verdict(cert.is_valid())));
        report.insert(
            "multiplicative".into(),
            serde_json::to_value(&cert).expect("serializable"),
        );
    }
    if wants(Check::Spectral) {
        let spectrum = match &args.spectrum {
            Some(p) => read_set(p)?,
            None => canonical_spectrum(&set)?,
        };
        let pair = verify_spectral_pair_with_tol(&set, &spectrum, args.tol)?;
        valid &= pair.valid;
        summary.push_str(&format!(
            "spectral: {} (#E = {}, #L = {}, Gram residual {:e})\n",
            verdict(pair.valid),
            set.len(),
            spectrum.len(),
            pair.gram_residual
        ));
        report.insert(
            "spectral".into(),
            json!({
                "valid": pair.valid,
                "gram_residual": pair.gram_residual,
                "cardinality": {"set": set.len(), "spectrum": spectrum.len()},
                "spectrum": spectrum,
            }),
        );
    }
    report.insert("valid".into(), valid.into());
    emit(&args.output, &report, &summary)?;
    Ok(Outcome::from_bool(valid))
}

fn verdict(valid: bool) -> &'static str {
    if valid {
        "valid"
    } else {
        "INVALID"
    }
}

fn analyze(args: AnalyzeArgs) -> CliResult<Outcome> {
    if args.tol <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let set = read_set(&args.set)?;
    let space = set.space();
    let mut group = group_for(space)?;
    let max = space.q() as u64;
    for &k in &args.skip_rotation {
        if k > max {
            return Err(CliError::Usage(format!(
                "--skip-rotation {k} exceeds q = {max}"
            )));
        }
    }
    group = group
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !args.skip_rotation.contains(&(*i as u64)))
        .map(|(_, a)| a)
        .collect();
    let spectrum = canonical_spectrum(&set)?;
    let psi = mother_wavelet_with(&set, args.convention)?;
    let system = build_system_with(&psi, &group, &spectrum, args.convention)?;
    let options = FrameOptions {
        tol: args.tol,
        seed: args.seed,
    };
    let report = frame_bounds_with(&system, &PointSet::nonzero(space), &options)?;
    let (num, den) = report.redundancy();
    let summary = format!(
        "frame bounds on PW_Y: A = {:.12}, B = {:.12}\nparseval: {}\nvectors {}, dim {}, redundancy {}/{} = {}/{}\n",
        report.lower, report.upper, report.parseval, report.vectors, report.dim, report.vectors, report.dim, num, den
    );
    emit(&args.output, &report, &summary)?;
    Ok(Outcome::from_bool(report.parseval))
}

fn search(args: SearchArgs) -> CliResult<Outcome> {
    let set = read_set(&args.set)?;
    let found = spectrum_search(&set, args.limit)?;
    let summary = match &found {
        Some(l) => format!("spectrum of size {} found: {:?}\n", l.len(), l.points()),
        None => "no spectrum exists\n".to_string(),
    };
    let report = json!({ "found": found.is_some(), "spectrum": found });
    emit(&args.output, &report, &summary)?;
    Ok(Outcome::from_bool(found.is_some()))
}

fn demo(args: DemoArgs) -> CliResult<Outcome> {
    let q = modulus(args.q)?;
    match args.experiment {
        Experiment::NoParseval => {
            let r = demo_no_full_space_parseval(q, args.d, args.trials, args.seed)?;
            let summary = format!(
                "{} exhaustive + {} random configurations; minimum tightness residual {:.6}; Parseval found: {}\n",
                r.exhaustive_configurations, r.random_configurations, r.min_residual, r.parseval_found
            );
            emit(&args.output, &r, &summary)?;
            Ok(Outcome::from_bool(!r.parseval_found))
        }
        Experiment::Duplicate => {
            require_three_mod_four(q)?;
            let r = duplication_experiment(q)?;
            let summary = format!(
                "W: A = {:.12}, B = {:.12}\nW ∪ W: A = {:.12}, B = {:.12}\nstated bound A/2 = {} reproduced: {}\n",
                r.original.lower,
                r.original.upper,
                r.duplicate.lower,
                r.duplicate.upper,
                r.stated_bound,
                r.stated_bound_reproduced
            );
            emit(&args.output, &r, &summary)?;
            Ok(Outcome::Valid)
        }
        Experiment::Q1mod4 => {
            let r = verify_q1mod4_obstruction(q)?;
            let summary = format!(
                "#S_0 = {} (expected {}); uncovered points of Y: {}\n",
                r.s0_count,
                r.expected_s0_count,
                r.uncovered.map_or("varies".to_string(), |u| u.to_string())
            );
            emit(&args.output, &r, &summary)?;
            Ok(Outcome::from_bool(
                r.uncovered == Some(2 * q.get() as usize - 2),
            ))
        }
        Experiment::Orthogonal => {
            let r = scan_orthogonal_systems(q, args.d)?;
            let summary = format!(
                "{} systems checked; {} orthogonal; {} of those with 0 ∈ E\n",
                r.systems_checked, r.orthogonal_systems, r.orthogonal_with_origin
            );
            emit(&args.output, &r, &summary)?;
            Ok(Outcome::Valid)
        }
    }
}
