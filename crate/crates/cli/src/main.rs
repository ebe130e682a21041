//! `miso-pareto`: computes rate-region boundaries for a two-user MISO
//! interference channel and writes them as CSV with a gnuplot script.

mod benchmark;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Parser};
use rayon::prelude::*;

use miso_pareto::boundary_dd::boundary_dd;
use miso_pareto::boundary_dn::{boundary_dn_with, boundary_nd_with};
use miso_pareto::boundary_nn::{boundary_nn_closed_form, boundary_nn_numerical};
use miso_pareto::channel::{derive_constants, random_rayleigh};
use miso_pareto::oracle::brute_force_boundary_with;
use miso_pareto::pareto::union_boundary;
use miso_pareto::{
    Boundary, ChannelConstants, ChannelRealization, DecodingScenario, OracleConfig, Preset, SweepMode,
};

const EXIT_INVALID: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_IO: u8 = 4;

/// A boundary the CLI can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    NnNumerical,
    NnClosed,
    Dn,
    Nd,
    Dd,
    Union,
    Oracle(DecodingScenario),
}

impl Target {
    pub const FAST: [Target; 5] = [Target::NnNumerical, Target::NnClosed, Target::Dn, Target::Nd, Target::Dd];

    pub fn name(self) -> String {
        match self {
            Target::NnNumerical => "nn-num".into(),
            Target::NnClosed => "nn-closed".into(),
            Target::Dn => "dn".into(),
            Target::Nd => "nd".into(),
            Target::Dd => "dd".into(),
            Target::Union => "union".into(),
            Target::Oracle(s) => format!("oracle:{}", s.as_str()),
        }
    }

    /// Base name of the CSV file.
    pub fn file_stem(self) -> String {
        self.name().replace([':', '-'], "_")
    }

    /// Scenario whose brute-force oracle checks this fast method.
    pub fn scenario(self) -> Option<DecodingScenario> {
        match self {
            Target::NnNumerical | Target::NnClosed => Some(DecodingScenario::NN),
            Target::Dn => Some(DecodingScenario::DN),
            Target::Nd => Some(DecodingScenario::ND),
            Target::Dd => Some(DecodingScenario::DD),
            Target::Oracle(s) => Some(s),
            Target::Union => None,
        }
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let t = match s.trim().to_ascii_lowercase().as_str() {
            "nn-num" | "nn-numerical" => Target::NnNumerical,
            "nn-closed" | "nn-cf" => Target::NnClosed,
            "dn" => Target::Dn,
            "nd" => Target::Nd,
            "dd" => Target::Dd,
            "union" => Target::Union,
            other => match other.strip_prefix("oracle:") {
                Some(sc) => Target::Oracle(DecodingScenario::from_str(sc).map_err(|e| e.to_string())?),
                None => {
                    return Err(format!(
                        "unknown scenario '{s}' (expected nn-num, nn-closed, dn, nd, dd, union or oracle:nn|dn|nd|dd)"
                    ))
                }
            },
        };
        Ok(t)
    }
}

#[derive(Debug, Parser)]
#[command(name = "miso-pareto", version, about = "Pareto boundaries of MISO interference-channel rate regions with optional SIC")]
#[command(group(ArgGroup::new("source").required(true).args(["channels", "constants", "rayleigh", "preset"])))]
pub struct Args {
    /// JSON file holding either channel vectors or channel constants.
    #[arg(long, value_name = "FILE")]
    pub channels: Option<PathBuf>,

    /// Inline constants `g11,g12,g21,g22,k1,k2,s1,s2` (s = noise variance).
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub constants: Option<String>,

    /// Random Rayleigh channels `nT,seed`.
    #[arg(long, value_name = "NT,SEED")]
    pub rayleigh: Option<String>,

    /// Channel preset with unit noise variances.
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,

    /// Boundaries to compute: nn-num, nn-closed, dn, nd, dd, union, oracle:nn|dn|nd|dd.
    #[arg(
        long,
        value_name = "LIST",
        value_delimiter = ',',
        default_value = "nn-num,nn-closed,dn,nd,dd,union"
    )]
    pub scenario: Vec<Target>,

    /// Grid points per boundary.
    #[arg(long = "M", value_name = "INT", default_value_t = 500)]
    pub m: usize,

    /// Stopping tolerance of the gradient ascent.
    #[arg(long, value_name = "FLOAT", default_value_t = miso_pareto::DEFAULT_EPSILON)]
    pub epsilon: f64,

    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,

    /// Time fast methods against their oracles over a range of grid sizes.
    #[arg(long)]
    pub benchmark: bool,

    /// Solve grid points on the thread pool.
    #[arg(long)]
    pub parallel: bool,
}

/// Where the channel came from, for the metadata file.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Source {
    pub kind: &'static str,
    pub detail: String,
    pub unit_noise_assumed: bool,
}

/// A computed boundary with its wall-clock time.
pub struct Computed {
    pub target: Target,
    pub boundary: Boundary,
    pub seconds: f64,
}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(InvalidInput(msg.into()))
}

#[derive(Debug)]
struct InvalidInput(String);

impl std::fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidInput {}

fn load_channel(args: &Args) -> Result<(ChannelConstants, Source)> {
    if let Some(path) = &args.channels {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        if let Ok(ch) = ChannelRealization::from_json_str(&text) {
            let k = derive_constants(&ch)?;
            return Ok((k, Source { kind: "channel file", detail: path.display().to_string(), unit_noise_assumed: false }));
        }
        let k = ChannelConstants::from_json_str(&text)
            .with_context(|| format!("{} is neither a channel file nor a constants file", path.display()))?;
        return Ok((k, Source { kind: "constants file", detail: path.display().to_string(), unit_noise_assumed: false }));
    }
    if let Some(list) = &args.constants {
        let v: Vec<f64> = list
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| invalid(format!("bad number '{x}' in --constants"))))
            .collect::<Result<_>>()?;
        if v.len() != 8 {
            return Err(invalid(format!("--constants expects 8 values, got {}", v.len())));
        }
        let k = ChannelConstants::new(v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7])?;
        return Ok((k, Source { kind: "constants", detail: list.clone(), unit_noise_assumed: false }));
    }
    if let Some(spec) = &args.rayleigh {
        let (nt, seed) = spec.split_once(',').ok_or_else(|| invalid(format!("--rayleigh expects nT,seed, got '{spec}'")))?;
        let nt: usize = nt.trim().parse().map_err(|_| invalid(format!("bad nT '{nt}'")))?;
        let seed: u64 = seed.trim().parse().map_err(|_| invalid(format!("bad seed '{seed}'")))?;
        let k = derive_constants(&random_rayleigh(nt, seed)?)?;
        return Ok((k, Source { kind: "rayleigh", detail: format!("n_T={nt}, seed={seed}"), unit_noise_assumed: false }));
    }
    let name = args.preset.as_deref().unwrap_or_default();
    let p = Preset::from_str(name).map_err(|e| invalid(e.to_string()))?;
    Ok((p.constants(), Source { kind: "preset", detail: p.name().to_string(), unit_noise_assumed: true }))
}

fn validate(args: &Args) -> Result<()> {
    if args.scenario.is_empty() {
        return Err(invalid("at least one scenario is required"));
    }
    if args.m < 2 {
        return Err(invalid(format!("--M must be at least 2, got {}", args.m)));
    }
    if !(args.epsilon > 0.0 && args.epsilon.is_finite()) {
        return Err(invalid(format!("--epsilon must be positive, got {}", args.epsilon)));
    }
    if args.m < miso_pareto::oracle::MIN_GRID && args.scenario.iter().any(|t| matches!(t, Target::Oracle(_))) {
        return Err(invalid(format!("oracles need --M of at least {}", miso_pareto::oracle::MIN_GRID)));
    }
    Ok(())
}

/// Computes one boundary. The ascent-based sweeps always run warm-started in
/// order, so `--parallel` leaves their output unchanged.
pub fn compute(target: Target, k: &ChannelConstants, m: usize, epsilon: f64, mode: SweepMode) -> Result<Boundary> {
    let b = match target {
        Target::NnNumerical => boundary_nn_numerical(k, m, epsilon, SweepMode::Sequential)?,
        Target::NnClosed => boundary_nn_closed_form(k, m)?,
        Target::Dn => boundary_dn_with(k, m, mode)?,
        Target::Nd => boundary_nd_with(k, m, mode)?,
        Target::Dd => boundary_dd(k, m, epsilon, SweepMode::Sequential)?,
        Target::Oracle(s) => brute_force_boundary_with(OracleConfig::new(s, m, *k)?, mode)?,
        Target::Union => bail!("the union is assembled from the region boundaries"),
    };
    Ok(b)
}

fn run(args: &Args) -> Result<()> {
    validate(args)?;
    if let Ok(n) = std::env::var("MISO_PARETO_THREADS") {
        let n: usize = n.parse().map_err(|_| invalid(format!("MISO_PARETO_THREADS must be a positive integer, got '{n}'")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().context("configuring the thread pool")?;
    }
    let (k, source) = load_channel(args)?;
    let mode = if args.parallel { SweepMode::Parallel } else { SweepMode::Sequential };

    let mut wanted: Vec<Target> = Vec::new();
    for &t in &args.scenario {
        if !wanted.contains(&t) {
            wanted.push(t);
        }
    }
    // The union needs one boundary per region; the closed-form NN boundary
    // stands in for NN unless only the numerical one was requested.
    let union_nn = if wanted.contains(&Target::NnNumerical) && !wanted.contains(&Target::NnClosed) {
        Target::NnNumerical
    } else {
        Target::NnClosed
    };
    let mut needed: Vec<Target> = wanted.iter().copied().filter(|&t| t != Target::Union).collect();
    if wanted.contains(&Target::Union) {
        for t in [union_nn, Target::Dn, Target::Nd, Target::Dd] {
            if !needed.contains(&t) {
                needed.push(t);
            }
        }
    }
    let solve = |&t: &Target| -> Result<Computed> {
        let started = Instant::now();
        let boundary = compute(t, &k, args.m, args.epsilon, mode)?;
        Ok(Computed { target: t, boundary, seconds: started.elapsed().as_secs_f64() })
    };
    let mut computed: Vec<Computed> = if args.parallel {
        needed.par_iter().map(solve).collect::<Result<_>>()?
    } else {
        needed.iter().map(solve).collect::<Result<_>>()?
    };
    if wanted.contains(&Target::Union) {
        let started = Instant::now();
        let parts: Vec<Boundary> = [union_nn, Target::Dn, Target::Nd, Target::Dd]
            .iter()
            .map(|t| computed.iter().find(|c| c.target == *t).unwrap().boundary.clone())
            .collect();
        let union = union_boundary(&parts, args.m)?;
        computed.push(Computed { target: Target::Union, boundary: union, seconds: started.elapsed().as_secs_f64() });
    }
    computed.retain(|c| wanted.contains(&c.target));
    computed.sort_by_key(|c| wanted.iter().position(|&t| t == c.target));

    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let files = output::write_all(&args.out, &computed)?;
    for (c, f) in computed.iter().zip(&files) {
        println!(
            "{:<10} {:>6} points  max r1 {:.6}  max r2 {:.6}  {:>9.3} ms  {}",
            c.target.name(),
            c.boundary.len(),
            c.boundary.max_r1(),
            c.boundary.max_r2(),
            c.seconds * 1e3,
            f.display()
        );
    }

    let report = if args.benchmark {
        let fast: Vec<Target> = wanted.iter().copied().filter(|t| Target::FAST.contains(t)).collect();
        let r = benchmark::run(&fast, &k, args.epsilon, mode);
        print!("{}", r.render());
        Some(r)
    } else {
        None
    };
    output::write_meta(&args.out, args, &k, &source, &computed, &files, report.as_ref())?;
    if let Some(r) = report {
        if !r.all_checks_pass() {
            bail!("benchmark scaling checks failed");
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<InvalidInput>().is_some() {
            return EXIT_INVALID;
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return EXIT_IO;
        }
        if let Some(e) = cause.downcast_ref::<miso_pareto::Error>() {
            return match e {
                miso_pareto::Error::InfeasibleTarget { .. } | miso_pareto::Error::InfeasibleRadicand(_) => EXIT_INFEASIBLE,
                miso_pareto::Error::Io(_) => EXIT_IO,
                _ => EXIT_INVALID,
            };
        }
    }
    1
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
