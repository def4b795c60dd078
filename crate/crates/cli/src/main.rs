//! `tensor-chromatic`: characteristic numbers and chromatic polynomials of
//! tensors from the command line.

mod error;
mod report;

use std::io::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use tensor_chromatic::constructors::{generic_rank_r_tensor, graph_to_tensor};
use tensor_chromatic::format::{parse_graph, parse_tensor};
use tensor_chromatic::invariants::{
    characteristic_number, chromatic, compare_chromatic, euler_complement, relative_chromatic, top_chromatic_coefficient,
    BVector, Formulation, Limits, TrialConfig,
};
use tensor_chromatic::oracles::{graph_chromatic_oracle, matroid_characteristic_oracle, MAX_MATROID_COLUMNS};
use tensor_chromatic::tensor::Tensor;

use error::CliError;
use report::*;

#[derive(Debug, Parser)]
#[command(name = "tensor-chromatic", version, about = "Chromatic polynomials and characteristic numbers of tensors")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Master seed; every random choice derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Size of the random primes.
    #[arg(long, global = true, default_value_t = 31, value_parser = clap::value_parser!(u32).range(30..=31))]
    prime_bits: u32,
    /// Agreeing trials required per count.
    #[arg(long, global = true, default_value_t = 3)]
    trials: usize,
    /// Trials allowed per count before giving up.
    #[arg(long, global = true, default_value_t = 6)]
    max_trials: usize,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Largest matrix size accepted.
    #[arg(long, global = true, default_value_t = Limits::default().n_max)]
    limit_n: usize,
    /// Largest projective dimension accepted.
    #[arg(long, global = true, default_value_t = Limits::default().d_max)]
    limit_d: usize,
    #[arg(long, global = true, value_enum, default_value_t = FormulationArg::Auto)]
    formulation: FormulationArg,
    /// Log per-trial details to stderr.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormulationArg {
    Auto,
    Minors,
    Inverse,
}

impl From<FormulationArg> for Formulation {
    fn from(f: FormulationArg) -> Self {
        match f {
            FormulationArg::Auto => Formulation::Auto,
            FormulationArg::Minors => Formulation::Minors,
            FormulationArg::Inverse => Formulation::Inverse,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Chromatic polynomial of a tensor file.
    Chromatic {
        input: PathBuf,
        /// Compute the relative polynomial instead.
        #[arg(long, conflicts_with = "both")]
        relative: bool,
        /// Compute both and compare them.
        #[arg(long)]
        both: bool,
    },
    /// A single characteristic number T(b_1, ..., b_{n-1}).
    Charnum {
        input: PathBuf,
        /// Comma-separated condition counts, e.g. `2,0,0,0,2`.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        b: Vec<usize>,
    },
    /// Chromatic polynomial of a graph through its diagonal tensor.
    Graph {
        input: PathBuf,
        /// Only run the deletion-contraction oracle.
        #[arg(long, conflicts_with = "verify")]
        oracle_only: bool,
        /// Compare engine results with both oracles; exit 1 on mismatch.
        #[arg(long)]
        verify: bool,
    },
    /// Last chromatic coefficient of generic rank-r tensors.
    RankTable {
        #[arg(long)]
        n: usize,
        /// Ranks, e.g. `3-7`.
        #[arg(long, value_parser = parse_range)]
        r_range: RangeInclusive<usize>,
        /// Contraction dimensions; defaults to every admissible value.
        #[arg(long, value_parser = parse_range)]
        a_range: Option<RangeInclusive<usize>>,
    },
    /// Euler characteristics of the determinantal hypersurface and its complement.
    Euler { input: PathBuf },
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected a number or a range like 3-7, got `{s}`");
    let (lo, hi) = match s.split_once('-').or_else(|| s.split_once("..")) {
        Some((lo, hi)) => (lo.trim(), hi.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let lo: usize = lo.parse().map_err(|_| bad())?;
    let hi: usize = hi.parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(lo..=hi)
}

fn config(g: &GlobalOpts) -> TrialConfig {
    TrialConfig {
        prime_bits: g.prime_bits,
        trials: g.trials,
        max_trials: g.max_trials,
        limits: Limits { n_max: g.limit_n, d_max: g.limit_d, ..Limits::default() },
        formulation: g.formulation.into(),
        ..TrialConfig::with_seed(g.seed)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load_tensor(path: &Path) -> Result<Tensor, CliError> {
    parse_tensor(&read(path)?).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn wrap<B>(command: &'static str, cfg: &TrialConfig, body: B) -> Report<B> {
    Report { command, config: RunHeader::from_config(cfg), body }
}

/// Rendered report plus whether it records a failed verification.
struct Output {
    text: String,
    mismatch: bool,
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = config(&cli.global);
    let json = cli.global.format == OutputFormat::Json;
    let ok = |text| Ok(Output { text, mismatch: false });
    match &cli.command {
        Command::Chromatic { input, relative, both } => {
            let t = load_tensor(input)?;
            let mut body = ChromaticBody {
                input: input.display().to_string(),
                n: t.n(),
                a: t.a(),
                d: t.contraction_dim().saturating_sub(1),
                chromatic: None,
                relative: None,
                equal: None,
                differing: None,
            };
            if *both {
                let c = compare_chromatic(&t, &cfg)?;
                body.equal = Some(c.equal);
                body.differing = Some(c.differing);
                body.chromatic = Some(c.chromatic);
                body.relative = Some(c.relative);
            } else if *relative {
                body.relative = Some(relative_chromatic(&t, &cfg)?);
            } else {
                body.chromatic = Some(chromatic(&t, &cfg)?);
            }
            ok(wrap("chromatic", &cfg, body).render(json))
        }
        Command::Charnum { input, b } => {
            let t = load_tensor(input)?;
            let r = characteristic_number(&t, &BVector::new(b.clone()), &cfg)?;
            let body = CharnumBody {
                input: input.display().to_string(),
                n: t.n(),
                d: t.contraction_dim().saturating_sub(1),
                b: b.clone(),
                value: r.value,
                trials: r.trials,
            };
            ok(wrap("charnum", &cfg, body).render(json))
        }
        Command::Graph { input, oracle_only, verify } => {
            let path = input.display().to_string();
            let g = parse_graph(&read(input)?).map_err(|source| CliError::Parse { path: path.clone(), source })?;
            g.check_connected_loopless()?;
            let oracle = graph_chromatic_oracle(&g)?;
            let mut body = GraphBody {
                input: path,
                vertices: g.vertex_count(),
                edges: g.edges().len(),
                oracle,
                matroid_oracle: None,
                chromatic: None,
                relative: None,
                verdict: None,
            };
            let mut mismatch = false;
            if !oracle_only {
                let t = graph_to_tensor(&g)?;
                if *verify {
                    let c = compare_chromatic(&t, &cfg)?;
                    let mut agree = c.chromatic.m == body.oracle && c.relative.m == body.oracle;
                    if g.edges().len() <= MAX_MATROID_COLUMNS {
                        let matroid = matroid_characteristic_oracle(&g.signed_incidence())?;
                        agree &= matroid == body.oracle;
                        body.matroid_oracle = Some(matroid);
                    }
                    mismatch = !agree;
                    body.verdict = Some(if agree { "match" } else { "mismatch" });
                    body.chromatic = Some(c.chromatic);
                    body.relative = Some(c.relative);
                } else {
                    body.chromatic = Some(chromatic(&t, &cfg)?);
                }
            }
            Ok(Output { text: wrap("graph", &cfg, body).render(json), mismatch })
        }
        Command::RankTable { n, r_range, a_range } => {
            if *n == 0 {
                return Err(CliError::Usage("n must be at least 1".into()));
            }
            let a_all = a_range.clone().unwrap_or(1..=n * n);
            let cells: Vec<(usize, usize)> = r_range
                .clone()
                .flat_map(|r| a_all.clone().filter(move |&a| a >= 1 && a <= r && a <= n * n).map(move |a| (r, a)))
                .collect();
            let values = cells
                .par_iter()
                .map(|&(r, a)| {
                    let t = generic_rank_r_tensor(a, *n, r, cfg.seed)?;
                    Ok(top_chromatic_coefficient(&t, &cfg)?)
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let mut rows: Vec<RankRow> = Vec::new();
            for (&(r, a), rep) in cells.iter().zip(values) {
                if rows.last().map_or(true, |row| row.r != r) {
                    rows.push(RankRow { r, cells: Vec::new() });
                }
                rows.last_mut().expect("just pushed").cells.push(RankCell { a, b: rep.value, trials: rep.trials });
            }
            let mut a_values: Vec<usize> = cells.iter().map(|&(_, a)| a).collect();
            a_values.sort_unstable();
            a_values.dedup();
            ok(wrap("rank-table", &cfg, RankTableBody { n: *n, a_values, rows }).render(json))
        }
        Command::Euler { input } => {
            let t = load_tensor(input)?;
            let e = euler_complement(&t, &cfg)?;
            let body = EulerBody {
                input: input.display().to_string(),
                n: t.n(),
                d: e.relative.d,
                complement: e.complement,
                hypersurface: e.hypersurface,
                relative: e.relative,
            };
            ok(wrap("euler", &cfg, body).render(json))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.global.trace { "debug" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).format_timestamp(None).init();
    if cli.global.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.global.jobs).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    let json = cli.global.format == OutputFormat::Json;
    let mut stdout = std::io::stdout().lock();
    let start = std::time::Instant::now();
    let result = run(&cli);
    log::info!("finished in {:.2} s", start.elapsed().as_secs_f64());
    match result {
        Ok(out) => {
            let _ = stdout.write_all(out.text.as_bytes());
            if out.mismatch {
                eprintln!("error: {}", CliError::Mismatch);
                return ExitCode::from(CliError::Mismatch.kind().exit_code() as u8);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let kind = e.kind();
            if json {
                let report = ErrorReport {
                    error: ErrorBody { kind, tag: e.tag(), message: e.to_string(), exit_code: kind.exit_code() },
                };
                let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&report).expect("error serializes"));
            }
            eprintln!("error: {e}");
            ExitCode::from(kind.exit_code() as u8)
        }
    }
}
