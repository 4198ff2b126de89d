//! The `stabtest` command line.
//!
//! Every subcommand writes one JSON document to stdout (or `--out`), or CSV
//! with `--format csv`. Exit codes: 0 success / close, 1 far / check failure,
//! 2 usage or runtime error (including an infeasible test plan).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fourier::FourierTable;
use crate::gf2::{
    enumerate_all_subspaces, enumerate_lagrangians, enumerate_subspaces, isotropic_cover,
    PauliVector, Subspace,
};
use crate::quantum::{
    bias_report, gen_state, p_hat_table, p_table, q_table, DensityMatrix, StateKind,
};
use crate::sampling::{
    bell_difference_sample, empirical_law, estimate_eta, eta_shots, swap_test_sample,
    write_outcomes_csv, write_samples_csv, write_shots_csv, EtaEstimate, SamplerConfig,
    SamplerMode,
};
use crate::stabilizer::{enumerate_stabilizer_states, stabilizer_fidelity};
use crate::tester::{plan_test, tolerant_test, Decision, SoundnessMode, DEFAULT_DELTA};
use crate::verify::{resolve_suite, run_suite, CheckReport, BRUTE_FORCE_QUBITS};

#[derive(Parser, Debug)]
#[command(
    name = "stabtest",
    version,
    about = "Tolerant stabilizer testing toolkit"
)]
struct Cli {
    /// Worker threads; also the number of sampling shards.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exact,
    Measurement,
}

impl From<Mode> for SamplerMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => SamplerMode::ExactDistribution,
            Mode::Measurement => SamplerMode::Measurement,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    PureHaar,
    MixedGinibre,
    Stabilizer,
    DepolarizedStabilizer,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SampleWhat {
    BellDifference,
    Swap,
    Eta,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EnumWhat {
    Subspaces,
    Lagrangians,
    Stabilizers,
    Cover,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a state file.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Rank for mixed-ginibre (default 2).
        #[arg(long)]
        rank: Option<usize>,
        /// Catalog index for stabilizer kinds (n <= 3).
        #[arg(long)]
        index: Option<usize>,
        /// Depolarizing strength.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tables, biases and (n <= 3) stabilizer fidelity of a state.
    Analyze {
        state: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sampler.
    Sample {
        state: PathBuf,
        #[arg(long, value_enum, default_value_t = SampleWhat::Eta)]
        what: SampleWhat,
        #[arg(long, default_value_t = 10_000)]
        shots: usize,
        /// Weyl label for `--what swap`, e.g. `x:10,z:01`.
        #[arg(long)]
        x: Option<PauliVector>,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide F >= eps1 versus F <= eps2.
    Test {
        state: PathBuf,
        #[arg(long)]
        eps1: f64,
        #[arg(long)]
        eps2: f64,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        /// Use this far-state bias instead of the close-regime bound.
        #[arg(long)]
        eta_low: Option<f64>,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run named checks: `all`, `identities`, `soundness`, or a comma list.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate subspaces, Lagrangians, stabilizer states, or an isotropic cover of F₂^{2n}.
    Enumerate {
        #[arg(long, value_enum)]
        what: EnumWhat,
        #[arg(long)]
        n: usize,
        /// Restrict `subspaces` to this dimension.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What a command produced, plus its exit code.
struct Output {
    body: Vec<u8>,
    out: Option<PathBuf>,
    code: i32,
}

impl Output {
    fn json(v: &impl Serialize, out: Option<PathBuf>, code: i32) -> Result<Self> {
        let mut body = serde_json::to_vec_pretty(v)?;
        body.push(b'\n');
        Ok(Self { body, out, code })
    }
}

fn kind_from_args(
    kind: Kind,
    rank: Option<usize>,
    index: Option<usize>,
    p: Option<f64>,
) -> Result<StateKind> {
    Ok(match kind {
        Kind::PureHaar => StateKind::PureHaar,
        Kind::MixedGinibre => StateKind::MixedGinibre {
            rank: rank.unwrap_or(2),
        },
        Kind::Stabilizer => StateKind::Stabilizer {
            index: index.unwrap_or(0),
        },
        Kind::DepolarizedStabilizer => StateKind::DepolarizedStabilizer {
            p: p.ok_or_else(|| Error::InvalidParameter("depolarized-stabilizer needs --p".into()))?,
            index,
        },
    })
}

fn analyze_csv(p: &FourierTable, ph: &FourierTable, q: &FourierTable) -> Result<Vec<u8>> {
    let n = p.n();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "a_bits", "b_bits", "p", "p_hat", "q"])?;
    for i in 0..p.len() {
        let x = PauliVector::new(n, i as u64)?;
        let bits = |v: u64| format!("{v:0n$b}");
        w.write_record([
            i.to_string(),
            bits(x.x_part()),
            bits(x.z_part()),
            p.at(i).to_string(),
            ph.at(i).to_string(),
            q.at(i).to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn analyze(state: PathBuf, format: Format, out: Option<PathBuf>) -> Result<Output> {
    let rho = DensityMatrix::read_file(&state)?;
    let (p, ph, q) = (p_table(&rho), p_hat_table(&rho), q_table(&rho));
    if let Format::Csv = format {
        return Ok(Output {
            body: analyze_csv(&p, &ph, &q)?,
            out,
            code: 0,
        });
    }
    let b = bias_report(&rho);
    let fidelity = if rho.n() <= BRUTE_FORCE_QUBITS {
        let (f, s) = stabilizer_fidelity(&rho)?;
        json!({ "value": f, "argmax": s })
    } else {
        serde_json::Value::Null
    };
    let doc = json!({
        "n": rho.n(),
        "purity": b.purity,
        "eta": b.eta,
        "eta_from_q": b.eta_from_q,
        "eta_gnw": b.eta_gnw,
        "eta_prime": b.eta_prime,
        "stabilizer_fidelity": fidelity,
        "p": p.values(),
        "p_hat": ph.values(),
        "q": q.values(),
    });
    Output::json(&doc, out, 0)
}

#[allow(clippy::too_many_arguments)]
fn sample(
    state: PathBuf,
    what: SampleWhat,
    shots: usize,
    x: Option<PauliVector>,
    cfg: SamplerConfig,
    format: Format,
    out: Option<PathBuf>,
) -> Result<Output> {
    let rho = DensityMatrix::read_file(&state)?;
    let csv = matches!(format, Format::Csv);
    let mut body = Vec::new();
    match what {
        SampleWhat::BellDifference => {
            let s = bell_difference_sample(&rho, &cfg, shots)?;
            if csv {
                write_samples_csv(&s, &mut body)?;
            } else {
                let law = empirical_law(rho.n(), &s)?;
                let counts: Vec<u64> = law
                    .values()
                    .iter()
                    .map(|f| (f * shots as f64).round() as u64)
                    .collect();
                return Output::json(&json!({ "shots": shots, "counts": counts }), out, 0);
            }
        }
        SampleWhat::Swap => {
            let x = x.ok_or_else(|| Error::InvalidParameter("--what swap needs --x".into()))?;
            let outcomes = swap_test_sample(&rho, &x, &cfg, shots)?;
            if csv {
                write_outcomes_csv(&x, &outcomes, &mut body)?;
            } else {
                let est = EtaEstimate::from_outcomes(&outcomes)?;
                let exact = p_hat_table(&rho).get(&x) * (rho.dim() * rho.dim()) as f64;
                return Output::json(
                    &json!({ "x": x, "estimate": est, "exact_mean": exact }),
                    out,
                    0,
                );
            }
        }
        SampleWhat::Eta => {
            if csv {
                write_shots_csv(&eta_shots(&rho, &cfg, shots)?, &mut body)?;
            } else {
                let est = estimate_eta(&rho, &cfg, shots)?;
                return Output::json(
                    &json!({ "estimate": est, "exact_eta": bias_report(&rho).eta }),
                    out,
                    0,
                );
            }
        }
    }
    Ok(Output { body, out, code: 0 })
}

fn verify_csv(reports: &[CheckReport]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn enumerate(what: EnumWhat, n: usize, dim: Option<usize>, out: Option<PathBuf>) -> Result<Output> {
    match what {
        EnumWhat::Subspaces => {
            let v = match dim {
                Some(d) => enumerate_subspaces(n, d)?,
                None => enumerate_all_subspaces(n)?,
            };
            Output::json(&json!({ "count": v.len(), "subspaces": v }), out, 0)
        }
        EnumWhat::Lagrangians => {
            let v = enumerate_lagrangians(n)?;
            Output::json(&json!({ "count": v.len(), "lagrangians": v }), out, 0)
        }
        EnumWhat::Stabilizers => {
            let v = enumerate_stabilizer_states(n)?;
            Output::json(&json!({ "count": v.len(), "states": v }), out, 0)
        }
        EnumWhat::Cover => {
            let v = isotropic_cover(&Subspace::full(n))?;
            Output::json(&json!({ "count": v.len(), "cover": v }), out, 0)
        }
    }
}

fn dispatch(cli: Cli) -> Result<Output> {
    let shards = cli.threads;
    match cli.command {
        Command::Gen {
            kind,
            n,
            rank,
            index,
            p,
            seed,
            out,
        } => {
            let rho = gen_state(&kind_from_args(kind, rank, index, p)?, n, seed)?;
            Output::json(&rho.to_file_repr(), out, 0)
        }
        Command::Analyze { state, format, out } => analyze(state, format, out),
        Command::Sample {
            state,
            what,
            shots,
            x,
            mode,
            seed,
            format,
            out,
        } => sample(
            state,
            what,
            shots,
            x,
            SamplerConfig::new(mode.into(), seed, shards),
            format,
            out,
        ),
        Command::Test {
            state,
            eps1,
            eps2,
            delta,
            eta_low,
            mode,
            seed,
            out,
        } => {
            let soundness = eta_low.map_or(SoundnessMode::CloseRegime, SoundnessMode::Custom);
            let plan = plan_test(eps1, eps2, delta, soundness)?;
            let rho = DensityMatrix::read_file(&state)?;
            let v = tolerant_test(&rho, &plan, &SamplerConfig::new(mode.into(), seed, shards))?;
            Output::json(&v, out, if v.decision == Decision::Close { 0 } else { 1 })
        }
        Command::Verify {
            suite,
            n,
            trials,
            seed,
            format,
            out,
        } => {
            let names = resolve_suite(&suite, n)?;
            let reports = run_suite(&names, n, trials, seed)?;
            let code = if reports.iter().all(CheckReport::passed) {
                0
            } else {
                1
            };
            match format {
                Format::Json => Output::json(&reports, out, code),
                Format::Csv => Ok(Output {
                    body: verify_csv(&reports)?,
                    out,
                    code,
                }),
            }
        }
        Command::Enumerate { what, n, dim, out } => enumerate(what, n, dim, out),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    if cli.threads == 0 {
        let _ = writeln!(err, "error: --threads must be positive");
        return 2;
    }
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let result = pool.install(|| dispatch(cli)).and_then(|o| {
        match &o.out {
            Some(path) => std::fs::write(path, &o.body)?,
            None => out.write_all(&o.body)?,
        }
        Ok(o.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
