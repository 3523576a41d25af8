//! Command dispatch for the `chanent` binary.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::channel::{check_completely_positive, check_unital, Channel, ChannelForm, StochasticMatrix, PSD_TOL};
use crate::choi::{is_extremal_choi, representative_operator, verify_properties, EXTREMAL_TOL};
use crate::decomposition::{channel_entropy_classical, EntropyReport, MAX_SOLVER_DIM};
use crate::entropy::{choi_entropy_with, ohya_entropy, ChoiNormalization};
use crate::error::Error;
use crate::exec::Execution;
use crate::harness::{example_row, example_sweep, run_random, sweep_grid, RandomConfig, SweepRow, DEFAULT_SEED};
use crate::io::{parse_channel, property_json, representative_json, to_csv, to_output_json, ChannelSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NOT_CLASSICAL: i32 = 3;

/// Tolerance for recognizing a classical channel in a non-stochastic form.
const CLASSICAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Representative operator, property report and extremality flag.
    Choi,
    /// d(ρ_T) for any channel, plus H(T) when the channel is classical.
    Entropy,
    /// H(T) with its witness decomposition for a classical channel.
    Hent,
    /// Check ucp properties and, for classical input, d(ρ_T) ≥ H(T).
    Verify,
    /// The 2×2 example with q = 1 − p, as CSV.
    Example,
    /// Randomized d(ρ_T) ≥ H(T) harness over stochastic matrices.
    Random,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "chanent", version, about = "Entropy of unital completely positive maps")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Channel file (JSON).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Stochastic entry S[0][0]; builds the 2×2 channel when no input is given.
    #[arg(long)]
    pub p: Option<f64>,
    /// Stochastic entry S[1][0] (defaults to 1 − p).
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub sweep_step: f64,
    /// First p of the sweep (defaults to the step).
    #[arg(long)]
    pub sweep_start: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub sweep_stop: f64,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Extremality threshold for `choi`.
    #[arg(long, default_value_t = EXTREMAL_TOL)]
    pub tol: f64,
    /// Report entropies in bits.
    #[arg(long)]
    pub bits: bool,
    /// Round sampled matrices to 0/1 rows (`random` only).
    #[arg(long)]
    pub deterministic: bool,
    /// Evaluate trials and sweep rows on one thread.
    #[arg(long)]
    pub sequential: bool,
}

/// Result of a command: exit code, report text and an optional diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<String>,
    pub message: Option<String>,
}

impl Outcome {
    fn report(code: i32, report: String) -> Self {
        Self { code, report: Some(report), message: None }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        Self { code, report: None, message: Some(message.into()) }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Outcome::fail(EXIT_INPUT, format!("error: {e}"))
    }
}

impl Cli {
    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    fn unit(&self, nats: f64) -> f64 {
        if self.bits {
            nats / std::f64::consts::LN_2
        } else {
            nats
        }
    }

    fn unit_name(&self) -> &'static str {
        if self.bits {
            "bits"
        } else {
            "nats"
        }
    }

    fn load_channel(&self) -> Result<Channel, Outcome> {
        if let Some(path) = &self.input {
            let text = fs::read_to_string(path)
                .map_err(|e| Outcome::fail(EXIT_INPUT, format!("error: cannot read {}: {e}", path.display())))?;
            return Ok(parse_channel(&text)?);
        }
        if let Some(p) = self.p {
            let q = self.q.unwrap_or(1.0 - p);
            return Ok(crate::channel::classical_embed(StochasticMatrix::binary(p, q)?));
        }
        Err(Outcome::fail(EXIT_INPUT, "error: this command needs --input or --p"))
    }
}

/// Parse-free entry point used by the binary and the tests.
pub fn run(cli: &Cli) -> Outcome {
    let result = match cli.command {
        Command::Choi => cmd_choi(cli),
        Command::Entropy => cmd_entropy(cli),
        Command::Hent => cmd_hent(cli),
        Command::Verify => cmd_verify(cli),
        Command::Example => cmd_example(cli),
        Command::Random => cmd_random(cli),
    };
    result.unwrap_or_else(|o| o)
}

fn ucp_flags(t: &Channel) -> Result<(bool, bool), Outcome> {
    Ok((check_unital(t)?, check_completely_positive(t, PSD_TOL)?))
}

pub fn cmd_choi(cli: &Cli) -> Result<Outcome, Outcome> {
    let t = cli.load_channel()?;
    let rho = representative_operator(&t)?;
    let props = verify_properties(&t)?;
    let (unital, cp) = ucp_flags(&t)?;
    let ucp = unital && cp;
    let extremal = if ucp { Some(is_extremal_choi(&t, cli.tol)?) } else { None };
    let report = json!({
        "dim": t.dim(),
        "kind": t.kind(),
        "rho": representative_json(&rho),
        "spectrum": rho.spectrum().values,
        "properties": property_json(&props),
        "unital": unital,
        "completely_positive": cp,
        "ucp": ucp,
        "extremal": extremal,
        "superop": serde_json::to_value(ChannelSpec::superop(&t)?).map_err(|e| Error::Internal(e.to_string()))?,
    });
    let code = if ucp && props.all() { EXIT_OK } else { EXIT_VALIDATION };
    Ok(Outcome::report(code, to_output_json(report)))
}

fn witness_json(r: &EntropyReport) -> Value {
    Value::Array(
        r.witness
            .components
            .iter()
            .zip(&r.witness.weights)
            .map(|(f, w)| json!({"assignment": f.assignment(), "index": f.index(), "weight": w}))
            .collect(),
    )
}

fn entropy_report_json(cli: &Cli, r: &EntropyReport) -> Value {
    json!({
        "unit": cli.unit_name(),
        "H": cli.unit(r.h_channel.nats()),
        "d": cli.unit(r.d_choi.nats()),
        "gap": cli.unit(r.gap),
        "inequality_holds": r.inequality_holds(),
        "witness": witness_json(r),
    })
}

fn classical_of(t: &Channel) -> Option<StochasticMatrix> {
    t.classical_matrix(CLASSICAL_TOL)
}

pub fn cmd_hent(cli: &Cli) -> Result<Outcome, Outcome> {
    let t = cli.load_channel()?;
    let Some(s) = classical_of(&t) else {
        return Err(Outcome::fail(
            EXIT_NOT_CLASSICAL,
            "error: H(T) is only computed for classical channels; use `chanent entropy` for the d(ρ_T) bound",
        ));
    };
    let r = channel_entropy_classical(&s)?;
    Ok(Outcome::report(EXIT_OK, to_output_json(entropy_report_json(cli, &r))))
}

pub fn cmd_entropy(cli: &Cli) -> Result<Outcome, Outcome> {
    let t = cli.load_channel()?;
    let (unital, cp) = ucp_flags(&t)?;
    if !cp {
        return Err(Outcome::fail(EXIT_VALIDATION, "error: map is not completely positive; d(ρ_T) is undefined"));
    }
    let d = choi_entropy_with(&t, ChoiNormalization::Raw)?;
    let d_unit = choi_entropy_with(&t, ChoiNormalization::UnitTrace)?;
    let mut report = json!({
        "dim": t.dim(),
        "kind": t.kind(),
        "unit": cli.unit_name(),
        "unital": unital,
        "d": cli.unit(d.nats()),
        "d_unit_trace": cli.unit(d_unit.nats()),
        "extremal": is_extremal_choi(&t, cli.tol)?,
    });
    if let ChannelForm::State(phi) = t.form() {
        report["ohya"] = json!(cli.unit(ohya_entropy(phi)?.nats()));
    }
    if let Some(s) = classical_of(&t).filter(|s| s.dim() <= MAX_SOLVER_DIM) {
        report["classical"] = entropy_report_json(cli, &channel_entropy_classical(&s)?);
    }
    Ok(Outcome::report(EXIT_OK, to_output_json(report)))
}

pub fn cmd_verify(cli: &Cli) -> Result<Outcome, Outcome> {
    let t = cli.load_channel()?;
    let props = verify_properties(&t)?;
    let (unital, cp) = ucp_flags(&t)?;
    let mut ok = unital && cp && props.all();
    let mut report = json!({
        "dim": t.dim(),
        "kind": t.kind(),
        "unital": unital,
        "completely_positive": cp,
        "properties": property_json(&props),
    });
    if cp {
        if let Some(s) = classical_of(&t).filter(|s| s.dim() <= MAX_SOLVER_DIM) {
            let r = channel_entropy_classical(&s)?;
            ok &= r.inequality_holds();
            report["inequality"] = entropy_report_json(cli, &r);
        }
    }
    report["ok"] = json!(ok);
    Ok(Outcome::report(if ok { EXIT_OK } else { EXIT_VALIDATION }, to_output_json(report)))
}

pub fn cmd_example(cli: &Cli) -> Result<Outcome, Outcome> {
    let rows: Vec<SweepRow> = match cli.p {
        Some(p) => vec![example_row(p)?],
        None => {
            let step = cli.sweep_step;
            let grid = sweep_grid(cli.sweep_start.unwrap_or(step), cli.sweep_stop, step)?;
            example_sweep(&grid, cli.exec())?
        }
    };
    let consistent = rows.iter().all(SweepRow::consistent);
    let csv = to_csv(
        &["p", "H_closed_form", "H_vertex", "d_choi", "gap"],
        rows.iter().map(|r| vec![r.p, cli.unit(r.h_closed_form), cli.unit(r.h_vertex), cli.unit(r.d_choi), cli.unit(r.gap)]),
    );
    Ok(Outcome::report(if consistent { EXIT_OK } else { EXIT_VALIDATION }, csv))
}

pub fn cmd_random(cli: &Cli) -> Result<Outcome, Outcome> {
    if !(2..=3).contains(&cli.n) {
        return Err(Outcome::fail(EXIT_INPUT, format!("error: --n must be 2 or 3, got {}", cli.n)));
    }
    let cfg = RandomConfig { n: cli.n, count: cli.count, seed: cli.seed, deterministic: cli.deterministic };
    let summary = run_random(&cfg, cli.exec())?;
    let report = json!({
        "n": summary.n,
        "count": summary.count,
        "seed": summary.seed,
        "unit": cli.unit_name(),
        "min_gap": cli.unit(summary.min_gap),
        "max_gap": cli.unit(summary.max_gap),
        "failures": summary.failures,
        "failed_trials": summary.failed_trials,
    });
    let code = if summary.failures == 0 { EXIT_OK } else { EXIT_VALIDATION };
    Ok(Outcome::report(code, to_output_json(report)))
}
