//! Command-line front end: one subcommand per computation, JSON reports by
//! default, and a `paper-check` regression mode.
//!
//! Exit codes: 0 success, 1 domain error (reported in the envelope), 2 usage
//! error. The only environment coupling is the oracle budget override.

pub mod args;
pub mod paper;
pub mod report;

use std::collections::BTreeMap;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use fptlab_core::bounds::{hyperstandard_simple_bound, p0_with, safe_perturbation};
use fptlab_core::coeffsets::{dset_below, CoeffSetSpec};
use fptlab_core::frobenius::{fpt_bracket_with, nu_with, sharply_fpure_at_with, LineArrangement, OracleConfig, Slope};
use fptlab_core::pairs::{certify_sfr_with, classify_p1, P1Pair};
use fptlab_core::thresholds::{t0, LambdaSpec, WeightedArrangement};
use fptlab_core::{Error, Exec, Rational};

use args::List;
use report::{Provenance, ReportEnvelope};

#[derive(Parser, Debug)]
#[command(name = "fptlab", version, about = "Exact F-singularity invariants of line arrangements")]
struct Cli {
    /// Human-readable table instead of JSON.
    #[arg(long, global = true)]
    table: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug)]
struct ArrangementArgs {
    /// Characteristic.
    #[arg(long)]
    p: u64,
    /// Slopes of the lines, `inf` for y = 0.
    #[arg(long, value_parser = args::slopes)]
    slopes: List<Slope>,
    /// Multiplicity of each line.
    #[arg(long, value_parser = args::integers)]
    mults: List<u64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// The slice D(I) ∩ [0, below).
    Dset {
        #[arg(long, value_parser = args::rationals)]
        set: List<Rational>,
        #[arg(long, value_parser = args::rational)]
        below: Rational,
    },
    /// The gap t0 for D(I) or a finite list.
    #[command(group(ArgGroup::new("lambda").required(true).args(["set", "lambda_list"])))]
    T0 {
        #[arg(long, value_parser = args::rationals)]
        set: Option<List<Rational>>,
        #[arg(long, value_parser = args::rationals)]
        lambda_list: Option<List<Rational>>,
    },
    /// ε, Q and the characteristic bound p0(I).
    P0 {
        #[arg(long, value_parser = args::rationals)]
        set: List<Rational>,
        /// Include every element of the sum set.
        #[arg(long)]
        trace: bool,
    },
    /// The simple bound for D({1/n}).
    Hsb {
        #[arg(long)]
        n: u64,
    },
    /// ν_f(pᵉ) with its bracket.
    Nu {
        #[command(flatten)]
        arr: ArrangementArgs,
        #[arg(long)]
        e: u32,
    },
    /// The fpt bracket at level e.
    Bracket {
        #[command(flatten)]
        arr: ArrangementArgs,
        #[arg(long)]
        e: u32,
    },
    /// Sharp F-purity of (𝔸², λ·f) up to e_max.
    FpureAt {
        #[command(flatten)]
        arr: ArrangementArgs,
        #[arg(long, value_parser = args::rational)]
        lambda: Rational,
        #[arg(long)]
        emax: u32,
    },
    /// Strong F-regularity certificate for a weighted arrangement.
    Certify {
        #[arg(long, value_parser = args::rationals)]
        weights: List<Rational>,
        #[arg(long)]
        p: u64,
        #[arg(long, value_parser = args::slopes)]
        slopes: Option<List<Slope>>,
        #[arg(long, default_value_t = 2)]
        emax: u32,
    },
    /// Perturbation x and its J-set.
    Perturb {
        #[arg(long, value_parser = args::rationals)]
        set: List<Rational>,
        #[arg(long = "N")]
        n: u64,
    },
    /// Log Fano and klt tests for (ℙ¹, Σ qᵢ Pᵢ).
    ClassifyP1 {
        #[arg(long, value_parser = args::rationals)]
        coeffs: List<Rational>,
    },
    /// Regenerate every worked example and compare.
    PaperCheck {
        #[arg(long)]
        json: bool,
    },
}

/// Raw arrangement data, echoed before validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawArrangement {
    pub p: u64,
    pub slopes: Vec<Slope>,
    pub mults: Vec<u64>,
}

impl RawArrangement {
    fn build(&self) -> Result<LineArrangement, Error> {
        LineArrangement::new(self.p, self.slopes.clone(), self.mults.clone())
    }
}

impl From<ArrangementArgs> for RawArrangement {
    fn from(a: ArrangementArgs) -> Self {
        RawArrangement {
            p: a.p,
            slopes: a.slopes.0,
            mults: a.mults.0,
        }
    }
}

/// Parsed inputs of one invocation; serializes to the envelope's
/// `command` and `inputs` fields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", content = "inputs", rename_all = "kebab-case")]
pub enum Inputs {
    Dset { set: Vec<Rational>, below: Rational },
    T0 { lambda: LambdaInput },
    P0 { set: Vec<Rational>, trace: bool },
    Hsb { n: u64 },
    Nu { arrangement: RawArrangement, e: u32 },
    Bracket { arrangement: RawArrangement, e: u32 },
    FpureAt { arrangement: RawArrangement, lambda: Rational, emax: u32 },
    Certify { weights: Vec<Rational>, p: u64, slopes: Option<Vec<Slope>>, emax: u32 },
    Perturb {
        set: Vec<Rational>,
        #[serde(rename = "N")]
        n: u64,
    },
    ClassifyP1 { coeffs: Vec<Rational> },
    PaperCheck {},
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaInput {
    Set(Vec<Rational>),
    List(Vec<Rational>),
}

impl Inputs {
    /// Splits the serialized form into `(command, inputs)`.
    pub fn echo(&self) -> (String, Value) {
        let mut v = serde_json::to_value(self).expect("inputs serialize");
        let obj = v.as_object_mut().expect("tagged enum");
        let command = obj["command"].as_str().expect("tag").to_string();
        let inputs = obj.remove("inputs").unwrap_or_else(|| json!({}));
        (command, inputs)
    }

    pub fn from_echo(command: &str, inputs: &Value) -> serde_json::Result<Self> {
        serde_json::from_value(json!({ "command": command, "inputs": inputs }))
    }
}

fn from_cmd(cmd: Cmd) -> Inputs {
    match cmd {
        Cmd::Dset { set, below } => Inputs::Dset { set: set.0, below },
        Cmd::T0 { set, lambda_list } => Inputs::T0 {
            lambda: match (set, lambda_list) {
                (Some(s), _) => LambdaInput::Set(s.0),
                (None, Some(l)) => LambdaInput::List(l.0),
                (None, None) => unreachable!("clap enforces the group"),
            },
        },
        Cmd::P0 { set, trace } => Inputs::P0 { set: set.0, trace },
        Cmd::Hsb { n } => Inputs::Hsb { n },
        Cmd::Nu { arr, e } => Inputs::Nu { arrangement: arr.into(), e },
        Cmd::Bracket { arr, e } => Inputs::Bracket { arrangement: arr.into(), e },
        Cmd::FpureAt { arr, lambda, emax } => Inputs::FpureAt {
            arrangement: arr.into(),
            lambda,
            emax,
        },
        Cmd::Certify { weights, p, slopes, emax } => Inputs::Certify {
            weights: weights.0,
            p,
            slopes: slopes.map(|s| s.0),
            emax,
        },
        Cmd::Perturb { set, n } => Inputs::Perturb { set: set.0, n },
        Cmd::ClassifyP1 { coeffs } => Inputs::ClassifyP1 { coeffs: coeffs.0 },
        Cmd::PaperCheck { .. } => Inputs::PaperCheck {},
    }
}

fn value<T: Serialize>(t: T) -> Value {
    serde_json::to_value(t).expect("library types serialize")
}

/// Runs the library operation behind `inputs`.
pub fn execute(inputs: &Inputs) -> Result<Value, Error> {
    let cfg = OracleConfig::from_env();
    Ok(match inputs {
        Inputs::Dset { set, below } => {
            let slice = dset_below(&CoeffSetSpec::new(set.clone())?, below)?;
            json!({ "elements": slice.elements, "count": slice.elements.len() })
        }
        Inputs::T0 { lambda } => {
            let spec = match lambda {
                LambdaInput::Set(s) => LambdaSpec::Hyperstandard(CoeffSetSpec::new(s.clone())?),
                LambdaInput::List(l) => LambdaSpec::Finite(l.clone()),
            };
            value(t0(&spec)?)
        }
        Inputs::P0 { set, trace } => {
            let (rep, search) = p0_with(&CoeffSetSpec::new(set.clone())?, Exec::default())?;
            let mut v = value(rep);
            if *trace {
                v["trace"] = value(search.trace);
            }
            v
        }
        Inputs::Hsb { n } => value(hyperstandard_simple_bound(*n)?),
        Inputs::Nu { arrangement, e } => {
            let rec = nu_with(&arrangement.build()?, *e, &cfg)?;
            let br = fptlab_core::frobenius::ThresholdBracket::from_record(rec);
            json!({ "e": rec.e, "q": rec.q, "nu": rec.nu, "bracket": { "lower": br.lower, "upper": br.upper } })
        }
        Inputs::Bracket { arrangement, e } => value(fpt_bracket_with(&arrangement.build()?, *e, &cfg)?),
        Inputs::FpureAt { arrangement, lambda, emax } => {
            value(sharply_fpure_at_with(&arrangement.build()?, lambda, *emax, &cfg)?)
        }
        Inputs::Certify { weights, p, slopes, emax } => {
            let mut w = WeightedArrangement::new(weights.clone())?;
            if let Some(s) = slopes {
                w = w.with_slopes(s.clone())?;
            }
            value(certify_sfr_with(&w, *p, *emax, &cfg)?)
        }
        Inputs::Perturb { set, n } => value(safe_perturbation(&CoeffSetSpec::new(set.clone())?, *n)?),
        Inputs::ClassifyP1 { coeffs } => value(classify_p1(&P1Pair::new(coeffs.clone())?)),
        Inputs::PaperCheck {} => value(paper::run_checks()),
    })
}

/// Builds the envelope for `inputs`, tagging outputs that reproduce a
/// worked example.
pub fn report(inputs: &Inputs) -> (ReportEnvelope, bool) {
    let (command, echoed) = inputs.echo();
    match execute(inputs) {
        Ok(outputs) => {
            let provenance = provenance(inputs, &outputs);
            (
                ReportEnvelope {
                    command,
                    inputs: echoed,
                    outputs,
                    provenance,
                    error: None,
                },
                true,
            )
        }
        Err(e) => (
            ReportEnvelope {
                command,
                inputs: echoed,
                outputs: Value::Null,
                provenance: BTreeMap::new(),
                error: Some(e.to_string()),
            },
            false,
        ),
    }
}

fn provenance(inputs: &Inputs, outputs: &Value) -> BTreeMap<String, Provenance> {
    let cited = paper::citations_for(inputs);
    let Some(obj) = outputs.as_object() else {
        return BTreeMap::new();
    };
    obj.keys()
        .map(|k| {
            let prefix = format!("/{k}");
            let mine: Vec<_> = cited
                .iter()
                .filter(|c| c.pointer == prefix || c.pointer.starts_with(&format!("{prefix}/")))
                .collect();
            let all_match = !mine.is_empty() && mine.iter().all(|c| outputs.pointer(c.pointer) == Some(&c.paper));
            let tag = if all_match { Provenance::PaperExample } else { Provenance::Computed };
            (k.clone(), tag)
        })
        .collect()
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (without the program name) and runs it.
pub fn run<I, S>(argv: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once("fptlab".into()).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Output {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Output {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };

    if let Cmd::PaperCheck { json } = cli.command {
        let checks = paper::run_checks();
        let ok = checks.passed();
        let stdout = if json {
            let (env, _) = report(&Inputs::PaperCheck {});
            env.to_json()
        } else {
            checks.to_table()
        };
        return Output {
            code: if ok { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        };
    }

    let inputs = from_cmd(cli.command);
    let (env, ok) = report(&inputs);
    Output {
        code: if ok { 0 } else { 1 },
        stdout: if cli.table { env.to_table() } else { env.to_json() },
        stderr: env.error.clone().map(|e| format!("error: {e}\n")).unwrap_or_default(),
    }
}
