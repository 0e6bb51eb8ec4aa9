//! Command-line surface: argument definitions and command execution.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use streamcalc::analysis::{self, hankel_rank, nonrationality_probe, Representation};
use streamcalc::{
    realize, CanonicalCircuit, Field, FieldElement, PointedLinearSystem, RationalStream,
    WeightedAutomaton,
};

use crate::error::{CliError, Result};
use crate::formats::{self, CircuitFile};

#[derive(Debug, Parser)]
#[command(
    name = "streamcalc",
    version,
    about = "Exact calculus of rational streams"
)]
pub struct Cli {
    /// Scalar field: `q` for the rationals or `gf:p` for a prime p.
    #[arg(long, global = true, default_value = "q")]
    pub field: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the first coefficients of an expression and its normal form.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        n: usize,
    },
    /// Print the k-th stream derivative.
    Derive {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        k: usize,
    },
    /// Print a minimal linear system whose outputs are the given streams.
    Realize {
        #[arg(required = true, allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
    /// Build or simulate stream circuits.
    Circuit {
        #[command(subcommand)]
        action: CircuitAction,
    },
    /// Build or evaluate weighted stream automata.
    Automaton {
        #[command(subcommand)]
        action: AutomatonAction,
    },
    /// Decide whether two representations denote the same stream.
    ///
    /// Each side is `expr:<text>`, `system:<file>[@v]`, `circuit:<file>` or
    /// `automaton:<file>@<state>`, with states numbered from 1.
    Equal {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Rank of the m x m Hankel matrix of a prefix.
    Rank {
        #[command(flatten)]
        source: PrefixSource,
        #[arg(long)]
        m: usize,
    },
    /// Check a prefix against rational streams of size at most d.
    Probe {
        #[command(flatten)]
        source: PrefixSource,
        #[arg(long)]
        d: usize,
    },
}

#[derive(Debug, clap::Args)]
#[group(required = true, multiple = false)]
pub struct PrefixSource {
    /// Comma-separated coefficients.
    #[arg(long, allow_hyphen_values = true)]
    pub prefix: Option<String>,
    /// An expression, expanded as far as needed.
    #[arg(long, allow_hyphen_values = true)]
    pub expr: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum CircuitAction {
    /// Canonical circuit computing an expression.
    Synth {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Print the gate-level netlist instead of the compact form.
        #[arg(long)]
        netlist: bool,
    },
    /// Run a circuit file for n ticks.
    Sim {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum AutomatonAction {
    /// Automaton whose first state computes an expression.
    Synth {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Coefficients of the stream of a state.
    Eval {
        #[arg(long)]
        file: PathBuf,
        /// State number, starting at 1.
        #[arg(long)]
        state: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Enumerate paths.
    Path,
    /// Expand the closed form.
    Closed,
}

/// What a command printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome {
            stdout,
            stderr: String::new(),
            code: 0,
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn prefix_line(v: &[FieldElement]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn stream(text: &str, field: &Field) -> Result<RationalStream> {
    Ok(streamcalc::parse_stream(text, field)?)
}

pub fn execute(cli: &Cli) -> Result<String> {
    let field = Field::parse(&cli.field)?;
    match &cli.command {
        Command::Eval { expr, n } => {
            let s = stream(expr, &field)?;
            Ok(format!("{}\n{s}\n", prefix_line(&s.expand(*n))))
        }
        Command::Derive { expr, k } => {
            Ok(format!("{}\n", stream(expr, &field)?.nth_derivative(*k)))
        }
        Command::Realize { exprs } => {
            let streams: Vec<RationalStream> = exprs
                .iter()
                .map(|e| stream(e, &field))
                .collect::<Result<_>>()?;
            Ok(formats::format_system(&realize(&streams)?))
        }
        Command::Circuit { action } => match action {
            CircuitAction::Synth { expr, netlist } => {
                let c = CanonicalCircuit::synthesize(&stream(expr, &field)?);
                if *netlist {
                    Ok(formats::format_netlist(&c.to_netlist()))
                } else {
                    Ok(format!("{}\n", formats::format_canonical(&c)))
                }
            }
            CircuitAction::Sim { file, n } => {
                let net = formats::parse_circuit(&read(file)?, &field)?.to_netlist();
                Ok(format!("{}\n", prefix_line(&net.simulate(*n)?)))
            }
        },
        Command::Automaton { action } => match action {
            AutomatonAction::Synth { expr } => Ok(formats::format_automaton(
                &WeightedAutomaton::synthesize(&stream(expr, &field)?),
            )),
            AutomatonAction::Eval {
                file,
                state,
                n,
                method,
            } => {
                let a = formats::parse_automaton(&read(file)?, &field)?;
                let q = state_index(*state, a.states())?;
                let coeffs = match method {
                    Method::Path => (0..*n)
                        .map(|k| a.path_sum(q, k))
                        .collect::<streamcalc::Result<Vec<_>>>()?,
                    Method::Closed => a.behaviour()[q].expand(*n),
                };
                Ok(format!("{}\n", prefix_line(&coeffs)))
            }
        },
        Command::Equal { left, right } => {
            let a = representation(left, &field)?;
            let b = representation(right, &field)?;
            Ok(match analysis::first_difference(&a, &b)? {
                None => "equal\n".to_string(),
                Some(i) => format!("not-equal at index {i}\n"),
            })
        }
        Command::Rank { source, m } => {
            let prefix = source.prefix(&field, (2 * m).saturating_sub(1))?;
            let rank = hankel_rank(&prefix, *m)?;
            Ok(format!(
                "prefix_len: {}\nhankel_size: {m}\nrank: {rank}\n",
                prefix.len()
            ))
        }
        Command::Probe { source, d } => {
            let prefix = source.prefix(&field, 2 * d + 1)?;
            Ok(format!("{}\n", nonrationality_probe(&prefix, *d)?))
        }
    }
}

impl PrefixSource {
    /// The given coefficients, or `len` coefficients of the expression.
    fn prefix(&self, field: &Field, len: usize) -> Result<Vec<FieldElement>> {
        match (&self.prefix, &self.expr) {
            (Some(p), _) => formats::parse_vector(field, p).map_err(CliError::Usage),
            (None, Some(e)) => Ok(stream(e, field)?.expand(len)),
            (None, None) => Err(CliError::Usage(
                "one of --prefix or --expr is required".into(),
            )),
        }
    }
}

fn state_index(state: usize, states: usize) -> Result<usize> {
    if state == 0 || state > states {
        return Err(CliError::Core(streamcalc::Error::StateOutOfRange {
            index: state,
            states,
        }));
    }
    Ok(state - 1)
}

/// Resolves `expr:`, `system:`, `circuit:` and `automaton:` operands.
pub fn representation(spec: &str, field: &Field) -> Result<Representation> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("expected `kind:value`, got {spec:?}")))?;
    match kind {
        "expr" => Ok(Representation::Rational(stream(rest, field)?)),
        "system" => {
            let (path, vector) = match rest.rsplit_once('@') {
                Some((p, v)) => (p, Some(v)),
                None => (rest, None),
            };
            let file = formats::parse_system(&read(Path::new(path))?, field)?;
            let initial = match (vector, file.initial) {
                (Some(v), _) => formats::parse_vector(file.system.field(), v).map_err(CliError::Usage)?,
                (None, Some(v)) => v,
                (None, None) => {
                    return Err(CliError::Usage(format!(
                        "{path} has no v0; give the state as system:{path}@v"
                    )))
                }
            };
            Ok(Representation::System(PointedLinearSystem::new(file.system, initial)?))
        }
        "circuit" => match formats::parse_circuit(&read(Path::new(rest))?, field)? {
            CircuitFile::Canonical(c) => Ok(Representation::Circuit(c)),
            CircuitFile::Netlist(_) => Err(CliError::Usage(format!(
                "{rest}: closed forms exist for canonical circuits only; give it as M=..; N=..; r=.."
            ))),
        },
        "automaton" => {
            let (path, state) = rest
                .rsplit_once('@')
                .ok_or_else(|| CliError::Usage("automaton operands need @state".into()))?;
            let state: usize = state
                .parse()
                .map_err(|_| CliError::Usage(format!("bad state number {state:?}")))?;
            let a = formats::parse_automaton(&read(Path::new(path))?, field)?;
            let q = state_index(state, a.states())?;
            Ok(Representation::Automaton(a, q))
        }
        other => Err(CliError::Usage(format!("unknown representation kind {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("streamcalc").chain(args.iter().copied()))
    }

    #[test]
    fn eval_prints_prefix_and_normal_form() {
        let out = run_args(&["eval", "1/(1-3*X)", "--n", "6"]);
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout, "1, 3, 9, 27, 81, 243\n1/(1 - 3*X)\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["eval", "1/X", "--n", "3"]).code, 1);
        assert_eq!(run_args(&["eval", "1/(", "--n", "3"]).code, 2);
        assert_eq!(
            run_args(&["eval", "X", "--n", "3", "--field", "gf:4"]).code,
            2
        );
        assert_eq!(run_args(&["frobnicate"]).code, 2);
        assert_eq!(run_args(&["probe", "--prefix", "1,2", "--d", "3"]).code, 1);
    }

    #[test]
    fn leading_minus_is_an_expression() {
        let out = run_args(&["eval", "-X", "--n", "3"]);
        assert_eq!(out.stdout, "0, -1, 0\n-X\n");
    }

    #[test]
    fn prime_field_evaluation() {
        let out = run_args(&["--field", "gf:7", "eval", "1/(1-X)^2", "--n", "9"]);
        assert_eq!(out.stdout.lines().next(), Some("1, 2, 3, 4, 5, 6, 0, 1, 2"));
    }
}
