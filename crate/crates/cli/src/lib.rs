//! Command-line front end: game documents in, JSON reports out.
//!
//! Exit codes: 0 on success, 2 on parse or validation errors, 3 when a game
//! exceeds the profile cap.

pub mod document;
pub mod error;
pub mod params;
pub mod report;

use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use selfishness::analysis::{
    price_of_anarchy, price_of_stability, pure_nash, selfishness_function, selfishness_level, social_optima,
    stable_social_optima,
};
use selfishness::closedform::closed_form_level;
use selfishness::dynamics::improvement_graph_with_cap;
use selfishness::families::{generate_with_cap, FamilySpec, DEFAULT_CELL_CAP};
use selfishness::game::{Game, NormalForm};
use selfishness::rational::{parse_rational, render, Rational};
use selfishness::transforms::{self, AltruismParam, Model};

pub use document::{parse_document, parse_game, render_game, DocumentError, GameDocument};
pub use error::CliError;

use report::{AnalysisReport, DynamicsReport, SweepReport, SweepRow, Timings};

#[derive(Debug, Parser)]
#[command(name = "selfishness", version, about = "Selfishness level of finite strategic games")]
pub struct Cli {
    /// Largest number of joint strategies any command may expand.
    #[arg(long, global = true, default_value_t = DEFAULT_CELL_CAP)]
    pub cap: u128,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equilibria, optima, selfishness level and prices of stability/anarchy.
    Analyze { file: Option<PathBuf> },
    /// Prints the selfishness level as `0`, `p/q` or `inf`.
    Level { file: Option<PathBuf> },
    /// Applies an altruistic transform, then optional shift and scale.
    Transform {
        file: Option<PathBuf>,
        /// Altruism parameter in the units of `--model`.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value = "A")]
        model: Model,
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        scale: Option<String>,
        /// Applies the inverse of the model A transform instead.
        #[arg(long)]
        inverse: bool,
    },
    /// Emits a game document for a named family.
    Generate {
        family: Option<String>,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// JSON family description, e.g. a custom cost sharing game.
        #[arg(long, conflicts_with = "family")]
        spec: Option<PathBuf>,
    },
    /// Improvement-graph properties.
    Dynamics { file: Option<PathBuf> },
    /// Price of stability of `G(α)` for each listed `α`.
    Sweep {
        file: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        alphas: Vec<String>,
    },
    /// Known level or bound for a family.
    Closedform {
        family: Option<String>,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long, conflicts_with = "family")]
        spec: Option<PathBuf>,
    },
}

fn read_input(file: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<String, CliError> {
    let mut text = String::new();
    match file {
        Some(path) => {
            text = std::fs::read_to_string(path)
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?
        }
        None => {
            stdin
                .read_to_string(&mut text)
                .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
        }
    }
    Ok(text)
}

fn load(file: Option<&PathBuf>, stdin: &mut dyn Read, cap: u128) -> Result<(Game, Vec<String>), CliError> {
    let doc = parse_document(&read_input(file, stdin)?)?;
    let game = doc.to_game()?;
    let cells = NormalForm::profile_count(&game);
    if cells > cap {
        return Err(CliError::ExplosionGuard { cells, cap });
    }
    Ok((game, doc.player_names()))
}

fn rational_arg(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Params(format!("--{name}: {e}")))
}

fn spec_from_file(path: &PathBuf) -> Result<FamilySpec, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Document(DocumentError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })
    })
}

fn elapsed(start: Instant) -> Timings {
    Timings { elapsed_ms: start.elapsed().as_millis() }
}

/// Runs one command and returns what it prints on standard output.
pub fn run(cli: &Cli, stdin: &mut dyn Read) -> Result<String, CliError> {
    let cap = cli.cap;
    match &cli.command {
        Command::Analyze { file } => {
            let (game, names) = load(file.as_ref(), stdin, cap)?;
            let start = Instant::now();
            let level = selfishness_level(&game);
            let out = AnalysisReport {
                game: GameDocument::from_game(&game, Some(&names)),
                nash_equilibria: report::label_list(&game, &pure_nash(&game)),
                social_optima: report::label_list(&game, &social_optima(&game)),
                stable_social_optima: report::label_list(&game, &stable_social_optima(&game)),
                level: report::level_report(&game, &names, &level),
                price_of_stability: report::optional(price_of_stability(&game)),
                price_of_anarchy: report::optional(price_of_anarchy(&game)),
                timings: elapsed(start),
            };
            Ok(report::render_report(&out))
        }
        Command::Level { file } => {
            let (game, _) = load(file.as_ref(), stdin, cap)?;
            Ok(format!("{}\n", selfishness_level(&game)))
        }
        Command::Transform { file, alpha, model, shift, scale, inverse } => {
            let (game, names) = load(file.as_ref(), stdin, cap)?;
            let value = rational_arg("alpha", alpha)?;
            let mut out = if *inverse {
                if *model != Model::A {
                    return Err(CliError::Params("--inverse is defined for model A only".into()));
                }
                transforms::inverse_altruistic(&game, &value)?
            } else {
                transforms::altruistic_model(&game, &AltruismParam::new(*model, value)?)?
            };
            if let Some(a) = shift {
                out = transforms::shift(&out, &rational_arg("shift", a)?);
            }
            if let Some(a) = scale {
                out = transforms::scale(&out, &rational_arg("scale", a)?)?;
            }
            Ok(render_game(&out, Some(&names)))
        }
        Command::Generate { family, params, spec } => {
            let spec = match (family, spec) {
                (_, Some(path)) => spec_from_file(path)?,
                (Some(name), None) => params::family_spec(name, params::Params::parse(params)?)?,
                (None, None) => return Err(CliError::Params("give a family name or --spec".into())),
            };
            let game = generate_with_cap(&spec, cap)?;
            Ok(render_game(&game, None))
        }
        Command::Dynamics { file } => {
            let (game, _) = load(file.as_ref(), stdin, cap)?;
            let start = Instant::now();
            let graph = improvement_graph_with_cap(&game, cap)?;
            let out = DynamicsReport {
                profiles: graph.node_count(),
                improvement_edges: graph.edge_count(),
                sinks: report::label_list(&game, &graph.sinks()),
                finite_improvement_property: graph.has_fip(),
                weakly_acyclic: graph.is_weakly_acyclic(),
                potential_certificate: graph.potential().is_some(),
                timings: elapsed(start),
            };
            Ok(report::render_report(&out))
        }
        Command::Sweep { file, alphas } => {
            let (game, _) = load(file.as_ref(), stdin, cap)?;
            let alphas = alphas
                .iter()
                .map(|a| rational_arg("alphas", a))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(neg) = alphas.iter().find(|a| *a < &Rational::from_integer(0.into())) {
                return Err(CliError::Params(format!("--alphas: {} is negative", render(neg))));
            }
            let start = Instant::now();
            let rows = selfishness_function(&game, &alphas)
                .into_iter()
                .map(|(alpha, pos)| SweepRow { alpha: render(&alpha), price_of_stability: report::optional(pos) })
                .collect();
            Ok(report::render_report(&SweepReport { rows, timings: elapsed(start) }))
        }
        Command::Closedform { family, params, spec } => {
            let input = match (family, spec) {
                (_, Some(path)) => spec_from_file(path)?.into(),
                (Some(name), None) => params::closed_form_input(name, params::Params::parse(params)?)?,
                (None, None) => return Err(CliError::Params("give a family name or --spec".into())),
            };
            let result = closed_form_level(&input)?;
            Ok(serde_json::to_string_pretty(&result).expect("results serialize") + "\n")
        }
    }
}
