//! The JSON game document.
//!
//! ```json
//! {
//!   "orientation": "payoff",
//!   "players": [
//!     { "name": "row", "strategies": ["C", "D"] },
//!     { "name": "col", "strategies": ["C", "D"] }
//!   ],
//!   "payoffs": [[[2, 2], [0, 3]], [[3, 0], [1, 1]]]
//! }
//! ```
//!
//! `payoffs` is either nested one level per player (player 1 outermost) with
//! a vector of `n` values innermost, or a list of
//! `{ "profile": [labels], "values": [n values] }` entries covering every
//! profile once. Values are integers or `"p/q"` strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use selfishness::game::{Game, GameError, JointStrategy, Orientation};
use selfishness::rational::{self, ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("no payoffs given for profile ({0})")]
    MissingProfile(String),
    #[error("profile ({0}) listed more than once")]
    DuplicateProfile(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("malformed payoffs: {0}")]
    Shape(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationTag {
    Payoff,
    Cost,
}

impl From<Orientation> for OrientationTag {
    fn from(o: Orientation) -> Self {
        match o {
            Orientation::PayoffMax => OrientationTag::Payoff,
            Orientation::CostMin => OrientationTag::Cost,
        }
    }
}

impl From<OrientationTag> for Orientation {
    fn from(o: OrientationTag) -> Self {
        match o {
            OrientationTag::Payoff => Orientation::PayoffMax,
            OrientationTag::Cost => Orientation::CostMin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerEntry {
    pub name: String,
    pub strategies: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub orientation: OrientationTag,
    pub players: Vec<PlayerEntry>,
    pub payoffs: Value,
}

impl GameDocument {
    /// Dense document for `game`; players are named `1..n` unless `names` is given.
    pub fn from_game(game: &Game, names: Option<&[String]>) -> Self {
        let players = (0..game.player_count())
            .map(|i| PlayerEntry {
                name: names.and_then(|n| n.get(i).cloned()).unwrap_or_else(|| (i + 1).to_string()),
                strategies: game.labels(i).to_vec(),
            })
            .collect();
        let cells: Vec<Value> = game
            .all_values()
            .chunks(game.player_count())
            .map(|cell| Value::Array(cell.iter().map(|v| Value::String(rational::render(v))).collect()))
            .collect();
        GameDocument {
            orientation: game.orientation().into(),
            players,
            payoffs: nest(cells, game.strategy_counts()),
        }
    }

    pub fn player_names(&self) -> Vec<String> {
        self.players.iter().map(|p| p.name.clone()).collect()
    }

    pub fn to_game(&self) -> Result<Game, DocumentError> {
        let labels: Vec<Vec<String>> = self.players.iter().map(|p| p.strategies.clone()).collect();
        let counts: Vec<usize> = labels.iter().map(Vec::len).collect();
        let n = counts.len();
        let cells = match &self.payoffs {
            Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
                sparse_cells(items, &labels)?
            }
            dense => {
                let mut flat = Vec::new();
                flatten(dense, &counts, 0, &mut flat)?;
                flat
            }
        };
        let cells = cells
            .into_iter()
            .map(|cell| {
                if cell.len() != n {
                    return Err(DocumentError::Shape(format!("expected {n} values per profile, found {}", cell.len())));
                }
                cell.iter().map(parse_value).collect()
            })
            .collect::<Result<Vec<Vec<Rational>>, _>>()?;
        Ok(Game::new(self.orientation.into(), labels, cells)?)
    }
}

fn nest(cells: Vec<Value>, counts: &[usize]) -> Value {
    if counts.is_empty() {
        return cells.into_iter().next().unwrap_or(Value::Null);
    }
    let chunk = cells.len() / counts[0].max(1);
    let mut rest = cells.into_iter();
    Value::Array(
        (0..counts[0])
            .map(|_| nest(rest.by_ref().take(chunk).collect(), &counts[1..]))
            .collect(),
    )
}

fn flatten(value: &Value, counts: &[usize], depth: usize, out: &mut Vec<Vec<Value>>) -> Result<(), DocumentError> {
    let items = value
        .as_array()
        .ok_or_else(|| DocumentError::Shape(format!("expected an array at depth {}", depth + 1)))?;
    if depth == counts.len() {
        out.push(items.clone());
        return Ok(());
    }
    if items.len() != counts[depth] {
        return Err(DocumentError::Shape(format!(
            "player {} has {} strategies but the payoffs list {} entries",
            depth + 1,
            counts[depth],
            items.len()
        )));
    }
    items.iter().try_for_each(|item| flatten(item, counts, depth + 1, out))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SparseEntry {
    profile: Vec<String>,
    values: Vec<Value>,
}

fn sparse_cells(items: &[Value], labels: &[Vec<String>]) -> Result<Vec<Vec<Value>>, DocumentError> {
    let mut cells: BTreeMap<JointStrategy, Vec<Value>> = BTreeMap::new();
    for item in items {
        let entry: SparseEntry =
            serde_json::from_value(item.clone()).map_err(|e| DocumentError::Shape(e.to_string()))?;
        if entry.profile.len() != labels.len() {
            return Err(DocumentError::Shape(format!("profile ({}) has the wrong length", entry.profile.join(","))));
        }
        let indices = entry
            .profile
            .iter()
            .zip(labels)
            .map(|(l, set)| {
                set.iter()
                    .position(|s| s == l)
                    .ok_or_else(|| DocumentError::Shape(format!("unknown strategy `{l}`")))
            })
            .collect::<Result<Vec<usize>, _>>()?;
        if cells.insert(JointStrategy::new(indices), entry.values).is_some() {
            return Err(DocumentError::DuplicateProfile(entry.profile.join(",")));
        }
    }
    let counts: Vec<usize> = labels.iter().map(Vec::len).collect();
    selfishness::game::Profiles::new(&counts)
        .map(|s| {
            cells.remove(&s).ok_or_else(|| {
                let names: Vec<&str> = s.indices().iter().zip(labels).map(|(&k, l)| l[k].as_str()).collect();
                DocumentError::MissingProfile(names.join(","))
            })
        })
        .collect()
}

fn parse_value(value: &Value) -> Result<Rational, DocumentError> {
    let text = match value {
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(DocumentError::InvalidValue(format!("{other} is not an integer or \"p/q\" string"))),
    };
    rational::parse_rational(&text).map_err(|e| match e {
        ParseRationalError::ZeroDenominator(t) => DocumentError::ZeroDenominator(t),
        other => DocumentError::InvalidValue(other.to_string()),
    })
}

pub fn parse_document(text: &str) -> Result<GameDocument, DocumentError> {
    serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn parse_game(text: &str) -> Result<Game, DocumentError> {
    parse_document(text)?.to_game()
}

pub fn render_game(game: &Game, names: Option<&[String]>) -> String {
    let doc = GameDocument::from_game(game, names);
    serde_json::to_string_pretty(&doc).expect("documents serialize") + "\n"
}
