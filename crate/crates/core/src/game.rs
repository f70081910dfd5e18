//! Finite normal-form games with exact payoffs.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Players maximize payoffs; social welfare is maximized.
    PayoffMax,
    /// Players minimize costs; social cost is minimized.
    CostMin,
}

/// One strategy index per player. Ordering is lexicographic on the indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JointStrategy(pub Vec<usize>);

impl JointStrategy {
    pub fn new(indices: impl Into<Vec<usize>>) -> Self {
        JointStrategy(indices.into())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// `(s'_i, s_{-i})`: the same profile with player `player` switched to `strategy`.
    pub fn with(&self, player: usize, strategy: usize) -> Self {
        let mut next = self.0.clone();
        next[player] = strategy;
        JointStrategy(next)
    }
}

impl From<Vec<usize>> for JointStrategy {
    fn from(v: Vec<usize>) -> Self {
        JointStrategy(v)
    }
}

impl fmt::Display for JointStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, idx) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{idx}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("a game needs at least two players, got {0}")]
    PlayerCountTooSmall(usize),
    #[error("player {player} has an empty strategy set")]
    EmptyStrategySet { player: usize },
    #[error("player {player} has duplicate strategy label `{label}`")]
    DuplicateLabel { player: usize, label: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
}

/// Exact payoff values the analysis engine can work with.
///
/// Dense games use [`Rational`]; formula-backed games with very many profiles
/// may use scaled machine integers instead. Only differences and ratios of
/// values ever leave the engine, so any positive common scale is harmless.
pub trait Payoff:
    Clone + Ord + fmt::Debug + Zero + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self>
{
    fn to_rational(&self) -> Rational;
}

impl Payoff for Rational {
    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

impl Payoff for i128 {
    fn to_rational(&self) -> Rational {
        Rational::from_integer(BigInt::from(*self))
    }
}

/// Read access to a finite game, whether stored densely or computed on demand.
pub trait NormalForm {
    type Value: Payoff;

    fn orientation(&self) -> Orientation;

    fn strategy_counts(&self) -> &[usize];

    /// Writes every player's value at `profile` into `out` (native orientation).
    fn values_at(&self, profile: &[usize], out: &mut Vec<Self::Value>);

    fn player_count(&self) -> usize {
        self.strategy_counts().len()
    }

    fn profile_count(&self) -> u128 {
        self.strategy_counts().iter().map(|&c| c as u128).product()
    }

    fn value_of(&self, profile: &[usize], player: usize) -> Self::Value {
        let mut out = Vec::with_capacity(self.player_count());
        self.values_at(profile, &mut out);
        out.swap_remove(player)
    }

    fn total_at(&self, profile: &[usize]) -> Self::Value {
        let mut out = Vec::with_capacity(self.player_count());
        self.values_at(profile, &mut out);
        out.into_iter().fold(Self::Value::zero(), |acc, v| acc + v)
    }
}

/// Odometer over all joint strategies in lexicographic order.
#[derive(Debug, Clone)]
pub struct Profiles {
    counts: Vec<usize>,
    current: Vec<usize>,
    done: bool,
}

impl Profiles {
    pub fn new(counts: &[usize]) -> Self {
        Profiles {
            counts: counts.to_vec(),
            current: vec![0; counts.len()],
            done: counts.contains(&0),
        }
    }

    /// The profile the cursor points at, without allocating.
    pub fn peek(&self) -> Option<&[usize]> {
        (!self.done).then_some(self.current.as_slice())
    }

    pub fn advance(&mut self) {
        for pos in (0..self.counts.len()).rev() {
            self.current[pos] += 1;
            if self.current[pos] < self.counts[pos] {
                return;
            }
            self.current[pos] = 0;
        }
        self.done = true;
    }
}

impl Iterator for Profiles {
    type Item = JointStrategy;

    fn next(&mut self) -> Option<JointStrategy> {
        let item = JointStrategy(self.peek()?.to_vec());
        self.advance();
        Some(item)
    }
}

/// A validated finite game with a dense exact payoff tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    orientation: Orientation,
    labels: Vec<Vec<String>>,
    counts: Vec<usize>,
    /// Row-major, one block of `n` values per profile; player 0 varies slowest.
    values: Vec<Rational>,
}

impl Game {
    /// Builds a game from per-player labels and one value vector per profile,
    /// profiles listed in lexicographic order.
    pub fn new(
        orientation: Orientation,
        labels: Vec<Vec<String>>,
        cells: Vec<Vec<Rational>>,
    ) -> Result<Self, GameError> {
        check_labels(&labels)?;
        let n = labels.len();
        let counts: Vec<usize> = labels.iter().map(Vec::len).collect();
        let expected = cell_count(&counts)?;
        if cells.len() != expected {
            return Err(GameError::DimensionMismatch(format!(
                "expected {expected} profiles, got {}",
                cells.len()
            )));
        }
        let mut values = Vec::with_capacity(expected * n);
        for (k, cell) in cells.into_iter().enumerate() {
            if cell.len() != n {
                return Err(GameError::DimensionMismatch(format!(
                    "profile #{k} holds {} values for {n} players",
                    cell.len()
                )));
            }
            values.extend(cell);
        }
        Ok(Game { orientation, labels, counts, values })
    }

    /// Builds a game by evaluating `f` at every profile in lexicographic order.
    pub fn from_fn<F>(orientation: Orientation, labels: Vec<Vec<String>>, mut f: F) -> Result<Self, GameError>
    where
        F: FnMut(&[usize]) -> Vec<Rational>,
    {
        check_labels(&labels)?;
        let counts: Vec<usize> = labels.iter().map(Vec::len).collect();
        cell_count(&counts)?;
        let cells = Profiles::new(&counts).map(|s| f(s.indices())).collect();
        Game::new(orientation, labels, cells)
    }

    /// Re-checks every structural invariant.
    pub fn validate(&self) -> Result<(), GameError> {
        check_labels(&self.labels)?;
        let expected = cell_count(&self.counts)? * self.player_count();
        if self.values.len() != expected {
            return Err(GameError::DimensionMismatch(format!(
                "tensor holds {} values, expected {expected}",
                self.values.len()
            )));
        }
        Ok(())
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn player_count(&self) -> usize {
        self.counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn labels(&self, player: usize) -> &[String] {
        &self.labels[player]
    }

    pub fn all_labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    pub fn label_of(&self, s: &JointStrategy) -> Vec<&str> {
        s.0.iter()
            .enumerate()
            .map(|(i, &k)| self.labels[i][k].as_str())
            .collect()
    }

    pub fn profile_count(&self) -> usize {
        self.values.len() / self.player_count()
    }

    fn offset(&self, profile: &[usize]) -> Result<usize, GameError> {
        if profile.len() != self.player_count() {
            return Err(GameError::IndexOutOfRange(format!(
                "profile has {} entries for {} players",
                profile.len(),
                self.player_count()
            )));
        }
        let mut flat = 0usize;
        for (i, (&k, &count)) in profile.iter().zip(&self.counts).enumerate() {
            if k >= count {
                return Err(GameError::IndexOutOfRange(format!(
                    "strategy {k} for player {i} with {count} strategies"
                )));
            }
            flat = flat * count + k;
        }
        Ok(flat * self.player_count())
    }

    /// All players' values at `s`, in native orientation.
    pub fn cell(&self, s: &JointStrategy) -> Result<&[Rational], GameError> {
        let at = self.offset(s.indices())?;
        Ok(&self.values[at..at + self.player_count()])
    }

    /// `p_i(s)` for payoff games, the stored cost `c_i(s)` for cost games.
    pub fn payoff(&self, s: &JointStrategy, player: usize) -> Result<&Rational, GameError> {
        if player >= self.player_count() {
            return Err(GameError::IndexOutOfRange(format!("player {player}")));
        }
        Ok(&self.cell(s)?[player])
    }

    /// Sum of all players' values at `s`: social welfare or social cost.
    pub fn social_value(&self, s: &JointStrategy) -> Result<Rational, GameError> {
        Ok(self.cell(s)?.iter().sum())
    }

    pub fn joint_strategies(&self) -> Profiles {
        Profiles::new(&self.counts)
    }

    /// Same game with every value replaced by `f(profile, player, value)`.
    pub fn map_values<F>(&self, mut f: F) -> Game
    where
        F: FnMut(&[usize], usize, &Rational) -> Rational,
    {
        let n = self.player_count();
        let mut values = Vec::with_capacity(self.values.len());
        let mut cursor = Profiles::new(&self.counts);
        let mut chunks = self.values.chunks(n);
        while let (Some(profile), Some(cell)) = (cursor.peek(), chunks.next()) {
            for (i, v) in cell.iter().enumerate() {
                values.push(f(profile, i, v));
            }
            cursor.advance();
        }
        Game {
            orientation: self.orientation,
            labels: self.labels.clone(),
            counts: self.counts.clone(),
            values,
        }
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Game {
        self.orientation = orientation;
        self
    }

    /// The payoff-maximization form: cost games are negated.
    pub fn to_payoff_max(&self) -> Game {
        match self.orientation {
            Orientation::PayoffMax => self.clone(),
            Orientation::CostMin => self
                .map_values(|_, _, v| -v)
                .with_orientation(Orientation::PayoffMax),
        }
    }

    pub fn all_values(&self) -> &[Rational] {
        &self.values
    }
}

impl NormalForm for Game {
    type Value = Rational;

    fn orientation(&self) -> Orientation {
        self.orientation
    }

    fn strategy_counts(&self) -> &[usize] {
        &self.counts
    }

    fn values_at(&self, profile: &[usize], out: &mut Vec<Rational>) {
        out.clear();
        let at = self.offset(profile).expect("profile within game bounds");
        out.extend_from_slice(&self.values[at..at + self.player_count()]);
    }

    fn value_of(&self, profile: &[usize], player: usize) -> Rational {
        let at = self.offset(profile).expect("profile within game bounds");
        self.values[at + player].clone()
    }

    fn total_at(&self, profile: &[usize]) -> Rational {
        let at = self.offset(profile).expect("profile within game bounds");
        self.values[at..at + self.player_count()].iter().sum()
    }
}

fn check_labels(labels: &[Vec<String>]) -> Result<(), GameError> {
    if labels.len() < 2 {
        return Err(GameError::PlayerCountTooSmall(labels.len()));
    }
    for (player, set) in labels.iter().enumerate() {
        if set.is_empty() {
            return Err(GameError::EmptyStrategySet { player });
        }
        let mut seen = HashSet::with_capacity(set.len());
        for label in set {
            if !seen.insert(label.as_str()) {
                return Err(GameError::DuplicateLabel { player, label: label.clone() });
            }
        }
    }
    Ok(())
}

fn cell_count(counts: &[usize]) -> Result<usize, GameError> {
    counts
        .iter()
        .try_fold(1usize, |acc, &c| acc.checked_mul(c))
        .ok_or_else(|| GameError::DimensionMismatch("profile count overflows".into()))
}

/// Labels `0, 1, ...`.
pub fn numbered_labels(count: usize) -> Vec<String> {
    (0..count).map(|k| k.to_string()).collect()
}
