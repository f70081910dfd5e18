//! Equilibria, social optima and the selfishness level.
//!
//! Everything here is exact. Cost games are analyzed through their negation
//! (utility = −cost) so one code path serves both orientations; quantities that
//! are handed back to callers (gains, welfare drops) are the positive
//! differences in the game's own orientation, which coincide with the
//! utility-space differences.
//!
//! The selfishness level of a finite game is computed through stable social
//! optima: a social optimum from which no player gains by moving unilaterally
//! to another social optimum. For such an optimum `s`, every strictly
//! improving deviation lowers social welfare, and `s` becomes an equilibrium of
//! the altruistic game `G(α)` exactly when `α` is at least the largest appeal
//! factor (gain over welfare drop) among those deviations. The level is the
//! smallest such `α` over all stable social optima, and infinite when there is
//! none. For finite games the minimum is always attained, so there is no
//! "just above α" outcome to represent.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::game::{Game, JointStrategy, NormalForm, Orientation, Payoff, Profiles};
use crate::rational::Rational;
use crate::transforms;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("strategy {to_strategy} of player {player} does not strictly improve on {from}")]
    NotImproving { player: usize, from: JointStrategy, to_strategy: usize },
    #[error("{0} is not a stable social optimum")]
    NotStableOptimum(JointStrategy),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
}

/// A strictly improving unilateral deviation from a stable social optimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationRecord {
    pub player: usize,
    pub from: JointStrategy,
    pub to_strategy: usize,
    /// Payoff increase (cost decrease for cost games) of the deviator.
    pub payoff_gain: Rational,
    /// Social welfare decrease (social cost increase for cost games).
    pub welfare_drop: Rational,
    /// `payoff_gain / welfare_drop`.
    pub appeal_factor: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfiniteReason {
    NoStableSocialOptimum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum LevelResult {
    /// Some Nash equilibrium is already a social optimum.
    Zero { optimum: JointStrategy },
    /// Least α attained at `optimum`, bound by `deviation`.
    Finite { value: Rational, optimum: JointStrategy, deviation: DeviationRecord },
    Infinite(InfiniteReason),
}

impl LevelResult {
    /// The level as a rational, `None` when infinite.
    pub fn value(&self) -> Option<Rational> {
        match self {
            LevelResult::Zero { .. } => Some(Rational::zero()),
            LevelResult::Finite { value, .. } => Some(value.clone()),
            LevelResult::Infinite(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, LevelResult::Infinite(_))
    }

    pub fn optimum(&self) -> Option<&JointStrategy> {
        match self {
            LevelResult::Zero { optimum } | LevelResult::Finite { optimum, .. } => Some(optimum),
            LevelResult::Infinite(_) => None,
        }
    }
}

impl fmt::Display for LevelResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelResult::Zero { .. } => write!(f, "0"),
            LevelResult::Finite { value, .. } => write!(f, "{}", crate::rational::Display(value)),
            LevelResult::Infinite(_) => write!(f, "inf"),
        }
    }
}

/// `U_i(s)`: player `player`'s strictly improving deviations at `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperContourSet {
    pub player: usize,
    pub base: JointStrategy,
    pub strategies: Vec<usize>,
}

/// `α(s)` for a stable social optimum.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum OptimumAlpha {
    /// No player can improve: `s` is itself a Nash equilibrium.
    Zero,
    /// Largest appeal factor, with the (lexicographically first) deviation attaining it.
    Positive(DeviationRecord),
}

impl OptimumAlpha {
    pub fn value(&self) -> Rational {
        match self {
            OptimumAlpha::Zero => Rational::zero(),
            OptimumAlpha::Positive(d) => d.appeal_factor.clone(),
        }
    }
}

fn utility<V: Payoff>(orientation: Orientation, value: V) -> V {
    match orientation {
        Orientation::PayoffMax => value,
        Orientation::CostMin => -value,
    }
}

fn utility_of<G: NormalForm + ?Sized>(game: &G, profile: &[usize], player: usize) -> G::Value {
    utility(game.orientation(), game.value_of(profile, player))
}

fn welfare_of<G: NormalForm + ?Sized>(game: &G, profile: &[usize]) -> G::Value {
    utility(game.orientation(), game.total_at(profile))
}

fn check_profile<G: NormalForm + ?Sized>(game: &G, s: &JointStrategy) -> Result<(), AnalysisError> {
    let counts = game.strategy_counts();
    if s.0.len() != counts.len() || s.0.iter().zip(counts).any(|(&k, &c)| k >= c) {
        return Err(AnalysisError::IndexOutOfRange(format!("profile {s}")));
    }
    Ok(())
}

/// `true` when no player can strictly improve at `profile`.
fn is_equilibrium<G: NormalForm + ?Sized>(game: &G, profile: &[usize], values: &[G::Value]) -> bool {
    let orientation = game.orientation();
    let mut probe = profile.to_vec();
    for (player, &count) in game.strategy_counts().iter().enumerate() {
        let current = utility(orientation, values[player].clone());
        for alt in (0..count).filter(|&a| a != profile[player]) {
            probe[player] = alt;
            if utility_of(game, &probe, player) > current {
                return false;
            }
        }
        probe[player] = profile[player];
    }
    true
}

/// All pure Nash equilibria in lexicographic order.
pub fn pure_nash<G: NormalForm + ?Sized>(game: &G) -> Vec<JointStrategy> {
    let mut cursor = Profiles::new(game.strategy_counts());
    let mut values = Vec::with_capacity(game.player_count());
    let mut found = Vec::new();
    while let Some(profile) = cursor.peek() {
        game.values_at(profile, &mut values);
        if is_equilibrium(game, profile, &values) {
            found.push(JointStrategy(profile.to_vec()));
        }
        cursor.advance();
    }
    found
}

/// Optimal social welfare (utility orientation) and every profile attaining it.
fn optimum_scan<G: NormalForm + ?Sized>(game: &G) -> (G::Value, Vec<JointStrategy>) {
    let mut cursor = Profiles::new(game.strategy_counts());
    let mut best: Option<G::Value> = None;
    let mut optima = Vec::new();
    while let Some(profile) = cursor.peek() {
        let w = welfare_of(game, profile);
        match &best {
            Some(b) if w < *b => {}
            Some(b) if w == *b => optima.push(JointStrategy(profile.to_vec())),
            _ => {
                best = Some(w);
                optima.clear();
                optima.push(JointStrategy(profile.to_vec()));
            }
        }
        cursor.advance();
    }
    (best.expect("a finite game has at least one profile"), optima)
}

/// All social optima (exact ties included) in lexicographic order.
pub fn social_optima<G: NormalForm + ?Sized>(game: &G) -> Vec<JointStrategy> {
    optimum_scan(game).1
}

fn is_stable_given<G: NormalForm + ?Sized>(game: &G, best: &G::Value, s: &JointStrategy) -> bool {
    if welfare_of(game, s.indices()) != *best {
        return false;
    }
    let mut probe = s.0.clone();
    for (player, &count) in game.strategy_counts().iter().enumerate() {
        let current = utility_of(game, s.indices(), player);
        for alt in (0..count).filter(|&a| a != s.0[player]) {
            probe[player] = alt;
            if welfare_of(game, &probe) == *best && utility_of(game, &probe, player) > current {
                return false;
            }
        }
        probe[player] = s.0[player];
    }
    true
}

/// Social optima from which no player gains by moving to another social optimum.
pub fn stable_social_optima<G: NormalForm + ?Sized>(game: &G) -> Vec<JointStrategy> {
    let (best, optima) = optimum_scan(game);
    optima
        .into_iter()
        .filter(|s| is_stable_given(game, &best, s))
        .collect()
}

pub fn upper_contour<G: NormalForm + ?Sized>(
    game: &G,
    s: &JointStrategy,
    player: usize,
) -> Result<UpperContourSet, AnalysisError> {
    check_profile(game, s)?;
    if player >= game.player_count() {
        return Err(AnalysisError::IndexOutOfRange(format!("player {player}")));
    }
    let current = utility_of(game, s.indices(), player);
    let mut probe = s.0.clone();
    let strategies = (0..game.strategy_counts()[player])
        .filter(|&alt| {
            probe[player] = alt;
            utility_of(game, &probe, player) > current
        })
        .collect();
    Ok(UpperContourSet { player, base: s.clone(), strategies })
}

/// Builds the record for a deviation already known to be improving from a stable optimum.
fn deviation_record<G: NormalForm + ?Sized>(
    game: &G,
    s: &JointStrategy,
    player: usize,
    to_strategy: usize,
) -> DeviationRecord {
    let target = s.with(player, to_strategy);
    let gain = (utility_of(game, target.indices(), player) - utility_of(game, s.indices(), player)).to_rational();
    let drop = (welfare_of(game, s.indices()) - welfare_of(game, target.indices())).to_rational();
    debug_assert!(drop.is_positive(), "improving deviation from a stable optimum lowers welfare");
    DeviationRecord {
        player,
        from: s.clone(),
        to_strategy,
        appeal_factor: &gain / &drop,
        payoff_gain: gain,
        welfare_drop: drop,
    }
}

fn require_stable<G: NormalForm + ?Sized>(game: &G, s: &JointStrategy) -> Result<(), AnalysisError> {
    check_profile(game, s)?;
    let (best, _) = optimum_scan(game);
    if is_stable_given(game, &best, s) {
        Ok(())
    } else {
        Err(AnalysisError::NotStableOptimum(s.clone()))
    }
}

/// Appeal factor of `to_strategy` for `player` at the stable social optimum `s`.
pub fn appeal_factor<G: NormalForm + ?Sized>(
    game: &G,
    s: &JointStrategy,
    player: usize,
    to_strategy: usize,
) -> Result<DeviationRecord, AnalysisError> {
    check_profile(game, s)?;
    if player >= game.player_count() || to_strategy >= game.strategy_counts()[player] {
        return Err(AnalysisError::IndexOutOfRange(format!("player {player}, strategy {to_strategy}")));
    }
    require_stable(game, s)?;
    let target = s.with(player, to_strategy);
    if utility_of(game, target.indices(), player) <= utility_of(game, s.indices(), player) {
        return Err(AnalysisError::NotImproving { player, from: s.clone(), to_strategy });
    }
    Ok(deviation_record(game, s, player, to_strategy))
}

fn alpha_unchecked<G: NormalForm + ?Sized>(game: &G, s: &JointStrategy) -> OptimumAlpha {
    let mut best: Option<DeviationRecord> = None;
    let mut probe = s.0.clone();
    for (player, &count) in game.strategy_counts().iter().enumerate() {
        let current = utility_of(game, s.indices(), player);
        for alt in 0..count {
            probe[player] = alt;
            if utility_of(game, &probe, player) <= current {
                continue;
            }
            let record = deviation_record(game, s, player, alt);
            if best.as_ref().is_none_or(|b| record.appeal_factor > b.appeal_factor) {
                best = Some(record);
            }
        }
        probe[player] = s.0[player];
    }
    best.map_or(OptimumAlpha::Zero, OptimumAlpha::Positive)
}

/// `α(s)`: the largest appeal factor over all players' improving deviations.
pub fn alpha_of_optimum<G: NormalForm + ?Sized>(game: &G, s: &JointStrategy) -> Result<OptimumAlpha, AnalysisError> {
    require_stable(game, s)?;
    Ok(alpha_unchecked(game, s))
}

/// The selfishness level with witnesses.
pub fn selfishness_level<G: NormalForm + ?Sized>(game: &G) -> LevelResult {
    let mut best: Option<(JointStrategy, OptimumAlpha)> = None;
    for s in stable_social_optima(game) {
        let alpha = alpha_unchecked(game, &s);
        if best.as_ref().is_none_or(|(_, b)| alpha.value() < b.value()) {
            let zero = matches!(alpha, OptimumAlpha::Zero);
            best = Some((s, alpha));
            if zero {
                break;
            }
        }
    }
    match best {
        None => LevelResult::Infinite(InfiniteReason::NoStableSocialOptimum),
        Some((optimum, OptimumAlpha::Zero)) => LevelResult::Zero { optimum },
        Some((optimum, OptimumAlpha::Positive(deviation))) => LevelResult::Finite {
            value: deviation.appeal_factor.clone(),
            optimum,
            deviation,
        },
    }
}

/// Whether some pure Nash equilibrium of `G(α)` is a social optimum of `G`.
///
/// Decided straight from the definition: each social optimum is tested for
/// being an equilibrium of the altruistic game. This does not go through
/// appeal factors, so it can serve as an independent check on
/// [`selfishness_level`].
pub fn is_alpha_selfish<G: NormalForm + ?Sized>(game: &G, alpha: &Rational) -> bool {
    let perceived = |profile: &[usize], player: usize| -> Rational {
        utility_of(game, profile, player).to_rational() + alpha * welfare_of(game, profile).to_rational()
    };
    social_optima(game).iter().any(|s| {
        let mut probe = s.0.clone();
        game.strategy_counts().iter().enumerate().all(|(player, &count)| {
            let current = perceived(s.indices(), player);
            let stable = (0..count).all(|alt| {
                probe[player] = alt;
                perceived(&probe, player) <= current
            });
            probe[player] = s.0[player];
            stable
        })
    })
}

fn price_ratio<G: NormalForm + ?Sized>(game: &G, pick_best: bool) -> Option<Rational> {
    let equilibria = pure_nash(game);
    let (optimum, _) = optimum_scan(game);
    let optimum = optimum.to_rational();
    let welfare = equilibria
        .iter()
        .map(|s| welfare_of(game, s.indices()).to_rational());
    let chosen = if pick_best { welfare.max()? } else { welfare.min()? };
    match game.orientation() {
        Orientation::PayoffMax => chosen.is_positive().then(|| &optimum / &chosen),
        Orientation::CostMin => {
            // utilities are negated costs: SC(eq) / SC(opt) = chosen / optimum
            let optimal_cost = -optimum;
            optimal_cost.is_positive().then(|| -chosen / optimal_cost)
        }
    }
}

/// Optimum-to-best-equilibrium ratio (≥ 1); `None` without pure equilibria or
/// when the ratio's denominator is not positive.
pub fn price_of_stability<G: NormalForm + ?Sized>(game: &G) -> Option<Rational> {
    price_ratio(game, true)
}

/// Optimum-to-worst-equilibrium ratio; same undefined cases as [`price_of_stability`].
pub fn price_of_anarchy<G: NormalForm + ?Sized>(game: &G) -> Option<Rational> {
    price_ratio(game, false)
}

/// Price of stability of `G(α)` for each requested `α`, in input order.
pub fn selfishness_function(game: &Game, alphas: &[Rational]) -> Vec<(Rational, Option<Rational>)> {
    alphas
        .iter()
        .map(|alpha| {
            let pos = transforms::altruistic(game, alpha)
                .ok()
                .and_then(|g| price_of_stability(&g));
            (alpha.clone(), pos)
        })
        .collect()
}

/// `true` when `value` equals one.
pub fn is_unit(value: &Option<Rational>) -> bool {
    value.as_ref().is_some_and(One::is_one)
}
