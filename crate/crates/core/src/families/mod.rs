//! Generators for the game families analyzed by this crate.

mod compact;
mod public_goods;

pub use compact::{loads, min_positive_slope, AffineDelay, CompactCongestionGame, CostSharingGame, StrategySets};
pub use public_goods::PublicGoodsGame;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::game::{Game, GameError, Orientation};
use crate::rational::{self, int, Rational};

/// Default limit on the number of profiles a generator may expand.
pub const DEFAULT_CELL_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("game would have {cells} profiles, above the cap of {cap}")]
    ExplosionGuard { cells: u128, cap: u128 },
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// A game family with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `p_i(s) = 1 − s_i + 2·Σ_{j≠i} s_j` with cooperate = 1, defect = 0.
    PrisonersDilemmaN { n: usize },
    /// Two-player dilemma whose level is `alpha` and price of stability `beta`.
    GeneralizedPd {
        #[serde(with = "rational::serde_str")]
        alpha: Rational,
        #[serde(with = "rational::serde_str")]
        beta: Rational,
    },
    /// Contributions `j·b/k`; `p_i(s) = b − s_i + (c/n)·Σ s_j`.
    PublicGoodsGrid {
        n: usize,
        #[serde(with = "rational::serde_str")]
        b: Rational,
        #[serde(with = "rational::serde_str")]
        c: Rational,
        grid_steps: usize,
    },
    TravelersDilemma,
    MatchingPennies,
    BattleOfSexes,
    /// Matching pennies with an extra "edge" strategy.
    BadNash3x3,
    NoNash2x2,
    /// Binary game whose selfishness level equals `f_value` for any `n`.
    FLevelGame {
        n: usize,
        #[serde(with = "rational::serde_str")]
        f_value: Rational,
    },
    /// Weakly acyclic game without a stable social optimum.
    WeaklyAcyclic3x3,
    CostSharing(CostSharingGame),
    Congestion(CompactCongestionGame),
}

pub fn generate(spec: &FamilySpec) -> Result<Game, FamilyError> {
    generate_with_cap(spec, DEFAULT_CELL_CAP)
}

pub fn generate_with_cap(spec: &FamilySpec, cap: u128) -> Result<Game, FamilyError> {
    let cells = profile_count(spec)?;
    if cells > cap {
        return Err(FamilyError::ExplosionGuard { cells, cap });
    }
    match spec {
        FamilySpec::PrisonersDilemmaN { n } => prisoners_dilemma(*n),
        FamilySpec::GeneralizedPd { alpha, beta } => generalized_pd(alpha, beta),
        FamilySpec::PublicGoodsGrid { n, b, c, grid_steps } => public_goods(*n, b, c, *grid_steps),
        FamilySpec::TravelersDilemma => Ok(travelers_dilemma()),
        FamilySpec::MatchingPennies => Ok(fixed(&["H", "T"], &[[1, -1], [-1, 1], [-1, 1], [1, -1]].map(to_q))),
        FamilySpec::BattleOfSexes => Ok(fixed(&["F", "B"], &[[2, 1], [0, 0], [0, 0], [1, 2]].map(to_q))),
        FamilySpec::NoNash2x2 => Ok(fixed(&["C", "D"], &[[2, 2], [2, 0], [3, 0], [1, 1]].map(to_q))),
        FamilySpec::BadNash3x3 => {
            let t = [[1, -1], [-1, 1], [-1, -1], [-1, 1], [1, -1], [-1, -1], [-1, -1], [-1, -1], [-1, -1]];
            Ok(fixed(&["H", "T", "E"], &t.map(to_q)))
        }
        FamilySpec::WeaklyAcyclic3x3 => {
            let h = rational::q(-1, 2);
            let (one, neg) = (int(1), int(-1));
            let t = [
                [one.clone(), neg.clone()],
                [neg.clone(), one.clone()],
                [neg.clone(), h.clone()],
                [neg.clone(), one.clone()],
                [one.clone(), neg.clone()],
                [neg.clone(), h.clone()],
                [h.clone(), neg.clone()],
                [h.clone(), neg.clone()],
                [h.clone(), h.clone()],
            ];
            Ok(fixed(&["H", "T", "E"], &t))
        }
        FamilySpec::FLevelGame { n, f_value } => f_level_game(*n, f_value),
        FamilySpec::CostSharing(g) => g.to_game(),
        FamilySpec::Congestion(g) => g.to_game(),
    }
}

/// Number of profiles `spec` expands to.
pub fn profile_count(spec: &FamilySpec) -> Result<u128, FamilyError> {
    let pow = |base: u128, exp: usize| -> u128 {
        (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base)).unwrap_or(u128::MAX)
    };
    Ok(match spec {
        FamilySpec::PrisonersDilemmaN { n } | FamilySpec::FLevelGame { n, .. } => pow(2, *n),
        FamilySpec::PublicGoodsGrid { n, grid_steps, .. } => pow(*grid_steps as u128 + 1, *n),
        FamilySpec::TravelersDilemma => 99 * 99,
        FamilySpec::GeneralizedPd { .. }
        | FamilySpec::MatchingPennies
        | FamilySpec::BattleOfSexes
        | FamilySpec::NoNash2x2 => 4,
        FamilySpec::BadNash3x3 | FamilySpec::WeaklyAcyclic3x3 => 9,
        FamilySpec::CostSharing(g) => product(&g.strategies),
        FamilySpec::Congestion(g) => product(&g.strategies),
    })
}

fn product(strategies: &[StrategySets]) -> u128 {
    strategies
        .iter()
        .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
        .unwrap_or(u128::MAX)
}

fn to_q(pair: [i64; 2]) -> [Rational; 2] {
    pair.map(int)
}

fn two_player_labels(labels: &[&str]) -> Vec<Vec<String>> {
    let set: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    vec![set.clone(), set]
}

fn fixed<const N: usize>(labels: &[&str], table: &[[Rational; 2]; N]) -> Game {
    Game::new(
        Orientation::PayoffMax,
        two_player_labels(labels),
        table.iter().map(|c| c.to_vec()).collect(),
    )
    .expect("fixed tables are well formed")
}

fn out_of_range(msg: impl Into<String>) -> FamilyError {
    FamilyError::ParamOutOfRange(msg.into())
}

fn prisoners_dilemma(n: usize) -> Result<Game, FamilyError> {
    if n < 2 {
        return Err(out_of_range(format!("n = {n}, need at least 2 players")));
    }
    // index 0 = C (s_i = 1), index 1 = D (s_i = 0)
    Ok(Game::from_fn(Orientation::PayoffMax, vec![vec!["C".into(), "D".into()]; n], |profile| {
        let cooperators = profile.iter().filter(|&&k| k == 0).count() as i64;
        profile
            .iter()
            .map(|&k| {
                let own = i64::from(k == 0);
                int(1 - own + 2 * (cooperators - own))
            })
            .collect()
    })?)
}

fn generalized_pd(alpha: &Rational, beta: &Rational) -> Result<Game, FamilyError> {
    if !alpha.is_positive() {
        return Err(out_of_range("alpha must be positive"));
    }
    if *beta <= Rational::one() {
        return Err(out_of_range("beta must exceed 1"));
    }
    let x = alpha / (alpha + Rational::one());
    let tempt = &x + Rational::one();
    let low = beta.recip();
    let (one, zero) = (Rational::one(), Rational::zero());
    let table = [
        [one.clone(), one],
        [zero.clone(), tempt.clone()],
        [tempt, zero],
        [low.clone(), low],
    ];
    Ok(fixed(&["C", "D"], &table))
}

pub(crate) fn check_public_goods(n: usize, b: &Rational, c: &Rational, k: usize) -> Result<(), FamilyError> {
    if n < 2 {
        return Err(out_of_range(format!("n = {n}, need at least 2 players")));
    }
    if !b.is_positive() {
        return Err(out_of_range("budget b must be positive so the grid has distinct levels"));
    }
    if *c <= Rational::one() {
        return Err(out_of_range("multiplication factor c must exceed 1"));
    }
    if k == 0 {
        return Err(out_of_range("grid_steps must be at least 1"));
    }
    Ok(())
}

pub(crate) fn contribution_grid(b: &Rational, k: usize) -> Vec<Rational> {
    let k_q = Rational::from_integer(BigInt::from(k));
    (0..=k)
        .map(|j| b * Rational::from_integer(BigInt::from(j)) / &k_q)
        .collect()
}

fn public_goods(n: usize, b: &Rational, c: &Rational, k: usize) -> Result<Game, FamilyError> {
    check_public_goods(n, b, c, k)?;
    let grid = contribution_grid(b, k);
    let labels: Vec<String> = grid.iter().map(rational::render).collect();
    let share = c / Rational::from_integer(BigInt::from(n));
    Ok(Game::from_fn(Orientation::PayoffMax, vec![labels; n], |profile| {
        let total: Rational = profile.iter().map(|&j| &grid[j]).sum();
        let pooled = &share * &total;
        profile.iter().map(|&j| b - &grid[j] + &pooled).collect()
    })?)
}

fn travelers_dilemma() -> Game {
    let labels: Vec<String> = (2..=100).map(|v: i64| v.to_string()).collect();
    Game::from_fn(Orientation::PayoffMax, vec![labels.clone(), labels], |profile| {
        let claims = [profile[0] as i64 + 2, profile[1] as i64 + 2];
        (0..2)
            .map(|i| {
                let (own, other) = (claims[i], claims[1 - i]);
                int(match own.cmp(&other) {
                    std::cmp::Ordering::Equal => own,
                    std::cmp::Ordering::Less => own + 2,
                    std::cmp::Ordering::Greater => other - 2,
                })
            })
            .collect()
    })
    .expect("traveler's dilemma is well formed")
}

fn f_level_game(n: usize, f: &Rational) -> Result<Game, FamilyError> {
    if n < 2 {
        return Err(out_of_range(format!("n = {n}, need at least 2 players")));
    }
    if f.is_negative() {
        return Err(out_of_range("f_value must be non-negative"));
    }
    let penalty = -((f + Rational::one()) / Rational::from_integer(BigInt::from(n - 1)));
    // strategy index equals the strategy value: 0 or 1
    Ok(Game::from_fn(Orientation::PayoffMax, vec![vec!["0".into(), "1".into()]; n], |profile| {
        let first_zero = profile.iter().position(|&v| v == 0);
        (0..n)
            .map(|i| match first_zero {
                None => Rational::zero(),
                Some(z) if z == i => f.clone(),
                Some(_) => penalty.clone(),
            })
            .collect()
    })?)
}

/// The families with matching tight examples for the cost-sharing and congestion bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TightInstance {
    /// Two players, facilities costing `c_max` and `c_min`, `c_max > 2·c_min > 0`.
    CostSharingSingleton { c_max: Rational, c_min: Rational },
    /// `L + 1` players; the last may take `L` facilities of cost `c_max` or one of cost 1.
    CostSharingInteger { l: usize, c_max: Rational },
    /// Two players, delays `(2+δ)·a` (constant) and `a·x`, `δ ∈ [0,1)`, `a > 0`.
    CongestionSingleton { delta: Rational, a: Rational },
    /// Integer instance with `(2n−1)·Δ_min = L·Δ_max + 1` for the derived `n`.
    CongestionInteger { l: usize, delta_max: Rational, delta_min: Rational },
}

pub fn tight_instance(instance: &TightInstance) -> Result<FamilySpec, FamilyError> {
    match instance {
        TightInstance::CostSharingSingleton { c_max, c_min } => {
            if !c_min.is_positive() || *c_max <= c_min * int(2) {
                return Err(out_of_range("need c_max > 2·c_min > 0"));
            }
            Ok(FamilySpec::CostSharing(CostSharingGame {
                costs: vec![c_max.clone(), c_min.clone()],
                strategies: vec![vec![vec![0]], vec![vec![0], vec![1]]],
            }))
        }
        TightInstance::CostSharingInteger { l, c_max } => {
            if *l == 0 || !rational::is_integer(c_max) || !c_max.is_positive() {
                return Err(out_of_range("need L ≥ 1 and a positive integer c_max"));
            }
            let n = l + 1;
            let mut costs = vec![c_max.clone(); *l];
            costs.push(Rational::one());
            let mut strategies: Vec<StrategySets> = (0..*l).map(|e| vec![vec![e]]).collect();
            strategies.push(vec![(0..*l).collect(), vec![n - 1]]);
            Ok(FamilySpec::CostSharing(CostSharingGame { costs, strategies }))
        }
        TightInstance::CongestionSingleton { delta, a } => {
            if delta.is_negative() || *delta >= Rational::one() || !a.is_positive() {
                return Err(out_of_range("need δ ∈ [0,1) and a > 0"));
            }
            let constant = (int(2) + delta) * a;
            Ok(FamilySpec::Congestion(CompactCongestionGame {
                facilities: vec![AffineDelay::new(Rational::zero(), constant), AffineDelay::new(a.clone(), Rational::zero())],
                strategies: vec![vec![vec![0], vec![1]]; 2],
            }))
        }
        TightInstance::CongestionInteger { l, delta_max, delta_min } => {
            let integral = rational::is_integer(delta_max) && rational::is_integer(delta_min);
            if *l == 0 || !integral || !delta_min.is_positive() || delta_max < delta_min {
                return Err(out_of_range("need L ≥ 1 and integers Δ_max ≥ Δ_min ≥ 1"));
            }
            // (2n − 1)·Δ_min = L·Δ_max + 1
            let rhs = Rational::from_integer(BigInt::from(*l)) * delta_max + Rational::one();
            let two_n = rhs / delta_min + Rational::one();
            let n = (two_n / int(2))
                .to_integer()
                .to_usize()
                .filter(|&n| {
                    let n_q = Rational::from_integer(BigInt::from(n));
                    (int(2) * n_q - Rational::one()) * delta_min
                        == Rational::from_integer(BigInt::from(*l)) * delta_max + Rational::one()
                })
                .filter(|&n| n >= 2)
                .ok_or_else(|| FamilyError::InfeasibleParams("no integer n ≥ 2 satisfies (2n−1)·Δ_min = L·Δ_max + 1".into()))?;
            let mut facilities = vec![AffineDelay::new(Rational::zero(), delta_max.clone()); *l];
            facilities.push(AffineDelay::new(delta_min.clone(), Rational::zero()));
            let shared = vec![vec![*l]];
            let mut strategies: Vec<StrategySets> = vec![shared; n - 1];
            strategies.push(vec![(0..*l).collect(), vec![*l]]);
            Ok(FamilySpec::Congestion(CompactCongestionGame { facilities, strategies }))
        }
    }
}

/// Two-player cost sharing where `{e1, e3}` beats `{e2}` socially by only `eps`.
pub fn cost_difference_instance(c_max: &Rational, c_min: &Rational, eps: &Rational) -> Result<FamilySpec, FamilyError> {
    if !eps.is_positive() || c_min.is_negative() {
        return Err(out_of_range("need ε > 0 and c_min ≥ 0"));
    }
    Ok(FamilySpec::CostSharing(CostSharingGame {
        costs: vec![c_max.clone(), c_min + eps, c_min.clone()],
        strategies: vec![vec![vec![0]], vec![vec![0, 2], vec![1]]],
    }))
}
