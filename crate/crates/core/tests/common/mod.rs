//! Independent oracles and random instances shared by the integration tests.
//!
//! Nothing here calls into the analysis module: equilibria, optima and
//! α-selfishness are recomputed from the payoff tensor directly.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;
use selfishness::families::{AffineDelay, CompactCongestionGame, CostSharingGame};
use selfishness::game::{numbered_labels, Game, JointStrategy, Orientation};
use selfishness::rational::Rational;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Utilities per profile (lexicographic order), negated for cost games.
pub fn utilities(game: &Game) -> Vec<Vec<Rational>> {
    let n = game.player_count();
    let sign = if game.orientation() == Orientation::CostMin { -Rational::one() } else { Rational::one() };
    game.all_values().chunks(n).map(|cell| cell.iter().map(|v| v * &sign).collect()).collect()
}

fn rank(counts: &[usize], profile: &[usize]) -> usize {
    profile.iter().zip(counts).fold(0, |acc, (&k, &c)| acc * c + k)
}

fn unrank(counts: &[usize], mut r: usize) -> Vec<usize> {
    let mut out = vec![0; counts.len()];
    for pos in (0..counts.len()).rev() {
        out[pos] = r % counts[pos];
        r /= counts[pos];
    }
    out
}

/// Every `(s, player, s')` unilateral deviation, as profile ranks.
fn deviations(counts: &[usize]) -> Vec<(usize, usize, usize)> {
    let total: usize = counts.iter().product();
    let mut out = Vec::new();
    for r in 0..total {
        let s = unrank(counts, r);
        for (i, &c) in counts.iter().enumerate() {
            for alt in (0..c).filter(|&a| a != s[i]) {
                let mut t = s.clone();
                t[i] = alt;
                out.push((r, i, rank(counts, &t)));
            }
        }
    }
    out
}

pub fn welfare(game: &Game) -> Vec<Rational> {
    utilities(game).iter().map(|u| u.iter().sum()).collect()
}

pub fn optima_direct(game: &Game) -> Vec<JointStrategy> {
    let w = welfare(game);
    let best = w.iter().max().unwrap().clone();
    (0..w.len())
        .filter(|&r| w[r] == best)
        .map(|r| JointStrategy::new(unrank(game.strategy_counts(), r)))
        .collect()
}

pub fn nash_direct(game: &Game) -> Vec<JointStrategy> {
    let u = utilities(game);
    let counts = game.strategy_counts();
    let mut stable = vec![true; u.len()];
    for (r, i, t) in deviations(counts) {
        if u[t][i] > u[r][i] {
            stable[r] = false;
        }
    }
    (0..u.len())
        .filter(|&r| stable[r])
        .map(|r| JointStrategy::new(unrank(counts, r)))
        .collect()
}

/// Some social optimum of `G` is an equilibrium of `G(α)`, from the definition.
pub fn is_alpha_selfish_direct(game: &Game, alpha: &Rational) -> bool {
    let u = utilities(game);
    let w = welfare(game);
    let best = w.iter().max().unwrap().clone();
    let counts = game.strategy_counts();
    let mut ok: Vec<bool> = w.iter().map(|x| *x == best).collect();
    for (r, i, t) in deviations(counts) {
        if &u[t][i] + alpha * &w[t] > &u[r][i] + alpha * &w[r] {
            ok[r] = false;
        }
    }
    ok.into_iter().any(|b| b)
}

/// Every ratio gain/drop over all deviations with both positive, plus zero.
pub fn candidate_alphas(game: &Game) -> Vec<Rational> {
    let u = utilities(game);
    let w = welfare(game);
    let mut out = vec![Rational::zero()];
    for (r, i, t) in deviations(game.strategy_counts()) {
        let gain = &u[t][i] - &u[r][i];
        let drop = &w[r] - &w[t];
        if gain > Rational::zero() && drop > Rational::zero() {
            out.push(gain / drop);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Least `α` with [`is_alpha_selfish_direct`], searched over [`candidate_alphas`].
pub fn level_by_search(game: &Game) -> Option<Rational> {
    candidate_alphas(game).into_iter().find(|a| is_alpha_selfish_direct(game, a))
}

pub fn game_from_values(orientation: Orientation, counts: &[usize], values: Vec<Rational>) -> Game {
    let n = counts.len();
    let labels = counts.iter().map(|&c| numbered_labels(c)).collect();
    let cells = values.chunks(n).map(|c| c.to_vec()).collect();
    Game::new(orientation, labels, cells).expect("generated game is well formed")
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

/// Games with 2–3 players, 1–3 strategies each and small rational payoffs.
pub fn arb_game() -> impl Strategy<Value = Game> {
    (2usize..=3, any::<bool>())
        .prop_flat_map(|(n, cost)| (prop::collection::vec(1usize..=3, n), Just(cost)))
        .prop_flat_map(|(counts, cost)| {
            let cells = counts.iter().product::<usize>() * counts.len();
            (Just(counts), Just(cost), prop::collection::vec(small_rational(), cells))
        })
        .prop_map(|(counts, cost, values)| {
            let orientation = if cost { Orientation::CostMin } else { Orientation::PayoffMax };
            game_from_values(orientation, &counts, values)
        })
}

pub fn arb_alpha() -> impl Strategy<Value = Rational> {
    (0i64..=12, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

/// Same distribution as [`arb_game`], driven by an explicit generator.
pub fn random_game<R: Rng>(rng: &mut R) -> Game {
    let n = rng.gen_range(2..=3);
    let counts: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let cells = counts.iter().product::<usize>() * n;
    let values = (0..cells).map(|_| q(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect();
    let orientation = if rng.gen_bool(0.5) { Orientation::CostMin } else { Orientation::PayoffMax };
    game_from_values(orientation, &counts, values)
}

pub fn random_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    q(rng.gen_range(0..=max_num), rng.gen_range(1..=max_den))
}

/// Singleton cost sharing with up to 4 players and 5 facilities, positive costs.
pub fn random_singleton_cost_sharing<R: Rng>(rng: &mut R) -> CostSharingGame {
    let players = rng.gen_range(2..=4);
    let facilities = rng.gen_range(1..=5);
    let costs = (0..facilities).map(|_| q(rng.gen_range(1..=12), rng.gen_range(1..=2))).collect();
    let strategies = (0..players)
        .map(|_| {
            let mut sets: Vec<Vec<usize>> = (0..facilities).filter(|_| rng.gen_bool(0.6)).map(|e| vec![e]).collect();
            if sets.is_empty() {
                sets.push(vec![rng.gen_range(0..facilities)]);
            }
            sets
        })
        .collect();
    CostSharingGame { costs, strategies }
}

/// Facility subsets of size 1..=max_size drawn from `facilities`.
fn random_subsets<R: Rng>(rng: &mut R, facilities: usize, max_size: usize) -> Vec<Vec<usize>> {
    let count = rng.gen_range(1..=3);
    let mut sets: Vec<Vec<usize>> = Vec::new();
    while sets.len() < count {
        let size = rng.gen_range(1..=max_size.min(facilities));
        let mut set: Vec<usize> = Vec::new();
        while set.len() < size {
            let e = rng.gen_range(0..facilities);
            if !set.contains(&e) {
                set.push(e);
            }
        }
        set.sort_unstable();
        if !sets.contains(&set) {
            sets.push(set);
        }
    }
    sets
}

/// Cost sharing with integer costs and strategies of up to three facilities.
pub fn random_integer_cost_sharing<R: Rng>(rng: &mut R) -> CostSharingGame {
    let players = rng.gen_range(2..=3);
    let facilities = rng.gen_range(2..=4);
    let costs = (0..facilities).map(|_| int(rng.gen_range(0..=6))).collect();
    let strategies = (0..players).map(|_| random_subsets(rng, facilities, 3)).collect();
    CostSharingGame { costs, strategies }
}

/// Symmetric singleton congestion with small rational coefficients.
pub fn random_symmetric_singleton<R: Rng>(rng: &mut R) -> CompactCongestionGame {
    let players = rng.gen_range(2..=4);
    let facilities = rng.gen_range(2..=4);
    let delays = (0..facilities)
        .map(|_| AffineDelay::new(random_rational(rng, 4, 2), random_rational(rng, 6, 2)))
        .collect();
    let shared: Vec<Vec<usize>> = (0..facilities).map(|e| vec![e]).collect();
    CompactCongestionGame { facilities: delays, strategies: vec![shared; players] }
}

/// Congestion with integer coefficients and strategies of up to three facilities.
pub fn random_integer_congestion<R: Rng>(rng: &mut R) -> CompactCongestionGame {
    let players = rng.gen_range(2..=3);
    let facilities = rng.gen_range(2..=4);
    let delays = (0..facilities)
        .map(|_| AffineDelay::new(int(rng.gen_range(0..=3)), int(rng.gen_range(0..=4))))
        .collect();
    let strategies = (0..players).map(|_| random_subsets(rng, facilities, 3)).collect();
    CompactCongestionGame { facilities: delays, strategies }
}
