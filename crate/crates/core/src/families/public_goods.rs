//! Public goods on a contribution grid, evaluated on demand.
//!
//! With ten players and six contribution levels the game has over sixty
//! million profiles, far beyond what a dense tensor of rationals can hold.
//! This form computes payoffs from the formula instead, scaled by the
//! positive constant `k·n·c_den / b` so that every value is an integer.
//! Equilibria, optima and appeal factors are invariant under that scale.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::game::{NormalForm, Orientation};
use crate::rational::Rational;

use super::FamilyError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicGoodsGame {
    players: usize,
    budget: Rational,
    factor: Rational,
    steps: usize,
    counts: Vec<usize>,
    // factor = factor_num / factor_den
    factor_num: i128,
    factor_den: i128,
}

impl PublicGoodsGame {
    pub fn new(players: usize, budget: Rational, factor: Rational, steps: usize) -> Result<Self, FamilyError> {
        super::check_public_goods(players, &budget, &factor, steps)?;
        let to_small = |v: &BigInt| {
            v.to_i128()
                .filter(|x| x.abs() < (1i128 << 60))
                .ok_or_else(|| FamilyError::ParamOutOfRange("multiplication factor too large".into()))
        };
        let factor_num = to_small(factor.numer())?;
        let factor_den = to_small(factor.denom())?;
        Ok(PublicGoodsGame {
            players,
            counts: vec![steps + 1; players],
            budget,
            factor,
            steps,
            factor_num,
            factor_den,
        })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn budget(&self) -> &Rational {
        &self.budget
    }

    pub fn factor(&self) -> &Rational {
        &self.factor
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Contribution levels `j·b/k`, `j = 0..=k`.
    pub fn grid(&self) -> Vec<Rational> {
        super::contribution_grid(&self.budget, self.steps)
    }

    /// Positive factor that converts a scaled value back to the true payoff.
    pub fn unit(&self) -> Rational {
        let denom = BigInt::from(self.steps) * BigInt::from(self.players) * BigInt::from(self.factor_den);
        &self.budget / Rational::from_integer(denom)
    }

    fn base(&self) -> i128 {
        (self.steps * self.players) as i128 * self.factor_den
    }
}

impl NormalForm for PublicGoodsGame {
    type Value = i128;

    fn orientation(&self) -> Orientation {
        Orientation::PayoffMax
    }

    fn strategy_counts(&self) -> &[usize] {
        &self.counts
    }

    fn values_at(&self, profile: &[usize], out: &mut Vec<i128>) {
        out.clear();
        let total: i128 = profile.iter().map(|&j| j as i128).sum();
        let n = self.players as i128;
        let shared = self.factor_num * total;
        out.extend(profile.iter().map(|&j| self.base() - j as i128 * n * self.factor_den + shared));
    }

    fn value_of(&self, profile: &[usize], player: usize) -> i128 {
        let total: i128 = profile.iter().map(|&j| j as i128).sum();
        let n = self.players as i128;
        self.base() - profile[player] as i128 * n * self.factor_den + self.factor_num * total
    }

    fn total_at(&self, profile: &[usize]) -> i128 {
        let total: i128 = profile.iter().map(|&j| j as i128).sum();
        let n = self.players as i128;
        n * self.base() + n * (self.factor_num - self.factor_den) * total
    }
}
