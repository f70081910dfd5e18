//! Facility-based games given compactly and expanded to normal form.

use serde::{Deserialize, Serialize};

use num_traits::{Signed, Zero};

use crate::game::{Game, Orientation};
use crate::rational::{self, Rational};

use super::FamilyError;

/// Strategies of one player: each is a set of facility indices.
pub type StrategySets = Vec<Vec<usize>>;

/// Fair cost sharing: each facility's cost is split evenly among its users.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostSharingGame {
    #[serde(with = "rational::serde_vec")]
    pub costs: Vec<Rational>,
    pub strategies: Vec<StrategySets>,
}

/// Affine delay `a·x + b` in the number of users `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineDelay {
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
}

impl AffineDelay {
    pub fn new(a: Rational, b: Rational) -> Self {
        AffineDelay { a, b }
    }

    pub fn at(&self, load: usize) -> Rational {
        &self.a * Rational::from_integer(load.into()) + &self.b
    }

    /// `a + b`, the delay of a lone user.
    pub fn solo(&self) -> Rational {
        &self.a + &self.b
    }
}

/// Linear congestion game: a player's cost is the sum of its facilities' delays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactCongestionGame {
    pub facilities: Vec<AffineDelay>,
    pub strategies: Vec<StrategySets>,
}

impl CompactCongestionGame {
    pub fn is_singleton(&self) -> bool {
        is_singleton(&self.strategies)
    }

    pub fn is_symmetric(&self) -> bool {
        is_symmetric(&self.strategies)
    }

    /// Largest number of facilities in one strategy.
    pub fn max_strategy_size(&self) -> usize {
        max_size(&self.strategies)
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        for (e, d) in self.facilities.iter().enumerate() {
            if d.a.is_negative() || d.b.is_negative() {
                return Err(FamilyError::ParamOutOfRange(format!("facility e{} has a negative coefficient", e + 1)));
            }
        }
        check_strategies(&self.strategies, self.facilities.len())
    }

    pub fn to_game(&self) -> Result<Game, FamilyError> {
        self.validate()?;
        let labels = strategy_labels(&self.strategies);
        let facilities = &self.facilities;
        let strategies = &self.strategies;
        Ok(Game::from_fn(Orientation::CostMin, labels, |profile| {
            let loads = loads(strategies, profile, facilities.len());
            (0..profile.len())
                .map(|i| {
                    strategies[i][profile[i]]
                        .iter()
                        .map(|&e| facilities[e].at(loads[e]))
                        .sum()
                })
                .collect()
        })?)
    }
}

impl CostSharingGame {
    pub fn is_singleton(&self) -> bool {
        is_singleton(&self.strategies)
    }

    pub fn max_strategy_size(&self) -> usize {
        max_size(&self.strategies)
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        if let Some(e) = self.costs.iter().position(Signed::is_negative) {
            return Err(FamilyError::ParamOutOfRange(format!("facility e{} has a negative cost", e + 1)));
        }
        check_strategies(&self.strategies, self.costs.len())
    }

    pub fn to_game(&self) -> Result<Game, FamilyError> {
        self.validate()?;
        let labels = strategy_labels(&self.strategies);
        let costs = &self.costs;
        let strategies = &self.strategies;
        Ok(Game::from_fn(Orientation::CostMin, labels, |profile| {
            let loads = loads(strategies, profile, costs.len());
            (0..profile.len())
                .map(|i| {
                    strategies[i][profile[i]]
                        .iter()
                        .map(|&e| &costs[e] / Rational::from_integer(loads[e].into()))
                        .sum()
                })
                .collect()
        })?)
    }
}

/// `x_e(s)` for every facility.
pub fn loads(strategies: &[StrategySets], profile: &[usize], facility_count: usize) -> Vec<usize> {
    let mut x = vec![0usize; facility_count];
    for (i, &k) in profile.iter().enumerate() {
        for &e in &strategies[i][k] {
            x[e] += 1;
        }
    }
    x
}

fn is_singleton(strategies: &[StrategySets]) -> bool {
    strategies.iter().flatten().all(|s| s.len() == 1)
}

fn is_symmetric(strategies: &[StrategySets]) -> bool {
    strategies.windows(2).all(|w| w[0] == w[1])
}

fn max_size(strategies: &[StrategySets]) -> usize {
    strategies.iter().flatten().map(Vec::len).max().unwrap_or(0)
}

fn check_strategies(strategies: &[StrategySets], facility_count: usize) -> Result<(), FamilyError> {
    for (i, sets) in strategies.iter().enumerate() {
        if sets.is_empty() {
            return Err(FamilyError::ParamOutOfRange(format!("player {} has no strategies", i + 1)));
        }
        for set in sets {
            let mut sorted = set.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != set.len() {
                return Err(FamilyError::ParamOutOfRange(format!("player {} lists a facility twice", i + 1)));
            }
            if let Some(&e) = set.iter().find(|&&e| e >= facility_count) {
                return Err(FamilyError::ParamOutOfRange(format!(
                    "facility index {e} out of range for {facility_count} facilities"
                )));
            }
        }
    }
    Ok(())
}

/// `{e1,e3}`-style labels, facilities numbered from one.
fn strategy_labels(strategies: &[StrategySets]) -> Vec<Vec<String>> {
    strategies
        .iter()
        .map(|sets| {
            sets.iter()
                .map(|set| {
                    let names: Vec<String> = set.iter().map(|e| format!("e{}", e + 1)).collect();
                    format!("{{{}}}", names.join(","))
                })
                .collect()
        })
        .collect()
}

/// Smallest positive `a_e`, if any facility has one.
pub fn min_positive_slope(facilities: &[AffineDelay]) -> Option<Rational> {
    facilities
        .iter()
        .map(|d| d.a.clone())
        .filter(|a| !a.is_zero())
        .min()
}
