//! Altruistic payoff transforms.
//!
//! All transforms here are linear in the payoff vector of each profile, so
//! applying them to a cost game's stored costs is the same as negating,
//! transforming, and negating back.

use std::fmt;

use num_traits::{One, Signed};

use crate::game::Game;
use crate::rational::{Display, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("altruism parameter must be non-negative, got {0}")]
    NegativeAlpha(String),
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(String),
    #[error("model {model} parameter {value} outside its range")]
    ParamOutOfRange { model: Model, value: String },
}

/// The four altruism models relating perceived payoffs to `p_i` and `SW`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// `p_i + α·SW`, `α ≥ 0`.
    A,
    /// `(1−β)·p_i + (β/n)·SW`, `β ∈ [0,1]`.
    B,
    /// `(1−γ)·p_i + γ·SW`, `γ ∈ [0,1]`.
    C,
    /// `(1−δ)·p_i + δ·(SW − p_i)`, `δ ∈ [0,1]`; matches model A only for `δ ≤ 1/2`.
    D,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Model::A => "A",
            Model::B => "B",
            Model::C => "C",
            Model::D => "D",
        };
        f.write_str(name)
    }
}

impl std::str::FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Model::A),
            "B" => Ok(Model::B),
            "C" => Ok(Model::C),
            "D" => Ok(Model::D),
            other => Err(format!("unknown altruism model `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltruismParam {
    pub model: Model,
    pub value: Rational,
}

impl AltruismParam {
    pub fn new(model: Model, value: Rational) -> Result<Self, TransformError> {
        let in_unit = !value.is_negative() && value <= Rational::one();
        let ok = match model {
            Model::A => !value.is_negative(),
            Model::B | Model::C | Model::D => in_unit,
        };
        if ok {
            Ok(AltruismParam { model, value })
        } else {
            Err(TransformError::ParamOutOfRange { model, value: Display(&value).to_string() })
        }
    }
}

fn check_alpha(alpha: &Rational) -> Result<(), TransformError> {
    if alpha.is_negative() {
        Err(TransformError::NegativeAlpha(Display(alpha).to_string()))
    } else {
        Ok(())
    }
}

/// Replaces each value `v_i(s)` by `own·v_i(s) + shared·Σ_j v_j(s)`.
fn mix(game: &Game, own: &Rational, shared: &Rational) -> Game {
    let n = game.player_count();
    let values = game.all_values();
    let mut totals = Vec::with_capacity(values.len() / n);
    for cell in values.chunks(n) {
        totals.push(cell.iter().sum::<Rational>());
    }
    let mut counter = 0usize;
    game.map_values(|_, _, v| {
        let total = &totals[counter / n];
        counter += 1;
        own * v + shared * total
    })
}

/// `G(α)`: every payoff becomes `p_i(s) + α·SW(s)`.
pub fn altruistic(game: &Game, alpha: &Rational) -> Result<Game, TransformError> {
    check_alpha(alpha)?;
    Ok(mix(game, &Rational::one(), alpha))
}

/// `G + a`.
pub fn shift(game: &Game, a: &Rational) -> Game {
    game.map_values(|_, _, v| v + a)
}

/// `a·G` for `a > 0`.
pub fn scale(game: &Game, a: &Rational) -> Result<Game, TransformError> {
    if !a.is_positive() {
        return Err(TransformError::NonPositiveScale(Display(a).to_string()));
    }
    Ok(game.map_values(|_, _, v| v * a))
}

/// The game `G'` with `G'(α) = G`: `p'_i = p_i − α/(1+nα)·SW`.
pub fn inverse_altruistic(game: &Game, alpha: &Rational) -> Result<Game, TransformError> {
    check_alpha(alpha)?;
    let n = Rational::from_integer(game.player_count().into());
    let shared = -(alpha / (Rational::one() + &n * alpha));
    Ok(mix(game, &Rational::one(), &shared))
}

/// Checks `G(α+β) = G(α)(β/(1+nα))` payoff for payoff.
pub fn compose_check(game: &Game, alpha: &Rational, beta: &Rational) -> bool {
    let n = Rational::from_integer(game.player_count().into());
    let direct = altruistic(game, &(alpha + beta));
    let stepped = altruistic(game, alpha)
        .and_then(|g| altruistic(&g, &(beta / (Rational::one() + &n * alpha))));
    match (direct, stepped) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

/// The model-`target` parameter equivalent to model-A parameter `alpha` for `n` players.
pub fn convert_param(alpha: &Rational, target: Model, player_count: usize) -> Result<AltruismParam, TransformError> {
    check_alpha(alpha)?;
    let one = Rational::one();
    let n = Rational::from_integer(player_count.into());
    let value = match target {
        Model::A => alpha.clone(),
        Model::B => {
            let an = alpha * &n;
            &an / (&one + &an)
        }
        Model::C => alpha / (&one + alpha),
        Model::D => alpha / (&one + alpha + alpha),
    };
    AltruismParam::new(target, value)
}

/// The perceived-payoff game of `param`'s model.
pub fn altruistic_model(game: &Game, param: &AltruismParam) -> Result<Game, TransformError> {
    let param = AltruismParam::new(param.model, param.value.clone())?;
    let one = Rational::one();
    let v = &param.value;
    let (own, shared) = match param.model {
        Model::A => (one, v.clone()),
        Model::B => {
            let n = Rational::from_integer(game.player_count().into());
            (&one - v, v / n)
        }
        Model::C => (&one - v, v.clone()),
        // (1−δ)p + δ(SW − p) = (1−2δ)p + δ·SW
        Model::D => (&one - v - v, v.clone()),
    };
    Ok(mix(game, &own, &shared))
}
