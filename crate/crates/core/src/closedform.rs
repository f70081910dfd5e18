//! Known selfishness levels and bounds, and appeal factors of the continuous games.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::analysis::stable_social_optima;
use crate::families::{self, loads, min_positive_slope, CompactCongestionGame, CostSharingGame, FamilyError, FamilySpec};
use crate::game::JointStrategy;
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClosedFormError {
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("no facility pair yields a usable discrepancy bound")]
    MissingDiscrepancy,
    #[error("discrepancy needs a_e + a_e' > 0")]
    ZeroLinearCoefficients,
    #[error("deviation {0} outside the improving range")]
    OutOfDeviationRange(String),
    #[error("no closed form for {0}")]
    Unsupported(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedFormResult {
    Exact {
        #[serde(with = "rational::serde_str")]
        value: Rational,
    },
    UpperBound {
        #[serde(with = "rational::serde_str")]
        value: Rational,
        tight: bool,
    },
    Infinite,
}

impl ClosedFormResult {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            ClosedFormResult::Exact { value } | ClosedFormResult::UpperBound { value, .. } => Some(value),
            ClosedFormResult::Infinite => None,
        }
    }
}

/// Games with continuous strategy sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ContinuousFamilyParams {
    /// `p_i(s) = max(0, s_i·(1 − Σ s_j))` on `[0, 1]`.
    Tragedy { n: usize },
    /// `p_i(s) = s_i·(a − b·Σ s_j) − c·s_i` with `a > c ≥ 0`, `b > 0`.
    Cournot {
        #[serde(with = "rational::serde_str")]
        a: Rational,
        #[serde(with = "rational::serde_str")]
        b: Rational,
        #[serde(with = "rational::serde_str")]
        c: Rational,
    },
    /// Two firms pricing on `[c, a/b)` with demand `a − b·price`, `b·c < a`.
    Bertrand {
        #[serde(with = "rational::serde_str")]
        a: Rational,
        #[serde(with = "rational::serde_str")]
        b: Rational,
        #[serde(with = "rational::serde_str")]
        c: Rational,
    },
    /// Contributions from `[0, b]`; `p_i(s) = b − s_i + (c/n)·Σ s_j`.
    PublicGoodsCont {
        n: usize,
        #[serde(with = "rational::serde_str")]
        b: Rational,
        #[serde(with = "rational::serde_str")]
        c: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedFormInput {
    Finite(FamilySpec),
    Continuous(ContinuousFamilyParams),
}

impl From<FamilySpec> for ClosedFormInput {
    fn from(spec: FamilySpec) -> Self {
        ClosedFormInput::Finite(spec)
    }
}

impl From<ContinuousFamilyParams> for ClosedFormInput {
    fn from(params: ContinuousFamilyParams) -> Self {
        ClosedFormInput::Continuous(params)
    }
}

fn out_of_range(msg: impl Into<String>) -> ClosedFormError {
    ClosedFormError::ParamOutOfRange(msg.into())
}

fn nat(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn half() -> Rational {
    rational::q(1, 2)
}

fn clamp_zero(v: Rational) -> Rational {
    v.max(Rational::zero())
}

fn exact(value: Rational) -> ClosedFormResult {
    ClosedFormResult::Exact { value }
}

fn bound(value: Rational) -> ClosedFormResult {
    ClosedFormResult::UpperBound { value: clamp_zero(value), tight: true }
}

/// `max{0, (1 − c/n)/(c − 1)}`.
fn public_goods_level(n: usize, c: &Rational) -> Rational {
    clamp_zero((Rational::one() - c / nat(n)) / (c - Rational::one()))
}

pub fn closed_form_level(input: &ClosedFormInput) -> Result<ClosedFormResult, ClosedFormError> {
    match input {
        ClosedFormInput::Finite(spec) => finite_level(spec),
        ClosedFormInput::Continuous(params) => {
            check_continuous(params)?;
            Ok(match params {
                ContinuousFamilyParams::PublicGoodsCont { n, c, .. } => exact(public_goods_level(*n, c)),
                _ => ClosedFormResult::Infinite,
            })
        }
    }
}

fn finite_level(spec: &FamilySpec) -> Result<ClosedFormResult, ClosedFormError> {
    match spec {
        FamilySpec::PrisonersDilemmaN { n } => {
            if *n < 2 {
                return Err(out_of_range("n must be at least 2"));
            }
            Ok(exact(Rational::one() / nat(2 * n - 3)))
        }
        FamilySpec::PublicGoodsGrid { n, b, c, grid_steps } => {
            families::check_public_goods(*n, b, c, *grid_steps)?;
            Ok(exact(public_goods_level(*n, c)))
        }
        FamilySpec::TravelersDilemma => Ok(exact(half())),
        FamilySpec::FLevelGame { n, f_value } => {
            if *n < 2 || f_value.is_negative() {
                return Err(out_of_range("need n ≥ 2 and f_value ≥ 0"));
            }
            Ok(exact(f_value.clone()))
        }
        FamilySpec::GeneralizedPd { alpha, beta } => {
            if !alpha.is_positive() || *beta <= Rational::one() {
                return Err(out_of_range("need alpha > 0 and beta > 1"));
            }
            Ok(exact(alpha.clone()))
        }
        FamilySpec::MatchingPennies | FamilySpec::BadNash3x3 | FamilySpec::WeaklyAcyclic3x3 => {
            Ok(ClosedFormResult::Infinite)
        }
        FamilySpec::BattleOfSexes => Err(ClosedFormError::Unsupported("battle_of_sexes".into())),
        FamilySpec::NoNash2x2 => Err(ClosedFormError::Unsupported("no_nash_2x2".into())),
        FamilySpec::CostSharing(g) => cost_sharing_bound(g),
        FamilySpec::Congestion(g) => {
            if g.is_singleton() && g.is_symmetric() {
                singleton_congestion_bound(g, None)
            } else {
                integer_congestion_bound(g)
            }
        }
    }
}

/// Singleton games use `½·c_max/c_min − 1`; others (or `c_min = 0`) use
/// `½·L·c_max − 1` after scaling costs to integers.
pub fn cost_sharing_bound(game: &CostSharingGame) -> Result<ClosedFormResult, ClosedFormError> {
    game.validate()?;
    let c_max = game.costs.iter().max().ok_or_else(|| out_of_range("no facilities"))?;
    let c_min = game.costs.iter().min().ok_or_else(|| out_of_range("no facilities"))?;
    if game.is_singleton() && c_min.is_positive() {
        return Ok(bound(half() * c_max / c_min - Rational::one()));
    }
    let scale = Rational::from_integer(rational::common_denominator(&game.costs));
    let l = nat(game.max_strategy_size());
    Ok(bound(half() * l * scale * c_max - Rational::one()))
}

/// `½·(L·Δ_max − Δ_min − 1)` with coefficients scaled to integers.
pub fn integer_congestion_bound(game: &CompactCongestionGame) -> Result<ClosedFormResult, ClosedFormError> {
    game.validate()?;
    let scale = Rational::from_integer(rational::common_denominator(
        game.facilities.iter().flat_map(|d| [&d.a, &d.b]),
    ));
    let solo: Vec<Rational> = game.facilities.iter().map(|d| d.solo() * &scale).collect();
    let d_max = solo.iter().max().ok_or_else(|| out_of_range("no facilities"))?;
    let d_min = solo.iter().min().ok_or_else(|| out_of_range("no facilities"))?;
    let l = nat(game.max_strategy_size());
    Ok(bound(half() * (l * d_max - d_min - Rational::one())))
}

/// `½·(Δ_max − Δ_min)/((1 − δ_max)·a_min) − ½` for symmetric singleton games.
///
/// Without `delta_max`, it is taken over the stable social optima found by
/// brute force.
pub fn singleton_congestion_bound(
    game: &CompactCongestionGame,
    delta_max: Option<Rational>,
) -> Result<ClosedFormResult, ClosedFormError> {
    game.validate()?;
    if !(game.is_singleton() && game.is_symmetric()) {
        return Err(out_of_range("the discrepancy bound needs a symmetric singleton game"));
    }
    let delta_max = match delta_max {
        Some(d) if d >= Rational::one() => return Err(out_of_range("δ_max must be below 1")),
        Some(d) => d,
        None => max_discrepancy(game)?.ok_or(ClosedFormError::MissingDiscrepancy)?,
    };
    let a_min = min_positive_slope(&game.facilities).ok_or(ClosedFormError::MissingDiscrepancy)?;
    let solo: Vec<Rational> = game.facilities.iter().map(|d| d.solo()).collect();
    let d_max = solo.iter().max().expect("validated games have facilities");
    let d_min = solo.iter().min().expect("validated games have facilities");
    let value = half() * (d_max - d_min) / ((Rational::one() - delta_max) * a_min) - half();
    Ok(bound(value))
}

/// `((2a_e·x_e + b_e) − (2a_e'·x_e' + b_e')) / (a_e + a_e')`.
pub fn discrepancy(
    a_e: &Rational,
    b_e: &Rational,
    a_e2: &Rational,
    b_e2: &Rational,
    x_e: usize,
    x_e2: usize,
) -> Result<Rational, ClosedFormError> {
    let denom = a_e + a_e2;
    if denom.is_zero() {
        return Err(ClosedFormError::ZeroLinearCoefficients);
    }
    let two = int(2);
    let lhs = &two * a_e * nat(x_e) + b_e;
    let rhs = &two * a_e2 * nat(x_e2) + b_e2;
    Ok((lhs - rhs) / denom)
}

/// Discrepancy of every ordered facility pair `(e, e')` with `a_e + a_e' > 0` at `s`.
pub fn discrepancies_at(game: &CompactCongestionGame, s: &JointStrategy) -> Vec<(usize, usize, Rational)> {
    let x = loads(&game.strategies, s.indices(), game.facilities.len());
    let f = &game.facilities;
    let mut out = Vec::new();
    for e in 0..f.len() {
        for e2 in 0..f.len() {
            if let Ok(d) = discrepancy(&f[e].a, &f[e].b, &f[e2].a, &f[e2].b, x[e], x[e2]) {
                out.push((e, e2, d));
            }
        }
    }
    out
}

/// Largest discrepancy below 1 over all stable social optima, by brute force.
pub fn max_discrepancy(game: &CompactCongestionGame) -> Result<Option<Rational>, ClosedFormError> {
    let expanded = families::generate(&FamilySpec::Congestion(game.clone()))?;
    let best = stable_social_optima(&expanded)
        .iter()
        .flat_map(|s| discrepancies_at(game, s))
        .map(|(_, _, d)| d)
        .filter(|d| *d < Rational::one())
        .max();
    Ok(best)
}

fn check_continuous(params: &ContinuousFamilyParams) -> Result<(), ClosedFormError> {
    let ok = match params {
        ContinuousFamilyParams::Tragedy { n } => *n >= 2,
        ContinuousFamilyParams::Cournot { a, b, c } => a > c && !c.is_negative() && b.is_positive(),
        ContinuousFamilyParams::Bertrand { a, b, c } => {
            a.is_positive() && b.is_positive() && c.is_positive() && b * c < *a
        }
        ContinuousFamilyParams::PublicGoodsCont { n, b, c } => {
            *n >= 2 && !b.is_negative() && *c > Rational::one()
        }
    };
    if ok {
        Ok(())
    } else {
        Err(out_of_range(format!("invalid parameters {params:?}")))
    }
}

fn show(v: &Rational) -> String {
    rational::render(v)
}

/// Appeal factor of moving from `a` to `x` in the tragedy of the commons,
/// the others' shares summing to `1/2 − a`.
pub fn tragedy_af(a: &Rational, x: &Rational) -> Result<Rational, ClosedFormError> {
    if a.is_negative() || x <= a || *x >= half() {
        return Err(ClosedFormError::OutOfDeviationRange(show(x)));
    }
    let others = half() - a;
    let payoff = |own: &Rational| {
        let total = &others + own;
        (own * (Rational::one() - &total)).max(Rational::zero())
    };
    let welfare = |own: &Rational| {
        let total = &others + own;
        if total > Rational::one() {
            Rational::zero()
        } else {
            &total * (Rational::one() - &total)
        }
    };
    Ok((payoff(x) - payoff(a)) / (welfare(a) - welfare(x)))
}

/// Appeal factor of moving from `y` to `x` in Cournot competition with
/// `d = a − c`, the others producing `d/(2b) − y`.
pub fn cournot_af(d: &Rational, b: &Rational, y: &Rational, x: &Rational) -> Result<Rational, ClosedFormError> {
    if !d.is_positive() || !b.is_positive() {
        return Err(out_of_range("need d > 0 and b > 0"));
    }
    let peak = d / (int(2) * b);
    if y.is_negative() || x <= y || *x >= peak {
        return Err(ClosedFormError::OutOfDeviationRange(show(x)));
    }
    let others = &peak - y;
    let payoff = |own: &Rational| own * (d - b * (&others + own));
    let welfare = |own: &Rational| {
        let total = &others + own;
        &total * (d - b * &total)
    };
    Ok((payoff(x) - payoff(y)) / (welfare(y) - welfare(x)))
}

fn bertrand_payoff(a: &Rational, b: &Rational, c: &Rational, own: &Rational, other: &Rational) -> Rational {
    let profit = (own - c) * (a - b * own);
    if own <= c {
        Rational::zero()
    } else if own < other {
        profit
    } else if own == other {
        profit * half()
    } else {
        Rational::zero()
    }
}

/// Appeal factor of undercutting to `s_i` from the stable optimum `(d, d)`,
/// `d = (a + bc)/(2b)`.
pub fn bertrand_af(a: &Rational, b: &Rational, c: &Rational, s_i: &Rational) -> Result<Rational, ClosedFormError> {
    check_continuous(&ContinuousFamilyParams::Bertrand { a: a.clone(), b: b.clone(), c: c.clone() })?;
    let d = (a + b * c) / (int(2) * b);
    if s_i <= c || *s_i >= d {
        return Err(ClosedFormError::OutOfDeviationRange(show(s_i)));
    }
    let p = |own: &Rational, other: &Rational| bertrand_payoff(a, b, c, own, other);
    let welfare = |x: &Rational, y: &Rational| p(x, y) + p(y, x);
    let gain = p(s_i, &d) - p(&d, &d);
    if !gain.is_positive() {
        return Err(ClosedFormError::OutOfDeviationRange(show(s_i)));
    }
    Ok(gain / (welfare(&d, &d) - welfare(s_i, &d)))
}

/// A deviation from a symmetric stable social optimum with a large appeal factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// The deviating player's strategy at the optimum.
    pub base: Rational,
    pub deviation: Rational,
    pub appeal_factor: Rational,
}

/// A deviation whose appeal factor exceeds `m`.
pub fn unbounded_witness(params: &ContinuousFamilyParams, m: &Rational) -> Result<Witness, ClosedFormError> {
    check_continuous(params)?;
    if !m.is_positive() {
        return Err(out_of_range("M must be positive"));
    }
    let two = int(2);
    // af = −1 + (peak − base)/(x − base), so x = base + (peak − base)/(M + 2) gives M + 1
    let toward = |base: &Rational, peak: &Rational| base + (peak - base) / (m + &two);
    let (base, deviation, appeal_factor) = match params {
        ContinuousFamilyParams::Tragedy { n } => {
            let base = Rational::one() / (&two * nat(*n));
            let x = toward(&base, &half());
            let af = tragedy_af(&base, &x)?;
            (base, x, af)
        }
        ContinuousFamilyParams::Cournot { a, b, c } => {
            let d = a - c;
            let peak = &d / (&two * b);
            // two firms splitting the optimal output evenly
            let base = &peak / &two;
            let x = toward(&base, &peak);
            let af = cournot_af(&d, b, &base, &x)?;
            (base, x, af)
        }
        ContinuousFamilyParams::Bertrand { a, b, c } => {
            // af = (d − c)²/(2h²) − 1 for s_i = d − h; h = (d − c)/k with k² > 2(M + 1)
            let d = (a + b * c) / (&two * b);
            let k = (&two * m).ceil() + &two;
            let s_i = &d - (&d - c) / k;
            let af = bertrand_af(a, b, c, &s_i)?;
            (d, s_i, af)
        }
        ContinuousFamilyParams::PublicGoodsCont { .. } => {
            return Err(ClosedFormError::Unsupported("public goods has a finite level".into()))
        }
    };
    Ok(Witness { base, deviation, appeal_factor })
}
