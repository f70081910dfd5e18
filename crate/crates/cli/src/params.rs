//! `--param key=value` handling and family names.

use std::collections::BTreeMap;

use selfishness::closedform::{ClosedFormInput, ContinuousFamilyParams};
use selfishness::families::{cost_difference_instance, tight_instance, FamilySpec, TightInstance};
use selfishness::rational::{parse_rational, Rational};

use crate::error::CliError;

/// Family names accepted by `generate`.
pub const FINITE_FAMILIES: &[&str] = &[
    "pd_n",
    "generalized_pd",
    "public_goods",
    "travelers",
    "matching_pennies",
    "battle_of_sexes",
    "bad_nash",
    "no_nash",
    "f_level",
    "weakly_acyclic",
    "cost_sharing_singleton_tight",
    "cost_sharing_integer_tight",
    "congestion_singleton_tight",
    "congestion_integer_tight",
    "cost_difference",
];

/// Extra family names accepted by `closedform`.
pub const CONTINUOUS_FAMILIES: &[&str] = &["tragedy", "cournot", "bertrand", "public_goods_cont"];

pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn parse(pairs: &[String]) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for pair in pairs {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| CliError::Params(format!("expected key=value, got `{pair}`")))?;
            if values.insert(k.trim().to_owned(), v.trim().to_owned()).is_some() {
                return Err(CliError::Params(format!("parameter `{k}` given twice")));
            }
        }
        Ok(Params { values })
    }

    fn raw(&mut self, key: &str) -> Result<String, CliError> {
        self.values
            .remove(key)
            .ok_or_else(|| CliError::Params(format!("missing parameter `{key}`")))
    }

    pub fn rational(&mut self, key: &str) -> Result<Rational, CliError> {
        let text = self.raw(key)?;
        parse_rational(&text).map_err(|e| CliError::Params(format!("{key}: {e}")))
    }

    pub fn count(&mut self, key: &str) -> Result<usize, CliError> {
        let text = self.raw(key)?;
        text.parse()
            .map_err(|_| CliError::Params(format!("{key}: `{text}` is not a non-negative integer")))
    }

    fn finish(self) -> Result<(), CliError> {
        match self.values.keys().next() {
            Some(k) => Err(CliError::Params(format!("unknown parameter `{k}`"))),
            None => Ok(()),
        }
    }
}

pub fn family_spec(name: &str, mut p: Params) -> Result<FamilySpec, CliError> {
    let spec = match name {
        "pd_n" => FamilySpec::PrisonersDilemmaN { n: p.count("n")? },
        "generalized_pd" => FamilySpec::GeneralizedPd { alpha: p.rational("alpha")?, beta: p.rational("beta")? },
        "public_goods" => FamilySpec::PublicGoodsGrid {
            n: p.count("n")?,
            b: p.rational("b")?,
            c: p.rational("c")?,
            grid_steps: p.count("k")?,
        },
        "travelers" => FamilySpec::TravelersDilemma,
        "matching_pennies" => FamilySpec::MatchingPennies,
        "battle_of_sexes" => FamilySpec::BattleOfSexes,
        "bad_nash" => FamilySpec::BadNash3x3,
        "no_nash" => FamilySpec::NoNash2x2,
        "f_level" => FamilySpec::FLevelGame { n: p.count("n")?, f_value: p.rational("f")? },
        "weakly_acyclic" => FamilySpec::WeaklyAcyclic3x3,
        "cost_sharing_singleton_tight" => tight_instance(&TightInstance::CostSharingSingleton {
            c_max: p.rational("c_max")?,
            c_min: p.rational("c_min")?,
        })?,
        "cost_sharing_integer_tight" => {
            tight_instance(&TightInstance::CostSharingInteger { l: p.count("l")?, c_max: p.rational("c_max")? })?
        }
        "congestion_singleton_tight" => {
            tight_instance(&TightInstance::CongestionSingleton { delta: p.rational("delta")?, a: p.rational("a")? })?
        }
        "congestion_integer_tight" => tight_instance(&TightInstance::CongestionInteger {
            l: p.count("l")?,
            delta_max: p.rational("delta_max")?,
            delta_min: p.rational("delta_min")?,
        })?,
        "cost_difference" => cost_difference_instance(&p.rational("c_max")?, &p.rational("c_min")?, &p.rational("eps")?)?,
        other => {
            return Err(CliError::Params(format!(
                "unknown family `{other}`; expected one of {}",
                FINITE_FAMILIES.join(", ")
            )))
        }
    };
    p.finish()?;
    Ok(spec)
}

pub fn closed_form_input(name: &str, mut p: Params) -> Result<ClosedFormInput, CliError> {
    let params = match name {
        "tragedy" => ContinuousFamilyParams::Tragedy { n: p.count("n")? },
        "cournot" => ContinuousFamilyParams::Cournot { a: p.rational("a")?, b: p.rational("b")?, c: p.rational("c")? },
        "bertrand" => ContinuousFamilyParams::Bertrand { a: p.rational("a")?, b: p.rational("b")?, c: p.rational("c")? },
        "public_goods_cont" => {
            ContinuousFamilyParams::PublicGoodsCont { n: p.count("n")?, b: p.rational("b")?, c: p.rational("c")? }
        }
        _ => return family_spec(name, p).map(ClosedFormInput::Finite),
    };
    p.finish()?;
    Ok(params.into())
}
