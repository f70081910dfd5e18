//! Acceptance criteria, one PASS/FAIL line each. All comparisons are exact.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use common::{int, level_by_search, q, random_game};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfishness::analysis::{
    is_alpha_selfish, price_of_stability, pure_nash, selfishness_level, social_optima, LevelResult,
};
use selfishness::closedform::{
    cost_sharing_bound, cournot_af, discrepancies_at, tragedy_af, unbounded_witness, ContinuousFamilyParams, Witness,
};
use selfishness::dynamics::{has_fip, is_weakly_acyclic};
use selfishness::families::{
    cost_difference_instance, generate, loads, tight_instance, FamilySpec, PublicGoodsGame, TightInstance,
};
use selfishness::game::{Game, JointStrategy};
use selfishness::rational::{render, Rational};
use selfishness::transforms::{
    altruistic, altruistic_model, compose_check, convert_param, inverse_altruistic, scale, shift, Model,
};
use selfishness_cli::{parse_document, parse_game, render_game};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(got: T, want: T, what: &str) -> Outcome {
    check(got == want, || format!("{what}: got {got:?}, want {want:?}"))
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Outcome {
    check(elapsed < limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn level_of(spec: &FamilySpec) -> Option<Rational> {
    selfishness_level(&generate(spec).expect("generates")).value()
}

fn profile(game: &Game, labels: &[&str]) -> JointStrategy {
    JointStrategy::new(
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| game.labels(i).iter().position(|s| s == l).expect("label exists"))
            .collect::<Vec<_>>(),
    )
}

fn c1_prisoners_dilemma() -> Outcome {
    let start = Instant::now();
    for n in 2..=8usize {
        eq(level_of(&FamilySpec::PrisonersDilemmaN { n }), Some(q(1, 2 * n as i64 - 3)), &format!("n = {n}"))?;
    }
    within(start.elapsed(), Duration::from_secs(1), "n = 2..8")
}

fn c2_travelers_dilemma() -> Outcome {
    let start = Instant::now();
    let game = generate(&FamilySpec::TravelersDilemma).unwrap();
    eq(game.profile_count(), 99 * 99, "profiles")?;
    eq(selfishness_level(&game).value(), Some(q(1, 2)), "level")?;
    eq(pure_nash(&game), vec![profile(&game, &["2", "2"])], "equilibria")?;
    eq(social_optima(&game), vec![profile(&game, &["100", "100"])], "optima")?;
    within(start.elapsed(), Duration::from_secs(5), "analysis")
}

fn public_goods_expected(n: usize, c: &Rational) -> Rational {
    let one = Rational::one();
    ((&one - c / int(n as i64)) / (c - &one)).max(Rational::zero())
}

fn c3_public_goods() -> Outcome {
    for n in [2usize, 4, 10] {
        for c in [q(3, 2), int(2), int(4)] {
            for b in [int(1), int(3)] {
                for k in [1usize, 2, 5] {
                    let game = PublicGoodsGame::new(n, b.clone(), c.clone(), k).map_err(|e| e.to_string())?;
                    let got = selfishness_level(&game).value();
                    eq(got, Some(public_goods_expected(n, &c)), &format!("n={n} c={c} b={b} k={k}"))?;
                }
            }
        }
    }
    Ok(())
}

fn c4_fixed_examples() -> Outcome {
    let cases = [
        (FamilySpec::PrisonersDilemmaN { n: 2 }, "1"),
        (FamilySpec::BattleOfSexes, "0"),
        (FamilySpec::MatchingPennies, "inf"),
        (FamilySpec::BadNash3x3, "inf"),
        (FamilySpec::NoNash2x2, "1"),
    ];
    for (spec, want) in cases {
        let level = selfishness_level(&generate(&spec).unwrap());
        eq(level.to_string().as_str(), want, &format!("{spec:?}"))?;
    }
    let bos = selfishness_level(&generate(&FamilySpec::BattleOfSexes).unwrap());
    check(matches!(bos, LevelResult::Zero { .. }), || format!("battle of the sexes: {bos:?}"))
}

fn c5_generalized_pd() -> Outcome {
    for alpha in [q(1, 2), int(1), int(2), int(10)] {
        for beta in [q(3, 2), int(2), int(5)] {
            let game = generate(&FamilySpec::GeneralizedPd { alpha: alpha.clone(), beta: beta.clone() }).unwrap();
            let what = format!("alpha={alpha} beta={beta}");
            eq(selfishness_level(&game).value(), Some(alpha.clone()), &what)?;
            eq(price_of_stability(&game), Some(beta.clone()), &what)?;
        }
    }
    Ok(())
}

fn c6_f_level() -> Outcome {
    for n in [2usize, 3, 4] {
        for f in [0, 1, 7, 100] {
            eq(level_of(&FamilySpec::FLevelGame { n, f_value: int(f) }), Some(int(f)), &format!("n={n} f={f}"))?;
        }
    }
    Ok(())
}

fn c7_cost_sharing() -> Outcome {
    for (c_max, c_min) in [(int(10), int(1)), (int(7), int(3)), (int(5), q(1, 2)), (q(9, 2), int(2))] {
        let spec = tight_instance(&TightInstance::CostSharingSingleton { c_max: c_max.clone(), c_min: c_min.clone() })
            .map_err(|e| e.to_string())?;
        let want = &c_max / (int(2) * &c_min) - int(1);
        eq(level_of(&spec), Some(want), &format!("singleton c_max={c_max} c_min={c_min}"))?;
    }
    for (l, c_max) in [(1usize, 3i64), (2, 2), (2, 5), (3, 2), (4, 1)] {
        let spec = tight_instance(&TightInstance::CostSharingInteger { l, c_max: int(c_max) }).map_err(|e| e.to_string())?;
        let want = q(l as i64 * c_max, 2) - int(1);
        eq(level_of(&spec), Some(want), &format!("integer L={l} c_max={c_max}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(701);
    for _ in 0..200 {
        let g = common::random_singleton_cost_sharing(&mut rng);
        let bound = cost_sharing_bound(&g).map_err(|e| e.to_string())?;
        let bound = bound.value().expect("finite bound");
        if bound >= &Rational::zero() {
            let level = level_of(&FamilySpec::CostSharing(g.clone())).ok_or("infinite level")?;
            check(&level <= bound, || format!("{g:?}: level {level} above bound {bound}"))?;
        }
    }
    Ok(())
}

fn c8_congestion() -> Outcome {
    for delta in [int(0), q(1, 4), q(1, 2), q(3, 4)] {
        let spec = tight_instance(&TightInstance::CongestionSingleton { delta: delta.clone(), a: int(1) })
            .map_err(|e| e.to_string())?;
        let want = &delta / (int(1) - &delta);
        eq(level_of(&spec), Some(want), &format!("singleton delta={delta}"))?;
    }
    // (2n − 1)·Δ_min = L·Δ_max + 1 holds for each row
    for (l, d_max, d_min) in [(2usize, 3i64, 1i64), (1, 4, 1), (1, 6, 1), (2, 4, 3), (1, 5, 2), (3, 2, 1)] {
        let spec = tight_instance(&TightInstance::CongestionInteger { l, delta_max: int(d_max), delta_min: int(d_min) })
            .map_err(|e| e.to_string())?;
        let want = q(l as i64 * d_max - d_min - 1, 2);
        eq(level_of(&spec), Some(want), &format!("integer L={l} dmax={d_max} dmin={d_min}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(803);
    let (one, mut outside, mut checked, mut both_used) = (Rational::one(), Vec::new(), 0usize, 0usize);
    for _ in 0..200 {
        let g = common::random_symmetric_singleton(&mut rng);
        let game = generate(&FamilySpec::Congestion(g.clone())).unwrap();
        for s in social_optima(&game) {
            for (e, e2, d) in discrepancies_at(&g, &s) {
                checked += 1;
                if d < -&one || d > one {
                    let x = loads(&g.strategies, s.indices(), g.facilities.len());
                    if x[e] > 0 && x[e2] > 0 {
                        both_used += 1;
                    }
                    outside.push(format!("delta({e},{e2}) = {} at loads {x:?}", render(&d)));
                }
            }
        }
    }
    check(outside.is_empty(), || {
        format!(
            "range check: {} of {checked} discrepancies outside [-1,1] ({both_used} between two used facilities), e.g. {}",
            outside.len(),
            outside[0]
        )
    })
}

fn c9_transform_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(907);
    for round in 0..200 {
        let game = random_game(&mut rng);
        let g = game.to_payoff_max();
        let alpha = q(rng.gen_range(0..=12), rng.gen_range(1..=4));
        let beta = q(rng.gen_range(0..=12), rng.gen_range(1..=4));
        let a = q(rng.gen_range(-6..=6), rng.gen_range(1..=5));
        let k = q(rng.gen_range(1..=9), rng.gen_range(1..=5));
        let what = |step: &str| format!("game {round}: {step}");
        let level = selfishness_level(&game).value();
        eq(selfishness_level(&shift(&game, &a)).value(), level.clone(), &what("shift"))?;
        eq(selfishness_level(&scale(&game, &k).unwrap()).value(), level, &what("scale"))?;
        check(compose_check(&game, &alpha, &beta), || what("composition"))?;
        let inv = inverse_altruistic(&g, &alpha).unwrap();
        eq(altruistic(&inv, &alpha).unwrap(), g.clone(), &what("inverse then forward"))?;
        eq(inverse_altruistic(&altruistic(&g, &alpha).unwrap(), &alpha).unwrap(), g.clone(), &what("forward then inverse"))?;
        let reference = altruistic(&g, &alpha).unwrap();
        for model in [Model::B, Model::C, Model::D] {
            let perceived = altruistic_model(&g, &convert_param(&alpha, model, g.player_count()).unwrap()).unwrap();
            eq(pure_nash(&perceived), pure_nash(&reference), &what(&format!("model {model} equilibria")))?;
            eq(social_optima(&perceived), social_optima(&reference), &what(&format!("model {model} optima")))?;
        }
        if is_alpha_selfish(&game, &alpha) {
            check(is_alpha_selfish(&game, &(&alpha + &k)), || what("monotonicity"))?;
        }
    }
    Ok(())
}

fn c10_oracle_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    let mut finite = 0;
    for round in 0..200 {
        let game = random_game(&mut rng);
        let level = selfishness_level(&game);
        if level.is_finite() {
            finite += 1;
            eq(level.value(), level_by_search(&game), &format!("game {round}"))?;
        }
    }
    check(finite >= 100, || format!("only {finite} of 200 games have a finite level"))
}

fn c11_dynamics() -> Outcome {
    let wa = generate(&FamilySpec::WeaklyAcyclic3x3).unwrap();
    eq(is_weakly_acyclic(&wa).unwrap(), true, "weakly acyclic")?;
    eq(has_fip(&wa).unwrap(), false, "FIP")?;
    eq(selfishness_level(&wa).to_string(), "inf".to_string(), "level")?;
    let mut rng = ChaCha8Rng::seed_from_u64(1103);
    let mut specs = Vec::new();
    for _ in 0..60 {
        specs.push(FamilySpec::CostSharing(common::random_singleton_cost_sharing(&mut rng)));
        specs.push(FamilySpec::CostSharing(common::random_integer_cost_sharing(&mut rng)));
        specs.push(FamilySpec::Congestion(common::random_symmetric_singleton(&mut rng)));
        specs.push(FamilySpec::Congestion(common::random_integer_congestion(&mut rng)));
    }
    for instance in [
        TightInstance::CostSharingSingleton { c_max: int(10), c_min: int(1) },
        TightInstance::CostSharingInteger { l: 3, c_max: int(2) },
        TightInstance::CongestionSingleton { delta: q(1, 2), a: int(1) },
        TightInstance::CongestionInteger { l: 2, delta_max: int(3), delta_min: int(1) },
    ] {
        specs.push(tight_instance(&instance).unwrap());
    }
    for spec in specs {
        let game = generate(&spec).unwrap();
        check(has_fip(&game).unwrap(), || format!("no FIP: {spec:?}"))?;
        check(selfishness_level(&game).is_finite(), || format!("infinite level: {spec:?}"))?;
    }
    Ok(())
}

/// Appeal factor recomputed from the raw payoff definitions of each game.
fn recomputed_af(params: &ContinuousFamilyParams, w: &Witness) -> Rational {
    let zero = Rational::zero();
    let two = int(2);
    let (gain, drop) = match params {
        ContinuousFamilyParams::Tragedy { n } => {
            let others = int(*n as i64 - 1) * &w.base;
            let total = |own: &Rational| &others + own;
            let payoff = |own: &Rational| (own * (int(1) - total(own))).max(zero.clone());
            let welfare = |own: &Rational| {
                let t = total(own);
                let share = (int(1) - &t).max(zero.clone());
                &t * share
            };
            (payoff(&w.deviation) - payoff(&w.base), welfare(&w.base) - welfare(&w.deviation))
        }
        ContinuousFamilyParams::Cournot { a, b, c } => {
            let price = |total: &Rational| a - b * total;
            let payoff = |own: &Rational| own * price(&(&w.base + own)) - c * own;
            let welfare = |own: &Rational| {
                let total = &w.base + own;
                &total * price(&total) - c * &total
            };
            (payoff(&w.deviation) - payoff(&w.base), welfare(&w.base) - welfare(&w.deviation))
        }
        ContinuousFamilyParams::Bertrand { a, b, c } => {
            let payoff = |own: &Rational, other: &Rational| {
                let profit = (own - c) * (a - b * own);
                if own < other {
                    profit
                } else if own == other {
                    profit / &two
                } else {
                    zero.clone()
                }
            };
            let d = &w.base;
            let s = &w.deviation;
            let gain = payoff(s, d) - payoff(d, d);
            let drop = (payoff(d, d) + payoff(d, d)) - (payoff(s, d) + payoff(d, s));
            (gain, drop)
        }
        ContinuousFamilyParams::PublicGoodsCont { .. } => unreachable!(),
    };
    gain / drop
}

fn c12_continuous_families() -> Outcome {
    let families = [
        ContinuousFamilyParams::Tragedy { n: 2 },
        ContinuousFamilyParams::Tragedy { n: 6 },
        ContinuousFamilyParams::Cournot { a: int(1), b: int(1), c: int(0) },
        ContinuousFamilyParams::Cournot { a: int(9), b: q(1, 3), c: int(2) },
        ContinuousFamilyParams::Bertrand { a: int(2), b: int(1), c: q(1, 2) },
        ContinuousFamilyParams::Bertrand { a: int(10), b: int(3), c: int(1) },
    ];
    for params in &families {
        for m in [int(10), int(1_000), int(1_000_000)] {
            let w = unbounded_witness(params, &m).map_err(|e| e.to_string())?;
            let af = recomputed_af(params, &w);
            check(af > m, || format!("{params:?}, M = {m}: recomputed appeal factor {af}"))?;
            eq(af, w.appeal_factor.clone(), &format!("{params:?}, M = {m}: reported appeal factor"))?;
        }
    }
    eq(tragedy_af(&q(1, 4), &q(3, 8)).map_err(|e| e.to_string())?, int(1), "tragedy_af(1/4, 3/8)")?;
    eq(cournot_af(&int(1), &int(1), &q(1, 4), &q(3, 8)).map_err(|e| e.to_string())?, int(1), "cournot_af(1, 1, 1/4, 3/8)")
}

fn c13_cost_difference() -> Outcome {
    let (c_max, c_min) = (int(6), int(2));
    for eps in [int(1), q(1, 2), q(1, 10)] {
        let spec = cost_difference_instance(&c_max, &c_min, &eps).map_err(|e| e.to_string())?;
        let want = &c_max / (int(2) * &eps) - int(1);
        eq(level_of(&spec), Some(want), &format!("eps = {eps}"))?;
    }
    Ok(())
}

fn run_binary(args: &[&str], stdin: &str) -> Result<String, String> {
    let mut child = Command::new(env!("CARGO_BIN_EXE_selfishness"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| e.to_string())?;
    let _ = child.stdin.take().unwrap().write_all(stdin.as_bytes());
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn c14_cli() -> Outcome {
    let pipelines: [(&[&str], &str); 3] = [
        (&["generate", "pd_n", "--param", "n=2"], "1"),
        (&["generate", "travelers"], "1/2"),
        (&["generate", "matching_pennies"], "inf"),
    ];
    for (args, want) in pipelines {
        let doc = run_binary(args, "")?;
        let level = run_binary(&["level"], &doc)?;
        eq(level.as_str(), &format!("{want}\n"), &format!("{args:?} | level"))?;
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let doc = parse_document(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let game = doc.to_game().map_err(|e| e.to_string())?;
        let rendered = render_game(&game, Some(&doc.player_names()));
        let again = parse_document(&rendered).map_err(|e| e.to_string())?;
        eq(again.player_names(), doc.player_names(), &format!("{} names", path.display()))?;
        eq(parse_game(&rendered).map_err(|e| e.to_string())?, game, &format!("{} payoffs", path.display()))?;
        seen += 1;
    }
    check(seen >= 5, || format!("only {seen} fixtures"))
}

fn main() {
    let criteria: [Criterion; 14] = [
        ("n-player prisoner's dilemma level 1/(2n-3)", c1_prisoners_dilemma),
        ("traveler's dilemma level, equilibrium, optimum", c2_travelers_dilemma),
        ("public goods grid level", c3_public_goods),
        ("fixed 2x2 and 3x3 examples", c4_fixed_examples),
        ("generalized dilemma level and price of stability", c5_generalized_pd),
        ("f-level game", c6_f_level),
        ("cost sharing tight instances and random bounds", c7_cost_sharing),
        ("congestion tight instances and discrepancy range", c8_congestion),
        ("transform algebra", c9_transform_algebra),
        ("level against direct search", c10_oracle_cross_check),
        ("dynamics", c11_dynamics),
        ("continuous families", c12_continuous_families),
        ("cost difference instance", c13_cost_difference),
        ("command line pipelines and fixtures", c14_cli),
    ];
    let mut failed = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = criterion();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({ms} ms): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
