//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Reference values were computed with mpmath at 30 significant digits.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use infoeff::coin::{
    closed_form_efficiency_fair, closed_form_efficiency_unfair_quotes, closed_form_entropy,
    closed_form_quote_entropy, coin_joint, CoinGameParams,
};
use infoeff::estimation::{estimate_efficiency, EstimationConfig, SampleSet};
use infoeff::kelly::{grid_search_optimal, kelly_strategy, simulate, BettingGame};
use infoeff::rng::stream_rng;
use infoeff::{
    bayes_posterior, conditional_entropy, cross_entropy, efficiency, efficiency_with_quotes,
    entropy, max_growth_with_quotes, mutual_information, Channel, Distribution, InfoSetLabel,
    JointSystem,
};
use infoeff_cli::coin_report;
use rand::Rng;

/// Binary entropy of 0.9.
const HB_09: f64 = 0.468_995_593_589_281_2;
/// 1 - H_b(0.9).
const GROWTH_09: f64 = 0.531_004_406_410_718_8;
/// 1 - H_b(0.55).
const DROP_055: f64 = 0.007_225_546_012_191_71;
/// -0.5 log2 0.05 - 0.5 log2 0.95 - 1.
const MISPRICING_005: f64 = 1.197_964_338_165_569_6;

type Outcome = Result<String, String>;
/// Name, check, and time budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn coin(p_tail: f64, accuracy: f64, q_tail: f64) -> infoeff::coin::CoinSystem {
    coin_joint(&CoinGameParams::new(p_tail, accuracy, q_tail).unwrap()).unwrap()
}

fn fig1_endpoints() -> Outcome {
    let values = [
        (0.5, closed_form_efficiency_fair(0.5), 1.0),
        (0.0, closed_form_efficiency_fair(0.0), 0.0),
        (1.0, closed_form_efficiency_fair(1.0), 0.0),
    ];
    let worst = values
        .iter()
        .map(|(_, v, t)| (v - t).abs())
        .fold(0.0, f64::max);
    check(
        worst <= 1e-12,
        format!(
            "Eff(0.5)={}, Eff(0)={}, Eff(1)={}; max dev {worst:e}",
            values[0].1, values[1].1, values[2].1
        ),
    )
}

fn around_fifty_percent() -> Outcome {
    let c = coin(0.5, 0.9, 0.5);
    let eff = efficiency(&c.joint, InfoSetLabel::Strong)
        .unwrap()
        .eff
        .unwrap();
    check(
        (eff - 0.46900).abs() <= 5e-5 && (eff - HB_09).abs() <= 1e-12,
        format!("Eff(0.9)={eff:.12}, oracle {HB_09:.12}"),
    )
}

fn less_than_three_percent() -> Outcome {
    let c = coin(0.5, 0.55, 0.5);
    let drop = 1.0
        - efficiency(&c.joint, InfoSetLabel::Strong)
            .unwrap()
            .eff
            .unwrap();
    check(
        drop < 0.03 && (drop - DROP_055).abs() < 1e-12,
        format!("1 - Eff(0.55) = {drop:.12}, oracle {DROP_055:.12}"),
    )
}

fn fair_quotes_biased_coin() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let c = coin(p, 0.5, p);
        let r = efficiency_with_quotes(&c.joint, &c.quotes, InfoSetLabel::Strong).unwrap();
        worst = worst.max((r.eff_q.unwrap() - 1.0).abs());
    }
    check(
        worst <= 1e-12,
        format!("max |Eff_q - 1| = {worst:e} over 5 p_tail values"),
    )
}

fn random_weights<R: Rng>(rng: &mut R, n: usize, zeros: bool) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..n)
            .map(|_| {
                if zeros && rng.random_bool(0.15) {
                    0.0
                } else {
                    rng.random_range(0.001..1.0)
                }
            })
            .collect();
        if w.iter().filter(|&&v| v > 0.0).count() >= 1 {
            return w;
        }
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn random_channel<R: Rng>(rng: &mut R, nx: usize, ny: usize) -> Channel {
    let rows = (0..nx)
        .map(|_| {
            let w = random_weights(rng, ny, true);
            let s: f64 = w.iter().sum();
            w.into_iter().map(|v| v / s).collect()
        })
        .collect();
    Channel::new(labels("x", nx), labels("y", ny), rows).unwrap()
}

fn gibbs_bounds_suite() -> Outcome {
    let mut rng = stream_rng(5, 0);
    let tol = 1e-12;
    let mut checked = 0;
    let mut worst_gap: f64 = 0.0;
    while checked < 10_000 {
        let nx = rng.random_range(2..=5);
        let ny = rng.random_range(1..=5);
        let p =
            Distribution::normalize(labels("x", nx), random_weights(&mut rng, nx, true)).unwrap();
        if entropy(&p).value() == 0.0 {
            continue;
        }
        let q =
            Distribution::normalize(labels("x", nx), random_weights(&mut rng, nx, false)).unwrap();
        let channel = random_channel(&mut rng, nx, ny);
        let joint = JointSystem::from_prior_channel(&p, &channel).unwrap();

        let h_x = entropy(&joint.outcome_marginal()).value();
        let h_xy = conditional_entropy(&joint).value();
        let h_q = cross_entropy(&joint.outcome_marginal(), &q)
            .unwrap()
            .value();
        let m = mutual_information(&joint).unwrap().value();
        let r = efficiency_with_quotes(&joint, &q, InfoSetLabel::Strong).unwrap();
        let eff = r.eff.unwrap();
        let eff_q = r.eff_q.unwrap();
        let gap = (r.g_max_q.unwrap().value() - ((h_q - h_x) + (h_x - h_xy))).abs();
        worst_gap = worst_gap.max(gap);

        let ok = (0.0..=1.0).contains(&eff)
            && (0.0..=1.0).contains(&eff_q)
            && h_q >= h_x - tol
            && h_x >= h_xy - tol
            && m >= 0.0
            && gap <= tol;
        if !ok {
            return Err(format!(
                "triple {checked}: eff={eff} eff_q={eff_q} H(q)={h_q} H(X)={h_x} H(X|Y)={h_xy} M={m} gap={gap:e}"
            ));
        }
        checked += 1;
    }
    Ok(format!(
        "{checked} triples; max gap-additivity residual {worst_gap:e}"
    ))
}

fn kelly_equivalence() -> Outcome {
    let c = coin(0.5, 0.9, 0.5);
    let game = BettingGame::from_coin(&c).unwrap();
    let kelly = kelly_strategy(&c.prior, &c.channel).unwrap();
    let growth: Vec<f64> = (1..=10)
        .map(|seed| {
            simulate(&game, &kelly, 1_000_000, seed)
                .unwrap()
                .mean_growth
        })
        .collect();
    let worst = growth
        .iter()
        .map(|g| (g - GROWTH_09).abs())
        .fold(0.0, f64::max);
    check(
        worst <= 0.01,
        format!(
            "10 seeds x 1e6 rounds, growth {:.4}..{:.4}, max |err| {worst:.5} vs {GROWTH_09:.4}",
            growth.iter().copied().fold(f64::MAX, f64::min),
            growth.iter().copied().fold(f64::MIN, f64::max)
        ),
    )
}

fn mispricing_profit() -> Outcome {
    let c = coin(0.5, 0.5, 0.95);
    let game = BettingGame::from_coin(&c).unwrap();
    let kelly = kelly_strategy(&c.prior, &c.channel).unwrap();
    let target = max_growth_with_quotes(&c.joint, &c.quotes).unwrap().value();
    let growth: Vec<f64> = (1..=10)
        .map(|seed| {
            simulate(&game, &kelly, 1_000_000, seed)
                .unwrap()
                .mean_growth
        })
        .collect();
    let worst = growth
        .iter()
        .map(|g| (g - MISPRICING_005).abs())
        .fold(0.0, f64::max);
    check(
        worst <= 0.01 && (target - MISPRICING_005).abs() < 1e-12,
        format!("quotes [0.05, 0.95], 10 seeds x 1e6 rounds, max |err| {worst:.5} vs {MISPRICING_005:.4}"),
    )
}

fn grid_search_oracle() -> Outcome {
    let mut rng = stream_rng(8, 0);
    let mut worst_growth: f64 = 0.0;
    let mut worst_alloc: f64 = 0.0;
    for case in 0..20 {
        let p = Distribution::normalize(["h", "t"], random_weights(&mut rng, 2, false)).unwrap();
        let rows = (0..2)
            .map(|_| {
                let a = rng.random_range(0.02..0.98);
                vec![a, 1.0 - a]
            })
            .collect();
        let channel = Channel::new(["h", "t"], ["h", "t"], rows).unwrap();
        // even cases use fair quotes, odd cases random ones
        let q = if case % 2 == 0 {
            p.clone()
        } else {
            Distribution::normalize(["h", "t"], random_weights(&mut rng, 2, false)).unwrap()
        };
        let game = BettingGame::new(p.clone(), channel.clone(), q.clone()).unwrap();
        let (strategy, found) = grid_search_optimal(&game, 1000).unwrap();
        let exact = max_growth_with_quotes(&game.joint(), &q).unwrap().value();
        worst_growth = worst_growth.max((found - exact).abs());
        for signal in channel.outputs() {
            let posterior = bayes_posterior(&p, &channel, signal).unwrap();
            let alloc = strategy.allocation(signal).unwrap();
            for (a, b) in alloc.probs().iter().zip(posterior.probs()) {
                worst_alloc = worst_alloc.max((a - b).abs());
            }
        }
    }
    check(
        worst_growth <= 0.002 && worst_alloc <= 0.002,
        format!(
            "20 cases; max growth dev {worst_growth:.2e}, max allocation dev {worst_alloc:.2e}"
        ),
    )
}

fn closed_form_consistency() -> Outcome {
    let grid: Vec<f64> = (1..=21).map(|i| i as f64 / 22.0).collect();
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for &p in &grid {
        for &a in &grid {
            for &q in &grid {
                let params = CoinGameParams::new(p, a, q).unwrap();
                let c = coin_joint(&params).unwrap();
                let r = efficiency_with_quotes(&c.joint, &c.quotes, InfoSetLabel::Strong).unwrap();
                let mut pairs = vec![(closed_form_entropy(p), r.h_x.value())];
                if p == 0.5 {
                    pairs.push((closed_form_efficiency_fair(a), r.eff.unwrap()));
                    pairs.push((closed_form_quote_entropy(q), r.h_q.unwrap().value()));
                    if a == 0.5 {
                        pairs.push((closed_form_efficiency_unfair_quotes(q), r.eff_q.unwrap()));
                    }
                }
                for (closed, general) in pairs {
                    worst = worst.max((closed - general).abs());
                    compared += 1;
                }
                let delta = coin_report(&params).unwrap().consistency_delta;
                worst = worst.max(delta);
            }
        }
    }
    check(
        worst <= 1e-10,
        format!("{compared} closed-form comparisons on 21^3 grid, max dev {worst:e}"),
    )
}

fn estimation_recovery() -> Outcome {
    let c = coin(0.5, 0.9, 0.5);
    let mut covered = 0;
    let mut worst: f64 = 0.0;
    for trial in 0..100u64 {
        let samples = SampleSet::draw(&c.prior, &c.channel, 100_000, 1_000 + trial).unwrap();
        let config = EstimationConfig {
            seed: trial,
            ..EstimationConfig::default()
        };
        let report = estimate_efficiency(&samples, None, &config).unwrap();
        let eff = report.point.eff.unwrap();
        worst = worst.max((eff - HB_09).abs());
        if report.ci_low <= HB_09 && HB_09 <= report.ci_high {
            covered += 1;
        }
    }
    check(
        worst <= 0.02 && covered >= 90,
        format!(
            "100 trials of 1e5 samples; max |eff - truth| {worst:.5}, CI coverage {covered}/100"
        ),
    )
}

fn read_table(path: &Path) -> Vec<(f64, f64)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let (x, y) = l.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect()
}

fn figure_regeneration() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let status = Command::new(env!("CARGO_BIN_EXE_infoeff"))
            .args(["figures", "--which", "all", "--out-dir"])
            .arg(dir.path())
            .output()
            .unwrap();
        if !status.status.success() {
            return Err(String::from_utf8_lossy(&status.stderr).into_owned());
        }
    }
    for n in 1..=4 {
        let name = format!("fig{n}.csv");
        if fs::read(dirs[0].path().join(&name)).unwrap()
            != fs::read(dirs[1].path().join(&name)).unwrap()
        {
            return Err(format!("{name} differs between runs"));
        }
    }
    let tables: Vec<Vec<(f64, f64)>> = (1..=4)
        .map(|n| read_table(&dirs[0].path().join(format!("fig{n}.csv"))))
        .collect();
    let argmax = |t: &[(f64, f64)]| {
        t.iter()
            .copied()
            .fold((f64::NAN, f64::MIN), |a, b| if b.1 > a.1 { b } else { a })
    };
    let argmin = |t: &[(f64, f64)]| {
        t.iter()
            .copied()
            .fold((f64::NAN, f64::MAX), |a, b| if b.1 < a.1 { b } else { a })
    };
    let near = |(x, y): (f64, f64), (tx, ty): (f64, f64)| {
        (x - tx).abs() <= 1e-12 && (y - ty).abs() <= 1e-12
    };

    let fig2 = &tables[1];
    let ok = near(argmax(&tables[0]), (0.5, 1.0))
        && near(fig2[0], (0.0, 0.0))
        && near(fig2[fig2.len() - 1], (1.0, 0.0))
        && near(argmax(fig2), (0.5, 1.0))
        && near(argmax(&tables[2]), (0.5, 1.0))
        && near(argmin(&tables[3]), (0.5, 1.0));
    check(
        ok,
        format!(
            "fig1 max {:?}, fig2 ends {:?} {:?} max {:?}, fig3 max {:?}, fig4 min {:?}; byte-identical",
            argmax(&tables[0]),
            fig2[0],
            fig2[fig2.len() - 1],
            argmax(fig2),
            argmax(&tables[2]),
            argmin(&tables[3])
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1 fig1 endpoints and peak", fig1_endpoints, 1),
        (
            "2 efficiency near 50% at 90% accuracy",
            around_fifty_percent,
            1,
        ),
        (
            "3 efficiency drop below 3% at 55% accuracy",
            less_than_three_percent,
            1,
        ),
        ("4 fair quotes on a biased coin", fair_quotes_biased_coin, 1),
        (
            "5 Gibbs and bounds on random triples",
            gibbs_bounds_suite,
            10,
        ),
        (
            "6 Kelly growth equals mutual information",
            kelly_equivalence,
            10,
        ),
        (
            "7 mispricing profit without predictability",
            mispricing_profit,
            10,
        ),
        ("8 grid search matches closed form", grid_search_oracle, 30),
        (
            "9 closed forms match general measures",
            closed_form_consistency,
            5,
        ),
        (
            "10 estimation recovery and CI coverage",
            estimation_recovery,
            60,
        ),
        ("11 figure regeneration", figure_regeneration, 5),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "[{status}] criterion {name}: {detail} ({:.2} s)",
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
