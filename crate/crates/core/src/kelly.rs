//! Repeated betting on a system and the growth of the bettor's wealth.
//!
//! Each round an outcome `x` is drawn from the prior and a signal `y` from the
//! channel row of `x`. The bettor splits all current wealth across outcomes
//! according to the allocation for `y`; the stake on the realized outcome is
//! paid `α_x = 1 / q(x)` times, everything else is lost. Wealth is tracked as
//! `log2(V_n / V_0)` and never materialized.
//!
//! Staking the Bayes posterior (the Kelly strategy) attains the expected
//! growth `H(q) - H(X|Y)` bits per round; [`grid_search_optimal`] searches
//! allocations exhaustively as an independent check.

use rayon::prelude::*;
use serde::Serialize;

use crate::coin::CoinSystem;
use crate::error::{Error, Result};
use crate::probability::{posterior_at, Channel, Distribution, JointSystem, SUM_TOLERANCE};
use crate::rng::{cumulative, sample_index, stream_rng};

/// A market to bet on: true outcome probabilities, the bettor's signal
/// channel, and the quote probabilities fixing the payouts.
#[derive(Debug, Clone, PartialEq)]
pub struct BettingGame {
    prior: Distribution,
    channel: Channel,
    quotes: Distribution,
}

impl BettingGame {
    pub fn new(prior: Distribution, channel: Channel, quotes: Distribution) -> Result<Self> {
        if prior.labels() != channel.inputs() {
            return Err(Error::LabelMismatch(format!(
                "prior {:?} vs channel inputs {:?}",
                prior.labels(),
                channel.inputs()
            )));
        }
        prior.require_same_labels(&quotes)?;
        let sum: f64 = quotes.probs().iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::QuoteSumNotOne { sum });
        }
        for ((label, &p), &q) in prior.labels().iter().zip(prior.probs()).zip(quotes.probs()) {
            if p > 0.0 && q <= 0.0 {
                return Err(Error::UnsupportedOutcome(label.clone()));
            }
        }
        Ok(Self {
            prior,
            channel,
            quotes,
        })
    }

    pub fn from_coin(coin: &CoinSystem) -> Result<Self> {
        Self::new(
            coin.prior.clone(),
            coin.channel.clone(),
            coin.quotes.clone(),
        )
    }

    pub fn prior(&self) -> &Distribution {
        &self.prior
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    pub fn quotes(&self) -> &Distribution {
        &self.quotes
    }

    pub fn joint(&self) -> JointSystem {
        JointSystem::from_prior_channel(&self.prior, &self.channel)
            .expect("labels checked at construction")
    }
}

/// For every signal, the fraction of wealth staked on each outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct BettingStrategy {
    signals: Vec<String>,
    allocations: Vec<Distribution>,
}

impl BettingStrategy {
    /// `allocations[i]` is used when signal `signals[i]` is observed. All
    /// allocations must share the same outcome labels.
    pub fn new(signals: Vec<String>, allocations: Vec<Distribution>) -> Result<Self> {
        if signals.len() != allocations.len() {
            return Err(Error::LengthMismatch {
                expected: signals.len(),
                got: allocations.len(),
            });
        }
        if let Some(first) = allocations.first() {
            for a in &allocations[1..] {
                first.require_same_labels(a)?;
            }
        }
        Ok(Self {
            signals,
            allocations,
        })
    }

    pub fn signals(&self) -> &[String] {
        &self.signals
    }

    pub fn allocations(&self) -> &[Distribution] {
        &self.allocations
    }

    pub fn allocation(&self, signal: &str) -> Option<&Distribution> {
        self.signals
            .iter()
            .position(|s| s == signal)
            .map(|i| &self.allocations[i])
    }

    fn check_against(&self, game: &BettingGame) -> Result<()> {
        if self.signals != game.channel.outputs() {
            return Err(Error::LabelMismatch(format!(
                "strategy signals {:?} vs channel signals {:?}",
                self.signals,
                game.channel.outputs()
            )));
        }
        for a in &self.allocations {
            game.prior.require_same_labels(a)?;
        }
        Ok(())
    }

    /// `log2(allocation(y)(x) · α_x)` for every signal `y` and outcome `x`.
    fn log2_returns(&self, game: &BettingGame) -> Vec<Vec<f64>> {
        self.allocations
            .iter()
            .map(|a| {
                a.probs()
                    .iter()
                    .zip(game.quotes.probs())
                    .map(|(&stake, &q)| stake.log2() - q.log2())
                    .collect()
            })
            .collect()
    }
}

/// Proportional betting on the posterior: `allocation(y) = p(· | y)`.
pub fn kelly_strategy(prior: &Distribution, channel: &Channel) -> Result<BettingStrategy> {
    if prior.labels() != channel.inputs() {
        return Err(Error::LabelMismatch(format!(
            "prior {:?} vs channel inputs {:?}",
            prior.labels(),
            channel.inputs()
        )));
    }
    let allocations = (0..channel.outputs().len())
        .map(|y| posterior_at(prior, channel, y))
        .collect::<Result<Vec<_>>>()?;
    BettingStrategy::new(channel.outputs().to_vec(), allocations)
}

/// Exact expected growth `Σ_{x,y} p(x, y) log2(allocation(y)(x) · α_x)` in
/// bits per round. `-inf` if the strategy can go bankrupt.
pub fn expected_growth(game: &BettingGame, strategy: &BettingStrategy) -> Result<f64> {
    strategy.check_against(game)?;
    let returns = strategy.log2_returns(game);
    let joint = game.joint();
    let mut total = 0.0;
    for (x, row) in joint.cells().iter().enumerate() {
        for (y, &p) in row.iter().enumerate() {
            if p > 0.0 {
                total += p * returns[y][x];
            }
        }
    }
    Ok(total)
}

/// Settings for a single simulated run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationConfig {
    pub rounds: u64,
    pub seed: u64,
    /// Stream index, so that several runs can share a seed.
    pub run: u64,
    /// Keep roughly this many evenly spaced `(round, log2 wealth)` points.
    pub trajectory_points: Option<usize>,
}

impl SimulationConfig {
    pub fn new(rounds: u64, seed: u64) -> Self {
        Self {
            rounds,
            seed,
            run: 0,
            trajectory_points: None,
        }
    }
}

/// Outcome of one simulated run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    pub run: u64,
    pub rounds: u64,
    pub seed: u64,
    /// `log2(V_n / V_0)`.
    pub final_log2_wealth: f64,
    /// Bits per round, `final_log2_wealth / rounds`.
    pub mean_growth: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory_sample: Option<Vec<(u64, f64)>>,
}

impl SimulationResult {
    /// Trajectory as CSV with header `round,log2_wealth`.
    pub fn trajectory_csv(&self) -> Option<String> {
        self.trajectory_sample.as_ref().map(|points| {
            let mut out = String::from("round,log2_wealth\n");
            for (round, w) in points {
                out.push_str(&format!("{round},{w}\n"));
            }
            out
        })
    }
}

/// Plays `rounds` rounds with [`SimulationConfig::new`] defaults.
pub fn simulate(
    game: &BettingGame,
    strategy: &BettingStrategy,
    rounds: u64,
    seed: u64,
) -> Result<SimulationResult> {
    simulate_with(game, strategy, &SimulationConfig::new(rounds, seed))
}

pub fn simulate_with(
    game: &BettingGame,
    strategy: &BettingStrategy,
    config: &SimulationConfig,
) -> Result<SimulationResult> {
    if config.rounds == 0 {
        return Err(Error::DomainViolation {
            value: 0.0,
            domain: "rounds >= 1".into(),
        });
    }
    strategy.check_against(game)?;
    let returns = strategy.log2_returns(game);
    let prior = game.prior.probs();
    let prior_cdf = cumulative(prior);
    let rows = game.channel.rows();
    let row_cdfs: Vec<Vec<f64>> = rows.iter().map(|r| cumulative(r)).collect();

    let stride = config
        .trajectory_points
        .map(|n| config.rounds.div_ceil(n.max(1) as u64).max(1));
    let mut trajectory = stride.map(|_| vec![(0u64, 0.0)]);

    let mut rng = stream_rng(config.seed, config.run);
    let mut log2_wealth = 0.0;
    for round in 1..=config.rounds {
        let x = sample_index(&mut rng, prior, &prior_cdf);
        let y = sample_index(&mut rng, &rows[x], &row_cdfs[x]);
        let r = returns[y][x];
        if r == f64::NEG_INFINITY {
            return Err(Error::BankruptcyUnderflow { round });
        }
        log2_wealth += r;
        if let (Some(stride), Some(points)) = (stride, trajectory.as_mut()) {
            if round % stride == 0 || round == config.rounds {
                points.push((round, log2_wealth));
            }
        }
    }
    Ok(SimulationResult {
        run: config.run,
        rounds: config.rounds,
        seed: config.seed,
        final_log2_wealth: log2_wealth,
        mean_growth: log2_wealth / config.rounds as f64,
        trajectory_sample: trajectory,
    })
}

/// Runs `runs` independent simulations on streams `0..runs` of `seed`, in
/// parallel. Results are ordered by run index.
pub fn simulate_runs(
    game: &BettingGame,
    strategy: &BettingStrategy,
    rounds: u64,
    seed: u64,
    runs: u64,
) -> Result<Vec<SimulationResult>> {
    (0..runs)
        .into_par_iter()
        .map(|run| {
            simulate_with(
                game,
                strategy,
                &SimulationConfig {
                    run,
                    ..SimulationConfig::new(rounds, seed)
                },
            )
        })
        .collect()
}

/// Exhaustive search over fixed per-signal allocations `[k/n, 1 - k/n]`,
/// `k = 0..=n`, maximizing the exact expected growth. Binary outcomes only.
///
/// The expected growth is a sum of one term per signal, so the search over
/// the product grid reduces to an independent scan for each signal. Signals
/// that never occur get the even split.
pub fn grid_search_optimal(
    game: &BettingGame,
    resolution: usize,
) -> Result<(BettingStrategy, f64)> {
    let outcomes = game.prior.labels();
    if outcomes.len() != 2 {
        return Err(Error::UnsupportedAlphabet(outcomes.len()));
    }
    if resolution < 100 {
        return Err(Error::DomainViolation {
            value: resolution as f64,
            domain: "resolution >= 100".into(),
        });
    }
    let joint = game.joint();
    let cells = joint.cells();
    let alpha: Vec<f64> = game.quotes.probs().iter().map(|q| 1.0 / q).collect();
    let term = |p: f64, stake: f64, a: f64| if p > 0.0 { p * (stake * a).log2() } else { 0.0 };

    let mut allocations = Vec::new();
    let mut total = 0.0;
    for (&p_first, &p_second) in cells[0].iter().zip(&cells[1]) {
        let mut best = (resolution / 2, f64::NEG_INFINITY);
        if p_first + p_second > 0.0 {
            for k in 0..=resolution {
                let a = k as f64 / resolution as f64;
                let g = term(p_first, a, alpha[0]) + term(p_second, 1.0 - a, alpha[1]);
                if g > best.1 {
                    best = (k, g);
                }
            }
        } else {
            best.1 = 0.0;
        }
        let a = best.0 as f64 / resolution as f64;
        allocations.push(Distribution::from_parts(
            outcomes.to_vec(),
            vec![a, 1.0 - a],
        ));
        total += best.1;
    }
    let strategy = BettingStrategy::new(joint.signal_labels().to_vec(), allocations)?;
    Ok((strategy, total))
}
