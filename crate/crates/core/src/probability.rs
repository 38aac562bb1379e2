//! Finite distributions, channels and joint systems.
//!
//! All matrices are row-major by outcome: `cells[x][y]` is the probability of
//! outcome `x` together with signal `y`, and `rows[x][y]` of a [`Channel`] is
//! `p(y | x)`. Labels are ordered and that order is preserved everywhere.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Tolerance on the total mass of a distribution, joint, or channel row.
pub const SUM_TOLERANCE: f64 = 1e-9;

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    let mut seen = HashSet::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        if label.is_empty() {
            return Err(Error::EmptyLabel(i));
        }
        if !seen.insert(label.as_str()) {
            return Err(Error::DuplicateLabel(label.clone()));
        }
    }
    Ok(())
}

fn check_weights(labels: &[String], weights: &[f64]) -> Result<()> {
    if weights.len() != labels.len() {
        return Err(Error::LengthMismatch {
            expected: labels.len(),
            got: weights.len(),
        });
    }
    for (label, &w) in labels.iter().zip(weights) {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::NegativeWeight {
                label: label.clone(),
                weight: w,
            });
        }
    }
    Ok(())
}

fn check_sum(probs: &[f64]) -> Result<()> {
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::SumNotOne { sum });
    }
    Ok(())
}

fn collect_labels<I, S>(labels: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    labels.into_iter().map(Into::into).collect()
}

/// A probability vector over an ordered, labelled alphabet.
///
/// ```
/// use infoeff::Distribution;
///
/// let coin = Distribution::new(["h", "t"], vec![0.9, 0.1]).unwrap();
/// assert_eq!(coin.prob("h"), Some(0.9));
/// assert!(Distribution::new(["h", "t"], vec![0.5, 0.6]).is_err());
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl Distribution {
    /// Builds a distribution from probabilities that already sum to one.
    ///
    /// The given values are stored as-is. Use [`Distribution::normalize`] for
    /// unnormalized weights.
    pub fn new<I, S>(labels: I, probs: Vec<f64>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels = collect_labels(labels);
        check_labels(&labels)?;
        check_weights(&labels, &probs)?;
        check_sum(&probs)?;
        Ok(Self { labels, probs })
    }

    /// Builds a distribution proportional to `weights`.
    ///
    /// Weights that already sum to one up to rounding are returned unchanged,
    /// which makes the operation idempotent.
    pub fn normalize<I, S>(labels: I, weights: Vec<f64>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels = collect_labels(labels);
        check_labels(&labels)?;
        check_weights(&labels, &weights)?;
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::AllZero);
        }
        let slack = 4.0 * weights.len() as f64 * f64::EPSILON;
        let probs = if (total - 1.0).abs() <= slack {
            weights
        } else {
            weights.iter().map(|w| w / total).collect()
        };
        Ok(Self { labels, probs })
    }

    /// The uniform distribution over `labels`.
    pub fn uniform<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels = collect_labels(labels);
        check_labels(&labels)?;
        let p = 1.0 / labels.len() as f64;
        let probs = vec![p; labels.len()];
        Ok(Self { labels, probs })
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_parts(labels: Vec<String>, probs: Vec<f64>) -> Self {
        debug_assert_eq!(labels.len(), probs.len());
        Self { labels, probs }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn prob(&self, label: &str) -> Option<f64> {
        self.index_of(label).map(|i| self.probs[i])
    }

    /// Fails with [`Error::LabelMismatch`] unless both share the same ordered labels.
    pub fn require_same_labels(&self, other: &Distribution) -> Result<()> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch(format!(
                "{:?} vs {:?}",
                self.labels, other.labels
            )));
        }
        Ok(())
    }
}

/// A conditional distribution `p(y | x)` from outcomes to signals.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    inputs: Vec<String>,
    outputs: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Channel {
    /// `rows[x]` is the signal distribution emitted when outcome `x` occurs.
    pub fn new<I, S, J, T>(inputs: I, outputs: J, rows: Vec<Vec<f64>>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
        J: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let inputs = collect_labels(inputs);
        let outputs = collect_labels(outputs);
        check_labels(&inputs)?;
        check_labels(&outputs)?;
        if rows.len() != inputs.len() {
            return Err(Error::LengthMismatch {
                expected: inputs.len(),
                got: rows.len(),
            });
        }
        for row in &rows {
            check_weights(&outputs, row)?;
            check_sum(row)?;
        }
        Ok(Self {
            inputs,
            outputs,
            rows,
        })
    }

    /// The noiseless channel: each outcome is reported as itself.
    pub fn identity<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels = collect_labels(labels);
        check_labels(&labels)?;
        let n = labels.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Ok(Self {
            inputs: labels.clone(),
            outputs: labels,
            rows,
        })
    }

    /// A channel whose single signal carries no information.
    pub fn uninformative<I, S>(inputs: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let inputs = collect_labels(inputs);
        check_labels(&inputs)?;
        let rows = vec![vec![1.0]; inputs.len()];
        Ok(Self {
            inputs,
            outputs: vec!["-".to_string()],
            rows,
        })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// `p(y | x)` by index.
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.rows[x][y]
    }

    /// Post-processes the signal through `garbling`, giving `p(z | x) = Σ_y p(y | x) p(z | y)`.
    pub fn compose(&self, garbling: &Channel) -> Result<Channel> {
        if self.outputs != garbling.inputs {
            return Err(Error::LabelMismatch(format!(
                "signals {:?} vs garbling inputs {:?}",
                self.outputs, garbling.inputs
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                (0..garbling.outputs.len())
                    .map(|z| row.iter().zip(&garbling.rows).map(|(p, g)| p * g[z]).sum())
                    .collect()
            })
            .collect();
        Ok(Channel {
            inputs: self.inputs.clone(),
            outputs: garbling.outputs.clone(),
            rows,
        })
    }

    /// Observes both signals, drawn independently given the outcome.
    ///
    /// The paired signal labels are `"{y}|{z}"`, ordered by `y` then `z`.
    pub fn pair(&self, other: &Channel) -> Result<Channel> {
        if self.inputs != other.inputs {
            return Err(Error::LabelMismatch(format!(
                "{:?} vs {:?}",
                self.inputs, other.inputs
            )));
        }
        let outputs = self
            .outputs
            .iter()
            .flat_map(|y| other.outputs.iter().map(move |z| format!("{y}|{z}")))
            .collect::<Vec<_>>();
        check_labels(&outputs)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                a.iter()
                    .flat_map(|p| b.iter().map(move |q| p * q))
                    .collect()
            })
            .collect();
        Ok(Channel {
            inputs: self.inputs.clone(),
            outputs,
            rows,
        })
    }
}

/// A joint distribution over (outcome, signal) pairs.
///
/// ```
/// use infoeff::{Channel, Distribution, JointSystem};
///
/// let prior = Distribution::uniform(["h", "t"]).unwrap();
/// let channel = Channel::new(["h", "t"], ["h", "t"], vec![vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
/// let joint = JointSystem::from_prior_channel(&prior, &channel).unwrap();
/// assert_eq!(joint.cells()[0], vec![0.45, 0.05]);
/// assert_eq!(joint.signal_marginal().probs(), &[0.5, 0.5]);
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct JointSystem {
    outcomes: Vec<String>,
    signals: Vec<String>,
    cells: Vec<Vec<f64>>,
}

impl JointSystem {
    /// `cells[x][y] = prior(x) * channel(y | x)`.
    pub fn from_prior_channel(prior: &Distribution, channel: &Channel) -> Result<Self> {
        if prior.labels() != channel.inputs() {
            return Err(Error::LabelMismatch(format!(
                "prior {:?} vs channel inputs {:?}",
                prior.labels(),
                channel.inputs()
            )));
        }
        let cells = prior
            .probs()
            .iter()
            .zip(channel.rows())
            .map(|(&p, row)| row.iter().map(|&c| p * c).collect())
            .collect();
        Ok(Self {
            outcomes: prior.labels().to_vec(),
            signals: channel.outputs().to_vec(),
            cells,
        })
    }

    /// Builds a joint from an explicit matrix of probabilities.
    pub fn from_cells<I, S, J, T>(outcomes: I, signals: J, cells: Vec<Vec<f64>>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
        J: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let outcomes = collect_labels(outcomes);
        let signals = collect_labels(signals);
        check_labels(&outcomes)?;
        check_labels(&signals)?;
        if cells.len() != outcomes.len() {
            return Err(Error::LengthMismatch {
                expected: outcomes.len(),
                got: cells.len(),
            });
        }
        for row in &cells {
            check_weights(&signals, row)?;
        }
        check_sum(&cells.iter().flatten().copied().collect::<Vec<_>>())?;
        Ok(Self {
            outcomes,
            signals,
            cells,
        })
    }

    /// Outcome and signal drawn independently from the two marginals.
    pub fn independent(outcomes: &Distribution, signals: &Distribution) -> Self {
        let cells = outcomes
            .probs()
            .iter()
            .map(|&p| signals.probs().iter().map(|&s| p * s).collect())
            .collect();
        Self {
            outcomes: outcomes.labels().to_vec(),
            signals: signals.labels().to_vec(),
            cells,
        }
    }

    pub(crate) fn from_parts(
        outcomes: Vec<String>,
        signals: Vec<String>,
        cells: Vec<Vec<f64>>,
    ) -> Self {
        Self {
            outcomes,
            signals,
            cells,
        }
    }

    pub fn outcome_labels(&self) -> &[String] {
        &self.outcomes
    }

    pub fn signal_labels(&self) -> &[String] {
        &self.signals
    }

    pub fn cells(&self) -> &[Vec<f64>] {
        &self.cells
    }

    /// `p(x) = Σ_y p(x, y)`.
    pub fn outcome_marginal(&self) -> Distribution {
        let probs = self.cells.iter().map(|row| row.iter().sum()).collect();
        Distribution::from_parts(self.outcomes.clone(), probs)
    }

    /// `p(y) = Σ_x p(x, y)`.
    pub fn signal_marginal(&self) -> Distribution {
        let probs = (0..self.signals.len())
            .map(|y| self.cells.iter().map(|row| row[y]).sum())
            .collect();
        Distribution::from_parts(self.signals.clone(), probs)
    }
}

/// Inverts `channel` with Bayes' rule:
/// `p(x | y) = p(x) p(y | x) / Σ_x' p(x') p(y | x')`.
///
/// ```
/// use infoeff::{bayes_posterior, Channel, Distribution};
///
/// let prior = Distribution::new(["h", "t"], vec![0.9, 0.1]).unwrap();
/// let channel = Channel::new(["h", "t"], ["h", "t"], vec![vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
/// let post = bayes_posterior(&prior, &channel, "h").unwrap();
/// assert!((post.probs()[0] - 0.81 / 0.82).abs() < 1e-15);
/// ```
pub fn bayes_posterior(
    prior: &Distribution,
    channel: &Channel,
    signal: &str,
) -> Result<Distribution> {
    if prior.labels() != channel.inputs() {
        return Err(Error::LabelMismatch(format!(
            "prior {:?} vs channel inputs {:?}",
            prior.labels(),
            channel.inputs()
        )));
    }
    let y = channel
        .outputs()
        .iter()
        .position(|s| s == signal)
        .ok_or_else(|| Error::UnknownLabel(signal.to_string()))?;
    posterior_at(prior, channel, y)
}

pub(crate) fn posterior_at(
    prior: &Distribution,
    channel: &Channel,
    y: usize,
) -> Result<Distribution> {
    let weighted: Vec<f64> = prior
        .probs()
        .iter()
        .zip(channel.rows())
        .map(|(&p, row)| p * row[y])
        .collect();
    let evidence: f64 = weighted.iter().sum();
    if evidence <= 0.0 {
        return Err(Error::ZeroProbabilitySignal(channel.outputs()[y].clone()));
    }
    let probs = weighted.iter().map(|w| w / evidence).collect();
    Ok(Distribution::from_parts(prior.labels().to_vec(), probs))
}
