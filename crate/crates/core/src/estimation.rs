//! Efficiency estimated from observed (signal, outcome) pairs.
//!
//! The joint is the plug-in estimate from cell counts with optional additive
//! smoothing, and uncertainty comes from a seeded 95% percentile bootstrap.
//!
//! # Sample file format
//!
//! ```text
//! # outcomes: h,t
//! # signals: h,t
//! signal,outcome
//! h,h
//! t,h
//! ```
//!
//! The header `signal,outcome` (in either column order) is mandatory. Lines
//! starting with `#` are comments; the two optional directives above fix the
//! alphabets and their order, otherwise the alphabets are the observed labels
//! in sorted order. Blank lines are ignored and fields are trimmed.
//!
//! Quotes come from a separate file with header `label,q`.

use std::collections::BTreeSet;
use std::io::BufRead;

use rand::Rng;
use rand_distr::{Binomial, Distribution as _};
use rayon::prelude::*;
use serde::Serialize;

use crate::efficiency::{efficiency, efficiency_with_quotes, EfficiencyReport, InfoSetLabel};
use crate::error::{Error, Result};
use crate::probability::{Channel, Distribution, JointSystem, SUM_TOLERANCE};
use crate::rng::{cumulative, sample_index, stream_rng, DEFAULT_SEED};

pub const DEFAULT_SMOOTHING: f64 = 0.5;
pub const DEFAULT_RESAMPLES: usize = 1000;
pub const MIN_RESAMPLES: usize = 100;

/// Observed (signal, outcome) records over fixed alphabets.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    outcomes: Vec<String>,
    signals: Vec<String>,
    /// `(outcome index, signal index)` per record.
    records: Vec<(usize, usize)>,
}

impl SampleSet {
    /// Builds a sample set from `(signal, outcome)` label pairs.
    pub fn new<I, J, L, M, S>(outcomes: I, signals: J, records: &[(S, S)]) -> Result<Self>
    where
        I: IntoIterator<Item = L>,
        L: Into<String>,
        J: IntoIterator<Item = M>,
        M: Into<String>,
        S: AsRef<str>,
    {
        let outcomes: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        let signals: Vec<String> = signals.into_iter().map(Into::into).collect();
        Distribution::uniform(outcomes.clone())?;
        Distribution::uniform(signals.clone())?;
        if records.is_empty() {
            return Err(Error::EmptyInput { line: 0 });
        }
        let find = |labels: &[String], l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        let records = records
            .iter()
            .map(|(s, o)| Ok((find(&outcomes, o.as_ref())?, find(&signals, s.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            outcomes,
            signals,
            records,
        })
    }

    /// Draws `n` records from `prior` and `channel` on stream 0 of `seed`.
    pub fn draw(prior: &Distribution, channel: &Channel, n: usize, seed: u64) -> Result<Self> {
        if prior.labels() != channel.inputs() {
            return Err(Error::LabelMismatch(format!(
                "prior {:?} vs channel inputs {:?}",
                prior.labels(),
                channel.inputs()
            )));
        }
        if n == 0 {
            return Err(Error::EmptyInput { line: 0 });
        }
        let mut rng = stream_rng(seed, 0);
        let prior_cdf = cumulative(prior.probs());
        let row_cdfs: Vec<Vec<f64>> = channel.rows().iter().map(|r| cumulative(r)).collect();
        let records = (0..n)
            .map(|_| {
                let x = sample_index(&mut rng, prior.probs(), &prior_cdf);
                let y = sample_index(&mut rng, &channel.rows()[x], &row_cdfs[x]);
                (x, y)
            })
            .collect();
        Ok(Self {
            outcomes: prior.labels().to_vec(),
            signals: channel.outputs().to_vec(),
            records,
        })
    }

    pub fn outcome_labels(&self) -> &[String] {
        &self.outcomes
    }

    pub fn signal_labels(&self) -> &[String] {
        &self.signals
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `counts[x][y]`.
    pub fn counts(&self) -> Vec<Vec<u64>> {
        let mut counts = vec![vec![0u64; self.signals.len()]; self.outcomes.len()];
        for &(x, y) in &self.records {
            counts[x][y] += 1;
        }
        counts
    }

    /// Records as `(signal, outcome)` label pairs, in input order.
    pub fn records(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.records
            .iter()
            .map(|&(x, y)| (self.signals[y].as_str(), self.outcomes[x].as_str()))
    }
}

fn parse_error(line: usize, column: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        reason: reason.into(),
    }
}

fn split_labels(list: &str) -> Vec<String> {
    list.split(',').map(|s| s.trim().to_string()).collect()
}

/// Reads the sample CSV format described in the module docs.
pub fn read_samples<R: BufRead>(reader: R) -> Result<SampleSet> {
    let mut declared_outcomes: Option<(usize, Vec<String>)> = None;
    let mut declared_signals: Option<(usize, Vec<String>)> = None;
    // column positions of (signal, outcome)
    let mut columns: Option<(usize, usize)> = None;
    let mut raw: Vec<(usize, String, String)> = Vec::new();
    let mut last_line = 0;

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let line = line.map_err(|e| parse_error(lineno, 1, format!("unreadable line: {e}")))?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(comment) = text.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(list) = comment.strip_prefix("outcomes:") {
                declared_outcomes = Some((lineno, split_labels(list)));
            } else if let Some(list) = comment.strip_prefix("signals:") {
                declared_signals = Some((lineno, split_labels(list)));
            }
            continue;
        }
        let fields: Vec<&str> = text.split(',').map(str::trim).collect();
        let Some((sig_col, out_col)) = columns else {
            let mut sig = None;
            let mut out = None;
            for (c, name) in fields.iter().enumerate() {
                match *name {
                    "signal" if sig.is_none() => sig = Some(c),
                    "outcome" if out.is_none() => out = Some(c),
                    other => {
                        return Err(parse_error(
                            lineno,
                            c + 1,
                            format!(
                                "unexpected header column {other:?}, expected `signal,outcome`"
                            ),
                        ))
                    }
                }
            }
            match (sig, out) {
                (Some(s), Some(o)) => columns = Some((s, o)),
                _ => {
                    return Err(parse_error(
                        lineno,
                        1,
                        "header must contain the columns `signal` and `outcome`",
                    ))
                }
            }
            continue;
        };
        if fields.len() != 2 {
            return Err(parse_error(
                lineno,
                fields.len().min(2) + 1,
                format!("expected 2 fields, found {}", fields.len()),
            ));
        }
        for (c, f) in fields.iter().enumerate() {
            if f.is_empty() {
                return Err(parse_error(lineno, c + 1, "empty label"));
            }
        }
        raw.push((
            lineno,
            fields[sig_col].to_string(),
            fields[out_col].to_string(),
        ));
    }

    if columns.is_none() {
        return Err(Error::EmptyInput {
            line: last_line.max(1),
        });
    }
    if raw.is_empty() {
        return Err(Error::EmptyInput { line: last_line });
    }

    let resolve = |declared: Option<(usize, Vec<String>)>,
                   observed: BTreeSet<&str>|
     -> Result<Vec<String>> {
        match declared {
            Some((lineno, labels)) => {
                Distribution::uniform(labels.clone())
                    .map_err(|e| parse_error(lineno, 1, format!("bad alphabet directive: {e}")))?;
                Ok(labels)
            }
            None => Ok(observed.into_iter().map(String::from).collect()),
        }
    };
    let outcomes = resolve(
        declared_outcomes,
        raw.iter().map(|r| r.2.as_str()).collect(),
    )?;
    let signals = resolve(declared_signals, raw.iter().map(|r| r.1.as_str()).collect())?;
    let (sig_col, out_col) = columns.expect("header seen");

    let mut records = Vec::with_capacity(raw.len());
    for (lineno, s, o) in &raw {
        let x = outcomes.iter().position(|l| l == o).ok_or_else(|| {
            parse_error(
                *lineno,
                out_col + 1,
                format!("outcome {o:?} not in declared alphabet"),
            )
        })?;
        let y = signals.iter().position(|l| l == s).ok_or_else(|| {
            parse_error(
                *lineno,
                sig_col + 1,
                format!("signal {s:?} not in declared alphabet"),
            )
        })?;
        records.push((x, y));
    }
    Ok(SampleSet {
        outcomes,
        signals,
        records,
    })
}

/// Reads a `label,q` quote file and orders it along `outcomes`.
///
/// Every outcome needs a quote and the quotes must sum to one within `1e-9`.
pub fn read_quotes<R: BufRead>(reader: R, outcomes: &[String]) -> Result<Distribution> {
    let mut header_seen = false;
    let mut pairs: Vec<(String, f64)> = Vec::new();
    let mut last_line = 0;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let line = line.map_err(|e| parse_error(lineno, 1, format!("unreadable line: {e}")))?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split(',').map(str::trim).collect();
        if !header_seen {
            if fields != ["label", "q"] {
                return Err(parse_error(lineno, 1, "quote header must be `label,q`"));
            }
            header_seen = true;
            continue;
        }
        if fields.len() != 2 {
            return Err(parse_error(
                lineno,
                1,
                format!("expected 2 fields, found {}", fields.len()),
            ));
        }
        let q: f64 = fields[1]
            .parse()
            .map_err(|_| parse_error(lineno, 2, format!("not a number: {:?}", fields[1])))?;
        if pairs.iter().any(|(l, _)| l == fields[0]) {
            return Err(parse_error(
                lineno,
                1,
                format!("duplicate quote for {:?}", fields[0]),
            ));
        }
        pairs.push((fields[0].to_string(), q));
    }
    if pairs.is_empty() {
        return Err(Error::EmptyInput {
            line: last_line.max(1),
        });
    }
    quotes_from_pairs(&pairs, outcomes)
}

/// Orders `(label, q)` pairs along `outcomes` and validates them as quotes.
pub fn quotes_from_pairs(pairs: &[(String, f64)], outcomes: &[String]) -> Result<Distribution> {
    if let Some((extra, _)) = pairs.iter().find(|(l, _)| !outcomes.contains(l)) {
        return Err(Error::UnknownLabel(extra.clone()));
    }
    let probs = outcomes
        .iter()
        .map(|o| {
            pairs
                .iter()
                .find(|(l, _)| l == o)
                .map(|&(_, q)| q)
                .ok_or_else(|| Error::LabelMismatch(format!("no quote for outcome {o:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::QuoteSumNotOne { sum });
    }
    Distribution::new(outcomes.to_vec(), probs)
}

fn joint_from_counts(
    outcomes: &[String],
    signals: &[String],
    counts: &[Vec<u64>],
    smoothing: f64,
) -> JointSystem {
    let n: u64 = counts.iter().flatten().sum();
    let denom = n as f64 + smoothing * (outcomes.len() * signals.len()) as f64;
    let cells = counts
        .iter()
        .map(|row| {
            row.iter()
                .map(|&c| (c as f64 + smoothing) / denom)
                .collect()
        })
        .collect();
    JointSystem::from_parts(outcomes.to_vec(), signals.to_vec(), cells)
}

/// Plug-in joint `(count(x, y) + s) / (N + s · |X| · |Y|)`.
pub fn estimate_joint(samples: &SampleSet, smoothing: f64) -> Result<JointSystem> {
    if !smoothing.is_finite() || smoothing < 0.0 {
        return Err(Error::DomainViolation {
            value: smoothing,
            domain: "smoothing >= 0".into(),
        });
    }
    Ok(joint_from_counts(
        &samples.outcomes,
        &samples.signals,
        &samples.counts(),
        smoothing,
    ))
}

/// Knobs for [`estimate_efficiency`].
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationConfig {
    pub smoothing: f64,
    pub resamples: usize,
    pub seed: u64,
    pub info_set: InfoSetLabel,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        Self {
            smoothing: DEFAULT_SMOOTHING,
            resamples: DEFAULT_RESAMPLES,
            seed: DEFAULT_SEED,
            info_set: InfoSetLabel::Strong,
        }
    }
}

/// Point estimate and 95% bootstrap interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    #[serde(flatten)]
    pub point: EfficiencyReport,
    pub ci_low: f64,
    pub ci_high: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eff_q_ci_low: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eff_q_ci_high: Option<f64>,
    pub n_samples: usize,
    pub smoothing: f64,
    pub resamples: usize,
    pub seed: u64,
    /// Resamples whose outcome entropy collapsed to zero; left out of the interval.
    pub degenerate_resamples: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Draws cell counts for `n` records with replacement from the empirical
/// cell frequencies, via a chain of conditional binomials.
fn resample_counts<R: Rng>(rng: &mut R, counts: &[u64], n: u64) -> Vec<u64> {
    let last = counts.len() - 1;
    let mut out = Vec::with_capacity(counts.len());
    let mut left_n = n;
    let mut left_mass = n;
    for (i, &c) in counts.iter().enumerate() {
        if i == last {
            out.push(left_n);
            break;
        }
        let k = if left_n == 0 || c == 0 {
            0
        } else if c >= left_mass {
            left_n
        } else {
            Binomial::new(left_n, c as f64 / left_mass as f64)
                .expect("probability in [0, 1]")
                .sample(rng)
        };
        out.push(k);
        left_n -= k;
        left_mass -= c;
    }
    out
}

/// Type-7 (linear interpolation) quantile of sorted data.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn percentile_interval(mut values: Vec<f64>, point: f64) -> (f64, f64) {
    if values.is_empty() {
        return (point, point);
    }
    values.sort_by(f64::total_cmp);
    let lo = quantile(&values, 0.025).min(point).clamp(0.0, 1.0);
    let hi = quantile(&values, 0.975).max(point).clamp(0.0, 1.0);
    (lo, hi)
}

/// Estimates `Eff` (and `Eff_q` when `quotes` is given) from samples.
pub fn estimate_efficiency(
    samples: &SampleSet,
    quotes: Option<&Distribution>,
    config: &EstimationConfig,
) -> Result<EstimateReport> {
    if config.resamples < MIN_RESAMPLES {
        return Err(Error::TooFewResamples {
            requested: config.resamples,
            minimum: MIN_RESAMPLES,
        });
    }
    let joint = estimate_joint(samples, config.smoothing)?;
    let measure = |joint: &JointSystem| match quotes {
        Some(q) => efficiency_with_quotes(joint, q, config.info_set.clone()),
        None => efficiency(joint, config.info_set.clone()),
    };
    let h_x_zero =
        |joint: &JointSystem| crate::measures::entropy(&joint.outcome_marginal()).value() <= 0.0;
    if h_x_zero(&joint) {
        return Err(Error::DegenerateSystem(
            "estimated outcome distribution has zero entropy".into(),
        ));
    }
    let point = measure(&joint)?;
    let point_eff = point.eff.expect("H(X) > 0");

    let counts = samples.counts();
    let flat: Vec<u64> = counts.iter().flatten().copied().collect();
    let n = samples.len() as u64;
    let width = samples.signals.len();
    let draws: Vec<Option<(f64, Option<f64>)>> = (0..config.resamples as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(config.seed, b);
            let resampled = resample_counts(&mut rng, &flat, n);
            let rows: Vec<Vec<u64>> = resampled.chunks(width).map(<[u64]>::to_vec).collect();
            let j = joint_from_counts(&samples.outcomes, &samples.signals, &rows, config.smoothing);
            if h_x_zero(&j) {
                return Ok(None);
            }
            let r = measure(&j)?;
            Ok(Some((r.eff.expect("H(X) > 0"), r.eff_q)))
        })
        .collect::<Result<_>>()?;

    let valid: Vec<(f64, Option<f64>)> = draws.iter().flatten().copied().collect();
    let degenerate_resamples = draws.len() - valid.len();
    let (ci_low, ci_high) = percentile_interval(valid.iter().map(|v| v.0).collect(), point_eff);
    let (eff_q_ci_low, eff_q_ci_high) = match point.eff_q {
        Some(eq) => {
            let (lo, hi) = percentile_interval(valid.iter().filter_map(|v| v.1).collect(), eq);
            (Some(lo), Some(hi))
        }
        None => (None, None),
    };

    let cells = samples.outcomes.len() * samples.signals.len();
    let mut warnings = Vec::new();
    if samples.len() < 10 * cells {
        warnings.push(format!(
            "only {} samples for {} cells; plug-in entropies are biased low, so efficiency may be underestimated",
            samples.len(),
            cells
        ));
    }

    Ok(EstimateReport {
        point,
        ci_low,
        ci_high,
        eff_q_ci_low,
        eff_q_ci_high,
        n_samples: samples.len(),
        smoothing: config.smoothing,
        resamples: config.resamples,
        seed: config.seed,
        degenerate_resamples,
        warnings,
    })
}
