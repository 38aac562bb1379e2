//! Efficiency of a system relative to an information set, and the growth
//! rates available to an optimal bettor.
//!
//! For outcomes `X` observed through signals `Y`:
//!
//! | quantity | definition |
//! |----------|------------|
//! | `eff`    | `H(X|Y) / H(X)` |
//! | `g_max`  | `H(X) - H(X|Y)` |
//! | `eff_q`  | `H(X|Y) / H(q)` |
//! | `g_max_q`| `H(q) - H(X|Y)` |
//!
//! where `H(q)` is the cross-entropy of the quote probabilities `q` against
//! the true outcome probabilities. The loss in efficiency splits into a
//! predictability gap `H(X) - H(X|Y)` and a mispricing gap `H(q) - H(X)`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measures::{
    clamp_non_negative, conditional_entropy, cross_entropy, entropy, mutual_information, Bits,
};
use crate::probability::{Distribution, JointSystem, SUM_TOLERANCE};

/// Which body of knowledge the signal represents. Reporting metadata only.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum InfoSetLabel {
    /// Past prices of the system itself.
    Weak,
    /// Publicly available information.
    SemiStrong,
    /// All information, public or not.
    #[default]
    Strong,
    Custom(String),
}

impl fmt::Display for InfoSetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfoSetLabel::Weak => f.write_str("weak"),
            InfoSetLabel::SemiStrong => f.write_str("semi_strong"),
            InfoSetLabel::Strong => f.write_str("strong"),
            InfoSetLabel::Custom(name) => f.write_str(name),
        }
    }
}

impl FromStr for InfoSetLabel {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "weak" => InfoSetLabel::Weak,
            "semi_strong" | "semi-strong" | "semi" => InfoSetLabel::SemiStrong,
            "strong" => InfoSetLabel::Strong,
            other => InfoSetLabel::Custom(other.to_string()),
        })
    }
}

impl Serialize for InfoSetLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Entropy terms, efficiencies and growth rates of one system.
///
/// Quote-dependent fields are `None` when no quotes were supplied. `eff` is
/// `None` only when quotes were supplied for a system whose outcome is
/// certain, where `H(X|Y) / H(X)` is `0 / 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyReport {
    pub h_x: Bits,
    pub h_x_given_y: Bits,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_q: Option<Bits>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eff_q: Option<f64>,
    pub g_max: Bits,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_max_q: Option<Bits>,
    pub predictability_gap: Bits,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mispricing_gap: Option<Bits>,
    pub info_set: InfoSetLabel,
}

/// `H(X)` and `H(X|Y)`, with `H(X|Y)` pinned to at most `H(X)` once the
/// difference has passed the mutual-information consistency check.
fn entropy_pair(joint: &JointSystem) -> Result<(Bits, Bits)> {
    let h_x = entropy(&joint.outcome_marginal());
    mutual_information(joint)?;
    let h_x_given_y = conditional_entropy(joint);
    let h_x_given_y = if h_x_given_y > h_x { h_x } else { h_x_given_y };
    Ok((h_x, h_x_given_y))
}

/// `Eff(X|Y) = H(X|Y) / H(X)` and the growth `H(X) - H(X|Y)` under fair quotes.
///
/// ```
/// use infoeff::{efficiency, Channel, Distribution, InfoSetLabel, JointSystem};
///
/// let fair = Distribution::uniform(["h", "t"]).unwrap();
/// let perfect = Channel::identity(["h", "t"]).unwrap();
/// let joint = JointSystem::from_prior_channel(&fair, &perfect).unwrap();
/// let report = efficiency(&joint, InfoSetLabel::Strong).unwrap();
/// assert_eq!(report.eff, Some(0.0));
/// assert_eq!(report.g_max.value(), 1.0);
/// ```
pub fn efficiency(joint: &JointSystem, info_set: InfoSetLabel) -> Result<EfficiencyReport> {
    let (h_x, h_x_given_y) = entropy_pair(joint)?;
    if h_x.value() <= 0.0 {
        return Err(Error::DegenerateSystem(
            "outcome entropy H(X) is zero, efficiency H(X|Y)/H(X) is undefined".into(),
        ));
    }
    let g_max = h_x - h_x_given_y;
    Ok(EfficiencyReport {
        h_x,
        h_x_given_y,
        h_q: None,
        eff: Some(h_x_given_y / h_x),
        eff_q: None,
        g_max,
        g_max_q: None,
        predictability_gap: g_max,
        mispricing_gap: None,
        info_set,
    })
}

fn check_quotes(joint: &JointSystem, quotes: &Distribution) -> Result<()> {
    if quotes.labels() != joint.outcome_labels() {
        return Err(Error::LabelMismatch(format!(
            "quotes {:?} vs outcomes {:?}",
            quotes.labels(),
            joint.outcome_labels()
        )));
    }
    let sum: f64 = quotes.probs().iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::QuoteSumNotOne { sum });
    }
    Ok(())
}

/// Full report including the quote-adjusted terms `H(q)`, `Eff_q` and `G_max,q`.
pub fn efficiency_with_quotes(
    joint: &JointSystem,
    quotes: &Distribution,
    info_set: InfoSetLabel,
) -> Result<EfficiencyReport> {
    check_quotes(joint, quotes)?;
    let (h_x, h_x_given_y) = entropy_pair(joint)?;
    let h_q = cross_entropy(&joint.outcome_marginal(), quotes)?;
    if h_q.value() <= 0.0 {
        return Err(Error::DegenerateSystem(
            "quote entropy H(q) is zero, efficiency H(X|Y)/H(q) is undefined".into(),
        ));
    }
    let mispricing_gap = clamp_non_negative(h_q - h_x, "mispricing gap H(q) - H(X)")?;
    let h_q = if h_q < h_x { h_x } else { h_q };
    let g_max = h_x - h_x_given_y;
    let eff = (h_x.value() > 0.0).then(|| h_x_given_y / h_x);
    Ok(EfficiencyReport {
        h_x,
        h_x_given_y,
        h_q: Some(h_q),
        eff,
        eff_q: Some(h_x_given_y / h_q),
        g_max,
        g_max_q: Some(h_q - h_x_given_y),
        predictability_gap: g_max,
        mispricing_gap: Some(mispricing_gap),
        info_set,
    })
}

/// Reports for several information sets about the same outcomes, in the given order.
pub fn compare_info_sets(joints: &[(InfoSetLabel, JointSystem)]) -> Result<Vec<EfficiencyReport>> {
    if let Some((first_label, first)) = joints.first() {
        let reference = first.outcome_marginal();
        for (label, joint) in &joints[1..] {
            let marginal = joint.outcome_marginal();
            let same = marginal.labels() == reference.labels()
                && marginal
                    .probs()
                    .iter()
                    .zip(reference.probs())
                    .all(|(a, b)| (a - b).abs() <= SUM_TOLERANCE);
            if !same {
                return Err(Error::MarginalMismatch {
                    first: first_label.to_string(),
                    other: label.to_string(),
                });
            }
        }
    }
    joints
        .iter()
        .map(|(label, joint)| efficiency(joint, label.clone()))
        .collect()
}

/// Maximal growth rate under fair quotes, `H(X) - H(X|Y)` bits per round.
pub fn max_growth(joint: &JointSystem) -> Result<Bits> {
    mutual_information(joint)
}

/// Maximal growth rate under quotes `q`, `H(q) - H(X|Y)` bits per round.
pub fn max_growth_with_quotes(joint: &JointSystem, quotes: &Distribution) -> Result<Bits> {
    check_quotes(joint, quotes)?;
    let (_, h_x_given_y) = entropy_pair(joint)?;
    let h_q = cross_entropy(&joint.outcome_marginal(), quotes)?;
    Ok(h_q - h_x_given_y)
}
