//! Shannon quantities in bits.
//!
//! Every logarithm here is base 2 and `0 · log 0` is taken as 0.

use std::fmt;
use std::ops::{Add, Div, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::probability::{Distribution, JointSystem};

/// Rounding slack tolerated before a quantity that must be non-negative is
/// treated as a genuine inconsistency.
pub const NEGATIVE_SLACK: f64 = 1e-12;

/// An amount of information, measured in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize)]
#[serde(transparent)]
pub struct Bits(pub f64);

impl Bits {
    pub const ZERO: Bits = Bits(0.0);

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)?;
        f.write_str(" bits")
    }
}

impl Add for Bits {
    type Output = Bits;
    fn add(self, rhs: Bits) -> Bits {
        Bits(self.0 + rhs.0)
    }
}

impl Sub for Bits {
    type Output = Bits;
    fn sub(self, rhs: Bits) -> Bits {
        Bits(self.0 - rhs.0)
    }
}

/// A ratio of two information amounts is dimensionless.
impl Div for Bits {
    type Output = f64;
    fn div(self, rhs: Bits) -> f64 {
        self.0 / rhs.0
    }
}

/// `-Σ_{p>0} p · log2 q`; entropy and cross-entropy share this kernel so that
/// `cross_entropy(p, p)` and `entropy(p)` agree bit for bit.
fn neg_expected_log2(p: &[f64], q: &[f64]) -> f64 {
    let s: f64 = p
        .iter()
        .zip(q)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| pi * qi.log2())
        .sum();
    // turns -0.0 into 0.0
    0.0 - s
}

/// Binary entropy `H_b(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |v: f64| if v > 0.0 { v * v.log2() } else { 0.0 };
    0.0 - term(p) - term(1.0 - p)
}

/// `H(X) = -Σ p(x) log2 p(x)`.
///
/// ```
/// use infoeff::{entropy, Distribution};
///
/// let fair = Distribution::uniform(["h", "t"]).unwrap();
/// assert_eq!(entropy(&fair).value(), 1.0);
/// ```
pub fn entropy(dist: &Distribution) -> Bits {
    Bits(neg_expected_log2(dist.probs(), dist.probs()))
}

/// `H(X|Y) = -Σ_y p(y) Σ_x p(x|y) log2 p(x|y)`, averaged over signals.
/// Signals with zero probability contribute nothing.
pub fn conditional_entropy(joint: &JointSystem) -> Bits {
    let cells = joint.cells();
    let mut total = 0.0;
    for y in 0..joint.signal_labels().len() {
        let p_y: f64 = cells.iter().map(|row| row[y]).sum();
        if p_y <= 0.0 {
            continue;
        }
        for row in cells {
            let c = row[y];
            if c > 0.0 {
                total -= c * (c / p_y).log2();
            }
        }
    }
    Bits(total + 0.0)
}

/// `M(X, Y) = H(X) - H(X|Y)`.
///
/// Negative rounding noise down to `-1e-12` is clamped to zero; anything more
/// negative is reported as [`Error::InternalConsistency`].
pub fn mutual_information(joint: &JointSystem) -> Result<Bits> {
    let h_x = entropy(&joint.outcome_marginal());
    let h_x_given_y = conditional_entropy(joint);
    clamp_non_negative(h_x - h_x_given_y, "mutual information")
}

pub(crate) fn clamp_non_negative(value: Bits, what: &str) -> Result<Bits> {
    if value.0 < -NEGATIVE_SLACK {
        return Err(Error::InternalConsistency(format!(
            "{what} is {} (below -{NEGATIVE_SLACK})",
            value.0
        )));
    }
    Ok(Bits(value.0.max(0.0)))
}

/// `H(q) = -Σ p(x) log2 q(x)`: the expected log-cost of quoting `q` when the
/// outcomes follow `p`.
pub fn cross_entropy(p: &Distribution, q: &Distribution) -> Result<Bits> {
    p.require_same_labels(q)?;
    for ((label, &pi), &qi) in p.labels().iter().zip(p.probs()).zip(q.probs()) {
        if pi > 0.0 && qi <= 0.0 {
            return Err(Error::UnsupportedOutcome(label.clone()));
        }
    }
    Ok(Bits(neg_expected_log2(p.probs(), q.probs())))
}

/// `H(α) = Σ p(x) log2 α_x` for payout multipliers `α`, aligned with the
/// labels of `p`. With `α_x = 1 / q(x)` this is the cross-entropy.
pub fn quote_entropy(p: &Distribution, alpha: &[f64]) -> Result<Bits> {
    if alpha.len() != p.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: alpha.len(),
        });
    }
    let mut total = 0.0;
    for ((label, &pi), &a) in p.labels().iter().zip(p.probs()).zip(alpha) {
        if pi > 0.0 {
            if a.is_nan() || a <= 0.0 {
                return Err(Error::NonpositiveQuote {
                    label: label.clone(),
                    value: a,
                });
            }
            total += pi * a.log2();
        }
    }
    Ok(Bits(total))
}
