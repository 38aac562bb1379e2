//! The coin-toss betting game: one coin, a symmetric noisy tip about the
//! result, and quotes derived from an anticipated tail probability.
//!
//! Outcomes and signals are both labelled `"h"` and `"t"`, in that order.
//! The closed forms below are written out directly rather than routed
//! through [`crate::efficiency`], so they double as a cross-check on the
//! general pipeline.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::probability::{Channel, Distribution, JointSystem};

pub const HEAD: &str = "h";
pub const TAIL: &str = "t";

/// Default number of grid points for [`sweep`].
pub const DEFAULT_GRID_POINTS: usize = 1001;

fn domain_error(value: f64, domain: &str) -> Error {
    Error::DomainViolation {
        value,
        domain: domain.to_string(),
    }
}

/// Parameters of the coin game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinGameParams {
    /// `p(x = t)`, in `[0, 1]`.
    pub p_tail: f64,
    /// `p(y = h | x = h) = p(y = t | x = t)`, in `[0, 1]`.
    pub accuracy: f64,
    /// Anticipated `q(x = t)` setting the quotes, in `(0, 1)`.
    pub q_tail: f64,
}

impl CoinGameParams {
    pub fn new(p_tail: f64, accuracy: f64, q_tail: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_tail) {
            return Err(domain_error(p_tail, "p_tail in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&accuracy) {
            return Err(domain_error(accuracy, "accuracy in [0, 1]"));
        }
        if !(q_tail > 0.0 && q_tail < 1.0) {
            return Err(domain_error(q_tail, "q_tail in (0, 1)"));
        }
        Ok(Self {
            p_tail,
            accuracy,
            q_tail,
        })
    }

    /// Payout multipliers `(α_h, α_t)` with `α_t = 1 / q_t` and `α_h = α_t / (α_t - 1)`.
    pub fn quote_multipliers(&self) -> (f64, f64) {
        let alpha_t = 1.0 / self.q_tail;
        (alpha_t / (alpha_t - 1.0), alpha_t)
    }
}

/// Everything the general machinery needs to analyse one coin game.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinSystem {
    pub prior: Distribution,
    pub channel: Channel,
    pub joint: JointSystem,
    pub quotes: Distribution,
}

/// Builds prior, tip channel, joint and quote distribution for `params`.
///
/// ```
/// use infoeff::coin::{coin_joint, CoinGameParams};
///
/// let game = coin_joint(&CoinGameParams::new(0.5, 0.9, 0.5).unwrap()).unwrap();
/// let cells = game.joint.cells();
/// assert_eq!(cells[0][0], 0.45);
/// assert!((cells[0][1] - 0.05).abs() < 1e-15);
/// ```
pub fn coin_joint(params: &CoinGameParams) -> Result<CoinSystem> {
    let labels = [HEAD, TAIL];
    let prior = Distribution::new(labels, vec![1.0 - params.p_tail, params.p_tail])?;
    let a = params.accuracy;
    let channel = Channel::new(labels, labels, vec![vec![a, 1.0 - a], vec![1.0 - a, a]])?;
    let joint = JointSystem::from_prior_channel(&prior, &channel)?;
    let quotes = Distribution::new(labels, vec![1.0 - params.q_tail, params.q_tail])?;
    Ok(CoinSystem {
        prior,
        channel,
        joint,
        quotes,
    })
}

fn xlog2x(v: f64) -> f64 {
    if v > 0.0 {
        v * v.log2()
    } else {
        0.0
    }
}

/// Efficiency of a fair coin with fair quotes as a function of tip accuracy:
/// `(a - 1) log2(1 - a) - a log2 a`.
pub fn closed_form_efficiency_fair(accuracy: f64) -> f64 {
    0.0 - xlog2x(1.0 - accuracy) - xlog2x(accuracy)
}

/// Entropy of the coin as a function of `p_tail`:
/// `(p - 1) log2(1 - p) - p log2 p`.
pub fn closed_form_entropy(p_tail: f64) -> f64 {
    0.0 - xlog2x(1.0 - p_tail) - xlog2x(p_tail)
}

/// Efficiency of a fair, unpredictable coin quoted with `q_tail`:
/// `-1 / (0.5 log2 q + 0.5 log2(1 - q))`, for `q_tail` in `(0, 1)`.
pub fn closed_form_efficiency_unfair_quotes(q_tail: f64) -> f64 {
    -1.0 / (0.5 * q_tail.log2() + 0.5 * (1.0 - q_tail).log2())
}

/// Cross-entropy of quotes `q_tail` against a fair coin:
/// `-0.5 log2 q - 0.5 log2(1 - q)`, for `q_tail` in `(0, 1)`.
pub fn closed_form_quote_entropy(q_tail: f64) -> f64 {
    -0.5 * q_tail.log2() - 0.5 * (1.0 - q_tail).log2()
}

/// The four coin-game curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curve {
    /// Fair coin, fair quotes: efficiency against tip accuracy.
    EffVsAccuracy,
    /// Entropy of the coin against `p_tail`.
    EntropyVsPtail,
    /// Fair unpredictable coin: efficiency against the quote probability.
    EffVsQ,
    /// Fair coin: quote entropy against the quote probability.
    HqVsQ,
}

impl Curve {
    pub const ALL: [Curve; 4] = [
        Curve::EffVsAccuracy,
        Curve::EntropyVsPtail,
        Curve::EffVsQ,
        Curve::HqVsQ,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Curve::EffVsAccuracy => "eff_vs_accuracy",
            Curve::EntropyVsPtail => "entropy_vs_ptail",
            Curve::EffVsQ => "eff_vs_q",
            Curve::HqVsQ => "hq_vs_q",
        }
    }

    /// Horizontal and vertical axis titles.
    pub fn axis_labels(self) -> (&'static str, &'static str) {
        match self {
            Curve::EffVsAccuracy => ("p(y|x)", "Eff(X|Y)"),
            Curve::EntropyVsPtail => ("p(x='t')", "H(X)"),
            Curve::EffVsQ => ("q(x)", "Eff_q(X|Y)"),
            Curve::HqVsQ => ("q(x)", "H(q)"),
        }
    }

    /// Whether the parameter endpoints 0 and 1 are admissible.
    fn closed_domain(self) -> bool {
        matches!(self, Curve::EffVsAccuracy | Curve::EntropyVsPtail)
    }

    pub fn eval(self, param: f64) -> f64 {
        match self {
            Curve::EffVsAccuracy => closed_form_efficiency_fair(param),
            Curve::EntropyVsPtail => closed_form_entropy(param),
            Curve::EffVsQ => closed_form_efficiency_unfair_quotes(param),
            Curve::HqVsQ => closed_form_quote_entropy(param),
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Curve {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Curve::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| format!("unknown curve {s:?}"))
    }
}

/// Evenly spaced parameter values from `start` to `end`, optionally without
/// the two endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    /// Number of points including both endpoints.
    pub points: usize,
    pub exclude_endpoints: bool,
}

impl Grid {
    pub fn new(start: f64, end: f64, points: usize) -> Self {
        Self {
            start,
            end,
            points,
            exclude_endpoints: false,
        }
    }

    /// The [`DEFAULT_GRID_POINTS`]-point grid on `[0, 1]`. For curves whose
    /// parameter must stay inside `(0, 1)` the two endpoints are dropped.
    pub fn default_for(curve: Curve) -> Self {
        Self::unit(curve, DEFAULT_GRID_POINTS)
    }

    /// A `points`-point grid on `[0, 1]`, endpoints dropped for open domains.
    pub fn unit(curve: Curve, points: usize) -> Self {
        Self {
            exclude_endpoints: !curve.closed_domain(),
            ..Self::new(0.0, 1.0, points)
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = self.points - 1;
        let skip = usize::from(self.exclude_endpoints);
        (skip..self.points - skip)
            .map(|i| {
                if i == last {
                    self.end
                } else {
                    // keeps 0..1 grids on exact decimal values like 0.3
                    self.start + (self.end - self.start) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// Samples `curve` on `grid`.
///
/// ```
/// use infoeff::coin::{sweep, Curve, Grid};
///
/// let table = sweep(Curve::EffVsAccuracy, &Grid::new(0.0, 1.0, 5)).unwrap();
/// assert_eq!(table[2], (0.5, 1.0));
/// ```
pub fn sweep(curve: Curve, grid: &Grid) -> Result<Vec<(f64, f64)>> {
    if grid.points == 0 {
        return Err(domain_error(0.0, "at least one grid point"));
    }
    if grid.start.is_nan() || grid.end.is_nan() || grid.start > grid.end {
        return Err(domain_error(grid.start, "grid start not after grid end"));
    }
    let values = grid.values();
    if values.is_empty() {
        return Err(domain_error(
            grid.points as f64,
            "a grid with interior points",
        ));
    }
    let (domain, inside): (&str, fn(f64) -> bool) = if curve.closed_domain() {
        ("[0, 1]", |x| (0.0..=1.0).contains(&x))
    } else {
        ("(0, 1)", |x| x > 0.0 && x < 1.0)
    };
    if let Some(&bad) = values.iter().find(|&&x| !inside(x)) {
        return Err(domain_error(bad, domain));
    }
    Ok(values.into_iter().map(|x| (x, curve.eval(x))).collect())
}

/// Writes a sweep table as CSV with header `param,value`.
pub fn table_to_csv(table: &[(f64, f64)]) -> String {
    let mut out = String::from("param,value\n");
    for (x, y) in table {
        out.push_str(&format!("{x},{y}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath, 30 digits
    const HB_09: f64 = 0.468_995_593_589_281_2;
    const HB_055: f64 = 0.992_774_453_987_808_3;
    const HB_025: f64 = 0.811_278_124_459_132_9;
    const H_Q_005: f64 = 2.197_964_338_165_569_6;
    const INV_H_Q_0005: f64 = 0.261_400_739_737_415_4;

    #[test]
    fn params_validate() {
        assert!(CoinGameParams::new(0.5, 0.9, 0.5).is_ok());
        assert!(CoinGameParams::new(1.0, 0.0, 0.5).is_ok());
        assert!(CoinGameParams::new(1.1, 0.9, 0.5).is_err());
        assert!(CoinGameParams::new(0.5, -0.1, 0.5).is_err());
        assert!(CoinGameParams::new(0.5, 0.9, 0.0).is_err());
        assert!(CoinGameParams::new(0.5, 0.9, 1.0).is_err());
        assert!(CoinGameParams::new(f64::NAN, 0.9, 0.5).is_err());
    }

    #[test]
    fn quote_multipliers_pay_more_than_stake() {
        let p = CoinGameParams::new(0.5, 0.5, 0.05).unwrap();
        let (ah, at) = p.quote_multipliers();
        assert!((at - 20.0).abs() < 1e-12);
        assert!((ah - 20.0 / 19.0).abs() < 1e-12);
        assert!((1.0 / ah - 0.95).abs() < 1e-12);
    }

    #[test]
    fn coin_joint_examples() {
        let g = coin_joint(&CoinGameParams::new(0.5, 0.9, 0.5).unwrap()).unwrap();
        let expect = [[0.45, 0.05], [0.05, 0.45]];
        for (row, want) in g.joint.cells().iter().zip(expect) {
            for (c, w) in row.iter().zip(want) {
                assert!((c - w).abs() < 1e-15);
            }
        }
        assert_eq!(g.quotes.probs(), &[0.5, 0.5]);

        let g = coin_joint(&CoinGameParams::new(0.5, 0.5, 0.5).unwrap()).unwrap();
        assert!(g.joint.cells().iter().flatten().all(|&c| c == 0.25));

        let g = coin_joint(&CoinGameParams::new(0.9, 0.5, 0.9).unwrap()).unwrap();
        let m = g.joint.outcome_marginal();
        assert!((m.probs()[0] - 0.1).abs() < 1e-15);
        assert!((m.probs()[1] - 0.9).abs() < 1e-15);
        for row in g.joint.cells() {
            assert_eq!(row[0], row[1]);
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_efficiency_fair(0.5), 1.0);
        assert_eq!(closed_form_efficiency_fair(1.0), 0.0);
        assert_eq!(closed_form_efficiency_fair(0.0), 0.0);
        assert!((closed_form_efficiency_fair(0.55) - HB_055).abs() < 1e-15);

        assert_eq!(closed_form_entropy(0.5), 1.0);
        assert_eq!(closed_form_entropy(1.0), 0.0);
        assert!((closed_form_entropy(0.9) - HB_09).abs() < 1e-15);

        assert_eq!(closed_form_efficiency_unfair_quotes(0.5), 1.0);
        assert!((closed_form_efficiency_unfair_quotes(0.05) - 1.0 / H_Q_005).abs() < 1e-15);
        assert!((closed_form_efficiency_unfair_quotes(0.005) - INV_H_Q_0005).abs() < 1e-15);

        assert_eq!(closed_form_quote_entropy(0.5), 1.0);
        assert!((closed_form_quote_entropy(0.05) - H_Q_005).abs() < 1e-14);
        assert!((closed_form_quote_entropy(0.95) - H_Q_005).abs() < 1e-14);
    }

    #[test]
    fn sweep_examples() {
        let t = sweep(Curve::EffVsAccuracy, &Grid::new(0.0, 1.0, 5)).unwrap();
        let expect = [
            (0.0, 0.0),
            (0.25, HB_025),
            (0.5, 1.0),
            (0.75, HB_025),
            (1.0, 0.0),
        ];
        for ((x, y), (ex, ey)) in t.iter().zip(expect) {
            assert_eq!(*x, ex);
            assert!((y - ey).abs() < 1e-15);
        }

        let t = sweep(
            Curve::EntropyVsPtail,
            &Grid::default_for(Curve::EntropyVsPtail),
        )
        .unwrap();
        assert_eq!(t.len(), 1001);
        assert_eq!(t[0], (0.0, 0.0));
        assert_eq!(t[1000], (1.0, 0.0));

        let t = sweep(Curve::EffVsQ, &Grid::default_for(Curve::EffVsQ)).unwrap();
        assert_eq!(t.len(), 999);
        assert_eq!(t[499], (0.5, 1.0));
        assert_eq!(t[0].0, 0.001);
    }

    #[test]
    fn sweep_rejects_out_of_domain() {
        assert!(matches!(
            sweep(Curve::EffVsQ, &Grid::new(0.0, 0.5, 11)),
            Err(Error::DomainViolation { .. })
        ));
        assert!(matches!(
            sweep(Curve::HqVsQ, &Grid::new(0.5, 1.0, 11)),
            Err(Error::DomainViolation { .. })
        ));
        assert!(sweep(Curve::EffVsAccuracy, &Grid::new(-0.1, 1.0, 11)).is_err());
        assert!(sweep(Curve::EffVsAccuracy, &Grid::new(0.8, 0.2, 11)).is_err());
        assert!(sweep(Curve::EffVsAccuracy, &Grid::new(0.0, 1.0, 0)).is_err());
    }

    #[test]
    fn csv_layout() {
        let csv = table_to_csv(&[(0.0, 0.0), (0.5, 1.0)]);
        assert_eq!(csv, "param,value\n0,0\n0.5,1\n");
    }

    #[test]
    fn curve_ids_parse() {
        for c in Curve::ALL {
            assert_eq!(c.id().parse::<Curve>().unwrap(), c);
        }
        assert!("nope".parse::<Curve>().is_err());
    }
}
