//! Entropy-based efficiency of discrete event-generating systems.
//!
//! A system produces outcomes `X`; an observer holds information `Y` about
//! each outcome before it happens. The efficiency
//!
//! ```text
//! Eff(X|Y) = H(X|Y) / H(X)
//! ```
//!
//! is 1 when the information is worthless and 0 when it pins the outcome
//! down completely. When payouts follow quote probabilities `q` rather than
//! the true probabilities, the denominator becomes the cross-entropy `H(q)`.
//! Both forms equal one minus the best achievable log-growth rate of a
//! bettor, relative to its maximum.
//!
//! | module | contents |
//! |--------|----------|
//! | [`probability`] | distributions, channels, joints, Bayes inversion |
//! | [`measures`] | entropy, conditional entropy, mutual information, cross-entropy |
//! | [`efficiency`] | efficiency reports, growth rates, information-set comparison |
//! | [`coin`] | the coin-toss game and its closed-form curves |
//! | [`kelly`] | Monte Carlo betting and a brute-force optimal-strategy search |
//! | [`estimation`] | efficiency from (signal, outcome) samples with bootstrap intervals |
//!
//! ```
//! use infoeff::coin::{coin_joint, CoinGameParams};
//! use infoeff::{efficiency_with_quotes, InfoSetLabel};
//!
//! // a fair coin, a tip that is right 90% of the time, fair quotes
//! let game = coin_joint(&CoinGameParams::new(0.5, 0.9, 0.5)?)?;
//! let report = efficiency_with_quotes(&game.joint, &game.quotes, InfoSetLabel::Strong)?;
//! assert!((report.eff.unwrap() - 0.469).abs() < 1e-3);
//! # Ok::<(), infoeff::Error>(())
//! ```

pub mod coin;
pub mod efficiency;
mod error;
pub mod estimation;
pub mod kelly;
pub mod measures;
pub mod probability;
pub mod rng;

pub use efficiency::{
    compare_info_sets, efficiency, efficiency_with_quotes, max_growth, max_growth_with_quotes,
    EfficiencyReport, InfoSetLabel,
};
pub use error::{Error, Result};
pub use measures::{
    binary_entropy, conditional_entropy, cross_entropy, entropy, mutual_information, quote_entropy,
    Bits,
};
pub use probability::{bayes_posterior, Channel, Distribution, JointSystem};
