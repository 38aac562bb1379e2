//! Cross-checks against independent routes: reference values computed
//! offline at 30 significant digits, and a chain-rule entropy oracle that
//! never touches the crate's own entropy code.

use infoeff::coin::{coin_joint, CoinGameParams};
use infoeff::{
    bayes_posterior, conditional_entropy, efficiency, Channel, Distribution, InfoSetLabel,
    JointSystem,
};

/// Binary entropy at 0.9 (equivalently 0.1).
const HB_09: f64 = 0.468_995_593_589_281_221_253_589_330_383;
/// 0.5 log2(1/0.05) + 0.5 log2(1/0.95).
const H_Q_005: f64 = 2.197_964_338_165_569_600_973_559_718_04;

/// `-Σ v log2 v` over all entries, written without the crate.
fn plain_entropy(values: impl Iterator<Item = f64>) -> f64 {
    values
        .filter(|&v| v > 0.0)
        .map(|v| -v * v.ln() / std::f64::consts::LN_2)
        .sum()
}

/// `H(X|Y) = H(X, Y) - H(Y)`.
fn chain_rule_conditional(cells: &[Vec<f64>]) -> f64 {
    let ny = cells[0].len();
    let h_joint = plain_entropy(cells.iter().flatten().copied());
    let h_y = plain_entropy((0..ny).map(|y| cells.iter().map(|r| r[y]).sum::<f64>()));
    h_joint - h_y
}

#[test]
fn conditional_entropy_matches_chain_rule() {
    let cases: [(f64, f64); 6] = [
        (0.5, 0.9),
        (0.5, 0.5),
        (0.1, 0.7),
        (0.9, 0.99),
        (0.37, 0.2),
        (0.5, 1.0),
    ];
    for (p, a) in cases {
        let game = coin_joint(&CoinGameParams::new(p, a, 0.5).unwrap()).unwrap();
        let ours = conditional_entropy(&game.joint).value();
        let oracle = chain_rule_conditional(game.joint.cells());
        assert!(
            (ours - oracle).abs() < 1e-12,
            "p={p} a={a}: {ours} vs {oracle}"
        );
    }

    let cells = vec![
        vec![0.1, 0.05, 0.05],
        vec![0.2, 0.0, 0.1],
        vec![0.0, 0.3, 0.2],
    ];
    let joint = JointSystem::from_cells(["a", "b", "c"], ["u", "v", "w"], cells.clone()).unwrap();
    assert!((conditional_entropy(&joint).value() - chain_rule_conditional(&cells)).abs() < 1e-12);
}

#[test]
fn fair_coin_accuracy_09_reference_values() {
    let game = coin_joint(&CoinGameParams::new(0.5, 0.9, 0.5).unwrap()).unwrap();
    let oracle = chain_rule_conditional(game.joint.cells());
    assert!((oracle - HB_09).abs() < 1e-14);
    let r = efficiency(&game.joint, InfoSetLabel::Strong).unwrap();
    assert!((r.eff.unwrap() - HB_09).abs() < 1e-14);
    assert!((r.g_max.value() - (1.0 - HB_09)).abs() < 1e-14);
}

#[test]
fn posterior_matches_enumeration() {
    let prior = Distribution::new(["h", "t"], vec![0.9, 0.1]).unwrap();
    let ch = Channel::new(["h", "t"], ["h", "t"], vec![vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
    let joint = JointSystem::from_prior_channel(&prior, &ch).unwrap();
    for (y, label) in ["h", "t"].into_iter().enumerate() {
        let column: Vec<f64> = joint.cells().iter().map(|r| r[y]).collect();
        let total: f64 = column.iter().sum();
        let post = bayes_posterior(&prior, &ch, label).unwrap();
        for (p, c) in post.probs().iter().zip(&column) {
            assert!((p - c / total).abs() < 1e-15);
        }
    }
    let post = bayes_posterior(&prior, &ch, "h").unwrap();
    assert!((post.probs()[0] - 0.987_804_878_048_780_5).abs() < 1e-15);
}

#[test]
fn unfair_quote_reference_value() {
    let p = Distribution::uniform(["h", "t"]).unwrap();
    let q = Distribution::new(["h", "t"], vec![0.05, 0.95]).unwrap();
    let direct = -0.5 * 0.05f64.log2() - 0.5 * 0.95f64.log2();
    assert!((direct - H_Q_005).abs() < 1e-14);
    assert!((infoeff::cross_entropy(&p, &q).unwrap().value() - H_Q_005).abs() < 1e-14);
}
