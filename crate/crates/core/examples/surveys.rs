//! Replicated surveys of the zero set of the dynamical passage time:
//! covering numbers, interval counts and the noise correlation.

use critfpp::distributions::Cdf;
use critfpp::experiments::{covering_survey, interval_count_statistic, noise_decay};

fn main() {
    let cdf = Cdf::bernoulli(0.5).unwrap();

    let cs = covering_survey(&cdf, 3, 0.0, 1.0, &[0.25, 0.125, 0.0625], 50, 1, 200).unwrap();
    println!("mean measure {:.4}, static probability {:.4}", cs.measure.estimate, cs.static_prob.estimate);
    for row in &cs.rows {
        println!("    eps {}: E N = {:.3}", row.eps, row.count.estimate);
    }

    let ic = interval_count_statistic(&cdf, 3, 32, &[0.1, 0.5, 1.0], 50, 2, 200).unwrap();
    println!("mean good-slot count {:.3}", ic.mean_count.estimate);
    for (c, e) in &ic.rows {
        println!("    P(count >= {c} E count) = {:.3}", e.estimate);
    }

    let ts: Vec<f64> = (2..=6).rev().map(|k| 2f64.powi(-k)).collect();
    let nd = noise_decay(&cdf, 4, &ts, 2000, 3).unwrap();
    for row in &nd.rows {
        println!("t = {:.4}: P(W_0, W_t) / P(W_0)^2 = {:.3}", row.t, row.ratio);
    }
}
