//! Classify weight distributions by their dyadic quantiles `a_k`.
//!
//! ```bash
//! cargo run --example classify
//! ```

use critfpp::distributions::{classify_regime, AkSequence, DistSpec};

fn main() {
    let sequences = [
        AkSequence::Constant { c: 1.0 },
        AkSequence::PowerLog { c: 1.0, beta: 1.0, gamma: 0.0 },
        AkSequence::PowerLog { c: 1.0, beta: 1.0, gamma: 1.0 },
        AkSequence::PowerLog { c: 1.0, beta: 1.0, gamma: 2.0 },
        AkSequence::Geometric { c: 1.0, r: 0.5 },
    ];
    for seq in &sequences {
        let report = classify_regime(0.5, seq);
        println!("{seq}: sum a_k {:?}, weighted sum {:?}, k a_k {:?}", report.sum_ak, report.sum_k78_ak, report.kak_behavior);
        for c in &report.conclusions {
            println!("    {:?}: {}", c.tag, c.statement);
        }
    }

    // distributions given as text carry their own sequence
    let spec: DistSpec = "zhang:2".parse().unwrap();
    let cdf = spec.build().unwrap();
    println!("\n{spec}: a_2..a_6 = {:?}", (2..=6).map(|k| cdf.ak(k)).collect::<Vec<_>>());
    let report = classify_regime(cdf.cdf(0.0), &spec.ak_sequence().unwrap());
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
}
