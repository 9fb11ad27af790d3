//! Correlation length off criticality and its near inverse `p_n`.

use critfpp::experiments::{correlation_length, pn_estimate};

fn main() {
    for p in [0.6, 0.55, 0.53] {
        let cl = correlation_length(p, 0.05, 128, 400, 1).unwrap();
        match cl.estimate {
            Some(l) => println!("L({p}) = {l} after {} box sizes", cl.evaluated.len()),
            None => println!("L({p}) unresolved up to 128"),
        }
    }
    for n in [8, 16, 32, 64] {
        let e = pn_estimate(n, 0.05, 1000, 2).unwrap();
        println!("p_{n} = {:.4} in [{:.4}, {:.4}]", e.p_hat, e.bracket.0, e.bracket.1);
    }
}
