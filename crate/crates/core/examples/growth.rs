//! Mean point-to-box passage time against the partial sums of `a_k`.

use critfpp::distributions::{from_ak, AkSequence, DEFAULT_K_MAX};
use critfpp::experiments::{growth_curve, tail_profile};

fn main() {
    let radii = [8, 16, 32, 64, 128];
    for seq in [AkSequence::PowerLog { c: 1.0, beta: 1.0, gamma: 0.0 }, AkSequence::Geometric { c: 1.0, r: 0.5 }] {
        let cdf = from_ak(&seq, DEFAULT_K_MAX).unwrap();
        println!("{seq}");
        for row in growth_curve(&cdf, &radii, 100, 5).unwrap() {
            println!("    n = {:4}: mean {:.4} +- {:.4}, sum a_k {:.4}, ratio {:.3}", row.n, row.mean.estimate, row.mean.stderr, row.ak_sum, row.ratio);
        }
    }

    let cdf = from_ak(&AkSequence::Constant { c: 1.0 }, DEFAULT_K_MAX).unwrap();
    let tp = tail_profile(&cdf, 3, 0.75, 11.0 / 6.0, 100, 6).unwrap();
    println!("tail profile at n = 3 (scale {}):", tp.scale);
    for row in &tp.rows {
        println!("    u = {:.2}: annulus {:.3}, rectangle {:.3}, reference {:.3}", row.u, row.annulus, row.rect, row.reference);
    }
}
