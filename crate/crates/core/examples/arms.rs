//! Arm event probabilities, exponent fits and quasimultiplicativity.

use critfpp::experiments::{arm_exponent, arm_probability, quasimultiplicativity_check, Sampling};
use critfpp::percolation::ArmSpec;

fn main() {
    let one = ArmSpec::one_arm();
    let e = arm_probability(&one, 0, 1, 0.5, 20_000, 1).unwrap();
    println!("one arm from the origin to distance 1: {:.4} +- {:.4} (exact 63/64)", e.estimate, e.stderr);

    for spec in [ArmSpec::one_arm(), ArmSpec::polychromatic_two(), ArmSpec::half_plane_one_arm()] {
        let fit = arm_exponent(&spec, 0, &[4, 8, 16, 32], 0.5, Sampling::fixed(4000), 2).unwrap();
        println!("{spec}: exponent {:.3} +- {:.3}", fit.exponent, fit.fit.slope_stderr);
        for pt in &fit.points {
            println!("    n = {:3}: {:.4}", pt.n, pt.estimate.estimate);
        }
    }

    let spec: ArmSpec = "poly2".parse().unwrap();
    for row in quasimultiplicativity_check(&spec, &[(1, 4, 16), (2, 8, 32)], 0.5, 4000, 3).unwrap() {
        println!("pi({},{}) / pi({},{}) pi({},{}) = {:.3} +- {:.3}", row.m, row.n, row.m, row.r, row.r, row.n, row.ratio, row.ratio_stderr);
    }
}
