//! Multi-scale covering variable built from crossings of resampled-late
//! vertices, with the scale-dependent thresholds estimated first.

use critfpp::experiments::{hausdorff_cover_survey, pn_estimate, stream};

fn main() {
    let l: i32 = 4;
    let k = 3;
    let p_hat: Vec<f64> = (1..=k).map(|j| pn_estimate(l.pow(j).max(2), 0.05, 400, stream(9, j as u64).seed()).unwrap().p_hat).collect();
    println!("thresholds {p_hat:?}");
    let s = hausdorff_cover_survey(l, &p_hat, 0.5, 200, 9, 200).unwrap();
    for row in &s.rows {
        println!("k = {}: q {:.4}, h {:.4}, P(B_k) {:.4}, ratio {:.3}", row.k, row.q, row.h, row.p_b.estimate, row.ratio);
    }
    println!("mean covering variable {:.4}", s.wbar.estimate);
}
