//! Self-duality of crossings and the crossing probability curve near 1/2.

use std::sync::Arc;

use critfpp::experiments::{crossing_curve, parallelogram};
use critfpp::labels::{LabelField, LabelSource};
use critfpp::lattice::VertexIndex;
use critfpp::percolation::{has_crossing, open_config, Color, Direction};

fn main() {
    let rect = parallelogram(16);
    let idx = Arc::new(VertexIndex::new(rect.clone()).unwrap());
    let src = LabelSource::new(7);
    for r in 0..5 {
        let labels = LabelField::generate(idx.clone(), &src.replica(r));
        let cfg = open_config(&labels, 0.5).unwrap();
        let open_lr = has_crossing(&cfg, &rect, Direction::LeftRight, Color::Open).unwrap();
        let closed_tb = has_crossing(&cfg, &rect, Direction::TopBottom, Color::Closed).unwrap();
        println!("replica {r}: open left-right {open_lr:5}, closed top-bottom {closed_tb:5}");
    }

    let ps = [0.44, 0.47, 0.5, 0.53, 0.56];
    for (p, e) in crossing_curve(&ps, &parallelogram(32), 2000, 1).unwrap() {
        println!("p = {p:.2}: P(crossing) = {:.3} +- {:.3}", e.estimate, e.stderr);
    }
}
