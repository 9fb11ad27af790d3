//! Vertices that can be added to a cheap crossing of `S(n)`.

use std::sync::Arc;

use critfpp::experiments::vn_survey;
use critfpp::fpp::{count_contributing_vertices, s_rect};
use critfpp::labels::{LabelField, LabelSource};
use critfpp::lattice::VertexIndex;

fn main() {
    let idx = Arc::new(VertexIndex::new(s_rect(3).unwrap()).unwrap());
    let labels = LabelField::generate(idx, &LabelSource::new(4));
    for p in [0.52, 0.55, 0.6, 0.7] {
        println!("p = {p}: #V_3 = {}", count_contributing_vertices(&labels, 3, p, 4).unwrap());
    }
    let e = vn_survey(2, 0.6, 2, 100, 5).unwrap();
    println!("E #V_2(0.6) = {:.3} +- {:.3}", e.estimate, e.stderr);
}
