//! Point-to-box passage times, cheapest circuits and rectangle crossings on
//! one sampled environment.

use critfpp::distributions::{from_ak, AkSequence, DEFAULT_K_MAX};
use critfpp::fpp::{min_circuit_time, passage_time, point_to_box, rect_crossing_time, tn_parts, CrossingRect, WeightField};
use critfpp::labels::LabelSource;
use critfpp::lattice::{box_ring, Region, Vertex};

fn main() {
    // atom at zero of mass 1/2, positive weights a_k = 1/k just above it
    let cdf = from_ak(&AkSequence::PowerLog { c: 1.0, beta: 1.0, gamma: 0.0 }, DEFAULT_K_MAX).unwrap();
    let field = WeightField::generate(Region::Box { radius: 64 }, &cdf, &LabelSource::new(5)).unwrap();

    for n in [4, 8, 16, 32, 64] {
        println!("T(0, boundary of B({n})) = {}", point_to_box(&field, n).unwrap());
    }

    let to_ring = passage_time(&field, &[Vertex::ORIGIN], &box_ring(20), &Region::Box { radius: 20 }, true).unwrap();
    println!("geodesic to the ring of radius 20 uses {} vertices", to_ring.witness.unwrap().len());

    let circuit = min_circuit_time(&field, 8, 16, true).unwrap();
    println!("cheapest circuit in Ann(8, 16): {} over {} vertices", circuit.value, circuit.witness.unwrap().len());

    let cross = rect_crossing_time(&field, 3, CrossingRect::R, false).unwrap();
    println!("cheapest left-right crossing of R(3): {}", cross.value);

    let parts = tn_parts(&field, 3, false).unwrap();
    println!("T_3 = {} (circuit {}, crossing {})", parts.total(), parts.circuit.value, parts.crossing.value);
}
