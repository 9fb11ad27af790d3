//! Rate-one resampling dynamics: scan the point-to-box passage time over a
//! time window and measure the set of times where it vanishes.

use critfpp::distributions::Cdf;
use critfpp::dynamics::{covering_number, dimension_estimate, exceptional_set, scan_statistic, DynamicalField, PointToBox};
use critfpp::fpp::point_to_box;
use critfpp::labels::LabelSource;
use critfpp::lattice::Region;

fn main() {
    let cdf = Cdf::bernoulli(0.5).unwrap();
    let d = DynamicalField::generate(Region::Box { radius: 32 }, 1.0, cdf, LabelSource::new(3)).unwrap();
    println!("{} resampling events in Box(32) x [0, 1]", d.event_count());

    let mut stat = PointToBox::new(32).unwrap();
    let traj = scan_statistic(&d, &mut stat).unwrap();
    println!("trajectory: {} pieces, {} full recomputations, range [{}, {}]", traj.len(), stat.recomputes, traj.min(), traj.max());
    let t = 0.37;
    println!("at t = {t}: scanned {}, fresh {}", traj.value_at(t), point_to_box(&d.snapshot(t).unwrap(), 32).unwrap());

    let set = exceptional_set(&traj, 0.0);
    println!("zero set: {} intervals, measure {:.4}", set.intervals().len(), set.measure());
    if !set.is_empty() {
        let eps: Vec<f64> = (3..=9).map(|k| 2f64.powi(-k)).collect();
        for &e in &eps {
            println!("    N(eps = {e}) = {}", covering_number(&set, e, (0.0, 1.0)).unwrap());
        }
        println!("box-counting slope {:.3}", dimension_estimate(&set, &eps).unwrap().slope);
    }
}
