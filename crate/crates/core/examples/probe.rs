// Budgeted probes from 2^m - 1. A probe reports evidence, never a proof.

use quadcollatz::theorems::{mersenne_seed, probe_conjecture};
use quadcollatz::{Budget, MapKind};

fn main() {
    for m in 3..=8 {
        let r = probe_conjecture(MapKind::Q, &mersenne_seed(m), Budget::default()).unwrap();
        let bound = r.certified_growth_bound.map_or("none".to_string(), |b| b.to_string());
        println!(
            "start={} stages={} bound={} peak_bits={} verdict={}",
            r.start, r.stages_with_k_gt_1, bound, r.peak_bits, r.verdict
        );
    }
}
