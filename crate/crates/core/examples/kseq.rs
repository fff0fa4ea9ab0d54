// Stage decomposition of a Q orbit and the growth bound it certifies.

use quadcollatz::orbit::{growth_certificate, ksequence};
use quadcollatz::{Budget, MapKind, Nat};

fn main() {
    let seq = ksequence(MapKind::Q, &Nat::from(7u32), Budget::default()).unwrap();
    for s in seq.stages.iter().take(5) {
        println!("p={} m={} k={} value={} low={}", s.stage, s.m, s.k, s.value, s.low_point);
    }
    println!("{} stages, end {:?}", seq.stages.len(), seq.end);

    for p in 1..=3 {
        let stages = &seq.stages[..p];
        let cert = growth_certificate(MapKind::Q, stages, &stages[0].value).unwrap();
        println!("after {p} stages: low point {} >= {}", cert.low_point, cert.bound);
    }
}
