// Classify a few starting values under every map.

use quadcollatz::{run, Budget, MapKind, Nat};

fn main() {
    let budget = Budget::new(10_000, 4096).unwrap();
    for v in [7u64, 11, 20, 27] {
        for kind in MapKind::ALL {
            let (outcome, trace) = run(kind, &Nat::from(v), budget, false);
            println!("{:>2} {:<2} {:?} peak_bits={}", v, kind.tag(), outcome, trace.peak_bits);
        }
    }
}
