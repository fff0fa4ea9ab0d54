// Why the engine uses big integers: f64 iteration of Q invents a cycle.

use quadcollatz::pitfall::{demonstrate, DEFAULT_SEED};

fn main() {
    let r = demonstrate(DEFAULT_SEED, 10_000, 4096);
    if let Some(rep) = &r.float_repeat {
        println!("f64: value {} repeats at step {} (period {})", rep.value, rep.step, rep.period());
    }
    if let (Some(step), Some(exact), Some(float)) = (r.divergence_step, &r.exact_at_divergence, r.float_at_divergence) {
        println!("diverges at step {step}: exact {exact}, f64 {float}");
    }
    println!("exact: {:?}, repeated: {}", r.exact_outcome, r.exact_repeat);
    println!("false cycle: {}", r.false_cycle());
}
