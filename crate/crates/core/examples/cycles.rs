// The m-cycles of Q anchored at 2^m + 1.

use quadcollatz::theorems::lemma1_cycle;

fn main() {
    for m in 1..=6 {
        let c = lemma1_cycle(m).expect("cycle walks back to its anchor");
        let shown: Vec<String> = c.elements.iter().map(|e| e.to_string()).collect();
        println!("m={m} [{}]", shown.join(", "));
    }
}
