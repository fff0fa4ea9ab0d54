// Scan a range under Q and S, writing JSON lines to stdout.

use std::io::stdout;

use quadcollatz::scan::{scan_range, RecordFormat, RecordWriter};
use quadcollatz::{Budget, MapKind, Nat};

fn main() -> std::io::Result<()> {
    for kind in [MapKind::Q, MapKind::S] {
        let mut w = RecordWriter::new(stdout().lock(), RecordFormat::Jsonl);
        let summary = scan_range(kind, &Nat::from(1u32), &Nat::from(12u32), Budget::default(), |r| w.write(r))?;
        drop(w.finish()?);
        println!("# {}: {summary}", kind.tag());
    }
    Ok(())
}
