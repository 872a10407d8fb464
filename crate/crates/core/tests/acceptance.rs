use std::io::Write;
use std::time::Instant;

use addact_core::acceptance::criteria;

#[test]
fn acceptance() {
    let mut err = std::io::stderr();
    let mut failed = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let r = c.run();
        let status = if r.passed { "PASS" } else { "FAIL" };
        let line = format!("{status} {:>2} {:<15} {:>6} ms  {}\n", r.id, r.key, start.elapsed().as_millis(), r.detail);
        err.write_all(line.as_bytes()).unwrap();
        if !r.passed {
            failed.push(r.key);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
