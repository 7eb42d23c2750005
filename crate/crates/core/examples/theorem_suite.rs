//! Runs the property suite on a handful of random instances.

use involab::suite::theorem_suite;

fn main() -> involab::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let report = theorem_suite(seed, 8)?;
    for i in &report.instances {
        println!("{} {:?} dim S {} {}", &i.digest[..12], i.family, i.dim_s, if i.passed { "ok" } else { "FAILED" });
        for finding in &i.findings {
            println!("  finding: {finding}");
        }
    }
    println!("{} checks, {} failures, {} findings", report.checks, report.failures, report.findings);
    Ok(())
}
