//! The quick verification suites, as `bellchain selftest` runs them.

use bellchain::verify::{quick_suites, DEFAULT_SEED};

fn main() {
    let reports = quick_suites(DEFAULT_SEED);
    for r in &reports {
        println!("{} {:<30} {:.2} s", if r.passed() { "PASS" } else { "FAIL" }, r.name, r.seconds);
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    std::process::exit(if failed == 0 { 0 } else { 1 });
}
