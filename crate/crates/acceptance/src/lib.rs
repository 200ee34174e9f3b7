//! Helpers shared by the acceptance tests.

use std::io::Write;

/// Prints one `criterion N: PASS|FAIL` line straight to stderr, so that it
/// shows up even when the test harness captures output.
pub fn report(criterion: u32, title: &str, pass: bool, detail: &str) {
    let line = format!(
        "criterion {criterion} [{title}]: {} ({detail})\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}
