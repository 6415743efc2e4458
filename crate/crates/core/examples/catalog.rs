// Verifying the bundled catalogue and printing the negative-curve table.

use std::fmt::Write;

use conelab::catalog::{bundled_catalog, negative_curve_table, render_table, verify_entry, Status};

pub fn run_example() -> String {
    let mut out = String::new();
    let reports: Vec<_> = bundled_catalog().iter().map(verify_entry).collect();
    for r in &reports {
        let flagged: Vec<&str> = r
            .lines
            .iter()
            .filter(|l| l.status == Status::ExpectedDiscrepancy)
            .map(|l| l.name.as_str())
            .collect();
        writeln!(out, "{:20} {} checks, pass: {}, flagged: {:?}", r.id, r.lines.len(), r.passed(), flagged).unwrap();
    }
    let rows = negative_curve_table(&reports).unwrap();
    out.push_str(&render_table(&rows));
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
