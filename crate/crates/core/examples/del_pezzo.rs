// Enumerating (-1)- and (-2)-classes and realizing a point configuration.

use std::fmt::Write;

use conelab::delpezzo::{build_blowup_lattice, enumerate_classes, realize, weak_dp_report, PointConfiguration};
use conelab::rational::format_rational;

pub fn run_example() -> String {
    let mut out = String::new();
    for r in 3..=8 {
        let bl = build_blowup_lattice(r).unwrap();
        let m1 = enumerate_classes(&bl, -1, -1).unwrap().len();
        let m2 = enumerate_classes(&bl, -2, 0).unwrap().len();
        writeln!(out, "r = {r}: {m1} (-1)-classes, {m2} (-2)-classes").unwrap();
    }

    // Five points with 1, 4, 5 on a line.
    let cfg = PointConfiguration {
        collinear: vec![vec![1, 4, 5]],
        ..PointConfiguration::general(5)
    };
    let real = realize(&cfg).unwrap();
    let lat = real.lattice.lattice();
    writeln!(out, "realized curves:").unwrap();
    for rec in &real.records {
        writeln!(out, "  {:5} {:22} C^2 = {}", rec.label, lat.render(&rec.class), format_rational(&rec.self_int)).unwrap();
    }
    let conic = real.lattice.class(2, &[1, 1, 1, 1, 1]);
    let ex = real.exclusion_for(&conic).unwrap();
    writeln!(
        out,
        "{} is excluded: it meets {} with product {}, residual {}",
        lat.render(&conic),
        ex.witness,
        format_rational(&ex.product),
        lat.render(&ex.residual)
    )
    .unwrap();
    writeln!(out, "{}", weak_dp_report(&real)).unwrap();
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
