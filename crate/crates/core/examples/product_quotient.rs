// Hirzebruch-Jung strings and a product-quotient lattice built from fiber
// data.

use std::fmt::Write;

use conelab::pqsurf::{build_pq_lattice, hj_expansion, polizzi_fiber_selfint, CrossValue, Fiber, FiberIncidence, SingularPoint};
use conelab::rational::{format_rational, int, Q};

fn fiber(label: &str, genus: i64, points: &[&str]) -> Fiber {
    Fiber {
        label: label.into(),
        genus,
        multiplicity: None,
        points: points.iter().map(|p| p.to_string()).collect(),
    }
}

pub fn run_example() -> String {
    let mut out = String::new();
    for (n, k) in [(2, 1), (5, 2), (7, 3)] {
        let s = hj_expansion(n, k).unwrap();
        writeln!(out, "1/{n}(1,{k}): {:?} evaluates to {}", s.coefficients, format_rational(&s.evaluate())).unwrap();
    }
    let f2 = polizzi_fiber_selfint(&[(2, 1), (2, 1)]).unwrap();
    writeln!(out, "fiber through two nodes: F^2 = {}", format_rational(&f2)).unwrap();

    let data = FiberIncidence {
        points: ["E1", "E2"]
            .iter()
            .map(|l| SingularPoint { label: l.to_string(), n: 2, k: 1 })
            .collect(),
        f_fibers: vec![fiber("F1", 1, &["E1", "E2"])],
        g_fibers: vec![fiber("G1", 2, &["E1", "E2"])],
        cross: vec![CrossValue {
            f: "F1".into(),
            g: "G1".into(),
            value: Q(int(0)),
        }],
        basis: None,
    };
    let pq = build_pq_lattice(&data).unwrap();
    let lat = &pq.lattice;
    let k = lat.canonical().unwrap();
    writeln!(out, "K = {}, K^2 = {}", lat.render(k), format_rational(&lat.canonical_square().unwrap())).unwrap();
    let classes: Vec<_> = pq.curves.iter().map(|c| c.class.clone()).collect();
    writeln!(out, "Gram determinant = {}", format_rational(&lat.gram_determinant(&classes).unwrap())).unwrap();
    for c in &pq.curves {
        writeln!(
            out,
            "{}: C^2 = {}, p_a = {}",
            c.label,
            format_rational(&lat.self_intersection(&c.class).unwrap()),
            format_rational(&lat.arithmetic_genus(&c.class).unwrap())
        )
        .unwrap();
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
