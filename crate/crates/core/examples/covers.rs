// Transporting curves and cones through a finite cover.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::Arc;

use conelab::cone::Cone;
use conelab::covers::CoverDescriptor;
use conelab::lattice::{DivisorClass, SurfaceLattice};
use conelab::rational::format_rational;

pub fn run_example() -> String {
    let mut out = String::new();
    let y = SurfaceLattice::from_int_gram(&[&[-1, 1, 1], &[1, -1, 3], &[1, 3, -1]], &["E", "Gamma", "B2"]).unwrap();
    let y = y.clone().with_canonical(y.parse_class("-1/2*Gamma-1/2*B2").unwrap()).unwrap();
    let roster: Vec<(String, DivisorClass)> = [("E", "E"), ("Gamma", "Gamma"), ("B2", "B2"), ("B3", "Gamma+B2-E")]
        .iter()
        .map(|(l, c)| (l.to_string(), y.parse_class(c).unwrap()))
        .collect();
    let ramification: BTreeMap<String, u32> = ["Gamma", "B2", "B3"].iter().map(|l| (l.to_string(), 2)).collect();
    let a = y.parse_class("2Gamma+B2").unwrap();
    let y = Arc::new(y);
    // Degree 4, with 2K_X the pullback of 2Gamma+B2.
    let cov = CoverDescriptor::new(Arc::clone(&y), roster.clone(), 4, 2, a, ramification).unwrap();

    let x = cov.pullback_lattice().unwrap();
    writeln!(out, "K_X^2 = {}", format_rational(&x.canonical_square().unwrap())).unwrap();
    for (label, _) in &roster {
        let rec = cov.reduced_pullback(label).unwrap();
        writeln!(
            out,
            "{label:6} e = {}  C^2 = {:3}  p_a = {}",
            cov.ramification_index(label),
            format_rational(&rec.self_int),
            format_rational(&rec.genus)
        )
        .unwrap();
    }

    let eff = Cone::new(Arc::clone(&y), roster.iter().map(|(_, c)| c.clone()).collect()).unwrap();
    let nef = eff.dual_cone().unwrap();
    let (eff_x, nef_x) = cov.transport_cones(&eff, &nef).unwrap();
    writeln!(
        out,
        "upstairs: {} effective rays, {} nef rays",
        eff_x.extremal_rays().len(),
        nef_x.extremal_rays().len()
    )
    .unwrap();
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
