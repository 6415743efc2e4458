// Intersection form, canonical class and adjunction on a rank-3 lattice.

use std::fmt::Write;

use conelab::lattice::SurfaceLattice;
use conelab::rational::format_rational;

pub fn run_example() -> String {
    let mut out = String::new();
    let lat = SurfaceLattice::from_int_gram(&[&[-1, 1, 1], &[1, -1, 3], &[1, 3, -1]], &["E", "Gamma", "B2"]).unwrap();
    let k = lat.parse_class("-1/2*Gamma-1/2*B2").unwrap();
    let lat = lat.with_canonical(k).unwrap();

    // A fourth curve that is not a basis element.
    let b3 = lat.parse_class("Gamma+B2-E").unwrap();
    let e = lat.basis_class("E").unwrap();
    writeln!(out, "B3 = {}", lat.render(&b3)).unwrap();
    writeln!(out, "E.B3 = {}", format_rational(&lat.pairing(&e, &b3).unwrap())).unwrap();
    writeln!(out, "B3^2 = {}", format_rational(&lat.self_intersection(&b3).unwrap())).unwrap();
    writeln!(out, "p_a(B3) = {}", format_rational(&lat.arithmetic_genus(&b3).unwrap())).unwrap();
    writeln!(out, "K^2 = {}", format_rational(&lat.canonical_square().unwrap())).unwrap();
    let gamma = lat.basis_class("Gamma").unwrap();
    writeln!(out, "det(E, Gamma, B3) = {}", format_rational(&lat.gram_determinant(&[e, gamma, b3]).unwrap())).unwrap();
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
