// Dual cones by double description, checked against the annihilator scan,
// and a membership certificate.

use std::fmt::Write;
use std::sync::Arc;

use conelab::cone::{annihilator_facet_scan, Cone, Membership};
use conelab::lattice::SurfaceLattice;
use conelab::rational::format_rational;

pub fn run_example() -> String {
    let mut out = String::new();
    // Blow-up of the plane in three points.
    let lat = Arc::new(
        SurfaceLattice::from_int_gram(
            &[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]],
            &["H", "E1", "E2", "E3"],
        )
        .unwrap(),
    );
    let curves = ["E1", "E2", "E3", "H-E1-E2", "H-E1-E3", "H-E2-E3"]
        .iter()
        .map(|c| lat.parse_class(c).unwrap())
        .collect();
    let eff = Cone::new(Arc::clone(&lat), curves).unwrap();
    let nef = eff.dual_cone().unwrap();
    writeln!(out, "Nef has {} extremal rays:", nef.extremal_rays().len()).unwrap();
    for ray in nef.extremal_rays() {
        writeln!(out, "  {}", lat.render(ray)).unwrap();
    }

    let scan = annihilator_facet_scan(&lat, eff.generators()).unwrap();
    let agree = scan.len() == nef.extremal_rays().len()
        && scan.iter().all(|s| nef.extremal_rays().iter().any(|r| r.same_ray(s)));
    writeln!(out, "annihilator scan agrees: {agree}").unwrap();
    writeln!(out, "dual of Nef is Eff: {}", nef.dual_cone().unwrap().cone_equal(&eff).unwrap()).unwrap();

    let anti = lat.parse_class("3H-E1-E2-E3").unwrap();
    match eff.contains(&anti).unwrap() {
        Membership::Inside(comb) => {
            let terms: Vec<String> = comb.rays.iter().map(|(r, t)| format!("{}*({})", format_rational(t), lat.render(r))).collect();
            writeln!(out, "-K = {}", terms.join(" + ")).unwrap();
        }
        Membership::Outside(_) => writeln!(out, "-K is not effective").unwrap(),
    }
    let outside = lat.parse_class("-H").unwrap();
    if let Membership::Outside(sep) = eff.contains(&outside).unwrap() {
        let w = sep.class.expect("nondegenerate form");
        writeln!(out, "-H is separated by {}", lat.render(&w)).unwrap();
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
