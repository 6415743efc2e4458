//! Runs every example and checks the facts it prints.

mod lattice_example {
    include!("../examples/lattice.rs");
}
mod cones_example {
    include!("../examples/cones.rs");
}
mod del_pezzo_example {
    include!("../examples/del_pezzo.rs");
}
mod covers_example {
    include!("../examples/covers.rs");
}
mod product_quotient_example {
    include!("../examples/product_quotient.rs");
}
mod catalog_example {
    include!("../examples/catalog.rs");
}

#[test]
fn lattice() {
    let out = lattice_example::run_example();
    assert!(out.contains("E.B3 = 3"));
    assert!(out.contains("p_a(B3) = 0"));
    assert!(out.contains("det(E, Gamma, B3) = 16"));
}

#[test]
fn cones() {
    let out = cones_example::run_example();
    assert!(out.contains("Nef has 5 extremal rays"));
    assert!(out.contains("annihilator scan agrees: true"));
    assert!(out.contains("dual of Nef is Eff: true"));
    assert!(out.contains("-H is separated by"));
}

#[test]
fn del_pezzo() {
    let out = del_pezzo_example::run_example();
    for line in ["r = 3: 6 (-1)-classes", "r = 6: 27 (-1)-classes", "r = 7: 56", "r = 8: 240"] {
        assert!(out.contains(line), "{line}");
    }
    assert!(out.contains("2H-E1-E2-E3-E4-E5 is excluded: it meets L145 with product -1, residual H-E2-E3"));
}

#[test]
fn covers() {
    let out = covers_example::run_example();
    assert!(out.contains("K_X^2 = 7"));
    assert!(out.contains("E      e = 1  C^2 = -4   p_a = 2"));
    assert!(out.contains("upstairs: 4 effective rays, 4 nef rays"));
}

#[test]
fn product_quotient() {
    let out = product_quotient_example::run_example();
    assert!(out.contains("1/5(1,2): [3, 2] evaluates to 5/2"));
    assert!(out.contains("F^2 = -1"));
    assert!(out.contains("K = 2E1+2E2+3F1+G1, K^2 = 6"));
    assert!(out.contains("Gram determinant = -4"));
}

#[test]
fn catalog() {
    let out = catalog_example::run_example();
    assert_eq!(out.matches("pass: true").count(), 13);
    assert!(out.contains("6(-1,1), 6(-2,0), 4(-4,0)"));
}
