mod common;

use std::sync::Arc;

use conelab::cone::{annihilator_facet_scan, Cone, Membership};
use conelab::delpezzo::{build_blowup_lattice, enumerate_classes};
use conelab::lattice::DivisorClass;
use conelab::pqsurf::{hj_expansion, polizzi_fiber_selfint};
use conelab::rational::{dot, frac, int, to_i64, Rational};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;

fn class(v: &[i64]) -> DivisorClass {
    DivisorClass::from_ints(v)
}

fn vec_of(rank: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-4i64..=4, rank)
}

proptest! {
    #[test]
    fn pairing_is_symmetric_and_bilinear(
        seed in any::<u64>(),
        a in vec_of(4), b in vec_of(4), c in vec_of(4),
        s in -3i64..=3, t in -3i64..=3,
    ) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let lat = common::random_lattice(&mut rng, 4);
        let (a, b, c) = (class(&a), class(&b), class(&c));
        prop_assert_eq!(lat.pairing(&a, &b).unwrap(), lat.pairing(&b, &a).unwrap());
        let combo = &a.scale(&int(s)) + &b.scale(&int(t));
        let lhs = lat.pairing(&combo, &c).unwrap();
        let rhs = int(s) * lat.pairing(&a, &c).unwrap() + int(t) * lat.pairing(&b, &c).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gram_determinant_matches_cofactor_expansion(seed in any::<u64>(), rank in 1usize..=5) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let lat = common::random_lattice(&mut rng, rank);
        let basis: Vec<DivisorClass> = (0..rank).map(|i| DivisorClass::unit(rank, i)).collect();
        prop_assert_eq!(lat.gram_determinant(&basis).unwrap(), common::cofactor_det(lat.gram()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Double description and the annihilator scan agree, the double dual is
    /// the cone, and the kept rays are exactly the extremal generators.
    #[test]
    fn dual_routes_agree(seed in any::<u64>(), rank in 2usize..=5, extra in 1usize..=4) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let lat = common::random_lattice(&mut rng, rank);
        let gens = common::random_generators(&mut rng, rank, rank + extra);
        let cone = Cone::new(Arc::clone(&lat), gens.clone()).unwrap();
        let dual = cone.dual_cone().unwrap();
        let scan = annihilator_facet_scan(&lat, &gens).unwrap();
        prop_assert!(dual.lineality().is_empty());
        prop_assert_eq!(scan.len(), dual.extremal_rays().len());
        for s in &scan {
            prop_assert!(dual.extremal_rays().iter().any(|r| r.same_ray(s)));
        }
        prop_assert!(dual.dual_cone().unwrap().cone_equal(&cone).unwrap());
        for g in &gens {
            let kept = cone.extremal_rays().iter().any(|r| r.same_ray(g));
            prop_assert_eq!(kept, common::is_extremal(&lat, &scan, g));
        }
    }

    /// Certificates are re-checked here without the library's own verifier.
    #[test]
    fn membership_certificates_hold(seed in any::<u64>(), rank in 2usize..=4, v in vec_of(4)) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let lat = common::random_lattice(&mut rng, rank);
        let gens = common::random_generators(&mut rng, rank, rank + 2);
        let cone = Cone::new(Arc::clone(&lat), gens.clone()).unwrap();
        let v = class(&v[..rank]);
        let facets = annihilator_facet_scan(&lat, &gens).unwrap();
        match cone.contains(&v).unwrap() {
            Membership::Inside(comb) => {
                prop_assert!(common::inside(&lat, &facets, &v));
                let mut acc = DivisorClass::zero(rank);
                for (r, t) in &comb.rays {
                    prop_assert!(!t.is_negative());
                    acc = &acc + &r.scale(t);
                }
                prop_assert_eq!(acc, v);
            }
            Membership::Outside(sep) => {
                prop_assert!(!common::inside(&lat, &facets, &v));
                prop_assert!(dot(&sep.functional, v.coeffs()).is_negative());
                for g in &gens {
                    prop_assert!(!dot(&sep.functional, g.coeffs()).is_negative());
                }
            }
        }
    }
}

#[test]
fn hj_strings_round_trip_and_reverse_under_inverse() {
    for n in 2..=50u32 {
        for k in (1..n).filter(|k| n.gcd(k) == 1) {
            let s = hj_expansion(n, k).unwrap();
            assert!(s.coefficients.iter().all(|&b| b >= 2));
            assert_eq!(common::hj_value(&s.coefficients), frac(n as i64, k as i64));
            let inv = (1..n).find(|x| (x * k) % n == 1).unwrap();
            let mut rev = hj_expansion(n, inv).unwrap().coefficients;
            rev.reverse();
            assert_eq!(s.coefficients, rev, "{n}/{k}");
        }
    }
    assert!(hj_expansion(4, 2).is_err());
    assert!(hj_expansion(3, 3).is_err());
}

proptest! {
    #[test]
    fn fiber_selfint_is_minus_sum(points in proptest::collection::vec((2u32..=12, 1u32..12), 0..5)) {
        let points: Vec<(u32, u32)> = points
            .into_iter()
            .map(|(n, k)| (n, 1 + (k - 1) % (n - 1)))
            .filter(|&(n, k)| n.gcd(&k) == 1)
            .collect();
        let expected: Rational = points.iter().map(|&(n, k)| -frac(k as i64, n as i64)).sum();
        prop_assert_eq!(polizzi_fiber_selfint(&points).unwrap(), expected);
    }
}

fn as_ints(c: &DivisorClass) -> Vec<i64> {
    c.coeffs().iter().map(|x| to_i64(x).unwrap()).collect()
}

#[test]
fn enumeration_is_closed_under_point_permutations() {
    for r in 2..=7 {
        let bl = build_blowup_lattice(r).unwrap();
        for (s, k) in [(-1, -1), (-2, 0)] {
            let set: std::collections::BTreeSet<Vec<i64>> =
                enumerate_classes(&bl, s, k).unwrap().iter().map(as_ints).collect();
            for c in &set {
                // Transposition of the first two points and a cyclic shift.
                let mut t = c.clone();
                t.swap(1, 2);
                assert!(set.contains(&t), "r={r} {c:?}");
                let mut cyc = c.clone();
                cyc[1..].rotate_left(1);
                assert!(set.contains(&cyc), "r={r} {c:?}");
            }
        }
    }
}

/// Every (-2)-class is one of four shapes: `E_i - E_j`, `H - E_i - E_j - E_k`,
/// `2H - six E`, `3H - 2E_i - seven E`.
#[test]
fn minus_two_classes_have_the_known_shapes() {
    for r in 2..=8 {
        let bl = build_blowup_lattice(r).unwrap();
        for c in enumerate_classes(&bl, -2, 0).unwrap() {
            let v = as_ints(&c);
            let mut m: Vec<i64> = v[1..].iter().map(|x| -x).filter(|x| *x != 0).collect();
            m.sort();
            let ok = match v[0] {
                0 => m == [-1, 1],
                1 => m == [1, 1, 1],
                2 => m == [1; 6],
                3 => m == [1, 1, 1, 1, 1, 1, 1, 2],
                _ => false,
            };
            assert!(ok, "r={r} {v:?}");
        }
    }
}

#[test]
fn minus_one_classes_are_rational_curves() {
    for r in 1..=8 {
        let bl = build_blowup_lattice(r).unwrap();
        let lat = bl.lattice();
        for c in enumerate_classes(&bl, -1, -1).unwrap() {
            assert!(lat.arithmetic_genus(&c).unwrap().is_zero());
        }
    }
}

#[test]
fn brute_force_agrees_with_enumeration_for_minus_two() {
    for r in 3..=6 {
        let bl = build_blowup_lattice(r).unwrap();
        let mut got: Vec<Vec<i64>> = enumerate_classes(&bl, -2, 0).unwrap().iter().map(as_ints).collect();
        got.sort();
        assert_eq!(got, common::brute_force_classes(r, -2, 0, 5, -2, 3), "r={r}");
    }
}
