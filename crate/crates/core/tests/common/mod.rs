//! Independent oracles shared by the integration tests. None of these call
//! into the cone or enumeration code they are used to check.
#![allow(dead_code, clippy::needless_range_loop)]

use std::sync::Arc;

use conelab::lattice::{DivisorClass, SurfaceLattice};
use conelab::rational::{int, Rational};
use num_traits::{Signed, Zero};
use rand::Rng;

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    match m.len() {
        0 => int(1),
        1 => m[0][0].clone(),
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<Rational>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * cofactor_det(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum(),
    }
}

/// Classes `dH - Σ m_i E_i` with `d ∈ 0..=dmax`, `m_i ∈ mlo..=mhi`, given
/// square and canonical degree, found by exhaustive search. Coefficient
/// vectors are `[d, -m_1, …, -m_r]` to match the blow-up lattice basis.
pub fn brute_force_classes(r: usize, self_int: i64, k_deg: i64, dmax: i64, mlo: i64, mhi: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut m = vec![mlo; r];
    loop {
        let sum: i64 = m.iter().sum();
        let sq: i64 = m.iter().map(|x| x * x).sum();
        for d in 0..=dmax {
            if d * d - sq == self_int && -3 * d + sum == k_deg {
                let mut v = vec![d];
                v.extend(m.iter().map(|x| -x));
                out.push(v);
            }
        }
        // Odometer increment.
        let mut i = 0;
        while i < r && m[i] == mhi {
            m[i] = mlo;
            i += 1;
        }
        if i == r {
            break;
        }
        m[i] += 1;
    }
    out.sort();
    out
}

/// Value of `b1 - 1/(b2 - 1/(... - 1/bk))`, folded from the right. A string
/// with every `b_i >= 2` is determined by its value, so this is enough to
/// pin down a Hirzebruch-Jung expansion.
pub fn hj_value(b: &[u32]) -> Rational {
    let mut acc: Option<Rational> = None;
    for &x in b.iter().rev() {
        let x = int(i64::from(x));
        acc = Some(match acc {
            None => x,
            Some(a) => x - a.recip(),
        });
    }
    acc.expect("nonempty string")
}

pub fn euclidean(rank: usize) -> Arc<SurfaceLattice> {
    let gram = (0..rank)
        .map(|i| (0..rank).map(|j| int(i64::from(i == j))).collect())
        .collect();
    let names = (1..=rank).map(|i| format!("e{i}")).collect();
    Arc::new(SurfaceLattice::new(gram, names).unwrap())
}

/// Random symmetric form with small entries, redrawn until nondegenerate.
/// Usually indefinite.
pub fn random_lattice<R: Rng>(rng: &mut R, rank: usize) -> Arc<SurfaceLattice> {
    loop {
        let mut g = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in i..rank {
                let x = if i == j { rng.gen_range(-3..=3) } else { rng.gen_range(-1..=1) };
                g[i][j] = x;
                g[j][i] = x;
            }
        }
        let gram: Vec<Vec<Rational>> = g.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        if cofactor_det(&gram).is_zero() {
            continue;
        }
        let names = (1..=rank).map(|i| format!("e{i}")).collect();
        return Arc::new(SurfaceLattice::new(gram, names).unwrap());
    }
}

/// Generators spanning the space, with some redundant ones mixed in, all
/// inside a pointed cone (first coordinate positive).
pub fn random_generators<R: Rng>(rng: &mut R, rank: usize, count: usize) -> Vec<DivisorClass> {
    loop {
        let gens: Vec<DivisorClass> = (0..count)
            .map(|_| {
                let mut v = vec![rng.gen_range(1..=3)];
                v.extend((1..rank).map(|_| rng.gen_range(-2..=2)));
                DivisorClass::from_ints(&v)
            })
            .collect();
        if span_rank(&gens) == rank {
            return gens;
        }
    }
}

fn span_rank(v: &[DivisorClass]) -> usize {
    let rows: Vec<Vec<Rational>> = v.iter().map(|c| c.coeffs().to_vec()).collect();
    conelab::linalg::rank(&rows)
}

/// `v` spans an extremal ray of the full-dimensional pointed cone with
/// facet normals `facets` iff the facets vanishing on it cut out a line.
pub fn is_extremal(lat: &SurfaceLattice, facets: &[DivisorClass], v: &DivisorClass) -> bool {
    let tight: Vec<DivisorClass> = facets
        .iter()
        .filter(|f| lat.pairing(f, v).unwrap().is_zero())
        .cloned()
        .collect();
    span_rank(&tight) == lat.rank() - 1
}

/// `v` satisfies every facet inequality.
pub fn inside(lat: &SurfaceLattice, facets: &[DivisorClass], v: &DivisorClass) -> bool {
    facets.iter().all(|f| !lat.pairing(f, v).unwrap().is_negative())
}
