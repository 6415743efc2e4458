//! Double description method: converts `{x : hᵢ·x ≥ 0}` into a minimal
//! frame (extreme rays plus a lineality basis).

use fixedbitset::FixedBitSet;
use num_traits::{Signed, Zero};

use crate::linalg;
use crate::rational::{dot, primitive, primitive_unsigned, Rational};

/// Minimal generators of a polyhedral cone: the cone equals
/// `span(lineality) + cone(rays)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Frame {
    pub rays: Vec<Vec<Rational>>,
    pub lineality: Vec<Vec<Rational>>,
}

struct Ray {
    v: Vec<Rational>,
    zero: FixedBitSet,
}

fn axpy(v: &mut [Rational], t: &Rational, l: &[Rational]) {
    for (x, y) in v.iter_mut().zip(l) {
        *x -= t * y;
    }
}

/// Minimal frame of `{x ∈ ℚ^dim : row·x ≥ 0 for every row}`.
pub(crate) fn solve_inequalities(rows: &[Vec<Rational>], dim: usize) -> Frame {
    let m = rows.len();
    let mut lineality: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut e = vec![Rational::zero(); dim];
            e[i] = Rational::from_integer(1.into());
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, h) in rows.iter().enumerate() {
        if h.iter().all(Zero::is_zero) {
            for r in &mut rays {
                r.zero.insert(k);
            }
            continue;
        }

        if let Some(idx) = lineality.iter().position(|l| !dot(h, l).is_zero()) {
            let mut l = lineality.swap_remove(idx);
            let mut s = dot(h, &l);
            if s.is_negative() {
                l.iter_mut().for_each(|x| *x = -x.clone());
                s = -s;
            }
            for other in &mut lineality {
                let t = dot(h, other) / &s;
                axpy(other, &t, &l);
            }
            for r in &mut rays {
                let t = dot(h, &r.v) / &s;
                axpy(&mut r.v, &t, &l);
                r.v = primitive(&r.v);
                r.zero.insert(k);
            }
            let mut zero = FixedBitSet::with_capacity(m);
            zero.insert_range(..k);
            rays.push(Ray {
                v: primitive(&l),
                zero,
            });
            continue;
        }

        let signs: Vec<Rational> = rays.iter().map(|r| dot(h, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| signs[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| signs[i].is_negative()).collect();
        let min_tight = dim.saturating_sub(lineality.len()).saturating_sub(2);

        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let mut common = rays[p].zero.clone();
                common.intersect_with(&rays[n].zero);
                if common.count_ones(..) < min_tight {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == n || !common.is_subset(&r.zero));
                if !adjacent {
                    continue;
                }
                let v: Vec<Rational> = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(a, b)| &signs[p] * a - &signs[n] * b)
                    .collect();
                let mut zero = common;
                zero.insert(k);
                next.push(Ray {
                    v: primitive(&v),
                    zero,
                });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + next.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if signs[i].is_zero() {
                r.zero.insert(k);
                kept.push(r);
            } else if signs[i].is_positive() {
                kept.push(r);
            }
        }
        kept.extend(next);
        rays = kept;
    }

    canonical_frame(rays.into_iter().map(|r| r.v).collect(), lineality)
}

/// Deterministic presentation: lineality in reduced echelon form, rays
/// reduced modulo lineality, everything primitive, rays sorted.
fn canonical_frame(rays: Vec<Vec<Rational>>, lineality: Vec<Vec<Rational>>) -> Frame {
    let dim = rays
        .first()
        .or(lineality.first())
        .map(Vec::len)
        .unwrap_or(0);
    let (basis, pivots) = if lineality.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        linalg::rref(&lineality, dim)
    };
    let mut out_rays: Vec<Vec<Rational>> = rays
        .into_iter()
        .map(|mut r| {
            for (row, &p) in basis.iter().zip(&pivots) {
                let t = r[p].clone();
                if !t.is_zero() {
                    axpy(&mut r, &t, row);
                }
            }
            primitive(&r)
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    out_rays.sort();
    out_rays.dedup();
    Frame {
        rays: out_rays,
        lineality: basis.iter().map(|l| primitive_unsigned(l)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn orthant() {
        let f = solve_inequalities(&[v(&[1, 0]), v(&[0, 1])], 2);
        assert_eq!(f.rays, vec![v(&[0, 1]), v(&[1, 0])]);
        assert!(f.lineality.is_empty());
    }

    #[test]
    fn no_constraints_is_the_whole_space() {
        let f = solve_inequalities(&[], 3);
        assert!(f.rays.is_empty());
        assert_eq!(f.lineality.len(), 3);
    }

    #[test]
    fn halfspace_keeps_a_hyperplane_of_lineality() {
        let f = solve_inequalities(&[v(&[1, 1, 0])], 3);
        assert_eq!(f.rays.len(), 1);
        assert_eq!(f.lineality.len(), 2);
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // x+z, -x+z, y+z, -y+z >= 0
        let rows = vec![v(&[1, 0, 1]), v(&[-1, 0, 1]), v(&[0, 1, 1]), v(&[0, -1, 1])];
        let f = solve_inequalities(&rows, 3);
        assert_eq!(
            f.rays,
            vec![v(&[-1, -1, 1]), v(&[-1, 1, 1]), v(&[1, -1, 1]), v(&[1, 1, 1])]
        );
    }

    #[test]
    fn opposite_halfspaces_leave_a_hyperplane() {
        let f = solve_inequalities(&[v(&[1, 0]), v(&[-1, 0])], 2);
        assert!(f.rays.is_empty());
        assert_eq!(f.lineality, vec![v(&[0, 1])]);
    }
}
