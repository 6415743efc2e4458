use itertools::Itertools;
use num_integer::Integer;
use num_traits::Signed;

use super::ConeError;
use crate::lattice::{DivisorClass, SurfaceLattice};
use crate::linalg;
use crate::rational::{dot, int, primitive, to_i64, Rational};

/// Facet normals of `cone(gens)` with respect to the pairing, found by
/// scanning every (ρ−1)-subset of linearly independent generators for an
/// annihilating class that is nonnegative (up to sign) on all generators.
///
/// This is deliberately independent of the double-description code. When
/// the functionals fit in machine integers the annihilator is the
/// generalized cross product of the subset, computed with checked `i128`
/// arithmetic; any overflow falls back to exact rationals.
pub fn annihilator_facet_scan(
    lattice: &SurfaceLattice,
    gens: &[DivisorClass],
) -> Result<Vec<DivisorClass>, ConeError> {
    let n = lattice.rank();
    let rank = lattice.span_rank(gens);
    if rank < n {
        return Err(ConeError::NotSpanning { rank, needed: n });
    }
    if lattice.is_degenerate() {
        return Err(ConeError::DegeneratePairing);
    }
    // Positive rescaling changes neither the kernel nor any sign.
    let functionals = gens
        .iter()
        .map(|g| lattice.functional(g).map(|f| primitive(&f)))
        .collect::<Result<Vec<_>, _>>()?;
    let small: Option<Vec<Vec<i128>>> = functionals
        .iter()
        .map(|f| f.iter().map(|x| to_i64(x).map(i128::from)).collect())
        .collect();
    let mut normals: Vec<DivisorClass> = Vec::new();
    for subset in (0..gens.len()).combinations(n - 1) {
        let fast = small.as_ref().and_then(|rows| scan_subset_int(rows, &subset, n));
        let found = match fast {
            Some(found) => found,
            None => scan_subset_rational(&functionals, &subset, n),
        };
        normals.extend(found);
    }
    normals.sort();
    normals.dedup();
    Ok(normals)
}

/// `Some(None)` when the subset is dependent or its annihilator is not a
/// facet normal; `None` on overflow.
fn scan_subset_int(rows: &[Vec<i128>], subset: &[usize], n: usize) -> Option<Option<DivisorClass>> {
    let Some(mut w) = kernel_int(subset.iter().map(|&i| rows[i].as_slice()), n)? else {
        return Some(None);
    };
    let g = w.iter().fold(0i128, |g, &x| g.gcd(&x));
    for x in &mut w {
        *x /= g;
    }
    let (mut pos, mut neg) = (false, false);
    for row in rows {
        let mut v: i128 = 0;
        for (a, b) in row.iter().zip(&w) {
            v = v.checked_add(a.checked_mul(*b)?)?;
        }
        pos |= v > 0;
        neg |= v < 0;
        if pos && neg {
            return Some(None);
        }
    }
    let sign = if neg { -1 } else { 1 };
    let coeffs = w
        .iter()
        .map(|&x| i64::try_from(x * sign).ok().map(int))
        .collect::<Option<Vec<Rational>>>()?;
    Some(Some(DivisorClass::new(coeffs)))
}

/// Kernel of `n - 1` integer rows by fraction-free Gauss-Jordan elimination:
/// at the end every pivot equals the same minor `d` and the rows read
/// `d·x_pivot + c·x_free = 0`. `Some(None)` if the rows are dependent.
fn kernel_int<'a>(rows: impl Iterator<Item = &'a [i128]>, n: usize) -> Option<Option<Vec<i128>>> {
    let mut m: Vec<Vec<i128>> = rows.map(<[i128]>::to_vec).collect();
    let k = m.len();
    let mut pivots = Vec::with_capacity(k);
    let mut free = None;
    let mut prev = 1i128;
    for c in 0..n {
        let p = pivots.len();
        if p == k {
            if free.is_some() {
                return Some(None);
            }
            free = Some(c);
            continue;
        }
        let Some(swap) = (p..k).find(|&r| m[r][c] != 0) else {
            if free.is_some() {
                return Some(None);
            }
            free = Some(c);
            continue;
        };
        m.swap(p, swap);
        let (piv_row, pv) = (m[p].clone(), m[p][c]);
        for (r, row) in m.iter_mut().enumerate() {
            if r == p {
                continue;
            }
            let f = row[c];
            for j in 0..n {
                if j == c {
                    continue;
                }
                row[j] = row[j].checked_mul(pv)?.checked_sub(f.checked_mul(piv_row[j])?)? / prev;
            }
            row[c] = 0;
        }
        prev = pv;
        pivots.push(c);
    }
    let free = free.expect("n - 1 rows leave a free column");
    // Rows eliminated before the last pivot still carry older pivots; bring
    // each pivot entry to the common value `prev`.
    let mut w = vec![0i128; n];
    w[free] = prev;
    for (r, &c) in pivots.iter().enumerate() {
        let (d, e) = (m[r][c], m[r][free]);
        // d·x_c + e·x_free = 0 with x_free = prev.
        let num = e.checked_mul(prev)?.checked_neg()?;
        if num % d != 0 {
            return None;
        }
        w[c] = num / d;
    }
    Some(Some(w))
}

fn scan_subset_rational(functionals: &[Vec<Rational>], subset: &[usize], n: usize) -> Option<DivisorClass> {
    let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| functionals[i].clone()).collect();
    if linalg::rank(&rows) < n - 1 {
        return None;
    }
    let kernel = linalg::nullspace(&rows, n);
    let w = DivisorClass::new(kernel.into_iter().next().expect("corank one"));
    let values: Vec<Rational> = functionals.iter().map(|f| dot(f, w.coeffs())).collect();
    if values.iter().all(|x| !x.is_negative()) {
        Some(w.primitive())
    } else if values.iter().all(|x| !x.is_positive()) {
        Some((-&w).primitive())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_two_rows() {
        let rows: [&[i128]; 2] = [&[0, 2, 1], &[1, 1, 0]];
        let w = kernel_int(rows.into_iter(), 3).unwrap().unwrap();
        for r in rows {
            assert_eq!(r.iter().zip(&w).map(|(a, b)| a * b).sum::<i128>(), 0);
        }
        assert!(w.iter().any(|&x| x != 0));
        let dependent: [&[i128]; 2] = [&[1, 2, 3], &[2, 4, 6]];
        assert_eq!(kernel_int(dependent.into_iter(), 3), Some(None));
    }

    #[test]
    fn integer_and_rational_paths_agree() {
        let rows: Vec<Vec<i128>> = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, -1]];
        let ratl: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| int(x as i64)).collect())
            .collect();
        for subset in (0..4).combinations(2) {
            let a = scan_subset_int(&rows, &subset, 3).unwrap();
            let b = scan_subset_rational(&ratl, &subset, 3);
            assert_eq!(a, b, "{subset:?}");
        }
    }

    #[test]
    fn integer_path_matches_rationals_on_random_rows() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(2..=6);
            let rows: Vec<Vec<i128>> = (0..n + 2)
                .map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect())
                .collect();
            let ratl: Vec<Vec<Rational>> = rows
                .iter()
                .map(|r| r.iter().map(|&x| int(x as i64)).collect())
                .collect();
            for subset in (0..n + 2).combinations(n - 1) {
                let a = scan_subset_int(&rows, &subset, n).unwrap();
                let b = scan_subset_rational(&ratl, &subset, n);
                assert_eq!(a, b, "{rows:?} {subset:?}");
            }
        }
    }
}
