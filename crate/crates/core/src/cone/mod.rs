//! Rational polyhedral cones in a surface lattice. Duality is always taken
//! with respect to the intersection pairing of the lattice.

mod dd;
mod scan;

use std::sync::{Arc, OnceLock};

use num_traits::{Signed, Zero};

use crate::lattice::{DivisorClass, LatticeError, SurfaceLattice};
use crate::linalg::{self, SolveOutcome};
use crate::rational::{dot, primitive, Rational};

use dd::{solve_inequalities, Frame};
pub use scan::annihilator_facet_scan;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("cones live in different lattices")]
    ContextMismatch,
    #[error("generators span a subspace of rank {rank}, the lattice has rank {needed}")]
    NotSpanning { rank: usize, needed: usize },
    #[error("the intersection pairing is degenerate")]
    DegeneratePairing,
}

/// Cone generated by finitely many classes. The minimal frame and the
/// inequality description are computed on first use and then cached.
#[derive(Debug)]
pub struct Cone {
    lattice: Arc<SurfaceLattice>,
    generators: Vec<DivisorClass>,
    frame: OnceLock<(Vec<DivisorClass>, Vec<DivisorClass>)>,
    inequalities: OnceLock<Frame>,
}

impl Clone for Cone {
    fn clone(&self) -> Self {
        Cone {
            lattice: Arc::clone(&self.lattice),
            generators: self.generators.clone(),
            frame: self.frame.clone(),
            inequalities: self.inequalities.clone(),
        }
    }
}

/// Nonnegative combination of extremal rays plus an arbitrary combination
/// of lineality directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combination {
    pub rays: Vec<(DivisorClass, Rational)>,
    pub lineality: Vec<(DivisorClass, Rational)>,
}

/// A linear functional that is nonnegative on the cone and negative on the
/// tested class. `class` is the same functional written as `⟨class, ·⟩`
/// when the pairing allows it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separator {
    pub functional: Vec<Rational>,
    pub class: Option<DivisorClass>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Inside(Combination),
    Outside(Separator),
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside(_))
    }

    /// Re-checks the certificate by direct arithmetic.
    pub fn verify(&self, cone: &Cone, v: &DivisorClass) -> bool {
        match self {
            Membership::Inside(c) => {
                let mut acc = DivisorClass::zero(v.len());
                for (r, t) in &c.rays {
                    if t.is_negative() {
                        return false;
                    }
                    acc = &acc + &r.scale(t);
                }
                for (l, t) in &c.lineality {
                    acc = &acc + &l.scale(t);
                }
                acc == *v
            }
            Membership::Outside(s) => {
                let nonneg = cone
                    .generators
                    .iter()
                    .all(|g| !dot(&s.functional, g.coeffs()).is_negative());
                let class_ok = match &s.class {
                    None => true,
                    Some(w) => cone
                        .lattice
                        .functional(w)
                        .map(|f| primitive(&f) == primitive(&s.functional))
                        .unwrap_or(false),
                };
                nonneg && class_ok && dot(&s.functional, v.coeffs()).is_negative()
            }
        }
    }
}

impl Cone {
    pub fn new(lattice: Arc<SurfaceLattice>, generators: Vec<DivisorClass>) -> Result<Self, ConeError> {
        for g in &generators {
            if g.len() != lattice.rank() {
                return Err(LatticeError::DimensionMismatch {
                    expected: lattice.rank(),
                    found: g.len(),
                }
                .into());
            }
        }
        Ok(Cone {
            lattice,
            generators,
            frame: OnceLock::new(),
            inequalities: OnceLock::new(),
        })
    }

    pub fn zero(lattice: Arc<SurfaceLattice>) -> Self {
        Cone::new(lattice, Vec::new()).expect("no generators to check")
    }

    fn from_frame(lattice: Arc<SurfaceLattice>, frame: Frame) -> Self {
        let to_class = |v: Vec<Vec<Rational>>| -> Vec<DivisorClass> {
            v.into_iter().map(DivisorClass::new).collect()
        };
        let rays = to_class(frame.rays);
        let lineality = to_class(frame.lineality);
        let mut generators = rays.clone();
        for l in &lineality {
            generators.push(l.clone());
            generators.push(-l);
        }
        let cone = Cone::new(lattice, generators).expect("frame conforms to its lattice");
        let _ = cone.frame.set((rays, lineality));
        cone
    }

    pub fn lattice(&self) -> &Arc<SurfaceLattice> {
        &self.lattice
    }

    pub fn ambient_rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn generators(&self) -> &[DivisorClass] {
        &self.generators
    }

    /// Inequalities `f·x ≥ 0` (rays) and equations `a·x = 0` (lineality)
    /// cutting out the cone, as plain coordinate functionals.
    fn inequalities(&self) -> &Frame {
        self.inequalities.get_or_init(|| {
            let rows: Vec<Vec<Rational>> =
                self.generators.iter().map(|g| g.coeffs().to_vec()).collect();
            solve_inequalities(&rows, self.ambient_rank())
        })
    }

    fn frame(&self) -> &(Vec<DivisorClass>, Vec<DivisorClass>) {
        self.frame.get_or_init(|| {
            let h = self.inequalities();
            let mut rows = h.rays.clone();
            for a in &h.lineality {
                rows.push(a.clone());
                rows.push(a.iter().map(|x| -x).collect());
            }
            let f = solve_inequalities(&rows, self.ambient_rank());
            (
                f.rays.into_iter().map(DivisorClass::new).collect(),
                f.lineality.into_iter().map(DivisorClass::new).collect(),
            )
        })
    }

    /// Minimal generating rays, primitive and sorted. For a cone that is not
    /// pointed these are representatives modulo [`lineality`](Self::lineality).
    pub fn extremal_rays(&self) -> &[DivisorClass] {
        &self.frame().0
    }

    /// Basis of the largest linear subspace contained in the cone.
    pub fn lineality(&self) -> &[DivisorClass] {
        &self.frame().1
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality().is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.lattice.span_rank(&self.generators)
    }

    /// `{w : ⟨w, g⟩ ≥ 0 for every generator g}`.
    pub fn dual_cone(&self) -> Result<Cone, ConeError> {
        let rows = self
            .generators
            .iter()
            .map(|g| self.lattice.functional(g))
            .collect::<Result<Vec<_>, _>>()?;
        let frame = solve_inequalities(&rows, self.ambient_rank());
        Ok(Cone::from_frame(Arc::clone(&self.lattice), frame))
    }

    fn satisfies(&self, v: &DivisorClass) -> bool {
        let h = self.inequalities();
        h.lineality.iter().all(|a| dot(a, v.coeffs()).is_zero())
            && h.rays.iter().all(|f| !dot(f, v.coeffs()).is_negative())
    }

    /// Membership with a certificate: an explicit combination of extremal
    /// rays, or a separating functional.
    pub fn contains(&self, v: &DivisorClass) -> Result<Membership, ConeError> {
        if v.len() != self.ambient_rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.ambient_rank(),
                found: v.len(),
            }
            .into());
        }
        let h = self.inequalities();
        for a in &h.lineality {
            let s = dot(a, v.coeffs());
            if !s.is_zero() {
                let f = if s.is_negative() {
                    a.clone()
                } else {
                    a.iter().map(|x| -x).collect()
                };
                return Ok(Membership::Outside(self.separator(f)));
            }
        }
        if let Some(f) = h.rays.iter().find(|f| dot(f, v.coeffs()).is_negative()) {
            return Ok(Membership::Outside(self.separator(f.clone())));
        }
        Ok(Membership::Inside(self.decompose(v)))
    }

    fn separator(&self, functional: Vec<Rational>) -> Separator {
        let class = match linalg::solve(self.lattice.gram(), &functional, self.ambient_rank()) {
            SolveOutcome::Unique(w) => Some(DivisorClass::new(w).primitive()),
            _ => None,
        };
        Separator { functional, class }
    }

    /// Walks from `v` along extremal rays onto successively smaller faces.
    fn decompose(&self, v: &DivisorClass) -> Combination {
        let facets = &self.inequalities().rays;
        let (rays, lineality) = self.frame();
        let mut u = v.clone();
        let mut active: Vec<usize> = Vec::new();
        let mut out = Vec::new();
        while facets.iter().any(|f| !dot(f, u.coeffs()).is_zero()) {
            let ray = rays
                .iter()
                .find(|r| active.iter().all(|&i| dot(&facets[i], r.coeffs()).is_zero()))
                .expect("a nonzero face has an extremal ray");
            let (idx, t) = facets
                .iter()
                .enumerate()
                .filter_map(|(i, f)| {
                    let fr = dot(f, ray.coeffs());
                    fr.is_positive().then(|| (i, dot(f, u.coeffs()) / fr))
                })
                .min_by(|a, b| a.1.cmp(&b.1))
                .expect("an extremal ray is not in the lineality space");
            if !t.is_zero() {
                u = &u - &ray.scale(&t);
                out.push((ray.clone(), t));
            }
            active.push(idx);
        }
        let mut lin = Vec::new();
        if !u.is_zero() {
            let cols: Vec<Vec<Rational>> = (0..self.ambient_rank())
                .map(|i| lineality.iter().map(|l| l.coeffs()[i].clone()).collect())
                .collect();
            if let SolveOutcome::Unique(c) = linalg::solve(&cols, u.coeffs(), lineality.len()) {
                lin = lineality.iter().cloned().zip(c).filter(|(_, t)| !t.is_zero()).collect();
            }
        }
        Combination {
            rays: out,
            lineality: lin,
        }
    }

    /// Mutual containment of generators.
    pub fn cone_equal(&self, other: &Cone) -> Result<bool, ConeError> {
        if !Arc::ptr_eq(&self.lattice, &other.lattice) && self.lattice != other.lattice {
            return Err(ConeError::ContextMismatch);
        }
        Ok(other.generators.iter().all(|g| self.satisfies(g))
            && self.generators.iter().all(|g| other.satisfies(g)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> Arc<SurfaceLattice> {
        Arc::new(SurfaceLattice::from_int_gram(&[&[1, 0], &[0, 1]], &["e1", "e2"]).unwrap())
    }

    fn c(xs: &[i64]) -> DivisorClass {
        DivisorClass::from_ints(xs)
    }

    #[test]
    fn redundant_middle_ray_is_dropped() {
        let cone = Cone::new(plane(), vec![c(&[1, 0]), c(&[0, 1]), c(&[1, 1])]).unwrap();
        assert_eq!(cone.extremal_rays(), &[c(&[0, 1]), c(&[1, 0])]);
        assert!(cone.is_pointed());
    }

    #[test]
    fn orthant_is_self_dual() {
        let cone = Cone::new(plane(), vec![c(&[1, 0]), c(&[0, 1])]).unwrap();
        let dual = cone.dual_cone().unwrap();
        assert!(dual.cone_equal(&cone).unwrap());
    }

    #[test]
    fn dual_of_nothing_is_everything() {
        let dual = Cone::zero(plane()).dual_cone().unwrap();
        assert_eq!(dual.lineality().len(), 2);
        assert!(dual.extremal_rays().is_empty());
    }

    #[test]
    fn membership_certificates() {
        let cone = Cone::new(plane(), vec![c(&[1, 0]), c(&[0, 1])]).unwrap();
        let inside = cone.contains(&c(&[1, 1])).unwrap();
        assert!(inside.is_inside());
        assert!(inside.verify(&cone, &c(&[1, 1])));
        let outside = cone.contains(&c(&[1, -2])).unwrap();
        assert!(!outside.is_inside());
        assert!(outside.verify(&cone, &c(&[1, -2])));
    }

    #[test]
    fn equality_is_mutual_containment() {
        let a = Cone::new(plane(), vec![c(&[1, 0]), c(&[0, 1])]).unwrap();
        let b = Cone::new(plane(), vec![c(&[0, 1]), c(&[1, 0]), c(&[1, 1])]).unwrap();
        let ray = Cone::new(plane(), vec![c(&[1, 0])]).unwrap();
        assert!(a.cone_equal(&b).unwrap());
        assert!(!ray.cone_equal(&a).unwrap());
    }

    #[test]
    fn mismatched_lattices_are_rejected() {
        let other = Arc::new(SurfaceLattice::from_int_gram(&[&[0, 1], &[1, 0]], &["f", "g"]).unwrap());
        let a = Cone::new(plane(), vec![c(&[1, 0])]).unwrap();
        let b = Cone::new(other, vec![c(&[1, 0])]).unwrap();
        assert_eq!(a.cone_equal(&b), Err(ConeError::ContextMismatch));
    }

    #[test]
    fn scan_of_simplicial_orthant() {
        let lat = SurfaceLattice::from_int_gram(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &["a", "b", "c"])
            .unwrap();
        let gens = vec![c(&[1, 0, 0]), c(&[0, 1, 0]), c(&[0, 0, 1])];
        assert_eq!(annihilator_facet_scan(&lat, &gens).unwrap(), {
            let mut v = gens.clone();
            v.sort();
            v
        });
    }

    #[test]
    fn scan_rejects_non_spanning_input() {
        let lat = SurfaceLattice::from_int_gram(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &["a", "b", "c"])
            .unwrap();
        let err = annihilator_facet_scan(&lat, &[c(&[1, 0, 0]), c(&[0, 1, 0])]).unwrap_err();
        assert_eq!(err, ConeError::NotSpanning { rank: 2, needed: 3 });
    }

    #[test]
    fn degenerate_pairing_still_dualizes() {
        // Four (-1)-curves whose pairing has a one-dimensional kernel.
        let lat = Arc::new(
            SurfaceLattice::from_int_gram(
                &[&[-1, 1, 1, 3], &[1, -1, 3, 1], &[1, 3, -1, 1], &[3, 1, 1, -1]],
                &["E", "Gamma", "B2", "B3"],
            )
            .unwrap(),
        );
        let eff = Cone::new(
            Arc::clone(&lat),
            vec![c(&[1, 0, 0, 0]), c(&[0, 1, 0, 0]), c(&[0, 0, 1, 0]), c(&[0, 0, 0, 1])],
        )
        .unwrap();
        let nef = eff.dual_cone().unwrap();
        assert_eq!(nef.lineality(), &[c(&[1, -1, -1, 1])]);
        assert_eq!(nef.extremal_rays().len(), 4);
        let claimed = Cone::new(
            Arc::clone(&lat),
            vec![
                c(&[0, 1, 0, 1]),
                c(&[0, 0, 1, 1]),
                c(&[1, 1, 0, 0]),
                c(&[1, 0, 1, 0]),
                c(&[1, -1, -1, 1]),
                c(&[-1, 1, 1, -1]),
            ],
        )
        .unwrap();
        assert!(nef.cone_equal(&claimed).unwrap());
    }
}
