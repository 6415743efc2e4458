//! Finite covers `π: X → Y` whose pullback identifies the rational
//! Néron–Severi spaces. X-classes are written in the pulled-back Y basis, so
//! `π*D` has the same coefficients as `D` and the X form is `d` times the Y
//! form.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Signed;

use crate::cone::{Cone, ConeError};
use crate::delpezzo::NegativeCurveRecord;
use crate::lattice::{DivisorClass, LatticeError, SurfaceLattice};
use crate::rational::{format_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("cover degree and canonical multiplier must be positive")]
    NonPositive,
    #[error("ramification index {e} of {label} is outside 1..={degree}")]
    BadIndex { label: String, e: u32, degree: u32 },
    #[error("unknown base curve {0}")]
    UnknownCurve(String),
    #[error("inconsistent cover data: {label} would have genus {genus}")]
    Inconsistent { label: String, genus: String },
    #[error("effective and nef cones on the base are not dual to each other")]
    NotDual,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// Degree `d`, canonical relation `m·K_X ≡ π*(A)` and ramification indices of
/// named base curves (absent labels are unramified).
#[derive(Debug, Clone)]
pub struct CoverDescriptor {
    degree: u32,
    multiplier: u32,
    pullback_class: DivisorClass,
    ramification: BTreeMap<String, u32>,
    base: Arc<SurfaceLattice>,
    roster: Vec<(String, DivisorClass)>,
}

impl CoverDescriptor {
    pub fn new(
        base: Arc<SurfaceLattice>,
        roster: Vec<(String, DivisorClass)>,
        degree: u32,
        multiplier: u32,
        pullback_class: DivisorClass,
        ramification: BTreeMap<String, u32>,
    ) -> Result<Self, CoverError> {
        if degree == 0 || multiplier == 0 {
            return Err(CoverError::NonPositive);
        }
        if pullback_class.len() != base.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: base.rank(),
                found: pullback_class.len(),
            }
            .into());
        }
        for (label, &e) in &ramification {
            if e == 0 || e > degree {
                return Err(CoverError::BadIndex {
                    label: label.clone(),
                    e,
                    degree,
                });
            }
            if !roster.iter().any(|(l, _)| l == label) {
                return Err(CoverError::UnknownCurve(label.clone()));
            }
        }
        Ok(CoverDescriptor {
            degree,
            multiplier,
            pullback_class,
            ramification,
            base,
            roster,
        })
    }

    /// Degree-one cover with `K_X = K_Y`.
    pub fn identity(base: Arc<SurfaceLattice>, roster: Vec<(String, DivisorClass)>) -> Result<Self, CoverError> {
        let k = base.canonical().cloned().ok_or(LatticeError::CanonicalRequired)?;
        Self::new(base, roster, 1, 1, k, BTreeMap::new())
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn multiplier(&self) -> u32 {
        self.multiplier
    }

    pub fn pullback_class(&self) -> &DivisorClass {
        &self.pullback_class
    }

    pub fn base(&self) -> &Arc<SurfaceLattice> {
        &self.base
    }

    pub fn roster(&self) -> &[(String, DivisorClass)] {
        &self.roster
    }

    pub fn ramification_index(&self, label: &str) -> u32 {
        self.ramification.get(label).copied().unwrap_or(1)
    }

    /// Gram `d·G_Y` and `K_X = A/m`.
    pub fn pullback_lattice(&self) -> Result<SurfaceLattice, CoverError> {
        let d = int(self.degree as i64);
        let gram = self
            .base
            .gram()
            .iter()
            .map(|row| row.iter().map(|x| x * &d).collect())
            .collect();
        let k = self.pullback_class.scale(&(Rational::from_integer(1.into()) / int(self.multiplier as i64)));
        let lat = SurfaceLattice::new(gram, self.base.basis_names().to_vec())?
            .with_canonical(k)?
            .with_torsion_note(self.base.torsion_note().to_string());
        Ok(lat)
    }

    /// `D̃ = π*D / e` with `D̃² = d·D²/e²` and `K_X·D̃ = d·(A·D)/(m·e)`.
    pub fn reduced_pullback(&self, label: &str) -> Result<NegativeCurveRecord, CoverError> {
        let class = self
            .roster
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, c)| c)
            .ok_or_else(|| CoverError::UnknownCurve(label.to_string()))?;
        let d = int(self.degree as i64);
        let m = int(self.multiplier as i64);
        let e = int(self.ramification_index(label) as i64);
        let self_int = &d * self.base.self_intersection(class)? / (&e * &e);
        let k_deg = &d * self.base.pairing(&self.pullback_class, class)? / (&m * &e);
        let genus = int(1) + (&self_int + k_deg) / int(2);
        if !genus.is_integer() || genus.is_negative() {
            return Err(CoverError::Inconsistent {
                label: label.to_string(),
                genus: format_rational(&genus),
            });
        }
        Ok(NegativeCurveRecord {
            label: label.to_string(),
            class: class.scale(&(int(1) / e)),
            self_int,
            genus,
            on_branch: Some(self.ramification_index(label) > 1),
        })
    }

    /// Pulls back mutually dual cones on Y and re-checks duality upstairs.
    pub fn transport_cones(&self, eff_y: &Cone, nef_y: &Cone) -> Result<(Cone, Cone), CoverError> {
        if !eff_y.dual_cone()?.cone_equal(nef_y)? || !nef_y.dual_cone()?.cone_equal(eff_y)? {
            return Err(CoverError::NotDual);
        }
        let x = Arc::new(self.pullback_lattice()?);
        let eff_x = Cone::new(Arc::clone(&x), eff_y.generators().to_vec())?;
        let nef_x = Cone::new(Arc::clone(&x), nef_y.generators().to_vec())?;
        // A positive multiple of the form has the same dual cones.
        assert!(eff_x.dual_cone()?.cone_equal(&nef_x)?, "duality lost under scaling");
        Ok((eff_x, nef_x))
    }
}

/// `⟨π*a, π*b⟩_X − d·⟨a, b⟩_Y`, which is zero for a consistent cover.
pub fn scaling_defect(cov: &CoverDescriptor, a: &DivisorClass, b: &DivisorClass) -> Result<Rational, CoverError> {
    let x = cov.pullback_lattice()?;
    let lhs = x.pairing(a, b)?;
    let rhs = int(cov.degree as i64) * cov.base.pairing(a, b)?;
    Ok(lhs - rhs)
}

/// Whether every roster curve pulls back to an integral genus.
pub fn genus_integrality(cov: &CoverDescriptor) -> bool {
    cov.roster
        .iter()
        .all(|(l, _)| cov.reduced_pullback(l).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chen() -> CoverDescriptor {
        let y = SurfaceLattice::from_int_gram(&[&[-1, 1, 1], &[1, -1, 3], &[1, 3, -1]], &["E", "Gamma", "B2"])
            .unwrap();
        let y = y.clone().with_canonical(y.parse_class("-1/2*Gamma-1/2*B2").unwrap()).unwrap();
        let roster: Vec<(String, DivisorClass)> = ["E", "Gamma", "B2", "B3"]
            .iter()
            .map(|l| {
                let c = if *l == "B3" {
                    y.parse_class("Gamma+B2-E").unwrap()
                } else {
                    y.basis_class(l).unwrap()
                };
                (l.to_string(), c)
            })
            .collect();
        let a = y.parse_class("2Gamma+B2").unwrap();
        let ram = [("Gamma", 2), ("B2", 2), ("B3", 2)]
            .into_iter()
            .map(|(l, e)| (l.to_string(), e))
            .collect();
        CoverDescriptor::new(Arc::new(y), roster, 4, 2, a, ram).unwrap()
    }

    #[test]
    fn chen_reduced_pullbacks() {
        let cov = chen();
        let g = cov.reduced_pullback("Gamma").unwrap();
        assert_eq!((g.self_int, g.genus), (int(-1), int(1)));
        let e = cov.reduced_pullback("E").unwrap();
        assert_eq!((e.self_int.clone(), e.genus.clone()), (int(-4), int(2)));
        assert_eq!(e.on_branch, Some(false));
        let x = cov.pullback_lattice().unwrap();
        assert_eq!(x.canonical_square().unwrap(), int(7));
        assert_eq!(x.pairing(x.canonical().unwrap(), &e.class).unwrap(), int(6));
    }

    #[test]
    fn wrong_ramification_is_caught() {
        let mut cov = chen();
        cov.ramification.insert("Gamma".into(), 3);
        assert!(matches!(
            cov.reduced_pullback("Gamma"),
            Err(CoverError::Inconsistent { .. })
        ));
    }

    #[test]
    fn identity_cover_keeps_the_lattice() {
        let y = Arc::new(
            SurfaceLattice::from_int_gram(&[&[1]], &["H"])
                .unwrap()
                .with_canonical(DivisorClass::from_ints(&[-3]))
                .unwrap(),
        );
        let cov = CoverDescriptor::identity(Arc::clone(&y), vec![]).unwrap();
        assert_eq!(&cov.pullback_lattice().unwrap(), y.as_ref());
    }

    #[test]
    fn unknown_label_and_bad_index() {
        let cov = chen();
        let err = CoverDescriptor::new(
            Arc::clone(cov.base()),
            cov.roster().to_vec(),
            4,
            2,
            cov.pullback_class().clone(),
            [("Z".to_string(), 2)].into_iter().collect(),
        )
        .unwrap_err();
        assert_eq!(err, CoverError::UnknownCurve("Z".into()));
        let err = CoverDescriptor::new(
            Arc::clone(cov.base()),
            cov.roster().to_vec(),
            4,
            2,
            cov.pullback_class().clone(),
            [("E".to_string(), 5)].into_iter().collect(),
        )
        .unwrap_err();
        assert!(matches!(err, CoverError::BadIndex { e: 5, .. }));
    }

    #[test]
    fn transport_requires_duality() {
        let cov = chen();
        let y = Arc::clone(cov.base());
        let eff = Cone::new(Arc::clone(&y), cov.roster().iter().map(|(_, c)| c.clone()).collect()).unwrap();
        let nef = eff.dual_cone().unwrap();
        let (eff_x, nef_x) = cov.transport_cones(&eff, &nef).unwrap();
        assert_eq!(eff_x.extremal_rays().len(), 4);
        assert_eq!(nef_x.lattice().canonical_square().unwrap(), int(7));
        assert!(matches!(cov.transport_cones(&eff, &eff), Err(CoverError::NotDual)));
    }
}
