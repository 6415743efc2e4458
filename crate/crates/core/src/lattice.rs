//! Numerical lattices of surfaces: a finite-rank ℚ-vector space with a
//! symmetric intersection form, named basis classes and an optional
//! canonical class. Torsion is ignored; equality is numerical equivalence.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::linalg::{self, SolveOutcome};
use crate::rational::{format_rational, int, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("dimension mismatch: lattice has rank {expected}, class has {found} coordinates")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("canonical class required")]
    CanonicalRequired,
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    Asymmetric { row: usize, col: usize },
    #[error("gram matrix must be {rank}x{rank}")]
    BadShape { rank: usize },
    #[error("lattice rank must be positive")]
    EmptyLattice,
    #[error("basis names must be distinct, {0:?} repeats")]
    DuplicateName(String),
    #[error("underdetermined: constraints have rank {rank}, lattice rank is {needed}")]
    Underdetermined { rank: usize, needed: usize },
    #[error("no solution: the constraints are inconsistent")]
    NoSolution,
    #[error("expected {expected} classes, got {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("cannot parse class expression {expr:?}: {reason}")]
    BadExpression { expr: String, reason: String },
}

/// A rational coefficient vector in the basis of some [`SurfaceLattice`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivisorClass(Vec<Rational>);

impl DivisorClass {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        DivisorClass(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        DivisorClass(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![Rational::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); rank];
        v[i] = Rational::one();
        DivisorClass(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        DivisorClass(self.0.iter().map(|x| x * q).collect())
    }

    /// Positive multiple that is a primitive integer vector.
    pub fn primitive(&self) -> Self {
        DivisorClass(crate::rational::primitive(&self.0))
    }

    /// True when `other = λ·self` for some λ > 0.
    pub fn same_ray(&self, other: &DivisorClass) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.primitive() == other.primitive()
    }

    /// Renders the class as a linear expression in `names`, e.g. `2H-E1-E2`.
    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (c, name) in self.0.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if !abs.is_one() {
                out.push_str(&format_rational(&abs));
                if !abs.is_integer() {
                    out.push('*');
                }
            }
            out.push_str(name);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&DivisorClass> for &Rational {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// One `coefficient * label` term of a parsed class expression.
pub type Term = (Rational, String);

/// Parses expressions like `2E1+2E2+3F1+G1`, `-K+Delta2`, `1/2*Gamma`.
/// Labels start with a letter and may contain letters, digits, `_` and `'`.
pub fn parse_terms(expr: &str) -> Result<Vec<Term>, LatticeError> {
    let bad = |reason: &str| LatticeError::BadExpression {
        expr: expr.to_string(),
        reason: reason.to_string(),
    };
    let chars: Vec<char> = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(bad("empty expression"));
    }
    if chars == ['0'] {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let mut sign = Rational::one();
        match chars[i] {
            '+' => i += 1,
            '-' => {
                sign = -sign;
                i += 1;
            }
            _ if i > 0 => return Err(bad("expected + or - between terms")),
            _ => {}
        }
        let start = i;
        while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
            i += 1;
        }
        let coef = if i > start {
            let text: String = chars[start..i].iter().collect();
            parse_rational(&text).map_err(|e| bad(&e.to_string()))?
        } else {
            Rational::one()
        };
        if i < chars.len() && chars[i] == '*' {
            i += 1;
        }
        let name_start = i;
        if i >= chars.len() || !chars[i].is_alphabetic() {
            return Err(bad("expected a label"));
        }
        while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
            i += 1;
        }
        let name: String = chars[name_start..i].iter().collect();
        terms.push((sign * coef, name));
    }
    Ok(terms)
}

/// Merges repeated labels (first occurrence keeps its position) and drops
/// zero coefficients.
pub fn normalize_terms(terms: Vec<Term>) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for (c, name) in terms {
        match out.iter_mut().find(|(_, n)| *n == name) {
            Some((acc, _)) => *acc += c,
            None => out.push((c, name)),
        }
    }
    out.retain(|(c, _)| !c.is_zero());
    out
}

pub fn render_terms(terms: &[Term]) -> String {
    let names: Vec<String> = terms.iter().map(|(_, n)| n.clone()).collect();
    DivisorClass(terms.iter().map(|(c, _)| c.clone()).collect()).render(&names)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceLattice {
    gram: Vec<Vec<Rational>>,
    basis_names: Vec<String>,
    canonical: Option<DivisorClass>,
    torsion_note: String,
}

impl SurfaceLattice {
    pub fn new(gram: Vec<Vec<Rational>>, basis_names: Vec<String>) -> Result<Self, LatticeError> {
        let rank = basis_names.len();
        if rank == 0 {
            return Err(LatticeError::EmptyLattice);
        }
        if gram.len() != rank || gram.iter().any(|row| row.len() != rank) {
            return Err(LatticeError::BadShape { rank });
        }
        for i in 0..rank {
            for j in i + 1..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::Asymmetric { row: i, col: j });
                }
            }
        }
        for (i, name) in basis_names.iter().enumerate() {
            if basis_names[..i].contains(name) {
                return Err(LatticeError::DuplicateName(name.clone()));
            }
        }
        Ok(SurfaceLattice {
            gram,
            basis_names,
            canonical: None,
            torsion_note: String::from("classes up to numerical equivalence"),
        })
    }

    pub fn from_int_gram(gram: &[&[i64]], names: &[&str]) -> Result<Self, LatticeError> {
        let g = gram
            .iter()
            .map(|row| row.iter().map(|&x| int(x)).collect())
            .collect();
        SurfaceLattice::new(g, names.iter().map(|s| s.to_string()).collect())
    }

    pub fn with_canonical(mut self, k: DivisorClass) -> Result<Self, LatticeError> {
        self.check(&k)?;
        self.canonical = Some(k);
        Ok(self)
    }

    pub fn with_torsion_note(mut self, note: impl Into<String>) -> Self {
        self.torsion_note = note.into();
        self
    }

    pub fn rank(&self) -> usize {
        self.basis_names.len()
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn canonical(&self) -> Option<&DivisorClass> {
        self.canonical.as_ref()
    }

    pub fn torsion_note(&self) -> &str {
        &self.torsion_note
    }

    pub fn basis_class(&self, name: &str) -> Option<DivisorClass> {
        let i = self.basis_names.iter().position(|n| n == name)?;
        Some(DivisorClass::unit(self.rank(), i))
    }

    /// Resolves an expression over basis names and `K` (the canonical class).
    pub fn parse_class(&self, expr: &str) -> Result<DivisorClass, LatticeError> {
        self.parse_class_with(expr, |_| None)
    }

    /// Like [`parse_class`](Self::parse_class) but consults `extra` for labels
    /// that are neither basis names nor `K`.
    pub fn parse_class_with(
        &self,
        expr: &str,
        extra: impl Fn(&str) -> Option<DivisorClass>,
    ) -> Result<DivisorClass, LatticeError> {
        let mut acc = DivisorClass::zero(self.rank());
        for (c, name) in parse_terms(expr)? {
            let class = if let Some(b) = self.basis_class(&name) {
                b
            } else if let Some(e) = extra(&name) {
                self.check(&e)?;
                e
            } else if name == "K" {
                self.canonical.clone().ok_or(LatticeError::CanonicalRequired)?
            } else {
                return Err(LatticeError::UnknownLabel(name));
            };
            acc = &acc + &class.scale(&c);
        }
        Ok(acc)
    }

    pub fn render(&self, c: &DivisorClass) -> String {
        c.render(&self.basis_names)
    }

    fn check(&self, c: &DivisorClass) -> Result<(), LatticeError> {
        if c.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: c.len(),
            });
        }
        Ok(())
    }

    /// The linear functional `x ↦ ⟨c, x⟩` as a coefficient vector (`gram·c`).
    pub fn functional(&self, c: &DivisorClass) -> Result<Vec<Rational>, LatticeError> {
        self.check(c)?;
        Ok(linalg::mat_vec(&self.gram, c.coeffs()))
    }

    /// `aᵀ · gram · b`.
    pub fn pairing(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rational, LatticeError> {
        self.check(b)?;
        Ok(crate::rational::dot(&self.functional(a)?, b.coeffs()))
    }

    pub fn self_intersection(&self, c: &DivisorClass) -> Result<Rational, LatticeError> {
        self.pairing(c, c)
    }

    /// `1 + (C² + K·C)/2`. Integrality is checked by callers.
    pub fn arithmetic_genus(&self, c: &DivisorClass) -> Result<Rational, LatticeError> {
        let k = self.canonical.as_ref().ok_or(LatticeError::CanonicalRequired)?;
        let c2 = self.pairing(c, c)?;
        let kc = self.pairing(k, c)?;
        Ok(Rational::one() + (c2 + kc) / int(2))
    }

    /// `K²`, when the canonical class is set.
    pub fn canonical_square(&self) -> Result<Rational, LatticeError> {
        let k = self.canonical.as_ref().ok_or(LatticeError::CanonicalRequired)?;
        self.pairing(k, k)
    }

    pub fn is_degenerate(&self) -> bool {
        linalg::determinant(&self.gram).is_zero()
    }

    /// Finds the unique class `x` with `⟨x, cᵢ⟩ = vᵢ` for every constraint.
    pub fn solve_class_from_pairings(
        &self,
        constraints: &[(DivisorClass, Rational)],
    ) -> Result<DivisorClass, LatticeError> {
        let mut rows = Vec::with_capacity(constraints.len());
        let mut rhs = Vec::with_capacity(constraints.len());
        for (c, v) in constraints {
            rows.push(self.functional(c)?);
            rhs.push(v.clone());
        }
        match linalg::solve(&rows, &rhs, self.rank()) {
            SolveOutcome::Unique(x) => Ok(DivisorClass(x)),
            SolveOutcome::Inconsistent => Err(LatticeError::NoSolution),
            SolveOutcome::Underdetermined { rank } => Err(LatticeError::Underdetermined {
                rank,
                needed: self.rank(),
            }),
        }
    }

    /// Matrix of pairwise intersections `⟨cᵢ, cⱼ⟩`.
    pub fn pairing_matrix(&self, classes: &[DivisorClass]) -> Result<Vec<Vec<Rational>>, LatticeError> {
        classes
            .iter()
            .map(|a| classes.iter().map(|b| self.pairing(a, b)).collect())
            .collect()
    }

    /// Determinant of the pairing matrix of exactly `rank` classes.
    pub fn gram_determinant(&self, classes: &[DivisorClass]) -> Result<Rational, LatticeError> {
        if classes.len() != self.rank() {
            return Err(LatticeError::WrongCount {
                expected: self.rank(),
                found: classes.len(),
            });
        }
        Ok(linalg::determinant(&self.pairing_matrix(classes)?))
    }

    /// Rank of the span of `classes` in the ambient ℚ-space.
    pub fn span_rank(&self, classes: &[DivisorClass]) -> usize {
        let rows: Vec<Vec<Rational>> = classes.iter().map(|c| c.coeffs().to_vec()).collect();
        linalg::rank(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn pq6() -> SurfaceLattice {
        SurfaceLattice::from_int_gram(
            &[&[-2, 0, 1, 1], &[0, -2, 1, 1], &[1, 1, -1, 0], &[1, 1, 0, -1]],
            &["E1", "E2", "F1", "G1"],
        )
        .unwrap()
    }

    #[test]
    fn pairing_reads_the_table() {
        let lat = pq6();
        let e1 = lat.basis_class("E1").unwrap();
        let f1 = lat.basis_class("F1").unwrap();
        assert_eq!(lat.pairing(&e1, &f1).unwrap(), int(1));
        assert_eq!(lat.pairing(&DivisorClass::zero(4), &f1).unwrap(), int(0));
    }

    #[test]
    fn pairing_rejects_wrong_rank() {
        let lat = pq6();
        let err = lat
            .pairing(&DivisorClass::from_ints(&[1, 0]), &DivisorClass::zero(4))
            .unwrap_err();
        assert_eq!(err, LatticeError::DimensionMismatch { expected: 4, found: 2 });
    }

    #[test]
    fn genus_needs_canonical() {
        let lat = pq6();
        let e1 = lat.basis_class("E1").unwrap();
        assert_eq!(lat.arithmetic_genus(&e1), Err(LatticeError::CanonicalRequired));
    }

    #[test]
    fn line_on_the_plane_is_rational() {
        let lat = SurfaceLattice::from_int_gram(&[&[1]], &["H"])
            .unwrap()
            .with_canonical(DivisorClass::from_ints(&[-3]))
            .unwrap();
        let h = lat.basis_class("H").unwrap();
        assert_eq!(lat.arithmetic_genus(&h).unwrap(), int(0));
    }

    #[test]
    fn asymmetric_gram_names_the_pair() {
        let err = SurfaceLattice::from_int_gram(&[&[1, 2], &[3, 1]], &["a", "b"]).unwrap_err();
        assert_eq!(err, LatticeError::Asymmetric { row: 0, col: 1 });
    }

    #[test]
    fn solver_reports_underdetermined_and_inconsistent() {
        let lat = pq6();
        let e1 = lat.basis_class("E1").unwrap();
        let err = lat.solve_class_from_pairings(&[(e1.clone(), int(0))]).unwrap_err();
        assert_eq!(err, LatticeError::Underdetermined { rank: 1, needed: 4 });
        let err = lat
            .solve_class_from_pairings(&[(e1.clone(), int(0)), (e1.scale(&int(2)), int(1))])
            .unwrap_err();
        assert_eq!(err, LatticeError::NoSolution);
    }

    #[test]
    fn identity_gram_zero_constraints_give_zero() {
        let lat = SurfaceLattice::from_int_gram(&[&[1, 0], &[0, 1]], &["a", "b"]).unwrap();
        let cs = vec![
            (DivisorClass::unit(2, 0), int(0)),
            (DivisorClass::unit(2, 1), int(0)),
        ];
        assert!(lat.solve_class_from_pairings(&cs).unwrap().is_zero());
    }

    #[test]
    fn expressions_round_trip_through_render() {
        let lat = pq6();
        let k = lat.parse_class("2E1+2E2+3F1+G1").unwrap();
        assert_eq!(lat.render(&k), "2E1+2E2+3F1+G1");
        let half = lat.parse_class("1/2*F1 - E2").unwrap();
        assert_eq!(half.coeffs()[2], frac(1, 2));
        assert_eq!(lat.render(&half), "-E2+1/2*F1");
        assert!(matches!(
            lat.parse_class("2E1+Q"),
            Err(LatticeError::UnknownLabel(_))
        ));
        assert!(lat.parse_class("E1 E2").is_err());
        assert_eq!(
            normalize_terms(parse_terms("E1+F1-E1+2F1").unwrap()),
            vec![(int(3), "F1".to_string())]
        );
    }
}
