//! Resolutions of `(C × D)/G`: Hirzebruch–Jung strings, strict-transform
//! fiber self-intersections and the lattice spanned by exceptional curves
//! and reduced fibers.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::{DivisorClass, LatticeError, SurfaceLattice};
use crate::linalg::{self, SolveOutcome};
use crate::rational::{dot, frac, int, Q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PqError {
    #[error("1/{n}(1,{k}) is not a cyclic quotient singularity type (need 0 < k < n, gcd 1)")]
    InvalidPoint { n: u32, k: u32 },
    #[error("inconsistent incidence: {0}")]
    Incidence(String),
    #[error("no intersection number given for {0}·{1}")]
    MissingCross(String, String),
    #[error("unknown curve {0}")]
    UnknownLabel(String),
    #[error("chosen basis has singular intersection matrix")]
    DegenerateBasis,
    #[error("spanning set has rank {rank}, lattice has rank {needed}")]
    NotSpanning { rank: usize, needed: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HJString {
    pub n: u32,
    pub k: u32,
    pub coefficients: Vec<u32>,
}

impl HJString {
    /// `b₁ − 1/(b₂ − 1/(… − 1/b_l))`.
    pub fn evaluate(&self) -> Rational {
        let mut acc: Option<Rational> = None;
        for &b in self.coefficients.iter().rev() {
            let b = int(b as i64);
            acc = Some(match acc {
                None => b,
                Some(t) => b - int(1) / t,
            });
        }
        acc.unwrap_or_else(Rational::zero)
    }
}

fn check_point(n: u32, k: u32) -> Result<(), PqError> {
    if k == 0 || k >= n || n.gcd(&k) != 1 {
        return Err(PqError::InvalidPoint { n, k });
    }
    Ok(())
}

pub fn hj_expansion(n: u32, k: u32) -> Result<HJString, PqError> {
    check_point(n, k)?;
    let (mut a, mut b) = (n as u64, k as u64);
    let mut coefficients = Vec::new();
    while b > 0 {
        let c = a.div_ceil(b);
        coefficients.push(c as u32);
        (a, b) = (b, c * b - a);
    }
    Ok(HJString { n, k, coefficients })
}

/// `F̃² = −Σ kᵢ/nᵢ` over the singular points on the fiber.
pub fn polizzi_fiber_selfint(points: &[(u32, u32)]) -> Result<Rational, PqError> {
    let mut sum = Rational::zero();
    for &(n, k) in points {
        check_point(n, k)?;
        sum += frac(k as i64, n as i64);
    }
    Ok(-sum)
}

/// Inverse of `k` modulo `n`: the type of the same point seen from the
/// other fibration.
fn dual_k(n: u32, k: u32) -> u32 {
    (1..n).find(|x| (x * k) % n == 1).unwrap_or(1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub label: String,
    pub n: u32,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fiber {
    pub label: String,
    pub genus: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<u32>,
    #[serde(default)]
    pub points: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValue {
    pub f: String,
    pub g: String,
    pub value: Q,
}

/// Reduced fibers of both fibrations and the singular points on them. Each
/// point resolves to a Hirzebruch–Jung string whose first component meets
/// its F-fiber and whose last component meets its G-fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberIncidence {
    #[serde(default)]
    pub points: Vec<SingularPoint>,
    pub f_fibers: Vec<Fiber>,
    pub g_fibers: Vec<Fiber>,
    #[serde(default)]
    pub cross: Vec<CrossValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PqCurve {
    pub label: String,
    pub class: DivisorClass,
    pub genus: i64,
}

#[derive(Debug, Clone)]
pub struct PqLattice {
    pub lattice: SurfaceLattice,
    pub curves: Vec<PqCurve>,
    pub labels: Vec<String>,
    pub table: Vec<Vec<Rational>>,
}

impl PqLattice {
    pub fn class(&self, label: &str) -> Option<&DivisorClass> {
        self.curves.iter().find(|c| c.label == label).map(|c| &c.class)
    }

    /// Parses an expression in curve labels, e.g. `"F1+E1+G2-F2-E3"`.
    pub fn parse(&self, expr: &str) -> Result<DivisorClass, LatticeError> {
        self.lattice
            .parse_class_with(expr, |l| self.class(l).cloned())
    }
}

/// Assembles the full intersection table of exceptional curves and reduced
/// fibers, reduces it to a basis and solves `K` from adjunction.
pub fn build_pq_lattice(data: &FiberIncidence) -> Result<PqLattice, PqError> {
    let mut labels: Vec<String> = Vec::new();
    let mut genera: Vec<i64> = Vec::new();
    // For every point: indices of its string components.
    let mut strings: BTreeMap<&str, (Vec<usize>, &SingularPoint)> = BTreeMap::new();
    let mut selfint: Vec<Rational> = Vec::new();
    for p in &data.points {
        let hj = hj_expansion(p.n, p.k)?;
        let mut idx = Vec::new();
        for (i, &b) in hj.coefficients.iter().enumerate() {
            idx.push(labels.len());
            labels.push(if hj.coefficients.len() == 1 {
                p.label.clone()
            } else {
                format!("{}_{}", p.label, i + 1)
            });
            genera.push(0);
            selfint.push(int(-(b as i64)));
        }
        if strings.insert(p.label.as_str(), (idx, p)).is_some() {
            return Err(PqError::Incidence(format!("point {} listed twice", p.label)));
        }
    }
    let n_exc = labels.len();
    let mut side_of: Vec<(bool, Vec<&str>)> = Vec::new();
    for (is_f, fibers) in [(true, &data.f_fibers), (false, &data.g_fibers)] {
        for f in fibers {
            let mut pts = Vec::new();
            for p in &f.points {
                let (_, sp) = strings
                    .get(p.as_str())
                    .ok_or_else(|| PqError::UnknownLabel(p.clone()))?;
                pts.push(if is_f { (sp.n, sp.k) } else { (sp.n, dual_k(sp.n, sp.k)) });
            }
            labels.push(f.label.clone());
            genera.push(f.genus);
            selfint.push(polizzi_fiber_selfint(&pts)?);
            side_of.push((is_f, f.points.iter().map(String::as_str).collect()));
        }
    }
    if labels.iter().enumerate().any(|(i, l)| labels[..i].contains(l)) {
        return Err(PqError::Incidence("duplicate curve label".into()));
    }
    for &name in strings.keys() {
        for want_f in [true, false] {
            let hits = side_of
                .iter()
                .filter(|(is_f, pts)| *is_f == want_f && pts.contains(&name))
                .count();
            if hits != 1 {
                let side = if want_f { "F" } else { "G" };
                return Err(PqError::Incidence(format!(
                    "point {name} lies on {hits} {side}-fibers, expected exactly one"
                )));
            }
        }
    }

    let n = labels.len();
    let mut table = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        table[i][i] = selfint[i].clone();
    }
    for (idx, _) in strings.values() {
        for w in idx.windows(2) {
            table[w[0]][w[1]] = int(1);
            table[w[1]][w[0]] = int(1);
        }
    }
    for (j, (is_f, pts)) in side_of.iter().enumerate() {
        let fj = n_exc + j;
        for p in pts {
            let (idx, _) = &strings[p];
            let c = if *is_f { idx[0] } else { *idx.last().expect("strings are nonempty") };
            table[fj][c] += int(1);
            table[c][fj] += int(1);
        }
    }
    let nf = data.f_fibers.len();
    for (a, f) in data.f_fibers.iter().enumerate() {
        for (b, g) in data.g_fibers.iter().enumerate() {
            let v = data
                .cross
                .iter()
                .find(|c| c.f == f.label && c.g == g.label)
                .ok_or_else(|| PqError::MissingCross(f.label.clone(), g.label.clone()))?;
            let (i, j) = (n_exc + a, n_exc + nf + b);
            table[i][j] = v.value.0.clone();
            table[j][i] = v.value.0.clone();
        }
    }
    for c in &data.cross {
        let known = |l: &str, fs: &[Fiber]| fs.iter().any(|f| f.label == l);
        if !known(&c.f, &data.f_fibers) || !known(&c.g, &data.g_fibers) {
            return Err(PqError::UnknownLabel(format!("{}·{}", c.f, c.g)));
        }
    }

    let basis: Vec<usize> = match &data.basis {
        Some(names) => names
            .iter()
            .map(|l| labels.iter().position(|x| x == l).ok_or_else(|| PqError::UnknownLabel(l.clone())))
            .collect::<Result<_, _>>()?,
        None => {
            let mut chosen: Vec<usize> = Vec::new();
            for i in 0..n {
                let mut rows: Vec<Vec<Rational>> = chosen.iter().map(|&j| table[j].clone()).collect();
                rows.push(table[i].clone());
                if linalg::rank(&rows) == rows.len() {
                    chosen.push(i);
                }
            }
            chosen
        }
    };
    let gram: Vec<Vec<Rational>> = basis
        .iter()
        .map(|&i| basis.iter().map(|&j| table[i][j].clone()).collect())
        .collect();
    if linalg::determinant(&gram).is_zero() || linalg::rank(&table) != basis.len() {
        return Err(PqError::DegenerateBasis);
    }
    let names: Vec<String> = basis.iter().map(|&i| labels[i].clone()).collect();
    let lattice = SurfaceLattice::new(gram.clone(), names)?;

    let mut curves = Vec::new();
    for i in 0..n {
        let rhs: Vec<Rational> = basis.iter().map(|&b| table[i][b].clone()).collect();
        let SolveOutcome::Unique(x) = linalg::solve(&gram, &rhs, basis.len()) else {
            return Err(PqError::DegenerateBasis);
        };
        curves.push(PqCurve {
            label: labels[i].clone(),
            class: DivisorClass::new(x),
            genus: genera[i],
        });
    }
    for i in 0..n {
        for j in 0..n {
            if lattice.pairing(&curves[i].class, &curves[j].class)? != table[i][j] {
                return Err(PqError::Incidence(format!(
                    "{}·{} is not determined by the basis",
                    labels[i], labels[j]
                )));
            }
        }
    }

    let constraints: Vec<(DivisorClass, Rational)> = curves
        .iter()
        .map(|c| {
            let sq = lattice.self_intersection(&c.class)?;
            Ok((c.class.clone(), int(2 * c.genus - 2) - sq))
        })
        .collect::<Result<_, LatticeError>>()?;
    let k = lattice.solve_class_from_pairings(&constraints)?;
    let lattice = lattice.with_canonical(k)?;
    Ok(PqLattice {
        lattice,
        curves,
        labels,
        table,
    })
}

/// `⟨lhs − rhs, s⟩ = 0` for every `s`; refuses a non-spanning set.
pub fn verify_numerical_equivalence(
    lat: &SurfaceLattice,
    lhs: &DivisorClass,
    rhs: &DivisorClass,
    spanning: &[DivisorClass],
) -> Result<bool, PqError> {
    let rank = lat.span_rank(spanning);
    if rank < lat.rank() {
        return Err(PqError::NotSpanning {
            rank,
            needed: lat.rank(),
        });
    }
    let diff = lhs - rhs;
    for s in spanning {
        if !lat.pairing(&diff, s)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessClaim {
    /// The vector pairs negatively with one generator and positively with
    /// another, so neither it nor its negative is nef.
    NotNef {
        negative: (String, DivisorClass),
        positive: (String, DivisorClass),
    },
    /// The vector is nef and numerically equal to each listed class.
    Nef { equivalents: Vec<(String, DivisorClass)> },
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCase {
    pub name: String,
    pub subset: Vec<(String, DivisorClass)>,
    pub vector: DivisorClass,
    pub claim: WitnessClaim,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessOutcome {
    pub name: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Re-checks every claim of every case by exact arithmetic. `eff` are the
/// effective generators used for nefness and `spanning` any spanning set.
pub fn semiample_witness_check(
    lat: &SurfaceLattice,
    eff: &[DivisorClass],
    spanning: &[DivisorClass],
    cases: &[WitnessCase],
) -> Result<Vec<WitnessOutcome>, PqError> {
    let mut out = Vec::new();
    for case in cases {
        let mut failures = Vec::new();
        let w = &case.vector;
        if matches!(case.claim, WitnessClaim::Vacuous) && case.subset.is_empty() {
            out.push(WitnessOutcome {
                name: case.name.clone(),
                passed: true,
                failures,
            });
            continue;
        }
        if w.is_zero() {
            failures.push("vector is zero".to_string());
        }
        let members: Vec<DivisorClass> = case.subset.iter().map(|(_, c)| c.clone()).collect();
        if lat.span_rank(&members) != members.len() {
            failures.push("subset is linearly dependent".to_string());
        }
        for (label, c) in &case.subset {
            let p = lat.pairing(w, c)?;
            if !p.is_zero() {
                failures.push(format!("pairs {p} with {label}"));
            }
        }
        match &case.claim {
            WitnessClaim::NotNef { negative, positive } => {
                let n = lat.pairing(w, &negative.1)?;
                if !n.is_negative() {
                    failures.push(format!("pairs {n} with {}, expected < 0", negative.0));
                }
                let p = lat.pairing(w, &positive.1)?;
                if !p.is_positive() {
                    failures.push(format!("pairs {p} with {}, expected > 0", positive.0));
                }
            }
            WitnessClaim::Nef { equivalents } => {
                let f = lat.functional(w)?;
                if let Some(g) = eff.iter().find(|g| dot(&f, g.coeffs()).is_negative()) {
                    failures.push(format!("negative on effective class {}", lat.render(g)));
                }
                for (expr, c) in equivalents {
                    if !verify_numerical_equivalence(lat, w, c, spanning)? {
                        failures.push(format!("not numerically equal to {expr}"));
                    }
                }
            }
            WitnessClaim::Vacuous => {}
        }
        out.push(WitnessOutcome {
            name: case.name.clone(),
            passed: failures.is_empty(),
            failures,
        });
    }
    Ok(out)
}
