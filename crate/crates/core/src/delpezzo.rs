//! Blow-ups of the plane at up to eight points: the lattice, abstract
//! (−1)/(−2) classes, and which of them are irreducible curves for a given
//! point configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::{DivisorClass, LatticeError, SurfaceLattice};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DelPezzoError {
    #[error("number of blown-up points must be in 1..=8, got {0}")]
    PointCount(usize),
    #[error("unsupported class type (D^2, K.D) = ({self_int}, {k_deg})")]
    Unsupported { self_int: i64, k_deg: i64 },
    #[error("configuration rejected: {0}")]
    Configuration(String),
    #[error("class {0} is neither realized nor excluded by the configuration rules")]
    Undecided(String),
    #[error("realized curves {0} and {1} meet negatively")]
    NegativeMeeting(String, String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `Bl_r P²` with basis `H, E1..Er`, Gram `diag(1, −1, …)` and
/// `K = −3H + ΣEi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupLattice {
    r: usize,
    lattice: SurfaceLattice,
}

impl BlowupLattice {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn lattice(&self) -> &SurfaceLattice {
        &self.lattice
    }

    pub fn into_lattice(self) -> SurfaceLattice {
        self.lattice
    }

    /// `dH − Σ mᵢEᵢ`.
    pub fn class(&self, d: i64, m: &[i64]) -> DivisorClass {
        let mut v = vec![int(d)];
        v.extend((0..self.r).map(|i| int(-m.get(i).copied().unwrap_or(0))));
        DivisorClass::new(v)
    }

    /// `c·H`.
    pub fn degree(&self, c: &DivisorClass) -> Rational {
        c.coeffs()[0].clone()
    }

    fn sum_e(&self, d: i64, points: &[usize]) -> DivisorClass {
        let mut m = vec![0; self.r];
        for &p in points {
            m[p - 1] += 1;
        }
        self.class(d, &m)
    }
}

pub fn build_blowup_lattice(r: usize) -> Result<BlowupLattice, DelPezzoError> {
    if !(1..=8).contains(&r) {
        return Err(DelPezzoError::PointCount(r));
    }
    let n = r + 1;
    let gram = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i == j, i) {
                    (false, _) => int(0),
                    (true, 0) => int(1),
                    (true, _) => int(-1),
                })
                .collect()
        })
        .collect();
    let mut names = vec!["H".to_string()];
    names.extend((1..=r).map(|i| format!("E{i}")));
    let mut k = vec![int(-3)];
    k.extend((0..r).map(|_| int(1)));
    let lattice = SurfaceLattice::new(gram, names)?.with_canonical(DivisorClass::new(k))?;
    Ok(BlowupLattice { r, lattice })
}

/// All classes with `D² = self_int` and `K·D = k_deg`, ordered by degree and
/// then by rendered form. Supported: (−1, −1) and (−2, 0).
pub fn enumerate_classes(
    lat: &BlowupLattice,
    self_int: i64,
    k_deg: i64,
) -> Result<Vec<DivisorClass>, DelPezzoError> {
    let max_deg = match (self_int, k_deg) {
        (-1, -1) => 6,
        (-2, 0) => 3,
        _ => return Err(DelPezzoError::Unsupported { self_int, k_deg }),
    };
    let mut out = Vec::new();
    let mut m = vec![0i64; lat.r];
    for d in 0..=max_deg {
        // D = dH − Σ mᵢEᵢ: Σ mᵢ = 3d + K·D and Σ mᵢ² = d² − D².
        let sum = 3 * d + k_deg;
        let squares = d * d - self_int;
        search(&mut m, 0, sum, squares, &mut |m| out.push(lat.class(d, m)));
    }
    let names = lat.lattice.basis_names();
    let mut keyed: Vec<(Rational, String, DivisorClass)> = out
        .into_iter()
        .map(|c| (lat.degree(&c), c.render(names), c))
        .collect();
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, _, c)| c).collect())
}

fn search(m: &mut [i64], i: usize, sum: i64, squares: i64, emit: &mut impl FnMut(&[i64])) {
    let left = (m.len() - i) as i64;
    if squares < 0 || sum * sum > left * squares || (sum - squares) % 2 != 0 {
        return;
    }
    if left == 0 {
        if sum == 0 && squares == 0 {
            emit(m);
        }
        return;
    }
    let bound = (squares as f64).sqrt() as i64 + 1;
    for x in -bound..=bound {
        if x * x <= squares {
            m[i] = x;
            search(m, i + 1, sum - x, squares - x * x, emit);
        }
    }
    m[i] = 0;
}

/// Blown-up points, indexed from 1. A child in `infinitely_near` lies on the
/// exceptional curve of its parent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct PointConfiguration {
    pub r: usize,
    #[serde(default)]
    pub infinitely_near: Vec<(usize, usize)>,
    #[serde(default)]
    pub collinear: Vec<Vec<usize>>,
    #[serde(default)]
    pub coconic: Vec<Vec<usize>>,
    #[serde(default)]
    pub notes: String,
}

impl PointConfiguration {
    pub fn general(r: usize) -> Self {
        PointConfiguration {
            r,
            ..Default::default()
        }
    }

    fn reject(msg: impl Into<String>) -> DelPezzoError {
        DelPezzoError::Configuration(msg.into())
    }

    pub fn validate(&self) -> Result<(), DelPezzoError> {
        if !(1..=8).contains(&self.r) {
            return Err(DelPezzoError::PointCount(self.r));
        }
        let in_range = |p: usize| (1..=self.r).contains(&p);
        let mut parent_of = BTreeMap::new();
        let mut child_of = BTreeMap::new();
        for &(child, parent) in &self.infinitely_near {
            if !in_range(child) || !in_range(parent) || child == parent {
                return Err(Self::reject(format!("bad infinitely near pair ({child}, {parent})")));
            }
            if parent_of.insert(child, parent).is_some() {
                return Err(Self::reject(format!("point {child} has two parents")));
            }
            if child_of.insert(parent, child).is_some() {
                return Err(Self::reject(format!(
                    "point {parent} has two infinitely near points, so E{parent} is not a chain"
                )));
            }
        }
        for &start in parent_of.keys() {
            let mut p = start;
            for _ in 0..=self.r {
                match parent_of.get(&p) {
                    Some(&q) if q == start => {
                        return Err(Self::reject(format!("infinitely near cycle through {start}")))
                    }
                    Some(&q) => p = q,
                    None => break,
                }
            }
        }
        let sets = |lists: &[Vec<usize>], what: &str| -> Result<Vec<BTreeSet<usize>>, DelPezzoError> {
            lists
                .iter()
                .map(|s| {
                    let set: BTreeSet<usize> = s.iter().copied().collect();
                    if set.len() != s.len() || !s.iter().all(|&p| in_range(p)) {
                        return Err(Self::reject(format!("bad {what} set {s:?}")));
                    }
                    Ok(set)
                })
                .collect()
        };
        let lines = sets(&self.collinear, "collinear")?;
        for s in &lines {
            if s.len() < 3 {
                return Err(Self::reject(format!("collinear set {s:?} has fewer than three points")));
            }
            if s.len() >= 4 {
                return Err(Self::reject(format!("four points on a line: {s:?}")));
            }
        }
        for (i, a) in lines.iter().enumerate() {
            for b in &lines[i + 1..] {
                if a.intersection(b).count() >= 2 {
                    return Err(Self::reject(format!(
                        "collinear sets {a:?} and {b:?} share two points but are listed as different lines"
                    )));
                }
            }
        }
        for s in &sets(&self.coconic, "coconic")? {
            if s.len() >= 7 {
                return Err(Self::reject(format!("seven points on a conic: {s:?}")));
            }
            if s.len() < 5 {
                return Err(Self::reject(format!("coconic set {s:?} has fewer than five points")));
            }
            if let Some(l) = lines.iter().find(|l| l.is_subset(s)) {
                return Err(Self::reject(format!(
                    "conic through {s:?} contains the collinear triple {l:?} and is reducible"
                )));
            }
        }
        Ok(())
    }

    /// Lines through at least two points: the listed collinear sets plus
    /// every pair not contained in one of them.
    pub fn lines(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .collinear
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.sort();
                s
            })
            .collect();
        for i in 1..=self.r {
            for j in i + 1..=self.r {
                if !self.collinear.iter().any(|s| s.contains(&i) && s.contains(&j)) {
                    out.push(vec![i, j]);
                }
            }
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeCurveRecord {
    pub label: String,
    pub class: DivisorClass,
    pub self_int: Rational,
    pub genus: Rational,
    pub on_branch: Option<bool>,
}

impl NegativeCurveRecord {
    pub fn from_class(
        lat: &SurfaceLattice,
        label: impl Into<String>,
        class: DivisorClass,
    ) -> Result<Self, LatticeError> {
        Ok(NegativeCurveRecord {
            label: label.into(),
            self_int: lat.self_intersection(&class)?,
            genus: lat.arithmetic_genus(&class)?,
            class,
            on_branch: None,
        })
    }
}

/// A candidate class ruled out because it meets a realized curve negatively:
/// any member would have to contain that curve, leaving `residual`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exclusion {
    pub class: DivisorClass,
    pub witness: String,
    pub product: Rational,
    pub residual: DivisorClass,
}

#[derive(Debug, Clone)]
pub struct Realization {
    pub lattice: BlowupLattice,
    pub records: Vec<NegativeCurveRecord>,
    pub exclusions: Vec<Exclusion>,
}

impl Realization {
    pub fn exclusion_for(&self, class: &DivisorClass) -> Option<&Exclusion> {
        self.exclusions.iter().find(|e| &e.class == class)
    }

    pub fn record(&self, label: &str) -> Option<&NegativeCurveRecord> {
        self.records.iter().find(|r| r.label == label)
    }
}

fn digits(points: &[usize]) -> String {
    points.iter().map(|p| p.to_string()).collect()
}

/// Applies the realization rules: exceptional curves and chains, lines
/// through maximal collinear sets, licensed conics, and exclusion of every
/// other candidate by a negative product with a realized curve.
pub fn realize(cfg: &PointConfiguration) -> Result<Realization, DelPezzoError> {
    cfg.validate()?;
    let bl = build_blowup_lattice(cfg.r)?;
    let lat = bl.lattice();
    let child: BTreeMap<usize, usize> = cfg.infinitely_near.iter().map(|&(c, p)| (p, c)).collect();

    let mut found: Vec<(String, DivisorClass)> = Vec::new();
    for i in 1..=cfg.r {
        let e = bl.sum_e(0, &[i]).scale(&int(-1));
        match child.get(&i) {
            None => found.push((format!("E{i}"), e)),
            Some(&j) => {
                let ej = bl.sum_e(0, &[j]).scale(&int(-1));
                found.push((format!("E{i}-E{j}"), &e - &ej));
            }
        }
    }
    for line in cfg.lines() {
        found.push((format!("L{}", digits(&line)), bl.sum_e(1, &line)));
    }
    for set in &cfg.coconic {
        let mut s = set.clone();
        s.sort();
        found.push((format!("Q{}", digits(&s)), bl.sum_e(2, &s)));
    }

    let minus1 = enumerate_classes(&bl, -1, -1)?;
    let minus2 = enumerate_classes(&bl, -2, 0)?;
    let mut records = Vec::new();
    for (label, class) in found {
        let rec = NegativeCurveRecord::from_class(lat, label, class)?;
        let k = lat.pairing(lat.canonical().expect("set above"), &rec.class)?;
        let known = if rec.self_int == int(-1) && k == int(-1) {
            minus1.contains(&rec.class)
        } else if rec.self_int == int(-2) && k.is_zero() {
            minus2.contains(&rec.class)
        } else {
            false
        };
        if !known {
            return Err(PointConfiguration::reject(format!(
                "{} = {} is not a (-1)- or (-2)-class",
                rec.label,
                lat.render(&rec.class)
            )));
        }
        records.push(rec);
    }
    for (i, a) in records.iter().enumerate() {
        for b in &records[i + 1..] {
            if lat.pairing(&a.class, &b.class)?.is_negative() {
                return Err(DelPezzoError::NegativeMeeting(a.label.clone(), b.label.clone()));
            }
        }
    }

    let mut exclusions = Vec::new();
    for cand in minus1.iter().chain(&minus2) {
        if records.iter().any(|r| &r.class == cand) {
            continue;
        }
        let mut hit = None;
        for r in &records {
            let p = lat.pairing(cand, &r.class)?;
            if p.is_negative() {
                hit = Some((r, p));
                break;
            }
        }
        let Some((r, product)) = hit else {
            return Err(DelPezzoError::Undecided(lat.render(cand)));
        };
        exclusions.push(Exclusion {
            class: cand.clone(),
            witness: r.label.clone(),
            product,
            residual: cand - &r.class,
        });
    }
    Ok(Realization {
        lattice: bl,
        records,
        exclusions,
    })
}

pub fn realized_negative_curves(cfg: &PointConfiguration) -> Result<Vec<NegativeCurveRecord>, DelPezzoError> {
    realize(cfg).map(|r| r.records)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakDelPezzoReport {
    pub k2: Rational,
    pub anticanonical_nonnegative: bool,
    pub minus2_curves: usize,
}

impl WeakDelPezzoReport {
    pub fn is_weak_del_pezzo(&self) -> bool {
        self.k2.is_positive() && self.anticanonical_nonnegative
    }

    pub fn is_del_pezzo(&self) -> bool {
        self.is_weak_del_pezzo() && self.minus2_curves == 0
    }
}

impl fmt::Display for WeakDelPezzoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.is_del_pezzo() {
            "del Pezzo"
        } else if self.is_weak_del_pezzo() {
            "weak del Pezzo"
        } else {
            "not weak del Pezzo"
        };
        write!(f, "K^2 = {}, {kind}, {} (-2)-curves", self.k2, self.minus2_curves)
    }
}

pub fn weak_dp_check(cfg: &PointConfiguration) -> Result<WeakDelPezzoReport, DelPezzoError> {
    let real = realize(cfg)?;
    Ok(weak_dp_report(&real))
}

pub fn weak_dp_report(real: &Realization) -> WeakDelPezzoReport {
    let lat = real.lattice.lattice();
    let k = lat.canonical().expect("blow-up lattices carry K");
    let mut nonneg = true;
    let mut zero = 0;
    for r in &real.records {
        let minus_k = -lat.pairing(k, &r.class).expect("conforming");
        nonneg &= !minus_k.is_negative();
        if minus_k.is_zero() {
            zero += 1;
        }
    }
    WeakDelPezzoReport {
        k2: lat.canonical_square().expect("K set"),
        anticanonical_nonnegative: nonneg,
        minus2_curves: zero,
    }
}
