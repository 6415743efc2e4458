use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::{Claim, ClaimKind, Expect, Family, LatticeSource, SurfaceEntry, WitnessSpec};
use crate::cone::{annihilator_facet_scan, Cone, Membership};
use crate::covers::{scaling_defect, CoverDescriptor};
use crate::delpezzo::{realize, weak_dp_report, Realization};
use crate::lattice::{DivisorClass, SurfaceLattice};
use crate::pqsurf::{
    build_pq_lattice, semiample_witness_check, verify_numerical_equivalence, WitnessCase, WitnessClaim,
};
use crate::rational::{format_rational, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    ExpectedDiscrepancy,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::ExpectedDiscrepancy => "expected-discrepancy",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub id: String,
    pub family: Family,
    pub k2: i64,
    pub lines: Vec<CheckLine>,
    /// `(C², p_a(C), count)` over the negative curves found.
    pub negatives: Vec<(Rational, Rational, usize)>,
    pub b_x: Rational,
    pub imported: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.status != Status::Fail)
    }

    pub fn line(&self, name: &str) -> Option<&CheckLine> {
        self.lines.iter().find(|l| l.name == name)
    }

    pub fn lines_named<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CheckLine> + 'a {
        self.lines.iter().filter(move |l| l.name.starts_with(prefix))
    }

    pub fn machine_verified(&self) -> Vec<&str> {
        self.lines
            .iter()
            .filter(|l| l.status == Status::Pass)
            .map(|l| l.name.as_str())
            .collect()
    }

    pub fn negative_count(&self) -> usize {
        self.negatives.iter().map(|n| n.2).sum()
    }

    fn push(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.lines.push(CheckLine {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(name, status, detail);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "family": self.family.to_string(),
            "k2": self.k2,
            "passed": self.passed(),
            "checks": self.lines.iter().map(|l| json!({
                "name": l.name,
                "status": l.status.as_str(),
                "detail": l.detail,
            })).collect::<Vec<_>>(),
            "negatives": self.negatives.iter().map(|(s, g, m)| json!([
                format_rational(s), format_rational(g), m
            ])).collect::<Vec<_>>(),
            "negative_summary": super::render_multiset(&self.negatives),
            "b_x": format_rational(&self.b_x),
            "machine_verified": self.machine_verified(),
            "imported": self.imported,
        })
    }
}

/// An entry's lattice source normalized to a lattice plus its named curves
/// (label, class, declared genus).
#[derive(Debug, Clone)]
pub struct ResolvedEntry {
    pub base: Arc<SurfaceLattice>,
    pub roster: Vec<(String, DivisorClass, Option<i64>)>,
    pub realization: Option<Realization>,
}

impl ResolvedEntry {
    /// Reads a class expression in basis names, curve labels and `K`.
    pub fn parse(&self, expr: &str) -> Result<DivisorClass, String> {
        self.base
            .parse_class_with(expr, |l| {
                self.roster.iter().find(|(n, _, _)| n == l).map(|(_, c, _)| c.clone())
            })
            .map_err(|e| e.to_string())
    }

    pub fn parse_all(&self, exprs: &[String]) -> Result<Vec<DivisorClass>, String> {
        exprs.iter().map(|e| self.parse(e)).collect()
    }

    pub fn basis(&self) -> Vec<DivisorClass> {
        (0..self.base.rank()).map(|i| DivisorClass::unit(self.base.rank(), i)).collect()
    }
}

pub fn resolve_entry(e: &SurfaceEntry) -> Result<ResolvedEntry, String> {
    match &e.lattice {
        LatticeSource::Explicit {
            basis,
            gram,
            canonical,
            torsion_note,
        } => {
            let g = gram.iter().map(|row| row.iter().map(|q| q.0.clone()).collect()).collect();
            let mut lat = SurfaceLattice::new(g, basis.clone()).map_err(|e| e.to_string())?;
            if let Some(k) = canonical {
                let k = lat.parse_class(k).map_err(|e| e.to_string())?;
                lat = lat.with_canonical(k).map_err(|e| e.to_string())?;
            }
            if let Some(t) = torsion_note {
                lat = lat.with_torsion_note(t.clone());
            }
            let mut ctx = ResolvedEntry {
                base: Arc::new(lat),
                roster: Vec::new(),
                realization: None,
            };
            for c in &e.curves {
                let class = ctx.parse(&c.class)?;
                ctx.roster.push((c.label.clone(), class, c.genus));
            }
            Ok(ctx)
        }
        LatticeSource::Blowup(cfg) => {
            let real = realize(cfg).map_err(|e| e.to_string())?;
            Ok(ResolvedEntry {
                base: Arc::new(real.lattice.lattice().clone()),
                roster: real
                    .records
                    .iter()
                    .map(|r| (r.label.clone(), r.class.clone(), None))
                    .collect(),
                realization: Some(real),
            })
        }
        LatticeSource::ProductQuotient(data) => {
            let pq = build_pq_lattice(data).map_err(|e| e.to_string())?;
            Ok(ResolvedEntry {
                base: Arc::new(pq.lattice.clone()),
                roster: pq
                    .curves
                    .iter()
                    .map(|c| (c.label.clone(), c.class.clone(), Some(c.genus)))
                    .collect(),
                realization: None,
            })
        }
    }
}

fn same_ray_set(a: &[DivisorClass], b: &[DivisorClass]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| x.same_ray(y)))
}

fn imported_claims(e: &SurfaceEntry) -> Vec<String> {
    let mut out = vec![
        "the listed effective generators span Eff (completeness)".to_string(),
        "nef generators are semiample".to_string(),
    ];
    match &e.lattice {
        LatticeSource::Blowup(_) => out.push("negative curves on the base are (-1)- and (-2)-curves".into()),
        LatticeSource::ProductQuotient(_) => out.push("reduced fibers and singular points as listed".into()),
        LatticeSource::Explicit { .. } => out.push("intersection numbers as listed".into()),
    }
    if e.cover.is_some() {
        out.push("existence of the cover and its canonical relation".into());
        out.push("pullbacks of negative curves do not split".into());
    }
    if e.family == Family::FakeProjectivePlane {
        out.push("Picard number one".into());
    }
    out
}

/// Replays every check of an entry. Mathematical failures become report
/// lines; this function never panics on bad data.
pub fn verify_entry(e: &SurfaceEntry) -> VerificationReport {
    let mut r = VerificationReport {
        id: e.id.clone(),
        family: e.family.clone(),
        k2: e.k2,
        lines: Vec::new(),
        negatives: Vec::new(),
        b_x: Rational::zero(),
        imported: imported_claims(e),
    };
    let ctx = match resolve_entry(e) {
        Ok(c) => c,
        Err(msg) => {
            r.check("lattice", false, msg);
            return r;
        }
    };
    let base = Arc::clone(&ctx.base);
    r.check(
        "lattice",
        true,
        format!(
            "rank {}, symmetric, det {}",
            base.rank(),
            format_rational(&crate::linalg::determinant(base.gram()))
        ),
    );

    // Genus of every listed curve on the lattice it is declared in.
    let mut bad = Vec::new();
    for (label, class, declared) in &ctx.roster {
        match base.arithmetic_genus(class) {
            Err(err) => bad.push(format!("{label}: {err}")),
            Ok(g) => {
                let ok = g.is_integer()
                    && !g.is_negative()
                    && declared.is_none_or(|d| g == int(d));
                if !ok {
                    bad.push(format!("{label}: genus {}", format_rational(&g)));
                }
            }
        }
    }
    if !ctx.roster.is_empty() {
        let detail = if bad.is_empty() {
            format!("{} curves with integral genus", ctx.roster.len())
        } else {
            bad.join("; ")
        };
        r.check("adjunction", bad.is_empty(), detail);
    }

    if let Some(real) = &ctx.realization {
        let count = |s: i64| real.records.iter().filter(|c| c.self_int == int(s)).count();
        r.check(
            "realization",
            true,
            format!(
                "{} (-1)-curves, {} (-2)-curves, {} candidate classes excluded",
                count(-1),
                count(-2),
                real.exclusions.len()
            ),
        );
        let rep = weak_dp_report(real);
        r.check("weak del Pezzo", rep.is_weak_del_pezzo(), rep.to_string());
    }

    let eff_gens = match &e.eff_generators {
        Some(list) => ctx.parse_all(list),
        None => Ok(ctx.roster.iter().map(|(_, c, _)| c.clone()).collect()),
    };
    let eff_gens = match eff_gens {
        Ok(g) => g,
        Err(msg) => {
            r.check("effective cone", false, msg);
            return r;
        }
    };
    let eff = match Cone::new(Arc::clone(&base), eff_gens) {
        Ok(c) => c,
        Err(err) => {
            r.check("effective cone", false, err.to_string());
            return r;
        }
    };
    r.check(
        "effective cone",
        eff.is_pointed(),
        format!("{} extremal rays, pointed: {}", eff.extremal_rays().len(), eff.is_pointed()),
    );
    let dual_eff = match eff.dual_cone() {
        Ok(c) => c,
        Err(err) => {
            r.check("duality (double description)", false, err.to_string());
            return r;
        }
    };
    let nef = match &e.nef_generators {
        Some(list) => match ctx.parse_all(list).map(|g| Cone::new(Arc::clone(&base), g)) {
            Ok(Ok(c)) => Some(c),
            Ok(Err(err)) => {
                r.check("nef cone", false, err.to_string());
                None
            }
            Err(msg) => {
                r.check("nef cone", false, msg);
                None
            }
        },
        None => None,
    };
    if let Some(nef) = &nef {
        let forward = dual_eff.cone_equal(nef).unwrap_or(false);
        let backward = nef.dual_cone().and_then(|d| d.cone_equal(&eff)).unwrap_or(false);
        r.check(
            "duality (double description)",
            forward && backward,
            format!("dual(Eff) = Nef: {forward}, dual(Nef) = Eff: {backward}"),
        );
    } else {
        r.check(
            "duality (double description)",
            dual_eff.is_pointed(),
            format!("Nef computed: {} extremal rays", dual_eff.extremal_rays().len()),
        );
    }
    // The reverse scan runs over subsets of the Nef generators, so it is only
    // done when they are declared (and hence few).
    match annihilator_facet_scan(&base, eff.generators()) {
        Ok(a) => {
            let ok_nef = same_ray_set(&a, dual_eff.extremal_rays());
            let ok_eff = match &nef {
                Some(n) => annihilator_facet_scan(&base, n.generators())
                    .map(|b| same_ray_set(&b, eff.extremal_rays()))
                    .unwrap_or(false),
                None => true,
            };
            let detail = format!(
                "Nef normals agree with double description: {ok_nef}{}",
                if nef.is_some() {
                    format!("; Eff normals agree: {ok_eff}")
                } else {
                    String::new()
                }
            );
            r.check("duality (annihilator scan)", ok_nef && ok_eff, detail);
        }
        Err(err) => r.check("duality (annihilator scan)", false, err.to_string()),
    }

    let cover = match &e.cover {
        None => None,
        Some(spec) => {
            let built = ctx.parse(&spec.pullback_class).and_then(|a| {
                CoverDescriptor::new(
                    Arc::clone(&base),
                    ctx.roster.iter().map(|(l, c, _)| (l.clone(), c.clone())).collect(),
                    spec.degree,
                    spec.multiplier,
                    a,
                    spec.ramification.clone(),
                )
                .map_err(|e| e.to_string())
            });
            match built {
                Ok(c) => Some(c),
                Err(msg) => {
                    r.check("cover", false, msg);
                    return r;
                }
            }
        }
    };

    // Negative curves are exactly the extremal rays of Eff with negative square.
    let mut found: Vec<(String, Rational, Rational)> = Vec::new();
    let mut problems = Vec::new();
    for ray in eff.extremal_rays() {
        let sq = base.self_intersection(ray).expect("conforming");
        if !sq.is_negative() {
            continue;
        }
        let Some((label, _, _)) = ctx.roster.iter().find(|(_, c, _)| c.same_ray(ray)) else {
            problems.push(format!("negative ray {} has no curve", base.render(ray)));
            continue;
        };
        let data = match &cover {
            Some(cov) => cov
                .reduced_pullback(label)
                .map(|rec| (rec.self_int, rec.genus))
                .map_err(|e| e.to_string()),
            None => base
                .self_intersection(ray)
                .and_then(|s| {
                    let c = &ctx.roster.iter().find(|(l, _, _)| l == label).expect("found above").1;
                    Ok((s, base.arithmetic_genus(c)?))
                })
                .map_err(|e| e.to_string()),
        };
        match data {
            Ok((s, g)) => found.push((label.clone(), s, g)),
            Err(msg) => problems.push(msg),
        }
    }
    for (label, class, _) in &ctx.roster {
        let sq = base.self_intersection(class).expect("conforming");
        if sq.is_negative() && !eff.extremal_rays().iter().any(|ray| ray.same_ray(class)) {
            problems.push(format!("negative curve {label} is not extremal in Eff"));
        }
    }
    let mut tally: BTreeMap<(Rational, Rational), usize> = BTreeMap::new();
    for (_, s, g) in &found {
        *tally.entry((s.clone(), g.clone())).or_default() += 1;
    }
    r.negatives = tally.into_iter().map(|((s, g), m)| (s, g, m)).collect();
    r.negatives = super::table::sorted_multiset(&r.negatives);
    let expected: Vec<(Rational, Rational, usize)> = super::table::sorted_multiset(
        &e.expected_negatives
            .iter()
            .map(|[s, g, m]| (int(*s), int(*g), *m as usize))
            .collect::<Vec<_>>(),
    );
    let summary = super::render_multiset(&r.negatives);
    if problems.is_empty() {
        r.check(
            "negative curves",
            r.negatives == expected,
            format!(
                "{}: {} (expected {})",
                r.negative_count(),
                summary,
                super::render_multiset(&expected)
            ),
        );
    } else {
        r.check("negative curves", false, problems.join("; "));
    }
    r.b_x = r.negatives.iter().map(|(s, _, _)| -s).max().unwrap_or_else(Rational::zero);
    let expected_b = expected.iter().map(|(s, _, _)| -s).max().unwrap_or_else(Rational::zero);
    r.check(
        "bounded negativity",
        r.b_x == expected_b,
        format!("b_X = {}", format_rational(&r.b_x)),
    );
    if found.is_empty() {
        let rays = eff.extremal_rays();
        let nonneg = rays.iter().all(|a| {
            rays.iter()
                .all(|b| !base.pairing(a, b).expect("conforming").is_negative())
        });
        r.check(
            "no negative classes",
            nonneg,
            "intersection form is nonnegative on all pairs of extremal rays of Eff",
        );
    }

    match &cover {
        Some(cov) => verify_cover(&mut r, e, cov, &eff, &dual_eff, &ctx),
        None => match base.canonical_square() {
            Ok(k2) => r.check("K^2", k2 == int(e.k2), format!("K^2 = {}", format_rational(&k2))),
            Err(err) => r.check("K^2", false, err.to_string()),
        },
    }

    for claim in &e.claims {
        run_claim(&mut r, claim, &ctx, &eff);
    }
    r
}

fn verify_cover(
    r: &mut VerificationReport,
    e: &SurfaceEntry,
    cov: &CoverDescriptor,
    eff: &Cone,
    nef: &Cone,
    ctx: &ResolvedEntry,
) {
    let x = match cov.pullback_lattice() {
        Ok(x) => x,
        Err(err) => {
            r.check("K^2", false, err.to_string());
            return;
        }
    };
    let k2 = x.canonical_square().expect("pullback lattice carries K");
    r.check(
        "K^2",
        k2 == int(e.k2),
        format!(
            "{}·K_X = pullback of {}, degree {}: K_X^2 = {}",
            cov.multiplier(),
            ctx.base.render(cov.pullback_class()),
            cov.degree(),
            format_rational(&k2)
        ),
    );
    let basis = ctx.basis();
    let scaled = basis.iter().all(|a| {
        basis
            .iter()
            .all(|b| scaling_defect(cov, a, b).map(|d| d.is_zero()).unwrap_or(false))
    });
    r.check("pairing scaling", scaled, format!("X form = {} × Y form", cov.degree()));
    let bad: Vec<String> = ctx
        .roster
        .iter()
        .filter_map(|(l, _, _)| cov.reduced_pullback(l).err().map(|e| e.to_string()))
        .collect();
    r.check(
        "genus integrality",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} reduced pullbacks", ctx.roster.len())
        } else {
            bad.join("; ")
        },
    );
    match cov.transport_cones(eff, nef) {
        Ok((eff_x, _)) => {
            let neg = |c: &Cone| {
                c.extremal_rays()
                    .iter()
                    .filter(|ray| c.lattice().self_intersection(ray).expect("conforming").is_negative())
                    .count()
            };
            let (down, up) = (neg(eff), neg(&eff_x));
            r.check(
                "cone transport",
                down == up,
                format!("{up} negative extremal rays upstairs, {down} downstairs"),
            );
        }
        Err(err) => r.check("cone transport", false, err.to_string()),
    }
}

fn run_claim(r: &mut VerificationReport, claim: &Claim, ctx: &ResolvedEntry, eff: &Cone) {
    let base = &ctx.base;
    let (name, outcome): (String, Result<(bool, String), String>) = match &claim.kind {
        ClaimKind::Annotation => {
            r.push(
                "annotation",
                Status::ExpectedDiscrepancy,
                claim.note.clone().unwrap_or_default(),
            );
            return;
        }
        ClaimKind::Canonical { class } => (
            format!("canonical class {class}"),
            ctx.parse(class).and_then(|c| {
                let k = base.canonical().ok_or("canonical class required")?;
                let diff = base.functional(&(k - &c)).map_err(|e| e.to_string())?;
                let sq = base.self_intersection(&c).map_err(|e| e.to_string())?;
                Ok((
                    diff.iter().all(Zero::is_zero),
                    format!("K = {}; claimed class has square {}", base.render(k), format_rational(&sq)),
                ))
            }),
        ),
        ClaimKind::Determinant { classes, value } => (
            format!("determinant ({})", classes.join(", ")),
            ctx.parse_all(classes).and_then(|cs| {
                let d = base.gram_determinant(&cs).map_err(|e| e.to_string())?;
                Ok((d == value.0, format!("det = {}", format_rational(&d))))
            }),
        ),
        ClaimKind::Equivalence { lhs, rhs } => (
            format!("equivalence {lhs} = {rhs}"),
            ctx.parse(lhs).and_then(|a| {
                let b = ctx.parse(rhs)?;
                let ok = verify_numerical_equivalence(base, &a, &b, &ctx.basis()).map_err(|e| e.to_string())?;
                Ok((ok, "checked against a basis".to_string()))
            }),
        ),
        ClaimKind::Witness {
            name,
            subset,
            vector,
            claim: spec,
        } => (
            format!("witness ({name})"),
            (|| {
                let labelled = |xs: &[String]| -> Result<Vec<(String, DivisorClass)>, String> {
                    xs.iter().map(|x| Ok((x.clone(), ctx.parse(x)?))).collect()
                };
                let case_claim = match spec {
                    WitnessSpec::NotNef { negative, positive } => WitnessClaim::NotNef {
                        negative: (negative.clone(), ctx.parse(negative)?),
                        positive: (positive.clone(), ctx.parse(positive)?),
                    },
                    WitnessSpec::Nef(eq) => WitnessClaim::Nef {
                        equivalents: labelled(eq)?,
                    },
                };
                let case = WitnessCase {
                    name: name.clone(),
                    subset: labelled(subset)?,
                    vector: ctx.parse(vector)?,
                    claim: case_claim,
                };
                let out = semiample_witness_check(base, eff.generators(), &ctx.basis(), &[case])
                    .map_err(|e| e.to_string())?;
                let o = &out[0];
                let detail = if o.passed {
                    match spec {
                        WitnessSpec::NotNef { .. } => format!("{vector} orthogonal to subset, signs as stated"),
                        WitnessSpec::Nef(_) => format!("{vector} orthogonal to subset, nef, equivalences hold"),
                    }
                } else {
                    o.failures.join("; ")
                };
                Ok((o.passed, detail))
            })(),
        ),
        ClaimKind::NefAndBig { class } => (
            format!("nef and big {class}"),
            ctx.parse(class).and_then(|c| {
                let f = base.functional(&c).map_err(|e| e.to_string())?;
                let nef = eff
                    .generators()
                    .iter()
                    .all(|g| !crate::rational::dot(&f, g.coeffs()).is_negative());
                let sq = base.self_intersection(&c).map_err(|e| e.to_string())?;
                Ok((nef && sq.is_positive(), format!("nef: {nef}, square {}", format_rational(&sq))))
            }),
        ),
        ClaimKind::Effective { class } => (
            format!("effective {class}"),
            ctx.parse(class).and_then(|c| {
                let m = eff.contains(&c).map_err(|e| e.to_string())?;
                let verified = m.verify(eff, &c);
                let detail = match &m {
                    Membership::Inside(comb) => comb
                        .rays
                        .iter()
                        .map(|(ray, t)| format!("{}*({})", format_rational(t), base.render(ray)))
                        .collect::<Vec<_>>()
                        .join(" + "),
                    Membership::Outside(s) => format!(
                        "separated by {}",
                        s.class.as_ref().map(|w| base.render(w)).unwrap_or_else(|| "a functional".into())
                    ),
                };
                Ok((m.is_inside() && verified, detail))
            }),
        ),
        ClaimKind::Exclusion { class } => (
            format!("exclusion {class}"),
            ctx.parse(class).and_then(|c| {
                let real = ctx.realization.as_ref().ok_or("entry has no point configuration")?;
                Ok(match real.exclusion_for(&c) {
                    Some(ex) => (
                        ex.product.is_negative(),
                        format!(
                            "meets {} with product {}; residual {}",
                            ex.witness,
                            format_rational(&ex.product),
                            base.render(&ex.residual)
                        ),
                    ),
                    None => (false, "not excluded".to_string()),
                })
            }),
        ),
        ClaimKind::BaseCurveCount { self_int, count } => {
            let n = ctx
                .roster
                .iter()
                .filter(|(_, c, _)| base.self_intersection(c).map(|s| s == int(*self_int)).unwrap_or(false))
                .count();
            (
                format!("count of ({self_int})-curves on the base"),
                Ok((n == *count, format!("found {n}, claimed {count}"))),
            )
        }
    };
    let note = claim.note.as_deref().map(|n| format!(" [{n}]")).unwrap_or_default();
    match (outcome, claim.expect) {
        (Err(msg), _) => r.push(name, Status::Fail, msg),
        (Ok((true, d)), Expect::Holds) => r.push(name, Status::Pass, d),
        (Ok((false, d)), Expect::Holds) => r.push(name, Status::Fail, d),
        (Ok((false, d)), Expect::Discrepancy) => r.push(name, Status::ExpectedDiscrepancy, format!("{d}{note}")),
        (Ok((true, d)), Expect::Discrepancy) => {
            r.push(name, Status::Fail, format!("annotated discrepancy not observed: {d}"))
        }
    }
}
