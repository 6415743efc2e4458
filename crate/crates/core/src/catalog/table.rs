use std::fmt::Write as _;

use super::VerificationReport;
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("entry {0} did not pass verification")]
pub struct Unverified(pub String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub id: String,
    pub family: String,
    pub k2: i64,
    pub negatives: String,
    pub count: usize,
    pub b_x: Rational,
}

/// Multiplicity descending, then self-intersection descending, then genus.
pub fn sorted_multiset(ms: &[(Rational, Rational, usize)]) -> Vec<(Rational, Rational, usize)> {
    let mut v = ms.to_vec();
    v.sort_by(|a, b| b.2.cmp(&a.2).then(b.0.cmp(&a.0)).then(a.1.cmp(&b.1)));
    v
}

/// `10(-1,1), 2(-4,0), (-2,0)`; the empty multiset renders as `none`.
pub fn render_multiset(ms: &[(Rational, Rational, usize)]) -> String {
    if ms.is_empty() {
        return "none".into();
    }
    sorted_multiset(ms)
        .iter()
        .map(|(s, g, m)| {
            let pair = format!("({},{})", format_rational(s), format_rational(g));
            if *m == 1 {
                pair
            } else {
                format!("{m}{pair}")
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// One row per report, sorted by K² descending then id. Refuses reports
/// with a failing line.
pub fn negative_curve_table(reports: &[VerificationReport]) -> Result<Vec<TableRow>, Unverified> {
    let mut rows = Vec::new();
    for r in reports {
        if !r.passed() {
            return Err(Unverified(r.id.clone()));
        }
        rows.push(TableRow {
            id: r.id.clone(),
            family: r.family.to_string(),
            k2: r.k2,
            negatives: render_multiset(&r.negatives),
            count: r.negative_count(),
            b_x: r.b_x.clone(),
        });
    }
    rows.sort_by(|a, b| b.k2.cmp(&a.k2).then_with(|| a.id.cmp(&b.id)));
    Ok(rows)
}

pub fn render_table(rows: &[TableRow]) -> String {
    let w_id = rows.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
    let w_neg = rows.iter().map(|r| r.negatives.len()).max().unwrap_or(9).max(9);
    let mut out = String::new();
    let _ = writeln!(out, "K^2  {:w_id$}  {:w_neg$}  b_X", "id", "negatives");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>3}  {:w_id$}  {:w_neg$}  {}",
            r.k2,
            r.id,
            r.negatives,
            format_rational(&r.b_x)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn nodal_burniat_rendering() {
        let ms = vec![(int(-4), int(0), 2), (int(-2), int(0), 1), (int(-1), int(1), 10)];
        assert_eq!(render_multiset(&ms), "10(-1,1), 2(-4,0), (-2,0)");
        assert_eq!(render_multiset(&[]), "none");
        let chen = vec![(int(-4), int(2), 1), (int(-1), int(3), 1), (int(-1), int(1), 1), (int(-1), int(2), 1)];
        assert_eq!(render_multiset(&chen), "(-1,1), (-1,2), (-1,3), (-4,2)");
    }
}
