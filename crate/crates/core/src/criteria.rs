//! Local certificates for regular systems and crystals.
//!
//! Regular system: `N(ρ₀ + 2R) = 1` and `M(ρ₀) = M(ρ₀ + 2R)`.
//! Crystal of `m` regular systems: `N(ρ₀) = N(ρ₀ + 2R) = m` and `S_x(ρ₀) = S_x(ρ₀ + 2R)`.
//! Both radii are evaluated on the same centers: those interior at `ρ₀ + 2R`.

use std::cmp::Ordering;

use serde::Serialize;

use crate::classify::{Classifier, GroupOrder};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::radius::Radius;
use crate::scalar::Scalar;
use crate::set::{distinct_norms, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Satisfied,
    Violated,
    InconclusiveWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Regular,
    Crystal,
}

/// How the crystal criterion compares cluster groups at `ρ₀` and `ρ₀ + 2R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupCheckMode {
    /// Element-wise, at one representative per class.
    Representatives,
    /// Element-wise, at every center.
    AllPoints,
    /// Orders only, at one representative per class.
    OrdersOnly,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct GroupCheck<S: Scalar> {
    /// Class number at `ρ₀ + 2R`, from 1.
    pub class: usize,
    pub center: Point<S>,
    pub m_rho0: GroupOrder,
    pub m_rho0_plus_2r: GroupOrder,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct CriterionReport<S: Scalar> {
    pub criterion: Criterion,
    pub verdict: Verdict,
    pub rho0: Radius<S>,
    pub rho0_plus_2r: Radius<S>,
    pub n_at_rho0: Option<usize>,
    pub n_at_rho0_plus_2r: Option<usize>,
    /// Number of regular systems, when the crystal criterion holds.
    pub m: Option<usize>,
    pub group_check: Vec<GroupCheck<S>>,
    /// Representative centers of the classes at `ρ₀ + 2R` when the criterion fails.
    pub witnesses: Vec<Point<S>>,
    /// Number of interior centers used (all motif points for periodic sets).
    pub centers: usize,
    /// True when the set is a finite window: the verdict only speaks about the window.
    pub window_only: bool,
    pub note: Option<String>,
}

impl<S: Scalar> CriterionReport<S> {
    fn inconclusive(criterion: Criterion, rho0: &Radius<S>, rho1: &Radius<S>, window_only: bool) -> Self {
        CriterionReport {
            criterion,
            verdict: Verdict::InconclusiveWindow,
            rho0: rho0.clone(),
            rho0_plus_2r: rho1.clone(),
            n_at_rho0: None,
            n_at_rho0_plus_2r: None,
            m: None,
            group_check: Vec::new(),
            witnesses: Vec::new(),
            centers: 0,
            window_only,
            note: Some(format!("no point of the window is interior at radius {rho1}")),
        }
    }
}

fn order_eq(a: GroupOrder, b: GroupOrder) -> bool {
    matches!((a, b), (GroupOrder::Finite(x), GroupOrder::Finite(y)) if x == y)
}

pub fn check_regular_criterion<S: Scalar>(set: &PointSet<S>, rho0: &Radius<S>) -> Result<CriterionReport<S>> {
    let two_r = set.params()?.big_r.double();
    let rho1 = rho0.add(&two_r)?;
    let window_only = !set.is_periodic();
    let classifier = match Classifier::interior(set, &rho1) {
        Ok(c) => c,
        Err(Error::NoInteriorPoints { .. }) => {
            return Ok(CriterionReport::inconclusive(Criterion::Regular, rho0, &rho1, window_only))
        }
        Err(e) => return Err(e),
    };
    let (_, _, reps1) = classifier.labels(&rho1);
    let (_, _, reps0) = classifier.labels(rho0);
    let centers = classifier.centers();
    let mut group_check = Vec::new();
    for (c, &i) in reps1.iter().enumerate() {
        let m0 = classifier.group_order(i, rho0)?;
        let m1 = classifier.group_order(i, &rho1)?;
        group_check.push(GroupCheck {
            class: c + 1,
            center: centers[i].clone(),
            m_rho0: m0,
            m_rho0_plus_2r: m1,
            equal: order_eq(m0, m1),
        });
    }
    let ok = reps1.len() == 1 && group_check[0].equal;
    let witnesses = if ok { Vec::new() } else { reps1.iter().map(|&i| centers[i].clone()).collect() };
    let note = if reps1.len() > 1 {
        Some(format!("N(rho0 + 2R) = {} > 1", reps1.len()))
    } else if !ok {
        Some("M(rho0) differs from M(rho0 + 2R)".to_string())
    } else {
        None
    };
    Ok(CriterionReport {
        criterion: Criterion::Regular,
        verdict: if ok { Verdict::Satisfied } else { Verdict::Violated },
        rho0: rho0.clone(),
        rho0_plus_2r: rho1,
        n_at_rho0: Some(reps0.len()),
        n_at_rho0_plus_2r: Some(reps1.len()),
        m: ok.then_some(1),
        group_check,
        witnesses,
        centers: centers.len(),
        window_only,
        note,
    })
}

pub fn check_crystal_criterion<S: Scalar>(
    set: &PointSet<S>,
    rho0: &Radius<S>,
    mode: GroupCheckMode,
) -> Result<CriterionReport<S>> {
    let two_r = set.params()?.big_r.double();
    let rho1 = rho0.add(&two_r)?;
    let window_only = !set.is_periodic();
    let classifier = match Classifier::interior(set, &rho1) {
        Ok(c) => c,
        Err(Error::NoInteriorPoints { .. }) => {
            return Ok(CriterionReport::inconclusive(Criterion::Crystal, rho0, &rho1, window_only))
        }
        Err(e) => return Err(e),
    };
    let tol = set.tolerance();
    let (labels1, _, reps1) = classifier.labels(&rho1);
    let (_, _, reps0) = classifier.labels(rho0);
    let centers = classifier.centers();
    let checked: Vec<usize> = match mode {
        GroupCheckMode::AllPoints => (0..centers.len()).collect(),
        _ => reps1.clone(),
    };
    let mut group_check = Vec::new();
    for i in checked {
        let g0 = classifier.group(i, rho0);
        let g1 = classifier.group(i, &rho1);
        let order = |g: &Result<crate::classify::ClusterGroup<S>>| match g {
            Ok(g) => Ok(GroupOrder::Finite(g.order())),
            Err(Error::RankDeficient { .. }) => Ok(GroupOrder::Infinite),
            Err(e) => Err(e.clone()),
        };
        let (m0, m1) = (order(&g0)?, order(&g1)?);
        let equal = match (mode, &g0, &g1) {
            (GroupCheckMode::OrdersOnly, _, _) => order_eq(m0, m1),
            (_, Ok(a), Ok(b)) => a.same_elements(b, tol),
            _ => false,
        };
        group_check.push(GroupCheck {
            class: labels1[i] + 1,
            center: centers[i].clone(),
            m_rho0: m0,
            m_rho0_plus_2r: m1,
            equal,
        });
    }
    let cond1 = reps0.len() == reps1.len();
    let cond2 = group_check.iter().all(|g| g.equal);
    let ok = cond1 && cond2;
    let note = match (cond1, cond2) {
        (true, true) => None,
        (false, _) => Some(format!("N(rho0) = {} but N(rho0 + 2R) = {}", reps0.len(), reps1.len())),
        (true, false) => Some("S_x(rho0) differs from S_x(rho0 + 2R)".to_string()),
    };
    Ok(CriterionReport {
        criterion: Criterion::Crystal,
        verdict: if ok { Verdict::Satisfied } else { Verdict::Violated },
        rho0: rho0.clone(),
        rho0_plus_2r: rho1,
        n_at_rho0: Some(reps0.len()),
        n_at_rho0_plus_2r: Some(reps1.len()),
        m: ok.then_some(reps1.len()),
        group_check,
        witnesses: if ok { Vec::new() } else { reps1.iter().map(|&i| centers[i].clone()).collect() },
        centers: centers.len(),
        window_only,
        note,
    })
}

/// Result of scanning `ρ₀` over `2R` and the distance breakpoints up to a cap.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ScanReport<S: Scalar> {
    pub report: CriterionReport<S>,
    pub cap: Radius<S>,
    /// The `ρ₀` values tried, in order.
    pub tried: Vec<Radius<S>>,
    /// True when the cap was reached without a decision.
    pub exhausted: bool,
}

/// Candidate `ρ₀`: `2R` and the distances in `(2R, cap]` from the centers interior at `2R`.
pub fn scan_candidates<S: Scalar>(set: &PointSet<S>, cap: &Radius<S>) -> Result<Vec<Radius<S>>> {
    let two_r = set.params()?.big_r.double();
    let tol = set.tolerance();
    let centers = set.centers(&two_r);
    let norms = centers.iter().flat_map(|c| {
        set.vectors_in_ball(c, cap)
            .into_iter()
            .map(|(n, _)| n)
            .filter(|n| two_r.cmp_sq(n) == Ordering::Less)
            .collect::<Vec<_>>()
    });
    let mut out = vec![two_r.clone()];
    out.extend(distinct_norms(norms, tol).into_iter().map(Radius::from_sq));
    out.retain(|r| r.cmp_radius(cap) != Ordering::Greater);
    Ok(out)
}

/// Tries `ρ₀` in increasing order and stops at the first decision.
///
/// The regular criterion is decided negatively as soon as `N(ρ₀ + 2R) > 1`, since `N` is
/// non-decreasing. `cap` defaults to `6R`.
pub fn certify_auto<S: Scalar>(
    set: &PointSet<S>,
    criterion: Criterion,
    mode: GroupCheckMode,
    cap: Option<&Radius<S>>,
) -> Result<ScanReport<S>> {
    let big_r = set.params()?.big_r;
    let cap = cap.cloned().unwrap_or_else(|| big_r.scale(&S::from_i64(6)));
    let candidates = scan_candidates(set, &cap)?;
    let mut tried = Vec::new();
    let mut last = None;
    for rho0 in candidates {
        tried.push(rho0.clone());
        let report = match criterion {
            Criterion::Regular => check_regular_criterion(set, &rho0)?,
            Criterion::Crystal => check_crystal_criterion(set, &rho0, mode)?,
        };
        match report.verdict {
            Verdict::Satisfied | Verdict::InconclusiveWindow => {
                return Ok(ScanReport { report, cap, tried, exhausted: false })
            }
            Verdict::Violated => {
                if criterion == Criterion::Regular && report.n_at_rho0_plus_2r.is_some_and(|n| n > 1) {
                    return Ok(ScanReport { report, cap, tried, exhausted: false });
                }
                last = Some(report);
            }
        }
    }
    let mut report = last.ok_or_else(|| Error::Inconsistent("no candidate radius".into()))?;
    report.note =
        Some(format!("{}; no rho0 up to {} satisfies the criterion", report.note.clone().unwrap_or_default(), cap));
    Ok(ScanReport { report, cap, tried, exhausted: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{integer_lattice, triangular_lattice};
    use crate::geom::Tolerance;
    use crate::scalar::Rational;

    #[test]
    fn z2_regular_at_2r() {
        let s = integer_lattice::<Rational>(2, Tolerance::exact());
        let rep = check_regular_criterion(&s, &Radius::from_sq(Rational::from_i64(2))).unwrap();
        assert_eq!(rep.verdict, Verdict::Satisfied);
        assert_eq!(rep.group_check[0].m_rho0, GroupOrder::Finite(8));
        assert_eq!(rep.group_check[0].m_rho0_plus_2r, GroupOrder::Finite(8));
    }

    #[test]
    fn triangular_auto() {
        let s = triangular_lattice::<Rational>(Tolerance::exact());
        let scan = certify_auto(&s, Criterion::Regular, GroupCheckMode::Representatives, None).unwrap();
        assert_eq!(scan.report.verdict, Verdict::Satisfied);
        assert_eq!(scan.tried.len(), 1);
        assert_eq!(scan.report.group_check[0].m_rho0, GroupOrder::Finite(12));
    }
}
