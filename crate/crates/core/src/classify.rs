//! Cluster equivalence, the partition into classes, `N(ρ)`, and cluster groups `S_x(ρ)`.
//!
//! Matching works on displacement vectors from the center. A frame of up to `d`
//! independent vectors is taken greedily from the shortest shells of the first cluster;
//! every assignment of frame images in the second cluster with matching lengths and
//! inner products determines one orthogonal map, built as a chain of metric Householder
//! reflections. A map is accepted once it sends every vector into the second cluster.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geom::{Isometry, Metric, Point, PointIndex, Tolerance};
use crate::linalg::{vsub, Matrix};
use crate::radius::Radius;
use crate::scalar::Scalar;
use crate::set::{distinct_norms, Cluster, PointSet};

/// Displacement vectors around a center up to `reach`, sorted by length then lexicographically.
#[derive(Clone)]
pub struct Neighborhood<S: Scalar> {
    center: Point<S>,
    reach: Radius<S>,
    norms: Vec<S>,
    vectors: Vec<Vec<S>>,
    index: PointIndex<S>,
    /// Greedy rank-raising frame over the whole list; a prefix's frame is the part inside it.
    frame: Vec<usize>,
}

impl<S: Scalar> Neighborhood<S> {
    pub fn from_set(set: &PointSet<S>, center: &Point<S>, reach: &Radius<S>) -> Self {
        let list = set.vectors_in_ball(center, reach);
        Self::from_sorted(center.clone(), reach.clone(), list, set.metric(), set.tolerance())
    }

    pub fn from_cluster(c: &Cluster<S>, metric: &Metric<S>, tol: &Tolerance) -> Self {
        let mut list: Vec<(S, Vec<S>)> = c
            .points
            .iter()
            .map(|p| {
                let v = vsub(p.coords(), c.center.coords());
                (metric.norm_sq(&v), v)
            })
            .collect();
        list.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| crate::set::lex(&a.1, &b.1)));
        Self::from_sorted(c.center.clone(), c.radius.clone(), list, metric, tol)
    }

    fn from_sorted(
        center: Point<S>,
        reach: Radius<S>,
        list: Vec<(S, Vec<S>)>,
        metric: &Metric<S>,
        tol: &Tolerance,
    ) -> Self {
        let (norms, vectors): (Vec<S>, Vec<Vec<S>>) = list.into_iter().unzip();
        let mut index = PointIndex::new(*tol);
        for v in &vectors {
            index.insert(v.clone());
        }
        let frame = greedy_frame(&vectors, metric.dim());
        Neighborhood { center, reach, norms, vectors, index, frame }
    }

    pub fn center(&self) -> &Point<S> {
        &self.center
    }

    pub fn reach(&self) -> &Radius<S> {
        &self.reach
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn norms(&self) -> &[S] {
        &self.norms
    }

    /// Number of vectors inside the closed ball of radius `rho`.
    pub fn prefix_len(&self, rho: &Radius<S>, tol: &Tolerance) -> usize {
        self.norms.partition_point(|n| rho.covers_sq(n, tol))
    }

    /// Rank of the first `k` vectors.
    pub fn rank(&self, k: usize) -> usize {
        self.frame.iter().filter(|&&i| i < k).count()
    }

    pub fn cluster(&self, k: usize, rho: &Radius<S>) -> Cluster<S> {
        Cluster {
            center: self.center.clone(),
            radius: rho.clone(),
            points: self.vectors[..k].iter().map(|v| self.center.translated(v)).collect(),
        }
    }
}

fn greedy_frame<S: Scalar>(vectors: &[Vec<S>], d: usize) -> Vec<usize> {
    let mut frame = Vec::new();
    let mut rows: Vec<Vec<S>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if frame.len() == d {
            break;
        }
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        rows.push(v.clone());
        if Matrix::from_rows(&rows).rank() == rows.len() {
            frame.push(i);
        } else {
            rows.pop();
        }
    }
    frame
}

/// Matching context for the first `ka` vectors of `a` against the first `kb` of `b`.
struct Matcher<'a, S: Scalar> {
    a: &'a Neighborhood<S>,
    ka: usize,
    b: &'a Neighborhood<S>,
    kb: usize,
    metric: &'a Metric<S>,
    tol: &'a Tolerance,
}

impl<S: Scalar> Matcher<'_, S> {
    fn compatible(&self) -> bool {
        self.ka == self.kb
            && self.a.norms[..self.ka].iter().zip(&self.b.norms[..self.kb]).all(|(x, y)| self.tol.sq_eq(x, y))
    }

    fn inner_eq(&self, x: &S, y: &S, scale: &S) -> bool {
        if S::is_exact() {
            x == y
        } else {
            let slack = self.tol.eps_abs * (4.0 * scale.to_f64().max(0.0).sqrt() + self.tol.eps_abs);
            (x.to_f64() - y.to_f64()).abs() <= slack
        }
    }

    /// Visits every orthogonal map sending the `a`-prefix onto the `b`-prefix. `visit`
    /// returns `false` to stop. Returns the frame rank.
    fn for_each_map(&self, visit: &mut dyn FnMut(Matrix<S>) -> bool) -> usize {
        let frame: Vec<usize> = self.a.frame.iter().copied().filter(|&i| i < self.ka).collect();
        let rank = frame.len();
        if !self.compatible() {
            return rank;
        }
        // Candidate images for each frame vector: same squared length.
        let cands: Vec<Vec<usize>> = frame
            .iter()
            .map(|&fi| {
                let n = &self.a.norms[fi];
                (0..self.kb).filter(|&j| self.tol.sq_eq(&self.b.norms[j], n)).collect()
            })
            .collect();
        let mut chosen: Vec<usize> = Vec::with_capacity(rank);
        self.search(&frame, &cands, &mut chosen, visit);
        rank
    }

    fn search(
        &self,
        frame: &[usize],
        cands: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(Matrix<S>) -> bool,
    ) -> bool {
        let i = chosen.len();
        if i == frame.len() {
            if let Some(m) = self.synthesize(frame, chosen) {
                if self.verify(&m) {
                    return visit(m);
                }
            }
            return true;
        }
        let fi = &self.a.vectors[frame[i]];
        for &t in &cands[i] {
            if chosen.contains(&t) {
                continue;
            }
            let tv = &self.b.vectors[t];
            let consistent = chosen.iter().enumerate().all(|(j, &tj)| {
                let fj = &self.a.vectors[frame[j]];
                let scale = self.a.norms[frame[i]].clone() + self.a.norms[frame[j]].clone();
                self.inner_eq(&self.metric.inner(tv, &self.b.vectors[tj]), &self.metric.inner(fi, fj), &scale)
            });
            if !consistent {
                continue;
            }
            chosen.push(t);
            let go_on = self.search(frame, cands, chosen, visit);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Composes metric reflections `x ↦ x − 2⟨w,x⟩/⟨w,w⟩ w` with `w = M f_j − t_j`.
    fn synthesize(&self, frame: &[usize], images: &[usize]) -> Option<Matrix<S>> {
        let d = self.metric.dim();
        let gram = self.metric.gram();
        let mut m = Matrix::<S>::identity(d);
        for (&fi, &ti) in frame.iter().zip(images) {
            let u = m.mul_vec(&self.a.vectors[fi]);
            let w = vsub(&u, &self.b.vectors[ti]);
            let ww = self.metric.norm_sq(&w);
            let negligible = if S::is_exact() {
                ww.is_zero()
            } else {
                ww.to_f64() <= (self.tol.eps_abs * self.tol.eps_abs).max(1e-300)
            };
            if negligible {
                continue;
            }
            // M ← M − 2 w (Gw)ᵀ M / ⟨w,w⟩
            let gw = gram.mul_vec(&w);
            let row = Matrix::from_rows(&[gw]).mul(&m);
            let factor = S::from_i64(2) / ww;
            let mut next = m.clone();
            for (r, wr) in w.iter().enumerate() {
                let wr = wr.clone() * factor.clone();
                if wr.is_zero() {
                    continue;
                }
                for c in 0..d {
                    let v = next.get(r, c).clone() - wr.clone() * row.get(0, c).clone();
                    next.set(r, c, v);
                }
            }
            m = next;
        }
        Some(m)
    }

    fn verify(&self, m: &Matrix<S>) -> bool {
        let iso = Isometry::new(m.clone(), vec![S::zero(); self.metric.dim()]);
        if !iso.is_orthogonal(self.metric) {
            return false;
        }
        self.a.vectors[..self.ka].iter().all(|v| {
            let image = m.mul_vec(v);
            matches!(self.b.index.find(&image), Some(j) if j < self.kb)
        })
    }
}

/// A witness `M` for the `ρ`-clusters of two neighborhoods, as a linear map on displacements.
pub(crate) fn match_linear<S: Scalar>(
    a: &Neighborhood<S>,
    ka: usize,
    b: &Neighborhood<S>,
    kb: usize,
    metric: &Metric<S>,
    tol: &Tolerance,
) -> Option<Matrix<S>> {
    let matcher = Matcher { a, ka, b, kb, metric, tol };
    let mut found = None;
    matcher.for_each_map(&mut |m| {
        found = Some(m);
        false
    });
    found
}

/// Whether `m` maps the `a`-prefix onto the `b`-prefix.
pub(crate) fn verifies<S: Scalar>(
    m: &Matrix<S>,
    a: &Neighborhood<S>,
    ka: usize,
    b: &Neighborhood<S>,
    kb: usize,
    metric: &Metric<S>,
    tol: &Tolerance,
) -> bool {
    let matcher = Matcher { a, ka, b, kb, metric, tol };
    matcher.compatible() && matcher.verify(m)
}

/// Every center-fixing linear self-map of the first `k` vectors. Errors when they do not span.
pub(crate) fn self_maps<S: Scalar>(
    a: &Neighborhood<S>,
    k: usize,
    metric: &Metric<S>,
    tol: &Tolerance,
) -> Result<Vec<Matrix<S>>> {
    let matcher = Matcher { a, ka: k, b: a, kb: k, metric, tol };
    let mut all = Vec::new();
    let rank = matcher.for_each_map(&mut |m| {
        all.push(m);
        true
    });
    if rank < metric.dim() {
        return Err(Error::RankDeficient { rank, dim: metric.dim() });
    }
    Ok(all)
}

fn witness_from_linear<S: Scalar>(m: Matrix<S>, from: &Point<S>, to: &Point<S>) -> Isometry<S> {
    let shift = vsub(to.coords(), &m.mul_vec(from.coords()));
    Isometry::new(m, shift)
}

/// Isometry-invariant summary: for each point, its squared distance from the center and the
/// sorted squared distances to all cluster points.
#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprint<S: Scalar> {
    entries: Vec<(S, Vec<S>)>,
}

impl<S: Scalar> Fingerprint<S> {
    pub fn of(c: &Cluster<S>, metric: &Metric<S>) -> Self {
        let mut entries: Vec<(S, Vec<S>)> = c
            .points
            .iter()
            .map(|p| {
                let mut row: Vec<S> = c.points.iter().map(|q| metric.dist_sq(p, q)).collect();
                row.sort_by(|a, b| a.total_cmp(b));
                (metric.dist_sq(p, &c.center), row)
            })
            .collect();
        entries.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| crate::set::lex(&a.1, &b.1)));
        Fingerprint { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Equality up to the tolerance. In floating mode only the sorted center distances are
    /// compared, since near-ties can order the rows differently.
    pub fn matches(&self, other: &Fingerprint<S>, tol: &Tolerance) -> bool {
        if self.entries.len() != other.entries.len() {
            return false;
        }
        if S::is_exact() {
            return self == other;
        }
        self.entries.iter().zip(&other.entries).all(|(a, b)| tol.sq_eq(&a.0, &b.0))
    }
}

/// A witness `g` with `g(c1.center) = c2.center` and `g(c1) = c2`, if one exists.
pub fn clusters_equivalent<S: Scalar>(
    c1: &Cluster<S>,
    c2: &Cluster<S>,
    metric: &Metric<S>,
    tol: &Tolerance,
) -> Option<Isometry<S>> {
    if c1.radius.cmp_radius(&c2.radius) != Ordering::Equal || c1.len() != c2.len() {
        return None;
    }
    if !Fingerprint::of(c1, metric).matches(&Fingerprint::of(c2, metric), tol) {
        return None;
    }
    let a = Neighborhood::from_cluster(c1, metric, tol);
    let b = Neighborhood::from_cluster(c2, metric, tol);
    match_linear(&a, a.len(), &b, b.len(), metric, tol).map(|m| witness_from_linear(m, &c1.center, &c2.center))
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ClusterClass<S: Scalar> {
    pub representative: Cluster<S>,
    pub members: Vec<Point<S>>,
    /// `witnesses[i]` maps the representative cluster onto the cluster of `members[i]`.
    pub witnesses: Vec<Isometry<S>>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ClusterPartition<S: Scalar> {
    pub rho: Radius<S>,
    pub classes: Vec<ClusterClass<S>>,
}

impl<S: Scalar> ClusterPartition<S> {
    /// `N(ρ)`.
    pub fn n(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, p: &Point<S>, tol: &Tolerance) -> Option<usize> {
        self.classes.iter().position(|c| c.members.iter().any(|m| crate::geom::points_equal(m, p, tol)))
    }
}

/// Neighborhoods of a fixed list of centers, from which clusters of any radius up to the
/// reach are prefixes.
pub struct Classifier<'s, S: Scalar> {
    set: &'s PointSet<S>,
    hoods: Vec<Neighborhood<S>>,
}

impl<'s, S: Scalar> Classifier<'s, S> {
    pub fn new(set: &'s PointSet<S>, centers: &[Point<S>], reach: &Radius<S>) -> Self {
        let hoods = centers.par_iter().map(|c| Neighborhood::from_set(set, c, reach)).collect();
        Classifier { set, hoods }
    }

    /// Centers interior at `reach` (all motif points for periodic sets).
    pub fn interior(set: &'s PointSet<S>, reach: &Radius<S>) -> Result<Self> {
        let centers = set.centers(reach);
        if centers.is_empty() {
            return Err(Error::NoInteriorPoints { radius: reach.to_string() });
        }
        Ok(Self::new(set, &centers, reach))
    }

    pub fn neighborhoods(&self) -> &[Neighborhood<S>] {
        &self.hoods
    }

    pub fn centers(&self) -> Vec<Point<S>> {
        self.hoods.iter().map(|h| h.center.clone()).collect()
    }

    fn prefixes(&self, rho: &Radius<S>) -> Vec<usize> {
        let tol = self.set.tolerance();
        self.hoods.iter().map(|h| h.prefix_len(rho, tol)).collect()
    }

    /// Class labels of the centers at `rho` (classes numbered by lexicographically first member).
    pub fn labels(&self, rho: &Radius<S>) -> (Vec<usize>, Vec<Option<Matrix<S>>>, Vec<usize>) {
        let ks = self.prefixes(rho);
        let metric = self.set.metric();
        let tol = self.set.tolerance();
        let mut reps: Vec<usize> = Vec::new();
        let mut labels = vec![0; self.hoods.len()];
        let mut maps: Vec<Option<Matrix<S>>> = vec![None; self.hoods.len()];
        for i in 0..self.hoods.len() {
            let hit = reps.iter().enumerate().find_map(|(c, &r)| {
                match_linear(&self.hoods[r], ks[r], &self.hoods[i], ks[i], metric, tol).map(|m| (c, m))
            });
            match hit {
                Some((c, m)) => {
                    labels[i] = c;
                    maps[i] = Some(m);
                }
                None => {
                    labels[i] = reps.len();
                    maps[i] = Some(Matrix::identity(metric.dim()));
                    reps.push(i);
                }
            }
        }
        (labels, maps, reps)
    }

    pub fn classify(&self, rho: &Radius<S>) -> ClusterPartition<S> {
        let (labels, maps, reps) = self.labels(rho);
        let ks = self.prefixes(rho);
        let mut classes: Vec<ClusterClass<S>> = reps
            .iter()
            .map(|&r| ClusterClass {
                representative: self.hoods[r].cluster(ks[r], rho),
                members: Vec::new(),
                witnesses: Vec::new(),
            })
            .collect();
        for (i, (label, m)) in labels.iter().zip(maps).enumerate() {
            let rep = &self.hoods[reps[*label]].center;
            let here = &self.hoods[i].center;
            classes[*label].members.push(here.clone());
            classes[*label].witnesses.push(witness_from_linear(m.expect("assigned"), rep, here));
        }
        ClusterPartition { rho: rho.clone(), classes }
    }

    /// Group of the `rho`-cluster at center number `i`.
    pub fn group(&self, i: usize, rho: &Radius<S>) -> Result<ClusterGroup<S>> {
        let h = &self.hoods[i];
        let k = h.prefix_len(rho, self.set.tolerance());
        group_from_hood(h, k, rho, self.set.metric(), self.set.tolerance())
    }

    pub fn group_order(&self, i: usize, rho: &Radius<S>) -> Result<GroupOrder> {
        match self.group(i, rho) {
            Ok(g) => Ok(GroupOrder::Finite(g.order())),
            Err(Error::RankDeficient { .. }) => Ok(GroupOrder::Infinite),
            Err(e) => Err(e),
        }
    }

    /// Distinct distances from the centers, up to `cutoff`.
    pub fn breakpoints(&self, cutoff: &Radius<S>) -> Vec<Radius<S>> {
        let tol = self.set.tolerance();
        let all = self
            .hoods
            .iter()
            .flat_map(|h| h.norms.iter().filter(|n| !n.is_zero() && cutoff.covers_sq(n, tol)).cloned());
        distinct_norms(all, tol).into_iter().map(Radius::from_sq).collect()
    }

    /// `N` at every breakpoint up to `rho_max`, refining the previous partition at each step.
    pub fn profile(&self, rho_max: &Radius<S>) -> NRhoProfile<S> {
        let metric = self.set.metric();
        let tol = self.set.tolerance();
        let n = self.hoods.len();
        let breakpoints = self.breakpoints(rho_max);
        let mut labels = vec![0usize; n];
        let mut reps: Vec<usize> = vec![0];
        let mut maps: Vec<Option<Matrix<S>>> = vec![Some(Matrix::identity(metric.dim())); n];
        let mut values = Vec::with_capacity(breakpoints.len());
        for rho in &breakpoints {
            let ks = self.prefixes(rho);
            let mut new_labels = vec![0usize; n];
            let mut new_maps: Vec<Option<Matrix<S>>> = vec![None; n];
            let mut new_reps: Vec<usize> = Vec::new();
            // Old class of each new class, so members only compare within their old class.
            let mut parent: Vec<usize> = Vec::new();
            for (old, &old_rep) in reps.iter().enumerate() {
                for i in (0..n).filter(|&i| labels[i] == old) {
                    let mut placed = false;
                    for (c, &r) in new_reps.iter().enumerate() {
                        if parent[c] != old {
                            continue;
                        }
                        // The previous witness usually survives; try it first.
                        if r == old_rep {
                            if let Some(m) = &maps[i] {
                                if verifies(m, &self.hoods[r], ks[r], &self.hoods[i], ks[i], metric, tol) {
                                    new_labels[i] = c;
                                    new_maps[i] = Some(m.clone());
                                    placed = true;
                                    break;
                                }
                            }
                        }
                        if let Some(m) = match_linear(&self.hoods[r], ks[r], &self.hoods[i], ks[i], metric, tol) {
                            new_labels[i] = c;
                            new_maps[i] = Some(m);
                            placed = true;
                            break;
                        }
                    }
                    if !placed {
                        new_labels[i] = new_reps.len();
                        new_maps[i] = Some(Matrix::identity(metric.dim()));
                        new_reps.push(i);
                        parent.push(old);
                    }
                }
            }
            labels = new_labels;
            maps = new_maps;
            reps = new_reps;
            values.push(reps.len());
        }
        NRhoProfile { breakpoints, values }
    }
}

fn group_from_hood<S: Scalar>(
    h: &Neighborhood<S>,
    k: usize,
    rho: &Radius<S>,
    metric: &Metric<S>,
    tol: &Tolerance,
) -> Result<ClusterGroup<S>> {
    let maps = self_maps(h, k, metric, tol)?;
    let elements: Vec<Isometry<S>> = maps.into_iter().map(|m| Isometry::about(m, &h.center)).collect();
    let group = ClusterGroup { center: h.center.clone(), rho: rho.clone(), elements };
    if !group.is_closed(tol) {
        return Err(Error::Inconsistent("cluster group is not closed under composition".into()));
    }
    Ok(group)
}

/// `C_x(ρ)` classes over the interior points (window) or the motif (periodic).
pub fn classify<S: Scalar>(set: &PointSet<S>, rho: &Radius<S>) -> Result<ClusterPartition<S>> {
    Ok(Classifier::interior(set, rho)?.classify(rho))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOrder {
    Finite(usize),
    /// The cluster spans fewer than `d` dimensions.
    Infinite,
}

impl Serialize for GroupOrder {
    fn serialize<Ser: Serializer>(&self, ser: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        match self {
            GroupOrder::Finite(n) => ser.serialize_u64(*n as u64),
            GroupOrder::Infinite => ser.serialize_str("infinite"),
        }
    }
}

impl std::fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupOrder::Finite(n) => write!(f, "{n}"),
            GroupOrder::Infinite => f.write_str("infinite"),
        }
    }
}

/// `S_x(ρ)`: isometries fixing the center and mapping the cluster onto itself.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ClusterGroup<S: Scalar> {
    pub center: Point<S>,
    pub rho: Radius<S>,
    pub elements: Vec<Isometry<S>>,
}

impl<S: Scalar> ClusterGroup<S> {
    /// `M_x(ρ)`.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Isometry<S>, tol: &Tolerance) -> bool {
        self.elements.iter().any(|e| e.approx_eq(g, tol))
    }

    pub fn is_closed(&self, tol: &Tolerance) -> bool {
        self.elements.iter().all(|a| {
            self.contains(&a.inverse(), tol)
                && self.elements.iter().all(|b| a.compose(b).is_ok_and(|c| self.contains(&c, tol)))
        })
    }

    /// Every element of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &ClusterGroup<S>, tol: &Tolerance) -> bool {
        self.elements.iter().all(|e| other.contains(e, tol))
    }

    /// Element-wise equality.
    pub fn same_elements(&self, other: &ClusterGroup<S>, tol: &Tolerance) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other, tol)
    }
}

pub fn cluster_group<S: Scalar>(set: &PointSet<S>, x: &Point<S>, rho: &Radius<S>) -> Result<ClusterGroup<S>> {
    let c = set.cluster(x, rho)?;
    let h = Neighborhood::from_cluster(&c, set.metric(), set.tolerance());
    group_from_hood(&h, h.len(), rho, set.metric(), set.tolerance())
}

/// `M_x(ρ)`, infinite for rank-deficient clusters.
pub fn group_order<S: Scalar>(set: &PointSet<S>, x: &Point<S>, rho: &Radius<S>) -> Result<GroupOrder> {
    match cluster_group(set, x, rho) {
        Ok(g) => Ok(GroupOrder::Finite(g.order())),
        Err(Error::RankDeficient { .. }) => Ok(GroupOrder::Infinite),
        Err(e) => Err(e),
    }
}

/// Per class (numbered from 1): the group order at the representative, cross-checked at a
/// second member when there is one.
pub fn group_orders_by_class<S: Scalar>(
    set: &PointSet<S>,
    partition: &ClusterPartition<S>,
) -> Result<Vec<(usize, GroupOrder)>> {
    partition
        .classes
        .iter()
        .enumerate()
        .map(|(i, class)| {
            let rho = &partition.rho;
            let m = group_order(set, &class.representative.center, rho)?;
            if let Some(other) = class.members.iter().find(|p| **p != class.representative.center) {
                let m2 = group_order(set, other, rho)?;
                if m2 != m {
                    return Err(Error::Inconsistent(format!("class {} has group orders {m} and {m2}", i + 1)));
                }
            }
            Ok((i + 1, m))
        })
        .collect()
}

/// `N(ρ)` at each breakpoint of the merged distance spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct NRhoProfile<S: Scalar> {
    pub breakpoints: Vec<Radius<S>>,
    pub values: Vec<usize>,
}

impl<S: Scalar> NRhoProfile<S> {
    /// `N(ρ)` using right-continuous steps; 1 below the first breakpoint.
    pub fn at(&self, rho: &Radius<S>) -> usize {
        let i = self.breakpoints.partition_point(|b| b.cmp_radius(rho) != Ordering::Greater);
        if i == 0 {
            1
        } else {
            self.values[i - 1]
        }
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }
}

/// `N` at the distance breakpoints of the centers interior at `rho_max`.
pub fn n_profile<S: Scalar>(set: &PointSet<S>, rho_max: &Radius<S>) -> Result<NRhoProfile<S>> {
    let classifier = Classifier::interior(set, rho_max)
        .map_err(|_| Error::WindowTooSmall(format!("no point is interior at radius {rho_max}")))?;
    Ok(classifier.profile(rho_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn z2() -> PointSet<Rational> {
        let lat = Lattice::new(vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]], Metric::euclidean(2)).unwrap();
        PointSet::build_periodic(lat, vec![Point::from_i64s(&[0, 0])], Tolerance::exact()).unwrap()
    }

    fn cluster_of(center: &[i64], pts: &[&[i64]]) -> Cluster<Rational> {
        let c = Point::from_i64s(center);
        let mut points = vec![c.clone()];
        points.extend(pts.iter().map(|p| Point::from_i64s(p)));
        Cluster { center: c, radius: Radius::from_value(q(10, 1)), points }
    }

    #[test]
    fn z2_groups() {
        let s = z2();
        let o = Point::from_i64s(&[0, 0]);
        assert_eq!(cluster_group(&s, &o, &Radius::from_sq(q(1, 1))).unwrap().order(), 8);
        assert_eq!(cluster_group(&s, &o, &Radius::from_sq(q(2, 1))).unwrap().order(), 8);
        assert!(matches!(
            cluster_group(&s, &o, &Radius::from_value(q(1, 2))),
            Err(Error::RankDeficient { rank: 0, dim: 2 })
        ));
    }

    #[test]
    fn translates_are_equivalent() {
        let metric = Metric::euclidean(2);
        let tol = Tolerance::exact();
        let a = cluster_of(&[0, 0], &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]);
        let b = cluster_of(&[5, 3], &[&[6, 3], &[5, 4], &[4, 3], &[5, 2]]);
        let g = clusters_equivalent(&a, &b, &metric, &tol).unwrap();
        assert_eq!(g.apply(&a.center).unwrap(), b.center);
    }

    #[test]
    fn same_points_other_center() {
        // One point set, two centers: the clusters differ as centered clusters.
        let metric = Metric::euclidean(2);
        let tol = Tolerance::exact();
        let pts = [[0, 0], [1, 0], [3, 0]];
        let mk = |c: usize| Cluster {
            center: Point::<Rational>::from_i64s(&pts[c]),
            radius: Radius::from_value(q(3, 1)),
            points: pts.iter().map(|p| Point::from_i64s(p)).collect(),
        };
        assert!(clusters_equivalent(&mk(0), &mk(1), &metric, &tol).is_none());
    }

    #[test]
    fn chiral_cluster_mirror() {
        let metric = Metric::euclidean(2);
        let tol = Tolerance::exact();
        let a = cluster_of(&[0, 0], &[&[1, 0], &[0, 2], &[-3, -1]]);
        let b = cluster_of(&[0, 0], &[&[1, 0], &[0, -2], &[-3, 1]]);
        let g = clusters_equivalent(&a, &b, &metric, &tol).unwrap();
        assert_eq!(g.determinant(), q(-1, 1));
        let h = Neighborhood::from_cluster(&a, &metric, &tol);
        assert_eq!(self_maps(&h, h.len(), &metric, &tol).unwrap().len(), 1);
    }

    #[test]
    fn z2_profile_is_constant() {
        let p = n_profile(&z2(), &Radius::from_value(q(3, 1))).unwrap();
        assert!(p.values.iter().all(|&v| v == 1));
        assert_eq!(p.breakpoints.len(), 6);
    }

    #[test]
    fn orders_by_class() {
        let s = z2();
        let part = classify(&s, &Radius::from_sq(q(1, 1))).unwrap();
        assert_eq!(group_orders_by_class(&s, &part).unwrap(), vec![(1, GroupOrder::Finite(8))]);
    }
}
