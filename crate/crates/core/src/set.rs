//! Delone sets given periodically (lattice + motif) or as a finite window.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use serde::Serialize;

use crate::covering;
use crate::error::{Error, Result};
use crate::geom::{Metric, Point, PointIndex, Tolerance};
use crate::lattice::Lattice;
use crate::linalg::vsub;
use crate::radius::Radius;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    Exact,
    LowerBoundEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct DeloneParams<S: Scalar> {
    pub r: Radius<S>,
    #[serde(rename = "R")]
    pub big_r: Radius<S>,
    pub r_exactness: Exactness,
    #[serde(rename = "R_exactness")]
    pub big_r_exactness: Exactness,
}

/// Axis-aligned box in frame coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundingBox<S> {
    pub lo: Vec<S>,
    pub hi: Vec<S>,
}

impl<S: Scalar> BoundingBox<S> {
    pub fn new(lo: Vec<S>, hi: Vec<S>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::InvalidSpec("box lower corner exceeds upper corner".into()));
        }
        Ok(BoundingBox { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, p: &Point<S>, tol: &Tolerance) -> bool {
        p.coords()
            .iter()
            .enumerate()
            .all(|(i, x)| (self.lo[i] <= *x || tol.eq(&self.lo[i], x)) && (*x <= self.hi[i] || tol.eq(x, &self.hi[i])))
    }

    /// The box shrunk by `margin` on every side.
    pub fn shrink(&self, margin: &S) -> BoundingBox<S> {
        BoundingBox {
            lo: self.lo.iter().map(|x| x.clone() + margin.clone()).collect(),
            hi: self.hi.iter().map(|x| x.clone() - margin.clone()).collect(),
        }
    }
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum SetKind<S: Scalar> {
    Periodic { lattice: Lattice<S>, motif: Vec<Point<S>> },
    Window { points: Vec<Point<S>>, bounds: BoundingBox<S>, margin: S },
}

/// A Delone set answering membership and range queries.
#[derive(Debug)]
pub struct PointSet<S: Scalar> {
    kind: SetKind<S>,
    metric: Metric<S>,
    tol: Tolerance,
    index: PointIndex<S>,
    coords_f64: Vec<Vec<f64>>,
    gram_f64: Vec<Vec<f64>>,
    params: OnceLock<Result<DeloneParams<S>>>,
}

pub type PointSetHandle<S> = PointSet<S>;

impl<S: Scalar> Clone for PointSet<S> {
    fn clone(&self) -> Self {
        PointSet {
            kind: self.kind.clone(),
            metric: self.metric.clone(),
            tol: self.tol,
            index: self.index.clone(),
            coords_f64: self.coords_f64.clone(),
            gram_f64: self.gram_f64.clone(),
            params: self.params.clone(),
        }
    }
}

impl<S: Scalar> PointSet<S> {
    /// `motif + Λ`. Motif points are reduced into the fundamental cell of the reduced basis.
    pub fn build_periodic(lattice: Lattice<S>, motif: Vec<Point<S>>, tol: Tolerance) -> Result<Self> {
        let d = lattice.dim();
        if motif.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let mut index = PointIndex::new(tol);
        let mut reduced = Vec::with_capacity(motif.len());
        for m in &motif {
            m.check_dim(d)?;
            let v = lattice.reduce_vector(m.coords(), &tol);
            let (_, fresh) = index.insert(v.clone());
            if !fresh {
                return Err(Error::DuplicatePoint(m.to_string()));
            }
            reduced.push(Point::new(v));
        }
        reduced.sort_by(|a, b| a.lex_cmp(b));
        let index = PointIndex::from_vectors(reduced.iter().map(|p| p.coords()), tol);
        let metric = lattice.metric().clone();
        Ok(Self::assemble(SetKind::Periodic { lattice, motif: reduced }, metric, tol, index))
    }

    /// A finite patch; statistics at radius ρ only use points at least ρ inside the box shrunk by `margin`.
    pub fn build_window(
        points: Vec<Point<S>>,
        bounds: BoundingBox<S>,
        margin: S,
        metric: Metric<S>,
        tol: Tolerance,
    ) -> Result<Self> {
        let d = metric.dim();
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if bounds.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: bounds.dim() });
        }
        if margin < S::zero() {
            return Err(Error::InvalidSpec("negative margin".into()));
        }
        let mut pts = points;
        pts.sort_by(|a, b| a.lex_cmp(b));
        let mut index = PointIndex::new(tol);
        for p in &pts {
            p.check_dim(d)?;
            if !bounds.contains(p, &tol) {
                return Err(Error::InvalidSpec(format!("point {p} lies outside the bounds")));
            }
            let (_, fresh) = index.insert(p.coords().to_vec());
            if !fresh {
                return Err(Error::DuplicatePoint(p.to_string()));
            }
        }
        Ok(Self::assemble(SetKind::Window { points: pts, bounds, margin }, metric, tol, index))
    }

    fn assemble(kind: SetKind<S>, metric: Metric<S>, tol: Tolerance, index: PointIndex<S>) -> Self {
        let d = metric.dim();
        let coords_f64 = match &kind {
            SetKind::Window { points, .. } => points.iter().map(Point::to_f64).collect(),
            SetKind::Periodic { .. } => Vec::new(),
        };
        let gram_f64 = (0..d).map(|i| (0..d).map(|j| metric.gram().get(i, j).to_f64()).collect()).collect();
        PointSet { kind, metric, tol, index, coords_f64, gram_f64, params: OnceLock::new() }
    }

    pub fn kind(&self) -> &SetKind<S> {
        &self.kind
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.kind, SetKind::Periodic { .. })
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn metric(&self) -> &Metric<S> {
        &self.metric
    }

    pub fn tolerance(&self) -> &Tolerance {
        &self.tol
    }

    pub fn lattice(&self) -> Option<&Lattice<S>> {
        match &self.kind {
            SetKind::Periodic { lattice, .. } => Some(lattice),
            SetKind::Window { .. } => None,
        }
    }

    /// Motif points (periodic) or all points (window), sorted lexicographically.
    pub fn base_points(&self) -> &[Point<S>] {
        match &self.kind {
            SetKind::Periodic { motif, .. } => motif,
            SetKind::Window { points, .. } => points,
        }
    }

    pub fn contains(&self, p: &Point<S>) -> bool {
        if p.dim() != self.dim() {
            return false;
        }
        match &self.kind {
            SetKind::Periodic { lattice, .. } => self.index.contains(&lattice.reduce_vector(p.coords(), &self.tol)),
            SetKind::Window { .. } => self.index.contains(p.coords()),
        }
    }

    fn require_member(&self, p: &Point<S>) -> Result<()> {
        p.check_dim(self.dim())?;
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotInSet(p.to_string()))
        }
    }

    /// Squared distance from `p` to the boundary of the margin-trimmed box (window mode).
    pub fn boundary_dist_sq(&self, p: &Point<S>) -> Option<S> {
        let SetKind::Window { bounds, margin, .. } = &self.kind else {
            return None;
        };
        let inner = bounds.shrink(margin);
        let mut best: Option<S> = None;
        for (i, x) in p.coords().iter().enumerate() {
            for gap in [x.clone() - inner.lo[i].clone(), inner.hi[i].clone() - x.clone()] {
                let g = if gap < S::zero() { S::zero() } else { gap };
                let v = g.clone() * g / self.metric.dual_norm_sq(i).clone();
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
        }
        best
    }

    /// Whether the closed ball of radius `rho` about `p` lies inside the trimmed window.
    pub fn is_interior(&self, p: &Point<S>, rho: &Radius<S>) -> bool {
        match self.boundary_dist_sq(p) {
            None => true,
            Some(bd) => {
                if S::is_exact() {
                    rho.cmp_sq(&bd) != Ordering::Greater
                } else {
                    self.tol.sq_le(&rho.sq_f64(), &bd.to_f64())
                }
            }
        }
    }

    /// Cluster centers representing every point at radius `rho`: the motif (periodic) or the
    /// interior points (window), lexicographically sorted.
    pub fn centers(&self, rho: &Radius<S>) -> Vec<Point<S>> {
        self.base_points().iter().filter(|p| self.is_interior(p, rho)).cloned().collect()
    }

    /// Displacement vectors `p − center` of all set points within closed distance `rho`,
    /// sorted by squared length and then lexicographically. The zero vector comes first when
    /// `center` is a set point.
    pub fn vectors_in_ball(&self, center: &Point<S>, rho: &Radius<S>) -> Vec<(S, Vec<S>)> {
        let mut out: Vec<(S, Vec<S>)> = match &self.kind {
            SetKind::Periodic { lattice, motif } => motif
                .iter()
                .flat_map(|m| lattice.vectors_in_ball(&m.delta(center), rho, &self.tol))
                .map(|v| (self.metric.norm_sq(&v), v))
                .collect(),
            SetKind::Window { points, .. } => {
                let cf = center.to_f64();
                let rf = rho.to_f64();
                let limit = rf * rf * (1.0 + 1e-9) + 1e-12 + 4.0 * self.tol.eps_abs * (rf + 1.0);
                points
                    .iter()
                    .zip(&self.coords_f64)
                    .filter(|(_, pf)| self.quad_f64(pf, &cf) <= limit)
                    .filter_map(|(p, _)| {
                        let v = p.delta(center);
                        let n = self.metric.norm_sq(&v);
                        rho.covers_sq(&n, &self.tol).then_some((n, v))
                    })
                    .collect()
            }
        };
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| lex(&a.1, &b.1)));
        if !S::is_exact() {
            // Snap the displacement of the center itself to an exact zero.
            if let Some(first) = out.first_mut() {
                if self.tol.sq_eq(&first.0, &S::zero()) {
                    first.0 = S::zero();
                    first.1 = vec![S::zero(); self.dim()];
                }
            }
        }
        out
    }

    fn quad_f64(&self, a: &[f64], b: &[f64]) -> f64 {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        let mut s = 0.0;
        for i in 0..d.len() {
            for j in 0..d.len() {
                s += d[i] * self.gram_f64[i][j] * d[j];
            }
        }
        s
    }

    /// All set points within closed distance `rho` of an arbitrary point `center`.
    pub fn points_in_ball(&self, center: &Point<S>, rho: &Radius<S>) -> Vec<Point<S>> {
        self.vectors_in_ball(center, rho).into_iter().map(|(_, v)| center.translated(&v)).collect()
    }

    /// Set points inside a coordinate box (periodic sets are enumerated; windows are filtered).
    pub fn points_in_box(&self, bx: &BoundingBox<S>) -> Vec<Point<S>> {
        let mut pts = match &self.kind {
            SetKind::Window { points, .. } => {
                points.iter().filter(|p| bx.contains(p, &self.tol)).cloned().collect::<Vec<_>>()
            }
            SetKind::Periodic { .. } => {
                let two = S::from_i64(2);
                let center =
                    Point::new(bx.lo.iter().zip(&bx.hi).map(|(a, b)| (a.clone() + b.clone()) / two.clone()).collect());
                let half: Vec<S> =
                    bx.hi.iter().zip(&bx.lo).map(|(a, b)| (a.clone() - b.clone()) / two.clone()).collect();
                // Bound the half-diagonal in the metric by the sum of axis half-lengths.
                let reach: f64 =
                    half.iter().enumerate().map(|(i, h)| h.to_f64() * self.gram_f64[i][i].sqrt()).sum::<f64>() + 1e-9;
                let rho = Radius::from_value(S::from_f64(reach * (1.0 + 1e-9) + 1e-9).expect("finite reach"));
                self.points_in_ball(&center, &rho).into_iter().filter(|p| bx.contains(p, &self.tol)).collect()
            }
        };
        pts.sort_by(|a, b| a.lex_cmp(b));
        pts
    }

    /// `r` and `R`, computed once.
    pub fn params(&self) -> Result<DeloneParams<S>> {
        self.params.get_or_init(|| self.compute_params()).clone()
    }

    fn compute_params(&self) -> Result<DeloneParams<S>> {
        let min_sq = self.min_dist_sq()?;
        let r = Radius::from_sq(min_sq / S::from_i64(4));
        let (big_r, big_r_exactness) = covering::covering_radius(self)?;
        Ok(DeloneParams { r, big_r, r_exactness: Exactness::Exact, big_r_exactness })
    }

    /// Minimum squared distance between distinct points.
    pub fn min_dist_sq(&self) -> Result<S> {
        match &self.kind {
            SetKind::Periodic { lattice, motif } => {
                let reach = Radius::from_sq(lattice.first_norm_sq());
                let mut best: Option<S> = None;
                for m in motif {
                    for (n, _) in self.vectors_in_ball(m, &reach).into_iter().skip(1) {
                        if best.as_ref().is_none_or(|b| n < *b) {
                            best = Some(n);
                        }
                    }
                }
                best.ok_or(Error::Inconsistent("no neighbor within a lattice period".into()))
            }
            SetKind::Window { points, .. } => {
                if points.len() < 2 {
                    return Err(Error::TooFewPoints);
                }
                let n = points.len();
                let mut best_f = f64::INFINITY;
                for i in 0..n {
                    for j in i + 1..n {
                        best_f = best_f.min(self.quad_f64(&self.coords_f64[i], &self.coords_f64[j]));
                    }
                }
                let limit = best_f * (1.0 + 1e-6) + 1e-12;
                let mut best: Option<S> = None;
                for i in 0..n {
                    for j in i + 1..n {
                        if self.quad_f64(&self.coords_f64[i], &self.coords_f64[j]) <= limit {
                            let v = self.metric.dist_sq(&points[i], &points[j]);
                            if best.as_ref().is_none_or(|b| v < *b) {
                                best = Some(v);
                            }
                        }
                    }
                }
                best.ok_or(Error::TooFewPoints)
            }
        }
    }

    pub fn packing_radius(&self) -> Result<Radius<S>> {
        Ok(Radius::from_sq(self.min_dist_sq()? / S::from_i64(4)))
    }

    pub fn covering_radius(&self) -> Result<Radius<S>> {
        Ok(self.params()?.big_r)
    }

    /// `C_x(ρ)`: the set points within closed distance `rho` of `x`, including `x`.
    pub fn cluster(&self, x: &Point<S>, rho: &Radius<S>) -> Result<Cluster<S>> {
        self.require_member(x)?;
        if !self.is_interior(x, rho) {
            return Err(Error::NearBoundary { point: x.to_string(), radius: rho.to_string() });
        }
        let vectors = self.vectors_in_ball(x, rho);
        Ok(Cluster {
            center: x.clone(),
            radius: rho.clone(),
            points: vectors.into_iter().map(|(_, v)| x.translated(&v)).collect(),
        })
    }

    /// Distinct distances from `x` to other set points, up to `cutoff`.
    pub fn distance_spectrum(&self, x: &Point<S>, cutoff: &Radius<S>) -> Result<DistanceSpectrum<S>> {
        self.require_member(x)?;
        if !self.is_interior(x, cutoff) {
            return Err(Error::NearBoundary { point: x.to_string(), radius: cutoff.to_string() });
        }
        let sq = distinct_norms(self.vectors_in_ball(x, cutoff).into_iter().map(|(n, _)| n), &self.tol);
        Ok(DistanceSpectrum {
            center: x.clone(),
            cutoff: cutoff.clone(),
            distances: sq.into_iter().filter(|n| !n.is_zero()).map(Radius::from_sq).collect(),
        })
    }

    /// Shortest-hop chain from `x` to `y` whose consecutive gaps are all `< 2R`.
    /// Ties are broken lexicographically. Periodic searches give up after `max_visits` points.
    pub fn two_r_chain(&self, x: &Point<S>, y: &Point<S>) -> Result<Chain<S>> {
        self.two_r_chain_capped(x, y, 200_000)
    }

    pub fn two_r_chain_capped(&self, x: &Point<S>, y: &Point<S>, max_visits: usize) -> Result<Chain<S>> {
        self.require_member(x)?;
        self.require_member(y)?;
        let not_found = || Error::ChainNotFound { from: x.to_string(), to: y.to_string() };
        if crate::geom::points_equal(x, y, &self.tol) {
            return Ok(Chain { vertices: vec![x.clone()] });
        }
        let two_r = self.params()?.big_r.double();
        let mut seen = PointIndex::new(self.tol);
        let mut nodes: Vec<Point<S>> = Vec::new();
        let mut parent: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert(x.coords().to_vec());
        nodes.push(x.clone());
        queue.push_back(0usize);
        while let Some(i) = queue.pop_front() {
            let here = nodes[i].clone();
            let mut nbrs: Vec<Point<S>> = self
                .vectors_in_ball(&here, &two_r)
                .into_iter()
                .filter(|(n, _)| !n.is_zero() && two_r.strictly_covers_sq(n, &self.tol))
                .map(|(_, v)| here.translated(&v))
                .collect();
            nbrs.sort_by(|a, b| a.lex_cmp(b));
            for nb in nbrs {
                let (j, fresh) = seen.insert(nb.coords().to_vec());
                if !fresh {
                    continue;
                }
                nodes.push(nb.clone());
                parent.insert(j, i);
                if crate::geom::points_equal(&nb, y, &self.tol) {
                    let mut path = vec![j];
                    let mut k = j;
                    while let Some(&p) = parent.get(&k) {
                        path.push(p);
                        k = p;
                    }
                    path.reverse();
                    let mut vertices: Vec<Point<S>> = path.into_iter().map(|k| nodes[k].clone()).collect();
                    *vertices.last_mut().expect("nonempty") = y.clone();
                    return Ok(Chain { vertices });
                }
                if nodes.len() > max_visits {
                    return Err(not_found());
                }
                queue.push_back(j);
            }
        }
        Err(not_found())
    }
}

/// Sorted distinct squared lengths; in floating mode values within tolerance are merged.
pub(crate) fn distinct_norms<S: Scalar, I: IntoIterator<Item = S>>(norms: I, tol: &Tolerance) -> Vec<S> {
    let mut v: Vec<S> = norms.into_iter().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    let mut out: Vec<S> = Vec::new();
    for n in v {
        if out.last().is_none_or(|l| !tol.sq_eq(l, &n)) {
            out.push(n);
        }
    }
    out
}

pub(crate) fn lex<S: Scalar>(a: &[S], b: &[S]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// A center together with the set points within closed distance `radius` of it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Cluster<S: Scalar> {
    pub center: Point<S>,
    pub radius: Radius<S>,
    /// Sorted by distance from the center, then lexicographically; the center comes first.
    pub points: Vec<Point<S>>,
}

impl<S: Scalar> Cluster<S> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Displacements from the center.
    pub fn vectors(&self) -> Vec<Vec<S>> {
        self.points.iter().map(|p| vsub(p.coords(), self.center.coords())).collect()
    }

    pub fn contains(&self, p: &Point<S>, tol: &Tolerance) -> bool {
        self.points.iter().any(|q| crate::geom::points_equal(p, q, tol))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct DistanceSpectrum<S: Scalar> {
    pub center: Point<S>,
    pub cutoff: Radius<S>,
    pub distances: Vec<Radius<S>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Chain<S: Scalar> {
    pub vertices: Vec<Point<S>>,
}

impl<S: Scalar> Chain<S> {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Squared lengths of consecutive steps.
    pub fn gaps_sq(&self, metric: &Metric<S>) -> Vec<S> {
        self.vertices.windows(2).map(|w| metric.dist_sq(&w[0], &w[1])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn z2() -> PointSet<Rational> {
        let lat = Lattice::new(vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]], Metric::euclidean(2)).unwrap();
        PointSet::build_periodic(lat, vec![Point::from_i64s(&[0, 0])], Tolerance::exact()).unwrap()
    }

    fn three_coset() -> PointSet<Rational> {
        let lat = Lattice::new(vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]], Metric::euclidean(2)).unwrap();
        let motif = vec![
            Point::from_i64s(&[0, 0]),
            Point::from_ratios(&[(1, 2), (0, 1)]),
            Point::from_ratios(&[(0, 1), (1, 2)]),
        ];
        PointSet::build_periodic(lat, motif, Tolerance::exact()).unwrap()
    }

    #[test]
    fn duplicate_motif_rejected() {
        let lat = Lattice::new(vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]], Metric::euclidean(2)).unwrap();
        let err = PointSet::build_periodic(
            lat,
            vec![Point::from_i64s(&[0, 0]), Point::from_i64s(&[1, 0])],
            Tolerance::exact(),
        );
        assert!(matches!(err, Err(Error::DuplicatePoint(_))));
    }

    #[test]
    fn z2_clusters() {
        let s = z2();
        let o = Point::from_i64s(&[0, 0]);
        assert_eq!(s.cluster(&o, &Radius::from_sq(q(1, 1))).unwrap().len(), 5);
        assert_eq!(s.cluster(&o, &Radius::from_value(q(9, 10))).unwrap().len(), 1);
        assert_eq!(s.cluster(&o, &Radius::from_sq(q(2, 1))).unwrap().len(), 9);
        assert!(matches!(
            s.cluster(&Point::from_ratios(&[(1, 2), (0, 1)]), &Radius::from_sq(q(1, 1))),
            Err(Error::NotInSet(_))
        ));
    }

    #[test]
    fn spectra() {
        let s = z2();
        let o = Point::from_i64s(&[0, 0]);
        let sp = s.distance_spectrum(&o, &Radius::from_value(q(21, 10))).unwrap();
        assert_eq!(sp.distances, vec![Radius::from_sq(q(1, 1)), Radius::from_sq(q(2, 1)), Radius::from_sq(q(4, 1))]);
        assert!(s.distance_spectrum(&o, &Radius::from_value(q(1, 2))).unwrap().distances.is_empty());
        // Only the half-step neighbors lie within 0.8 of the origin of the three-coset set.
        let sp = three_coset().distance_spectrum(&o, &Radius::from_value(q(4, 5))).unwrap();
        assert_eq!(sp.distances, vec![Radius::from_value(q(1, 2))]);
    }

    #[test]
    fn params_of_lattices() {
        let p = z2().params().unwrap();
        assert_eq!(p.r, Radius::from_value(q(1, 2)));
        assert_eq!(p.big_r, Radius::from_sq(q(1, 2)));
        let p = three_coset().params().unwrap();
        assert_eq!(p.r, Radius::from_value(q(1, 4)));
        assert_eq!(p.big_r, Radius::from_value(q(1, 2)));
    }

    #[test]
    fn chains() {
        let s = z2();
        let c = s.two_r_chain(&Point::from_i64s(&[0, 0]), &Point::from_i64s(&[3, 0])).unwrap();
        assert_eq!(
            c.vertices,
            vec![
                Point::from_i64s(&[0, 0]),
                Point::from_i64s(&[1, 0]),
                Point::from_i64s(&[2, 0]),
                Point::from_i64s(&[3, 0])
            ]
        );
        let single = s.two_r_chain(&Point::from_i64s(&[0, 0]), &Point::from_i64s(&[0, 0])).unwrap();
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn window_basics() {
        let mut pts = Vec::new();
        for i in -10..=10 {
            for j in -10..=10 {
                pts.push(Point::<Rational>::from_i64s(&[i, j]));
            }
        }
        let bx = BoundingBox::new(vec![q(-10, 1), q(-10, 1)], vec![q(10, 1), q(10, 1)]).unwrap();
        let s = PointSet::build_window(pts, bx.clone(), q(0, 1), Metric::euclidean(2), Tolerance::exact()).unwrap();
        assert_eq!(s.base_points().len(), 441);
        assert!(s.is_interior(&Point::from_i64s(&[0, 0]), &Radius::from_value(q(10, 1))));
        assert!(!s.is_interior(&Point::from_i64s(&[5, 0]), &Radius::from_value(q(6, 1))));
        let empty = PointSet::build_window(Vec::new(), bx, q(0, 1), Metric::euclidean(2), Tolerance::exact());
        assert_eq!(empty.unwrap_err(), Error::EmptyPointSet);
    }
}
