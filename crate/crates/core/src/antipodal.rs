//! Local and global central symmetry, reconstruction from one 2R-cluster, and coset decomposition.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Metric, Point, PointIndex, Tolerance};
use crate::lattice::Lattice;
use crate::linalg::{vscale, vsub};
use crate::radius::Radius;
use crate::scalar::{Rational, Scalar};
use crate::set::{lex, BoundingBox, Cluster, PointSet, SetKind};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct AntipodalFlag<S: Scalar> {
    pub point: Point<S>,
    pub antipodal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct AntipodalReport<S: Scalar> {
    /// The cluster radius checked, `2R`.
    pub radius: Radius<S>,
    pub points: Vec<AntipodalFlag<S>>,
    pub all: bool,
    /// First center (lexicographically) whose 2R-cluster has a point without antipode, and that point.
    pub first_violation: Option<(Point<S>, Point<S>)>,
    pub window_only: bool,
}

fn missing_antipode<S: Scalar>(set: &PointSet<S>, x: &Point<S>, rho: &Radius<S>) -> Option<Point<S>> {
    set.vectors_in_ball(x, rho).into_iter().map(|(_, v)| x.translated(&v)).find(|p| !set.contains(&x.reflect(p)))
}

/// Checks that every interior point's 2R-cluster is centrally symmetric about the point.
pub fn is_locally_antipodal<S: Scalar>(set: &PointSet<S>) -> Result<AntipodalReport<S>> {
    let two_r = set.params()?.big_r.double();
    let centers = set.centers(&two_r);
    if centers.is_empty() {
        return Err(Error::NoInteriorPoints { radius: two_r.to_string() });
    }
    let misses: Vec<Option<Point<S>>> = centers.par_iter().map(|x| missing_antipode(set, x, &two_r)).collect();
    let first_violation = centers.iter().zip(&misses).find_map(|(x, m)| m.as_ref().map(|p| (x.clone(), p.clone())));
    let points =
        centers.into_iter().zip(&misses).map(|(point, m)| AntipodalFlag { point, antipodal: m.is_none() }).collect();
    Ok(AntipodalReport {
        radius: two_r,
        points,
        all: first_violation.is_none(),
        first_violation,
        window_only: !set.is_periodic(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct GlobalAntipodality<S: Scalar> {
    pub center: Point<S>,
    pub symmetric: bool,
    /// A set point whose mirror image about the center is missing, and that image.
    pub witness: Option<(Point<S>, Point<S>)>,
    /// Number of points tested.
    pub tested: usize,
}

fn symmetric_box<S: Scalar>(inner: &BoundingBox<S>, x: &Point<S>) -> Option<BoundingBox<S>> {
    let mut lo = Vec::with_capacity(x.dim());
    let mut hi = Vec::with_capacity(x.dim());
    for (i, c) in x.coords().iter().enumerate() {
        let a = c.clone() - inner.lo[i].clone();
        let b = inner.hi[i].clone() - c.clone();
        let h = if a < b { a } else { b };
        if h < S::zero() {
            return None;
        }
        lo.push(c.clone() - h.clone());
        hi.push(c.clone() + h);
    }
    Some(BoundingBox { lo, hi })
}

/// Tests `σ_x(X) = X`: on the whole set for periodic sets, on the largest box symmetric about `x`
/// inside the trimmed window otherwise.
pub fn check_global_antipodality<S: Scalar>(set: &PointSet<S>, x: &Point<S>) -> Result<GlobalAntipodality<S>> {
    x.check_dim(set.dim())?;
    let candidates: Vec<Point<S>> = match set.kind() {
        SetKind::Periodic { motif, .. } => motif.clone(),
        SetKind::Window { bounds, margin, .. } => match symmetric_box(&bounds.shrink(margin), x) {
            Some(bx) => set.points_in_box(&bx),
            None => Vec::new(),
        },
    };
    let witness = candidates.iter().find_map(|p| {
        let q = x.reflect(p);
        (!set.contains(&q)).then(|| (p.clone(), q))
    });
    Ok(GlobalAntipodality { center: x.clone(), symmetric: witness.is_none(), witness, tested: candidates.len() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Reconstruction<S: Scalar> {
    pub center: Point<S>,
    pub rho_max: Radius<S>,
    /// Points within `rho_max` of the center, sorted lexicographically.
    pub points: Vec<Point<S>>,
    /// Points generated in total, including the margin beyond `rho_max`.
    pub generated: usize,
}

/// Rebuilds `X ∩ B_x(rho_max)` from `C_x(2R)` of a locally antipodal set `X`.
///
/// Points are processed in order of distance from the center. Each processed point `y` adds
/// `σ_y(z)` and `σ_z(y)` for every known `z` with `|yz| ≤ 2R`. Generation runs out to
/// `rho_max + 2R` so that points near the rim have their mirrors available.
pub fn reconstruct_from_2r_cluster<S: Scalar>(
    seed: &Cluster<S>,
    rho_max: &Radius<S>,
    metric: &Metric<S>,
    tol: &Tolerance,
    cap: usize,
) -> Result<Reconstruction<S>> {
    let x = &seed.center;
    x.check_dim(metric.dim())?;
    let seed_index = PointIndex::from_vectors(seed.points.iter().map(Point::coords), *tol);
    if !seed_index.contains(x.coords()) {
        return Err(Error::NotInSet(x.to_string()));
    }
    for p in &seed.points {
        if !seed_index.contains(x.reflect(p).coords()) {
            return Err(Error::NotAntipodal { center: x.to_string(), point: p.to_string() });
        }
    }
    let step = &seed.radius;
    let reach = rho_max.add(step)?;
    let mut known: Vec<Point<S>> = Vec::new();
    let mut known_f64: Vec<Vec<f64>> = Vec::new();
    let mut index = PointIndex::new(*tol);
    let mut heap: BinaryHeap<Reverse<(OrdF64, usize)>> = BinaryHeap::new();
    let to_cart = |p: &Point<S>| metric.to_cartesian(p);
    let x_cart = to_cart(x);
    let mut push = |p: Point<S>,
                    known: &mut Vec<Point<S>>,
                    known_f64: &mut Vec<Vec<f64>>,
                    heap: &mut BinaryHeap<Reverse<(OrdF64, usize)>>|
     -> Result<()> {
        let (i, fresh) = index.insert(p.coords().to_vec());
        if fresh {
            if known.len() >= cap {
                return Err(Error::CapExceeded { cap });
            }
            let pc = to_cart(&p);
            let d = dist(&pc, &x_cart);
            known.push(p);
            known_f64.push(pc);
            heap.push(Reverse((OrdF64(d), i)));
        }
        Ok(())
    };
    for p in &seed.points {
        push(p.clone(), &mut known, &mut known_f64, &mut heap)?;
    }
    let step_f = step.to_f64() * (1.0 + 1e-9) + 1e-9;
    let reach_f = reach.to_f64() * (1.0 + 1e-9) + 1e-9;
    while let Some(Reverse((_, i))) = heap.pop() {
        let y = known[i].clone();
        let yc = known_f64[i].clone();
        let near: Vec<usize> = (0..known.len())
            .filter(|&j| j != i && dist(&known_f64[j], &yc) <= step_f)
            .filter(|&j| step.covers_sq(&metric.dist_sq(&known[j], &y), tol))
            .collect();
        for j in near {
            let z = known[j].clone();
            for cand in [y.reflect(&z), z.reflect(&y)] {
                if dist(&to_cart(&cand), &x_cart) > reach_f {
                    continue;
                }
                if reach.covers_sq(&metric.dist_sq(&cand, x), tol) {
                    push(cand, &mut known, &mut known_f64, &mut heap)?;
                }
            }
        }
    }
    let generated = known.len();
    let mut points: Vec<Point<S>> =
        known.into_iter().filter(|p| rho_max.covers_sq(&metric.dist_sq(p, x), tol)).collect();
    points.sort_by(|a, b| a.lex_cmp(b));
    Ok(Reconstruction { center: x.clone(), rho_max: rho_max.clone(), points, generated })
}

#[derive(Debug, Clone, Copy)]
struct OrdF64(f64);

impl PartialEq for OrdF64 {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `X = ⊔ (x + λ_i/2 + Λ)` with `Λ` the translation lattice of `X`.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = ""))]
pub struct CosetDecomposition<S: Scalar> {
    pub base_point: Point<S>,
    #[serde(serialize_with = "serialize_lattice")]
    pub lattice: Lattice<S>,
    /// `λ_i`, sorted by length then lexicographically; the first is zero.
    #[serde(serialize_with = "serialize_rows")]
    pub half_vectors: Vec<Vec<S>>,
    pub n: usize,
    /// True when `Λ` was estimated from translations verified on a finite window.
    pub window_only: bool,
}

fn serialize_rows<S: Scalar, Se: serde::Serializer>(rows: &[Vec<S>], s: Se) -> std::result::Result<Se::Ok, Se::Error> {
    let text: Vec<Vec<String>> = rows.iter().map(|v| v.iter().map(Scalar::to_text).collect()).collect();
    text.serialize(s)
}

fn serialize_lattice<S: Scalar, Se: serde::Serializer>(
    l: &Lattice<S>,
    s: Se,
) -> std::result::Result<Se::Ok, Se::Error> {
    serialize_rows(l.basis(), s)
}

impl<S: Scalar> CosetDecomposition<S> {
    /// Coset offsets `λ_i / 2`.
    pub fn offsets(&self) -> Vec<Vec<S>> {
        let half = S::from_ratio(1, 2);
        self.half_vectors.iter().map(|v| vscale(v, &half)).collect()
    }

    /// Whether `p` lies in one of the cosets.
    pub fn covers(&self, p: &Point<S>, tol: &Tolerance) -> bool {
        let d = p.delta(&self.base_point);
        self.offsets().iter().any(|o| self.lattice.contains_vector(&vsub(&d, o), tol))
    }
}

const MAX_DEN: u64 = 1 << 20;

/// The lattice spanned by `gens`, each given by coefficients over `frame` (a basis of a lattice
/// of full rank). Coefficients must be rational with small denominators.
fn span_over<S: Scalar>(frame: &Lattice<S>, gens: &[Vec<S>], tol: &Tolerance) -> Result<Lattice<S>> {
    let d = frame.dim();
    let eps = tol.eps_abs.max(1e-9);
    let coeffs = gens
        .iter()
        .map(|g| {
            frame
                .coords(g)
                .iter()
                .map(|c| c.rationalize(MAX_DEN, eps))
                .collect::<Option<Vec<Rational>>>()
                .ok_or_else(|| Error::Unsupported("translation with irrational lattice coefficients".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let coeff_lat = Lattice::<Rational>::from_generators(&coeffs, Metric::euclidean(d))?;
    let basis: Vec<Vec<S>> = coeff_lat
        .basis()
        .iter()
        .map(|c| frame.from_coords(&c.iter().map(S::from_rational).collect::<Vec<_>>()))
        .collect();
    let lat = Lattice::new(basis, frame.metric().clone())?;
    Lattice::new(lat.reduced_basis().to_vec(), frame.metric().clone())
}

fn sort_vectors<S: Scalar>(metric: &Metric<S>, vs: &mut [Vec<S>]) {
    vs.sort_by(|a, b| metric.norm_sq(a).total_cmp(&metric.norm_sq(b)).then_with(|| lex(a, b)));
}

/// Decomposes a locally antipodal set into cosets of its translation lattice.
pub fn antipodal_lattice_decomposition<S: Scalar>(set: &PointSet<S>) -> Result<CosetDecomposition<S>> {
    let report = is_locally_antipodal(set)?;
    if let Some((c, p)) = report.first_violation {
        return Err(Error::NotAntipodal { center: c.to_string(), point: p.to_string() });
    }
    let tol = *set.tolerance();
    let d = set.dim();
    let (base, lattice, members, window_only) = match set.kind() {
        SetKind::Periodic { lattice, motif } => {
            let base = motif[0].clone();
            let mut gens: Vec<Vec<S>> = lattice.reduced_basis().to_vec();
            for m in &motif[1..] {
                let t = m.delta(&base);
                if motif.iter().all(|q| set.contains(&q.translated(&t))) {
                    gens.push(t);
                }
            }
            (base, span_over(lattice, &gens, &tol)?, motif.clone(), false)
        }
        SetKind::Window { .. } => {
            let (base, lat) = window_lattice(set)?;
            let members = set.centers(&Radius::zero());
            (base, lat, members, true)
        }
    };
    let mut offsets: Vec<Vec<S>> = Vec::new();
    let mut seen = PointIndex::new(tol);
    for m in &members {
        let o = lattice.reduce_vector(&m.delta(&base), &tol);
        if seen.insert(o.clone()).1 {
            offsets.push(o);
        }
    }
    let two = S::from_i64(2);
    let mut half_vectors: Vec<Vec<S>> = offsets.iter().map(|o| vscale(o, &two)).collect();
    for (o, h) in offsets.iter().zip(&half_vectors) {
        if !lattice.contains_vector(h, &tol) {
            return Err(Error::Inconsistent(format!(
                "coset offset {} is not half a lattice vector",
                Point::new(o.clone())
            )));
        }
    }
    let n = half_vectors.len();
    if n > (1usize << d) - 1 {
        return Err(Error::CosetBound { n, dim: d });
    }
    sort_vectors(lattice.metric(), &mut half_vectors);
    Ok(CosetDecomposition { base_point: base, lattice, half_vectors, n, window_only })
}

/// Translation lattice of a window: differences `p − x` of length at most `4R` from an interior
/// base point `x` that preserve the set wherever both ends are inside the trimmed window.
fn window_lattice<S: Scalar>(set: &PointSet<S>) -> Result<(Point<S>, Lattice<S>)> {
    let params = set.params()?;
    let four_r = params.big_r.scale(&S::from_i64(4));
    let centers = set.centers(&four_r);
    let SetKind::Window { bounds, .. } = set.kind() else { unreachable!("window_lattice on a periodic set") };
    let mid: Vec<f64> = bounds.lo.iter().zip(&bounds.hi).map(|(a, b)| (a.to_f64() + b.to_f64()) / 2.0).collect();
    let base = centers
        .iter()
        .min_by(|a, b| {
            let da = dist(&a.to_f64(), &mid);
            let db = dist(&b.to_f64(), &mid);
            da.total_cmp(&db).then_with(|| a.lex_cmp(b))
        })
        .cloned()
        .ok_or_else(|| Error::WindowTooSmall(format!("no point is interior at radius {four_r}")))?;
    let tol = *set.tolerance();
    let members = set.centers(&Radius::zero());
    let mut valid: Vec<Vec<S>> = Vec::new();
    for (_, t) in set.vectors_in_ball(&base, &four_r).into_iter().skip(1) {
        let len = Radius::from_sq(set.metric().norm_sq(&t));
        let mut tested = 0usize;
        let ok = members.iter().filter(|q| set.is_interior(q, &len)).all(|q| {
            tested += 1;
            let neg: Vec<S> = t.iter().map(|c| -c.clone()).collect();
            set.contains(&q.translated(&t)) && set.contains(&q.translated(&neg))
        });
        if ok && tested > 0 {
            valid.push(t);
        }
    }
    let frame = Lattice::new(crate::linalg::Matrix::<S>::identity(set.dim()).to_rows(), set.metric().clone())?;
    let rank = crate::linalg::Matrix::from_rows(&valid).rank();
    if rank < set.dim() {
        return Err(Error::WindowTooSmall(format!(
            "translations verified on the window span only {rank} of {} dimensions",
            set.dim()
        )));
    }
    Ok((base, span_over(&frame, &valid, &tol)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_coset_union, honeycomb, integer_lattice, three_coset_fixture};
    use crate::linalg::Matrix;

    fn exact() -> Tolerance {
        Tolerance::exact()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn lattice_and_fixture_are_antipodal() {
        assert!(is_locally_antipodal(&integer_lattice::<Rational>(2, exact())).unwrap().all);
        assert!(is_locally_antipodal(&three_coset_fixture::<Rational>(exact())).unwrap().all);
    }

    #[test]
    fn honeycomb_is_not_antipodal() {
        let r = is_locally_antipodal(&honeycomb::<Rational>(exact())).unwrap();
        assert!(!r.all);
        assert!(r.first_violation.is_some());
    }

    #[test]
    fn global_symmetry_of_fixture() {
        let s = three_coset_fixture::<Rational>(exact());
        let g = check_global_antipodality(&s, &Point::from_ratios(&[(1, 2), (0, 1)])).unwrap();
        assert!(g.symmetric);
    }

    #[test]
    fn reconstruct_z2() {
        let s = integer_lattice::<Rational>(2, exact());
        let two_r = s.params().unwrap().big_r.double();
        let seed = s.cluster(&Point::origin(2), &two_r).unwrap();
        let rho = Radius::from_value(q(3, 1));
        let rec = reconstruct_from_2r_cluster(&seed, &rho, s.metric(), &exact(), 10_000).unwrap();
        let mut want = s.points_in_ball(&Point::origin(2), &rho);
        want.sort_by(|a, b| a.lex_cmp(b));
        assert_eq!(rec.points, want);
    }

    #[test]
    fn reconstruct_rejects_honeycomb_seed() {
        let s = honeycomb::<Rational>(exact());
        let two_r = s.params().unwrap().big_r.double();
        let seed = s.cluster(&Point::origin(2), &two_r).unwrap();
        let err = reconstruct_from_2r_cluster(&seed, &two_r, s.metric(), &exact(), 10_000).unwrap_err();
        assert!(matches!(err, Error::NotAntipodal { .. }));
    }

    #[test]
    fn decomposition_counts() {
        let d = antipodal_lattice_decomposition(&three_coset_fixture::<Rational>(exact())).unwrap();
        assert_eq!(d.n, 3);
        let z2 = Lattice::new(Matrix::<Rational>::identity(2).to_rows(), Metric::euclidean(2)).unwrap();
        assert!(d.lattice.same_as(&z2, &exact()));
        let diag = gen_coset_union(z2, vec![vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(1, 1)]], exact()).unwrap();
        let d2 = antipodal_lattice_decomposition(&diag).unwrap();
        assert_eq!(d2.n, 1);
    }
}
