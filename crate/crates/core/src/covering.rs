//! Covering radius `R`: the radius of the largest empty ball.
//!
//! For d ≤ 3 the largest empty ball is a Delaunay circumsphere. Candidate spheres pass
//! through a base point and d of its neighbors; they are screened in `f64` and the winner
//! is recomputed and re-checked in the set's own arithmetic.

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::linalg::Matrix;
use crate::radius::Radius;
use crate::scalar::Scalar;
use crate::set::{Exactness, PointSet, SetKind};

struct Candidate {
    radius_sq: f64,
    base: usize,
    subset: Vec<usize>,
    center: Vec<f64>,
}

/// Neighborhood of one base point: displacement vectors, excluding the zero vector.
struct Local<S> {
    base: Point<S>,
    vectors: Vec<Vec<S>>,
    vectors_f64: Vec<Vec<f64>>,
}

pub(crate) fn covering_radius<S: Scalar>(set: &PointSet<S>) -> Result<(Radius<S>, Exactness)> {
    let d = set.dim();
    if d > 3 {
        return grid_estimate(set).map(|r| (r, Exactness::LowerBoundEstimate));
    }
    match set.kind() {
        SetKind::Periodic { lattice, motif } => {
            let u = lattice.covering_bound();
            let reach = value_radius::<S>(2.0 * u);
            let locals: Vec<Local<S>> = motif.iter().map(|m| local(set, m, &reach)).collect();
            let best = largest_empty_sphere(set, &locals, u * u, |_, _| true)?
                .ok_or_else(|| Error::Inconsistent("no empty circumsphere in a fundamental cell".into()))?;
            Ok((Radius::from_sq(best), Exactness::Exact))
        }
        SetKind::Window { points, .. } => {
            let bases: Vec<&Point<S>> =
                points.iter().filter(|p| set.boundary_dist_sq(p).is_some_and(|b| !b.is_zero())).collect();
            if bases.len() < d + 1 {
                return Err(Error::WindowTooSmall("too few points inside the margin".into()));
            }
            // Every empty ball inside the window has its defining points within 2ρ of each
            // other, so a reach of twice an upper bound on ρ finds the largest one.
            let upper = window_upper_bound(set)?;
            let k = 2.0 * upper;
            let reach = value_radius::<S>(k);
            let locals: Vec<Local<S>> = bases.iter().map(|p| local(set, p, &reach)).collect();
            let found = largest_empty_sphere(set, &locals, k * k / 4.0, |c, r2| {
                set.boundary_dist_sq(c).is_some_and(|b| {
                    if S::is_exact() {
                        *r2 <= b
                    } else {
                        r2.to_f64() <= b.to_f64() + set.tolerance().eps_abs
                    }
                })
            })?;
            match found {
                Some(best) => Ok((Radius::from_sq(best), Exactness::LowerBoundEstimate)),
                None => Err(Error::WindowTooSmall("no empty ball fits inside the window".into())),
            }
        }
    }
}

/// Upper bound on the radius of any empty ball inside the trimmed window, from the distance
/// to the nearest point sampled on a grid plus half the grid cell diameter.
fn window_upper_bound<S: Scalar>(set: &PointSet<S>) -> Result<f64> {
    const MAX_SAMPLES: f64 = 250_000.0;
    let SetKind::Window { bounds, margin, points } = set.kind() else { unreachable!("window only") };
    let d = set.dim();
    let inner = bounds.shrink(margin);
    let lo: Vec<f64> = inner.lo.iter().map(Scalar::to_f64).collect();
    let hi: Vec<f64> = inner.hi.iter().map(Scalar::to_f64).collect();
    let g: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| set.metric().gram().get(i, j).to_f64()).collect()).collect();
    let pts: Vec<Vec<f64>> = points.iter().map(Point::to_f64).collect();
    // A quarter of the mean spacing, in metric units.
    let det = set.metric().gram().determinant().to_f64().max(0.0);
    let volume: f64 = (0..d).map(|i| (hi[i] - lo[i]).max(0.0)).product::<f64>() * det.sqrt();
    let spacing = (volume / pts.len() as f64).powf(1.0 / d as f64);
    let mut step = if spacing.is_finite() && spacing > 0.0 { spacing / 4.0 } else { 1e-3 };
    let counts = |step: f64| -> Vec<usize> {
        (0..d).map(|i| (((hi[i] - lo[i]) * g[i][i].sqrt() / step).ceil() as usize).max(1)).collect()
    };
    while counts(step).iter().map(|&n| (n + 1) as f64).product::<f64>() > MAX_SAMPLES {
        step *= 2.0;
    }
    let n = counts(step);
    let h: Vec<f64> = (0..d).map(|i| (hi[i] - lo[i]) / n[i] as f64).collect();
    let half_cell = quad_f64(&g, &h).sqrt() / 2.0;
    let total: usize = n.iter().map(|&k| k + 1).product();
    let mut best: f64 = -1.0;
    for code in 0..total {
        let mut c = code;
        let x: Vec<f64> = (0..d)
            .map(|i| {
                let t = c % (n[i] + 1);
                c /= n[i] + 1;
                lo[i] + h[i] * t as f64
            })
            .collect();
        let near = pts
            .iter()
            .map(|p| quad_f64(&g, &p.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>()))
            .fold(f64::INFINITY, f64::min)
            .sqrt();
        let bd = (0..d)
            .map(|i| (x[i] - lo[i]).min(hi[i] - x[i]) / set.metric().dual_norm_sq(i).to_f64().sqrt())
            .fold(f64::INFINITY, f64::min);
        if near <= bd + half_cell {
            best = best.max(near);
        }
    }
    if best < 0.0 {
        return Err(Error::WindowTooSmall("no empty ball fits inside the window".into()));
    }
    Ok(best + half_cell)
}

fn quad_f64(g: &[Vec<f64>], v: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..v.len() {
        for j in 0..v.len() {
            s += v[i] * g[i][j] * v[j];
        }
    }
    s
}

fn value_radius<S: Scalar>(v: f64) -> Radius<S> {
    Radius::from_value(S::from_f64(v * (1.0 + 1e-9) + 1e-9).expect("finite radius"))
}

fn local<S: Scalar>(set: &PointSet<S>, base: &Point<S>, reach: &Radius<S>) -> Local<S> {
    let vectors: Vec<Vec<S>> =
        set.vectors_in_ball(base, reach).into_iter().filter(|(n, _)| !n.is_zero()).map(|(_, v)| v).collect();
    let vectors_f64 = vectors.iter().map(|v| v.iter().map(Scalar::to_f64).collect()).collect();
    Local { base: base.clone(), vectors, vectors_f64 }
}

fn window_diameter<S: Scalar>(set: &PointSet<S>) -> f64 {
    let SetKind::Window { bounds, .. } = set.kind() else { return 0.0 };
    let diff: Vec<f64> = bounds.hi.iter().zip(&bounds.lo).map(|(a, b)| a.to_f64() - b.to_f64()).collect();
    quad(set, &diff, &vec![0.0; diff.len()]).sqrt()
}

fn quad<S: Scalar>(set: &PointSet<S>, a: &[f64], b: &[f64]) -> f64 {
    let g = set.metric().gram();
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mut s = 0.0;
    for i in 0..d.len() {
        for j in 0..d.len() {
            s += d[i] * g.get(i, j).to_f64() * d[j];
        }
    }
    s
}

/// Circumcenter offset `y` (relative to the base point) of the base and the given vectors:
/// `2⟨y, v_i⟩ = |v_i|²`. Requires `d` independent vectors.
fn circumcenter<T: Scalar>(gram: &Matrix<T>, vs: &[&Vec<T>]) -> Option<Vec<T>> {
    let rows: Vec<Vec<T>> =
        vs.iter().map(|v| gram.mul_vec(v).iter().map(|x| x.clone() * T::from_i64(2)).collect()).collect();
    let rhs: Vec<T> =
        vs.iter().map(|v| v.iter().zip(gram.mul_vec(v)).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b)).collect();
    Matrix::from_rows(&rows).solve_vec(&rhs)
}

fn norm_sq<T: Scalar>(gram: &Matrix<T>, v: &[T]) -> T {
    v.iter().zip(gram.mul_vec(v)).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b)
}

fn largest_empty_sphere<S: Scalar, F>(
    set: &PointSet<S>,
    locals: &[Local<S>],
    max_radius_sq: f64,
    accept: F,
) -> Result<Option<S>>
where
    F: Fn(&Point<S>, &S) -> bool,
{
    let d = set.dim();
    let gram = set.metric().gram();
    let gram_f64: Matrix<f64> =
        Matrix::from_rows(&(0..d).map(|i| (0..d).map(|j| gram.get(i, j).to_f64()).collect()).collect::<Vec<_>>());
    let cap = max_radius_sq * (1.0 + 1e-9) + 1e-12;
    let mut cands: Vec<Candidate> = Vec::new();
    for (bi, loc) in locals.iter().enumerate() {
        for subset in combinations(loc.vectors.len(), d) {
            let vs: Vec<&Vec<f64>> = subset.iter().map(|&i| &loc.vectors_f64[i]).collect();
            let Some(y) = circumcenter(&gram_f64, &vs) else { continue };
            let r2 = norm_sq(&gram_f64, &y);
            if r2.is_finite() && r2 <= cap {
                cands.push(Candidate { radius_sq: r2, base: bi, subset, center: y });
            }
        }
    }
    cands.sort_by(|a, b| b.radius_sq.total_cmp(&a.radius_sq));
    let tol = set.tolerance();
    let mut best: Option<S> = None;
    for c in &cands {
        if let Some(b) = &best {
            if c.radius_sq < b.to_f64() * (1.0 - 1e-7) - 1e-12 {
                break;
            }
        }
        let loc = &locals[c.base];
        let slack = 1e-9 * (1.0 + c.radius_sq);
        let empty_f64 = loc.vectors_f64.iter().all(|v| {
            let w: Vec<f64> = v.iter().zip(&c.center).map(|(a, b)| a - b).collect();
            norm_sq(&gram_f64, &w) >= c.radius_sq - slack
        });
        if !empty_f64 {
            continue;
        }
        let vs: Vec<&Vec<S>> = c.subset.iter().map(|&i| &loc.vectors[i]).collect();
        let Some(y) = circumcenter(gram, &vs) else { continue };
        let r2 = norm_sq(gram, &y);
        let empty = loc.vectors.iter().all(|v| {
            let w: Vec<S> = v.iter().zip(&y).map(|(a, b)| a.clone() - b.clone()).collect();
            let n = norm_sq(gram, &w);
            !tol.sq_lt(&n, &r2)
        });
        if !empty {
            continue;
        }
        let center = loc.base.translated(&y);
        if !accept(&center, &r2) {
            continue;
        }
        if best.as_ref().is_none_or(|b| r2 > *b) {
            best = Some(r2);
        }
    }
    Ok(best)
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Largest distance to the set over a sample grid: a lower bound on `R`.
fn grid_estimate<S: Scalar>(set: &PointSet<S>) -> Result<Radius<S>> {
    const STEPS: i64 = 6;
    let d = set.dim();
    let (origin, axes, reach): (Vec<S>, Vec<Vec<S>>, f64) = match set.kind() {
        SetKind::Periodic { lattice, motif } => {
            (motif[0].coords().to_vec(), lattice.reduced_basis().to_vec(), 2.0 * lattice.covering_bound())
        }
        SetKind::Window { bounds, margin, .. } => {
            let inner = bounds.shrink(margin);
            let axes = (0..d)
                .map(|i| {
                    let mut e = vec![S::zero(); d];
                    e[i] = inner.hi[i].clone() - inner.lo[i].clone();
                    e
                })
                .collect();
            (inner.lo.clone(), axes, window_diameter(set))
        }
    };
    let reach = value_radius::<S>(reach.max(1e-9));
    let mut best: Option<S> = None;
    let total = (STEPS + 1).pow(d as u32);
    for code in 0..total {
        let mut p = origin.clone();
        let mut c = code;
        for axis in &axes {
            let t = S::from_ratio(c % (STEPS + 1), STEPS);
            c /= STEPS + 1;
            for (x, a) in p.iter_mut().zip(axis) {
                *x = x.clone() + a.clone() * t.clone();
            }
        }
        let sample = Point::new(p);
        if !set.is_periodic() && !set.is_interior(&sample, &Radius::zero()) {
            continue;
        }
        if let Some((n, _)) = set.vectors_in_ball(&sample, &reach).into_iter().next() {
            if best.as_ref().is_none_or(|b| n > *b) {
                best = Some(n);
            }
        }
    }
    best.map(Radius::from_sq).ok_or_else(|| Error::WindowTooSmall("no sample point reached the set".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Metric, Tolerance};
    use crate::lattice::Lattice;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn periodic(basis: Vec<Vec<Rational>>, metric: Metric<Rational>) -> PointSet<Rational> {
        let d = basis.len();
        let lat = Lattice::new(basis, metric).unwrap();
        PointSet::build_periodic(lat, vec![Point::origin(d)], Tolerance::exact()).unwrap()
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn rectangle_and_triangle() {
        let rect = periodic(vec![vec![q(1, 5), q(0, 1)], vec![q(0, 1), q(1, 1)]], Metric::euclidean(2));
        // (a² + b²) / 4 with a = 1/5, b = 1
        assert_eq!(covering_radius(&rect).unwrap().0, Radius::from_sq(q(26, 100)));
        let tri = Metric::from_gram(Matrix::from_rows(&[vec![q(1, 1), q(1, 2)], vec![q(1, 2), q(1, 1)]])).unwrap();
        let t = periodic(vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]], tri);
        assert_eq!(covering_radius(&t).unwrap().0, Radius::from_sq(q(1, 3)));
    }

    #[test]
    fn cubic_lattice() {
        let b = vec![vec![q(1, 1), q(0, 1), q(0, 1)], vec![q(0, 1), q(1, 1), q(0, 1)], vec![q(0, 1), q(0, 1), q(1, 1)]];
        let s = periodic(b, Metric::euclidean(3));
        assert_eq!(covering_radius(&s).unwrap().0, Radius::from_sq(q(3, 4)));
    }

    #[test]
    fn window_estimate_is_flagged() {
        let mut pts = Vec::new();
        for i in 0..=8 {
            for j in 0..=8 {
                pts.push(Point::<Rational>::from_i64s(&[i, j]));
            }
        }
        let bx = crate::set::BoundingBox::new(vec![q(0, 1), q(0, 1)], vec![q(8, 1), q(8, 1)]).unwrap();
        let s = PointSet::build_window(pts, bx, q(0, 1), Metric::euclidean(2), Tolerance::exact()).unwrap();
        let (r, ex) = covering_radius(&s).unwrap();
        assert_eq!(r, Radius::from_sq(q(1, 2)));
        assert_eq!(ex, Exactness::LowerBoundEstimate);
    }
}
