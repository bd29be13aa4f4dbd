//! Points, the ambient metric, tolerances and isometries.
//!
//! Coordinates are taken with respect to a fixed frame whose Gram matrix is the
//! [`Metric`]. For Cartesian data the metric is the identity; a rational non-identity
//! Gram matrix lets sets such as the triangular lattice be handled exactly, since
//! every squared distance and every symmetry matrix is rational in lattice
//! coordinates. "Orthogonal" below always means orthogonal for this metric:
//! `Mᵀ G M = G`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{vadd, vneg, vscale, vsub, Matrix};
use crate::scalar::{NumericMode, Scalar};

#[derive(Clone, PartialEq)]
pub struct Point<S> {
    coords: Vec<S>,
}

impl<S: Scalar> Point<S> {
    pub fn new(coords: Vec<S>) -> Self {
        debug_assert!(coords.iter().all(Scalar::is_finite_value));
        Point { coords }
    }

    pub fn try_new(coords: Vec<S>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if !coords.iter().all(Scalar::is_finite_value) {
            return Err(Error::NonFinite);
        }
        Ok(Point { coords })
    }

    pub fn origin(dim: usize) -> Self {
        Point { coords: vec![S::zero(); dim] }
    }

    pub fn from_i64s(v: &[i64]) -> Self {
        Point { coords: v.iter().map(|&x| S::from_i64(x)).collect() }
    }

    /// Coordinates given as `(numerator, denominator)` pairs.
    pub fn from_ratios(v: &[(i64, i64)]) -> Self {
        Point { coords: v.iter().map(|&(n, d)| S::from_ratio(n, d)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    /// `self - other` as a vector.
    pub fn delta(&self, other: &Point<S>) -> Vec<S> {
        vsub(&self.coords, &other.coords)
    }

    pub fn translated(&self, v: &[S]) -> Point<S> {
        Point { coords: vadd(&self.coords, v) }
    }

    /// The point `2 * self - p`.
    pub fn reflect(&self, p: &Point<S>) -> Point<S> {
        let two = S::from_i64(2);
        Point { coords: self.coords.iter().zip(&p.coords).map(|(c, x)| two.clone() * c.clone() - x.clone()).collect() }
    }

    pub fn lex_cmp(&self, other: &Point<S>) -> Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.coords.len().cmp(&other.coords.len())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Scalar::to_f64).collect()
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: dim, found: self.dim() })
        }
    }
}

impl<S: Scalar> fmt::Display for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(Scalar::to_text).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl<S: Scalar> fmt::Debug for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<S: Scalar> Serialize for Point<S> {
    fn serialize<Ser: serde::Serializer>(&self, ser: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let texts: Vec<String> = self.coords.iter().map(Scalar::to_text).collect();
        texts.serialize(ser)
    }
}

/// Inner product on frame coordinates, given by a symmetric positive definite Gram matrix.
#[derive(Clone, PartialEq)]
pub struct Metric<S> {
    gram: Matrix<S>,
    euclidean: bool,
    /// Diagonal of the inverse Gram matrix: squared lengths of the dual frame vectors.
    dual_diag: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Metric<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Metric({:?})", self.gram)
    }
}

impl<S: Scalar> Metric<S> {
    pub fn euclidean(dim: usize) -> Self {
        Metric { gram: Matrix::identity(dim), euclidean: true, dual_diag: vec![S::one(); dim] }
    }

    pub fn from_gram(gram: Matrix<S>) -> Result<Self> {
        let d = gram.rows();
        if d == 0 || gram.cols() != d {
            return Err(Error::InvalidMetric("Gram matrix must be square and nonempty".into()));
        }
        for i in 0..d {
            for j in 0..i {
                if gram.get(i, j) != gram.get(j, i) {
                    return Err(Error::InvalidMetric("Gram matrix must be symmetric".into()));
                }
            }
        }
        // Sylvester: all leading principal minors positive.
        for k in 1..=d {
            let minor = Matrix::from_rows(
                &(0..k).map(|i| (0..k).map(|j| gram.get(i, j).clone()).collect()).collect::<Vec<_>>(),
            );
            if minor.determinant() <= S::zero() {
                return Err(Error::InvalidMetric("Gram matrix must be positive definite".into()));
            }
        }
        let inv = gram.inverse().ok_or(Error::InvalidMetric("singular Gram matrix".into()))?;
        let dual_diag = (0..d).map(|i| inv.get(i, i).clone()).collect();
        let euclidean = gram == Matrix::identity(d);
        Ok(Metric { gram, euclidean, dual_diag })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix<S> {
        &self.gram
    }

    pub fn is_euclidean(&self) -> bool {
        self.euclidean
    }

    pub fn inner(&self, u: &[S], v: &[S]) -> S {
        if self.euclidean {
            return u.iter().zip(v).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
        }
        let gv = self.gram.mul_vec(v);
        u.iter().zip(&gv).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn norm_sq(&self, v: &[S]) -> S {
        self.inner(v, v)
    }

    pub fn dist_sq(&self, p: &Point<S>, q: &Point<S>) -> S {
        self.norm_sq(&p.delta(q))
    }

    /// Squared length of the i-th dual frame vector; converts coordinate gaps into distances
    /// to the hyperplanes `x_i = const`.
    pub fn dual_norm_sq(&self, i: usize) -> &S {
        &self.dual_diag[i]
    }

    /// Upper-triangular `U` with `Uᵀ U = G`, so that `U x` are Cartesian coordinates.
    pub fn cartesian_factor(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        let g: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| self.gram.get(i, j).to_f64()).collect()).collect();
        let mut u = vec![vec![0.0; d]; d];
        for i in 0..d {
            for j in i..d {
                let s: f64 = (0..i).map(|k| u[k][i] * u[k][j]).sum();
                if i == j {
                    u[i][i] = (g[i][i] - s).max(0.0).sqrt();
                } else {
                    u[i][j] = (g[i][j] - s) / u[i][i];
                }
            }
        }
        u
    }

    pub fn to_cartesian(&self, p: &Point<S>) -> Vec<f64> {
        let x = p.to_f64();
        if self.euclidean {
            return x;
        }
        let u = self.cartesian_factor();
        (0..x.len()).map(|i| (i..x.len()).map(|j| u[i][j] * x[j]).sum()).collect()
    }
}

/// Comparison tolerance. In exact mode every comparison is exact and `eps_abs` is unused.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps_abs: f64,
    pub mode: NumericMode,
}

/// Orthogonality residual accepted for synthesized isometries in floating mode.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

impl Tolerance {
    pub fn exact() -> Self {
        Tolerance { eps_abs: 0.0, mode: NumericMode::Exact }
    }

    pub fn float(eps_abs: f64) -> Self {
        assert!(eps_abs > 0.0, "floating tolerance must be positive");
        Tolerance { eps_abs, mode: NumericMode::Float }
    }

    /// Default for scalar type `S`: `1e-9` times the given length scale (typically `r`).
    pub fn for_scalar<S: Scalar>(scale: f64) -> Self {
        match S::MODE {
            NumericMode::Exact => Self::exact(),
            NumericMode::Float => {
                let s = if scale.is_finite() && scale > 0.0 { scale } else { 1.0 };
                Self::float(1e-9 * s)
            }
        }
    }

    pub fn eq<S: Scalar>(&self, a: &S, b: &S) -> bool {
        if S::is_exact() {
            a == b
        } else {
            (a.to_f64() - b.to_f64()).abs() <= self.eps_abs
        }
    }

    /// Equality of squared lengths, allowing `eps_abs` on the lengths themselves.
    pub fn sq_eq<S: Scalar>(&self, a: &S, b: &S) -> bool {
        if S::is_exact() {
            return a == b;
        }
        let (x, y) = (a.to_f64(), b.to_f64());
        (x - y).abs() <= self.sq_slack(x.max(y))
    }

    /// `a <= b` for squared lengths, with slack.
    pub fn sq_le<S: Scalar>(&self, a: &S, b: &S) -> bool {
        if S::is_exact() {
            return a <= b;
        }
        a.to_f64() <= b.to_f64() + self.sq_slack(b.to_f64())
    }

    /// `a < b` for squared lengths: strictly below, beyond the slack.
    pub fn sq_lt<S: Scalar>(&self, a: &S, b: &S) -> bool {
        if S::is_exact() {
            return a < b;
        }
        a.to_f64() < b.to_f64() - self.sq_slack(b.to_f64())
    }

    fn sq_slack(&self, sq: f64) -> f64 {
        self.eps_abs * (2.0 * sq.max(0.0).sqrt() + self.eps_abs)
    }

    /// Cell size for quantized point lookup.
    pub(crate) fn cell(&self) -> f64 {
        (4.0 * self.eps_abs).max(f64::MIN_POSITIVE)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::exact()
    }
}

/// Exact equality in exact mode; max-norm coordinate distance `<= eps_abs` otherwise.
pub fn points_equal<S: Scalar>(p: &Point<S>, q: &Point<S>, tol: &Tolerance) -> bool {
    p.dim() == q.dim() && p.coords.iter().zip(&q.coords).all(|(a, b)| tol.eq(a, b))
}

/// Hash lookup of points, honoring the tolerance in floating mode.
#[derive(Clone)]
pub struct PointIndex<S: Scalar> {
    map: HashMap<Vec<S::Key>, Vec<usize>>,
    points: Vec<Vec<S>>,
    tol: Tolerance,
}

impl<S: Scalar> PointIndex<S> {
    pub fn new(tol: Tolerance) -> Self {
        PointIndex { map: HashMap::new(), points: Vec::new(), tol }
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a [S]>>(vectors: I, tol: Tolerance) -> Self {
        let mut idx = Self::new(tol);
        for v in vectors {
            idx.insert(v.to_vec());
        }
        idx
    }

    fn key(&self, v: &[S]) -> Vec<S::Key> {
        let cell = self.tol.cell();
        v.iter().map(|x| x.key(cell)).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Inserts and returns the new index, or the index of an existing equal point.
    pub fn insert(&mut self, v: Vec<S>) -> (usize, bool) {
        if let Some(i) = self.find(&v) {
            return (i, false);
        }
        let key = self.key(&v);
        let i = self.points.len();
        self.points.push(v);
        self.map.entry(key).or_default().push(i);
        (i, true)
    }

    pub fn find(&self, v: &[S]) -> Option<usize> {
        let key = self.key(v);
        if S::is_exact() {
            return self.map.get(&key)?.first().copied();
        }
        let mut found = None;
        visit_adjacent::<S>(&key, 0, &mut key.clone(), &mut |k| {
            if found.is_none() {
                if let Some(ids) = self.map.get(k) {
                    found = ids.iter().copied().find(|&i| self.points[i].iter().zip(v).all(|(a, b)| self.tol.eq(a, b)));
                }
            }
        });
        found
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.find(v).is_some()
    }

    pub fn get(&self, i: usize) -> &[S] {
        &self.points[i]
    }
}

impl<S: Scalar> fmt::Debug for PointIndex<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointIndex({} points)", self.len())
    }
}

fn visit_adjacent<S: Scalar>(key: &[S::Key], axis: usize, current: &mut Vec<S::Key>, f: &mut dyn FnMut(&Vec<S::Key>)) {
    if axis == key.len() {
        f(current);
        return;
    }
    for k in S::adjacent_keys(&key[axis]) {
        current[axis] = k;
        visit_adjacent::<S>(key, axis + 1, current, f);
    }
    current[axis] = key[axis].clone();
}

/// An isometry `p ↦ linear · p + shift` of the ambient space.
#[derive(Clone, PartialEq)]
pub struct Isometry<S> {
    linear: Matrix<S>,
    shift: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Isometry<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shift: Vec<String> = self.shift.iter().map(Scalar::to_text).collect();
        write!(f, "Isometry {{ linear: {:?}, shift: ({}) }}", self.linear, shift.join(", "))
    }
}

impl<S: Scalar> Isometry<S> {
    /// Unchecked constructor; see [`Isometry::checked`].
    pub fn new(linear: Matrix<S>, shift: Vec<S>) -> Self {
        assert_eq!(linear.rows(), linear.cols());
        assert_eq!(linear.rows(), shift.len());
        Isometry { linear, shift }
    }

    /// Constructs after verifying orthogonality for `metric`.
    pub fn checked(linear: Matrix<S>, shift: Vec<S>, metric: &Metric<S>) -> Result<Self> {
        if linear.rows() != metric.dim() || shift.len() != metric.dim() {
            return Err(Error::DimensionMismatch { expected: metric.dim(), found: shift.len() });
        }
        let g = Isometry { linear, shift };
        if !g.is_orthogonal(metric) {
            return Err(Error::InvalidSpec("linear part is not orthogonal".into()));
        }
        Ok(g)
    }

    pub fn identity(dim: usize) -> Self {
        Isometry { linear: Matrix::identity(dim), shift: vec![S::zero(); dim] }
    }

    pub fn translation(v: Vec<S>) -> Self {
        Isometry { linear: Matrix::identity(v.len()), shift: v }
    }

    /// Linear map about a fixed point: `p ↦ linear (p - center) + center`.
    pub fn about(linear: Matrix<S>, center: &Point<S>) -> Self {
        let lc = linear.mul_vec(center.coords());
        let shift = vsub(center.coords(), &lc);
        Isometry { linear, shift }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn linear(&self) -> &Matrix<S> {
        &self.linear
    }

    pub fn shift(&self) -> &[S] {
        &self.shift
    }

    pub fn apply(&self, p: &Point<S>) -> Result<Point<S>> {
        p.check_dim(self.dim())?;
        Ok(self.map(p))
    }

    pub(crate) fn map(&self, p: &Point<S>) -> Point<S> {
        Point { coords: vadd(&self.linear.mul_vec(&p.coords), &self.shift) }
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Isometry<S>) -> Result<Isometry<S>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let linear = self.linear.mul(&other.linear);
        let shift = vadd(&self.linear.mul_vec(&other.shift), &self.shift);
        Ok(Isometry { linear, shift })
    }

    pub fn inverse(&self) -> Isometry<S> {
        let inv = self.linear.inverse().expect("isometry linear part is invertible");
        let shift = vneg(&inv.mul_vec(&self.shift));
        Isometry { linear: inv, shift }
    }

    pub fn determinant(&self) -> S {
        self.linear.determinant()
    }

    /// `‖Mᵀ G M − G‖_max` is zero (exact) or at most `1e-9` (floating).
    pub fn is_orthogonal(&self, metric: &Metric<S>) -> bool {
        let g = metric.gram();
        let r = self.linear.transpose().mul(g).mul(&self.linear);
        if S::is_exact() {
            r == *g
        } else {
            r.sub(g).max_abs() <= ORTHOGONALITY_TOL
        }
    }

    pub fn orthogonality_residual(&self, metric: &Metric<S>) -> f64 {
        let g = metric.gram();
        self.linear.transpose().mul(g).mul(&self.linear).sub(g).max_abs()
    }

    pub fn approx_eq(&self, other: &Isometry<S>, tol: &Tolerance) -> bool {
        let d = self.dim();
        d == other.dim()
            && (0..d).all(|i| (0..d).all(|j| tol.eq(self.linear.get(i, j), other.linear.get(i, j))))
            && self.shift.iter().zip(&other.shift).all(|(a, b)| tol.eq(a, b))
    }

    pub fn is_translation(&self) -> bool {
        self.linear == Matrix::identity(self.dim())
    }
}

impl<S: Scalar> Serialize for Isometry<S> {
    fn serialize<Ser: serde::Serializer>(&self, ser: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        #[derive(Serialize)]
        struct Repr {
            linear: Vec<Vec<String>>,
            shift: Vec<String>,
        }
        Repr {
            linear: self.linear.to_rows().iter().map(|r| r.iter().map(Scalar::to_text).collect()).collect(),
            shift: self.shift.iter().map(Scalar::to_text).collect(),
        }
        .serialize(ser)
    }
}

pub fn apply<S: Scalar>(g: &Isometry<S>, p: &Point<S>) -> Result<Point<S>> {
    g.apply(p)
}

/// `g ∘ h` (h first).
pub fn compose<S: Scalar>(g: &Isometry<S>, h: &Isometry<S>) -> Result<Isometry<S>> {
    g.compose(h)
}

/// The central inversion `p ↦ 2x − p`.
pub fn point_inversion<S: Scalar>(x: &Point<S>) -> Isometry<S> {
    let d = x.dim();
    Isometry { linear: Matrix::identity(d).scale(&-S::one()), shift: vscale(&x.coords, &S::from_i64(2)) }
}
