//! Constructors for lattices, coset unions, crystallographic orbits and shifted-row sets.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Isometry, Metric, Point, PointIndex, Tolerance};
use crate::lattice::Lattice;
use crate::linalg::{vscale, vsub, Matrix};
use crate::scalar::Scalar;
use crate::set::{BoundingBox, PointSet};

/// The lattice itself: motif `{0}`.
pub fn gen_lattice<S: Scalar>(basis: Vec<Vec<S>>, metric: Metric<S>, tol: Tolerance) -> Result<PointSet<S>> {
    let d = metric.dim();
    let lattice = Lattice::new(basis, metric)?;
    PointSet::build_periodic(lattice, vec![Point::origin(d)], tol)
}

/// `⊔ (λ_i/2 + Λ)` for lattice vectors `λ_i` that are distinct modulo `2Λ`, at most `2^d − 1` of them.
pub fn gen_coset_union<S: Scalar>(
    lattice: Lattice<S>,
    half_vectors: Vec<Vec<S>>,
    tol: Tolerance,
) -> Result<PointSet<S>> {
    let d = lattice.dim();
    if half_vectors.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    for v in &half_vectors {
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: v.len() });
        }
        if !lattice.contains_vector(v, &tol) {
            return Err(Error::InvalidSpec(format!("{} is not a lattice vector", Point::new(v.clone()))));
        }
    }
    if half_vectors.len() > (1usize << d) - 1 {
        return Err(Error::CosetBound { n: half_vectors.len(), dim: d });
    }
    let half = S::from_ratio(1, 2);
    for i in 0..half_vectors.len() {
        for j in 0..i {
            let diff = vscale(&vsub(&half_vectors[i], &half_vectors[j]), &half);
            if lattice.contains_vector(&diff, &tol) {
                return Err(Error::InvalidSpec(format!(
                    "half-vectors {} and {} agree modulo 2Λ",
                    Point::new(half_vectors[j].clone()),
                    Point::new(half_vectors[i].clone())
                )));
            }
        }
    }
    let motif = half_vectors.iter().map(|v| Point::new(vscale(v, &half))).collect();
    PointSet::build_periodic(lattice, motif, tol)
}

/// A lattice, point-group generators (isometries normalizing the lattice) and seed points.
#[derive(Debug, Clone)]
pub struct CrystalSpec<S: Scalar> {
    pub lattice: Lattice<S>,
    pub generators: Vec<Isometry<S>>,
    pub motif: Vec<Point<S>>,
}

/// The orbit of the motif under the group generated by the isometries and the lattice translations.
pub fn gen_crystal<S: Scalar>(spec: &CrystalSpec<S>, cap: usize, tol: Tolerance) -> Result<PointSet<S>> {
    let lattice = &spec.lattice;
    let d = lattice.dim();
    if spec.motif.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    for g in &spec.generators {
        if g.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: g.dim() });
        }
        if !g.is_orthogonal(lattice.metric()) {
            return Err(Error::InvalidSpec("generator is not an isometry".into()));
        }
        if !lattice.reduced_basis().iter().all(|b| lattice.contains_vector(&g.linear().mul_vec(b), &tol)) {
            return Err(Error::InvalidSpec("generator does not preserve the lattice".into()));
        }
    }
    let mut index = PointIndex::new(tol);
    let mut orbit: Vec<Vec<S>> = Vec::new();
    let mut queue = Vec::new();
    for m in &spec.motif {
        m.check_dim(d)?;
        let v = lattice.reduce_vector(m.coords(), &tol);
        if index.insert(v.clone()).1 {
            orbit.push(v.clone());
            queue.push(v);
        }
    }
    while let Some(v) = queue.pop() {
        let p = Point::new(v);
        for g in &spec.generators {
            let w = lattice.reduce_vector(g.apply(&p)?.coords(), &tol);
            if index.insert(w.clone()).1 {
                if orbit.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                orbit.push(w.clone());
                queue.push(w);
            }
        }
    }
    PointSet::build_periodic(lattice.clone(), orbit.into_iter().map(Point::new).collect(), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shift {
    L,
    R,
}

/// A finite word over `{L, R}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftSequence {
    letters: Vec<Shift>,
}

impl ShiftSequence {
    pub fn new(letters: Vec<Shift>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidSpec("empty shift sequence".into()));
        }
        Ok(ShiftSequence { letters })
    }

    pub fn letters(&self) -> &[Shift] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl FromStr for ShiftSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| match c {
                'L' | 'l' => Ok(Shift::L),
                'R' | 'r' => Ok(Shift::R),
                other => Err(Error::Parse(format!("shift letter must be L or R, got {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        ShiftSequence::new(letters)
    }
}

impl fmt::Display for ShiftSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            f.write_str(match l {
                Shift::L => "L",
                Shift::R => "R",
            })?;
        }
        Ok(())
    }
}

/// Rows `a` apart horizontally and `b` vertically; rows `2j, 2j+1` form couple `j`, shifted by
/// `c · (#R − #L)` over letters `1..=j` (couple 0 unshifted).
#[derive(Debug, Clone)]
pub struct ShiftedRowSpec<S: Scalar> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub sequence: ShiftSequence,
    /// Horizontal extent `[0, width]`; defaults to `4(a + b) + 10a`.
    pub width: Option<S>,
}

impl<S: Scalar> ShiftedRowSpec<S> {
    /// `a = 1/5`, `b = 1`, `c = 1/20`.
    pub fn with_sequence(sequence: ShiftSequence) -> Self {
        ShiftedRowSpec { a: S::from_ratio(1, 5), b: S::one(), c: S::from_ratio(1, 20), sequence, width: None }
    }

    pub fn validate(&self) -> Result<()> {
        let zero = S::zero();
        if !(self.a > zero && self.b > zero) {
            return Err(Error::InvalidSpec("a and b must be positive".into()));
        }
        if !(self.c > zero && self.c < self.a.clone() / S::from_i64(2)) {
            return Err(Error::InvalidSpec("need 0 < c < a/2".into()));
        }
        if self.a >= self.b {
            return Err(Error::InvalidSpec("need a < b".into()));
        }
        if self.width.as_ref().is_some_and(|w| *w <= zero) {
            return Err(Error::InvalidSpec("width must be positive".into()));
        }
        Ok(())
    }

    pub fn width(&self) -> S {
        self.width
            .clone()
            .unwrap_or_else(|| S::from_i64(4) * (self.a.clone() + self.b.clone()) + S::from_i64(10) * self.a.clone())
    }

    /// Horizontal offset of each couple.
    pub fn offsets(&self) -> Vec<S> {
        let mut out = vec![S::zero()];
        let mut acc = S::zero();
        for l in self.sequence.letters() {
            acc = match l {
                Shift::R => acc + self.c.clone(),
                Shift::L => acc - self.c.clone(),
            };
            out.push(acc.clone());
        }
        out
    }
}

/// Window over `[0, width] × [0, (2n+1)b]` for a sequence of `n` letters.
pub fn gen_shifted_rows<S: Scalar>(spec: &ShiftedRowSpec<S>, tol: Tolerance) -> Result<PointSet<S>> {
    spec.validate()?;
    let width = spec.width();
    let mut points = Vec::new();
    for (j, off) in spec.offsets().iter().enumerate() {
        let first = ceil(&(-(off.clone()) / spec.a.clone()));
        let last = ((width.clone() - off.clone()) / spec.a.clone()).floor();
        for row in [2 * j, 2 * j + 1] {
            let y = S::from_i64(row as i64) * spec.b.clone();
            let mut k = first.clone();
            while k <= last {
                points.push(Point::new(vec![off.clone() + k.clone() * spec.a.clone(), y.clone()]));
                k = k + S::one();
            }
        }
    }
    let rows = 2 * spec.sequence.len() + 1;
    let bounds = BoundingBox::new(vec![S::zero(), S::zero()], vec![width, S::from_i64(rows as i64) * spec.b.clone()])?;
    PointSet::build_window(points, bounds, S::zero(), Metric::euclidean(2), tol)
}

fn ceil<S: Scalar>(x: &S) -> S {
    -((-x.clone()).floor())
}

/// Gram matrix of the triangular lattice in its own basis (unit edge, 60° angle).
pub fn triangular_metric<S: Scalar>() -> Metric<S> {
    let h = S::from_ratio(1, 2);
    Metric::from_gram(Matrix::from_rows(&[vec![S::one(), h.clone()], vec![h, S::one()]])).expect("positive definite")
}

fn unit_basis<S: Scalar>(d: usize) -> Vec<Vec<S>> {
    Matrix::<S>::identity(d).to_rows()
}

/// `Z^d`.
pub fn integer_lattice<S: Scalar>(d: usize, tol: Tolerance) -> PointSet<S> {
    gen_lattice(unit_basis(d), Metric::euclidean(d), tol).expect("unit basis")
}

/// Triangular lattice with unit edge, in lattice coordinates.
pub fn triangular_lattice<S: Scalar>(tol: Tolerance) -> PointSet<S> {
    gen_lattice(unit_basis(2), triangular_metric(), tol).expect("unit basis")
}

/// Honeycomb: the triangular lattice and its translate by `(1/3, 1/3)` in lattice coordinates.
pub fn honeycomb<S: Scalar>(tol: Tolerance) -> PointSet<S> {
    let lattice = Lattice::new(unit_basis(2), triangular_metric()).expect("unit basis");
    let third = S::from_ratio(1, 3);
    let motif = vec![Point::origin(2), Point::new(vec![third.clone(), third])];
    PointSet::build_periodic(lattice, motif, tol).expect("distinct motif")
}

/// `Z² ∪ (Z² + e₁/2) ∪ (Z² + e₂/2)`.
pub fn three_coset_fixture<S: Scalar>(tol: Tolerance) -> PointSet<S> {
    let lattice = Lattice::new(unit_basis(2), Metric::euclidean(2)).expect("unit basis");
    let halves = vec![vec![S::zero(), S::zero()], vec![S::one(), S::zero()], vec![S::zero(), S::one()]];
    gen_coset_union(lattice, halves, tol).expect("valid half-vectors")
}
