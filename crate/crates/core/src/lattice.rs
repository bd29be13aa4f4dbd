//! Lattices `Λ = Z b₁ + … + Z b_d` in frame coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geom::{Metric, Tolerance};
use crate::linalg::{vadd, vscale, Matrix};
use crate::radius::Radius;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug)]
pub struct Lattice<S: Scalar> {
    basis: Vec<Vec<S>>,
    reduced: Vec<Vec<S>>,
    metric: Metric<S>,
    /// Inverse of the matrix whose columns are the reduced basis vectors.
    inv: Matrix<S>,
    reduced_f64: Vec<Vec<f64>>,
    gram_f64: Vec<Vec<f64>>,
    /// `sqrt((L⁻¹)_jj)` for the reduced Gram matrix `L`: bounds coefficient `j` of a vector per unit length.
    coeff_bounds: Vec<f64>,
    lengths: Vec<f64>,
}

impl<S: Scalar> Lattice<S> {
    pub fn new(basis: Vec<Vec<S>>, metric: Metric<S>) -> Result<Self> {
        let d = metric.dim();
        if basis.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: basis.len() });
        }
        for b in &basis {
            if b.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: b.len() });
            }
            if !b.iter().all(Scalar::is_finite_value) {
                return Err(Error::NonFinite);
            }
        }
        if Matrix::from_cols(&basis).rank() < d {
            return Err(Error::DegenerateBasis);
        }
        let reduced = lll(basis.clone(), &metric);
        let inv = Matrix::from_cols(&reduced).inverse().ok_or(Error::DegenerateBasis)?;
        let reduced_f64: Vec<Vec<f64>> = reduced.iter().map(|b| b.iter().map(Scalar::to_f64).collect()).collect();
        let gram_f64: Vec<Vec<f64>> =
            (0..d).map(|i| (0..d).map(|j| metric.gram().get(i, j).to_f64()).collect()).collect();
        let l: Vec<Vec<f64>> =
            (0..d).map(|i| (0..d).map(|j| metric.inner(&reduced[i], &reduced[j]).to_f64()).collect()).collect();
        let linv = Matrix::from_rows(&l).inverse().ok_or(Error::DegenerateBasis)?;
        let coeff_bounds = (0..d).map(|j| linv.get(j, j).max(0.0).sqrt()).collect();
        let lengths = (0..d).map(|j| l[j][j].sqrt()).collect();
        Ok(Lattice { basis, reduced, metric, inv, reduced_f64, gram_f64, coeff_bounds, lengths })
    }

    /// The lattice generated by rational vectors spanning the space (Hermite normal form, then reduction).
    pub fn from_generators(gens: &[Vec<Rational>], metric: Metric<S>) -> Result<Self> {
        let d = metric.dim();
        let basis = integer_span_basis(gens, d)?;
        let basis: Vec<Vec<S>> = basis.iter().map(|v| v.iter().map(S::from_rational).collect()).collect();
        let lat = Lattice::new(basis, metric)?;
        // Use the reduced basis as the canonical one.
        let reduced = lat.reduced.clone();
        Lattice::new(reduced, lat.metric)
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    pub fn reduced_basis(&self) -> &[Vec<S>] {
        &self.reduced
    }

    pub fn metric(&self) -> &Metric<S> {
        &self.metric
    }

    /// Coefficients of `v` in the reduced basis.
    pub fn coords(&self, v: &[S]) -> Vec<S> {
        self.inv.mul_vec(v)
    }

    pub fn from_coords(&self, c: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim()];
        for (cj, b) in c.iter().zip(&self.reduced) {
            if !cj.is_zero() {
                out = vadd(&out, &vscale(b, cj));
            }
        }
        out
    }

    pub fn contains_vector(&self, v: &[S], tol: &Tolerance) -> bool {
        let c = self.coords(v);
        if S::is_exact() {
            return c.iter().all(|x| x.floor() == *x);
        }
        let rounded: Vec<S> = c.iter().map(Scalar::round).collect();
        let back = self.from_coords(&rounded);
        back.iter().zip(v).all(|(a, b)| tol.eq(a, b))
    }

    /// Representative of `v + Λ` with reduced-basis coefficients in `[0, 1)`.
    pub fn reduce_vector(&self, v: &[S], tol: &Tolerance) -> Vec<S> {
        let mut c = self.coords(v);
        for (j, x) in c.iter_mut().enumerate() {
            let mut f = x.clone() - x.floor();
            if !S::is_exact() {
                let len = self.lengths[j];
                if f.to_f64() * len <= tol.eps_abs || (1.0 - f.to_f64()) * len <= tol.eps_abs {
                    f = S::zero();
                }
            }
            *x = f;
        }
        self.from_coords(&c)
    }

    /// All vectors `offset + λ` (λ ∈ Λ) of length at most `rho`.
    pub fn vectors_in_ball(&self, offset: &[S], rho: &Radius<S>, tol: &Tolerance) -> Vec<Vec<S>> {
        let d = self.dim();
        let rho_f = rho.to_f64();
        let limit_sq = rho_f * rho_f * (1.0 + 1e-9) + 1e-12 + 4.0 * tol.eps_abs * (rho_f + tol.eps_abs);
        let c = self.coords(offset);
        let cf: Vec<f64> = c.iter().map(Scalar::to_f64).collect();
        let ranges: Vec<(i64, i64)> = (0..d)
            .map(|j| {
                let slack = rho_f * self.coeff_bounds[j] * (1.0 + 1e-9) + 1e-9;
                ((-cf[j] - slack).ceil() as i64, (-cf[j] + slack).floor() as i64)
            })
            .collect();
        let off_f: Vec<f64> = offset.iter().map(Scalar::to_f64).collect();
        let mut out = Vec::new();
        let mut n = ranges.iter().map(|r| r.0).collect::<Vec<i64>>();
        if ranges.iter().any(|r| r.0 > r.1) {
            return out;
        }
        loop {
            let mut wf = off_f.clone();
            for (nj, row) in n.iter().zip(&self.reduced_f64) {
                if *nj != 0 {
                    for (w, b) in wf.iter_mut().zip(row) {
                        *w += *nj as f64 * b;
                    }
                }
            }
            if quad(&self.gram_f64, &wf) <= limit_sq {
                let mut w = offset.to_vec();
                for (nj, b) in n.iter().zip(&self.reduced) {
                    if *nj != 0 {
                        w = vadd(&w, &vscale(b, &S::from_i64(*nj)));
                    }
                }
                if rho.covers_sq(&self.metric.norm_sq(&w), tol) {
                    out.push(w);
                }
            }
            // Odometer increment.
            let mut j = 0;
            loop {
                if j == d {
                    return out;
                }
                if n[j] < ranges[j].1 {
                    n[j] += 1;
                    break;
                }
                n[j] = ranges[j].0;
                j += 1;
            }
        }
    }

    /// `½ Σ |b_j|` over the reduced basis: every point of space is this close to a lattice point.
    pub fn covering_bound(&self) -> f64 {
        0.5 * self.lengths.iter().sum::<f64>()
    }

    /// Squared length of the shortest reduced basis vector (an upper bound on the minimum).
    pub fn first_norm_sq(&self) -> S {
        self.reduced.iter().map(|b| self.metric.norm_sq(b)).min_by(|a, b| a.total_cmp(b)).expect("nonempty basis")
    }

    /// Same set of vectors.
    pub fn same_as(&self, other: &Lattice<S>, tol: &Tolerance) -> bool {
        self.dim() == other.dim()
            && self.reduced.iter().all(|b| other.contains_vector(b, tol))
            && other.reduced.iter().all(|b| self.contains_vector(b, tol))
    }

    /// Squared covolume `det(BᵀGB)`.
    pub fn covolume_sq(&self) -> S {
        let d = self.dim();
        let rows: Vec<Vec<S>> =
            (0..d).map(|i| (0..d).map(|j| self.metric.inner(&self.reduced[i], &self.reduced[j])).collect()).collect();
        Matrix::from_rows(&rows).determinant()
    }
}

fn quad(g: &[Vec<f64>], v: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..v.len() {
        for j in 0..v.len() {
            s += v[i] * g[i][j] * v[j];
        }
    }
    s
}

/// LLL reduction (δ = 3/4) in the given metric, followed by sign and order normalization.
fn lll<S: Scalar>(mut b: Vec<Vec<S>>, metric: &Metric<S>) -> Vec<Vec<S>> {
    let n = b.len();
    let delta = S::from_ratio(3, 4);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (_, mu) = gram_schmidt(&b, metric);
            let q = mu[k][j].round();
            if !q.is_zero() {
                let shift = vscale(&b[j], &q);
                b[k] = b[k].iter().zip(&shift).map(|(x, y)| x.clone() - y.clone()).collect();
            }
        }
        let (bstar, mu) = gram_schmidt(&b, metric);
        let lhs = metric.norm_sq(&bstar[k]);
        let m = mu[k][k - 1].clone();
        let rhs = (delta.clone() - m.clone() * m) * metric.norm_sq(&bstar[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = k.saturating_sub(1).max(1);
        }
    }
    for v in b.iter_mut() {
        if let Some(first) = v.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                *v = v.iter().map(|x| -x.clone()).collect();
            }
        }
    }
    b.sort_by(|x, y| metric.norm_sq(x).total_cmp(&metric.norm_sq(y)).then_with(|| lex(y, x)));
    b
}

fn lex<S: Scalar>(a: &[S], b: &[S]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

fn gram_schmidt<S: Scalar>(b: &[Vec<S>], metric: &Metric<S>) -> (Vec<Vec<S>>, Vec<Vec<S>>) {
    let n = b.len();
    let mut bstar: Vec<Vec<S>> = Vec::with_capacity(n);
    let mut norms: Vec<S> = Vec::with_capacity(n);
    let mut mu = vec![vec![S::zero(); n]; n];
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            let m = metric.inner(&b[i], &bstar[j]) / norms[j].clone();
            v = v.iter().zip(&bstar[j]).map(|(x, y)| x.clone() - m.clone() * y.clone()).collect();
            mu[i][j] = m;
        }
        norms.push(metric.norm_sq(&v));
        bstar.push(v);
    }
    (bstar, mu)
}

/// A basis of the Z-span of rational vectors, via integer row echelon form.
fn integer_span_basis(gens: &[Vec<Rational>], d: usize) -> Result<Vec<Vec<Rational>>> {
    let mut den = BigInt::from(1);
    for g in gens {
        if g.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: g.len() });
        }
        for x in g {
            den = den.lcm(x.denom());
        }
    }
    let mut rows: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| g.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect())
        .filter(|r: &Vec<BigInt>| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut r = 0;
    for col in 0..d {
        loop {
            let nonzero: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let p = *nonzero.iter().min_by(|&&a, &&b| rows[a][col].abs().cmp(&rows[b][col].abs())).expect("nonempty");
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &q * y;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][col].is_zero() {
            r += 1;
        }
    }
    if r < d {
        return Err(Error::DegenerateBasis);
    }
    let scale = Rational::from_integer(den);
    Ok(rows[..d]
        .iter()
        .map(|row| row.iter().map(|x| Rational::from_integer(x.clone()) / scale.clone()).collect())
        .collect())
}
