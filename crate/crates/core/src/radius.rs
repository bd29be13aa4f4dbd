//! Radii of the form `√t₁ + √t₂`.
//!
//! Squared distances between points are rational in exact mode, so every distance is
//! `√q`. Radii such as `ρ₀ + 2R` add two of those, so a radius keeps up to two
//! square-root terms and compares exactly against squared distances and other radii.
//! Terms whose product is a perfect square are merged: `√a + √b = √(a + b + 2√(ab))`.
//! In floating mode a radius is a single term holding its squared value.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::Tolerance;
use crate::scalar::{sign_with_root, Scalar};

#[derive(Clone)]
pub struct Radius<S> {
    /// Nonnegative radicands, ascending; empty means zero.
    terms: Vec<S>,
}

impl<S: Scalar> Radius<S> {
    pub fn zero() -> Self {
        Radius { terms: Vec::new() }
    }

    /// `√q` for `q >= 0`.
    pub fn from_sq(q: S) -> Self {
        assert!(q >= S::zero(), "negative squared radius");
        if q.is_zero() {
            Self::zero()
        } else {
            Radius { terms: vec![q] }
        }
    }

    /// The plain value `v >= 0`.
    pub fn from_value(v: S) -> Self {
        assert!(v >= S::zero(), "negative radius");
        Self::from_sq(v.clone() * v)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[S] {
        &self.terms
    }

    /// Squared value when it is a single term.
    pub fn sq(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => Some(self.terms[0].clone()),
            _ => None,
        }
    }

    /// `(A, e)` with `ρ² = A + 2√e`.
    fn sq_parts(&self) -> (S, S) {
        match self.terms.as_slice() {
            [] => (S::zero(), S::zero()),
            [t] => (t.clone(), S::zero()),
            [a, b] => (a.clone() + b.clone(), a.clone() * b.clone()),
            _ => unreachable!("at most two terms"),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|t| t.to_f64().max(0.0).sqrt()).sum()
    }

    pub fn sq_f64(&self) -> f64 {
        let v = self.to_f64();
        v * v
    }

    /// Orders `ρ²` against a squared length `q`.
    pub fn cmp_sq(&self, q: &S) -> Ordering {
        if !S::is_exact() {
            return self.sq_f64().partial_cmp(&q.to_f64()).unwrap_or(Ordering::Equal);
        }
        let (a, e) = self.sq_parts();
        sign_with_root(&(a - q.clone()), &S::from_i64(2), &e)
    }

    /// Closed-ball membership for a squared distance, honoring `tol` in floating mode.
    pub fn covers_sq(&self, q: &S, tol: &Tolerance) -> bool {
        if S::is_exact() {
            self.cmp_sq(q) != Ordering::Less
        } else {
            tol.sq_le(&q.to_f64(), &self.sq_f64())
        }
    }

    /// Strict open-ball membership (`|v| < ρ`), beyond the tolerance in floating mode.
    pub fn strictly_covers_sq(&self, q: &S, tol: &Tolerance) -> bool {
        if S::is_exact() {
            self.cmp_sq(q) == Ordering::Greater
        } else {
            tol.sq_lt(&q.to_f64(), &self.sq_f64())
        }
    }

    /// Total order on values. Exact in exact mode.
    pub fn cmp_radius(&self, other: &Radius<S>) -> Ordering {
        if !S::is_exact() {
            return self.to_f64().partial_cmp(&other.to_f64()).unwrap_or(Ordering::Equal);
        }
        if other.terms.len() <= 1 {
            return self.cmp_sq(&other.sq().expect("single term"));
        }
        if self.terms.len() <= 1 {
            return other.cmp_sq(&self.sq().expect("single term")).reverse();
        }
        // Compare A1 + 2√e1 against A2 + 2√e2, i.e. the sign of p + √E − √F.
        let (a1, e1) = self.sq_parts();
        let (a2, e2) = other.sq_parts();
        let four = S::from_i64(4);
        let p = a1 - a2;
        let big_e = four.clone() * e1;
        let big_f = four * e2;
        let su = sign_with_root(&p, &S::one(), &big_e);
        if su == Ordering::Less {
            return Ordering::Less;
        }
        // u >= 0: compare u² = p² + E + 2p√E against F.
        sign_with_root(&(p.clone() * p.clone() + big_e.clone() - big_f), &(S::from_i64(2) * p), &big_e)
    }

    pub fn add(&self, other: &Radius<S>) -> Result<Radius<S>> {
        if !S::is_exact() {
            let v = self.to_f64() + other.to_f64();
            return Ok(Radius::from_sq(S::from_f64(v * v).ok_or(Error::NonFinite)?));
        }
        let mut terms: Vec<S> = self.terms.iter().chain(&other.terms).cloned().collect();
        'merge: loop {
            for i in 0..terms.len() {
                for j in i + 1..terms.len() {
                    let prod = terms[i].clone() * terms[j].clone();
                    if let Some(root) = prod.sqrt_exact() {
                        let merged = terms[i].clone() + terms[j].clone() + S::from_i64(2) * root;
                        terms.remove(j);
                        terms[i] = merged;
                        continue 'merge;
                    }
                }
            }
            break;
        }
        if terms.len() > 2 {
            return Err(Error::RadiusTooComplex);
        }
        terms.sort_by(|a, b| a.total_cmp(b));
        Ok(Radius { terms })
    }

    /// `k · ρ` for `k >= 0`.
    pub fn scale(&self, k: &S) -> Radius<S> {
        assert!(*k >= S::zero(), "negative scale");
        if k.is_zero() {
            return Self::zero();
        }
        let k2 = k.clone() * k.clone();
        Radius { terms: self.terms.iter().map(|t| t.clone() * k2.clone()).collect() }
    }

    pub fn double(&self) -> Radius<S> {
        self.scale(&S::from_i64(2))
    }

    /// Parses `term (+ term)*` with terms `q`, `sqrt(q)`, `k*sqrt(q)`, `kR`, `kr`, `R`, `r`,
    /// where `q` and `k` are rationals or decimals. `R` and `r` need the corresponding radii.
    pub fn parse(text: &str, r: Option<&Radius<S>>, big_r: Option<&Radius<S>>) -> Result<Radius<S>> {
        let mut acc = Radius::zero();
        if text.trim().is_empty() {
            return Err(Error::Parse("empty radius expression".into()));
        }
        for raw in text.split('+') {
            let term = raw.trim().replace(' ', "");
            let parsed = parse_term::<S>(&term, r, big_r)?;
            acc = acc.add(&parsed)?;
        }
        Ok(acc)
    }
}

fn parse_term<S: Scalar>(term: &str, r: Option<&Radius<S>>, big_r: Option<&Radius<S>>) -> Result<Radius<S>> {
    let bad = || Error::Parse(format!("bad radius term {term:?}"));
    let (coef, rest) = split_coefficient(term);
    let k = match coef {
        "" => S::one(),
        c => S::parse_text(c.trim_end_matches('*'))?,
    };
    if k < S::zero() {
        return Err(bad());
    }
    let base: Radius<S> = match rest {
        "" => return Ok(Radius::from_value(k)),
        "R" => big_r.cloned().ok_or_else(|| Error::Parse("R is not known here".into()))?,
        "r" => r.cloned().ok_or_else(|| Error::Parse("r is not known here".into()))?,
        s => {
            let inner = s.strip_prefix("sqrt(").and_then(|x| x.strip_suffix(')')).ok_or_else(bad)?;
            let q = S::parse_text(inner)?;
            if q < S::zero() {
                return Err(bad());
            }
            Radius::from_sq(q)
        }
    };
    Ok(base.scale(&k))
}

/// Splits a leading numeric coefficient (`3/2`, `0.5*`, `2`) from the rest of a term.
fn split_coefficient(term: &str) -> (&str, &str) {
    let end = term
        .char_indices()
        .find(|&(_, ch)| !(ch.is_ascii_digit() || matches!(ch, '.' | '/' | '-' | 'e' | 'E' | '*')))
        .map_or(term.len(), |(i, _)| i);
    // `e` may start nothing else here; `sqrt` begins with `s`, `R`/`r` are letters.
    (&term[..end], &term[end..])
}

impl<S: Scalar> PartialEq for Radius<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_radius(other) == Ordering::Equal
    }
}

impl<S: Scalar> fmt::Display for Radius<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        if !S::is_exact() {
            return write!(f, "{}", self.to_f64());
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| match t.sqrt_exact() {
                Some(v) => v.to_text(),
                None => format!("sqrt({})", t.to_text()),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<S: Scalar> fmt::Debug for Radius<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<S: Scalar> Serialize for Radius<S> {
    fn serialize<Ser: serde::Serializer>(&self, ser: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        #[derive(Serialize)]
        struct Repr {
            expr: String,
            value: f64,
        }
        Repr { expr: self.to_string(), value: self.to_f64() }.serialize(ser)
    }
}
