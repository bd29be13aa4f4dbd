//! Point-set files: TOML with every number written as a string.
//!
//! ```toml
//! dim = 2
//! mode = "periodic"
//! numeric = "exact"
//! metric = [["1", "1/2"], ["1/2", "1"]]   # optional, Euclidean when absent
//!
//! [periodic]
//! basis = [["1", "0"], ["0", "1"]]
//! motif = [["0", "0"], ["3/10", "0"]]
//! ```
//!
//! Windows use a `[window]` table with `points`, `lo`, `hi` and `margin`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Metric, Point, Tolerance};
use crate::lattice::Lattice;
use crate::linalg::Matrix;
use crate::scalar::{NumericMode, Scalar};
use crate::set::{BoundingBox, PointSet, SetKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileMode {
    Periodic,
    Window,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicSection {
    pub basis: Vec<Vec<String>>,
    pub motif: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSection {
    pub points: Vec<Vec<String>>,
    pub lo: Vec<String>,
    pub hi: Vec<String>,
    #[serde(default = "zero_text")]
    pub margin: String,
}

fn zero_text() -> String {
    "0".to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSetFile {
    pub dim: usize,
    pub mode: FileMode,
    pub numeric: NumericMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<PeriodicSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowSection>,
}

fn text_row<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(Scalar::to_text).collect()
}

fn parse_num<S: Scalar>(s: &str) -> Result<S> {
    if let Some((_, den)) = s.split_once('/') {
        if den.trim_start().starts_with('-') {
            return Err(Error::Parse(format!("denominator must be positive in {s:?}")));
        }
    }
    S::parse_text(s)
}

fn parse_row<S: Scalar>(row: &[String], dim: usize) -> Result<Vec<S>> {
    if row.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
    }
    row.iter().map(|s| parse_num(s)).collect()
}

fn parse_rows<S: Scalar>(rows: &[Vec<String>], dim: usize) -> Result<Vec<Vec<S>>> {
    rows.iter().map(|r| parse_row(r, dim)).collect()
}

impl PointSetFile {
    pub fn from_set<S: Scalar>(set: &PointSet<S>) -> Self {
        let metric = set.metric();
        let metric = (!metric.is_euclidean()).then(|| metric.gram().to_rows().iter().map(|r| text_row(r)).collect());
        let (mode, periodic, window) = match set.kind() {
            SetKind::Periodic { lattice, motif } => (
                FileMode::Periodic,
                Some(PeriodicSection {
                    basis: lattice.basis().iter().map(|b| text_row(b)).collect(),
                    motif: motif.iter().map(|p| text_row(p.coords())).collect(),
                }),
                None,
            ),
            SetKind::Window { points, bounds, margin } => (
                FileMode::Window,
                None,
                Some(WindowSection {
                    points: points.iter().map(|p| text_row(p.coords())).collect(),
                    lo: text_row(&bounds.lo),
                    hi: text_row(&bounds.hi),
                    margin: margin.to_text(),
                }),
            ),
        };
        PointSetFile { dim: set.dim(), mode, numeric: S::MODE, metric, periodic, window }
    }

    /// Builds the set in numeric mode `S`, whatever mode the file was written in.
    pub fn to_set<S: Scalar>(&self, tol: Tolerance) -> Result<PointSet<S>> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        let metric = match &self.metric {
            None => Metric::euclidean(d),
            Some(rows) => {
                if rows.len() != d {
                    return Err(Error::DimensionMismatch { expected: d, found: rows.len() });
                }
                Metric::from_gram(Matrix::from_rows(&parse_rows::<S>(rows, d)?))?
            }
        };
        match self.mode {
            FileMode::Periodic => {
                let sec = self
                    .periodic
                    .as_ref()
                    .ok_or_else(|| Error::Parse("mode = \"periodic\" needs a [periodic] table".into()))?;
                if self.window.is_some() {
                    return Err(Error::Parse("a periodic file must not contain a [window] table".into()));
                }
                if sec.basis.len() != d {
                    return Err(Error::DimensionMismatch { expected: d, found: sec.basis.len() });
                }
                let lattice = Lattice::new(parse_rows(&sec.basis, d)?, metric)?;
                let motif = parse_rows(&sec.motif, d)?.into_iter().map(Point::try_new).collect::<Result<_>>()?;
                PointSet::build_periodic(lattice, motif, tol)
            }
            FileMode::Window => {
                let sec = self
                    .window
                    .as_ref()
                    .ok_or_else(|| Error::Parse("mode = \"window\" needs a [window] table".into()))?;
                if self.periodic.is_some() {
                    return Err(Error::Parse("a window file must not contain a [periodic] table".into()));
                }
                let points = parse_rows(&sec.points, d)?.into_iter().map(Point::try_new).collect::<Result<_>>()?;
                let bounds = BoundingBox::new(parse_row(&sec.lo, d)?, parse_row(&sec.hi, d)?)?;
                PointSet::build_window(points, bounds, parse_num(&sec.margin)?, metric, tol)
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_shifted_rows, triangular_lattice, ShiftSequence, ShiftedRowSpec};
    use crate::scalar::Rational;

    #[test]
    fn periodic_round_trip() {
        let s = triangular_lattice::<Rational>(Tolerance::exact());
        let text = PointSetFile::from_set(&s).to_toml().unwrap();
        let back: PointSet<Rational> = PointSetFile::parse(&text).unwrap().to_set(Tolerance::exact()).unwrap();
        assert_eq!(PointSetFile::from_set(&back), PointSetFile::from_set(&s));
        assert!(text.contains("1/2"));
    }

    #[test]
    fn window_round_trip() {
        let spec = ShiftedRowSpec::<Rational>::with_sequence("RLL".parse::<ShiftSequence>().unwrap());
        let s = gen_shifted_rows(&spec, Tolerance::exact()).unwrap();
        let file = PointSetFile::from_set(&s);
        let back: PointSet<Rational> =
            PointSetFile::parse(&file.to_toml().unwrap()).unwrap().to_set(Tolerance::exact()).unwrap();
        assert_eq!(back.base_points(), s.base_points());
    }

    #[test]
    fn rejects_bad_input() {
        let bad_den =
            "dim = 1\nmode = \"periodic\"\nnumeric = \"exact\"\n[periodic]\nbasis = [[\"1\"]]\nmotif = [[\"1/-2\"]]\n";
        assert!(matches!(
            PointSetFile::parse(bad_den).unwrap().to_set::<Rational>(Tolerance::exact()),
            Err(Error::Parse(_))
        ));
        let missing = "dim = 1\nmode = \"window\"\nnumeric = \"exact\"\n";
        assert!(PointSetFile::parse(missing).unwrap().to_set::<Rational>(Tolerance::exact()).is_err());
        assert!(PointSetFile::parse("dim = ").is_err());
    }
}
