//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Expected values come from independent brute-force oracles written here (frame enumeration
//! over explicit point lists, integer loops over cosets), not from the library's matcher.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::Parser;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use delone::classify::Classifier;
use delone::generators::{gen_coset_union, gen_shifted_rows, integer_lattice, three_coset_fixture, ShiftedRowSpec};
use delone::{
    antipodal_lattice_decomposition, certify_auto, classify, cluster_group, is_locally_antipodal, n_profile,
    reconstruct_from_2r_cluster, Criterion, Error, GroupCheckMode, Lattice, Matrix, Metric, Point, PointSet, Radius,
    Rational, Scalar, SetKind, Tolerance,
};
use delone_cli::{run, Cli};

type Q = Rational;
type Check<'a> = Box<dyn Fn() -> Result<String, String> + 'a>;

fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

fn exact() -> Tolerance {
    Tolerance::exact()
}

// ---------------------------------------------------------------------------
// CLI plumbing

fn cli(args: &[&str]) -> (Value, i32) {
    let mut argv = vec!["delone".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let parsed = Cli::try_parse_from(&argv).expect("valid arguments");
    match run(&parsed, &argv[1..]) {
        Ok(o) => (o.report.results.clone(), o.exit_code),
        Err(e) => (Value::Null, e.exit_code()),
    }
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let (_, code) = cli(&full);
    assert_eq!(code, 0, "generate {args:?}");
    path
}

fn certify(path: &Path, criterion: &str) -> Value {
    let (v, code) = cli(&["certify", path.to_str().unwrap(), "--criterion", criterion]);
    assert_eq!(code, 0, "certify exit code");
    v["report"].clone()
}

// ---------------------------------------------------------------------------
// Brute-force oracle over an explicit planar patch

/// A finite planar patch: points in frame coordinates, the Gram matrix and an axis box.
struct Patch {
    points: Vec<[Q; 2]>,
    members: HashSet<[Q; 2]>,
    g: [[Q; 2]; 2],
    lo: [Q; 2],
    hi: [Q; 2],
}

fn dot(g: &[[Q; 2]; 2], u: &[Q; 2], v: &[Q; 2]) -> Q {
    let mut s = Q::zero();
    for i in 0..2 {
        for j in 0..2 {
            s += &u[i] * &g[i][j] * &v[j];
        }
    }
    s
}

fn sub(a: &[Q; 2], b: &[Q; 2]) -> [Q; 2] {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

fn add(a: &[Q; 2], b: &[Q; 2]) -> [Q; 2] {
    [&a[0] + &b[0], &a[1] + &b[1]]
}

type M2 = [[Q; 2]; 2];

fn apply(m: &M2, v: &[Q; 2]) -> [Q; 2] {
    [&m[0][0] * &v[0] + &m[0][1] * &v[1], &m[1][0] * &v[0] + &m[1][1] * &v[1]]
}

impl Patch {
    fn new(points: Vec<[Q; 2]>, g: [[Q; 2]; 2], lo: [Q; 2], hi: [Q; 2]) -> Self {
        let members = points.iter().cloned().collect();
        Patch { points, members, g, lo, hi }
    }

    fn from_set(set: &PointSet<Q>) -> Self {
        let SetKind::Window { points, bounds, .. } = set.kind() else { panic!("window expected") };
        let pts = points.iter().map(|p| [p.coords()[0].clone(), p.coords()[1].clone()]).collect();
        let gram = set.metric().gram();
        let g = [[gram.get(0, 0).clone(), gram.get(0, 1).clone()], [gram.get(1, 0).clone(), gram.get(1, 1).clone()]];
        Patch::new(pts, g, [bounds.lo[0].clone(), bounds.lo[1].clone()], [bounds.hi[0].clone(), bounds.hi[1].clone()])
    }

    /// Integer-coordinate grid `0..n` in each axis.
    fn grid(n: i64, g: [[Q; 2]; 2]) -> Self {
        let mut pts = Vec::new();
        for i in 0..n {
            for j in 0..n {
                pts.push([q(i, 1), q(j, 1)]);
            }
        }
        Patch::new(pts, g, [q(0, 1), q(0, 1)], [q(n - 1, 1), q(n - 1, 1)])
    }

    /// Squared distance from `x` to the box boundary.
    fn boundary_sq(&self, x: &[Q; 2]) -> Q {
        let det = &self.g[0][0] * &self.g[1][1] - &self.g[0][1] * &self.g[1][0];
        // (G⁻¹)_00 = G_11 / det, (G⁻¹)_11 = G_00 / det
        let dual = [&self.g[1][1] / &det, &self.g[0][0] / &det];
        let mut best: Option<Q> = None;
        for i in 0..2 {
            for gap in [&x[i] - &self.lo[i], &self.hi[i] - &x[i]] {
                let v = &gap * &gap / &dual[i];
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
        }
        best.unwrap()
    }

    fn ball(&self, x: &[Q; 2], rho_sq: &Q) -> Vec<[Q; 2]> {
        self.points.iter().map(|p| sub(p, x)).filter(|v| dot(&self.g, v, v) <= *rho_sq).collect()
    }

    /// Linear maps `M` with `MᵀGM = G` carrying the ball about `x` onto the ball about `y`,
    /// enumerated by sending a fixed frame of the first ball to every compatible pair of the second.
    fn isometries(&self, x: &[Q; 2], y: &[Q; 2], rho_sq: &Q) -> Vec<M2> {
        let mut v = self.ball(x, rho_sq);
        let w = self.ball(y, rho_sq);
        if v.len() != w.len() {
            return Vec::new();
        }
        let w_set: HashSet<[Q; 2]> = w.iter().cloned().collect();
        v.sort_by(|a, b| dot(&self.g, a, a).cmp(&dot(&self.g, b, b)).then_with(|| a.cmp(b)));
        let nonzero: Vec<&[Q; 2]> = v.iter().filter(|a| !a[0].is_zero() || !a[1].is_zero()).collect();
        let Some(&f1) = nonzero.first() else { return Vec::new() };
        let Some(&f2) = nonzero.iter().find(|b| !(&f1[0] * &b[1] - &f1[1] * &b[0]).is_zero()) else {
            return Vec::new();
        };
        let (n1, n2, n12) = (dot(&self.g, f1, f1), dot(&self.g, f2, f2), dot(&self.g, f1, f2));
        // F = [f1 f2] as columns; F⁻¹.
        let det = &f1[0] * &f2[1] - &f2[0] * &f1[1];
        let finv = [[&f2[1] / &det, -&f2[0] / &det], [-&f1[1] / &det, &f1[0] / &det]];
        let mut out = Vec::new();
        for u1 in w.iter().filter(|u| dot(&self.g, u, u) == n1) {
            for u2 in w.iter().filter(|u| dot(&self.g, u, u) == n2 && dot(&self.g, u1, u) == n12) {
                // M = U F⁻¹ with U = [u1 u2].
                let m: M2 = [
                    [&u1[0] * &finv[0][0] + &u2[0] * &finv[1][0], &u1[0] * &finv[0][1] + &u2[0] * &finv[1][1]],
                    [&u1[1] * &finv[0][0] + &u2[1] * &finv[1][0], &u1[1] * &finv[0][1] + &u2[1] * &finv[1][1]],
                ];
                let e = [[q(1, 1), q(0, 1)], [q(0, 1), q(1, 1)]];
                let orthogonal = (0..2).all(|i| {
                    (0..2).all(|j| {
                        let (ci, cj) = (apply(&m, &e[i]), apply(&m, &e[j]));
                        dot(&self.g, &ci, &cj) == self.g[i][j]
                    })
                });
                if orthogonal && v.iter().all(|a| w_set.contains(&apply(&m, a))) {
                    out.push(m);
                }
            }
        }
        out
    }

    /// For every point `y` at least `min_sq` (squared) from the boundary, an isometry with
    /// `x ↦ y` carries `X ∩ B_x(ρ)` onto `X ∩ B_y(ρ)` where `ρ` is the smaller boundary distance.
    /// Returns the first point for which none exists.
    fn transitivity_failure(&self, x: &[Q; 2], min_sq: &Q) -> Option<[Q; 2]> {
        let bx = self.boundary_sq(x);
        self.points
            .iter()
            .filter(|y| self.boundary_sq(y) >= *min_sq)
            .find(|y| {
                let by = self.boundary_sq(y);
                let rho_sq = if by < bx { by } else { bx.clone() };
                self.isometries(x, y, &rho_sq).is_empty()
            })
            .cloned()
    }

    fn interior(&self, min_sq: &Q) -> Vec<[Q; 2]> {
        self.points.iter().filter(|p| self.boundary_sq(p) >= *min_sq).cloned().collect()
    }

    /// The most central point: largest boundary distance, ties broken lexicographically.
    fn central(&self) -> [Q; 2] {
        self.points
            .iter()
            .max_by(|a, b| self.boundary_sq(a).cmp(&self.boundary_sq(b)).then_with(|| b.cmp(a)))
            .cloned()
            .unwrap()
    }
}

fn euclid() -> [[Q; 2]; 2] {
    [[q(1, 1), q(0, 1)], [q(0, 1), q(1, 1)]]
}

fn triangular_gram() -> [[Q; 2]; 2] {
    [[q(1, 1), q(1, 2)], [q(1, 2), q(1, 1)]]
}

fn radius_sq(v: &Value) -> f64 {
    let r = v["value"].as_f64().unwrap();
    r * r
}

// ---------------------------------------------------------------------------
// Criteria

fn criterion_1(dir: &Path) -> Result<String, String> {
    let start = Instant::now();
    let z2 = generate(dir, "z2.toml", &["lattice", "--basis", "1,0;0,1"]);
    let tri = generate(dir, "tri.toml", &["lattice", "--basis", "1,0;0,1", "--metric", "1,1/2;1/2,1"]);
    let mut notes = Vec::new();
    for (name, path, g, two_r_sq) in [("Z2", &z2, euclid(), q(2, 1)), ("triangular", &tri, triangular_gram(), q(4, 3))]
    {
        let rep = certify(path, "regular");
        if rep["verdict"] != "satisfied" {
            return Err(format!("{name}: certify regular gave {}", rep["verdict"]));
        }
        let reported = radius_sq(&rep["rho0"]);
        if (reported - two_r_sq.to_f64()).abs() > 1e-12 {
            return Err(format!("{name}: rho0² = {reported}, expected 2R² = {two_r_sq}"));
        }
        let patch = Patch::grid(15, g);
        let x = patch.central();
        if let Some(y) = patch.transitivity_failure(&x, &two_r_sq) {
            return Err(format!("{name}: oracle found no isometry {x:?} -> {y:?}"));
        }
        notes.push(format!("{name} satisfied at rho0=2R, oracle agrees on {} points", patch.interior(&two_r_sq).len()));
    }
    let t = start.elapsed();
    if t > Duration::from_secs(10) {
        return Err(format!("runtime {t:?} exceeds 10 s"));
    }
    Ok(format!("{} ({t:.2?})", notes.join("; ")))
}

fn criterion_2(dir: &Path) -> Result<String, String> {
    let start = Instant::now();
    let mut notes = Vec::new();
    for seq in ["RRRRRR", "RLRLRL", "RLLRLR"] {
        let spec = ShiftedRowSpec::<Q>::with_sequence(seq.parse().unwrap());
        let set = gen_shifted_rows(&spec, exact()).map_err(|e| e.to_string())?;
        let big_r = set.params().unwrap().big_r;
        let four_r = big_r.scale(&q(4, 1));
        let interior = set.centers(&four_r).len();
        if interior < 5 {
            return Err(format!("{seq}: only {interior} interior points at 4R"));
        }
        // (i) N(b) = 1
        let n_b = classify(&set, &Radius::from_value(q(1, 1))).map_err(|e| e.to_string())?.n();
        if n_b != 1 {
            return Err(format!("{seq}: N(b) = {n_b}"));
        }
        let patch = Patch::from_set(&set);
        let x = patch.central();
        let four_r_sq = four_r.sq().unwrap();
        let oracle = patch.transitivity_failure(&x, &four_r_sq);
        if seq == "RLLRLR" {
            // (iii)
            let n_4r = classify(&set, &four_r).map_err(|e| e.to_string())?.n();
            if n_4r < 2 {
                return Err(format!("{seq}: N(4R) = {n_4r}"));
            }
            let path = generate(dir, "rllrlr.toml", &["shifted-rows", "--seq", seq]);
            let rep = certify(&path, "regular");
            if rep["verdict"] != "violated" {
                return Err(format!("{seq}: certify regular gave {}", rep["verdict"]));
            }
            if oracle.is_none() {
                return Err(format!("{seq}: oracle found the window transitive"));
            }
            notes.push(format!("{seq}: N(b)=1, N(4R)={n_4r}, violated"));
        } else {
            // (ii)
            if let Some(y) = oracle {
                return Err(format!("{seq}: oracle found no isometry {x:?} -> {y:?}"));
            }
            notes.push(format!("{seq}: N(b)=1, oracle regular on {interior} points"));
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return Err(format!("runtime {t:?} exceeds 60 s"));
    }
    Ok(format!("{} ({t:.2?})", notes.join("; ")))
}

fn criterion_3(dir: &Path) -> Result<String, String> {
    let start = Instant::now();
    let path = generate(dir, "crystal.toml", &["crystal", "--basis", "1,0;0,1", "--motif", "0,0;3/10,0"]);
    let (scan, code) = cli(&["certify", path.to_str().unwrap(), "--criterion", "crystal"]);
    if code != 0 {
        return Err(format!("certify exit code {code}"));
    }
    let rep = &scan["report"];
    let m = rep["m"].as_u64();
    if rep["verdict"] != "satisfied" || m != Some(2) {
        return Err(format!(
            "verdict {} with m = {:?} (N(rho0) = {}, N(rho0+2R) = {}); expected satisfied with m = 2",
            rep["verdict"], m, rep["n_at_rho0"], rep["n_at_rho0_plus_2r"]
        ));
    }
    let set: PointSet<Q> = delone_cli::load_set(&path, exact()).map_err(|e| e.to_string())?.0;
    let lib = certify_auto(&set, Criterion::Crystal, GroupCheckMode::Representatives, None)
        .map_err(|e| e.to_string())?
        .report;
    let profile = n_profile(&set, &lib.rho0_plus_2r).map_err(|e| e.to_string())?;
    let unstable = profile
        .breakpoints
        .iter()
        .zip(&profile.values)
        .any(|(b, &n)| b.cmp_radius(&lib.rho0) != std::cmp::Ordering::Less && n != 2);
    if unstable || profile.at(&lib.rho0) != 2 {
        return Err("N profile does not stay at 2 on [rho0, rho0+2R]".into());
    }
    let t = start.elapsed();
    if t > Duration::from_secs(30) {
        return Err(format!("runtime {t:?} exceeds 30 s"));
    }
    Ok(format!("m = 2 ({t:.2?})"))
}

fn criterion_4() -> Result<String, String> {
    // Coset arithmetic oracle: 2R-clusters of the fixture are symmetric, checked on an explicit patch.
    let fixture = three_coset_fixture::<Q>(exact());
    let report = is_locally_antipodal(&fixture).map_err(|e| e.to_string())?;
    if !report.all {
        return Err(format!("fixture not locally antipodal at {:?}", report.first_violation));
    }
    let two_r = fixture.params().unwrap().big_r.double();
    let two_r_sq = two_r.sq().unwrap();
    let mut pts = Vec::new();
    for i in -8..=8 {
        for j in -8..=8 {
            pts.push([q(i, 1), q(j, 1)]);
            pts.push([q(2 * i + 1, 2), q(j, 1)]);
            pts.push([q(i, 1), q(2 * j + 1, 2)]);
        }
    }
    let patch = Patch::new(pts.clone(), euclid(), [q(-8, 1), q(-8, 1)], [q(17, 2), q(17, 2)]);
    for x in patch.interior(&two_r_sq) {
        for v in patch.ball(&x, &two_r_sq) {
            let anti = sub(&x, &v);
            if !patch.members.contains(&anti) {
                return Err(format!("oracle: {x:?} has no antipode for {:?}", add(&x, &v)));
            }
        }
    }
    let n = classify(&fixture, &two_r).map_err(|e| e.to_string())?.n();
    if n < 2 {
        return Err(format!("fixture N(2R) = {n}, expected >= 2"));
    }
    let z2 = integer_lattice::<Q>(2, exact());
    if !is_locally_antipodal(&z2).map_err(|e| e.to_string())?.all {
        return Err("Z2 not locally antipodal".into());
    }
    let n_z2 = classify(&z2, &z2.params().unwrap().big_r.double()).map_err(|e| e.to_string())?.n();
    if n_z2 != 1 {
        return Err(format!("Z2 N(2R) = {n_z2}"));
    }
    let grid = Patch::grid(15, euclid());
    if let Some(y) = grid.transitivity_failure(&grid.central(), &q(2, 1)) {
        return Err(format!("Z2 oracle failed at {y:?}"));
    }
    Ok(format!(
        "fixture antipodal on {} motif points with N(2R) = {n}; Z2 antipodal, N(2R) = 1, oracle transitive",
        report.points.len()
    ))
}

/// Generator points inside the closed ball of radius `rho` about the origin, by integer loops.
fn brute_ball(offsets: &[[Q; 2]], rho_sq: &Q, bound: i64) -> Vec<Point<Q>> {
    let mut out = Vec::new();
    for i in -bound..=bound {
        for j in -bound..=bound {
            for o in offsets {
                let p = [&o[0] + q(i, 1), &o[1] + q(j, 1)];
                if dot(&euclid(), &p, &p) <= *rho_sq {
                    out.push(Point::new(p.to_vec()));
                }
            }
        }
    }
    out.sort_by(|a, b| a.lex_cmp(b));
    out
}

fn criterion_5() -> Result<String, String> {
    let start = Instant::now();
    let rho = Radius::from_value(q(5, 1));
    let mut notes = Vec::new();
    let cases = [
        ("Z2", integer_lattice(2, exact()), vec![[q(0, 1), q(0, 1)]]),
        ("3-coset", three_coset_fixture(exact()), vec![[q(0, 1), q(0, 1)], [q(1, 2), q(0, 1)], [q(0, 1), q(1, 2)]]),
    ];
    for (name, set, offsets) in cases {
        let two_r = set.params().unwrap().big_r.double();
        let seed = set.cluster(&Point::origin(2), &two_r).map_err(|e| e.to_string())?;
        let rec =
            reconstruct_from_2r_cluster(&seed, &rho, set.metric(), &exact(), 1_000_000).map_err(|e| e.to_string())?;
        let want = brute_ball(&offsets, &q(25, 1), 6);
        if rec.points != want {
            return Err(format!("{name}: reconstructed {} points, expected {}", rec.points.len(), want.len()));
        }
        notes.push(format!("{name}: {} points", want.len()));
    }
    let t = start.elapsed();
    if t > Duration::from_secs(30) {
        return Err(format!("runtime {t:?} exceeds 30 s"));
    }
    Ok(format!("{} ({t:.2?})", notes.join("; ")))
}

fn criterion_6() -> Result<String, String> {
    let fixture = three_coset_fixture::<Q>(exact());
    let dec = antipodal_lattice_decomposition(&fixture).map_err(|e| e.to_string())?;
    let z2 = Lattice::new(Matrix::<Q>::identity(2).to_rows(), Metric::euclidean(2)).unwrap();
    let want = vec![vec![q(0, 1), q(0, 1)], vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]];
    if dec.n != 3 || !dec.lattice.same_as(&z2, &exact()) || dec.half_vectors != want {
        return Err(format!("fixture: n = {}, half-vectors {:?}", dec.n, dec.half_vectors));
    }
    // Oracle: no translation by a half-integer vector outside Z² preserves the fixture.
    let member = |p: &[Q; 2]| {
        let two = [&p[0] * q(2, 1), &p[1] * q(2, 1)];
        let odd = |x: &Q| x.is_integer() && !(x / q(2, 1)).is_integer();
        two[0].is_integer() && two[1].is_integer() && !(odd(&two[0]) && odd(&two[1]))
    };
    for t in [[q(1, 2), q(0, 1)], [q(0, 1), q(1, 2)], [q(1, 2), q(1, 2)]] {
        let preserved = (-2..=2).all(|i| {
            (-2..=2).all(|j| {
                let p = [q(i, 2), q(j, 2)];
                !member(&p) || member(&add(&p, &t))
            })
        });
        if preserved {
            return Err(format!("oracle: translation {t:?} preserves the fixture"));
        }
    }
    let diag = gen_coset_union(z2.clone(), vec![vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(1, 1)]], exact())
        .map_err(|e| e.to_string())?;
    let d2 = antipodal_lattice_decomposition(&diag).map_err(|e| e.to_string())?;
    if d2.n != 1 {
        return Err(format!("Z2 u (Z2 + (1/2,1/2)): n = {}", d2.n));
    }
    let four = vec![vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]];
    match gen_coset_union(z2, four, exact()) {
        Err(Error::CosetBound { n: 4, dim: 2 }) => {}
        other => return Err(format!("4 cosets: {:?}", other.map(|s| s.base_points().len()))),
    }
    Ok("fixture n = 3 with Λ = Z² and {0, e1, e2}; half-coset absorbed (n = 1); 4 cosets rejected".into())
}

fn random_set(rng: &mut StdRng) -> Option<PointSet<Q>> {
    let basis = vec![
        vec![q(rng.random_range(1..=3), 2), q(0, 1)],
        vec![q(rng.random_range(-2..=2), 4), q(rng.random_range(2..=4), 2)],
    ];
    let metric = if rng.random_bool(0.3) {
        Metric::from_gram(Matrix::from_rows(&[vec![q(1, 1), q(1, 2)], vec![q(1, 2), q(1, 1)]])).unwrap()
    } else {
        Metric::euclidean(2)
    };
    let lattice = Lattice::new(basis, metric).ok()?;
    let k = rng.random_range(1..=3);
    let motif =
        (0..k).map(|_| Point::new(vec![q(rng.random_range(0..10), 10), q(rng.random_range(0..10), 10)])).collect();
    PointSet::build_periodic(lattice, motif, exact()).ok()
}

fn criterion_7() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut trials = 0;
    let mut witnesses = 0;
    let mut max_residual: f64 = 0.0;
    while trials < 100 {
        let Some(set) = random_set(&mut rng) else { continue };
        trials += 1;
        let tol = exact();
        let big_r = set.params().unwrap().big_r;
        let two_r = big_r.double();
        let three_r = big_r.scale(&q(3, 1));
        let profile = n_profile(&set, &three_r).map_err(|e| e.to_string())?;
        if !profile.is_non_decreasing() {
            return Err(format!("trial {trials}: N profile {:?} decreases", profile.values));
        }
        let partition = Classifier::interior(&set, &two_r).unwrap().classify(&two_r);
        for class in &partition.classes {
            for (member, g) in class.members.iter().zip(&class.witnesses) {
                let res = g.orthogonality_residual(set.metric());
                max_residual = max_residual.max(res);
                if res > 1e-9 {
                    return Err(format!("trial {trials}: witness residual {res}"));
                }
                let target = set.cluster(member, &two_r).unwrap();
                let image_ok =
                    class.representative.points.iter().all(|p| g.apply(p).is_ok_and(|gp| target.contains(&gp, &tol)));
                if !image_ok || target.len() != class.representative.len() {
                    return Err(format!("trial {trials}: witness does not carry the cluster"));
                }
                witnesses += 1;
            }
        }
        let x = &set.base_points()[0];
        match (cluster_group(&set, x, &two_r), cluster_group(&set, x, &three_r)) {
            (Ok(small), Ok(large)) => {
                if !large.is_subgroup_of(&small, &tol) {
                    return Err(format!("trial {trials}: S_x(3R) not inside S_x(2R)"));
                }
                if !small.is_closed(&tol) || !large.is_closed(&tol) {
                    return Err(format!("trial {trials}: cluster group not closed"));
                }
            }
            (Err(Error::RankDeficient { .. }), _) | (_, Err(Error::RankDeficient { .. })) => {}
            (Err(e), _) | (_, Err(e)) => return Err(format!("trial {trials}: {e}")),
        }
        let far = set
            .lattice()
            .unwrap()
            .reduced_basis()
            .iter()
            .fold(x.clone(), |p, b| p.translated(&b.iter().map(|c| c * q(3, 1)).collect::<Vec<_>>()));
        let target = set.base_points().last().unwrap().translated(far.delta(x).as_slice());
        let chain = set.two_r_chain(x, &target).map_err(|e| e.to_string())?;
        let limit = two_r.sq().unwrap();
        if chain.gaps_sq(set.metric()).iter().any(|g| *g >= limit) {
            return Err(format!("trial {trials}: chain gap not below 2R"));
        }
    }
    Ok(format!("{trials} trials, {witnesses} witnesses, max residual {max_residual:e}"))
}

fn criterion_8() -> Result<String, String> {
    let set = integer_lattice::<Q>(2, exact());
    let patch = Patch::grid(15, euclid());
    let x = patch.central();
    let mut notes = Vec::new();
    for (label, rho_sq) in [("1", q(1, 1)), ("sqrt(2)", q(2, 1))] {
        let order = cluster_group(&set, &Point::origin(2), &Radius::from_sq(rho_sq.clone()))
            .map_err(|e| e.to_string())?
            .order();
        let oracle = patch.isometries(&x, &x, &rho_sq).len();
        if order != 8 || oracle != 8 {
            return Err(format!("rho = {label}: library {order}, oracle {oracle}"));
        }
        notes.push(format!("M({label}) = 8"));
    }
    Ok(notes.join(", "))
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let criteria: Vec<(&str, Check)> = vec![
        ("1 lattice regularity", Box::new(|| criterion_1(dir.path()))),
        ("2 shifted-row family", Box::new(|| criterion_2(dir.path()))),
        ("3 two-system crystal", Box::new(|| criterion_3(dir.path()))),
        ("4 antipodal composite", Box::new(criterion_4)),
        ("5 reconstruction", Box::new(criterion_5)),
        ("6 coset decomposition", Box::new(criterion_6)),
        ("7 structural properties", Box::new(criterion_7)),
        ("8 group order", Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (name, f) in &criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
