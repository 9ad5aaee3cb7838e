//! Covers of finite point sets (lattice points of a body) by affine k-flats,
//! and the constructions that bound the number of flats from below.

use std::collections::{BTreeMap, HashSet};

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use rand::RngExt;
use serde::{Deserialize, Serialize};

use crate::cylinders::{check_cover, test_points, Cylinder};
use crate::error::{check_dim, Error, Result};
use crate::geometry::lp::{max_margin, MarginRow};
use crate::geometry::{orthonormalize, ConvexBody, Subspace, Vector};
use crate::lattice::{is_lattice_free, lattice_width, Freeness};
use crate::rng;

/// Distance below which a point counts as lying on a flat.
pub const ON_FLAT_TOL: f64 = 1e-9;

/// Affine flat `point + span`, stored canonically: `point` is the point of
/// minimum norm and the basis is the Gram–Schmidt orthonormalization of the
/// reduced row echelon form of the span, each vector with first nonzero
/// coordinate positive.
#[derive(Clone, Debug, PartialEq)]
pub struct Flat {
    point: Vector,
    span: Subspace,
}

impl Flat {
    pub fn new(point: &Vector, directions: &[Vector]) -> Result<Self> {
        let d = point.len();
        for v in directions {
            check_dim(d, v.len())?;
        }
        let basis = canonical_basis(directions, d)?;
        if basis.len() != directions.len() {
            return Err(Error::Degenerate("flat directions are linearly dependent".into()));
        }
        let span = Subspace::from_orthonormal(d, basis)?;
        let point = point - span.project(point);
        Ok(Flat { point, span })
    }

    /// A k-flat containing the affine hull of `points`. When the hull has
    /// dimension below k it is completed with coordinate axes in index order.
    pub fn through(points: &[Vector], k: usize) -> Result<Self> {
        let p0 = points
            .first()
            .ok_or_else(|| Error::Domain("flat needs at least one point".into()))?;
        let d = p0.len();
        if k == 0 || k >= d {
            return Err(Error::Domain(format!("flat dimension must be in 1..{d}")));
        }
        let diffs: Vec<Vector> = points[1..].iter().map(|p| p - p0).collect();
        let mut dirs = orthonormalize(&diffs, 1e-9);
        if dirs.len() > k {
            return Err(Error::Domain("points do not lie in a common k-flat".into()));
        }
        let mut axis = 0;
        while dirs.len() < k && axis < d {
            let mut e = Vector::zeros(d);
            e[axis] = 1.0;
            let mut cand = dirs.clone();
            cand.push(e);
            let ortho = orthonormalize(&cand, 1e-8);
            if ortho.len() == cand.len() {
                dirs = ortho;
            }
            axis += 1;
        }
        Flat::new(p0, &dirs)
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.point.len()
    }

    pub fn point(&self) -> &Vector {
        &self.point
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn distance(&self, x: &Vector) -> f64 {
        let y = x - &self.point;
        (&y - self.span.project(&y)).norm()
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.distance(x) <= tol
    }

    /// For a hyperplane: unit normal `n` (first nonzero coordinate positive)
    /// and offset `c` with the flat equal to {x : ⟨n, x⟩ = c}.
    pub fn hyperplane(&self) -> Option<(Vector, f64)> {
        let c = self.span.complement()?;
        if c.dim() != 1 {
            return None;
        }
        let mut n = c.basis()[0].clone();
        if n.iter().find(|x| x.abs() > 1e-12).is_some_and(|&x| x < 0.0) {
            n = -n;
        }
        let off = n.dot(&self.point);
        Some((n, off))
    }
}

fn canonical_basis(directions: &[Vector], d: usize) -> Result<Vec<Vector>> {
    let mut rows: Vec<Vector> = directions.to_vec();
    let scale = rows.iter().map(|r| r.amax()).fold(0.0, f64::max);
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    let tol = 1e-9 * scale.max(1e-300);
    let mut rank = 0;
    for col in 0..d {
        if rank == rows.len() {
            break;
        }
        let (piv, val) = (rank..rows.len())
            .map(|i| (i, rows[i][col].abs()))
            .fold((rank, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        if val <= tol {
            continue;
        }
        rows.swap(rank, piv);
        let p = rows[rank][col];
        rows[rank] /= p;
        let pivot_row = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank {
                let f = r[col];
                r.axpy(-f, &pivot_row, 1.0);
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    let mut basis = orthonormalize(&rows, 1e-9);
    for b in &mut basis {
        if b.iter().find(|x| x.abs() > 1e-12).is_some_and(|&x| x < 0.0) {
            *b = -b.clone();
        }
    }
    Ok(basis)
}

/// Bitset over at most [`MAX_COVER_POINTS`] points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet([u64; 8]);

/// Largest point set handled by the cover solvers.
pub const MAX_COVER_POINTS: usize = 512;

impl PointSet {
    fn full(n: usize) -> Self {
        let mut s = PointSet::default();
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, o: &Self) -> Self {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a &= b;
        }
        r
    }

    fn minus(&self, o: &Self) -> Self {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a &= !b;
        }
        r
    }

    fn is_subset(&self, o: &Self) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a & !b == 0)
    }

    fn count_and(&self, o: &Self) -> usize {
        self.0
            .iter()
            .zip(o.0.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

/// A candidate flat together with the points it covers.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub flat: Flat,
    pub covered: PointSet,
}

fn covered_by(flat: &Flat, points: &[Vector]) -> PointSet {
    let mut s = PointSet::default();
    for (i, p) in points.iter().enumerate() {
        if flat.contains(p, ON_FLAT_TOL) {
            s.insert(i);
        }
    }
    s
}

/// Canonical candidate k-flats for covering `points`: one flat per maximal
/// realizable covered set.
///
/// Exactness: in any cover, a flat F covering the set S can be replaced by a
/// k-flat through the affine hull of S, which covers a superset of S. That
/// hull is spanned by at most k + 1 points of S, so affine hulls of
/// (k + 1)-tuples (completed to dimension k when degenerate) realize every
/// covered set needed by some optimal cover. Sets contained in another
/// candidate's set are dropped. Order: larger sets first, then by the sorted
/// list of point indices.
pub fn candidate_flats(points: &[Vector], k: usize) -> Result<Vec<Candidate>> {
    let n = points.len();
    if n > 500 || n > MAX_COVER_POINTS {
        return Err(Error::Resource(format!("{n} points exceed the candidate limit of 500")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let d = points[0].len();
    if k == 0 || k >= d {
        return Err(Error::Domain(format!("flat dimension must be in 1..{d}")));
    }
    let diffs: Vec<Vector> = points[1..].iter().map(|p| p - &points[0]).collect();
    if orthonormalize(&diffs, 1e-9).len() <= k {
        let flat = Flat::through(points, k)?;
        let covered = covered_by(&flat, points);
        return Ok(vec![Candidate { flat, covered }]);
    }

    let mut seen: HashSet<PointSet> = HashSet::new();
    let mut found: Vec<Candidate> = Vec::new();
    let mut tuple: Vec<usize> = Vec::with_capacity(k + 1);
    // For lines, a pair inside an already found covered set gives nothing new.
    let mut pair_done = vec![false; if k == 1 { n * n } else { 0 }];
    tuples(n, k + 1, 0, &mut tuple, &mut |t| {
        if k == 1 && pair_done[t[0] * n + t[1]] {
            return Ok(());
        }
        let pts: Vec<Vector> = t.iter().map(|&i| points[i].clone()).collect();
        let diffs: Vec<Vector> = pts[1..].iter().map(|p| p - &pts[0]).collect();
        if orthonormalize(&diffs, 1e-9).len() < k {
            return Ok(());
        }
        let flat = Flat::through(&pts, k)?;
        let covered = covered_by(&flat, points);
        if k == 1 {
            let members: Vec<usize> = covered.iter().take_while(|&i| i < n).collect();
            for &a in &members {
                for &b in &members {
                    pair_done[a * n + b] = true;
                }
            }
        }
        if seen.insert(covered) {
            found.push(Candidate { flat, covered });
        }
        Ok(())
    })?;
    for (i, p) in points.iter().enumerate() {
        let mut s = PointSet::default();
        s.insert(i);
        if !seen.contains(&s) {
            let flat = Flat::through(std::slice::from_ref(p), k)?;
            let covered = covered_by(&flat, points);
            if seen.insert(covered) {
                found.push(Candidate { flat, covered });
            }
        }
    }
    found.sort_by(|a, b| {
        b.covered
            .len()
            .cmp(&a.covered.len())
            .then_with(|| a.covered.iter().cmp(b.covered.iter()))
    });
    let mut kept: Vec<Candidate> = Vec::with_capacity(found.len());
    for c in found {
        if !kept.iter().any(|o| c.covered.is_subset(&o.covered)) {
            kept.push(c);
        }
    }
    Ok(kept)
}

fn tuples<F: FnMut(&[usize]) -> Result<()>>(
    n: usize,
    size: usize,
    start: usize,
    cur: &mut Vec<usize>,
    f: &mut F,
) -> Result<()> {
    if cur.len() == size {
        return f(cur);
    }
    for i in start..n {
        if n - i < size - cur.len() {
            break;
        }
        cur.push(i);
        tuples(n, size, i + 1, cur, f)?;
        cur.pop();
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub candidates: usize,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct CoverSolution {
    pub flats: Vec<Flat>,
    pub cardinality: usize,
    pub optimal: bool,
    pub lower_bounds: BTreeMap<String, f64>,
    pub points_covered: usize,
    pub stats: SolverStats,
}

impl CoverSolution {
    /// Largest distance from a point to its nearest flat.
    pub fn max_residual(&self, points: &[Vector]) -> f64 {
        points
            .iter()
            .map(|p| {
                self.flats
                    .iter()
                    .map(|f| f.distance(p))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
}

/// Node limit of the branch and bound; exceeding it yields `optimal = false`.
pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

/// Greedy cover: repeatedly the candidate covering most uncovered points,
/// ties by candidate order.
pub fn min_flat_cover_greedy(points: &[Vector], k: usize) -> Result<CoverSolution> {
    let cands = candidate_flats(points, k)?;
    let sets: Vec<PointSet> = cands.iter().map(|c| c.covered).collect();
    let chosen = greedy(&sets, PointSet::full(points.len()));
    Ok(solution(&cands, chosen, false, BTreeMap::new(), points.len(), 0))
}

fn greedy(sets: &[PointSet], mut uncovered: PointSet) -> Vec<usize> {
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let (best, gain) = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.count_and(&uncovered)))
            .fold((usize::MAX, 0), |a, b| if b.1 > a.1 { b } else { a });
        if gain == 0 {
            break;
        }
        chosen.push(best);
        uncovered = uncovered.minus(&sets[best]);
    }
    chosen
}

fn solution(
    cands: &[Candidate],
    mut chosen: Vec<usize>,
    optimal: bool,
    lower_bounds: BTreeMap<String, f64>,
    n: usize,
    nodes: u64,
) -> CoverSolution {
    chosen.sort_unstable();
    let mut covered = PointSet::default();
    for &i in &chosen {
        for j in cands[i].covered.iter().take_while(|&j| j < n) {
            covered.insert(j);
        }
    }
    CoverSolution {
        flats: chosen.iter().map(|&i| cands[i].flat.clone()).collect(),
        cardinality: chosen.len(),
        optimal,
        lower_bounds,
        points_covered: covered.len(),
        stats: SolverStats {
            candidates: cands.len(),
            nodes,
            runtime_ms: None,
        },
    }
}

/// Minimum-cardinality cover with the default node budget.
pub fn min_flat_cover_exact(points: &[Vector], k: usize) -> Result<CoverSolution> {
    min_flat_cover_exact_with_budget(points, k, DEFAULT_NODE_BUDGET)
}

/// Branch and bound over canonical candidates.
///
/// Upper bound: greedy. Lower bounds: a certified LP dual bound at the root
/// (a fractional packing y with Σ_{e∈S} y_e ≤ 1 for every candidate S gives
/// N ≥ Σ y_e), and at every node the best of the sorted-sizes bound and the
/// packing y_e = 1/max{|S ∩ U| : e ∈ S} on the uncovered set U. Branching is
/// on the uncovered point with fewest candidates; a sibling whose remaining
/// coverage is contained in an explored sibling's is skipped. Single-threaded
/// and deterministic; the first optimum found in this order is returned.
pub fn min_flat_cover_exact_with_budget(points: &[Vector], k: usize, budget: u64) -> Result<CoverSolution> {
    let n = points.len();
    if n > 200 {
        return Err(Error::Resource(format!("{n} points exceed the exact solver limit of 200")));
    }
    let cands = candidate_flats(points, k)?;
    if cands.len() > 10_000 {
        return Err(Error::Resource(format!("{} candidates exceed the limit of 10000", cands.len())));
    }
    let mut bounds = BTreeMap::new();
    if n == 0 {
        return Ok(solution(&cands, Vec::new(), true, bounds, 0, 0));
    }
    let sets: Vec<PointSet> = cands.iter().map(|c| c.covered).collect();
    let all = PointSet::full(n);
    let greedy_sol = greedy(&sets, all);
    let size_lb = sizes_bound(&sets, &all);
    let pack_lb = packing_bound(&sets, &all, n);
    let lp_lb = lp_dual_bound(&sets, n).unwrap_or(0.0);
    bounds.insert("greedy".to_string(), greedy_sol.len() as f64);
    bounds.insert("lp_dual".to_string(), lp_lb);
    bounds.insert("packing".to_string(), pack_lb);
    bounds.insert("set_sizes".to_string(), size_lb as f64);
    let root_lb = [size_lb, ceil_tol(pack_lb), ceil_tol(lp_lb)]
        .into_iter()
        .max()
        .unwrap_or(0);

    let elem_sets: Vec<Vec<usize>> = (0..n)
        .map(|e| (0..sets.len()).filter(|&s| sets[s].contains(e)).collect())
        .collect();
    let mut search = Search {
        sets: &sets,
        elem_sets: &elem_sets,
        n,
        best: greedy_sol,
        nodes: 0,
        budget,
        aborted: false,
        target: root_lb,
    };
    if search.best.len() > root_lb {
        let mut stack = Vec::new();
        search.dfs(all, &mut stack);
    }
    let optimal = !search.aborted || search.best.len() <= root_lb;
    let certified = if optimal { search.best.len() } else { root_lb };
    bounds.insert("certified".to_string(), certified as f64);
    let nodes = search.nodes;
    Ok(solution(&cands, search.best, optimal, bounds, n, nodes))
}

fn ceil_tol(x: f64) -> usize {
    (x - 1e-7).ceil().max(0.0) as usize
}

struct Search<'a> {
    sets: &'a [PointSet],
    elem_sets: &'a [Vec<usize>],
    n: usize,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    aborted: bool,
    target: usize,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.aborted || self.best.len() <= self.target
    }

    fn dfs(&mut self, uncovered: PointSet, chosen: &mut Vec<usize>) {
        if self.done() {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        if uncovered.is_empty() {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        if chosen.len() + 1 >= self.best.len() {
            return;
        }
        let lb = sizes_bound(self.sets, &uncovered).max(ceil_tol(packing_bound(self.sets, &uncovered, self.n)));
        if chosen.len() + lb >= self.best.len() {
            return;
        }
        let e = (0..self.n)
            .filter(|&e| uncovered.contains(e))
            .min_by_key(|&e| (self.elem_sets[e].len(), e))
            .expect("nonempty");
        let mut options: Vec<(usize, PointSet)> = self.elem_sets[e]
            .iter()
            .map(|&s| (s, self.sets[s].and(&uncovered)))
            .collect();
        options.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));
        let mut explored: Vec<PointSet> = Vec::new();
        for (s, gain) in options {
            if explored.iter().any(|t| gain.is_subset(t)) {
                continue;
            }
            chosen.push(s);
            self.dfs(uncovered.minus(&self.sets[s]), chosen);
            chosen.pop();
            if self.done() {
                return;
            }
            explored.push(gain);
        }
    }
}

/// Smallest t such that the t largest candidate restrictions reach |U|.
fn sizes_bound(sets: &[PointSet], u: &PointSet) -> usize {
    let need = u.len();
    let mut sizes: Vec<usize> = sets.iter().map(|s| s.count_and(u)).filter(|&c| c > 0).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let mut acc = 0;
    for (t, s) in sizes.iter().enumerate() {
        acc += s;
        if acc >= need {
            return t + 1;
        }
    }
    usize::MAX / 2
}

/// Σ_{e∈U} 1/m_e with m_e the largest restricted candidate through e.
fn packing_bound(sets: &[PointSet], u: &PointSet, n: usize) -> f64 {
    let mut m = vec![0usize; n];
    for s in sets {
        let r = s.and(u);
        let c = r.len();
        if c == 0 {
            continue;
        }
        for e in r.iter().take_while(|&e| e < n) {
            m[e] = m[e].max(c);
        }
    }
    (0..n)
        .filter(|&e| u.contains(e))
        .map(|e| if m[e] == 0 { f64::INFINITY } else { 1.0 / m[e] as f64 })
        .sum()
}

/// Certified LP bound: solves max Σ y_e s.t. Σ_{e∈S} y_e ≤ 1, 0 ≤ y ≤ 1, then
/// rescales the solution so every constraint holds exactly in floating point.
fn lp_dual_bound(sets: &[PointSet], n: usize) -> Option<f64> {
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let ys: Vec<_> = (0..n).map(|_| problem.add_var(1.0, (0.0, 1.0))).collect();
    for s in sets {
        let expr: Vec<_> = s.iter().take_while(|&e| e < n).map(|e| (ys[e], 1.0)).collect();
        problem.add_constraint(expr.as_slice(), ComparisonOp::Le, 1.0);
    }
    let sol = problem.solve().ok()?.into_solution().ok()?;
    let y: Vec<f64> = ys.iter().map(|&v| sol.var_value(v).clamp(0.0, 1.0)).collect();
    let load = sets
        .iter()
        .map(|s| s.iter().take_while(|&e| e < n).map(|e| y[e]).sum::<f64>())
        .fold(0.0, f64::max);
    let total: f64 = y.iter().sum();
    if load <= 0.0 {
        return None;
    }
    Some(total / load.max(1.0) * (1.0 - 1e-12))
}

/// Lower-bound quantities for line covers of K ∩ ℤ^d.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverLowerBounds {
    /// (w(K, ℤ^d)/(2d))^{d−1}; present for ellipsoids centered at the origin.
    pub ellipsoid_bound: Option<f64>,
    /// Constant-free ingredients of the general bounds.
    pub quantities: BTreeMap<String, f64>,
    /// "ellipsoid" or "constants-unknown".
    pub status: String,
}

/// For origin-centered ellipsoids the numeric bound; otherwise the
/// structural quantities w(K ∩ −K), d, sd_K, w(K) and an MM* estimate, which
/// enter bounds whose absolute constants are not known.
pub fn flat_cover_lower_bound(body: &ConvexBody, mm_seed: u64) -> Result<CoverLowerBounds> {
    let d = body.dim();
    let mut q = BTreeMap::new();
    q.insert("d".to_string(), d as f64);
    let centered = body.center().is_some_and(|c| c.norm() <= 1e-12);
    if body.is_ellipsoidal() && centered {
        let w = lattice_width(body)?.width;
        q.insert("width".to_string(), w);
        return Ok(CoverLowerBounds {
            ellipsoid_bound: Some((w / (2.0 * d as f64)).powi(d as i32 - 1)),
            quantities: q,
            status: "ellipsoid".into(),
        });
    }
    body.require_origin_interior()?;
    let sym = body.intersect_with_reflection()?;
    q.insert("width".to_string(), lattice_width(body)?.width);
    q.insert("width_symmetrized".to_string(), lattice_width(&sym.body)?.width);
    q.insert("symmetrized_approximate".to_string(), f64::from(u8::from(sym.approximate)));
    let asym = crate::analysis::sd(body)?;
    q.insert("sd".to_string(), asym.sd);
    q.insert("sd_at_origin".to_string(), f64::from(u8::from(asym.achieved_at_origin)));
    let mm = crate::analysis::mm_heuristic_min(&sym.body, 4, 20_000, mm_seed)?;
    q.insert("mm_star_symmetrized_estimate".to_string(), mm);
    Ok(CoverLowerBounds {
        ellipsoid_bound: None,
        quantities: q,
        status: "constants-unknown".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InflationResult {
    /// Smallest λ with K ⊆ ∪ (F_i + λK).
    pub lambda: f64,
    /// N · λ^{d−1}, the crv sum of the cylinders F_i + λK over lines.
    pub crv_sum: f64,
    /// False when λ > 1 although some flat passes through the origin.
    pub consistent: bool,
    pub points_tested: u64,
}

/// λ* = max over x ∈ K of min_i ‖P_{E_i}(x − p_i)‖_{P_{E_i} K}, where
/// F_i = p_i + H_i and E_i = H_i⊥: x lies in F_i + λK exactly when that gauge
/// is at most λ. The maximum is located on the cover test points and refined
/// by a shrinking pattern search kept inside K by radial projection.
pub fn critical_inflation(body: &ConvexBody, flats: &[Flat]) -> Result<InflationResult> {
    if flats.is_empty() {
        return Err(Error::Domain("at least one flat is required".into()));
    }
    body.require_origin_interior()?;
    let d = body.dim();
    let mut gauges = Vec::with_capacity(flats.len());
    for f in flats {
        check_dim(d, f.ambient_dim())?;
        let e = f
            .span()
            .complement()
            .ok_or_else(|| Error::Domain("flat must be proper".into()))?;
        let proj = body.project(&e)?;
        let p = e.coords(f.point());
        gauges.push((e, proj, p));
    }
    let objective = |x: &Vector| -> f64 {
        gauges
            .iter()
            .map(|(e, proj, p)| proj.gauge_raw(&(e.coords(x) - p)))
            .fold(f64::INFINITY, f64::min)
    };
    let into_body = |x: Vector| -> Vector {
        let g = body.gauge_raw(&x);
        if g > 1.0 {
            x / g
        } else {
            x
        }
    };
    let opts = crate::cylinders::CoverCheckOptions::for_dim(d);
    let pts = test_points(body, opts.grid_res, opts.n_random, 0x001a_4bd0_u64);
    let mut scored: Vec<(f64, usize)> = pts.iter().enumerate().map(|(i, x)| (objective(x), i)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let (lo, hi) = body.bounding_box();
    let diam = (&hi - &lo).norm();
    let dirs = crate::geometry::sphere_directions(d, 8 * d);
    let mut best = scored.first().map(|s| s.0).unwrap_or(0.0);
    for &(_, i) in scored.iter().take(16) {
        let mut x = pts[i].clone();
        let mut fx = objective(&x);
        let mut step = diam / 20.0;
        while step > 1e-12 * diam {
            let mut improved = false;
            for u in &dirs {
                let y = into_body(&x + u * step);
                let fy = objective(&y);
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.max(fx);
    }
    let through_origin = flats.iter().any(|f| f.point().norm() <= 1e-12);
    Ok(InflationResult {
        lambda: best,
        crv_sum: flats.len() as f64 * best.powi(d as i32 - 1),
        consistent: !(through_origin && best > 1.0 + 1e-9),
        points_tested: pts.len() as u64,
    })
}

/// The cylinders F_i + λK.
pub fn inflated_cylinders(body: &ConvexBody, flats: &[Flat], lambda: f64) -> Result<Vec<Cylinder>> {
    flats
        .iter()
        .map(|f| Cylinder::around_flat(body, f.point(), f.span().clone(), lambda))
        .collect()
}

/// Falsifier cross-check of λ*: whether F_i + λK cover K on the test points.
pub fn inflation_covers(body: &ConvexBody, flats: &[Flat], lambda: f64, seed: u64) -> Result<bool> {
    let cyl = inflated_cylinders(body, flats, lambda)?;
    let opts = crate::cylinders::CoverCheckOptions::for_dim(body.dim());
    Ok(check_cover(body, &cyl, opts.grid_res, opts.n_random, seed)?.covered)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessMethod {
    Trivial,
    CellEnumeration,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlankWitness {
    /// Translation x with L = x + K/(N + 1).
    pub x: Vec<f64>,
    /// Smallest normalized clearance between int L and the hyperplanes
    /// (nonnegative up to solver tolerance).
    pub margin: f64,
    pub method: WitnessMethod,
}

/// Cell enumeration is used up to this many hyperplanes.
pub const MAX_CELL_HYPERPLANES: usize = 8;
const WITNESS_TOL: f64 = 1e-7;

/// Searches x with x + K/(N+1) ⊆ K whose interior misses every hyperplane.
///
/// For symmetric K, x + sK ⊆ K iff x ∈ (1 − s)K, and int(x + sK) misses
/// {⟨n, y⟩ = c} iff |⟨n, x⟩ − c| ≥ s h_K(n). Each sign pattern of the
/// arrangement gives a linear program maximizing the common clearance; curved
/// bodies enter through tangent cuts added until the iterate lies in (1 − s)K.
pub fn plank_witness_search(body: &ConvexBody, hyperplanes: &[Flat]) -> Result<Option<PlankWitness>> {
    let d = body.dim();
    if !body.is_origin_symmetric(1e-8) {
        return Err(Error::Precondition("body must be symmetric about the origin".into()));
    }
    let n = hyperplanes.len();
    if n == 0 {
        return Ok(Some(PlankWitness {
            x: vec![0.0; d],
            margin: f64::INFINITY,
            method: WitnessMethod::Trivial,
        }));
    }
    let s = 1.0 / (n as f64 + 1.0);
    let mut planes = Vec::with_capacity(n);
    for h in hyperplanes {
        check_dim(d, h.ambient_dim())?;
        let (nv, c) = h
            .hyperplane()
            .ok_or_else(|| Error::Domain("flats must be hyperplanes".into()))?;
        let hk = body.support_raw(&nv);
        planes.push((nv, c, hk));
    }
    let patterns: Vec<u64> = if n <= MAX_CELL_HYPERPLANES {
        (0..1u64 << n).collect()
    } else {
        let mut r = rng::rng(0x91a4_c0de ^ n as u64);
        (0..100).map(|_| r.random::<u64>()).collect()
    };
    let method = if n <= MAX_CELL_HYPERPLANES {
        WitnessMethod::CellEnumeration
    } else {
        WitnessMethod::Heuristic
    };
    let mut best: Option<(f64, Vector)> = None;
    for sigma in patterns {
        if let Some((t, x)) = cell_lp(body, &planes, sigma, s)? {
            if best.as_ref().is_none_or(|(bt, _)| t > *bt) {
                best = Some((t, x));
            }
        }
    }
    Ok(best.and_then(|(_, x)| {
        let margin = planes
            .iter()
            .map(|(nv, c, hk)| ((nv.dot(&x) - c).abs() - s * hk) / hk.max(1e-300))
            .fold(f64::INFINITY, f64::min);
        let inside = body.gauge_raw(&x) <= (1.0 - s) * (1.0 + WITNESS_TOL);
        (inside && margin >= -WITNESS_TOL).then(|| PlankWitness {
            x: x.iter().cloned().collect(),
            margin,
            method,
        })
    }))
}

fn cell_lp(body: &ConvexBody, planes: &[(Vector, f64, f64)], sigma: u64, s: f64) -> Result<Option<(f64, Vector)>> {
    let d = body.dim();
    let mut rows: Vec<MarginRow> = Vec::new();
    for (i, (nv, c, hk)) in planes.iter().enumerate() {
        let sg = if sigma >> (i % 64) & 1 == 1 { 1.0 } else { -1.0 };
        // sg(⟨n, x⟩ − c) − s h ≥ t h  ⇔  −sg n·x + h t ≤ −sg c − s h
        rows.push(MarginRow {
            a: nv * -sg,
            weight: *hk,
            b: -sg * c - s * hk,
        });
    }
    let scale = 1.0 - s;
    match body {
        ConvexBody::VPolytope(p) => {
            for h in p.facets() {
                rows.push(MarginRow {
                    a: h.normal.clone(),
                    weight: 0.0,
                    b: scale * h.offset,
                });
            }
            match max_margin(d, &rows, 1.0) {
                Ok((x, t)) => Ok(Some((t, x))),
                Err(Error::Lp(_)) => Ok(None),
                Err(e) => Err(e),
            }
        }
        _ => {
            for i in 0..d {
                for sg in [1.0, -1.0] {
                    let mut u = Vector::zeros(d);
                    u[i] = sg;
                    rows.push(MarginRow {
                        b: scale * body.support_raw(&u),
                        a: u,
                        weight: 0.0,
                    });
                }
            }
            for _ in 0..200 {
                let (x, t) = match max_margin(d, &rows, 1.0) {
                    Ok(v) => v,
                    Err(Error::Lp(_)) => return Ok(None),
                    Err(e) => return Err(e),
                };
                let g = body.gauge_raw(&x);
                if g <= scale * (1.0 + 1e-10) {
                    return Ok(Some((t, x)));
                }
                // tangent plane of (1 − s)K at its boundary point on the ray
                let y = &x * (scale / g);
                let normal = supporting_normal(body, &y);
                rows.push(MarginRow {
                    b: normal.dot(&y),
                    a: normal,
                    weight: 0.0,
                });
            }
            Ok(None)
        }
    }
}

fn supporting_normal(body: &ConvexBody, y: &Vector) -> Vector {
    let n = match body {
        ConvexBody::Ellipsoid(e) => e.shape() * (y - e.center()),
        ConvexBody::Ball(b) => y - b.center(),
        ConvexBody::VPolytope(_) => unreachable!(),
    };
    n.normalize()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneCoverReport {
    pub n: usize,
    pub witness: Option<PlankWitness>,
    pub interior_lattice_free: bool,
    pub width_k: f64,
    pub width_l: f64,
    pub width_scaling_ok: bool,
    pub pass: bool,
    pub note: String,
}

/// Runs the plank-witness construction for the hyperplanes of a cover of
/// `points` and checks the constant-free consequences: int L contains no
/// integer point and w(L) = w(K)/(N + 1).
pub fn hyperplane_cover_check(body: &ConvexBody, points: &[Vector], cover: &CoverSolution) -> Result<HyperplaneCoverReport> {
    let n = cover.cardinality;
    if cover.max_residual(points) > ON_FLAT_TOL {
        return Err(Error::Precondition("cover does not cover the points".into()));
    }
    let width_k = lattice_width(body)?.width;
    if n == 0 {
        return Ok(HyperplaneCoverReport {
            n,
            witness: None,
            interior_lattice_free: is_lattice_free(body, Freeness::Open)?,
            width_k,
            width_l: width_k,
            width_scaling_ok: true,
            pass: true,
            note: "empty cover: L = K, skipped".into(),
        });
    }
    let witness = plank_witness_search(body, &cover.flats)?;
    let Some(w) = witness else {
        return Ok(HyperplaneCoverReport {
            n,
            witness: None,
            interior_lattice_free: false,
            width_k,
            width_l: f64::NAN,
            width_scaling_ok: false,
            pass: false,
            note: "no witness found".into(),
        });
    };
    let s = 1.0 / (n as f64 + 1.0);
    let l = body.scale(s)?.translate(&Vector::from_vec(w.x.clone()))?;
    let free = is_lattice_free(&l, Freeness::Open)?;
    let width_l = lattice_width(&l)?.width;
    let ok = (width_l - width_k * s).abs() <= 1e-6 * width_k.max(1.0);
    Ok(HyperplaneCoverReport {
        n,
        interior_lattice_free: free,
        width_k,
        width_l,
        width_scaling_ok: ok,
        pass: free && ok,
        note: String::new(),
        witness: Some(w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;
    use crate::lattice::{enumerate_lattice_points, to_vector};

    fn grid(n: i64) -> Vec<Vector> {
        let mut pts = Vec::new();
        for x in 0..=n {
            for y in 0..=n {
                pts.push(vector(&[x as f64, y as f64]));
            }
        }
        pts
    }

    #[test]
    fn canonical_flats() {
        let a = Flat::new(&vector(&[1.0, 1.0]), &[vector(&[-2.0, -2.0])]).unwrap();
        let b = Flat::new(&vector(&[3.0, 3.0]), &[vector(&[1.0, 1.0])]).unwrap();
        assert!((a.point() - b.point()).norm() < 1e-12);
        assert!(a.point().norm() < 1e-12);
        assert!((&a.span().basis()[0] - &b.span().basis()[0]).norm() < 1e-12);
        assert!(a.span().basis()[0][0] > 0.0);
        let h = Flat::through(&[vector(&[0.0, 1.0, 0.0]), vector(&[1.0, 1.0, 0.0]), vector(&[0.0, 1.0, 1.0])], 2).unwrap();
        let (n, c) = h.hyperplane().unwrap();
        assert!((n - vector(&[0.0, 1.0, 0.0])).norm() < 1e-12 && (c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn candidates() {
        let col = vec![vector(&[0.0, 0.0]), vector(&[1.0, 1.0]), vector(&[2.0, 2.0])];
        assert_eq!(candidate_flats(&col, 1).unwrap().len(), 1);
        let gen = vec![vector(&[0.0, 0.0]), vector(&[1.0, 0.0]), vector(&[0.0, 1.0]), vector(&[2.0, 3.0])];
        assert_eq!(candidate_flats(&gen, 1).unwrap().len(), 6);
        let c = candidate_flats(&grid(2), 1).unwrap();
        assert_eq!(c.len(), 20);
        assert_eq!(c.iter().filter(|c| c.covered.len() == 3).count(), 8);
    }

    #[test]
    fn exact_covers() {
        for n in 1..=3 {
            let s = min_flat_cover_exact(&grid(n), 1).unwrap();
            assert_eq!(s.cardinality, n as usize + 1);
            assert!(s.optimal);
            assert!(s.max_residual(&grid(n)) <= ON_FLAT_TOL);
        }
        let disk = ConvexBody::ball(Vector::zeros(2), 1.5).unwrap();
        let pts: Vec<Vector> = enumerate_lattice_points(&disk).unwrap().iter().map(|p| to_vector(p)).collect();
        let s = min_flat_cover_exact(&pts, 1).unwrap();
        assert_eq!(s.cardinality, 3);
        let line = vec![vector(&[0.0, 0.0]), vector(&[1.0, 2.0]), vector(&[2.0, 4.0])];
        assert_eq!(min_flat_cover_exact(&line, 1).unwrap().cardinality, 1);
        let g = min_flat_cover_greedy(&grid(2), 1).unwrap();
        assert_eq!(g.cardinality, 3);
        assert!(!g.optimal);
        assert_eq!(min_flat_cover_greedy(&[], 1).unwrap().cardinality, 0);
    }

    #[test]
    fn larger_disk_closes_by_lp_bound() {
        let disk = ConvexBody::ball(Vector::zeros(2), 4.5).unwrap();
        let pts: Vec<Vector> = enumerate_lattice_points(&disk).unwrap().iter().map(|p| to_vector(p)).collect();
        assert_eq!(pts.len(), 69);
        let s = min_flat_cover_exact(&pts, 1).unwrap();
        assert!(s.optimal);
        assert_eq!(s.cardinality, 9);
    }

    #[test]
    fn ellipsoid_lower_bound_values() {
        let disk = ConvexBody::ball(Vector::zeros(2), 5.0).unwrap();
        let b = flat_cover_lower_bound(&disk, 0).unwrap();
        assert!((b.ellipsoid_bound.unwrap() - 2.5).abs() < 1e-12);
        let ball = ConvexBody::ball(Vector::zeros(3), 1.5).unwrap();
        let b = flat_cover_lower_bound(&ball, 0).unwrap();
        assert!((b.ellipsoid_bound.unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn inflation_values() {
        let disk = ConvexBody::unit_ball(2);
        let xaxis = Flat::new(&Vector::zeros(2), &[vector(&[1.0, 0.0])]).unwrap();
        let yaxis = Flat::new(&Vector::zeros(2), &[vector(&[0.0, 1.0])]).unwrap();
        let r = critical_inflation(&disk, &[xaxis.clone()]).unwrap();
        assert!((r.lambda - 1.0).abs() < 1e-4);
        let r = critical_inflation(&disk, &[xaxis.clone(), yaxis.clone()]).unwrap();
        assert!((r.lambda - 0.5f64.sqrt()).abs() < 1e-4, "{r:?}");
        assert!(r.crv_sum >= 1.0 - 1e-4);
        assert!(inflation_covers(&disk, &[xaxis.clone(), yaxis.clone()], r.lambda * (1.0 + 1e-6), 1).unwrap());
        assert!(!inflation_covers(&disk, &[xaxis, yaxis], r.lambda * 0.999, 1).unwrap());
    }

    #[test]
    fn plank_witnesses() {
        let disk = ConvexBody::unit_ball(2);
        let xaxis = Flat::new(&Vector::zeros(2), &[vector(&[1.0, 0.0])]).unwrap();
        let w = plank_witness_search(&disk, &[xaxis]).unwrap().unwrap();
        assert!((vector(&w.x).norm() - 0.5).abs() < 1e-6, "{w:?}");
        let w = plank_witness_search(&disk, &[]).unwrap().unwrap();
        assert_eq!(w.x, vec![0.0, 0.0]);
        let tri = ConvexBody::vpolytope(&[vector(&[-1.0, -1.0]), vector(&[2.0, -1.0]), vector(&[-1.0, 2.0])]).unwrap();
        assert!(plank_witness_search(&tri, &[]).is_err());
    }

    #[test]
    fn square_structural_check() {
        let sq = ConvexBody::cube(2, -2.0, 2.0).unwrap();
        let pts: Vec<Vector> = enumerate_lattice_points(&sq).unwrap().iter().map(|p| to_vector(p)).collect();
        let cover = min_flat_cover_exact(&pts, 1).unwrap();
        assert_eq!(cover.cardinality, 5);
        let rep = hyperplane_cover_check(&sq, &pts, &cover).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!((rep.width_l - 4.0 / 6.0).abs() < 1e-9);
    }
}
