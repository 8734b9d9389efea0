//! Down-closed feasible regions `C = {x >= 0 : Ax <= b, x <= u}` with
//! nonnegative `A`, `b`, and the affine delta-interior shrink used by the
//! bandit algorithm.
//!
//! Linear maximization runs on the dense simplex; Euclidean projection is
//! Frank-Wolfe with exact line search on the squared-distance objective,
//! reusing the same LP primitive instead of a QP solver.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rng::StreamRng;
use crate::simplex;

/// `C = {x in R^n : 0 <= x <= u, Ax <= b}` with entrywise nonnegative `A`, `b`
/// and `0 < u_i <= 1`. Down-closedness is automatic for this representation.
#[derive(Debug, Clone)]
pub struct DownClosedPolytope {
    n: usize,
    a: Matrix,
    b: Vec<f64>,
    u: Vec<f64>,
    /// Padded constraint system [A; I] with rhs [b; u], shared by LP calls.
    padded: Matrix,
    padded_rhs: Vec<f64>,
    bounds: OnceLock<(f64, f64)>,
}

impl DownClosedPolytope {
    /// Builds and validates the region. `rows` may be empty (a pure box).
    pub fn new(n: usize, rows: Vec<Vec<f64>>, b: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if u.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: u.len() });
        }
        if rows.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: rows.len(), got: b.len() });
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            if row.iter().any(|&v| !v.is_finite() || v < 0.0) {
                return Err(Error::InvalidPolytope("A must be entrywise nonnegative".into()));
            }
        }
        if b.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::InvalidPolytope("b must be entrywise nonnegative".into()));
        }
        if u.iter().any(|&v| !(v > 0.0 && v <= 1.0)) {
            return Err(Error::InvalidPolytope("u must satisfy 0 < u_i <= 1".into()));
        }
        let a = Matrix::from_rows_dim(rows, n);
        let mut padded_rows = a.to_rows();
        let mut padded_rhs = b.clone();
        for i in 0..n {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            padded_rows.push(row);
            padded_rhs.push(u[i]);
        }
        Ok(Self {
            n,
            a,
            b,
            u,
            padded: Matrix::from_rows(padded_rows),
            padded_rhs,
            bounds: OnceLock::new(),
        })
    }

    /// The unit box `[0,1]^n`.
    pub fn unit_box(n: usize) -> Self {
        Self::new(n, vec![], vec![], vec![1.0; n]).expect("unit box is always valid")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn constraint_rows(&self) -> &Matrix {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn upper_bounds(&self) -> &[f64] {
        &self.u
    }

    /// Membership within slack `tol`: `x >= -tol`, `x <= u + tol`, `Ax <= b + tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        let box_ok = x.iter().zip(&self.u).all(|(&xi, &ui)| xi >= -tol && xi <= ui + tol);
        if !box_ok {
            return Ok(false);
        }
        Ok(self
            .a
            .mul_vec(x)
            .iter()
            .zip(&self.b)
            .all(|(&ax, &bi)| ax <= bi + tol))
    }

    /// Exact linear maximization `argmax {c'x : x in C}`; returns a vertex.
    pub fn linear_maximize(&self, c: &[f64]) -> Result<Vec<f64>> {
        if c.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: c.len() });
        }
        let sol = simplex::maximize(c, &self.padded, &self.padded_rhs)?;
        Ok(sol.x)
    }

    /// Euclidean projection of `z` onto `C`, starting Frank-Wolfe from the
    /// origin. `tol` bounds the duality gap of the squared-distance objective.
    pub fn project(&self, z: &[f64], tol: f64) -> Result<Vec<f64>> {
        let start = vec![0.0; self.n];
        self.project_from(&start, z, tol)
    }

    /// Projection with a warm-start hint. The hint only steers the first
    /// oracle call; the iterate itself is kept as a convex combination of
    /// discovered vertices so it is feasible by construction.
    ///
    /// Each outer iteration makes one `linear_maximize` call and then
    /// re-optimizes exactly over the affine hull of the vertices found so far
    /// (Wolfe's minor cycle), dropping vertices whose weight would turn
    /// negative. The plain Frank-Wolfe step zigzags at Theta(1/k) whenever the
    /// projection lands inside a face, which makes small duality gaps
    /// unreachable; the corrective step terminates finitely instead. Stopping
    /// is still governed by the duality gap of `phi(x) = ||x - z||^2`.
    pub fn project_from(&self, start: &[f64], z: &[f64], tol: f64) -> Result<Vec<f64>> {
        let mut support = Support::default();
        if start.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: start.len() });
        }
        let first_dir: Vec<f64> = z.iter().zip(start).map(|(&zi, &si)| zi - si).collect();
        support.seed_dir = Some(first_dir);
        self.project_warm(z, tol, &mut support)
    }

    /// Projection that carries its vertex support across calls. Consecutive
    /// projections of nearby targets (one per online-gradient step) then
    /// finish in a couple of oracle calls instead of rebuilding the active
    /// face from scratch.
    pub fn project_warm(&self, z: &[f64], tol: f64, support: &mut Support) -> Result<Vec<f64>> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: z.len() });
        }
        assert!(tol > 0.0, "projection tolerance must be positive");
        // A feasible target is its own projection.
        if self.contains(z, 0.0)? {
            return Ok(z.to_vec());
        }

        let mut verts = std::mem::take(&mut support.verts);
        let mut weights = std::mem::take(&mut support.weights);
        if verts.is_empty() {
            let dir = support.seed_dir.take().unwrap_or_else(|| z.to_vec());
            verts.push(self.linear_maximize(&dir)?);
            weights.push(1.0);
        }
        let mut x = combine(&verts, &weights, self.n);

        let cap = ((10.0 * self.n as f64 / tol) as usize).clamp(1_000, 50_000);
        let mut gap = f64::INFINITY;
        let mut prev_phi = f64::INFINITY;
        let mut stalled = 0usize;
        for _ in 0..cap {
            let grad: Vec<f64> = x.iter().zip(z).map(|(&xi, &zi)| 2.0 * (xi - zi)).collect();
            let neg: Vec<f64> = grad.iter().map(|g| -g).collect();
            let v = self.linear_maximize(&neg)?;
            gap = linalg::dot(&grad, &x) - linalg::dot(&grad, &v);
            if gap <= tol {
                support.verts = verts;
                support.weights = weights;
                return Ok(x);
            }
            if !verts.iter().any(|s| linalg::dist(s, &v) < 1e-12) {
                verts.push(v.clone());
                weights.push(0.0);
            }

            // Minor cycle: exact minimization over conv(verts), dropping
            // vertices whose weight would turn negative and, on a singular
            // affine solve, the least-weighted (affinely dependent) vertex.
            loop {
                match affine_min(&verts, z) {
                    None => {
                        if verts.len() <= 1 {
                            break;
                        }
                        let drop = weights
                            .iter()
                            .enumerate()
                            .min_by(|a, b| a.1.total_cmp(b.1))
                            .map(|(i, _)| i)
                            .unwrap();
                        verts.remove(drop);
                        weights.remove(drop);
                        renormalize(&mut weights);
                        x = combine(&verts, &weights, self.n);
                    }
                    Some((y, mu)) if mu.iter().all(|&m| m >= -1e-12) => {
                        weights = mu.iter().map(|&m| m.max(0.0)).collect();
                        renormalize(&mut weights);
                        x = y;
                        break;
                    }
                    Some((_, mu)) => {
                        // Step toward the affine optimum until the first
                        // weight hits zero, then drop that vertex.
                        let mut theta = 1.0f64;
                        for (&l, &m) in weights.iter().zip(&mu) {
                            if m < l {
                                theta = theta.min(l / (l - m));
                            }
                        }
                        for (l, &m) in weights.iter_mut().zip(&mu) {
                            *l += theta * (m - *l);
                        }
                        let mut i = 0;
                        while i < verts.len() {
                            if weights[i] <= 1e-12 && verts.len() > 1 {
                                verts.remove(i);
                                weights.remove(i);
                            } else {
                                i += 1;
                            }
                        }
                        renormalize(&mut weights);
                        x = combine(&verts, &weights, self.n);
                        if verts.len() <= 1 {
                            break;
                        }
                    }
                }
            }

            // Belt-and-braces: if the corrective cycles stop making progress
            // (can only come from degenerate floating point), take one exact
            // line-search step toward v and restart the support from it. The
            // step strictly decreases phi whenever gap > 0.
            let phi = linalg::dist(&x, z).powi(2);
            if phi >= prev_phi - 1e-15 * (1.0 + prev_phi) {
                stalled += 1;
                if stalled >= 5 {
                    let d = linalg::sub(&v, &x);
                    let dd = linalg::dot(&d, &d);
                    if dd <= 1e-300 {
                        break;
                    }
                    let zx = linalg::sub(z, &x);
                    let gamma = (linalg::dot(&zx, &d) / dd).clamp(0.0, 1.0);
                    let stepped = linalg::axpy(&x, gamma, &d);
                    verts = vec![x, v];
                    weights = vec![1.0 - gamma, gamma];
                    x = stepped;
                    stalled = 0;
                }
            } else {
                stalled = 0;
            }
            prev_phi = phi;
        }
        Err(Error::ProjectionIterationCap { gap, tol, iterations: cap })
    }

    /// Largest `r` with `{x >= 0, ||x|| <= r} ⊆ C`:
    /// `min(min_j u_j, min_i b_i / ||a_i||)`, skipping zero rows.
    pub fn inner_radius(&self) -> f64 {
        let mut r = self.u.iter().cloned().fold(f64::INFINITY, f64::min);
        for i in 0..self.a.rows() {
            let row_norm = linalg::norm(self.a.row(i));
            if row_norm > 0.0 {
                r = r.min(self.b[i] / row_norm);
            }
        }
        r
    }

    /// `(r(C), diam(C))`: the max norm over `C` and the max pairwise distance.
    /// Both maxima are attained at vertices; vertices are harvested by linear
    /// maximization along coordinate, all-ones, and seeded random directions.
    /// Cached after the first call.
    pub fn radius_diameter_bounds(&self) -> (f64, f64) {
        *self.bounds.get_or_init(|| {
            let mut dirs: Vec<Vec<f64>> = Vec::new();
            dirs.push(vec![1.0; self.n]);
            dirs.push(vec![-1.0; self.n]);
            for i in 0..self.n.min(64) {
                let mut e = vec![0.0; self.n];
                e[i] = 1.0;
                dirs.push(e.clone());
                e[i] = -1.0;
                dirs.push(e);
            }
            let mut rng = StreamRng::substream(0x6e0_c11d, &[crate::rng::stream::GEOMETRY]);
            for _ in 0..128 {
                dirs.push(rng.unit_sphere(self.n));
            }
            let mut vertices: Vec<Vec<f64>> = vec![vec![0.0; self.n]];
            for d in &dirs {
                if let Ok(v) = self.linear_maximize(d) {
                    vertices.push(v);
                }
            }
            let radius = vertices.iter().map(|v| linalg::norm(v)).fold(0.0, f64::max);
            let mut diam = 0.0f64;
            for i in 0..vertices.len() {
                for j in i + 1..vertices.len() {
                    diam = diam.max(linalg::dist(&vertices[i], &vertices[j]));
                }
            }
            (radius, diam)
        })
    }

    /// The delta-interior `C' = (1-alpha)C + delta*1` with
    /// `alpha = (sqrt(n)+1) * delta / r`. Requires `delta < r/(sqrt(n)+1)`.
    pub fn shrink_interior(&self, delta: f64) -> Result<InteriorShrink> {
        let r = self.inner_radius();
        let bound = r / ((self.n as f64).sqrt() + 1.0);
        if !(delta > 0.0 && delta < bound) {
            return Err(Error::DeltaOutOfRange { delta, bound });
        }
        let alpha = ((self.n as f64).sqrt() + 1.0) * delta / r;
        Ok(InteriorShrink { base: self.clone(), delta, alpha })
    }

    /// A feasible point: a box sample pulled back along its ray until every
    /// constraint holds. Deterministic in the rng stream; not uniform.
    pub fn sample_feasible(&self, rng: &mut StreamRng) -> Vec<f64> {
        let x: Vec<f64> = self.u.iter().map(|&ui| rng.next_f64() * ui).collect();
        let mut t = 1.0f64;
        for i in 0..self.a.rows() {
            let ax = linalg::dot(self.a.row(i), &x);
            if ax > self.b[i] {
                t = t.min(self.b[i] / ax);
            }
        }
        linalg::scale(&x, t)
    }

    /// Serializes as `{"n":..,"A":[[..]],"b":[..],"u":[..]}` with doubles
    /// printed to 17 significant digits (lossless round-trip).
    pub fn to_json(&self) -> String {
        let rows: Vec<String> = (0..self.a.rows())
            .map(|i| format!("[{}]", join_f64(self.a.row(i))))
            .collect();
        format!(
            "{{\"n\":{},\"A\":[{}],\"b\":[{}],\"u\":[{}]}}",
            self.n,
            rows.join(","),
            join_f64(&self.b),
            join_f64(&self.u)
        )
    }

    /// Parses the JSON produced by [`Self::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PolytopeJson = serde_json::from_str(text)?;
        Self::new(raw.n, raw.a, raw.b, raw.u)
    }
}

/// Persistent state for [`DownClosedPolytope::project_warm`]: the vertex set
/// and convex weights expressing the last projection. An empty support (the
/// default) makes the next call start cold.
#[derive(Debug, Clone, Default)]
pub struct Support {
    verts: Vec<Vec<f64>>,
    weights: Vec<f64>,
    seed_dir: Option<Vec<f64>>,
}

fn renormalize(weights: &mut [f64]) {
    let total: f64 = weights.iter().sum();
    if total > 0.0 {
        weights.iter_mut().for_each(|l| *l /= total);
    }
}

fn combine(verts: &[Vec<f64>], weights: &[f64], n: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for (v, &w) in verts.iter().zip(weights) {
        for i in 0..n {
            x[i] += w * v[i];
        }
    }
    x
}

/// Minimizer of `||y - z||^2` over the affine hull of `verts`, returned with
/// its barycentric coordinates. `None` when the normal equations are singular
/// (affinely dependent vertices).
fn affine_min(verts: &[Vec<f64>], z: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let k = verts.len();
    if k == 1 {
        return Some((verts[0].clone(), vec![1.0]));
    }
    let s0 = &verts[0];
    let dirs: Vec<Vec<f64>> = verts[1..].iter().map(|s| linalg::sub(s, s0)).collect();
    let rhs_vec = linalg::sub(z, s0);
    let dim = k - 1;
    // Normal equations G w = r with G = D' D.
    let mut g = vec![vec![0.0; dim]; dim];
    let mut r = vec![0.0; dim];
    for i in 0..dim {
        for j in 0..dim {
            g[i][j] = linalg::dot(&dirs[i], &dirs[j]);
        }
        r[i] = linalg::dot(&dirs[i], &rhs_vec);
    }
    let w = solve_spd(&mut g, &mut r)?;
    let mut y = s0.clone();
    for (d, &wi) in dirs.iter().zip(&w) {
        for i in 0..y.len() {
            y[i] += wi * d[i];
        }
    }
    let mut mu = Vec::with_capacity(k);
    mu.push(1.0 - w.iter().sum::<f64>());
    mu.extend_from_slice(&w);
    Some((y, mu))
}

/// Gaussian elimination with partial pivoting; `None` on near-singularity.
fn solve_spd(g: &mut [Vec<f64>], r: &mut [f64]) -> Option<Vec<f64>> {
    let n = r.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| g[i][col].abs().total_cmp(&g[j][col].abs()))?;
        if g[piv][col].abs() < 1e-12 {
            return None;
        }
        g.swap(col, piv);
        r.swap(col, piv);
        for row in 0..n {
            if row != col {
                let f = g[row][col] / g[col][col];
                for j in col..n {
                    g[row][j] -= f * g[col][j];
                }
                r[row] -= f * r[col];
            }
        }
    }
    Some((0..n).map(|i| r[i] / g[i][i]).collect())
}

pub(crate) fn join_f64(values: &[f64]) -> String {
    values.iter().map(|v| format_f64(*v)).collect::<Vec<_>>().join(",")
}

/// 17 significant digits: enough to reproduce any IEEE-754 double exactly.
pub(crate) fn format_f64(v: f64) -> String {
    format!("{:.16e}", v)
}

#[derive(serde::Deserialize)]
struct PolytopeJson {
    n: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    u: Vec<f64>,
}

/// `C' = (1-alpha)C + delta*1`: every point of `C'` keeps a delta-ball inside
/// `C`, so one-point probes sampled around it stay feasible.
#[derive(Debug, Clone)]
pub struct InteriorShrink {
    base: DownClosedPolytope,
    delta: f64,
    alpha: f64,
}

impl InteriorShrink {
    pub fn base(&self) -> &DownClosedPolytope {
        &self.base
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Image of a base point: `y = (1-alpha) x + delta*1`.
    pub fn map_from_base(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&xi| (1.0 - self.alpha) * xi + self.delta).collect()
    }

    /// Preimage in the base region: `x = (y - delta*1) / (1-alpha)`.
    pub fn map_to_base(&self, y: &[f64]) -> Vec<f64> {
        y.iter().map(|&yi| (yi - self.delta) / (1.0 - self.alpha)).collect()
    }

    pub fn contains(&self, y: &[f64], tol: f64) -> Result<bool> {
        let x = self.map_to_base(y);
        self.base.contains(&x, tol / (1.0 - self.alpha))
    }

    /// Linear maximization over `C'` by solving over `C` and mapping; the
    /// affine shrink preserves the argmax.
    pub fn linear_maximize(&self, c: &[f64]) -> Result<Vec<f64>> {
        let x = self.base.linear_maximize(c)?;
        Ok(self.map_from_base(&x))
    }

    /// Projection onto `C'` via the base region; tolerances rescale by
    /// `(1-alpha)^2` because distances contract under the affine map.
    pub fn project_from(&self, start: &[f64], z: &[f64], tol: f64) -> Result<Vec<f64>> {
        let scale = (1.0 - self.alpha) * (1.0 - self.alpha);
        let x0 = self.map_to_base(start);
        let w = self.map_to_base(z);
        let x = self.base.project_from(&x0, &w, tol / scale)?;
        Ok(self.map_from_base(&x))
    }

    /// Warm projection onto `C'`; the support lives in base coordinates.
    pub fn project_warm(&self, z: &[f64], tol: f64, support: &mut Support) -> Result<Vec<f64>> {
        let scale = (1.0 - self.alpha) * (1.0 - self.alpha);
        let w = self.map_to_base(z);
        let x = self.base.project_warm(&w, tol / scale, support)?;
        Ok(self.map_from_base(&x))
    }
}

/// The geometric operations the online linear oracles need; satisfied by both
/// the base region and its delta-interior.
pub trait LinearDomain: Sync {
    fn dim(&self) -> usize;
    /// Canonical initial action (origin of the region).
    fn start_point(&self) -> Vec<f64>;
    fn linear_maximize(&self, c: &[f64]) -> Result<Vec<f64>>;
    fn project_from(&self, start: &[f64], z: &[f64], tol: f64) -> Result<Vec<f64>>;
    /// Projection reusing the vertex support of the previous call.
    fn project_warm(&self, z: &[f64], tol: f64, support: &mut Support) -> Result<Vec<f64>>;
    fn contains(&self, x: &[f64], tol: f64) -> Result<bool>;
    fn diameter(&self) -> f64;
}

impl LinearDomain for DownClosedPolytope {
    fn dim(&self) -> usize {
        self.n
    }

    fn start_point(&self) -> Vec<f64> {
        vec![0.0; self.n]
    }

    fn linear_maximize(&self, c: &[f64]) -> Result<Vec<f64>> {
        DownClosedPolytope::linear_maximize(self, c)
    }

    fn project_from(&self, start: &[f64], z: &[f64], tol: f64) -> Result<Vec<f64>> {
        DownClosedPolytope::project_from(self, start, z, tol)
    }

    fn project_warm(&self, z: &[f64], tol: f64, support: &mut Support) -> Result<Vec<f64>> {
        DownClosedPolytope::project_warm(self, z, tol, support)
    }

    fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        DownClosedPolytope::contains(self, x, tol)
    }

    fn diameter(&self) -> f64 {
        self.radius_diameter_bounds().1
    }
}

impl LinearDomain for InteriorShrink {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn start_point(&self) -> Vec<f64> {
        self.map_from_base(&vec![0.0; self.base.dim()])
    }

    fn linear_maximize(&self, c: &[f64]) -> Result<Vec<f64>> {
        InteriorShrink::linear_maximize(self, c)
    }

    fn project_from(&self, start: &[f64], z: &[f64], tol: f64) -> Result<Vec<f64>> {
        InteriorShrink::project_from(self, start, z, tol)
    }

    fn project_warm(&self, z: &[f64], tol: f64, support: &mut Support) -> Result<Vec<f64>> {
        InteriorShrink::project_warm(self, z, tol, support)
    }

    fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        InteriorShrink::contains(self, x, tol)
    }

    fn diameter(&self) -> f64 {
        (1.0 - self.alpha) * self.base.radius_diameter_bounds().1
    }
}
