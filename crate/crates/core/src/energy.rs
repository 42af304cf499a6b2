//! The force-model energy and its derivatives.
//!
//! Every vertex pair `{i, j}` at distance `d` carries the potential
//! `E_ij(d) = a_ij d^3 / (3k) - k^2 ln(d + eps_r)`, the sum of an attractive
//! cubic term on edges and a logarithmic repulsive term on all pairs. The
//! layout objective is `f(X) = sum_{i<j} E_ij(|x_i - x_j|)`, whose stationary
//! points are the force equilibria. A pair equilibrates at `d = k / a^(1/3)`
//! when `eps_r = 0`.
//!
//! `attr_*` functions restrict to the attractive part `f^a_i`, which is
//! strictly convex with a cheap O(deg) gradient/Hessian; those drive the
//! lattice placement in [`crate::cn`].

use crate::geom::{SymMat2, Vec2};
use crate::graph::{ComponentPartition, Graph};

/// Default repulsion guard as a fraction of the spring constant.
pub const DEFAULT_EPS_RATIO: f64 = 1e-2;

/// Model parameters: spring constant `k` and the repulsion guard length
/// `eps_r` that replaces `ln d` by `ln(d + eps_r)` to keep the energy finite
/// at coincident points. `eps_r = 0` gives the unguarded model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForceParams {
    pub k: f64,
    pub eps_r: f64,
}

impl ForceParams {
    /// `k = 1/sqrt(n)` with the default guard.
    pub fn auto(n: usize) -> Self {
        Self::with_k(default_k(n))
    }

    /// Explicit spring constant with the default guard `0.01 k`.
    pub fn with_k(k: f64) -> Self {
        assert!(k > 0.0, "spring constant must be positive");
        ForceParams { k, eps_r: DEFAULT_EPS_RATIO * k }
    }

    /// Explicit spring constant with no repulsion guard.
    pub fn unguarded(k: f64) -> Self {
        assert!(k > 0.0, "spring constant must be positive");
        ForceParams { k, eps_r: 0.0 }
    }
}

/// The customary spring constant `1/sqrt(n)`.
pub fn default_k(n: usize) -> f64 {
    assert!(n >= 1, "vertex count must be positive");
    1.0 / (n as f64).sqrt()
}

/// Pair potential at distance `d` with weight `a`.
///
/// Returns `+inf` at `d = 0` when `eps_r = 0`.
pub fn pair_energy(d: f64, a: f64, p: &ForceParams) -> f64 {
    assert!(d >= 0.0, "distance must be non-negative");
    assert!(a >= 0.0, "weight must be non-negative");
    a * d * d * d / (3.0 * p.k) - p.k * p.k * (d + p.eps_r).ln()
}

/// Total layout energy `f(X)`, summed over pairs in ascending `(i, j)` order
/// so the accumulation is reproducible.
pub fn total_energy(g: &Graph, xs: &[Vec2], p: &ForceParams) -> f64 {
    assert_eq!(xs.len(), g.n(), "layout size must match vertex count");
    let n = g.n();
    let mut weights = vec![0.0; n];
    let mut f = 0.0;
    for i in 0..n {
        for &(j, w) in g.neighbors(i) {
            if j > i {
                weights[j] = w;
            }
        }
        for j in i + 1..n {
            let d = (xs[i] - xs[j]).norm();
            f += pair_energy(d, weights[j], p);
            weights[j] = 0.0;
        }
    }
    f
}

// Scalar multiplying (x_i - x_j) in the pair gradient: E'(d) / d.
fn grad_coeff(d: f64, a: f64, p: &ForceParams) -> f64 {
    a * d / p.k - p.k * p.k / (d * (d + p.eps_r))
}

// Isotropic and outer-product coefficients of the pair Hessian:
// H = c1 * I + c2 * (x_i - x_j)(x_i - x_j)^T.
fn hess_coeffs(d: f64, a: f64, p: &ForceParams) -> (f64, f64) {
    let k2 = p.k * p.k;
    let de = d + p.eps_r;
    let c1 = a * d / p.k - k2 / (d * de);
    let c2 = (a * d / p.k + k2 / (de * de) + k2 / (d * de)) / (d * d);
    (c1, c2)
}

/// Gradient of `f` restricted to `x_i`: the net force on vertex `i` from all
/// other vertices.
///
/// Panics on a coincident pair when `eps_r = 0`; with a positive guard,
/// coincident pairs contribute nothing (the direction is undefined).
pub fn vertex_gradient(g: &Graph, xs: &[Vec2], i: usize, p: &ForceParams) -> Vec2 {
    per_vertex_terms(g, xs, i, p, false).0
}

/// Hessian of `f` restricted to `x_i`. Same coincidence contract as
/// [`vertex_gradient`].
pub fn vertex_hessian(g: &Graph, xs: &[Vec2], i: usize, p: &ForceParams) -> SymMat2 {
    per_vertex_terms(g, xs, i, p, true).1
}

fn per_vertex_terms(
    g: &Graph,
    xs: &[Vec2],
    i: usize,
    p: &ForceParams,
    want_hessian: bool,
) -> (Vec2, SymMat2) {
    assert_eq!(xs.len(), g.n(), "layout size must match vertex count");
    let n = g.n();
    let mut weights = vec![0.0; n];
    for &(j, w) in g.neighbors(i) {
        weights[j] = w;
    }
    let mut grad = Vec2::ZERO;
    let mut hess = SymMat2::ZERO;
    for j in 0..n {
        if j == i {
            continue;
        }
        let delta = xs[i] - xs[j];
        let d = delta.norm();
        if d == 0.0 {
            assert!(p.eps_r > 0.0, "coincident pair ({i}, {j}) with eps_r = 0");
            continue;
        }
        if want_hessian {
            let (c1, c2) = hess_coeffs(d, weights[j], p);
            hess.add_iso_and_outer(c1, c2, delta);
        } else {
            grad += grad_coeff(d, weights[j], p) * delta;
        }
    }
    (grad, hess)
}

/// Gradient of the attractive-only restriction `f^a_i`; sums over neighbors
/// in O(deg) and is well defined everywhere (a coincident neighbor
/// contributes zero).
pub fn attr_gradient(g: &Graph, xs: &[Vec2], i: usize, p: &ForceParams) -> Vec2 {
    attr_terms(xs[i], g.neighbors(i).iter().map(|&(j, w)| (xs[j], w)), p.k).0
}

/// Hessian of `f^a_i`: symmetric positive semidefinite, strictly definite as
/// soon as one neighbor sits away from `x_i`.
pub fn attr_hessian(g: &Graph, xs: &[Vec2], i: usize, p: &ForceParams) -> SymMat2 {
    attr_terms(xs[i], g.neighbors(i).iter().map(|&(j, w)| (xs[j], w)), p.k).1
}

/// Attractive gradient and Hessian at `pos` against an explicit neighbor
/// list; shared with the lattice placement loop, which never materializes a
/// full layout.
pub fn attr_terms(
    pos: Vec2,
    neighbors: impl Iterator<Item = (Vec2, f64)>,
    k: f64,
) -> (Vec2, SymMat2) {
    let mut grad = Vec2::ZERO;
    let mut hess = SymMat2::ZERO;
    for (other, a) in neighbors {
        let delta = pos - other;
        let d = delta.norm();
        if d == 0.0 {
            continue;
        }
        let c = a * d / k;
        grad += c * delta;
        hess.add_iso_and_outer(c, a / (k * d), delta);
    }
    (grad, hess)
}

/// Value of `f^a_i` at `pos`; used to check descent of placement steps.
pub fn attr_energy(pos: Vec2, neighbors: impl Iterator<Item = (Vec2, f64)>, k: f64) -> f64 {
    neighbors.map(|(other, a)| a * (pos - other).norm().powi(3) / (3.0 * k)).sum()
}

/// Closed-form global rescale factor minimizing the total energy over
/// uniform scalings of the layout:
/// `s* = (k^3 n(n-1) / (2 sum_E a_ij d_ij^3))^(1/3)`.
///
/// Panics when every edge has zero length.
pub fn optimal_scale(g: &Graph, xs: &[Vec2], p: &ForceParams) -> f64 {
    let cubic_sum = attractive_cubic_sum(g, xs);
    assert!(cubic_sum > 0.0, "optimal scale needs an edge with positive length");
    let n = g.n() as f64;
    (p.k.powi(3) * n * (n - 1.0) / (2.0 * cubic_sum)).cbrt()
}

/// `sum_E a_ij |x_i - x_j|^3`, the edge term driving [`optimal_scale`].
pub fn attractive_cubic_sum(g: &Graph, xs: &[Vec2]) -> f64 {
    g.edges().iter().map(|e| e.weight * (xs[e.i] - xs[e.j]).norm().powi(3)).sum()
}

/// Returns the layout with every position multiplied by `s > 0`.
pub fn scale_layout(xs: &[Vec2], s: f64) -> Vec<Vec2> {
    assert!(s > 0.0, "scale factor must be positive");
    xs.iter().map(|&x| x * s).collect()
}

/// Where disconnected layouts are pulled: the center of the expected unit
/// bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GravityConfig {
    pub center: Vec2,
    pub enabled: bool,
}

impl Default for GravityConfig {
    fn default() -> Self {
        GravityConfig { center: Vec2::new(0.5, 0.5), enabled: true }
    }
}

/// Quadratic pull of each component centroid toward `center`:
/// `f_g = sum_j (|V_j| / 2) |g_j - center|^2` with per-vertex gradient
/// `g_j - center` shared across component `j`. Bounds the objective for
/// disconnected graphs, where pure repulsion would push components apart
/// forever.
pub fn gravity_energy_and_gradient(
    parts: &ComponentPartition,
    xs: &[Vec2],
    center: Vec2,
) -> (f64, Vec<Vec2>) {
    let mut energy = 0.0;
    let mut grad = vec![Vec2::ZERO; xs.len()];
    for group in &parts.groups {
        let mut centroid = Vec2::ZERO;
        for &v in group {
            centroid += xs[v];
        }
        centroid = centroid * (1.0 / group.len() as f64);
        let pull = centroid - center;
        energy += 0.5 * group.len() as f64 * pull.norm_sq();
        for &v in group {
            grad[v] = pull;
        }
    }
    (energy, grad)
}
