//! Independent oracles shared by the integration suites. Everything here
//! recomputes quantities from first principles (finite differences, brute
//! force, exhaustive enumeration) without touching the library's analytic
//! paths.

#![allow(dead_code)]

use hexfr::energy::{total_energy, ForceParams};
use hexfr::geom::{SymMat2, Vec2};
use hexfr::graph::Graph;
use hexfr::hex::HexCoord;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Central finite differences of the total energy with respect to `x_i`.
pub fn fd_vertex_gradient(g: &Graph, xs: &[Vec2], i: usize, p: &ForceParams, h: f64) -> Vec2 {
    let mut probe = xs.to_vec();
    let mut diff = |dx: f64, dy: f64| {
        probe[i] = Vec2::new(xs[i].x + dx, xs[i].y + dy);
        total_energy(g, &probe, p)
    };
    let gx = (diff(h, 0.0) - diff(-h, 0.0)) / (2.0 * h);
    let gy = (diff(0.0, h) - diff(0.0, -h)) / (2.0 * h);
    Vec2::new(gx, gy)
}

/// Central finite differences of a vector field restricted to `x_i`,
/// symmetrized into a 2x2 matrix.
pub fn fd_jacobian(
    xs: &[Vec2],
    i: usize,
    h: f64,
    mut field: impl FnMut(&[Vec2]) -> Vec2,
) -> SymMat2 {
    let mut probe = xs.to_vec();
    let mut at = |dx: f64, dy: f64| {
        probe[i] = Vec2::new(xs[i].x + dx, xs[i].y + dy);
        field(&probe)
    };
    let dx = (at(h, 0.0) - at(-h, 0.0)) * (1.0 / (2.0 * h));
    let dy = (at(0.0, h) - at(0.0, -h)) * (1.0 / (2.0 * h));
    SymMat2::new(dx.x, 0.5 * (dx.y + dy.x), dy.y)
}

/// The attractive restriction `f^a_i`, written out directly.
pub fn attr_energy_direct(g: &Graph, xs: &[Vec2], i: usize, k: f64) -> f64 {
    g.neighbors(i)
        .iter()
        .map(|&(j, a)| a * (xs[i] - xs[j]).norm().powi(3) / (3.0 * k))
        .sum()
}

/// Finite differences of `f^a_i`.
pub fn fd_attr_gradient(g: &Graph, xs: &[Vec2], i: usize, k: f64, h: f64) -> Vec2 {
    let mut probe = xs.to_vec();
    let mut diff = |dx: f64, dy: f64| {
        probe[i] = Vec2::new(xs[i].x + dx, xs[i].y + dy);
        attr_energy_direct(g, &probe, i, k)
    };
    Vec2::new(
        (diff(h, 0.0) - diff(-h, 0.0)) / (2.0 * h),
        (diff(0.0, h) - diff(0.0, -h)) / (2.0 * h),
    )
}

pub fn rel_err_vec(got: Vec2, want: Vec2) -> f64 {
    (got - want).norm() / want.norm().max(got.norm()).max(1e-9)
}

pub fn rel_err_mat(got: SymMat2, want: SymMat2) -> f64 {
    let num = ((got.xx - want.xx).powi(2)
        + 2.0 * (got.xy - want.xy).powi(2)
        + (got.yy - want.yy).powi(2))
    .sqrt();
    let scale = (want.xx * want.xx + 2.0 * want.xy * want.xy + want.yy * want.yy)
        .sqrt()
        .max(1e-9);
    num / scale
}

/// Brute-force nearest lattice cell: scans a generous axial window around
/// the point and returns the minimum distance plus every cell achieving it
/// within `tie_eps`.
pub fn brute_force_nearest_hex(p: Vec2, tie_eps: f64) -> (f64, Vec<HexCoord>) {
    let rf = p.y / (3.0f64.sqrt() / 2.0);
    let qf = p.x - 0.5 * rf;
    let (q0, r0) = (qf.round() as i64, rf.round() as i64);
    let mut best = f64::INFINITY;
    let mut cells = Vec::new();
    for q in q0 - 3..=q0 + 3 {
        for r in r0 - 3..=r0 + 3 {
            let c = HexCoord::new(q, r);
            let d = (c.to_euclidean() - p).norm();
            if d < best - tie_eps {
                best = d;
                cells.clear();
                cells.push(c);
            } else if d <= best + tie_eps {
                best = best.min(d);
                cells.push(c);
            }
        }
    }
    (best, cells)
}

/// All-pairs unweighted BFS; returns sorted pairs at hop distance exactly 2.
pub fn bfs_distance_two(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut pairs = Vec::new();
    for src in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[src] = 0;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &(u, _) in g.neighbors(v) {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        for (other, &d) in dist.iter().enumerate().skip(src + 1) {
            if d == 2 {
                pairs.push((src, other));
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Exhaustive minimum of the circle-baseline objective over all slot
/// permutations, with angles computed independently via `acos` of the dot
/// product of unit-circle positions.
pub fn exhaustive_sa_minimum(g: &Graph) -> f64 {
    let n = g.n();
    assert!(n <= 8, "exhaustive search is factorial");
    let e2 = g.distance_two_pairs();
    let mut pairs: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.i, e.j)).collect();
    pairs.extend(e2);

    let pos = |slot: usize| {
        let theta = std::f64::consts::TAU * slot as f64 / n as f64;
        Vec2::new(theta.cos(), theta.sin())
    };
    let objective = |slots: &[usize]| {
        pairs
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (pos(slots[i]), pos(slots[j]));
                (a.dot(b) / (a.norm() * b.norm())).clamp(-1.0, 1.0).acos()
            })
            .sum::<f64>()
    };

    let mut slots: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut slots, 0, &mut |p| {
        let v = objective(p);
        if v < best {
            best = v;
        }
    });
    best
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Analytic derivative of the scaling objective,
/// `phi'(s) = s^2 sum_E a d^3 / k - k^2 n (n-1) / (2 s)`.
pub fn phi_derivative(g: &Graph, xs: &[Vec2], p: &ForceParams, s: f64) -> f64 {
    let cubic: f64 =
        g.edges().iter().map(|e| e.weight * (xs[e.i] - xs[e.j]).norm().powi(3)).sum();
    let n = g.n() as f64;
    s * s * cubic / p.k - p.k * p.k * n * (n - 1.0) / (2.0 * s)
}

/// The scaling objective itself (up to the additive constant dropped by the
/// log expansion): `phi(s) = s^3 sum_E a d^3 / (3k) - k^2 n(n-1)/2 * ln s`.
pub fn phi_value(g: &Graph, xs: &[Vec2], p: &ForceParams, s: f64) -> f64 {
    let cubic: f64 =
        g.edges().iter().map(|e| e.weight * (xs[e.i] - xs[e.j]).norm().powi(3)).sum();
    let n = g.n() as f64;
    s * s * s * cubic / (3.0 * p.k) - p.k * p.k * n * (n - 1.0) / 2.0 * s.ln()
}

/// Random connected-ish test instance: a spanning ring plus random chords,
/// random weights, and a layout with every pair at least `min_dist` apart.
pub fn random_instance(
    seed: u64,
    max_n: usize,
    min_dist: f64,
) -> (Graph, Vec<Vec2>, ForceParams) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(3..=max_n);
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i, (i + 1) % n, rng.random_range(0.2..3.0)));
    }
    for i in 0..n {
        for j in i + 2..n {
            if (i, j) != (0, n - 1) && rng.random::<f64>() < 0.25 {
                edges.push((i, j, rng.random_range(0.2..3.0)));
            }
        }
    }
    let g = Graph::new(n, edges).unwrap();

    let xs = loop {
        let candidate: Vec<Vec2> = (0..n)
            .map(|_| Vec2::new(rng.random_range(0.0..2.0), rng.random_range(0.0..2.0)))
            .collect();
        let ok = (0..n).all(|i| {
            (i + 1..n).all(|j| (candidate[i] - candidate[j]).norm() >= min_dist)
        });
        if ok {
            break candidate;
        }
    };

    let guarded = rng.random::<bool>();
    let k = hexfr::energy::default_k(n);
    let p = if guarded { ForceParams::with_k(k) } else { ForceParams::unguarded(k) };
    (g, xs, p)
}
