//! Simulated-annealing baseline over unit-circle placements.
//!
//! Vertices are assigned to `n` evenly spaced circle slots and the objective
//! is the summed absolute angle between slot positions over edges and
//! distance-2 pairs. Weights are ignored: the baseline treats every graph as
//! unweighted. Moves swap two vertices' slots under Metropolis acceptance
//! with geometric cooling.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cn::default_cn_iters;
use crate::geom::Vec2;
use crate::graph::Graph;

/// Assignment of vertices to circle slots; slot `s` of `n` sits at angle
/// `2*pi*s/n` on the unit circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirclePerm {
    slots: Vec<usize>,
}

impl CirclePerm {
    pub fn identity(n: usize) -> Self {
        CirclePerm { slots: (0..n).collect() }
    }

    /// Builds from an explicit vertex -> slot map; panics unless a bijection.
    pub fn from_slots(slots: Vec<usize>) -> Self {
        let n = slots.len();
        let mut seen = vec![false; n];
        for &s in &slots {
            assert!(s < n && !seen[s], "slot map must be a bijection");
            seen[s] = true;
        }
        CirclePerm { slots }
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn position(&self, v: usize) -> Vec2 {
        let n = self.slots.len() as f64;
        let theta = TAU * self.slots[v] as f64 / n;
        Vec2::new(theta.cos(), theta.sin())
    }

    pub fn positions(&self) -> Vec<Vec2> {
        (0..self.slots.len()).map(|v| self.position(v)).collect()
    }

    fn swap_vertices(&mut self, u: usize, v: usize) {
        self.slots.swap(u, v);
    }
}

/// Annealing parameters. `n_iter = None` matches the placement budget
/// `ceil(2 n^3 / m)`; cooling is geometric from `t0` down to
/// `t_end_ratio * t0`.
#[derive(Clone, Debug)]
pub struct SaParams {
    pub n_iter: Option<usize>,
    pub seed: u64,
    pub t0: f64,
    pub t_end_ratio: f64,
}

impl Default for SaParams {
    fn default() -> Self {
        SaParams { n_iter: None, seed: 0, t0: PI, t_end_ratio: 1e-3 }
    }
}

impl SaParams {
    pub fn seeded(seed: u64) -> Self {
        SaParams { seed, ..Default::default() }
    }
}

/// Signed angle between the rays from the origin through `a` and `b`,
/// in `(-pi, pi]`.
pub fn angle(a: Vec2, b: Vec2) -> f64 {
    assert!(a != Vec2::ZERO && b != Vec2::ZERO, "angle needs nonzero points");
    let t = a.cross(b).atan2(a.dot(b));
    if t <= -PI {
        PI
    } else {
        t
    }
}

/// Baseline objective: `sum |angle(x_i, x_j)|` over `E` and the given
/// distance-2 pairs.
///
/// Evaluated from slot index differences, which equals the absolute
/// [`angle`] between the circle positions but is exactly invariant under
/// rotating every slot by a constant.
pub fn sa_objective(g: &Graph, e2: &[(usize, usize)], perm: &CirclePerm) -> f64 {
    let n = perm.slots.len();
    let mut total = 0.0;
    for e in g.edges() {
        total += slot_angle(perm.slots[e.i], perm.slots[e.j], n);
    }
    for &(i, j) in e2 {
        total += slot_angle(perm.slots[i], perm.slots[j], n);
    }
    total
}

// |angle| between two slots out of n, computed from the index difference.
fn slot_angle(a: usize, b: usize, n: usize) -> f64 {
    let diff = (a as i64 - b as i64).rem_euclid(n as i64) as usize;
    TAU * diff.min(n - diff) as f64 / n as f64
}

pub(crate) fn metropolis_accepts(delta: f64, temp: f64, rng: &mut impl Rng) -> bool {
    delta <= 0.0 || rng.random::<f64>() < (-delta / temp).exp()
}

/// Runs the annealing baseline and returns the unit-circle coordinates of the
/// best permutation found. Deterministic per seed.
pub fn sa_initial_placement(g: &Graph, sp: &SaParams) -> Vec<Vec2> {
    let n = g.n();
    assert!(n >= 2, "annealing needs at least two vertices");
    let n_iter = sp.n_iter.unwrap_or_else(|| default_cn_iters(n, g.edge_count()));
    let mut rng = ChaCha8Rng::seed_from_u64(sp.seed);

    // Pair list over E union E2, with a per-vertex incidence index so a swap
    // is evaluated in O(deg) instead of recomputing the whole sum.
    let mut pairs: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.i, e.j)).collect();
    pairs.extend(g.distance_two_pairs());
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        incident[i].push(idx);
        incident[j].push(idx);
    }

    // Random starting permutation.
    let mut slots: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        slots.swap(i, j);
    }
    let mut perm = CirclePerm::from_slots(slots);

    let e2_from = g.edge_count();
    let mut current = sa_objective(g, &pairs[e2_from..], &perm);
    let mut best = perm.clone();
    let mut best_obj = current;

    let alpha = sp.t_end_ratio.powf(1.0 / n_iter.max(1) as f64);
    let mut temp = sp.t0;
    for _ in 0..n_iter {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            temp *= alpha;
            continue;
        }
        let delta = swap_delta(&perm, &pairs, &incident, u, v);
        if metropolis_accepts(delta, temp, &mut rng) {
            perm.swap_vertices(u, v);
            current += delta;
            if current < best_obj {
                best_obj = current;
                best = perm.clone();
            }
        }
        temp *= alpha;
    }
    best.positions()
}

// Objective change from swapping the slots of u and v: only pairs touching
// either vertex change, and the pair {u, v} itself is invariant.
fn swap_delta(
    perm: &CirclePerm,
    pairs: &[(usize, usize)],
    incident: &[Vec<usize>],
    u: usize,
    v: usize,
) -> f64 {
    let n = perm.slots.len();
    let (su, sv) = (perm.slots[u], perm.slots[v]);
    let mut delta = 0.0;
    for &idx in &incident[u] {
        let (a, b) = pairs[idx];
        let other = if a == u { b } else { a };
        if other == v {
            continue;
        }
        let so = perm.slots[other];
        delta += slot_angle(sv, so, n) - slot_angle(su, so, n);
    }
    for &idx in &incident[v] {
        let (a, b) = pairs[idx];
        let other = if a == v { b } else { a };
        if other == u {
            continue;
        }
        let so = perm.slots[other];
        delta += slot_angle(su, so, n) - slot_angle(sv, so, n);
    }
    delta
}
