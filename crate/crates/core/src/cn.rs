//! Coordinate-Newton initial placement on the hexagonal lattice.
//!
//! Vertices start at random lattice cells. Each step picks a random vertex,
//! takes a Newton step of the strictly convex attractive energy restricted to
//! that vertex, perturbs it by annealed noise, rounds the target back onto
//! the lattice, and swaps occupants on collision. The finished placement is
//! rescaled by the closed-form optimal factor. The result is meant to seed a
//! continuous solver, not to replace one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::energy::{attr_terms, optimal_scale, scale_layout, ForceParams};
use crate::geom::Vec2;
use crate::graph::Graph;
use crate::hex::{initial_sample, round_to_hex, HexCoord, Occupancy};

/// Hard cap on the automatic iteration budget, which grows like `2 n^3 / m`
/// and explodes on very sparse large graphs.
pub const MAX_AUTO_ITERS: usize = 50_000_000;

/// Placement parameters. `n_iter = None` uses the budget
/// `ceil(2 n^3 / m)` capped at [`MAX_AUTO_ITERS`].
#[derive(Clone, Debug)]
pub struct CnParams {
    /// Initial noise temperature.
    pub t0: f64,
    /// Iteration count override.
    pub n_iter: Option<usize>,
    pub seed: u64,
    /// Base ridge scale for near-singular step Hessians.
    pub hessian_guard: f64,
}

impl Default for CnParams {
    fn default() -> Self {
        CnParams { t0: 1.5, n_iter: None, seed: 0, hessian_guard: 1e-8 }
    }
}

impl CnParams {
    pub fn seeded(seed: u64) -> Self {
        CnParams { seed, ..Default::default() }
    }

    pub fn iterations_for(&self, g: &Graph) -> usize {
        self.n_iter.unwrap_or_else(|| default_cn_iters(g.n(), g.edge_count()))
    }
}

/// Default iteration budget `ceil(2 n^3 / m)`, at least 1, capped.
pub fn default_cn_iters(n: usize, m: usize) -> usize {
    let n = n as f64;
    let m = (m.max(1)) as f64;
    let raw = (2.0 * n * n * n / m).ceil();
    (raw as usize).clamp(1, MAX_AUTO_ITERS)
}

/// Linearly decayed noise temperature at iteration `m` of `n_iter`,
/// floored at zero.
pub fn temperature(m: usize, t0: f64, n_iter: usize) -> f64 {
    assert!(n_iter >= 1);
    (t0 * (1.0 - m as f64 / n_iter as f64)).max(0.0)
}

/// One placement step on vertex `i`: Newton target of the restricted
/// attractive energy, plus `t` times a unit-norm noise vector, rounded to the
/// nearest cell, then moved with collision swap.
pub fn cn_step(
    g: &Graph,
    occ: &mut Occupancy,
    i: usize,
    t: f64,
    rng: &mut impl Rng,
    p: &ForceParams,
    cp: &CnParams,
) {
    let pos = occ.position_of(i);
    let (grad, mut hess) = attr_terms(
        pos,
        g.neighbors(i).iter().map(|&(j, w)| (occ.position_of(j), w)),
        p.k,
    );

    let newton = if grad == Vec2::ZERO {
        Vec2::ZERO
    } else {
        // On-lattice neighbors keep the Hessian comfortably definite; the
        // ridge only fires for degenerate configurations (including NaN and
        // the all-zero case, which fail the comparison).
        let trace = hess.trace();
        let well_conditioned = hess.min_eigenvalue() > 1e-10 * trace;
        if !well_conditioned {
            hess.add_ridge(cp.hessian_guard * 0.5 * trace + 1e-12);
        }
        hess.solve(grad)
    };

    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    let noise = Vec2::new(angle.cos(), angle.sin());
    let target = pos - newton + t * noise;
    occ.move_or_swap(i, round_to_hex(target));
}

/// Runs the full placement: sample distinct cells, iterate [`cn_step`] with
/// uniformly random vertex choice and linearly decaying noise, then rescale
/// by the optimal factor. Deterministic for a given seed.
///
/// Disconnected graphs are placed per component and the components tiled
/// side by side with a one-cell gap before the final rescale.
pub fn cn_initial_placement(g: &Graph, p: &ForceParams, cp: &CnParams) -> Vec<Vec2> {
    let mut rng = ChaCha8Rng::seed_from_u64(cp.seed);
    let parts = g.connected_components();

    let coords = if parts.m() == 1 {
        place_component(g, p, cp, cp.iterations_for(g), &mut rng)
    } else {
        let mut coords = vec![HexCoord::new(0, 0); g.n()];
        let mut next_q = 0i64;
        for group in &parts.groups {
            let (sub, back) = g.induced_subgraph(group);
            let budget = match cp.n_iter {
                Some(total) => (total * sub.n() / g.n()).max(1),
                None => default_cn_iters(sub.n(), sub.edge_count()),
            };
            let placed = place_component(&sub, p, cp, budget, &mut rng);
            let min_q = placed.iter().map(|c| c.q).min().unwrap();
            let max_q = placed.iter().map(|c| c.q).max().unwrap();
            let shift = next_q - min_q;
            for (local, &orig) in back.iter().enumerate() {
                coords[orig] = HexCoord::new(placed[local].q + shift, placed[local].r);
            }
            next_q += max_q - min_q + 2;
        }
        coords
    };

    let layout: Vec<Vec2> = coords.iter().map(|c| c.to_euclidean()).collect();
    if crate::energy::attractive_cubic_sum(g, &layout) > 0.0 {
        let s = optimal_scale(g, &layout, p);
        scale_layout(&layout, s)
    } else {
        layout
    }
}

fn place_component(
    g: &Graph,
    p: &ForceParams,
    cp: &CnParams,
    n_iter: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<HexCoord> {
    let n = g.n();
    let mut occ = Occupancy::new(initial_sample(n, rng));
    for m in 0..n_iter {
        let i = rng.random_range(0..n);
        let t = temperature(m, cp.t0, n_iter);
        cn_step(g, &mut occ, i, t, rng, p, cp);
    }
    (0..n).map(|v| occ.coord_of(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::total_energy;
    use crate::solve::random_layout;

    #[test]
    fn temperature_schedule() {
        assert_eq!(temperature(0, 1.5, 100), 1.5);
        assert_eq!(temperature(100, 1.5, 100), 0.0);
        assert!((temperature(50, 1.5, 100) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn default_budget_formula() {
        assert_eq!(default_cn_iters(300, 300), 180_000);
        assert_eq!(default_cn_iters(2, 1), 16);
        assert_eq!(default_cn_iters(10_000, 1), MAX_AUTO_ITERS);
    }

    #[test]
    fn isolated_vertex_does_not_move_without_noise() {
        let g = Graph::new(2, vec![]).unwrap();
        let mut occ = Occupancy::new(vec![HexCoord::new(0, 0), HexCoord::new(3, 0)]);
        let p = ForceParams::with_k(1.0);
        let cp = CnParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        cn_step(&g, &mut occ, 0, 0.0, &mut rng, &p, &cp);
        assert_eq!(occ.coord_of(0), HexCoord::new(0, 0));
    }

    #[test]
    fn newton_target_of_stretched_pair() {
        // Vertices at (3,0) and (0,0): gradient (9,0), Hessian diag(6,3),
        // so the unrounded target is (1.5, 0), a tie between cells (1,0)
        // and (2,0) resolved deterministically by the rounding rule.
        let g = Graph::new(2, vec![(0, 1, 1.0)]).unwrap();
        let mut occ = Occupancy::new(vec![HexCoord::new(3, 0), HexCoord::new(0, 0)]);
        let p = ForceParams::unguarded(1.0);
        let cp = CnParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        cn_step(&g, &mut occ, 0, 0.0, &mut rng, &p, &cp);

        let landed = occ.coord_of(0);
        assert_eq!(landed, round_to_hex(Vec2::new(1.5, 0.0)));
        // The landing cell is as close to the unrounded target as any cell.
        let target = Vec2::new(1.5, 0.0);
        let best = crate::hex::hex_disk(4)
            .iter()
            .map(|c| (c.to_euclidean() - target).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(((landed.to_euclidean() - target).norm() - best).abs() < 1e-12);
    }

    #[test]
    fn collision_swaps_occupants() {
        let g = Graph::new(2, vec![(0, 1, 1.0)]).unwrap();
        // Adjacent pair: the Newton target of vertex 0 rounds onto vertex 1's
        // cell or its own; run a handful of noisy steps and check the
        // bijection never breaks.
        let mut occ = Occupancy::new(vec![HexCoord::new(1, 0), HexCoord::new(0, 0)]);
        let p = ForceParams::with_k(1.0);
        let cp = CnParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 0..20 {
            let i = rng.random_range(0..2);
            cn_step(&g, &mut occ, i, temperature(m, 1.5, 20), &mut rng, &p, &cp);
            assert_ne!(occ.coord_of(0), occ.coord_of(1));
        }
    }

    #[test]
    fn two_vertex_placement_lands_at_equilibrium_distance() {
        let g = Graph::new(2, vec![(0, 1, 1.0)]).unwrap();
        let p = ForceParams::unguarded(1.0);
        for seed in 1..=5 {
            let xs = cn_initial_placement(&g, &p, &CnParams::seeded(seed));
            let d = (xs[0] - xs[1]).norm();
            assert!((d - 1.0).abs() < 1e-9, "seed {seed}: distance {d}");
        }
    }

    #[test]
    fn zero_iterations_degenerates_to_rescaled_sample() {
        let g = Graph::cycle(5).unwrap();
        let p = ForceParams::auto(5);
        let cp = CnParams { n_iter: Some(0), ..CnParams::seeded(2) };
        let xs = cn_initial_placement(&g, &p, &cp);
        assert_eq!(xs.len(), 5);
        assert!(xs.iter().all(|x| x.is_finite()));
        // Still pairwise distinct (distinct cells, positive scale).
        for i in 0..5 {
            for j in i + 1..5 {
                assert!((xs[i] - xs[j]).norm() > 1e-9);
            }
        }
    }

    #[test]
    fn placement_is_deterministic() {
        let g = Graph::cycle(40).unwrap();
        let p = ForceParams::auto(40);
        let cp = CnParams { n_iter: Some(4000), ..CnParams::seeded(11) };
        let a = cn_initial_placement(&g, &p, &cp);
        let b = cn_initial_placement(&g, &p, &cp);
        assert_eq!(a, b);
    }

    #[test]
    fn beats_random_start_on_cycle() {
        let g = Graph::cycle(300).unwrap();
        let p = ForceParams::auto(300);
        let mut wins = 0;
        for seed in 1..=10 {
            let cn = cn_initial_placement(&g, &p, &CnParams::seeded(seed));
            let random = random_layout(300, seed);
            if total_energy(&g, &cn, &p) < total_energy(&g, &random, &p) {
                wins += 1;
            }
        }
        assert!(wins >= 9, "placement beat random start only {wins}/10 times");
    }

    #[test]
    fn disconnected_components_are_tiled_apart() {
        let g = Graph::new(6, vec![(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0)]).unwrap();
        let p = ForceParams::auto(6);
        let xs = cn_initial_placement(&g, &p, &CnParams::seeded(4));
        assert_eq!(xs.len(), 6);
        for i in 0..6 {
            for j in i + 1..6 {
                assert!((xs[i] - xs[j]).norm() > 1e-9, "vertices {i} and {j} coincide");
            }
        }
    }
}
