//! The unit hexagonal lattice used as the discrete placement space.
//!
//! Axial coordinates `(q, r)` map to the plane as `(q + r/2, sqrt(3)/2 * r)`,
//! the densest planar packing with minimum spacing 1 between distinct cells.

use std::collections::HashMap;

use rand::Rng;

use crate::geom::Vec2;

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Axial lattice coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HexCoord {
    pub q: i64,
    pub r: i64,
}

impl HexCoord {
    pub fn new(q: i64, r: i64) -> Self {
        HexCoord { q, r }
    }

    /// Euclidean image `(q + r/2, sqrt(3)/2 * r)`.
    pub fn to_euclidean(self) -> Vec2 {
        Vec2::new(self.q as f64 + 0.5 * self.r as f64, SQRT3_2 * self.r as f64)
    }
}

/// Nearest lattice cell to an arbitrary point.
///
/// Works in fractional cube coordinates `(x, y, z) = (q, -q-r, r)` and rounds
/// each, then repairs the axis with the largest residual so the rounded cube
/// sums to zero. Exact ties resolve deterministically through this rule.
pub fn round_to_hex(p: Vec2) -> HexCoord {
    assert!(p.is_finite(), "cannot round a non-finite point");
    let rf = p.y / SQRT3_2;
    let qf = p.x - 0.5 * rf;

    let x = qf;
    let z = rf;
    let y = -x - z;
    let mut rx = x.round();
    let ry = y.round();
    let mut rz = z.round();
    let dx = (rx - x).abs();
    let dy = (ry - y).abs();
    let dz = (rz - z).abs();
    if dx > dy && dx > dz {
        rx = -ry - rz;
    } else if dz >= dy {
        // Largest residual on z (or tied with y): repair z. When y has the
        // largest residual the axial pair (x, z) is already consistent.
        rz = -rx - ry;
    }
    HexCoord::new(rx as i64, rz as i64)
}

/// All cells within hex distance `radius` of the origin, in row-major
/// `(r, q)` order. The disk of radius `R` holds `1 + 3R(R+1)` cells.
pub fn hex_disk(radius: i64) -> Vec<HexCoord> {
    assert!(radius >= 0);
    let mut cells = Vec::with_capacity((1 + 3 * radius * (radius + 1)) as usize);
    for r in -radius..=radius {
        let q_lo = (-radius).max(-r - radius);
        let q_hi = radius.min(-r + radius);
        for q in q_lo..=q_hi {
            cells.push(HexCoord::new(q, r));
        }
    }
    cells
}

/// Draws `n` distinct cells uniformly without replacement from the smallest
/// origin-centered hex disk containing at least `n` cells.
pub fn initial_sample(n: usize, rng: &mut impl Rng) -> Vec<HexCoord> {
    assert!(n >= 1, "need at least one cell");
    let mut radius = 0i64;
    while (1 + 3 * radius * (radius + 1)) < n as i64 {
        radius += 1;
    }
    let mut cells = hex_disk(radius);
    // Partial Fisher-Yates: the first n slots become the sample.
    for i in 0..n {
        let pick = rng.random_range(i..cells.len());
        cells.swap(i, pick);
    }
    cells.truncate(n);
    cells
}

/// Bijection between placed vertices and occupied lattice cells.
#[derive(Clone, Debug)]
pub struct Occupancy {
    coord_of: Vec<HexCoord>,
    cell_of: HashMap<HexCoord, usize>,
}

impl Occupancy {
    /// Places vertex `v` at `coords[v]`. Panics if the cells are not distinct.
    pub fn new(coords: Vec<HexCoord>) -> Self {
        let mut cell_of = HashMap::with_capacity(coords.len());
        for (v, &c) in coords.iter().enumerate() {
            let prev = cell_of.insert(c, v);
            assert!(prev.is_none(), "cell {c:?} assigned twice");
        }
        Occupancy { coord_of: coords, cell_of }
    }

    pub fn len(&self) -> usize {
        self.coord_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coord_of.is_empty()
    }

    pub fn coord_of(&self, v: usize) -> HexCoord {
        self.coord_of[v]
    }

    pub fn occupant(&self, cell: HexCoord) -> Option<usize> {
        self.cell_of.get(&cell).copied()
    }

    pub fn position_of(&self, v: usize) -> Vec2 {
        self.coord_of[v].to_euclidean()
    }

    /// Euclidean positions indexed by vertex.
    pub fn positions(&self) -> Vec<Vec2> {
        self.coord_of.iter().map(|c| c.to_euclidean()).collect()
    }

    /// Moves vertex `i` to `target`; if another vertex occupies the target
    /// the two exchange cells, so the placement stays a bijection.
    pub fn move_or_swap(&mut self, i: usize, target: HexCoord) {
        let from = self.coord_of[i];
        if target == from {
            return;
        }
        match self.cell_of.get(&target).copied() {
            Some(j) => {
                self.cell_of.insert(from, j);
                self.cell_of.insert(target, i);
                self.coord_of[j] = from;
                self.coord_of[i] = target;
            }
            None => {
                self.cell_of.remove(&from);
                self.cell_of.insert(target, i);
                self.coord_of[i] = target;
            }
        }
    }
}
