//! Small fixed-size vector/matrix types for planar layout math.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// A point or displacement in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product, treating both as 3-vectors in the plane.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl SubAssign for Vec2 {
    fn sub_assign(&mut self, rhs: Vec2) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

/// Symmetric 2x2 matrix, stored as the upper triangle.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SymMat2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl SymMat2 {
    pub const ZERO: SymMat2 = SymMat2 { xx: 0.0, xy: 0.0, yy: 0.0 };

    pub fn new(xx: f64, xy: f64, yy: f64) -> Self {
        SymMat2 { xx, xy, yy }
    }

    pub fn identity() -> Self {
        SymMat2::new(1.0, 0.0, 1.0)
    }

    /// a*I + b*(v v^T) accumulated in place.
    pub fn add_iso_and_outer(&mut self, a: f64, b: f64, v: Vec2) {
        self.xx += a + b * v.x * v.x;
        self.xy += b * v.x * v.y;
        self.yy += a + b * v.y * v.y;
    }

    pub fn trace(self) -> f64 {
        self.xx + self.yy
    }

    pub fn det(self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn min_eigenvalue(self) -> f64 {
        let half_tr = 0.5 * self.trace();
        let disc = (0.25 * (self.xx - self.yy) * (self.xx - self.yy) + self.xy * self.xy).sqrt();
        half_tr - disc
    }

    pub fn add_ridge(&mut self, lambda: f64) {
        self.xx += lambda;
        self.yy += lambda;
    }

    /// Solves `self * x = rhs` via the explicit 2x2 inverse.
    pub fn solve(self, rhs: Vec2) -> Vec2 {
        let det = self.det();
        Vec2::new(
            (self.yy * rhs.x - self.xy * rhs.y) / det,
            (self.xx * rhs.y - self.xy * rhs.x) / det,
        )
    }

    pub fn mul_vec(self, v: Vec2) -> Vec2 {
        Vec2::new(self.xx * v.x + self.xy * v.y, self.xy * v.x + self.yy * v.y)
    }
}

impl Add for SymMat2 {
    type Output = SymMat2;
    fn add(self, rhs: SymMat2) -> SymMat2 {
        SymMat2::new(self.xx + rhs.xx, self.xy + rhs.xy, self.yy + rhs.yy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_recovers_rhs() {
        let m = SymMat2::new(4.0, 1.0, 3.0);
        let x = Vec2::new(0.7, -1.3);
        let rhs = m.mul_vec(x);
        let sol = m.solve(rhs);
        assert!((sol - x).norm() < 1e-12);
    }

    #[test]
    fn min_eigenvalue_of_diagonal() {
        let m = SymMat2::new(4.25, 0.0, 1.75);
        assert!((m.min_eigenvalue() - 1.75).abs() < 1e-15);
    }

    #[test]
    fn outer_product_accumulation() {
        let mut m = SymMat2::ZERO;
        m.add_iso_and_outer(2.0, 3.0, Vec2::new(1.0, -1.0));
        assert_eq!(m, SymMat2::new(5.0, -3.0, 5.0));
    }
}
