//! Planar vectors and the two predicates every other module leans on.

use std::ops::{Add, Div, Mul, Neg, Sub};

use robust::Coord;

/// A point or vector in a triangle chart or in the developed plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at angle `theta` from the positive x-axis.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2::new(c, s)
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3d cross product; positive when `o` is to the left of `self`.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn normalized(self) -> Vec2 {
        self / self.norm()
    }

    /// Complex multiplication; rotates and scales `self` by `o`.
    pub fn cmul(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x * o.x - self.y * o.y, self.x * o.y + self.y * o.x)
    }

    /// Complex multiplication by the conjugate of `o`.
    pub fn cmul_conj(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x * o.x + self.y * o.y, self.y * o.x - self.x * o.y)
    }

    pub fn rotated(self, theta: f64) -> Vec2 {
        self.cmul(Vec2::from_angle(theta))
    }

    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self) * t
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    fn coord(self) -> Coord<f64> {
        Coord { x: self.x, y: self.y }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Exact sign orientation: positive iff `a, b, c` turn counterclockwise.
pub fn orient2d(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    robust::orient2d(a.coord(), b.coord(), c.coord())
}

/// Exact in-circle determinant: positive iff `d` lies strictly inside the
/// circle through the counterclockwise triangle `a, b, c`.
pub fn incircle(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> f64 {
    robust::incircle(a.coord(), b.coord(), c.coord(), d.coord())
}

/// Whether the open segments `ab` and `cd` cross at a single interior point.
/// Touching endpoints and collinear overlaps do not count.
pub fn segments_cross_properly(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let o1 = orient2d(a, b, c);
    let o2 = orient2d(a, b, d);
    let o3 = orient2d(c, d, a);
    let o4 = orient2d(c, d, b);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// Intersection point of the lines through `ab` and `cd` as parameters
/// `(s, t)` with `a + s(b-a) = c + t(d-c)`. `None` for parallel lines.
pub fn line_params(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> Option<(f64, f64)> {
    let r = b - a;
    let q = d - c;
    let den = r.cross(q);
    if den == 0.0 {
        return None;
    }
    let w = c - a;
    Some((w.cross(q) / den, w.cross(r) / den))
}

/// Distance from the origin to the segment `ab`.
pub fn origin_segment_distance(a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm2();
    if len2 == 0.0 {
        return a.norm();
    }
    let t = (-a.dot(ab) / len2).clamp(0.0, 1.0);
    (a + ab * t).norm()
}

/// Angle of the triangle corner opposite side `opposite`, from side lengths.
pub fn corner_angle(adj1: f64, adj2: f64, opposite: f64) -> f64 {
    let c = (adj1 * adj1 + adj2 * adj2 - opposite * opposite) / (2.0 * adj1 * adj2);
    c.clamp(-1.0, 1.0).acos()
}

/// Heron's formula in the numerically stable ordering.
pub fn heron_area(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.25 * p.max(0.0).sqrt()
}
