//! Flat chart of the Clifford torus.
//!
//! The torus {|z1| = |z2| = 1/sqrt(2)} carries the isometric chart
//! (x, y) -> (cos(sqrt2 x), sin(sqrt2 x), cos(sqrt2 y), sin(sqrt2 y))/sqrt2
//! with deck lattice pi*sqrt2 Z^2, so chart distance equals intrinsic
//! distance after reduction by the lattice.

use serde::{Deserialize, Serialize};

/// Side length of the fundamental square: pi * sqrt(2).
pub const CHART_PERIOD: f64 = std::f64::consts::PI * std::f64::consts::SQRT_2;

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Plain 2-vector in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn scale(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }

    pub fn unit(self) -> Vec2 {
        self.scale(1.0 / self.norm())
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

fn wrap_period(t: f64) -> f64 {
    let r = t.rem_euclid(CHART_PERIOD);
    // rem_euclid can return the period itself through rounding
    if r >= CHART_PERIOD {
        r - CHART_PERIOD
    } else {
        r
    }
}

/// Point on the torus in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub x: f64,
    pub y: f64,
}

impl ChartPoint {
    pub const ORIGIN: ChartPoint = ChartPoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        ChartPoint { x, y }
    }

    pub fn from_vec(v: Vec2) -> Self {
        ChartPoint { x: v.x, y: v.y }
    }

    pub fn as_vec(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    /// Representative in [0, pi*sqrt2)^2.
    pub fn canonical(self) -> ChartPoint {
        ChartPoint::new(wrap_period(self.x), wrap_period(self.y))
    }

    /// Shortest connecting vector self -> other modulo the deck lattice.
    pub fn delta_to(self, other: ChartPoint) -> Vec2 {
        let wrap_half = |t: f64| {
            let mut r = t.rem_euclid(CHART_PERIOD);
            if r > 0.5 * CHART_PERIOD {
                r -= CHART_PERIOD;
            }
            r
        };
        Vec2::new(wrap_half(other.x - self.x), wrap_half(other.y - self.y))
    }

    /// Intrinsic (= chart) distance on the torus.
    pub fn dist(self, other: ChartPoint) -> f64 {
        self.delta_to(other).norm()
    }

    /// Unit-sphere embedding in R^4.
    pub fn embed_r4(self) -> [f64; 4] {
        let inv = 0.5f64.sqrt();
        let (sx, cx) = (SQRT_2 * self.x).sin_cos();
        let (sy, cy) = (SQRT_2 * self.y).sin_cos();
        [inv * cx, inv * sx, inv * cy, inv * sy]
    }

    /// Unit normal of the torus inside S^3 at this point.
    pub fn normal_r4(self) -> [f64; 4] {
        let inv = 0.5f64.sqrt();
        let (sx, cx) = (SQRT_2 * self.x).sin_cos();
        let (sy, cy) = (SQRT_2 * self.y).sin_cos();
        [inv * cx, inv * sx, -inv * cy, -inv * sy]
    }

    /// Normal exponential: great-circle geodesic at signed height z.
    pub fn fermi_r4(self, z: f64) -> [f64; 4] {
        let p = self.embed_r4();
        let n = self.normal_r4();
        let (sz, cz) = z.sin_cos();
        [
            cz * p[0] + sz * n[0],
            cz * p[1] + sz * n[1],
            cz * p[2] + sz * n[2],
            cz * p[3] + sz * n[3],
        ]
    }
}

/// Isometry of the chart torus: q -> sign * q + offset (mod lattice).
/// sign = +1 gives translations, sign = -1 point reflections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusIsometry {
    pub sign: i8,
    pub offset: Vec2,
}

impl TorusIsometry {
    pub fn identity() -> Self {
        TorusIsometry {
            sign: 1,
            offset: Vec2::ZERO,
        }
    }

    pub fn translation(offset: Vec2) -> Self {
        TorusIsometry { sign: 1, offset }
    }

    /// Point reflection through p: q -> 2p - q.
    pub fn point_reflection(p: ChartPoint) -> Self {
        TorusIsometry {
            sign: -1,
            offset: p.as_vec().scale(2.0),
        }
    }

    pub fn apply(&self, q: ChartPoint) -> ChartPoint {
        let s = self.sign as f64;
        ChartPoint::new(s * q.x + self.offset.x, s * q.y + self.offset.y).canonical()
    }

    pub fn apply_vec(&self, v: Vec2) -> Vec2 {
        v.scale(self.sign as f64)
    }

    /// self ∘ other.
    pub fn compose(&self, other: &TorusIsometry) -> TorusIsometry {
        let s = self.sign as f64;
        TorusIsometry {
            sign: self.sign * other.sign,
            offset: Vec2::new(
                s * other.offset.x + self.offset.x,
                s * other.offset.y + self.offset.y,
            ),
        }
    }

    pub fn inverse(&self) -> TorusIsometry {
        if self.sign == 1 {
            TorusIsometry::translation(-self.offset)
        } else {
            // an involution
            *self
        }
    }

    /// Canonical key for deduplication modulo the deck lattice.
    pub fn canonical_key(&self, tol: f64) -> (i8, i64, i64) {
        let ox = wrap_period(self.offset.x);
        let oy = wrap_period(self.offset.y);
        let snap = |t: f64| {
            let u = (t / tol).round() as i64;
            let steps = (CHART_PERIOD / tol).round() as i64;
            u.rem_euclid(steps)
        };
        (self.sign, snap(ox), snap(oy))
    }
}

/// Primitive torus knot direction (a, b), gcd(a, b) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotVector {
    pub a: u32,
    pub b: u32,
}

pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl KnotVector {
    pub fn new(a: u32, b: u32) -> crate::error::Result<Self> {
        if a == 0 || b == 0 {
            return Err(crate::error::CoreError::DomainError(format!(
                "knot components must be positive, got ({a}, {b})"
            )));
        }
        let g = gcd(a, b);
        if g != 1 {
            return Err(crate::error::CoreError::NonCoprime(a, b, g));
        }
        Ok(KnotVector { a, b })
    }

    /// |v| = sqrt(a^2 + b^2).
    pub fn norm(&self) -> f64 {
        ((self.a * self.a + self.b * self.b) as f64).sqrt()
    }

    /// Unit chart direction along the knot.
    pub fn dir(&self) -> Vec2 {
        Vec2::new(self.a as f64, self.b as f64).unit()
    }

    /// Unit chart normal (-b, a)/|v|.
    pub fn normal(&self) -> Vec2 {
        Vec2::new(-(self.b as f64), self.a as f64).unit()
    }

    /// Injectivity radius of the normal exponential map: pi/(sqrt2 |v|).
    pub fn injectivity_radius(&self) -> f64 {
        std::f64::consts::PI / (SQRT_2 * self.norm())
    }

    /// Length of the closed geodesic: pi sqrt2 |v|.
    pub fn knot_length(&self) -> f64 {
        std::f64::consts::PI * SQRT_2 * self.norm()
    }
}

/// (injectivity radius, knot length); their product is pi^2.
pub fn knot_invariants(v: KnotVector) -> (f64, f64) {
    (v.injectivity_radius(), v.knot_length())
}
