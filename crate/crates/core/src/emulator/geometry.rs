//! Planar predicates: segment crossing and main-lobe membership.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(r: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(r * c, r * s)
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Self) -> f64 {
        (self - o).norm()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Self) -> Self {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Self) -> Self {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Self {
        Point::new(self.x * s, self.y * s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    /// Segment of length `length` centered at `center` with direction `angle`.
    pub fn centered(center: Point, angle: f64, length: f64) -> Self {
        let half = Point::from_polar(length / 2.0, angle);
        Self::new(center - half, center + half)
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn min_x(&self) -> f64 {
        self.a.x.min(self.b.x)
    }
    pub fn max_x(&self) -> f64 {
        self.a.x.max(self.b.x)
    }
    pub fn min_y(&self) -> f64 {
        self.a.y.min(self.b.y)
    }
    pub fn max_y(&self) -> f64 {
        self.a.y.max(self.b.y)
    }
}

fn orientation(p: Point, q: Point, r: Point) -> f64 {
    (q - p).cross(r - p)
}

/// `r` is collinear with `p`-`q` and inside its bounding box.
fn on_segment(p: Point, q: Point, r: Point) -> bool {
    r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
}

/// Closed-segment intersection. Touching endpoints and collinear overlap
/// count as intersecting.
pub fn segments_intersect(s: &Segment, t: &Segment) -> bool {
    let d1 = orientation(t.a, t.b, s.a);
    let d2 = orientation(t.a, t.b, s.b);
    let d3 = orientation(s.a, s.b, t.a);
    let d4 = orientation(s.a, s.b, t.b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(t.a, t.b, s.a))
        || (d2 == 0.0 && on_segment(t.a, t.b, s.b))
        || (d3 == 0.0 && on_segment(s.a, s.b, t.a))
        || (d4 == 0.0 && on_segment(s.a, s.b, t.b))
}

/// Whether `obstacle` cuts the line of sight `path`.
pub fn is_blocked(path: &Segment, obstacle: &Segment) -> bool {
    segments_intersect(path, obstacle)
}

/// Whether `point` lies in the closed main lobe of width `theta` centered on
/// `boresight` (a direction vector) at `origin`.
pub fn beam_covers(origin: Point, boresight: Point, theta: f64, point: Point) -> bool {
    let v = point - origin;
    let angle = boresight.cross(v).abs().atan2(boresight.dot(v));
    angle <= theta / 2.0
}
