//! Exact convex polygons with rational vertices.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, q, Q};

pub type Point = (Q, Q);

fn cross(o: &Point, a: &Point, b: &Point) -> Q {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Convex polygon, vertices counter-clockwise starting from the
/// lexicographically smallest one, without repeated or collinear vertices.
/// Degenerate polygons (a point or a segment) are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polygon {
    vertices: Vec<Point>,
}

/// Closed half-plane `a x + b y <= c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfPlane {
    pub a: Q,
    pub b: Q,
    pub c: Q,
}

impl HalfPlane {
    /// Scales so that the first non-zero of `(a, b)` has absolute value one.
    pub fn normalized(a: Q, b: Q, c: Q) -> Self {
        let lead = if a.is_zero() { b.abs() } else { a.abs() };
        Self {
            a: a / &lead,
            b: b / &lead,
            c: c / &lead,
        }
    }

    pub fn value(&self, p: &Point) -> Q {
        &self.a * &p.0 + &self.b * &p.1 - &self.c
    }

    pub fn contains(&self, p: &Point) -> bool {
        !self.value(p).is_positive()
    }
}

impl Polygon {
    /// Convex hull of a point set.
    pub fn hull(points: impl IntoIterator<Item = Point>) -> Self {
        let mut pts: Vec<Point> = points.into_iter().collect();
        pts.sort();
        pts.dedup();
        if pts.len() <= 2 {
            return Self { vertices: pts };
        }
        let mut lower: Vec<Point> = Vec::new();
        for p in &pts {
            while lower.len() >= 2
                && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
            {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Point> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2
                && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
            {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Self { vertices: lower }
    }

    pub fn from_vertices(vertices: Vec<Point>) -> Self {
        Self::hull(vertices)
    }

    pub fn from_ints(vertices: &[(i64, i64)]) -> Self {
        Self::hull(vertices.iter().map(|&(x, y)| (q(x), q(y))))
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> Q {
        let n = self.vertices.len();
        if n < 3 {
            return Q::zero();
        }
        let mut twice = Q::zero();
        for i in 0..n {
            let (x0, y0) = &self.vertices[i];
            let (x1, y1) = &self.vertices[(i + 1) % n];
            twice += x0 * y1 - x1 * y0;
        }
        twice / q(2)
    }

    pub fn contains(&self, p: &Point) -> bool {
        let v = &self.vertices;
        match v.len() {
            0 => false,
            1 => &v[0] == p,
            2 => {
                cross(&v[0], &v[1], p).is_zero()
                    && p.0 >= v[0].0.clone().min(v[1].0.clone())
                    && p.0 <= v[0].0.clone().max(v[1].0.clone())
                    && p.1 >= v[0].1.clone().min(v[1].1.clone())
                    && p.1 <= v[0].1.clone().max(v[1].1.clone())
            }
            n => (0..n).all(|i| !cross(&v[i], &v[(i + 1) % n], p).is_negative()),
        }
    }

    /// Whether `other` lies inside `self`.
    pub fn contains_polygon(&self, other: &Polygon) -> bool {
        other.vertices.iter().all(|p| self.contains(p))
    }

    /// Supporting half-planes of the edges (only for polygons with at least
    /// three vertices).
    pub fn edges(&self) -> Vec<HalfPlane> {
        let v = &self.vertices;
        let n = v.len();
        if n < 3 {
            return Vec::new();
        }
        (0..n)
            .map(|i| {
                let (p, r) = (&v[i], &v[(i + 1) % n]);
                // Interior is on the left of p -> r.
                let a = &r.1 - &p.1;
                let b = &p.0 - &r.0;
                let c = &a * &p.0 + &b * &p.1;
                HalfPlane::normalized(a, b, c)
            })
            .collect()
    }

    /// Intersection with a closed half-plane.
    pub fn clip(&self, h: &HalfPlane) -> Polygon {
        let v = &self.vertices;
        let n = v.len();
        if n == 0 {
            return Polygon::default();
        }
        let mut out = Vec::new();
        for i in 0..n {
            let p = &v[i];
            let r = &v[(i + 1) % n];
            let fp = h.value(p);
            let fr = h.value(r);
            if !fp.is_positive() {
                out.push(p.clone());
            }
            if (fp.is_negative() && fr.is_positive()) || (fp.is_positive() && fr.is_negative()) {
                let s = &fp / (&fp - &fr);
                out.push((&p.0 + &s * (&r.0 - &p.0), &p.1 + &s * (&r.1 - &p.1)));
            }
        }
        Polygon::hull(out)
    }

    pub fn map(&self, f: impl Fn(&Point) -> Point) -> Polygon {
        Polygon::hull(self.vertices.iter().map(f))
    }

    /// Combinatorial signature: vertex count and edge directions.
    pub fn signature(&self) -> (usize, Vec<(Q, Q)>) {
        let dirs = self.edges().into_iter().map(|h| (h.a, h.b)).collect();
        (self.vertices.len(), dirs)
    }

    pub fn max_by_linear(&self, a: &Q, b: &Q) -> Option<Q> {
        self.vertices
            .iter()
            .map(|(x, y)| a * x + b * y)
            .max_by(|u, v| u.cmp(v))
    }
}

#[derive(Serialize, Deserialize)]
struct PolygonWire {
    vertices: Vec<[String; 2]>,
}

impl Serialize for Polygon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolygonWire {
            vertices: self
                .vertices
                .iter()
                .map(|(x, y)| [format_q(x), format_q(y)])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = PolygonWire::deserialize(d)?;
        let pts = w
            .vertices
            .iter()
            .map(|[x, y]| Ok((parse_q(x)?, parse_q(y)?)))
            .collect::<Result<Vec<Point>>>()
            .map_err(|e: Error| serde::de::Error::custom(e.to_string()))?;
        let p = Polygon::hull(pts.clone());
        if p.vertices != pts {
            return Err(serde::de::Error::custom(
                "vertices are not a normalized convex polygon",
            ));
        }
        Ok(p)
    }
}
