use serde::{Deserialize, Serialize};

use crate::isograph::C64;

/// Continuous region used to cut a discrete domain out of a graph. Points on
/// the region boundary count as exterior.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Region {
    Disc { cx: f64, cy: f64, r: f64 },
    /// `(−s, s) × (0, t)`.
    Rect { s: f64, t: f64 },
    /// Upper half of the disc of radius `r` about the origin.
    HalfDisc { r: f64 },
    /// Disc about `(cx, cy)` with the radial slit from the center in
    /// direction `angle` removed.
    SlitDisc { cx: f64, cy: f64, r: f64, angle: f64 },
    /// Simple polygon, vertices in either orientation.
    Polygon { points: Vec<[f64; 2]> },
}

const EDGE_TOL: f64 = 1e-12;

fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn point_segment_distance(p: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a).conj() * ab).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Closed segments `[p, q]` and `[a, b]` share a point.
fn segments_touch(p: C64, q: C64, a: C64, b: C64) -> bool {
    let d1 = cross(q - p, a - p);
    let d2 = cross(q - p, b - p);
    let d3 = cross(b - a, p - a);
    let d4 = cross(b - a, q - a);
    let scale = (q - p).norm().max((b - a).norm()).max(1e-300);
    let tol = EDGE_TOL * scale * scale;
    if ((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol))
        && ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol))
    {
        return true;
    }
    let near = EDGE_TOL * scale;
    point_segment_distance(a, p, q) <= near
        || point_segment_distance(b, p, q) <= near
        || point_segment_distance(p, a, b) <= near
        || point_segment_distance(q, a, b) <= near
}

impl Region {
    pub fn disc(center: C64, r: f64) -> Self {
        Region::Disc { cx: center.re, cy: center.im, r }
    }

    fn polygon(points: &[[f64; 2]]) -> Vec<C64> {
        points.iter().map(|p| C64::new(p[0], p[1])).collect()
    }

    /// Strict membership.
    pub fn contains(&self, p: C64) -> bool {
        match self {
            Region::Disc { cx, cy, r } => (p - C64::new(*cx, *cy)).norm() < *r,
            Region::Rect { s, t } => p.re > -s && p.re < *s && p.im > 0.0 && p.im < *t,
            Region::HalfDisc { r } => p.norm() < *r && p.im > 0.0,
            Region::SlitDisc { cx, cy, r, angle } => {
                let c = C64::new(*cx, *cy);
                if (p - c).norm() >= *r {
                    return false;
                }
                let tip = c + C64::from_polar(*r, *angle);
                point_segment_distance(p, c, tip) > EDGE_TOL * r
            }
            Region::Polygon { points } => {
                let poly = Self::polygon(points);
                let n = poly.len();
                let scale = poly.iter().fold(0.0f64, |m, q| m.max(q.norm())).max(1.0);
                for k in 0..n {
                    if point_segment_distance(p, poly[k], poly[(k + 1) % n]) <= EDGE_TOL * scale {
                        return false;
                    }
                }
                let mut inside = false;
                for k in 0..n {
                    let (a, b) = (poly[k], poly[(k + 1) % n]);
                    if (a.im > p.im) != (b.im > p.im) {
                        let x = a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im);
                        if p.re < x {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
        }
    }

    /// Whether the closed segment `[p, q]` stays inside the region.
    pub fn contains_segment(&self, p: C64, q: C64) -> bool {
        if !self.contains(p) || !self.contains(q) {
            return false;
        }
        match self {
            Region::Disc { .. } | Region::Rect { .. } | Region::HalfDisc { .. } => true,
            Region::SlitDisc { cx, cy, r, angle } => {
                let c = C64::new(*cx, *cy);
                !segments_touch(p, q, c, c + C64::from_polar(*r, *angle))
            }
            Region::Polygon { points } => {
                let poly = Self::polygon(points);
                let n = poly.len();
                (0..n).all(|k| !segments_touch(p, q, poly[k], poly[(k + 1) % n]))
            }
        }
    }

    /// Point where the segment from inside point `p` towards `q` first
    /// leaves the region, located by bisection.
    pub fn exit_point(&self, p: C64, q: C64) -> C64 {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.contains_segment(p, p + (q - p) * mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        p + (q - p) * (0.5 * (lo + hi))
    }

    /// Short text tag, e.g. `disc:0,0,1`.
    pub fn tag(&self) -> String {
        match self {
            Region::Disc { cx, cy, r } => format!("disc:{cx},{cy},{r}"),
            Region::Rect { s, t } => format!("rect:{s},{t}"),
            Region::HalfDisc { r } => format!("halfdisc:{r}"),
            Region::SlitDisc { cx, cy, r, angle } => format!("slitdisc:{cx},{cy},{r},{angle}"),
            Region::Polygon { points } => format!("poly:{}", points.len()),
        }
    }
}
