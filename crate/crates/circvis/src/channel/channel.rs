use super::ChannelError;
use crate::config::GeomTolerances;
use crate::geom::{intersect, ArcSegment, CutKind, GeomError, Point};
use serde::{Deserialize, Serialize};

/// Where a point sits relative to the channel region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Interior,
    OnBoundary,
    Exterior,
}

/// Closed channel: the starting arc followed by the boundary chain encloses
/// the region counter-clockwise, interior on the left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    #[serde(rename = "sigma")]
    pub start_arc: ArcSegment,
    #[serde(rename = "kappa")]
    pub boundary: Vec<ArcSegment>,
}

impl Channel {
    pub fn new(start_arc: ArcSegment, boundary: Vec<ArcSegment>) -> Channel {
        Channel {
            start_arc,
            boundary,
        }
    }

    /// Number of boundary segments.
    pub fn n(&self) -> usize {
        self.boundary.len()
    }

    /// All segments of the closed loop, starting arc first.
    pub fn loop_segments(&self) -> Vec<ArcSegment> {
        let mut v = Vec::with_capacity(self.boundary.len() + 1);
        v.push(self.start_arc);
        v.extend(self.boundary.iter().copied());
        v
    }

    /// Axis-aligned bounding box of the whole boundary.
    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for seg in self.loop_segments() {
            let (slo, shi) = seg.bbox();
            lo = Point::new(lo.x.min(slo.x), lo.y.min(slo.y));
            hi = Point::new(hi.x.max(shi.x), hi.y.max(shi.y));
        }
        (lo, hi)
    }

    /// Diagonal of the bounding box; the length scale for tolerances.
    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bbox();
        hi.dist(lo)
    }

    /// Signed area enclosed by the loop; positive for counter-clockwise.
    pub fn signed_area(&self) -> f64 {
        let mut area = 0.0;
        for seg in self.loop_segments() {
            area += 0.5 * seg.start.cross(seg.end);
            let theta = seg.sweep();
            if theta != 0.0 {
                let r = seg.radius().unwrap();
                area += 0.5 * r * r * (theta - theta.sin());
            }
        }
        area
    }

    /// Checks closedness, orientation, corner convexity at the starting arc
    /// and simplicity. `check_simple` may be disabled for generated inputs
    /// that are simple by construction.
    pub fn validate(&self, tol: &GeomTolerances, check_simple: bool) -> Result<(), ChannelError> {
        let segs = self.loop_segments();
        let m = segs.len();
        if m < 2 {
            return Err(ChannelError::NotClosed { index: 0 });
        }
        for (i, seg) in segs.iter().enumerate() {
            if !seg.start.is_finite() || !seg.end.is_finite() || !seg.bulge.is_finite() {
                return Err(ChannelError::DegenerateSegment { index: i });
            }
        }
        let scale = self.diameter();
        let eps_len = tol.eps_rel * scale;
        for (i, seg) in segs.iter().enumerate() {
            if seg.chord_len() <= eps_len {
                return Err(ChannelError::DegenerateSegment { index: i });
            }
        }
        for i in 0..m {
            let next = (i + 1) % m;
            if segs[i].end.dist(segs[next].start) > eps_len {
                return Err(ChannelError::NotClosed { index: i });
            }
        }
        if check_simple {
            self.check_simplicity(&segs, tol, scale, eps_len)?;
        }
        if self.signed_area() <= 0.0 {
            return Err(ChannelError::WrongOrientation);
        }
        // Corners where the starting arc meets the boundary must turn left
        // or continue straight.
        let sigma = &self.start_arc;
        let at_end = turn_cross(sigma.tangent_at(1.0), segs[1].tangent_at(0.0));
        if at_end < -tol.eps_angle {
            return Err(ChannelError::NonConvexStartCorner { index: 1 });
        }
        let at_start = turn_cross(segs[m - 1].tangent_at(1.0), sigma.tangent_at(0.0));
        if at_start < -tol.eps_angle {
            return Err(ChannelError::NonConvexStartCorner { index: 0 });
        }
        Ok(())
    }

    fn check_simplicity(
        &self,
        segs: &[ArcSegment],
        tol: &GeomTolerances,
        scale: f64,
        eps_len: f64,
    ) -> Result<(), ChannelError> {
        let m = segs.len();
        let boxes: Vec<(Point, Point)> = segs.iter().map(|s| s.bbox()).collect();
        for i in 0..m {
            for j in (i + 1)..m {
                let adjacent = j == i + 1 || (i == 0 && j == m - 1);
                if !boxes_touch(&boxes[i], &boxes[j], eps_len) {
                    continue;
                }
                let fail = ChannelError::SelfIntersecting { first: i, second: j };
                match intersect(&segs[i], &segs[j], tol, scale) {
                    Err(GeomError::OverlapError) => {
                        if !adjacent {
                            return Err(fail);
                        }
                        // Collinear neighbors are fine while they only share
                        // the breakpoint.
                        let (first, second) = if j == i + 1 { (i, j) } else { (j, i) };
                        let host = &segs[first];
                        let eps_t = eps_len / host.length();
                        for probe in [segs[second].midpoint(), segs[second].end] {
                            let t = host.param_of_point(probe, eps_len);
                            if t > eps_t && t < 1.0 - eps_t {
                                return Err(fail);
                            }
                        }
                    }
                    Err(_) => return Err(fail),
                    Ok(events) => {
                        for e in events {
                            if adjacent {
                                let shared = if j == i + 1 { segs[i].end } else { segs[j].end };
                                if e.point.dist(shared) <= eps_len {
                                    continue;
                                }
                            }
                            return Err(fail);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Shortest distance from `p` to the boundary loop.
    pub fn boundary_distance(&self, p: Point, tol: &GeomTolerances) -> f64 {
        let eps_len = tol.eps_rel * self.diameter();
        self.loop_segments()
            .iter()
            .map(|s| s.dist_to_arc(p, eps_len))
            .fold(f64::INFINITY, f64::min)
    }

    /// Classifies `p` against the channel region by crossing parity.
    pub fn contains(&self, p: Point, tol: &GeomTolerances) -> Containment {
        let scale = self.diameter();
        let eps_len = tol.eps_rel * scale;
        if self.boundary_distance(p, tol) <= eps_len {
            return Containment::OnBoundary;
        }
        let (lo, hi) = self.bbox();
        if p.x < lo.x || p.x > hi.x || p.y < lo.y || p.y > hi.y {
            return Containment::Exterior;
        }
        let segs = self.loop_segments();
        // Deterministic ray directions; a cast is void when it grazes a
        // breakpoint or touches tangentially, the next direction decides.
        const ANGLES: [f64; 7] = [0.1234567, 1.81, 2.95, 4.13, 5.31, 0.77, 2.39];
        for angle in ANGLES {
            if let Some(odd) = self.cast_ray(&segs, p, angle, tol, scale, eps_len) {
                return if odd {
                    Containment::Interior
                } else {
                    Containment::Exterior
                };
            }
        }
        // Every cast was ambiguous; nudge the query point by a hair.
        for angle in ANGLES {
            let q = p + Point::from_angle(angle + 0.5) * (4.0 * eps_len);
            if let Some(odd) = self.cast_ray(&segs, q, angle, tol, scale, eps_len) {
                return if odd {
                    Containment::Interior
                } else {
                    Containment::Exterior
                };
            }
        }
        Containment::Exterior
    }

    fn cast_ray(
        &self,
        segs: &[ArcSegment],
        p: Point,
        angle: f64,
        tol: &GeomTolerances,
        scale: f64,
        eps_len: f64,
    ) -> Option<bool> {
        let dir = Point::from_angle(angle);
        let ray = ArcSegment::new(p, p + dir * (3.0 * scale), 0.0).ok()?;
        let mut crossings = 0u32;
        for seg in segs {
            let events = match intersect(&ray, seg, tol, scale) {
                Ok(ev) => ev,
                Err(_) => return None,
            };
            for e in events {
                match e.kind {
                    CutKind::TouchLeft | CutKind::TouchRight => return None,
                    _ => {}
                }
                let eps_t = eps_len / seg.length();
                if e.t_other < eps_t || e.t_other > 1.0 - eps_t {
                    return None;
                }
                if e.t_self <= eps_len / (3.0 * scale) {
                    return None;
                }
                crossings += 1;
            }
        }
        Some(crossings % 2 == 1)
    }
}

fn turn_cross(incoming: Point, outgoing: Point) -> f64 {
    incoming.cross(outgoing)
}

fn boxes_touch(a: &(Point, Point), b: &(Point, Point), eps: f64) -> bool {
    a.0.x - eps <= b.1.x && b.0.x - eps <= a.1.x && a.0.y - eps <= b.1.y && b.0.y - eps <= a.1.y
}
