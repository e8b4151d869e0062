use super::counters;
use super::point::Point;
use super::side::SideClass;
use super::GeomError;
use serde::{Deserialize, Serialize};

/// Circular arc (or straight segment) in bulge representation.
///
/// `bulge = tan(sweep / 4)` where `sweep` is the signed angle swept by the
/// arc: zero encodes the straight segment, positive a counter-clockwise arc,
/// negative a clockwise one. `|bulge| = 1` is a half circle; values beyond
/// one encode arcs larger than a half circle.
///
/// The parametrization `point_at(t)` covers the arc for `t in [0, 1]` with
/// constant speed `length()`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcSegment {
    pub start: Point,
    pub end: Point,
    pub bulge: f64,
}

impl ArcSegment {
    /// Builds an arc, rejecting coincident or non-finite endpoints.
    pub fn new(start: Point, end: Point, bulge: f64) -> Result<ArcSegment, GeomError> {
        if !start.is_finite() || !end.is_finite() || !bulge.is_finite() {
            return Err(GeomError::DegenerateSegment);
        }
        if start == end {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(ArcSegment { start, end, bulge })
    }

    /// Straight segment from `start` to `end`.
    pub fn segment(start: Point, end: Point) -> Result<ArcSegment, GeomError> {
        ArcSegment::new(start, end, 0.0)
    }

    /// Arc on the circle centered at `center` with radius `r`, running from
    /// polar angle `a0` over the signed angle `sweep` (`|sweep| < 2*pi`).
    pub fn from_center_angles(
        center: Point,
        r: f64,
        a0: f64,
        sweep: f64,
    ) -> Result<ArcSegment, GeomError> {
        let start = center + Point::from_angle(a0) * r;
        let end = center + Point::from_angle(a0 + sweep) * r;
        ArcSegment::new(start, end, (sweep / 4.0).tan())
    }

    pub fn chord(&self) -> Point {
        self.end - self.start
    }

    pub fn chord_len(&self) -> f64 {
        self.chord().norm()
    }

    /// Unit chord direction and its left normal.
    fn chord_frame(&self) -> (Point, Point, f64) {
        let c = self.chord();
        let len = c.norm();
        let c_hat = c / len;
        (c_hat, c_hat.perp(), len)
    }

    /// Signed swept angle, `4 * atan(bulge)`, in `(-2*pi, 2*pi)`.
    pub fn sweep(&self) -> f64 {
        4.0 * self.bulge.atan()
    }

    /// Arc length; also the constant parametric speed `|d gamma / dt|`.
    pub fn length(&self) -> f64 {
        let b = self.bulge.abs();
        if b == 0.0 {
            return self.chord_len();
        }
        // r * |sweep| written through sin(sweep/2) = 2b/(1+b^2).
        self.chord_len() * (1.0 + b * b) * b.atan() / b
    }

    /// Signed curvature: positive turns left, zero for segments.
    pub fn curvature(&self) -> f64 {
        let b = self.bulge;
        4.0 * b / (self.chord_len() * (1.0 + b * b))
    }

    /// Circle radius; `None` for straight segments.
    pub fn radius(&self) -> Option<f64> {
        let b = self.bulge.abs();
        if b == 0.0 {
            return None;
        }
        Some(self.chord_len() * (1.0 + b * b) / (4.0 * b))
    }

    /// Circle center; `None` for straight segments. Ill-conditioned for tiny
    /// bulges, prefer the conic form for predicates.
    pub fn center(&self) -> Option<Point> {
        if self.bulge == 0.0 {
            return None;
        }
        let b = self.bulge;
        let c = self.chord();
        Some(self.start + c * 0.5 + c.perp() * ((1.0 - b * b) / (4.0 * b)))
    }

    /// Point on the arc at parameter `t` (0 start, 1 end); evaluates the
    /// support circle outside `[0, 1]`.
    pub fn point_at(&self, t: f64) -> Point {
        let (c_hat, n_hat, len) = self.chord_frame();
        let b = self.bulge;
        if b == 0.0 {
            return self.start + c_hat * (t * len);
        }
        let theta = self.sweep();
        // sin(theta/2) = 2b/(1+b^2); both forms stay stable as b -> 0.
        let u = 0.5 * len * (1.0 + ((t - 0.5) * theta).sin() * (1.0 + b * b) / (2.0 * b));
        let v = -len * (0.5 * t * theta).sin() * (0.5 * (1.0 - t) * theta).sin() * (1.0 + b * b)
            / (2.0 * b);
        self.start + c_hat * u + n_hat * v
    }

    /// Unit tangent at parameter `t`.
    pub fn tangent_at(&self, t: f64) -> Point {
        let (c_hat, _, _) = self.chord_frame();
        if self.bulge == 0.0 {
            return c_hat;
        }
        c_hat.rotated((t - 0.5) * self.sweep())
    }

    /// Left unit normal at parameter `t`.
    pub fn normal_at(&self, t: f64) -> Point {
        self.tangent_at(t).perp()
    }

    /// Same support and endpoints, opposite traversal.
    pub fn reversed(&self) -> ArcSegment {
        ArcSegment {
            start: self.end,
            end: self.start,
            bulge: -self.bulge,
        }
    }

    /// Sub-arc from parameter `t0` to `t1` of this arc (`t0 < t1`).
    pub fn sub_arc(&self, t0: f64, t1: f64) -> Result<ArcSegment, GeomError> {
        let bulge = ((t1 - t0) * self.sweep() / 4.0).tan();
        ArcSegment::new(self.point_at(t0), self.point_at(t1), bulge)
    }

    /// Arc midpoint, `point_at(0.5)`.
    pub fn midpoint(&self) -> Point {
        self.point_at(0.5)
    }

    /// Axis-aligned bounding box of the arc.
    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(self.start.x.min(self.end.x), self.start.y.min(self.end.y));
        let mut hi = Point::new(self.start.x.max(self.end.x), self.start.y.max(self.end.y));
        let theta = self.sweep();
        if theta != 0.0 {
            // Extremes sit where the tangent is axis-parallel; tangent angle
            // runs monotonically from a0 over theta.
            let a0 = self.chord().angle() - 0.5 * theta;
            for k in 0..4 {
                let d = 0.5 * std::f64::consts::PI * k as f64;
                let off = if theta > 0.0 {
                    (d - a0).rem_euclid(2.0 * std::f64::consts::PI)
                } else {
                    (a0 - d).rem_euclid(2.0 * std::f64::consts::PI)
                };
                let t = off / theta.abs();
                if t <= 1.0 {
                    let p = self.point_at(t);
                    lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
                    hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
                }
            }
        }
        (lo, hi)
    }

    /// Leading coefficient `alpha = 4b / L` of the support conic.
    pub fn conic_alpha(&self) -> f64 {
        4.0 * self.bulge / self.chord_len()
    }

    /// Linear coefficient vector of the support conic, in world coordinates.
    pub fn conic_w(&self) -> Point {
        let (c_hat, n_hat, _) = self.chord_frame();
        let b = self.bulge;
        c_hat * (4.0 * b) + n_hat * (2.0 * (1.0 - b * b))
    }

    /// Support conic `g(p) = alpha |p - start|^2 - <w, p - start>`.
    ///
    /// Negative strictly left of the support, positive strictly right, zero
    /// on it, for either orientation.
    pub fn conic_eval(&self, p: Point) -> f64 {
        let m = p - self.start;
        self.conic_alpha() * m.norm_sq() - self.conic_w().dot(m)
    }

    /// Signed distance from `p` to the support: negative left, positive
    /// right. Exact for circles and lines alike.
    pub fn signed_offset(&self, p: Point) -> f64 {
        let b = self.bulge;
        let s = 1.0 + b * b;
        let g = self.conic_eval(p);
        // (|p-c| - r) rewritten without the center; the sqrt argument is
        // (alpha |p-c|)^2 >= 0.
        g / ((s * s + self.conic_alpha() * g).max(0.0).sqrt() + s)
    }

    /// Distance from `p` to the full support circle or line.
    pub fn dist_to_support(&self, p: Point) -> f64 {
        self.signed_offset(p).abs()
    }

    /// Side of the support, with `eps_len` the on-curve half-width in length
    /// units.
    pub fn side_of_support(&self, p: Point, eps_len: f64) -> SideClass {
        counters::bump();
        let d = self.signed_offset(p);
        if d.abs() <= eps_len {
            SideClass::On
        } else if d < 0.0 {
            SideClass::StrictLeft
        } else {
            SideClass::StrictRight
        }
    }

    /// Support parameter period: the support circle closes after `T` in arc
    /// parameter units; infinite for lines.
    pub fn param_period(&self) -> f64 {
        let theta = self.sweep().abs();
        if theta == 0.0 {
            f64::INFINITY
        } else {
            2.0 * std::f64::consts::PI / theta
        }
    }

    /// Parameter of a point assumed on the support. Arcs map the support
    /// circle to `(0, T)` with `T = param_period()`, so points count forward
    /// from the start; exact start and end snap to 0 and 1 within `eps_len`.
    pub fn param_of_point(&self, p: Point, eps_len: f64) -> f64 {
        counters::bump();
        if p.dist(self.start) <= eps_len {
            return 0.0;
        }
        if p.dist(self.end) <= eps_len {
            return 1.0;
        }
        let (c_hat, n_hat, len) = self.chord_frame();
        let m = p - self.start;
        let u = m.dot(c_hat);
        let v = m.dot(n_hat);
        if self.bulge == 0.0 {
            return u / len;
        }
        let theta = self.sweep();
        if theta.abs() > 1.0 {
            // Inscribed angle at the start point maps the support once onto
            // (0, T).
            return 1.0 + 2.0 * v.atan2(u) / theta;
        }
        // Small sweeps leave the angle form ill-conditioned for points a
        // touch off the support; invert the chord coordinate instead. The
        // sine has two preimages on the circle, pick the closer one.
        let b = self.bulge;
        let arg = ((2.0 * u / len - 1.0) * (2.0 * b / (1.0 + b * b))).clamp(-1.0, 1.0);
        let psi = arg.asin();
        let near = 0.5 + psi / theta;
        let far = 0.5 + (std::f64::consts::PI.copysign(theta) - psi) / theta;
        if p.dist_sq(self.point_at(near)) <= p.dist_sq(self.point_at(far)) {
            near
        } else {
            far
        }
    }

    /// Whether support parameter `t` lies on the arc `[0, 1]` within `eps_t`.
    pub fn param_on_arc(&self, t: f64, eps_t: f64) -> bool {
        t >= -eps_t && t <= 1.0 + eps_t
    }

    /// Whether `p` lies on the arc itself (not just the support).
    pub fn on_arc(&self, p: Point, eps_len: f64) -> bool {
        if self.dist_to_support(p) > eps_len {
            return false;
        }
        let eps_t = eps_len / self.length().max(f64::MIN_POSITIVE);
        self.param_on_arc(self.param_of_point(p, eps_len), eps_t)
    }

    /// Parameter in `[0, 1]` of the arc point closest to `p`.
    pub fn closest_param(&self, p: Point, eps_len: f64) -> f64 {
        let (c_hat, _, len) = self.chord_frame();
        let t = if self.bulge.abs() < 1e-9 {
            // Chord projection; the support deviates from the chord by at
            // most len * |bulge| / 2 here.
            (p - self.start).dot(c_hat) / len
        } else {
            let c = self.center().unwrap();
            let d = p - c;
            if d.norm() <= eps_len {
                0.5
            } else {
                let q = c + d * (self.radius().unwrap() / d.norm());
                self.param_of_point(q, eps_len)
            }
        };
        if (0.0..=1.0).contains(&t) {
            t
        } else if p.dist_sq(self.start) <= p.dist_sq(self.end) {
            0.0
        } else {
            1.0
        }
    }

    /// Distance from `p` to the arc (endpoints included).
    pub fn dist_to_arc(&self, p: Point, eps_len: f64) -> f64 {
        let t = self.closest_param(p, eps_len);
        if t > 0.0 && t < 1.0 {
            self.dist_to_support(p)
        } else {
            p.dist(self.point_at(t))
        }
    }

    /// Arc from `a` through `m` to `b` (the unique circle or line through
    /// the three points, traversed in that order).
    pub fn arc_through(a: Point, m: Point, b: Point) -> Result<ArcSegment, GeomError> {
        counters::bump();
        let u = m - a;
        let v = b - m;
        let s = u.cross(v);
        let d = u.dot(v);
        let h = d.hypot(s);
        if h == 0.0 {
            return Err(GeomError::DegenerateSegment);
        }
        if s == 0.0 && d < 0.0 {
            return Err(GeomError::DegenerateThroughArc);
        }
        let bulge = if d >= 0.0 { s / (h + d) } else { (h - d) / s };
        ArcSegment::new(a, b, bulge)
    }

    /// Arc from `a` to `b` that starts in direction `tau`.
    pub fn arc_with_start_tangent(
        tau: Point,
        a: Point,
        b: Point,
    ) -> Result<ArcSegment, GeomError> {
        counters::bump();
        let chord = b - a;
        let s = tau.cross(chord);
        let d = tau.dot(chord);
        let h = d.hypot(s);
        if h == 0.0 {
            return Err(GeomError::DegenerateSegment);
        }
        if s == 0.0 && d < 0.0 {
            return Err(GeomError::DegenerateTangentArc);
        }
        let bulge = if d >= 0.0 { s / (h + d) } else { (h - d) / s };
        ArcSegment::new(a, b, bulge)
    }

    /// Arc from `a` to `b` that arrives in direction `tau`.
    pub fn arc_with_end_tangent(a: Point, b: Point, tau: Point) -> Result<ArcSegment, GeomError> {
        counters::bump();
        let chord = b - a;
        let s = chord.cross(tau);
        let d = chord.dot(tau);
        let h = d.hypot(s);
        if h == 0.0 {
            return Err(GeomError::DegenerateSegment);
        }
        if s == 0.0 && d < 0.0 {
            return Err(GeomError::DegenerateTangentArc);
        }
        let bulge = if d >= 0.0 { s / (h + d) } else { (h - d) / s };
        ArcSegment::new(a, b, bulge)
    }
}
