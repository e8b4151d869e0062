//! The family of connecting arcs from the start arc to the query point, and
//! its total order.
//!
//! A connecting arc starts on the start arc, leaves it into the channel's
//! side, and ends at the query point. Arcs are ordered by where they start
//! and, between equal starts, by how sharply they turn back; cut tests
//! resolve the pairs whose start order alone does not decide.

use std::cmp::Ordering;

use thiserror::Error;

use crate::config::GeomTolerances;
use crate::geom::side::contact_sides;
use crate::geom::{intersect, ArcSegment, CutKind, GeomError, Point, SideClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OrderError {
    /// The two arcs do not belong to the same start arc and query point.
    #[error("arcs belong to different visibility queries")]
    MixedQuery,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// How a connecting arc is attached to the start arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCase {
    /// Starts strictly inside the start arc.
    InteriorStart,
    /// Starts at the start arc's first endpoint.
    StartAtSigma0,
    /// Starts at the start arc's second endpoint.
    StartAtSigma1,
    /// One of the two extremal arcs closing the family.
    ClosureExtremal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectingArc {
    pub arc: ArcSegment,
    /// Parameter of the arc's start on the start arc.
    pub t_sigma: f64,
    pub boundary_case: BoundaryCase,
}

/// Shared context of one visibility query's order comparisons.
#[derive(Debug, Clone, Copy)]
pub struct OrderContext {
    pub sigma: ArcSegment,
    pub p: Point,
    /// Query point strictly on the right of the start arc's support; the
    /// endpoint cut extensions apply only here.
    pub right_side: bool,
    pub tol: GeomTolerances,
    pub scale: f64,
}

impl OrderContext {
    pub fn new(sigma: &ArcSegment, p: Point, tol: &GeomTolerances, scale: f64) -> OrderContext {
        let right_side =
            sigma.side_of_support(p, tol.eps_rel * scale) == SideClass::StrictRight;
        OrderContext {
            sigma: *sigma,
            p,
            right_side,
            tol: *tol,
            scale,
        }
    }

    fn eps_len(&self) -> f64 {
        self.tol.eps_rel * self.scale
    }

    /// Builds a connecting arc record, classifying its attachment.
    pub fn attach(&self, arc: ArcSegment) -> Result<ConnectingArc, OrderError> {
        let eps = self.eps_len();
        if arc.end.dist(self.p) > eps || !self.sigma.on_arc(arc.start, eps) {
            return Err(OrderError::MixedQuery);
        }
        let t_sigma = self.sigma.param_of_point(arc.start, eps);
        let eps_t = eps / self.sigma.length();
        let boundary_case = if t_sigma <= eps_t {
            BoundaryCase::StartAtSigma0
        } else if t_sigma >= 1.0 - eps_t {
            BoundaryCase::StartAtSigma1
        } else {
            BoundaryCase::InteriorStart
        };
        Ok(ConnectingArc {
            arc,
            t_sigma,
            boundary_case,
        })
    }

    /// Parameters on `a` where `a` cuts `b` coming from `b`'s left side.
    ///
    /// Contacts at the shared query endpoint count only when the arcs
    /// arrive tangentially, decided by curvature; when the query point lies
    /// right of the start arc, an arc starting on the other one counts as a
    /// cut at the start point.
    pub fn cut_from_left(
        &self,
        a: &ConnectingArc,
        b: &ConnectingArc,
    ) -> Result<Vec<f64>, GeomError> {
        let eps = self.eps_len();
        if self.right_side {
            if b.arc.on_arc(a.arc.start, eps) {
                return Ok(vec![0.0]);
            }
            if a.arc.on_arc(b.arc.start, eps) {
                return Ok(vec![a.arc.param_of_point(b.arc.start, eps)]);
            }
        }
        let events = match intersect(&a.arc, &b.arc, &self.tol, self.scale) {
            Ok(ev) => ev,
            // Arcs riding one support never change sides: no cuts.
            Err(GeomError::OverlapError) => Vec::new(),
            Err(e) => return Err(e),
        };
        let eps_t_a = eps / a.arc.length();
        let eps_t_b = eps / b.arc.length();
        let mut cuts: Vec<f64> = events
            .iter()
            .filter(|e| {
                e.kind == CutKind::CrossFromLeft
                    && e.t_self < 1.0 - eps_t_a
                    && e.t_other < 1.0 - eps_t_b
            })
            .map(|e| e.t_self)
            .collect();
        // Tangential arrival at the query point: `a` cuts `b` there exactly
        // when `b` comes in on `a`'s right side.
        let d1 = a.arc.tangent_at(1.0);
        let d2 = b.arc.tangent_at(1.0);
        if d1.cross(d2).abs() <= self.tol.eps_angle && d1.dot(d2) > 0.0 {
            let cs = contact_sides(
                &a.arc,
                self.p,
                d2,
                b.arc.curvature(),
                self.tol.eps_angle,
                self.tol.eps_rel / self.scale,
            );
            if cs.before == SideClass::StrictRight {
                cuts.push(1.0);
            }
        }
        Ok(cuts)
    }

    /// Total order of the connecting-arc family.
    pub fn compare(&self, a: &ConnectingArc, b: &ConnectingArc) -> Result<Ordering, OrderError> {
        let eps = self.eps_len();
        if a.arc.end.dist(self.p) > eps || b.arc.end.dist(self.p) > eps {
            return Err(OrderError::MixedQuery);
        }
        let eps_t = eps / self.sigma.length();
        if (a.t_sigma - b.t_sigma).abs() <= eps_t
            || a.arc.start.dist(b.arc.start) <= eps
        {
            return Ok(self.compare_fan(a, b));
        }
        let (first, second, flipped) = if a.t_sigma < b.t_sigma {
            (a, b, false)
        } else {
            (b, a, true)
        };
        let cuts = self.cut_from_left(first, second)?;
        let ord = if cuts.is_empty() {
            Ordering::Less
        } else {
            Ordering::Greater
        };
        Ok(if flipped { ord.reverse() } else { ord })
    }

    /// Order of two arcs leaving the same start point: the one turned
    /// further backward comes first.
    fn compare_fan(&self, a: &ConnectingArc, b: &ConnectingArc) -> Ordering {
        let t_star = (0.5 * (a.t_sigma + b.t_sigma)).clamp(0.0, 1.0);
        let fwd = self.sigma.tangent_at(t_star);
        let ba = departure_angle(fwd, a.arc.tangent_at(0.0));
        let bb = departure_angle(fwd, b.arc.tangent_at(0.0));
        if (ba - bb).abs() <= self.tol.eps_angle {
            Ordering::Equal
        } else if ba > bb {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Samples the family member leaving `sigma(t_star)` at angle `beta`
    /// (measured into the left half-plane); `None` when no valid arc exists
    /// there.
    pub fn connecting_arc_at(&self, t_star: f64, beta: f64) -> Option<ConnectingArc> {
        let start = self.sigma.point_at(t_star);
        let dir = self.sigma.tangent_at(t_star).rotated(beta);
        let arc = ArcSegment::arc_with_start_tangent(dir, start, self.p).ok()?;
        if !self.is_valid_connecting(&arc) {
            return None;
        }
        Some(ConnectingArc {
            arc,
            t_sigma: t_star,
            boundary_case: BoundaryCase::InteriorStart,
        })
    }

    /// Whether `arc` qualifies as a connecting arc: starts on the start
    /// arc, ends at the query point, departs into the left half-plane, and
    /// touches the start arc nowhere else (its endpoints excepted).
    pub fn is_valid_connecting(&self, arc: &ArcSegment) -> bool {
        let eps = self.eps_len();
        if arc.end.dist(self.p) > eps || !self.sigma.on_arc(arc.start, eps) {
            return false;
        }
        let t_star = self.sigma.param_of_point(arc.start, eps);
        let fwd = self.sigma.tangent_at(t_star);
        if fwd.cross(arc.tangent_at(0.0)) < -self.tol.eps_angle {
            return false;
        }
        let events = match intersect(arc, &self.sigma, &self.tol, self.scale) {
            Ok(ev) => ev,
            Err(_) => return false,
        };
        events.iter().all(|e| {
            e.point.dist(arc.start) <= eps
                || e.point.dist(self.sigma.start) <= eps
                || e.point.dist(self.sigma.end) <= eps
        })
    }

    /// The least and greatest connecting arcs. When the exact extremal arc
    /// degenerates or outgrows `cap`, the closest arc of radius `cap` is
    /// substituted.
    pub fn extremal_arcs(&self, cap: f64) -> Result<(ConnectingArc, ConnectingArc), GeomError> {
        let sg = &self.sigma;
        let (min_raw, min_start, min_dir, max_raw, max_start, max_dir);
        if self.right_side {
            max_start = sg.start;
            max_dir = (sg.end - sg.start).normalized(0.0).unwrap_or(sg.tangent_at(0.0));
            max_raw = ArcSegment::arc_through(sg.start, sg.end, self.p);
            min_start = sg.end;
            min_dir = (sg.start - sg.end).normalized(0.0).unwrap_or(-sg.tangent_at(1.0));
            min_raw = ArcSegment::arc_through(sg.end, sg.start, self.p);
        } else {
            max_start = sg.end;
            max_dir = sg.tangent_at(1.0);
            max_raw = ArcSegment::arc_with_start_tangent(max_dir, max_start, self.p);
            min_start = sg.start;
            min_dir = -sg.tangent_at(0.0);
            min_raw = ArcSegment::arc_with_start_tangent(min_dir, min_start, self.p);
        }
        let eps = self.eps_len();
        let settle = |raw: Result<ArcSegment, GeomError>,
                      start: Point,
                      dir: Point|
         -> Result<ArcSegment, GeomError> {
            match raw {
                // Straight arcs are exact and stay; only oversized circles
                // get replaced.
                Ok(arc) if arc.radius().map_or(true, |r| r <= cap) => Ok(arc),
                _ => {
                    let ranked = capped_arcs(start, dir, self.p, cap, eps)?;
                    Ok(ranked
                        .iter()
                        .find(|arc| self.is_valid_connecting(arc))
                        .copied()
                        .unwrap_or(ranked[0]))
                }
            }
        };
        let min_arc = settle(min_raw, min_start, min_dir)?;
        let max_arc = settle(max_raw, max_start, max_dir)?;
        let wrap = |arc: ArcSegment, t_sigma: f64| ConnectingArc {
            arc,
            t_sigma,
            boundary_case: BoundaryCase::ClosureExtremal,
        };
        let (t_min, t_max) = if self.right_side { (1.0, 0.0) } else { (0.0, 1.0) };
        Ok((wrap(min_arc, t_min), wrap(max_arc, t_max)))
    }
}

/// Angle of `d` measured from `fwd` into the left half-plane, in `[0, pi]`.
fn departure_angle(fwd: Point, d: Point) -> f64 {
    let a = fwd.cross(d).atan2(fwd.dot(d));
    if a >= 0.0 {
        a
    } else if a < -std::f64::consts::FRAC_PI_2 {
        std::f64::consts::PI
    } else {
        0.0
    }
}

/// The arcs of radius `cap` from `start` to `p`, ranked by how well their
/// start tangent aligns with `dir`.
fn capped_arcs(
    start: Point,
    dir: Point,
    p: Point,
    cap: f64,
    eps_len: f64,
) -> Result<Vec<ArcSegment>, GeomError> {
    let d = start.dist(p);
    if d <= eps_len || d > 2.0 * cap {
        return Err(GeomError::DegenerateSegment);
    }
    let half = (d / (2.0 * cap)).clamp(-1.0, 1.0).asin();
    let minor = (0.5 * half).tan();
    let major = (0.5 * (std::f64::consts::PI - half)).tan();
    let mut ranked: Vec<(f64, ArcSegment)> = [minor, -minor, major, -major]
        .iter()
        .filter_map(|&b| ArcSegment::new(start, p, b).ok())
        .map(|arc| (arc.tangent_at(0.0).dot(dir), arc))
        .collect();
    if ranked.is_empty() {
        return Err(GeomError::DegenerateSegment);
    }
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
    Ok(ranked.into_iter().map(|(_, arc)| arc).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn ctx(p: Point) -> OrderContext {
        let sigma = ArcSegment::segment(pt(0.0, 0.0), pt(1.0, 0.0)).unwrap();
        OrderContext::new(&sigma, p, &GeomTolerances::default(), 2.0)
    }

    #[test]
    fn extremal_arcs_left_of_a_straight_start() {
        let c = ctx(pt(0.5, 0.5));
        assert!(!c.right_side);
        let (min, max) = c.extremal_arcs(8.0).unwrap();
        assert!(max.arc.center().unwrap().dist(pt(1.0, 0.5)) < TOL);
        assert!((max.arc.radius().unwrap() - 0.5).abs() < TOL);
        assert!((max.arc.bulge - 2.414_213_562_373_095).abs() < 1e-12);
        assert!(min.arc.center().unwrap().dist(pt(0.0, 0.5)) < TOL);
        assert!((min.arc.bulge + 2.414_213_562_373_095).abs() < 1e-12);
        assert_eq!(c.compare(&min, &max).unwrap(), Ordering::Less);
        assert_eq!(c.compare(&max, &min).unwrap(), Ordering::Greater);
    }

    #[test]
    fn extremal_arcs_right_of_a_straight_start() {
        let c = ctx(pt(0.5, -0.5));
        assert!(c.right_side);
        let (min, max) = c.extremal_arcs(8.0).unwrap();
        // Both wrap over the top on the circle through the start arc's
        // endpoints and the query point.
        assert!(min.arc.center().unwrap().dist(pt(0.5, 0.0)) < TOL);
        assert!(max.arc.center().unwrap().dist(pt(0.5, 0.0)) < TOL);
        assert!((min.arc.bulge - 2.414_213_562_373_095).abs() < 1e-12);
        assert!((max.arc.bulge + 2.414_213_562_373_095).abs() < 1e-12);
        assert!(min.arc.start.dist(pt(1.0, 0.0)) < TOL);
        assert!(max.arc.start.dist(pt(0.0, 0.0)) < TOL);
        // Same support: the endpoint rules decide.
        assert_eq!(c.compare(&min, &max).unwrap(), Ordering::Less);
        assert_eq!(c.compare(&max, &min).unwrap(), Ordering::Greater);
    }

    #[test]
    fn interior_starts_order_by_start_point() {
        let c = ctx(pt(0.5, 0.5));
        let g1 = c.connecting_arc_at(0.3, 1.9).unwrap();
        let g2 = c.connecting_arc_at(0.7, 1.9).unwrap();
        assert_eq!(c.compare(&g1, &g2).unwrap(), Ordering::Less);
        assert_eq!(c.compare(&g2, &g1).unwrap(), Ordering::Greater);
    }

    #[test]
    fn extremal_arcs_bound_sampled_family_members() {
        let c = ctx(pt(0.5, 0.5));
        let (min, max) = c.extremal_arcs(8.0).unwrap();
        for i in 1..8 {
            for j in 1..8 {
                let t = i as f64 / 8.0;
                let beta = j as f64 * std::f64::consts::PI / 8.0;
                if let Some(g) = c.connecting_arc_at(t, beta) {
                    assert_eq!(c.compare(&min, &g).unwrap(), Ordering::Less);
                    assert_eq!(c.compare(&g, &max).unwrap(), Ordering::Less);
                }
            }
        }
    }

    #[test]
    fn extremal_arcs_bound_the_family_right_of_the_start() {
        let c = ctx(pt(0.5, -0.5));
        let (min, max) = c.extremal_arcs(8.0).unwrap();
        for (t, beta) in [(0.25, 2.8), (0.5, 2.9), (0.75, 0.4), (0.5, 0.3)] {
            if let Some(g) = c.connecting_arc_at(t, beta) {
                assert_eq!(c.compare(&min, &g).unwrap(), Ordering::Less, "min vs {t},{beta}");
                assert_eq!(c.compare(&g, &max).unwrap(), Ordering::Less, "max vs {t},{beta}");
            }
        }
    }

    #[test]
    fn fan_at_a_shared_start_orders_by_backward_angle() {
        let c = ctx(pt(0.5, 0.5));
        let steep = c.connecting_arc_at(0.5, 2.6).unwrap();
        let shallow = c.connecting_arc_at(0.5, 0.6).unwrap();
        assert_eq!(c.compare(&steep, &shallow).unwrap(), Ordering::Less);
        assert_eq!(c.compare(&shallow, &steep).unwrap(), Ordering::Greater);
        assert_eq!(c.compare(&steep, &steep).unwrap(), Ordering::Equal);
    }

    #[test]
    fn crossing_arc_orders_after_the_one_it_cuts() {
        let c = ctx(pt(0.5, 0.5));
        // Leaves early but swings far forward over the later start.
        let swinger = c.connecting_arc_at(0.1, 0.3).unwrap();
        let direct = c.connecting_arc_at(0.9, 1.4).unwrap();
        let cuts = c.cut_from_left(&swinger, &direct).unwrap();
        if !cuts.is_empty() {
            assert_eq!(c.compare(&swinger, &direct).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn mixed_query_is_rejected() {
        let c = ctx(pt(0.5, 0.5));
        let g = c.connecting_arc_at(0.5, 1.5).unwrap();
        let other = ctx(pt(0.4, 0.8));
        let h = other.connecting_arc_at(0.5, 1.5).unwrap();
        assert_eq!(c.compare(&g, &h), Err(OrderError::MixedQuery));
    }

    #[test]
    fn capped_substitute_kicks_in_when_the_tangent_arc_degenerates() {
        // Query point dead ahead of the end tangent: the greatest arc is the
        // straight continuation and stays exact, while the least arc (whose
        // ideal start tangent points away from the query point) falls back
        // to the capped radius, still leaving to the channel side.
        let sigma = ArcSegment::segment(pt(0.0, 0.0), pt(1.0, 0.0)).unwrap();
        let c = OrderContext::new(&sigma, pt(2.0, 0.0), &GeomTolerances::default(), 2.0);
        let (min, max) = c.extremal_arcs(4.0).unwrap();
        assert_eq!(max.arc.bulge, 0.0);
        assert!(max.arc.start.dist(pt(1.0, 0.0)) < TOL);
        assert!((min.arc.radius().unwrap() - 4.0).abs() < 1e-6);
        assert!(min.arc.tangent_at(0.0).dot(pt(-1.0, 0.0)) > 0.9);
        assert!(pt(1.0, 0.0).cross(min.arc.tangent_at(0.0)) > 0.0);
    }

    #[test]
    fn sampler_rejects_arcs_that_reenter_the_start_arc() {
        let c = ctx(pt(0.5, -0.5));
        // A quarter-turn departure from the first endpoint curls back down
        // through the start arc's interior.
        assert!(c.connecting_arc_at(0.0, std::f64::consts::FRAC_PI_4).is_none());
    }
}
