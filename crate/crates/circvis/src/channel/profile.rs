//! Winding bookkeeping of the boundary chain against a connecting arc.
//!
//! Every contact of a boundary segment with the arc contributes approach and
//! leave events with sides. Their running sum (approaches counted at the
//! contact, leaves after it) classifies each segment as neutral, a one-sided
//! restriction, or a violation that pokes through the arc.

use crate::config::GeomTolerances;
use crate::geom::side::contact_sides;
use crate::geom::{intersect, ArcSegment, CutKind, GeomError, Point, SideClass};

/// How contacts at segment endpoints are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMode {
    /// Boundary chain rules: an endpoint contact splits into an approach for
    /// the incoming segment and a leave for the outgoing one.
    Channel,
    /// Free curves: every contact carries both sides. Callers keep curve
    /// endpoints off the arc.
    Plain,
}

/// One contact of the probed segment with the arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaEvent {
    /// Parameter on the probed segment.
    pub t_seg: f64,
    /// Parameter of the contact on the arc.
    pub t_gamma: f64,
    pub point: Point,
    /// Side the segment comes from; `None` when absorbed by the previous
    /// segment's bookkeeping (contact at the segment start).
    pub approach: Option<SideClass>,
    /// Side the segment continues to; `None` at the segment end (the next
    /// segment owns it).
    pub leave: Option<SideClass>,
    /// Running sum at the contact point itself.
    pub delta_at: i32,
}

fn approach_contrib(side: Option<SideClass>) -> i32 {
    match side {
        Some(SideClass::StrictRight) => 1,
        Some(SideClass::StrictLeft) => -1,
        _ => 0,
    }
}

fn leave_contrib(side: Option<SideClass>) -> i32 {
    match side {
        Some(SideClass::StrictLeft) => 1,
        Some(SideClass::StrictRight) => -1,
        _ => 0,
    }
}

/// Profile of one boundary segment against a connecting arc.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentProfile {
    /// Running sum at the segment's start point.
    pub delta_start: i32,
    /// Total carried into the next segment's start.
    pub advance: i32,
    /// Extremes of the running sum over the closed segment.
    pub delta_min: i32,
    pub delta_max: i32,
    pub events: Vec<DeltaEvent>,
    /// How deep sub-pieces with sum <= -2 reach away from the arc, and a
    /// parameter where that depth is attained.
    pub pen_left: f64,
    pub pen_left_t: f64,
    /// Same for sub-pieces with sum >= 2.
    pub pen_right: f64,
    pub pen_right_t: f64,
}

impl SegmentProfile {
    /// Running sum at the segment's end point.
    pub fn delta_end(&self) -> i32 {
        self.delta_start + self.advance
    }

    /// Reaches below -1 and actually leaves the arc's neighborhood.
    pub fn violation_left(&self, d_tol: f64) -> bool {
        self.delta_min < -1 && self.pen_left > d_tol
    }

    /// Reaches above 1 and actually leaves the arc's neighborhood.
    pub fn violation_right(&self, d_tol: f64) -> bool {
        self.delta_max > 1 && self.pen_right > d_tol
    }

    pub fn restriction_left(&self) -> bool {
        self.delta_min == -1 && self.delta_max <= 0
    }

    pub fn restriction_right(&self) -> bool {
        self.delta_max == 1 && self.delta_min >= 0
    }

    /// Contact points whose running sum is exactly the one-sided value;
    /// these are the candidate entries of alternating sequences.
    pub fn restriction_points(&self) -> impl Iterator<Item = (&DeltaEvent, SideClass)> {
        self.events.iter().filter_map(|e| match e.delta_at {
            -1 => Some((e, SideClass::StrictLeft)),
            1 => Some((e, SideClass::StrictRight)),
            _ => None,
        })
    }
}

/// Builds the profile of `seg` against `gamma` given the running sum at the
/// segment start. Fails when the segment rides the arc's support.
pub fn segment_profile(
    gamma: &ArcSegment,
    seg: &ArcSegment,
    delta_start: i32,
    mode: ProfileMode,
    tol: &GeomTolerances,
    scale: f64,
) -> Result<SegmentProfile, GeomError> {
    let eps_len = tol.eps_rel * scale;
    let eps_curv = tol.eps_rel / scale;
    let mut events: Vec<DeltaEvent> = Vec::new();

    let start_contact =
        mode == ProfileMode::Channel && gamma.on_arc(seg.start, eps_len);
    let end_contact = mode == ProfileMode::Channel && gamma.on_arc(seg.end, eps_len);

    if start_contact {
        let cs = contact_sides(
            gamma,
            seg.start,
            seg.tangent_at(0.0),
            seg.curvature(),
            tol.eps_angle,
            eps_curv,
        );
        if cs.after == SideClass::On {
            return Err(GeomError::OverlapError);
        }
        events.push(DeltaEvent {
            t_seg: 0.0,
            t_gamma: gamma.param_of_point(seg.start, eps_len),
            point: seg.start,
            approach: None,
            leave: Some(cs.after),
            delta_at: 0,
        });
    }

    let raw = intersect(seg, gamma, tol, scale)?;
    for e in raw {
        let near_start = e.point.dist(seg.start) <= if start_contact { 4.0 * eps_len } else { eps_len };
        let near_end = e.point.dist(seg.end) <= if end_contact { 4.0 * eps_len } else { eps_len };
        if mode == ProfileMode::Channel && (near_start || near_end) {
            continue;
        }
        let (before, after) = match e.kind {
            CutKind::CrossFromLeft => (SideClass::StrictLeft, SideClass::StrictRight),
            CutKind::CrossFromRight => (SideClass::StrictRight, SideClass::StrictLeft),
            CutKind::TouchLeft => (SideClass::StrictLeft, SideClass::StrictLeft),
            CutKind::TouchRight => (SideClass::StrictRight, SideClass::StrictRight),
        };
        events.push(DeltaEvent {
            t_seg: e.t_self,
            t_gamma: e.t_other,
            point: e.point,
            approach: Some(before),
            leave: Some(after),
            delta_at: 0,
        });
    }

    if end_contact {
        let cs = contact_sides(
            gamma,
            seg.end,
            seg.tangent_at(1.0),
            seg.curvature(),
            tol.eps_angle,
            eps_curv,
        );
        if cs.before == SideClass::On {
            return Err(GeomError::OverlapError);
        }
        events.push(DeltaEvent {
            t_seg: 1.0,
            t_gamma: gamma.param_of_point(seg.end, eps_len),
            point: seg.end,
            approach: Some(cs.before),
            leave: None,
            delta_at: 0,
        });
    }

    events.sort_by(|a, b| a.t_seg.total_cmp(&b.t_seg));

    // Walk the events: the sum at a contact includes its approach, the leave
    // applies on the open interval after it.
    let mut running = delta_start;
    let mut delta_min = delta_start;
    let mut delta_max = delta_start;
    let mut left_pieces: Vec<(f64, f64)> = Vec::new();
    let mut right_pieces: Vec<(f64, f64)> = Vec::new();
    for i in 0..events.len() {
        let at_point = running + approach_contrib(events[i].approach);
        events[i].delta_at = at_point;
        delta_min = delta_min.min(at_point);
        delta_max = delta_max.max(at_point);
        running = at_point + leave_contrib(events[i].leave);
        let interval_end = if i + 1 < events.len() {
            events[i + 1].t_seg
        } else {
            1.0
        };
        if events[i].t_seg < interval_end {
            delta_min = delta_min.min(running);
            delta_max = delta_max.max(running);
            if running <= -2 {
                left_pieces.push((events[i].t_seg, interval_end));
            }
            if running >= 2 {
                right_pieces.push((events[i].t_seg, interval_end));
            }
        }
    }
    if delta_start <= -2 && (events.is_empty() || events[0].t_seg > 0.0) {
        left_pieces.push((0.0, events.first().map_or(1.0, |e| e.t_seg)));
    }
    if delta_start >= 2 && (events.is_empty() || events[0].t_seg > 0.0) {
        right_pieces.push((0.0, events.first().map_or(1.0, |e| e.t_seg)));
    }

    let advance = running - delta_start;
    let (pen_left, pen_left_t) = deepest_excursion(seg, &left_pieces, gamma, eps_len);
    let (pen_right, pen_right_t) = deepest_excursion(seg, &right_pieces, gamma, eps_len);

    Ok(SegmentProfile {
        delta_start,
        advance,
        delta_min,
        delta_max,
        events,
        pen_left,
        pen_left_t,
        pen_right,
        pen_right_t,
    })
}

/// Profiles of every boundary segment in order, threading the running sum,
/// with the chain-start rule: the sum opens at 1 when the chain starts on
/// the arc.
pub fn chain_profiles(
    gamma: &ArcSegment,
    chain: &[ArcSegment],
    tol: &GeomTolerances,
    scale: f64,
) -> Result<Vec<SegmentProfile>, GeomError> {
    let eps_len = tol.eps_rel * scale;
    let mut delta = if gamma.on_arc(chain[0].start, eps_len) {
        1
    } else {
        0
    };
    let mut out = Vec::with_capacity(chain.len());
    for seg in chain {
        let p = segment_profile(gamma, seg, delta, ProfileMode::Channel, tol, scale)?;
        delta = p.delta_end();
        out.push(p);
    }
    Ok(out)
}

/// Largest distance from the listed parameter ranges of `seg` to the arc.
fn deepest_excursion(
    seg: &ArcSegment,
    pieces: &[(f64, f64)],
    gamma: &ArcSegment,
    eps_len: f64,
) -> (f64, f64) {
    let mut best = (0.0f64, 0.0f64);
    for &(ta, tb) in pieces {
        let (d, t) = max_dist_on_range(seg, ta, tb, gamma, eps_len);
        if d > best.0 {
            best = (d, t);
        }
    }
    best
}

/// Maximum of the distance from `seg` (restricted to `[ta, tb]`) to the arc
/// `gamma`, via the finitely many stationary candidates.
fn max_dist_on_range(
    seg: &ArcSegment,
    ta: f64,
    tb: f64,
    gamma: &ArcSegment,
    eps_len: f64,
) -> (f64, f64) {
    let mut cands = vec![ta, tb, 0.5 * (ta + tb)];
    let curved = seg.bulge.abs() >= 1e-9;
    // Stationary points of the distance to a fixed point lie where the
    // segment's support meets the line through that point (and the center).
    fn toward(cands: &mut Vec<f64>, seg: &ArcSegment, target: Point, eps_len: f64) {
        if seg.bulge.abs() >= 1e-9 {
            let c = seg.center().unwrap();
            let r = seg.radius().unwrap();
            if let Some(d) = (target - c).normalized(1e-300) {
                cands.push(seg.param_of_point(c + d * r, eps_len));
                cands.push(seg.param_of_point(c - d * r, eps_len));
            }
        } else {
            let chord = seg.chord();
            let t = (target - seg.start).dot(chord) / chord.norm_sq();
            cands.push(t);
        }
    }
    if gamma.bulge.abs() >= 1e-9 {
        toward(&mut cands, seg, gamma.center().unwrap(), eps_len);
    } else if curved {
        // Against a straight support the extremes sit where the tangent is
        // parallel to it.
        let c = seg.center().unwrap();
        let r = seg.radius().unwrap();
        let n = gamma.chord().perp();
        if let Some(n) = n.normalized(1e-300) {
            cands.push(seg.param_of_point(c + n * r, eps_len));
            cands.push(seg.param_of_point(c - n * r, eps_len));
        }
    }
    toward(&mut cands, seg, gamma.start, eps_len);
    toward(&mut cands, seg, gamma.end, eps_len);
    let mut best = (0.0f64, ta);
    for t in cands {
        if !(ta..=tb).contains(&t) {
            continue;
        }
        let d = gamma.dist_to_arc(seg.point_at(t), eps_len);
        if d > best.0 {
            best = (d, t);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tols() -> GeomTolerances {
        GeomTolerances::default()
    }

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn seg(a: Point, b: Point) -> ArcSegment {
        ArcSegment::segment(a, b).unwrap()
    }

    /// Unit square walls: right, top, left.
    fn square_chain() -> Vec<ArcSegment> {
        vec![
            seg(pt(1.0, 0.0), pt(1.0, 1.0)),
            seg(pt(1.0, 1.0), pt(0.0, 1.0)),
            seg(pt(0.0, 1.0), pt(0.0, 0.0)),
        ]
    }

    /// Clockwise three-quarter circle from the square's start corner to its
    /// center: leaves (0, 0) backwards, swings outside the left wall.
    fn low_connector() -> ArcSegment {
        let b = -(3.0 * std::f64::consts::PI / 8.0).tan();
        ArcSegment::new(pt(0.0, 0.0), pt(0.5, 0.5), b).unwrap()
    }

    /// Counter-clockwise three-quarter circle from the square's end corner
    /// to its center: leaves (1, 0) forwards, swings outside the right wall.
    fn high_connector() -> ArcSegment {
        let b = (3.0 * std::f64::consts::PI / 8.0).tan();
        ArcSegment::new(pt(1.0, 0.0), pt(0.5, 0.5), b).unwrap()
    }

    #[test]
    fn low_connector_geometry_is_the_expected_circle() {
        let g = low_connector();
        assert!(g.center().unwrap().dist(pt(0.0, 0.5)) < 1e-12);
        assert!((g.radius().unwrap() - 0.5).abs() < 1e-12);
        assert!(g.tangent_at(0.0).dist(pt(-1.0, 0.0)) < 1e-12);
        assert!(g.on_arc(pt(0.0, 1.0), 1e-9));
        assert!(g.on_arc(pt(-0.5, 0.5), 1e-9));
    }

    #[test]
    fn square_profiles_against_low_connector() {
        let g = low_connector();
        let profiles = chain_profiles(&g, &square_chain(), &tols(), 2.0).unwrap();
        // Right wall: never touched.
        assert_eq!(profiles[0].delta_start, 0);
        assert_eq!(profiles[0].advance, 0);
        assert_eq!((profiles[0].delta_min, profiles[0].delta_max), (0, 0));
        // Top wall: grazed at the far corner, an approach from the left.
        assert_eq!(profiles[1].delta_start, 0);
        assert_eq!(profiles[1].advance, -1);
        assert_eq!((profiles[1].delta_min, profiles[1].delta_max), (-1, 0));
        assert!(profiles[1].restriction_left());
        assert_eq!(profiles[1].events.len(), 1);
        let bp = &profiles[1].events[0];
        assert_eq!(bp.approach, Some(SideClass::StrictLeft));
        assert_eq!(bp.leave, None);
        assert!((bp.t_gamma - 2.0 / 3.0).abs() < 1e-9);
        // Left wall: dips to -2 between the corner and the chain end.
        assert_eq!(profiles[2].delta_start, -1);
        assert_eq!((profiles[2].delta_min, profiles[2].delta_max), (-2, -1));
        assert_eq!(profiles[2].advance, 0);
        assert!(profiles[2].violation_left(1e-6));
        assert!((profiles[2].pen_left - 0.5).abs() < 1e-7);
        assert!(!profiles[2].restriction_left());
        // Chain ends on the arc.
        assert_eq!(profiles[2].delta_end(), -1);
    }

    #[test]
    fn square_profiles_against_high_connector() {
        let g = high_connector();
        let profiles = chain_profiles(&g, &square_chain(), &tols(), 2.0).unwrap();
        // Right wall: chain starts on the arc, rises to 2, pierced.
        assert_eq!(profiles[0].delta_start, 1);
        assert_eq!(profiles[0].advance, 0);
        assert_eq!((profiles[0].delta_min, profiles[0].delta_max), (1, 2));
        assert!(profiles[0].violation_right(1e-6));
        assert!((profiles[0].pen_right - 0.5).abs() < 1e-7);
        // Top wall: tangential graze at its start corner only.
        assert_eq!(profiles[1].delta_start, 1);
        assert_eq!(profiles[1].advance, -1);
        assert_eq!((profiles[1].delta_min, profiles[1].delta_max), (0, 1));
        assert!(profiles[1].restriction_right());
        // Left wall: untouched, chain ends off the arc.
        assert_eq!(profiles[2].delta_start, 0);
        assert_eq!(profiles[2].advance, 0);
        assert_eq!(profiles[2].delta_end(), 0);
    }

    #[test]
    fn plain_mode_counts_a_plain_crossing_once() {
        let g = seg(pt(-1.0, 0.5), pt(2.0, 0.5));
        let wall = seg(pt(0.5, -0.5), pt(0.5, 1.5));
        let p = segment_profile(&g, &wall, 0, ProfileMode::Plain, &tols(), 3.0).unwrap();
        assert_eq!(p.events.len(), 1);
        // Rising through a rightward curve: comes from its right side.
        assert_eq!(p.events[0].approach, Some(SideClass::StrictRight));
        assert_eq!(p.events[0].leave, Some(SideClass::StrictLeft));
        assert_eq!(p.advance, 2);
        assert_eq!((p.delta_min, p.delta_max), (0, 2));
        assert_eq!(p.events[0].delta_at, 1);
    }

    #[test]
    fn riding_the_arc_support_is_rejected() {
        let g = ArcSegment::new(pt(0.0, 0.0), pt(2.0, 0.0), 1.0).unwrap();
        let rider = g.sub_arc(0.25, 0.75).unwrap();
        let r = segment_profile(&g, &rider, 0, ProfileMode::Channel, &tols(), 2.0);
        assert_eq!(r, Err(GeomError::OverlapError));
    }

    #[test]
    fn touch_contact_keeps_the_sum_even_off_the_point() {
        // Circle tangent to the probe from its left side.
        let g = ArcSegment::from_center_angles(pt(0.5, 0.6), 0.6, -2.8, 5.2).unwrap();
        let wall = seg(pt(0.0, 0.0), pt(1.0, 0.0));
        let p = segment_profile(&g, &wall, 0, ProfileMode::Plain, &tols(), 2.0).unwrap();
        assert_eq!(p.events.len(), 1);
        assert_eq!(p.events[0].delta_at.abs(), 1);
        assert_eq!(p.advance, 0);
    }
}
