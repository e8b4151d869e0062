use super::arc::ArcSegment;
use super::point::Point;
use super::side::{contact_sides, same_support, SideClass};
use super::{counters, GeomError};
use crate::config::GeomTolerances;

/// How one curve passes through another at an intersection, seen from the
/// moving curve (`self` cuts `other`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutKind {
    /// Comes from the left side, continues on the right.
    CrossFromLeft,
    /// Comes from the right side, continues on the left.
    CrossFromRight,
    /// Touches and stays on the left side.
    TouchLeft,
    /// Touches and stays on the right side.
    TouchRight,
}

/// One intersection of two arcs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutEvent {
    /// Parameter on the first arc.
    pub t_self: f64,
    /// Parameter on the second arc.
    pub t_other: f64,
    pub point: Point,
    /// Classification from the first arc's perspective.
    pub kind: CutKind,
}

fn classify(kind_sides: (SideClass, SideClass)) -> Option<CutKind> {
    match kind_sides {
        (SideClass::StrictLeft, SideClass::StrictRight) => Some(CutKind::CrossFromLeft),
        (SideClass::StrictRight, SideClass::StrictLeft) => Some(CutKind::CrossFromRight),
        (SideClass::StrictLeft, SideClass::StrictLeft) => Some(CutKind::TouchLeft),
        (SideClass::StrictRight, SideClass::StrictRight) => Some(CutKind::TouchRight),
        _ => None,
    }
}

/// Intersection points of the two support curves, as world points. Inputs
/// must not share a support.
pub fn support_intersections(
    a: &ArcSegment,
    b: &ArcSegment,
    tol: &GeomTolerances,
    scale: f64,
) -> Result<Vec<Point>, GeomError> {
    counters::bump();
    let eps_len = tol.eps_rel * scale;
    if same_support(a, b, eps_len) {
        return Err(GeomError::OverlapError);
    }
    // Work with the conic of the more curved arc as the quadratic and reduce
    // the other to the radical line; anchor everything at that arc's start.
    let (s1, s2) = if a.conic_alpha().abs() >= b.conic_alpha().abs() {
        (a, b)
    } else {
        (b, a)
    };
    let a1 = s1.conic_alpha();
    let a2 = s2.conic_alpha();
    let w1 = s1.conic_w();
    let w2 = s2.conic_w();
    let delta = s1.start - s2.start;

    if a1.abs() * scale <= tol.eps_bulge {
        // Two straight lines.
        let n1 = w1 * 0.5;
        let n2 = w2 * 0.5;
        let det = n1.cross(n2);
        if det.abs() <= tol.eps_angle {
            return Ok(Vec::new());
        }
        // Solve <n1, m> = 0, <n2, m> = <n2, -delta> for m = p - s1.start.
        let rhs = n2.dot(-delta);
        let m = Point::new(n2.y * 0.0 - n1.y * rhs, n1.x * rhs - n2.x * 0.0) / det;
        return Ok(vec![s1.start + m]);
    }

    // Radical line alpha2 * g1 - alpha1 * g2 = <u, m> + k, m = p - s1.start.
    let u = w2 * a1 - w1 * a2 - delta * (2.0 * a1 * a2);
    let k = -a1 * (a2 * delta.norm_sq() - w2.dot(delta));
    let u_norm = u.norm();
    if u_norm * scale <= tol.eps_bulge * (a1.abs() * scale + 1.0) {
        // Concentric circles or parallel leftovers: no common point.
        return Ok(Vec::new());
    }
    let m0 = u * (-k / (u_norm * u_norm));
    let d_hat = u.perp() / u_norm;
    // Substitute m = m0 + s * d_hat into g1; <m0, d_hat> = 0.
    let qa = a1;
    let qb = -w1.dot(d_hat);
    let qc = a1 * m0.norm_sq() - w1.dot(m0);
    let disc = qb * qb - 4.0 * qa * qc;
    // Below the discriminant's own rounding floor the contact is a graze;
    // emit the double root instead of two artifacts (or a spurious miss).
    let disc_scale = qb * qb + 4.0 * (qa * qc).abs() + f64::MIN_POSITIVE;
    let mut roots = Vec::new();
    if disc.abs() <= 3e-13 * disc_scale {
        roots.push(-0.5 * qb / qa);
    } else if disc > 0.0 {
        let q = -0.5 * (qb + qb.signum() * disc.sqrt());
        roots.push(qc / q);
        roots.push(q / qa);
    } else {
        return Ok(Vec::new());
    }
    let mut points: Vec<Point> = Vec::new();
    for s in roots {
        if !s.is_finite() {
            continue;
        }
        let p = s1.start + m0 + d_hat * s;
        if points.iter().all(|prev| prev.dist(p) > eps_len) {
            points.push(p);
        }
    }
    Ok(points)
}

/// Intersections of the two arcs themselves (parameters within `[0, 1]`),
/// classified from `a`'s perspective and sorted along `a`. Contacts whose
/// local sides cannot be resolved (shared support pieces) are an error.
pub fn intersect(
    a: &ArcSegment,
    b: &ArcSegment,
    tol: &GeomTolerances,
    scale: f64,
) -> Result<Vec<CutEvent>, GeomError> {
    let eps_len = tol.eps_rel * scale;
    let points = support_intersections(a, b, tol, scale)?;
    let mut events = Vec::new();
    for p in points {
        let t_self = a.param_of_point(p, eps_len);
        let t_other = b.param_of_point(p, eps_len);
        let eps_ta = eps_len / a.length();
        let eps_tb = eps_len / b.length();
        if !a.param_on_arc(t_self, eps_ta) || !b.param_on_arc(t_other, eps_tb) {
            continue;
        }
        let t_clamped = t_self.clamp(0.0, 1.0);
        let sides = contact_sides(
            b,
            p,
            a.tangent_at(t_clamped),
            a.curvature(),
            tol.eps_angle,
            tol.eps_rel / scale,
        );
        match classify((sides.before, sides.after)) {
            Some(kind) => events.push(CutEvent {
                t_self: t_clamped,
                t_other: t_other.clamp(0.0, 1.0),
                point: p,
                kind,
            }),
            None => return Err(GeomError::OverlapError),
        }
    }
    events.sort_by(|x, y| x.t_self.total_cmp(&y.t_self));
    Ok(events)
}
