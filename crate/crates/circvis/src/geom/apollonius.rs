use super::arc::ArcSegment;
use super::point::Point;
use super::{counters, GeomError};
use crate::config::GeomTolerances;

/// Support geometry a constrained circle must touch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleOrLine {
    Circle { center: Point, radius: f64 },
    /// Points `x` with `<normal, x - anchor> = 0`; `normal` is unit length.
    Line { anchor: Point, normal: Point },
}

impl CircleOrLine {
    /// Support of an arc. Arcs whose sagitta stays below `eps_len` over the
    /// chord count as lines; their centers would be too far out to use.
    pub fn from_support(arc: &ArcSegment, eps_len: f64) -> CircleOrLine {
        let line_bulge = (2.0 * eps_len / arc.chord_len()).max(1e-12);
        if arc.bulge.abs() <= line_bulge {
            let n = arc.chord().perp();
            CircleOrLine::Line {
                anchor: arc.start,
                normal: n / n.norm(),
            }
        } else {
            CircleOrLine::Circle {
                center: arc.center().unwrap(),
                radius: arc.radius().unwrap(),
            }
        }
    }

    /// Point of this support closest to `p`.
    pub fn project(&self, p: Point) -> Point {
        match *self {
            CircleOrLine::Circle { center, radius } => {
                let d = p - center;
                let n = d.norm();
                if n == 0.0 {
                    center + Point::new(radius, 0.0)
                } else {
                    center + d * (radius / n)
                }
            }
            CircleOrLine::Line { anchor, normal } => p - normal * normal.dot(p - anchor),
        }
    }
}

/// One constraint on the wanted circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportConstraint {
    /// Must pass through the point.
    Through(Point),
    /// Must touch the circle or line.
    TangentTo(CircleOrLine),
}

impl SupportConstraint {
    fn close_to(&self, other: &SupportConstraint, eps_len: f64) -> bool {
        match (self, other) {
            (SupportConstraint::Through(a), SupportConstraint::Through(b)) => a.dist(*b) <= eps_len,
            (SupportConstraint::TangentTo(a), SupportConstraint::TangentTo(b)) => match (a, b) {
                (
                    CircleOrLine::Circle { center: c1, radius: r1 },
                    CircleOrLine::Circle { center: c2, radius: r2 },
                ) => c1.dist(*c2) <= eps_len && (r1 - r2).abs() <= eps_len,
                (
                    CircleOrLine::Line { anchor: a1, normal: n1 },
                    CircleOrLine::Line { anchor: a2, normal: n2 },
                ) => {
                    n1.cross(*n2).abs() <= 1e-12 && n1.dot(*a2 - *a1).abs() <= eps_len
                }
                _ => false,
            },
            _ => false,
        }
    }

    /// Residual of a circle `(center, radius)` against this constraint.
    fn residual(&self, center: Point, radius: f64) -> f64 {
        match *self {
            SupportConstraint::Through(q) => (center.dist(q) - radius).abs(),
            SupportConstraint::TangentTo(CircleOrLine::Circle { center: d, radius: rho }) => {
                let dist = center.dist(d);
                (dist - (radius + rho)).abs().min((dist - (radius - rho).abs()).abs())
            }
            SupportConstraint::TangentTo(CircleOrLine::Line { anchor, normal }) => {
                (normal.dot(center - anchor).abs() - radius).abs()
            }
        }
    }

    /// Residual of a line through `p` with unit direction `dir`.
    fn line_residual(&self, p: Point, dir: Point) -> f64 {
        let n = dir.perp();
        match *self {
            SupportConstraint::Through(q) => n.dot(q - p).abs(),
            SupportConstraint::TangentTo(CircleOrLine::Circle { center, radius }) => {
                (n.dot(center - p).abs() - radius).abs()
            }
            SupportConstraint::TangentTo(CircleOrLine::Line { .. }) => f64::INFINITY,
        }
    }
}

/// A circle or line through the query point satisfying both constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ApolloSupport {
    Circle { center: Point, radius: f64 },
    /// Line through the query point with unit direction `dir`.
    Line { dir: Point },
}

/// Linear form `<c, m> + s * w = h` on center `c` and radius `w`.
struct LinearRow {
    m: Point,
    s: f64,
    h: f64,
}

fn rows_for(c: &SupportConstraint, p: Point) -> Vec<LinearRow> {
    // Each row comes from subtracting |c - p|^2 = w^2 from the constraint's
    // squared distance equation, leaving it linear in (c, w).
    match *c {
        SupportConstraint::Through(q) => vec![LinearRow {
            m: q - p,
            s: 0.0,
            h: 0.5 * (q.norm_sq() - p.norm_sq()),
        }],
        SupportConstraint::TangentTo(CircleOrLine::Circle { center: d, radius: rho }) => {
            [1.0, -1.0]
                .iter()
                .map(|sigma| LinearRow {
                    m: d - p,
                    s: sigma * rho,
                    h: 0.5 * (d.norm_sq() - p.norm_sq() - rho * rho),
                })
                .collect()
        }
        SupportConstraint::TangentTo(CircleOrLine::Line { anchor, normal }) => [1.0, -1.0]
            .iter()
            .map(|sigma| LinearRow {
                m: normal,
                s: -sigma,
                h: normal.dot(anchor),
            })
            .collect(),
    }
}

/// All circles through `p` meeting both constraints with radius in
/// `(0, cap]`, sorted by radius, followed by line solutions (which do not
/// count against the cap). Coinciding constraints are rejected.
pub fn apollonius_arcs(
    p: Point,
    c1: &SupportConstraint,
    c2: &SupportConstraint,
    cap: f64,
    tol: &GeomTolerances,
    scale: f64,
) -> Result<Vec<ApolloSupport>, GeomError> {
    counters::bump();
    let eps_len = tol.eps_rel * scale;
    if c1.close_to(c2, eps_len) {
        return Err(GeomError::IllConditioned);
    }
    let mut circles: Vec<(Point, f64)> = Vec::new();
    for r1 in rows_for(c1, p) {
        for r2 in rows_for(c2, p) {
            let det = r1.m.cross(r2.m);
            if det.abs() <= 1e-14 * (r1.m.norm() * r2.m.norm() + tol.eps_bulge) {
                continue;
            }
            // c = c0 + w * e from the two rows.
            let solve = |b1: f64, b2: f64| {
                Point::new(b1 * r2.m.y - b2 * r1.m.y, r1.m.x * b2 - r2.m.x * b1) / det
            };
            let c0 = solve(r1.h, r2.h);
            let e = solve(-r1.s, -r2.s);
            // |c0 + w e - p|^2 = w^2.
            let f = c0 - p;
            let qa = e.norm_sq() - 1.0;
            let qb = 2.0 * f.dot(e);
            let qc = f.norm_sq();
            let mut ws: Vec<f64> = Vec::new();
            if qa.abs() <= 1e-14 {
                if qb.abs() > 1e-14 {
                    ws.push(-qc / qb);
                }
            } else {
                let disc = qb * qb - 4.0 * qa * qc;
                let disc_scale = qb * qb + 4.0 * (qa * qc).abs() + f64::MIN_POSITIVE;
                // Grazing double roots count once, even when rounding pushes
                // the discriminant slightly negative.
                if disc.abs() <= 3e-13 * disc_scale {
                    ws.push(-0.5 * qb / qa);
                } else if disc > 0.0 {
                    let q = -0.5 * (qb + qb.signum() * disc.sqrt());
                    if q.abs() > 0.0 {
                        ws.push(qc / q);
                    }
                    ws.push(q / qa);
                }
            }
            for w in ws {
                if !w.is_finite() || w <= eps_len || w > cap {
                    continue;
                }
                let c = c0 + e * w;
                let res_tol = tol.eps_rel * (w + scale);
                if c1.residual(c, w) > res_tol || c2.residual(c, w) > res_tol {
                    continue;
                }
                if circles
                    .iter()
                    .all(|(pc, pw)| pc.dist(c) > eps_len || (pw - w).abs() > eps_len)
                {
                    circles.push((c, w));
                }
            }
        }
    }
    circles.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut out: Vec<ApolloSupport> = circles
        .into_iter()
        .map(|(center, radius)| ApolloSupport::Circle { center, radius })
        .collect();
    for dir in line_candidates(p, c1, c2, tol, scale) {
        out.push(ApolloSupport::Line { dir });
    }
    Ok(out)
}

fn line_candidates(
    p: Point,
    c1: &SupportConstraint,
    c2: &SupportConstraint,
    tol: &GeomTolerances,
    scale: f64,
) -> Vec<Point> {
    let eps_len = tol.eps_rel * scale;
    // A line satisfying TangentTo(line) would coincide with that line; such
    // candidates belong to the constraint support itself and are not useful.
    if matches!(c1, SupportConstraint::TangentTo(CircleOrLine::Line { .. }))
        || matches!(c2, SupportConstraint::TangentTo(CircleOrLine::Line { .. }))
    {
        return Vec::new();
    }
    let dirs_for = |c: &SupportConstraint| -> Vec<Point> {
        match *c {
            SupportConstraint::Through(q) => match (q - p).normalized(eps_len) {
                Some(d) => vec![d],
                None => Vec::new(),
            },
            SupportConstraint::TangentTo(CircleOrLine::Circle { center, radius }) => {
                let d = center - p;
                let dist = d.norm();
                if dist < radius - eps_len || dist <= eps_len {
                    return Vec::new();
                }
                let beta = (radius / dist).min(1.0).asin();
                let d_hat = d / dist;
                let mut v = vec![d_hat.rotated(beta)];
                if beta > 1e-12 {
                    v.push(d_hat.rotated(-beta));
                }
                v
            }
            SupportConstraint::TangentTo(CircleOrLine::Line { .. }) => Vec::new(),
        }
    };
    let mut out = Vec::new();
    let line_tol = tol.eps_rel * scale;
    for dir in dirs_for(c1) {
        if c2.line_residual(p, dir) <= line_tol
            && out.iter().all(|prev: &Point| prev.cross(dir).abs() > 1e-12)
        {
            out.push(dir);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    fn tols() -> GeomTolerances {
        GeomTolerances::default()
    }

    fn x_axis() -> SupportConstraint {
        SupportConstraint::TangentTo(CircleOrLine::Line {
            anchor: Point::new(0.0, 0.0),
            normal: Point::new(0.0, 1.0),
        })
    }

    fn y_axis() -> SupportConstraint {
        SupportConstraint::TangentTo(CircleOrLine::Line {
            anchor: Point::new(0.0, 0.0),
            normal: Point::new(1.0, 0.0),
        })
    }

    #[test]
    fn circle_tangent_to_both_axes_through_point() {
        let p = Point::new(0.5, 0.5);
        let sols = apollonius_arcs(p, &x_axis(), &y_axis(), 100.0, &tols(), 1.0).unwrap();
        let circles: Vec<(Point, f64)> = sols
            .iter()
            .filter_map(|s| match s {
                ApolloSupport::Circle { center, radius } => Some((*center, *radius)),
                _ => None,
            })
            .collect();
        assert_eq!(circles.len(), 2);
        let small = 1.0 - std::f64::consts::SQRT_2 / 2.0;
        let big = 1.0 + std::f64::consts::SQRT_2 / 2.0;
        assert!((circles[0].1 - small).abs() < TOL);
        assert!(circles[0].0.dist(Point::new(small, small)) < TOL);
        assert!((circles[1].1 - big).abs() < TOL);
        assert!(circles[1].0.dist(Point::new(big, big)) < TOL);
        // Tangent-line constraints admit no line solutions.
        assert!(sols.iter().all(|s| matches!(s, ApolloSupport::Circle { .. })));
    }

    #[test]
    fn through_point_tangent_to_vertical_line() {
        let p = Point::new(0.5, 0.5);
        let through = SupportConstraint::Through(Point::new(1.0, 0.0));
        let wall = SupportConstraint::TangentTo(CircleOrLine::Line {
            anchor: Point::new(1.0, 0.0),
            normal: Point::new(1.0, 0.0),
        });
        let sols = apollonius_arcs(p, &through, &wall, 100.0, &tols(), 1.0).unwrap();
        assert_eq!(sols.len(), 1);
        match sols[0] {
            ApolloSupport::Circle { center, radius } => {
                assert!(center.dist(Point::new(0.5, 0.0)) < TOL);
                assert!((radius - 0.5).abs() < TOL);
            }
            _ => panic!("expected a circle"),
        }
    }

    #[test]
    fn twin_circles_give_central_circle_and_common_tangent() {
        let p = Point::new(0.0, 1.0);
        let left = SupportConstraint::TangentTo(CircleOrLine::Circle {
            center: Point::new(-2.0, 0.0),
            radius: 1.0,
        });
        let right = SupportConstraint::TangentTo(CircleOrLine::Circle {
            center: Point::new(2.0, 0.0),
            radius: 1.0,
        });
        let sols = apollonius_arcs(p, &left, &right, 100.0, &tols(), 4.0).unwrap();
        let has_unit = sols.iter().any(|s| match s {
            ApolloSupport::Circle { center, radius } => {
                center.dist(Point::new(0.0, 0.0)) < TOL && (radius - 1.0).abs() < TOL
            }
            _ => false,
        });
        assert!(has_unit);
        let lines: Vec<Point> = sols
            .iter()
            .filter_map(|s| match s {
                ApolloSupport::Line { dir } => Some(*dir),
                _ => None,
            })
            .collect();
        assert_eq!(lines.len(), 1);
        assert!(lines[0].cross(Point::new(1.0, 0.0)).abs() < TOL);
        for s in &sols {
            if let ApolloSupport::Circle { center, radius } = s {
                assert!(left.residual(*center, *radius) < 1e-8);
                assert!(right.residual(*center, *radius) < 1e-8);
            }
        }
    }

    #[test]
    fn collinear_through_points_leave_only_the_line() {
        let p = Point::new(0.0, 0.0);
        let a = SupportConstraint::Through(Point::new(1.0, 1.0));
        let b = SupportConstraint::Through(Point::new(2.0, 2.0));
        let sols = apollonius_arcs(p, &a, &b, 100.0, &tols(), 2.0).unwrap();
        assert_eq!(sols.len(), 1);
        match sols[0] {
            ApolloSupport::Line { dir } => {
                assert!(dir.cross(Point::new(1.0, 1.0)).abs() < TOL);
            }
            _ => panic!("expected the line through the collinear points"),
        }
    }

    #[test]
    fn identical_constraints_are_rejected() {
        let p = Point::new(0.0, 1.0);
        let q = SupportConstraint::Through(Point::new(1.0, 0.0));
        assert_eq!(
            apollonius_arcs(p, &q, &q, 10.0, &tols(), 1.0),
            Err(GeomError::IllConditioned)
        );
        let c = SupportConstraint::TangentTo(CircleOrLine::Circle {
            center: Point::new(3.0, 0.0),
            radius: 0.5,
        });
        assert_eq!(
            apollonius_arcs(p, &c, &c, 10.0, &tols(), 1.0),
            Err(GeomError::IllConditioned)
        );
    }

    #[test]
    fn radius_cap_filters_large_solutions() {
        let p = Point::new(0.0, 0.1);
        let a = SupportConstraint::Through(Point::new(-1.0, 0.0));
        let b = SupportConstraint::Through(Point::new(1.0, 0.0));
        let all = apollonius_arcs(p, &a, &b, 100.0, &tols(), 2.0).unwrap();
        assert_eq!(all.len(), 1);
        match all[0] {
            ApolloSupport::Circle { center, radius } => {
                // Center sits on the y axis below the chord.
                assert!(center.x.abs() < TOL);
                assert!((center.dist(p) - radius).abs() < 1e-8);
                assert!(radius > 5.0);
            }
            _ => panic!("expected a circle"),
        }
        let capped = apollonius_arcs(p, &a, &b, 1.0, &tols(), 2.0).unwrap();
        assert!(capped.is_empty());
    }

    #[test]
    fn through_plus_circle_keeps_residuals_small() {
        let p = Point::new(2.0, 0.0);
        let through = SupportConstraint::Through(Point::new(0.0, 2.0));
        let circle = SupportConstraint::TangentTo(CircleOrLine::Circle {
            center: Point::new(0.0, 0.0),
            radius: 1.0,
        });
        let sols = apollonius_arcs(p, &through, &circle, 100.0, &tols(), 2.0).unwrap();
        assert!(!sols.is_empty());
        for s in &sols {
            if let ApolloSupport::Circle { center, radius } = s {
                assert!(through.residual(*center, *radius) < 1e-8);
                assert!(circle.residual(*center, *radius) < 1e-8);
                assert!((center.dist(p) - radius).abs() < 1e-8);
            }
        }
    }
}
