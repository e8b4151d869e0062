//! Sampling-based reference checks.
//!
//! Everything here works by dense evaluation: side changes are found by
//! stepping and bisection, arc membership by nearest-sample distance, and
//! visibility by a grid of candidate arcs tested point by point. None of it
//! shares logic with the intersection or scan code it double-checks, so the
//! two can only agree by getting the geometry right.

use rayon::prelude::*;

use crate::channel::{Channel, Containment};
use crate::config::GeomTolerances;
use crate::geom::{ArcSegment, Point, SideClass};

/// One contact found by stepping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaiveEvent {
    pub t: f64,
    pub approach: Option<SideClass>,
    pub leave: Option<SideClass>,
}

/// Stepped profile of one boundary segment.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveSegment {
    pub delta_start: i32,
    pub advance: i32,
    pub delta_min: i32,
    pub delta_max: i32,
    pub events: Vec<NaiveEvent>,
}

/// Signed distance of `x` from the arc's support, positive on its left.
fn naive_signed_side(gamma: &ArcSegment, x: Point) -> f64 {
    if gamma.bulge.abs() > 1e-12 {
        let c = gamma.center().unwrap();
        let r = gamma.radius().unwrap();
        let d = x.dist(c);
        if gamma.bulge > 0.0 {
            r - d
        } else {
            d - r
        }
    } else {
        let chord = gamma.end - gamma.start;
        chord.cross(x - gamma.start) / chord.norm()
    }
}

/// Whether `x` lies on the bounded arc, by nearest-sample search.
fn naive_on_arc(gamma: &ArcSegment, x: Point, eps: f64) -> bool {
    let coarse = 512;
    let mut best = f64::MAX;
    let mut best_i = 0usize;
    for i in 0..=coarse {
        let d = x.dist(gamma.point_at(i as f64 / coarse as f64));
        if d < best {
            best = d;
            best_i = i;
        }
    }
    let lo = best_i.saturating_sub(1) as f64 / coarse as f64;
    let hi = ((best_i + 1).min(coarse)) as f64 / coarse as f64;
    let fine = 256;
    for i in 0..=fine {
        let t = lo + (hi - lo) * i as f64 / fine as f64;
        best = best.min(x.dist(gamma.point_at(t)));
    }
    best <= eps
}

fn side_of(v: f64, on_eps: f64) -> Option<SideClass> {
    if v.abs() <= on_eps {
        None
    } else if v > 0.0 {
        Some(SideClass::StrictLeft)
    } else {
        Some(SideClass::StrictRight)
    }
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

/// Steps along `seg` and lists its contacts with `gamma`.
fn naive_events(
    gamma: &ArcSegment,
    seg: &ArcSegment,
    samples: usize,
    on_eps: f64,
) -> Vec<NaiveEvent> {
    let n = samples;
    let vals: Vec<f64> = (0..=n)
        .map(|i| naive_signed_side(gamma, seg.point_at(i as f64 / n as f64)))
        .collect();
    let states: Vec<Option<SideClass>> = vals.iter().map(|&v| side_of(v, on_eps)).collect();
    let mut events = Vec::new();
    let mut i = 0usize;
    while i <= n {
        if states[i].is_none() {
            // A run of near-support samples: one contact.
            let run_start = i;
            while i <= n && states[i].is_none() {
                i += 1;
            }
            let run_end = i - 1;
            let mut best_t = run_start as f64 / n as f64;
            let mut best_v = f64::MAX;
            for j in run_start..=run_end {
                if vals[j].abs() < best_v {
                    best_v = vals[j].abs();
                    best_t = j as f64 / n as f64;
                }
            }
            if naive_on_arc(gamma, seg.point_at(best_t), 4.0 * on_eps) {
                let approach = if run_start == 0 {
                    None
                } else {
                    states[run_start - 1]
                };
                let leave = if run_end == n { None } else { states[run_end + 1] };
                events.push(NaiveEvent {
                    t: best_t,
                    approach,
                    leave,
                });
            }
            continue;
        }
        if i < n {
            if let (Some(a), Some(b)) = (states[i], states[i + 1]) {
                if a != b {
                    // Sign change without a near-support sample: bisect.
                    let mut lo = i as f64 / n as f64;
                    let mut hi = (i + 1) as f64 / n as f64;
                    let neg_lo = vals[i] < 0.0;
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        let v = naive_signed_side(gamma, seg.point_at(mid));
                        if (v < 0.0) == neg_lo {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    let t = 0.5 * (lo + hi);
                    if naive_on_arc(gamma, seg.point_at(t), 4.0 * on_eps) {
                        events.push(NaiveEvent {
                            t,
                            approach: Some(a),
                            leave: Some(b),
                        });
                    }
                }
            }
        }
        i += 1;
    }
    events
}

/// Stepped counterpart of the production chain profiles.
pub fn naive_chain_profiles(
    gamma: &ArcSegment,
    chain: &[ArcSegment],
    samples: usize,
    on_eps: f64,
) -> Vec<NaiveSegment> {
    let mut delta = if naive_on_arc(gamma, chain[0].start, on_eps) {
        1
    } else {
        0
    };
    let mut out = Vec::with_capacity(chain.len());
    for seg in chain {
        let events = naive_events(gamma, seg, samples, on_eps);
        let mut running = delta;
        let mut delta_min = delta;
        let mut delta_max = delta;
        for e in &events {
            let at_point = running + approach_contrib(e.approach);
            delta_min = delta_min.min(at_point);
            delta_max = delta_max.max(at_point);
            running = at_point + leave_contrib(e.leave);
            delta_min = delta_min.min(running);
            delta_max = delta_max.max(running);
        }
        out.push(NaiveSegment {
            delta_start: delta,
            advance: running - delta,
            delta_min,
            delta_max,
            events,
        });
        delta = running;
    }
    out
}

/// Sampled visibility verdict. `Unknown` is an honest answer: the grid saw
/// neither a clean witness nor uniformly deep failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    DefinitelyVisible,
    DefinitelyBlocked,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub verdict: OracleVerdict,
    pub witness: Option<ArcSegment>,
}

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Start positions sampled along the starting arc.
    pub start_samples: usize,
    /// Departure angles sampled over the open left half-turn.
    pub angle_samples: usize,
    /// Points tested along each candidate arc.
    pub arc_samples: usize,
    /// Clearance required of a witness, and depth required of a failure.
    pub margin: f64,
}

impl OracleConfig {
    pub fn for_channel(channel: &Channel) -> OracleConfig {
        OracleConfig {
            start_samples: 48,
            angle_samples: 48,
            arc_samples: 64,
            margin: 1e-4 * channel.diameter(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ArcClass {
    Inside,
    DeepFail,
    Marginal,
}

fn classify_arc(
    channel: &Channel,
    arc: &ArcSegment,
    cfg: &OracleConfig,
    tol: &GeomTolerances,
) -> ArcClass {
    let n = cfg.arc_samples;
    let mut marginal = false;
    for k in 0..n {
        let t = (k + 1) as f64 / (n + 1) as f64;
        let x = arc.point_at(t);
        let clear = channel.boundary_distance(x, tol);
        match channel.contains(x, tol) {
            Containment::Exterior => {
                if clear > cfg.margin {
                    return ArcClass::DeepFail;
                }
                marginal = true;
            }
            Containment::OnBoundary => marginal = true,
            Containment::Interior => {
                // Shallow clearance counts against a witness except right
                // after the legitimate departure contact.
                if clear <= cfg.margin && t > 0.2 {
                    marginal = true;
                }
            }
        }
    }
    if marginal {
        ArcClass::Marginal
    } else {
        ArcClass::Inside
    }
}

fn grid_pass(
    channel: &Channel,
    p: Point,
    cfg: &OracleConfig,
    tol: &GeomTolerances,
) -> (Option<(usize, ArcSegment)>, bool) {
    let sigma = channel.start_arc;
    let total = cfg.start_samples * cfg.angle_samples;
    let results: Vec<(usize, ArcClass, Option<ArcSegment>)> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let i = idx / cfg.angle_samples;
            let j = idx % cfg.angle_samples;
            let t = (i as f64 + 0.5) / cfg.start_samples as f64;
            let beta = (j as f64 + 0.5) / cfg.angle_samples as f64 * std::f64::consts::PI;
            let dir = sigma.tangent_at(t).rotated(beta);
            match ArcSegment::arc_with_start_tangent(dir, sigma.point_at(t), p) {
                Ok(arc) => {
                    let class = classify_arc(channel, &arc, cfg, tol);
                    (idx, class, Some(arc))
                }
                Err(_) => (idx, ArcClass::DeepFail, None),
            }
        })
        .collect();
    let witness = results
        .iter()
        .filter(|(_, c, _)| *c == ArcClass::Inside)
        .min_by_key(|(idx, _, _)| *idx)
        .and_then(|(idx, _, arc)| arc.map(|a| (*idx, a)));
    let any_marginal = results.iter().any(|(_, c, _)| *c == ArcClass::Marginal);
    (witness, any_marginal)
}

/// Grid-search visibility check. A blocked verdict requires the failure
/// picture to survive one grid refinement.
pub fn oracle_visible(
    channel: &Channel,
    p: Point,
    cfg: &OracleConfig,
    tol: &GeomTolerances,
) -> OracleResult {
    let (witness, any_marginal) = grid_pass(channel, p, cfg, tol);
    if let Some((_, arc)) = witness {
        return OracleResult {
            verdict: OracleVerdict::DefinitelyVisible,
            witness: Some(arc),
        };
    }
    if any_marginal {
        return OracleResult {
            verdict: OracleVerdict::Unknown,
            witness: None,
        };
    }
    let finer = OracleConfig {
        start_samples: cfg.start_samples * 2,
        angle_samples: cfg.angle_samples * 2,
        arc_samples: cfg.arc_samples * 2,
        margin: cfg.margin,
    };
    let (witness, any_marginal) = grid_pass(channel, p, &finer, tol);
    match witness {
        Some((_, arc)) => OracleResult {
            verdict: OracleVerdict::DefinitelyVisible,
            witness: Some(arc),
        },
        None if !any_marginal => OracleResult {
            verdict: OracleVerdict::DefinitelyBlocked,
            witness: None,
        },
        None => OracleResult {
            verdict: OracleVerdict::Unknown,
            witness: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::profile::chain_profiles;

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn seg(a: Point, b: Point) -> ArcSegment {
        ArcSegment::segment(a, b).unwrap()
    }

    fn square() -> Channel {
        Channel::new(
            seg(pt(0.0, 0.0), pt(1.0, 0.0)),
            vec![
                seg(pt(1.0, 0.0), pt(1.0, 1.0)),
                seg(pt(1.0, 1.0), pt(0.0, 1.0)),
                seg(pt(0.0, 1.0), pt(0.0, 0.0)),
            ],
        )
    }

    /// Narrow shaft up the left, long thin limb to the right at the top.
    fn elbow() -> Channel {
        Channel::new(
            seg(pt(0.0, 0.0), pt(0.2, 0.0)),
            vec![
                seg(pt(0.2, 0.0), pt(0.2, 0.8)),
                seg(pt(0.2, 0.8), pt(1.0, 0.8)),
                seg(pt(1.0, 0.8), pt(1.0, 1.0)),
                seg(pt(1.0, 1.0), pt(0.0, 1.0)),
                seg(pt(0.0, 1.0), pt(0.0, 0.0)),
            ],
        )
    }

    #[test]
    fn stepped_profiles_match_event_profiles_on_the_square() {
        let tol = GeomTolerances::default();
        let chain = square().boundary;
        for bulge_sign in [1.0f64, -1.0] {
            let b = bulge_sign * (3.0 * std::f64::consts::PI / 8.0).tan();
            let start = if bulge_sign > 0.0 {
                pt(1.0, 0.0)
            } else {
                pt(0.0, 0.0)
            };
            let g = ArcSegment::new(start, pt(0.5, 0.5), b).unwrap();
            let prod = chain_profiles(&g, &chain, &tol, 2.0).unwrap();
            let naive = naive_chain_profiles(&g, &chain, 4096, 2e-5);
            assert_eq!(prod.len(), naive.len());
            for (p, q) in prod.iter().zip(naive.iter()) {
                assert_eq!(p.delta_start, q.delta_start);
                assert_eq!(p.advance, q.advance);
                assert_eq!(p.delta_min, q.delta_min);
                assert_eq!(p.delta_max, q.delta_max);
                assert_eq!(p.events.len(), q.events.len());
                for (e, f) in p.events.iter().zip(q.events.iter()) {
                    assert!((e.t_seg - f.t).abs() < 2e-3);
                    assert_eq!(e.approach, f.approach);
                    assert_eq!(e.leave, f.leave);
                }
            }
        }
    }

    #[test]
    fn oracle_sees_the_open_square() {
        let ch = square();
        let cfg = OracleConfig::for_channel(&ch);
        let r = oracle_visible(&ch, pt(0.5, 0.5), &cfg, &GeomTolerances::default());
        assert_eq!(r.verdict, OracleVerdict::DefinitelyVisible);
        let w = r.witness.unwrap();
        assert!(w.end.dist(pt(0.5, 0.5)) < 1e-9);
    }

    #[test]
    fn oracle_rejects_the_deep_elbow() {
        let ch = elbow();
        let cfg = OracleConfig::for_channel(&ch);
        let r = oracle_visible(&ch, pt(0.9, 0.9), &cfg, &GeomTolerances::default());
        assert_eq!(r.verdict, OracleVerdict::DefinitelyBlocked);
    }

    #[test]
    fn oracle_sees_into_the_elbow_mouth() {
        let ch = elbow();
        let cfg = OracleConfig::for_channel(&ch);
        let r = oracle_visible(&ch, pt(0.1, 0.5), &cfg, &GeomTolerances::default());
        assert_eq!(r.verdict, OracleVerdict::DefinitelyVisible);
    }
}
