//! Arc primitives: construction, evaluation, side predicates, intersection
//! and tangency solves.

pub mod apollonius;
pub mod arc;
pub mod counters;
pub mod intersect;
pub mod point;
pub mod side;

pub use apollonius::{apollonius_arcs, CircleOrLine, SupportConstraint};
pub use arc::ArcSegment;
pub use intersect::{intersect, CutEvent, CutKind};
pub use point::Point;
pub use side::SideClass;

use thiserror::Error;

/// Unit-length direction vector. Callers are expected to keep it normalized.
pub type Direction = Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeomError {
    /// Arc endpoints coincide (or are non-finite).
    #[error("degenerate segment: endpoints coincide or are not finite")]
    DegenerateSegment,
    /// Three-point construction with the collinear order that has no arc.
    #[error("no arc through the three points in this order")]
    DegenerateThroughArc,
    /// Tangent-constrained construction with the excluded opposite direction.
    #[error("no arc with this tangent: direction opposes the chord")]
    DegenerateTangentArc,
    /// Two curve pieces share a support over infinitely many points.
    #[error("curves overlap along a common support")]
    OverlapError,
    /// Constraint system is singular beyond tolerance.
    #[error("ill-conditioned constraint system")]
    IllConditioned,
}
