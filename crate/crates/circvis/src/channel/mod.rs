//! Channel model: the closed region bounded by a starting arc and a chain
//! of boundary arcs, its validation, and point containment.

pub mod profile;

mod channel;

pub use channel::{Channel, Containment};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ChannelError {
    /// A segment is degenerate (coincident endpoints or non-finite data).
    #[error("boundary segment {index} is degenerate")]
    DegenerateSegment { index: usize },
    /// Consecutive segments do not share endpoints.
    #[error("boundary is not closed at segment {index}")]
    NotClosed { index: usize },
    /// The closed boundary crosses itself.
    #[error("boundary intersects itself (segments {first} and {second})")]
    SelfIntersecting { first: usize, second: usize },
    /// The boundary loop runs clockwise; the interior must lie on its left.
    #[error("boundary encloses the interior clockwise")]
    WrongOrientation,
    /// The corner where the starting arc meets the boundary turns right.
    #[error("corner at the starting arc end {index} is not convex")]
    NonConvexStartCorner { index: usize },
}
