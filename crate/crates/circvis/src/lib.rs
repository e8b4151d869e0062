//! Circular visibility queries in channels bounded by arc splines.
//!
//! A channel is a closed region bounded by a distinguished starting arc and
//! a chain of boundary arcs. The engine decides whether an interior point
//! can be reached from the starting arc by a single circular arc inside the
//! channel, returning either such an arc or a three-contact certificate
//! proving that none exists.

pub mod config;
pub mod geom;

pub mod channel;
pub mod order;

pub use channel::{Channel, ChannelError, Containment};
pub use config::{GeomTolerances, QueryConfig};
pub use order::{ConnectingArc, OrderContext, OrderError};
pub use geom::{ArcSegment, GeomError, Point, SideClass};
