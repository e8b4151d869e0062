use serde::{Deserialize, Serialize};

/// Tolerances used by the geometric predicates.
///
/// All length-like comparisons are scaled by a reference length (the
/// channel diameter, or a local feature size inside the kernel), so the
/// fields here are dimensionless factors.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GeomTolerances {
    /// Relative length tolerance. A point within `eps_rel * scale` of a
    /// curve counts as lying on it.
    pub eps_rel: f64,
    /// Bulge values below this are treated as exactly zero (straight
    /// segment).
    pub eps_bulge: f64,
    /// Angular tolerance in radians for tangent comparisons.
    pub eps_angle: f64,
}

impl Default for GeomTolerances {
    fn default() -> Self {
        GeomTolerances {
            eps_rel: 1e-9,
            eps_bulge: 1e-12,
            eps_angle: 1e-9,
        }
    }
}

/// Query-level configuration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QueryConfig {
    pub tol: GeomTolerances,
    /// Violations whose penetration depth is below `d_tol_factor` times
    /// the channel diameter are ignored as grazing contact.
    pub d_tol_factor: f64,
    /// Candidate arcs with radius above `radius_cap_factor` times the
    /// channel diameter are replaced by capped-radius arcs.
    pub radius_cap_factor: f64,
}

impl Default for QueryConfig {
    fn default() -> Self {
        QueryConfig {
            tol: GeomTolerances::default(),
            d_tol_factor: 1e-6,
            radius_cap_factor: 4.0,
        }
    }
}
