use super::arc::ArcSegment;
use super::point::Point;
use serde::{Deserialize, Serialize};

/// Side of an oriented support curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideClass {
    StrictLeft,
    On,
    StrictRight,
}

impl SideClass {
    pub fn flipped(self) -> SideClass {
        match self {
            SideClass::StrictLeft => SideClass::StrictRight,
            SideClass::StrictRight => SideClass::StrictLeft,
            SideClass::On => SideClass::On,
        }
    }

    pub fn is_left(self) -> bool {
        self == SideClass::StrictLeft
    }

    pub fn is_right(self) -> bool {
        self == SideClass::StrictRight
    }
}

/// Local behavior of a curve passing through a contact point on a support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContactSides {
    /// Side occupied just before the contact.
    pub before: SideClass,
    /// Side occupied just after the contact.
    pub after: SideClass,
    /// Whether the contact is tangential (sides decided by curvature).
    pub tangential: bool,
}

impl ContactSides {
    pub fn is_crossing(&self) -> bool {
        self.before != SideClass::On && self.after == self.before.flipped()
    }

    pub fn is_touch(&self) -> bool {
        self.before != SideClass::On && self.after == self.before
    }
}

/// Classifies how a curve with unit direction `dir` and signed curvature
/// `curv` at the on-support point `x` sits relative to the support of `arc`.
///
/// `eps_angle` bounds the direction test, `eps_curv` the curvature tie (in
/// inverse length units). A tangential contact with matching curvature means
/// the curve rides the support; both sides come back `On`.
pub fn contact_sides(
    support: &ArcSegment,
    x: Point,
    dir: Point,
    curv: f64,
    eps_angle: f64,
    eps_curv: f64,
) -> ContactSides {
    super::counters::bump();
    // Gradient of the support conic at x points to the right side; its norm
    // is 2(1 + b^2) on the support.
    let m = x - support.start;
    let grad = m * (2.0 * support.conic_alpha()) - support.conic_w();
    let b = support.bulge;
    let rate = grad.dot(dir) / (2.0 * (1.0 + b * b));
    if rate.abs() > eps_angle {
        // Transversal: the curve moves toward the rate's sign.
        let (before, after) = if rate > 0.0 {
            (SideClass::StrictLeft, SideClass::StrictRight)
        } else {
            (SideClass::StrictRight, SideClass::StrictLeft)
        };
        return ContactSides {
            before,
            after,
            tangential: false,
        };
    }
    // Tangential: compare curvatures, accounting for traversal direction.
    // Expanding the conic to second order along the curve gives, for matching
    // directions, side left iff curv > k_support; against the direction the
    // curve sits left iff curv < -k_support.
    let snap = support.chord_len() * 1e-12;
    let same_dir = dir.dot(support.tangent_at(support.param_of_point(x, snap))) > 0.0;
    let k_support = support.curvature();
    let signed = if same_dir {
        curv - k_support
    } else {
        -curv - k_support
    };
    let side = if signed.abs() <= eps_curv {
        SideClass::On
    } else if signed > 0.0 {
        SideClass::StrictLeft
    } else {
        SideClass::StrictRight
    };
    ContactSides {
        before: side,
        after: side,
        tangential: true,
    }
}

/// Whether two arcs lie on the same support circle or line, within `eps_len`.
pub fn same_support(a: &ArcSegment, b: &ArcSegment, eps_len: f64) -> bool {
    a.dist_to_support(b.start) <= eps_len
        && a.dist_to_support(b.end) <= eps_len
        && a.dist_to_support(b.midpoint()) <= eps_len
}
