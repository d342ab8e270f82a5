//! Pareto improvements between two agents whose preferences are the
//! preorders induced by cones.
//!
//! Moving `delta` from agent 2 to agent 1 is an improvement when
//! `0 ≼₁ delta` and `delta ≼₂ 0`, strictly for at least one agent.

use serde::Serialize;

use crate::cone::{path_consistent, Cone, ConeError, Membership};
use crate::rational::RationalVector;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Improvement {
    pub delta: RationalVector,
    pub strict_for_1: bool,
    pub strict_for_2: bool,
}

/// An improvement exists for every allocation iff the cones are not
/// path-consistent; it is read off the path witness.
pub fn pareto_improvement(c1: &Cone, c2: &Cone) -> Result<Option<Improvement>, ConeError> {
    let Some(w) = path_consistent(c1, c2)?.into_witness() else {
        return Ok(None);
    };
    let delta = w.delta1;
    Ok(Some(Improvement {
        strict_for_1: c1.membership(&delta)? == Membership::StrictPart,
        strict_for_2: c2.membership(&-&delta)? == Membership::StrictPart,
        delta,
    }))
}

pub fn verify_improvement(c1: &Cone, c2: &Cone, delta: &RationalVector) -> Result<bool, ConeError> {
    let m1 = c1.membership(delta)?;
    let m2 = c2.membership(&-delta)?;
    Ok(m1.is_member()
        && m2.is_member()
        && (m1 == Membership::StrictPart || m2 == Membership::StrictPart))
}
