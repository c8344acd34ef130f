//! Embedded reference data: a tripartite behavior attaining Hardy success
//! probability 1/4 under the canonical spec, and a shared-weight TOBL model
//! for it with four equally weighted deterministic hidden values.

use crate::behavior::Behavior;
use crate::decomposition::ToblDecomposition;
use crate::io::behavior_from_json;

pub const TOBL_OPTIMUM_JSON: &str = include_str!("../data/tobl_optimum.json");
pub const TOBL_OPTIMUM_DECOMPOSITION_JSON: &str =
    include_str!("../data/tobl_optimum_decomposition.json");

pub fn tobl_optimum() -> Behavior {
    behavior_from_json(TOBL_OPTIMUM_JSON).expect("embedded behavior parses")
}

pub fn tobl_optimum_decomposition() -> ToblDecomposition {
    ToblDecomposition::from_json(TOBL_OPTIMUM_DECOMPOSITION_JSON)
        .expect("embedded decomposition parses")
}
