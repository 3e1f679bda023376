//! Bar and mixed complexes, Hochschild / cyclic / relative homology,
//! shuffle products, HKR and e comparison maps, Eulerian idempotents,
//! Adams and lambda operations, and Hodge decompositions.

mod bar;
mod cyclic;
mod hodge;
mod idem;
mod maps;

pub use bar::{
    bar_mixed, bar_mixed_with_budget, hh, hh_generators_check, hh_map,
    hh_map_with_budget, hh_with_budget, normalized_mixed, normalized_mixed_with_budget,
    shuffle_product, BarMixed, HhGenReport, NormalizedMixed, DEFAULT_BUDGET,
};
pub(crate) use bar::{decode, encode, nencode, perm_sign, tensor_power_map};
pub use cyclic::{
    hc, hc_rel, hc_rel_with_budget, hc_with_budget, hn_rel, hn_rel_with_budget,
    relative_total, relative_total_with_budget, RelativeTotal,
};
pub use hodge::{
    adams, hodge_hc_rel, hodge_hc_rel_with_budget, hodge_hh, hodge_hh_with_budget,
    hodge_hn_rel, hodge_hn_rel_with_budget, lambda_op, ConventionTable, HodgeDecomp, Theory,
    CONVENTIONS,
};
pub use idem::{eulerian_idempotents, kron_id, signed_shuffle_operator};
pub use maps::{e_map, e_map_with_budget, hkr, EMapData};
