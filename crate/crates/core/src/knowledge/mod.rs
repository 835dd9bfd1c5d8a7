//! Target-domain knowledge and the source/target mixing rule.

mod crosstab;
mod mixing;
mod store;

pub use crosstab::{from_json as crosstabs_from_json, load_from_crosstabs, LOAD_TOLERANCE};
pub use mixing::{affine_estimate, dynamic_alpha, mix, Mixed};
pub use store::{
    build_from_target_sample, build_with_budget, maximal_subpath, query_target, CdfKnots,
    ClassConditional, KnowledgeRegime, KnowledgeStore, DEFAULT_CELL_BUDGET,
};
