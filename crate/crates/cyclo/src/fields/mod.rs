//! Exact cyclotomic arithmetic, abelian fields, cyclotomic units and the
//! tower K_n = K(mu_{p^(n+1)}).

mod abelian;
mod cyclo;
mod tower;
mod units;

pub use abelian::{
    all_subgroups, is_fundamental_discriminant, subgroup_closure, true_conductor, AbelianField,
};
pub use cyclo::{cyclotomic_poly, CycloCtx, CycloElement};
pub use tower::{make_tower, TowerLevel};
pub use units::{
    check_norm_relation, check_norm_to_q, coset_reps, cyclotomic_unit, field_norm_to_q,
    norm_to_subfield, verify_norm_relations, FactoredUnit, NormRelCheck,
};
