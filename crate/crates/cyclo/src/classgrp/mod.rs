//! Desk-scale class-group machinery: real quadratic form class groups with
//! Galois action, exact Bernoulli numbers and minus class numbers, Herbrand
//! irregular pairs, Minkowski h=1 certification.

mod bern;
mod forms;
mod hminus;
mod mink;

pub use bern::{
    b1_chi, bernoulli_numbers, herbrand_pairs, von_staudt_clausen_denominator,
};
pub use forms::{
    class_count_via_small_norms, compose, inverse_form, is_reduced, principal_form, reduce,
    reduced_forms, rho, FormClassGroup, QuadForm,
};
pub use hminus::{minus_class_number, minus_class_number_float};
pub use mink::{abelian_field_disc, minkowski_certify_h1, Certificate};
