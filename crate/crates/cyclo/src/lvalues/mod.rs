//! Complex-analytic side: Dirichlet characters, L-values at 0 and 1 in
//! double-double precision, the minus-part element from L(1) values, and
//! the equivariant functional equation.

mod aminus;
mod chars;
pub mod dd;
mod lfun;

pub use aminus::{
    a_minus_algebraic, a_minus_char_side, a_minus_check, a_minus_restriction_residual,
    efe_rhs_exact, equivariant_fe_check,
};
pub use chars::{characters_mod, gauss_sum, root_field_conductor, root_in_cyclo, DirichletChar};
pub use dd::{digamma, Cdd, Dd};
pub use lfun::{
    l0_truncated_exact, l1_primitive_fe, l1_primitive_series, l_values, s_factor_at_1,
};

use crate::fields::CycloElement;

/// Embed an exact cyclotomic number into complex double-double precision.
pub fn cyclo_to_cdd(x: &CycloElement) -> Cdd {
    let mut acc = Cdd::ZERO;
    for (i, c) in x.coeffs.iter().enumerate() {
        if num_traits::Zero::is_zero(c) {
            continue;
        }
        // c as dd: split numerator and denominator through f64 exactly when
        // small, otherwise via i128 halves
        let num: i128 = c.numer().try_into().unwrap_or_else(|_| {
            panic!("coefficient numerator too large for complex embedding")
        });
        let den: i128 = c.denom().try_into().unwrap_or_else(|_| {
            panic!("coefficient denominator too large for complex embedding")
        });
        let q = Dd::from_ratio_i128(num, den);
        acc = acc.add(Cdd::root_of_unity(i as i64, x.f as i64).scale(q));
    }
    acc
}
