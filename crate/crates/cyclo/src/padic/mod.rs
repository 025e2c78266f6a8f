//! The local laboratory for K = Q: precision p-adics in Z_p[zeta_{p^(n+1)}],
//! the p-adic logarithm, the trace-pairing maps and their image lattices,
//! and p-adic L-function truncations.

mod lfun;
mod local;
mod maps;

pub use lfun::{
    b1_omega_inverse_valuation, coherence_check, lambda_mu_stable, padic_l_truncation, theta_nj,
    LambdaMuReport, PowerSeriesTruncation,
};
pub use local::{padic_exp, padic_log, LocalCtx, LocalElement};
pub use maps::{
    a_ideal, b_element_numerator, level_group, minus_unit, s_map_checked, s_map_raw,
    theta_star_plus_ring_lattice, w_image_sampled, w_map, w_map_equivariant_residual, FracGrElem,
    SMapCheck,
};
