//! Group rings of finite abelian Galois groups, their module lattices, and
//! the standard projectors and involutions used everywhere else.

mod group;
mod idem;
mod lattice;
mod ring;

pub use group::Group;
pub use idem::idempotents_ej;
pub use lattice::{fitting_ideal, howell, invert_matrix, kernel_mod, mult_matrix, IdealLattice};
pub use ring::{CoeffRing, CycloRing, GrElem, Rationals, ZMod};
