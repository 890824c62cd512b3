//! The identity-discovery experiment: a Gröbner basis of the first
//! Maxwell relation together with the first-derivative table, over 40
//! variables in the code `x<a><b><c> = (a,b,c)`.

use crate::polyalg::{
    buchberger, parse_relation_file, GroebnerBasis, MonomialOrder, Polynomial, RelationFile,
};
use crate::Result;

/// The 29 input relations with their variable list.
pub const DISCOVERY_RELATIONS: &str = include_str!("../../data/maxwell_discovery.rel");
/// The published output basis, for two-way comparison.
pub const DISCOVERY_REFERENCE: &str = include_str!("../../data/discovery_reference.rel");

pub fn discover(relations: &[Polynomial], order: MonomialOrder) -> Result<GroebnerBasis> {
    buchberger(relations, order)
}

pub fn builtin_system() -> RelationFile {
    parse_relation_file(DISCOVERY_RELATIONS).expect("bundled relation file parses")
}

/// The published basis, over the same variables as [`builtin_system`].
pub fn builtin_reference_basis() -> RelationFile {
    parse_relation_file(DISCOVERY_REFERENCE).expect("bundled reference file parses")
}
