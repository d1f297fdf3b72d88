//! Small Poisson objects inside the parts of a decomposition: degree-(d-2)
//! vertices, short cycles and short paths between degree-(d-1) vertices.

mod fit;
mod mass;
mod objects;
mod pk;
mod signature;

pub use fit::{empirical_fit, Fit};
pub use mass::{degree_factor, poisson_mass, Mean, PoissonParams, Provenance};
pub use objects::{count_small_objects, np_ball, object_size, ObjectCounts, DEFAULT_SEARCH_BUDGET};
pub use pk::{pk_membership, DegreeCountBase, PartReport, PkOptions, PkReport, PropertyCheck};
pub use signature::{signature, signature_plus, PoissonSignature, SignatureFailure};
