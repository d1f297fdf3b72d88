//! First-order logic of graphs: syntax, evaluation, the same-part formula
//! `xi` and Ehrenfeucht–Fraïssé equivalence.

mod ef;
pub(crate) mod eval;
mod formula;
mod library;
mod parser;
mod xi;

pub use ef::{ef_equivalent, ef_equivalent_capped, EfCaps};
pub use eval::{evaluate, holds, Assignment, CompiledFormula};
pub use formula::Formula;
pub use library::{sentence_library, LibrarySentence};
pub use parser::{parse_formula, parse_sentence};
pub use xi::{build_xi, eval_xi_fast, xi_partition, XiFailure, XiParams};
