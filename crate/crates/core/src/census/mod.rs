//! Exact counting and exact-uniform sampling of `P_n(1, d)`, `P_{n,π}(l, d)`
//! and `P_n(l, d)`, with brute-force enumeration and an MCMC chain as
//! independent checks.

mod count;
mod enumerate;
mod mcmc;
mod partitioned;
mod seed;

pub use count::{count_bounded_degree, sample_bounded_degree, CensusCaps, CountBackend, CountTable};
pub use enumerate::{enumerate_class, MAX_ENUMERATION_ORDER};
pub use mcmc::{mcmc_toggle_chain, ToggleChain};
pub use partitioned::{
    partition_class_count, sample_partitioned, sample_uniform_pld, size_vector_weights, PldDraw,
    PldSampler, SizeVectorWeight,
};
pub use seed::Seed;
