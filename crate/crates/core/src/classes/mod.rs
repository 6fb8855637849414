//! Concrete class constructions and the rate machinery.
//!
//! Every constructor enumerates its class in a documented canonical order and
//! refuses to build more than `cap` generators.

pub mod atdim_example;
pub mod diagonal;
pub mod full;
pub mod linear;
pub mod parity;
pub mod product;
pub mod rate;
pub mod shifted;
pub mod taxonomy;

pub use atdim_example::make_atdim_example_class;
pub use diagonal::diagonal_rate;
pub use full::make_full_class;
pub use linear::{enumerate_linear_class, make_linear_generator, LinearParams};
pub use parity::{make_parity_class, ParityParams};
pub use product::make_product_class;
pub use rate::{interval_density, normalize_rate, rate_to_set, IntervalSet, RateTable};
pub use shifted::{make_shifted_subset_class, ShiftedSubsetParams};
pub use taxonomy::make_taxonomy_class;
