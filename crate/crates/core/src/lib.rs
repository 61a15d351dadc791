//! Independence notions for submodular set functions.
//!
//! Provides exact evaluation of submodular information measures, checks for
//! six notions of submodular independence with reproducible witnesses, an
//! entropy backend for finite joint distributions, and a greedy selector
//! under independence constraints.

pub mod entropy;
pub mod error;
pub mod formats;
pub mod function;
pub mod independence;
pub mod instances;
pub mod measures;
pub mod optimizer;
pub mod registry;
pub mod sets;
pub mod value;

pub use entropy::{builtin_distribution, entropy, make_entropy_function, JointDistribution};
pub use error::{Error, Result};
pub use function::{
    conditional_gain, evaluate, validate, CoverageMap, Family, SetFn, SetFunction, ValidationReport,
};
pub use independence::{
    check_type, classify, verify_lattice, IndependenceReport, IndependenceType, Verdict, Witness,
};
pub use measures::{multiset_mutual_information, mutual_information, total_correlation};
pub use optimizer::{constrained_select, verify_constraint, ConstraintSpec, SelectionResult};
pub use sets::{GroundSet, Subset};
pub use value::{Exactness, Tolerance, Value};
