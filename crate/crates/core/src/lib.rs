//! Zero-set strata of equivariant maps between orthogonal representations
//! of finite groups.
//!
//! A problem is a finite group `G` acting on `V` and `W`. From it the crate
//! builds the isotropy lattice of `V` with indices
//! `s(S) = dim Fix_V(S) - dim Fix_W(S)`, homogeneous bases of equivariant
//! polynomial maps, and for each maximal isotropy subgroup a verdict on
//! whether generic equivariant maps have a branch of zeros with that
//! symmetry. [`probe`] checks those predictions on concrete maps.
//!
//! ```
//! use equistrat::{analysis, catalog};
//!
//! let problem = catalog::load(catalog::D6).unwrap();
//! let report = analysis::analyze_problem(&problem).unwrap();
//! assert_eq!(report.included(), vec!["Z2(k)", "Z2(ks)"]);
//! ```

pub mod analysis;
pub mod catalog;
pub mod cli;
pub mod equivariants;
pub mod error;
pub mod group;
pub mod isotropy;
pub mod linalg;
pub mod newton;
pub mod poly;
pub mod probe;
pub mod report;
pub mod representation;
pub mod spec;

pub use error::{Error, Result};
