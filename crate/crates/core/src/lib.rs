//! Separating codes over finite fields: exact deciders, Reed-Solomon
//! non-separation witnesses, upper bounds and parameter scans.

pub mod bounds;
pub mod codes;
pub mod error;
pub mod field;
pub mod poly;
pub mod scan;
pub mod separation;
pub mod witness;

pub use codes::{min_distance, rs_code, rs_codeword, Code, Codeword, RsCodeSpec};
pub use error::{Error, Result};
pub use field::{Domain, FieldElement, FieldSpec, FiniteField};
pub use poly::Poly;
pub use separation::{
    desc_contains, desc_intersects, feasible_intersects, is_ipp, is_restricted_separating,
    is_separating, CoalitionPair, IppVerdict, SeparationVerdict, Violation,
};
