//! Exact computation of von Neumann dimensions of kernels of hook operators
//! over `(Z₂^{⊕Γ}/V) ⋊ Γ` for `Γ = F₂` and `Γ = Z≀Z`.

pub mod closure;
pub mod dimension;
pub mod dyadic;
pub mod error;
pub mod finite_models;
pub mod gf2;
pub mod group;
pub mod index_set;
pub mod local_rules;
pub mod measure;
pub mod verify;
pub mod word_problem;

pub use dyadic::{ExactDyadic, ExactRational};
pub use error::{Error, Result};
pub use group::{GroupElement, GroupId};
pub use index_set::IndexSetSpec;
