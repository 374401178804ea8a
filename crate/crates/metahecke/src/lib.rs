//! Exact computer algebra for affine Hecke algebras with unequal parameters,
//! rank-one intertwining identities, Bernstein block classification for
//! covers of classical groups, and Langlands–Deligne parameter combinatorics
//! for metaplectic groups.

pub mod blocks;
pub mod exact;
pub mod hecke;
pub mod laurent;
mod linalg;
pub mod mpparams;
pub mod rankone;
pub mod rootdata;
