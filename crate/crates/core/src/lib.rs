//! Evolutionary search over fixed-length strings, simplicial geometry, and
//! closed triangulated surfaces in E³.
//!
//! The crate is organized bottom-up:
//!
//! - [`encoding`]: alphabets, genotypes, decoding functions, quotient
//!   partitions and entropy measures.
//! - [`ea`]: populations, the recombination / mutation / selection operator
//!   families, the fitness pipeline `scaling ∘ objective ∘ decode`, and the
//!   seeded generational loop.
//! - [`simplicial`]: simplices, abstract and geometric complexes, joins,
//!   stellar subdivision, half-space polytopes and the brute-force convex hull.
//! - [`mesh`]: closed triangle meshes, edge swaps, angle-deficit curvature,
//!   greedy swap descent and convexity / tightness checks.
//! - [`problems`]: LP, QP and triangulation instances wired to the EA, with
//!   their verification oracles.
//! - [`io`]: OFF meshes, point CSV files, atomic writes.

pub mod ea;
pub mod encoding;
mod error;
pub mod io;
pub(crate) mod linalg;
pub mod mesh;
pub mod problems;
pub mod rng;
pub mod simplicial;

pub use error::{Error, Result};
pub use rng::RandomStream;
