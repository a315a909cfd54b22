//! Simplices, complexes, half-space polytopes and the brute-force hull.

mod complex;
mod hull;
mod polytope;

pub use complex::{
    is_simplicial_map, join, scheme, stellar_subdivide, AbstractComplex, GeometricComplex, Point, Simplex,
};
pub use hull::{convex_hull_oracle, Facet, HullResult, SIDE_TOLERANCE};
pub use polytope::{HalfSpace, HalfSpacePolytope, FEASIBILITY_TOLERANCE, MERGE_RADIUS};
