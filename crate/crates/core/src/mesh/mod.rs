//! Closed triangle meshes, edge swaps and curvature-driven swap descent.

mod convexity;
mod curvature;
mod descent;
mod objective;
pub mod shapes;
mod surface;
mod swap;

pub use convexity::{
    is_convex_position_mesh, is_tight_2surface, matches_hull_facets, separating_direction, MIN_TIGHTNESS_DIRECTIONS,
};
pub use curvature::{
    absolute_curvature, angle_deficit, angle_deficits, cone_curvature, corner_angles, l1_curvature,
    positive_curvatures, total_signed_curvature, DEGENERATE_AREA,
};
pub use descent::{greedy_descent, DescentPolicy, DescentStep, DescentTrace, IMPROVEMENT_THRESHOLD};
pub use objective::CurvatureMeasure;
pub use surface::{canonical_triangle, TriSurface};
pub use swap::{legal_swaps, swap_edge, swap_move, SwapMove};

pub(crate) use objective::CurvatureState;
pub(crate) use shapes::hull_mesh_from;
pub(crate) use swap::apply_in_place;
