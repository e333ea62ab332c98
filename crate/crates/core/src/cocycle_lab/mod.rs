//! The cocycle layer: current-algebra cocycles on S¹ and S³/B³, group
//! cohomology of finite groups and Čech cochains over abstract covers.

pub mod cech;
pub mod current;
pub mod group;

pub use cech::{cech_coboundary, CechCochainTable, Cover};
pub use current::{
    calibrate_invariance, default_c2, invariance_residual, kac_moody, km_cocycle_residual, lambda_cochain,
    lie_coboundary_2, mf_boundary_term, mickelsson_faddeev, ActionConvention, Calibration, MFContext,
};
pub use group::{all_normalized_cochains, group_coboundary, h2_brute_force, h2_count, GroupCochainTable};
