//! Lipschitz maps between hyperbolic spaces: the Fermi stretch map between
//! right triangles, one-point extensions of finite maps, and sampled
//! Lipschitz-constant estimators.

mod extension;
mod fermi_map;
mod lipschitz;

pub use extension::{one_point_extension, Extension, FiniteMapData};
pub use fermi_map::{fermi_stretch, FermiStretchMap, Profile};
pub use lipschitz::{
    global_lip_estimate, local_lip_estimate, GlobalLipEstimate, LocalLipEstimate, PartialMap, RadiusEstimate,
    DEFAULT_RADII,
};
