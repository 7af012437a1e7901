//! Points, lines and closed-form distance formulas in H² and H³.

mod closing;
mod distance;
mod fermi;
mod hyperboloid;
mod lines;
mod point;
mod trig;

pub use closing::{closing_lemma_check, ClosingReport};
pub(crate) use distance::dist_unchecked;
pub use distance::{dist, horo_decay, horo_to_hyperbolic, hyperbolic_to_horo, HoroDecay};
pub use fermi::{FermiCoords, FermiFrame};
pub use hyperboloid::{exp_at, log_at, lorentz_dot, HyperboloidPoint, Tangent};
pub use lines::{cross_ratio, cross_ratio_complex, line_distance, LineDistance, LineRelation};
pub use point::{BoundaryPoint, Dim, GeodesicLine, HPoint};
pub use trig::{
    circle_arc, circle_chord, equidistant_separation, leaf_pair_predicate, prism_distance,
    right_triangle_solve, two_spikes_distance, RightTriangle, TwoSpikes,
};
