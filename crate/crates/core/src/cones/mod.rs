//! Continued fractions, the `M_k` forms, Todd-series coefficients of plane
//! lattice cones, cone normal forms and the Todd cocycle.

mod cf;
mod cone;
mod poly;
mod todd;

pub use cf::{continued_fraction, linear_forms_from_cf, linear_forms_m, ContinuedFractionData};
pub use cone::{
    apply, canonicalize_cone, cocycle_part, cocycle_residual, det, orthogonal_form, CanonicalCone, CocyclePart,
    LatticeCone, Vec2,
};
pub use poly::{BivariatePoly, LinearForm};
pub use todd::{
    todd_coeff_from_dedekind, todd_coeff_lattice, todd_homogeneous_lattice, todd_homogeneous_via_cf, LatticeTables,
};
