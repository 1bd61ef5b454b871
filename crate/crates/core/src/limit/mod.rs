//! Cones over the draw-delete chain, their moments, and the limit measure
//! they determine on `[0, 1]`.

pub mod approx;
pub mod candidate;
pub mod conjugacy;
pub mod cone;
pub mod moments;

pub use approx::{approximant, cdf_distance, Approximant};
pub use candidate::{cone_from_candidate, match_candidate, mixed_moment, LimitCandidate, MatchVerdict};
pub use conjugacy::{conjugacy_check, ConjugacyFault, ConjugacyReport};
pub use cone::{cone_from_coalgebra, verify_cone, ConePrefix, ConeVerdict};
pub use moments::{
    check_complete_monotone, finite_difference, moments_from_cone, reconstruct_cone, Monotonicity, MomentSeq,
};
