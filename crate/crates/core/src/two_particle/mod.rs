//! Two-particle states built from single-particle packets.

mod same_side;
mod separation;
mod state;

pub use same_side::{
    coincidence_probability, later_outgoing_time, quadrant_table, same_side_closed_form,
    Coincidence, QuadrantProbabilities, SameSideResult, Source,
};
pub use separation::SeparationDistribution;
pub use state::{pair_density, PairFields, TwoParticleState, MAX_INITIAL_OVERLAP};
