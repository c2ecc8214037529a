//! Mean-vector assembly, Fisher information and Cramér-Rao bounds.

mod bounds;
mod derivatives;
mod measurement;
mod model;
mod sampler;

pub use bounds::{
    block_inverse_via_projections, crlb_channel, crlb_position, evaluate, fim_channel,
    fim_position, CrlbReport, FisherMatrix, PositionCrlb, PositionFim,
};
pub use derivatives::{
    analytic_mean_jacobian, analytic_mean_jacobian_at, distance_factor, link_derivatives,
    DerivativeMatrices, MeanJacobian,
};
pub use measurement::{mean_vector, mean_vector_at, measurement_matrices, MeasurementMatrices};
pub use model::SystemModel;
pub use sampler::simulate_measurement;

/// Parameter labels in column order of the mean Jacobian.
pub const PARAMETER_NAMES: [&str; 9] = [
    "theta1", "phi1", "d1", "theta2", "phi2", "d2", "theta3", "phi3", "d3",
];
