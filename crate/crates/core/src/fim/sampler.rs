use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::measurement::mean_vector;
use super::model::SystemModel;
use crate::error::Result;
use crate::scalar::{Cplx, Real};

/// One noisy observation `√P·μ(ν) + n` with `n ~ CN(0, σ²I)`.
pub fn simulate_measurement<T: Real>(
    model: &SystemModel<T>,
    seed: u64,
) -> Result<DVector<Cplx<T>>> {
    let mu = mean_vector(model)?;
    let amp = model.alloc.total_power.sqrt();
    let std = (model.noise_variance / T::lit(2.0)).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> T {
        let x: f64 = StandardNormal.sample(&mut rng);
        T::lit(x) * std
    };
    Ok(mu.map(|m| {
        let re = draw();
        let im = draw();
        m * amp + Cplx::new(re, im)
    }))
}
