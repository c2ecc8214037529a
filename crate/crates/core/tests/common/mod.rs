#![allow(dead_code)]

use nalgebra::{DVector, Point3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starloc_core::channel::{PathLossModel, UpaConfig};
use starloc_core::fim::SystemModel;
use starloc_core::geometry::{channel_params_from_scene, SceneGeometry};
use starloc_core::starris::{make_design, DesignKind, EnergySplit, PowerAllocation};
use starloc_core::Cplx;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn point(rng: &mut ChaCha8Rng, lo: [f64; 3], hi: [f64; 3]) -> Point3<f64> {
    Point3::new(
        rng.random_range(lo[0]..hi[0]),
        rng.random_range(lo[1]..hi[1]),
        rng.random_range(lo[2]..hi[2]),
    )
}

/// Scene with every link at least 1 m long, elevations away from ±π/2, and
/// azimuth derivatives (∝ sinθ·sinφ) large enough to be resolved by finite
/// differences.
pub fn random_scene(rng: &mut ChaCha8Rng) -> SceneGeometry<f64> {
    loop {
        let scene = SceneGeometry {
            bs: point(rng, [-3.0, -3.0, 5.0], [3.0, 3.0, 12.0]),
            ris: point(rng, [-3.0, 0.0, 2.0], [3.0, 3.0, 7.0]),
            ms_outdoor: point(rng, [-8.0, -8.0, 0.0], [8.0, 8.0, 3.0]),
            ms_indoor: point(rng, [-8.0, -8.0, 0.0], [8.0, 8.0, 3.0]),
        };
        let Ok(params) = channel_params_from_scene(&scene) else {
            continue;
        };
        let Ok(s4) = scene.bs_ris_link() else {
            continue;
        };
        let ok = params
            .links
            .iter()
            .chain(std::iter::once(&s4))
            .all(|l| l.d > 1.0 && l.phi.abs() < 1.3)
            && params
                .links
                .iter()
                .all(|l| (l.theta.sin() * l.phi.sin()).abs() > 0.05);
        if ok {
            return scene;
        }
    }
}

/// Randomized system: arrays 2..=4 per axis, random spacing, design, split,
/// allocation, loss model and SNR.
pub fn random_model(rng: &mut ChaCha8Rng) -> SystemModel<f64> {
    let upa = |rng: &mut ChaCha8Rng| UpaConfig {
        nx: rng.random_range(2..=4),
        nz: rng.random_range(2..=4),
        spacing_x: rng.random_range(0.3..0.7),
        spacing_z: rng.random_range(0.3..0.7),
    };
    let bs_upa = upa(rng);
    let ris_upa = upa(rng);
    let n = ris_upa.len();
    let kind = [DesignKind::Dft, DesignKind::Hadamard, DesignKind::Random][rng.random_range(0..3)];
    let k = match kind {
        DesignKind::Hadamard => (2 * n).next_power_of_two(),
        _ => 2 * n + rng.random_range(0..4),
    };
    let profiles = make_design(kind, n, k, rng.random()).unwrap();
    let loss = [
        PathLossModel::SquaredDistance,
        PathLossModel::FreeSpace,
        PathLossModel::Umi3gpp,
    ][rng.random_range(0..3)];
    let mut model = SystemModel {
        scene: random_scene(rng),
        bs_upa,
        ris_upa,
        carrier: Default::default(),
        loss,
        profiles,
        split: EnergySplit::from_refraction(rng.random_range(0.2..0.95)).unwrap(),
        alloc: PowerAllocation::from_outdoor(rng.random_range(0.2..0.95), 1.0).unwrap(),
        noise_variance: 1.0,
        k_slots: k,
    };
    model.set_snr_db(rng.random_range(0.0..20.0));
    model
}

pub fn rel_err(a: &DVector<Cplx<f64>>, b: &DVector<Cplx<f64>>) -> f64 {
    (a - b).norm() / a.norm()
}

pub fn max_rel<const R: usize, const C: usize>(
    a: &nalgebra::SMatrix<f64, R, C>,
    b: &nalgebra::SMatrix<f64, R, C>,
) -> f64 {
    (a - b).amax() / a.amax()
}

/// Full-size arrays (4×4 BS, 8×8 surface, 128 slots) with a random scene,
/// design, split, allocation and SNR.
pub fn random_full_size_model(rng: &mut ChaCha8Rng) -> SystemModel<f64> {
    let mut model = SystemModel::reference();
    model.scene = random_scene(rng);
    let kind = [DesignKind::Dft, DesignKind::Hadamard, DesignKind::Random][rng.random_range(0..3)];
    model.profiles = make_design(kind, 64, 128, rng.random()).unwrap();
    model.split = EnergySplit::from_refraction(rng.random_range(0.2..0.95)).unwrap();
    model.alloc = PowerAllocation::from_outdoor(rng.random_range(0.2..0.95), 1.0).unwrap();
    model.set_snr_db(rng.random_range(0.0..20.0));
    model
}
