use crate::channel::{
    bs_ris_channel, los_channel, CarrierConfig, ChannelMatrix, PathLossModel, UpaConfig,
};
use crate::error::{Error, Result};
use crate::geometry::{channel_params_from_scene, ChannelParams, SceneGeometry};
use crate::scalar::{Cplx, Real};
use crate::starris::{make_design, DesignKind, EnergySplit, PhaseProfilePair, PowerAllocation};

use nalgebra::DVector;

/// Everything needed to evaluate the received-signal mean and its Fisher
/// information.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemModel<T: Real> {
    pub scene: SceneGeometry<T>,
    pub bs_upa: UpaConfig<T>,
    pub ris_upa: UpaConfig<T>,
    pub carrier: CarrierConfig<T>,
    pub loss: PathLossModel,
    pub profiles: PhaseProfilePair<T>,
    pub split: EnergySplit<T>,
    pub alloc: PowerAllocation<T>,
    /// Noise variance `σ²` in watts.
    pub noise_variance: T,
    pub k_slots: usize,
}

impl<T: Real> SystemModel<T> {
    /// 4×4 BS array, 8×8 surface, 128 slots, DFT profiles, 28 GHz carrier,
    /// `ε1 = η1 = √0.5`, 1 W pilot power and 15 dB SNR.
    pub fn reference() -> Self {
        let half = T::lit(0.5).sqrt();
        let profiles = make_design(DesignKind::Dft, 64, 128, 0).expect("valid reference design");
        let mut model = Self {
            scene: SceneGeometry::reference(),
            bs_upa: UpaConfig::half_wavelength(4, 4),
            ris_upa: UpaConfig::half_wavelength(8, 8),
            carrier: CarrierConfig::default(),
            loss: PathLossModel::SquaredDistance,
            profiles,
            split: EnergySplit {
                eps1: half,
                eps2: half,
            },
            alloc: PowerAllocation {
                eta1: half,
                eta2: half,
                total_power: T::one(),
            },
            noise_variance: T::one(),
            k_slots: 128,
        };
        model.set_snr_db(T::lit(15.0));
        model
    }

    pub fn validate(&self) -> Result<()> {
        self.scene.validate()?;
        self.bs_upa.validate()?;
        self.ris_upa.validate()?;
        self.split.validate()?;
        self.alloc.validate()?;
        let n = self.ris_upa.len();
        let (o1, o2) = (&self.profiles.omega1, &self.profiles.omega2);
        if o1.shape() != (n, self.k_slots) || o2.shape() != (n, self.k_slots) {
            return Err(Error::DimensionMismatch(format!(
                "profiles are {:?}/{:?}, expected {n}x{}",
                o1.shape(),
                o2.shape(),
                self.k_slots
            )));
        }
        if !(self.noise_variance > T::zero()) || !self.noise_variance.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise variance {} must be positive",
                self.noise_variance
            )));
        }
        Ok(())
    }

    /// `P/σ²`.
    pub fn snr(&self) -> T {
        self.alloc.total_power / self.noise_variance
    }

    /// Keeps `P` and sets `σ² = P / 10^(dB/10)`.
    pub fn set_snr_db(&mut self, db: T) {
        self.noise_variance = self.alloc.total_power / T::lit(10.0).powf(db / T::lit(10.0));
    }

    pub fn with_snr_db(mut self, db: T) -> Self {
        self.set_snr_db(db);
        self
    }

    /// BS antennas `M`.
    pub fn bs_antennas(&self) -> usize {
        self.bs_upa.len()
    }

    /// Surface elements `N`.
    pub fn ris_elements(&self) -> usize {
        self.ris_upa.len()
    }

    pub fn channel_params(&self) -> Result<ChannelParams<T>> {
        channel_params_from_scene(&self.scene)
    }

    pub fn bs_ris_channel(&self) -> Result<ChannelMatrix<T>> {
        let s4 = self.scene.bs_ris_link()?;
        bs_ris_channel(&s4, &self.bs_upa, &self.ris_upa, self.loss, &self.carrier)
    }

    /// `h1, h2, h3` for the given channel parameters.
    pub(crate) fn link_channels(&self, params: &ChannelParams<T>) -> Result<[DVector<Cplx<T>>; 3]> {
        let [l1, l2, l3] = &params.links;
        let h = |s, cfg, i| los_channel(s, cfg, self.loss, &self.carrier, i).map(|c| c.entries);
        Ok([
            h(l1, &self.bs_upa, 1)?,
            h(l2, &self.ris_upa, 2)?,
            h(l3, &self.ris_upa, 3)?,
        ])
    }

    /// Amplitude multiplying each link's contribution to the mean:
    /// `η1`, `η1·ε2`, `η2·ε1`.
    pub fn link_weights(&self) -> [T; 3] {
        let (a, s) = (&self.alloc, &self.split);
        [a.eta1, a.eta1 * s.eps2, a.eta2 * s.eps1]
    }
}
