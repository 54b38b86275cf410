//! Discrete Abelian gauge theory on a finite simplicial complex with
//! structure group `Z` or `Z/q`.
//!
//! Gauge potentials are 1-cochains, gauge transformations 0-cochains, and a
//! transformation acts by `A ↦ A − dg`. Observables are chains, paired with
//! configurations through the embedding `Z/q ≅ (1/q)Z/Z ⊂ Q/Z`.

pub mod cone;
pub mod cover;
pub mod deligne;
pub mod extended;
pub mod functor;
pub mod local;
pub mod pairing;

pub use cone::{eta_theta, zeta_kappa, EtaTheta, ZetaKappa};
pub use deligne::{cech_deligne, deligne_complex, phi_map, psi_map, Deligne, DeligneElement};
pub use extended::{
    extended_config, extended_config_direct, extended_obs, extended_obs_direct, ExtConfig,
    ExtConfigElement, ExtObs, ExtObsElement, ObsSymbol,
};
pub use functor::{pullback, pushforward, pushpull_functoriality, star_image, Functoriality};
pub use local::{
    local_config_complex, local_obs_complex, local_pairing, LocalConfig, LocalObs, PairingValue,
    OBS_SIGN,
};
pub use pairing::{
    separation_check, PairingContext, SeparationOutcome, SeparationReport, SeparationWitness,
    MIN_RANDOM_SAMPLE,
};
