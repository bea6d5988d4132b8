//! Sampleable measure families with their LDP metadata.

mod family;
mod metadata;
mod orlicz_fn;
mod regime;
mod samplers;

pub use family::{ChainSettings, DistributionSpec, NormSampler};
pub use metadata::{ldp_metadata, ldp_metadata_kn, AssumptionTag, LdpMetadata, RCase};
pub use orlicz_fn::OrliczFunction;
pub use regime::Regime;
pub use samplers::{
    sample_gaussian_mixture, sample_lp_ball, sample_orlicz_ball, sample_pgn, sample_product, Marginal, OrliczChain,
    ORLICZ_BURNIN_SWEEPS,
};
