//! Link-level toolkit for coding-enhanced jamming on a 4-QAM superposition
//! wiretap channel.
//!
//! An information-bearing outer 4-QAM sequence is superposed with a jamming
//! inner 4-QAM sequence drawn from a private codebook. The legitimate
//! receiver knows the codeword index and cancels the jamming before
//! detection; the eavesdropper must detect on the 16-point superposition
//! map. The power allocation coefficient `a` trades the two error rates.
//!
//! Numeric code is generic over [`Scalar`] (`f32`, `f64`); the aliases below
//! fix it to `f64`, with `*32` variants for single precision.

pub mod channel;
pub mod codebook;
pub mod codec;
pub mod constellation;
pub mod error;
pub mod gumbel;
pub mod independence;
pub mod link;
pub mod metrics;
pub mod pnm;
pub mod rng;
pub mod scalar;
pub mod sep;
pub mod simulation;

pub use channel::{awgn, ChannelSpec};
pub use codebook::{derive_inner_sequence, CodewordIndex, KnowledgeBase};
pub use codec::{decode, encode, CodecMode, CodecSpec, Image, Shape};
pub use constellation::{
    cancel_interference, eve_detect_outer, ml_detect_outer, ml_detect_super, outer_point,
    super_point, superpose, SuperLabel, SymbolLabel,
};
pub use error::{BindingConstraint, Error, Result};
pub use gumbel::{category_to_symbol, gumbel_softmax_sample, hard_sample};
pub use independence::{gram_linear, nhsic, nhsic_with, Centering};
pub use link::{run_campaign, transmit_frame, CampaignReport, FrameOutput, LinkReport};
pub use metrics::{empirical_sep, mse, psnr, Psnr, PsnrSummary};
pub use scalar::Scalar;
pub use sep::{
    plan_pac, q_function, sep_eavesdropper, sep_legitimate, sigma_from_snr, sweep_curve,
};
pub use simulation::{simulate_sep, SimulationReport};

pub type ComplexSample = constellation::ComplexSample<f64>;
pub type Pac = constellation::Pac<f64>;
pub type SymbolSeq = constellation::SymbolSeq<f64>;
pub type NoiseSigma = sep::NoiseSigma<f64>;
pub type SepPoint = sep::SepPoint<f64>;
pub type SepCurve = sep::SepCurve<f64>;
pub type PacPlan = sep::PacPlan<f64>;
pub type Codebook = codebook::Codebook<f64>;
pub type LinkConfig = link::LinkConfig<f64>;
pub type SimulationParams = simulation::SimulationParams<f64>;
pub type SampleMatrix = independence::SampleMatrix<f64>;
pub type LossWeights = independence::LossWeights<f64>;
pub type CategoryLogits = gumbel::CategoryLogits<f64>;
pub type Temperature = gumbel::Temperature<f64>;

pub type ComplexSample32 = constellation::ComplexSample<f32>;
pub type Pac32 = constellation::Pac<f32>;
pub type NoiseSigma32 = sep::NoiseSigma<f32>;
pub type SampleMatrix32 = independence::SampleMatrix<f32>;
