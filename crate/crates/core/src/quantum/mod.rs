//! States, channels and the random generators behind the Monte Carlo campaigns.

mod channel;
mod extremal;
mod random;
mod rng;
mod state;

pub use channel::QuantumChannel;
pub use extremal::{
    cyclic_shift, extremal_qubit_channel, extremal_ququart_channel, extremal_qutrit_channel, qutrit_unitaries,
    sample_extremal_channel, sample_extremal_params, ExtremalParams, ExtremalQuartParams, ExtremalQubitChannelParams,
    ExtremalQutritChannelParams,
};
pub use random::{
    ginibre, haar_unitary, random_channel_choi, random_hermitian, random_mixed_unitary, random_state, unitarity_defect,
};
pub use rng::RngStream;
pub use state::{BlochState, DensityMatrix};

use crate::error::Result;
use crate::linalg::HermitianMatrix;

pub fn apply(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.apply(rho)
}

pub fn dual_apply(ch: &QuantumChannel, sigma: &HermitianMatrix) -> Result<HermitianMatrix> {
    ch.dual_apply(sigma)
}
