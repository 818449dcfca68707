//! Quantum discord and conditional-entropy distributions for two-qubit X
//! states and for spin pairs in the ground state of the XXZ Heisenberg ring.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the ground
//! state cache and the command line live in the `spindiscord` crate.
//!
//! Module map:
//!
//! - [`xstate`]: X-state density matrices, conditional entropy for an
//!   arbitrary projective measurement on qubit B, closed-form discord.
//! - [`spinchain`]: fixed-magnetization sector basis, matrix-free XXZ ring
//!   Hamiltonian and a Lanczos ground-state solver.
//! - [`correlators`]: two-site reduced density matrices, correlation
//!   functions, the `k = Γᴼ/Γᴰ` ratio and discord profiles.
//! - [`distribution`]: distribution of the conditional entropy over
//!   measurement directions, with its moments.
//! - [`scaling`]: phenomenological critical-scaling model for correlation
//!   functions and normalized discord.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod correlators;
pub mod distribution;
pub mod entropy;
mod error;
pub mod scaling;
pub mod spinchain;
pub mod xstate;

pub use error::{Error, Result};

pub use correlators::{
    discord_profile_vs_delta, discord_profile_vs_r, k_ratio, pair_correlations, two_site_rdm,
    KRatio, PairCorrelations,
};
pub use distribution::{sample_distribution, EntropyHistogram, Scheme};
pub use entropy::binary_entropy;
pub use spinchain::{build_sector, ground_state, GroundState, SectorBasis, SolverOptions};
pub use xstate::{discord, ChosenTheta, DiscordResult, MeasurementBasis, XState};
