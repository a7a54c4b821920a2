//! Coined discrete-time quantum walks on two-dimensional tori.
//!
//! The walk lives on `H_coin ⊗ H_position` with a four-state coin, the
//! flip-flop shift and the Grover coin. The crate provides position-space
//! simulation, the closed-form momentum-space eigensystem, exact limiting
//! distributions, mixing-time measurements and the marked-vertex search walk.

pub mod classical;
pub mod error;
pub mod evolution;
pub mod fit;
pub mod fourier;
pub mod lattice;
pub mod limiting;
pub mod mixing;
pub mod search;
pub mod spectral;

pub use error::{Result, WalkError};
pub use evolution::{
    apply_shift, evolve, grover_coin, step, step_marked, CoinOperator, MarkedCoinSpec, WalkOperator,
    Walker,
};
pub use lattice::{
    make_global_uniform, make_localized_uniform_coin, total_variation, CoinIndex, Distribution,
    LatticeGeometry, WalkState,
};
pub use spectral::{build_eigensystem, fourier_evolve, reduced_block, theta_of_mode, EigenSystem};
