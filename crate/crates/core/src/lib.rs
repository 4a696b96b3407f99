//! Decoherent two-dimensional coined quantum walks.
//!
//! The crate implements the momentum-space superoperator picture of a coined
//! walk on the square lattice whose coin is hit by a unital Kraus channel each
//! step. A walk is specified by a 4x4 unitary coin, a Kraus channel on the
//! coin space, and an initial chirality state; everything else is derived:
//!
//! * [`superop`] builds the 16x16 matrix of the one-step map
//!   `X -> sum_n M_k A_n X A_n' M_k''` in the Pauli(x)Pauli basis and analyses
//!   its spectrum.
//! * [`simulate`] evolves the walk two independent ways (direct density
//!   operator on a torus, superoperator powers plus inverse DFT) and computes
//!   characteristic/generating functions and moments of the diagonal
//!   statistic `x + y`.
//! * [`limits`] tracks the dominant root `z0(q)` of the superoperator family,
//!   its curvature at `q = 0`, and the resulting Gaussian-mixture limit of the
//!   rescaled walk.
//!
//! All numerics are dense and small (nothing larger than 16x16 except the
//! torus density operator used as a cross-check oracle), so the crate carries
//! its own complex matrix kernel in [`linalg`] instead of pulling in a full
//! linear-algebra stack.

pub mod channels;
pub mod error;
pub mod linalg;
pub mod limits;
pub mod random;
pub mod simulate;
pub mod superop;
pub mod verify;
pub mod walk;

pub use error::{Error, Result};
pub use linalg::{CMatrix, PauliVector, C64};
pub use walk::{ChiralityState, CoinOperator};
pub use channels::KrausChannel;
pub use simulate::{LatticeMode, PositionDistribution, WalkConfig, WalkSystem};
pub use superop::{MomentumPair, SpectralReport, SuperMatrix};
