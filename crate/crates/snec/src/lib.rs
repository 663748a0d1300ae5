//! Secure network-error-correcting codes over a simulated random-linear-
//! network-coding channel with eavesdropping and jamming adversaries.
//!
//! The crate is organized in layers: finite fields and dense linear algebra
//! at the bottom, Gabidulin (MRD) codebooks and the one-shot channel model in
//! the middle, then the three coding layers (coset-coding secrecy,
//! shared-secret error control, single secret bit) and their composition
//! into the full rate-(C − Z_O − Z_I) scheme. A broken earlier single-bit
//! scheme and the attacks that break it live in `legacy`; `sim` drives
//! seeded Monte Carlo campaigns and exhaustive secrecy audits.
//!
//! See the `examples/` directory for one runnable program per capability,
//! and the `snec-sim` binary for batch runs.

pub mod channel;
pub mod error_control;
pub mod fields;
pub mod full_scheme;
pub mod legacy;
pub mod linalg;
pub mod rank_codes;
pub mod secrecy;
pub mod secret_bit;
pub mod sim;

pub use channel::{AdversaryStrategy, ChannelRealization, CodeParams};
pub use fields::{BaseField, ExtField, Field};
pub use linalg::Matrix;
pub use rank_codes::SecrecyCodebook;

