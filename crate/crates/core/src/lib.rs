//! Finite-field multiple access (FFMA) over GF(2^m).
//!
//! Users are separated by element pairs of an orthogonal code over GF(2^m)
//! before channel coding, so one binary code protects the superposition of
//! all users over the full blocklength. The crate provides the field and
//! element-pair primitives, LDPC construction and sum-product decoding, the
//! sparse-, diagonal- and polarization-adjusted transceivers, a slotted-ALOHA
//! baseline and a Monte-Carlo driver over the Gaussian multiple-access channel.

pub mod analysis;
pub mod baseline_aloha;
pub mod channel;
pub mod ep_code;
pub mod ffma_system;
pub mod gf2m;
pub mod linear_code;
pub mod sim;
