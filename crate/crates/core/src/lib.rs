//! Spontaneous emission of a dipole near a two-sided semi-transparent mirror.
//!
//! * [`mirror`]: the mirror descriptor, its constraints, normalisation factors
//!   and the mirror parameter `xi`.
//! * [`decay`]: the relative decay rate as a function of distance and orientation.
//! * [`oracle`]: an independent far-field quadrature of the dipole plus its image.
//! * [`wavepacket`]: 1D mirror-image scattering of wave packets and energy audits.
//!
//! ```
//! use semimirror::{decay::relative_decay_rate, mirror::MirrorSpec};
//!
//! let mirror = MirrorSpec::new(0.6, 0.8, None)?;
//! let xi = mirror.mirror_parameter().value();
//! assert!((xi - 1.152).abs() < 1e-12);
//!
//! // A perpendicular dipole touching the mirror.
//! let ratio = relative_decay_rate(0.0, 1.0, xi)?;
//! assert!((ratio - (1.0 + 2.0 * xi / 3.0)).abs() < 1e-12);
//! # Ok::<(), semimirror::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decay;
mod error;
pub mod mirror;
pub mod oracle;
pub mod quadrature;
pub mod special;
pub mod wavepacket;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/mirror.md")]
    mod mirror {}
    #[doc = include_str!("../../../book/src/decay.md")]
    mod decay {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/wavepackets.md")]
    mod wavepackets {}
}
