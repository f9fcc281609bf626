use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside the allowed range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error(
        "phase combination phi_1 - phi_2 + phi_3 - phi_4 = {sum} is not an odd multiple of pi \
         (off by {residual:e})"
    )]
    PhaseConditionViolated { sum: f64, residual: f64 },

    #[error(
        "normalisation factors are undefined for a one-sided mirror (r_a = {r_a}, r_b = {r_b})"
    )]
    OneSidedMirror { r_a: f64, r_b: f64 },

    #[error("normalisation factors are undefined in free space (r_a = r_b = 0)")]
    FreeSpaceDegenerate,

    #[error("grid is not strictly increasing at index {index}")]
    NonMonotonicGrid { index: usize },

    #[error(
        "quadrature with {nodes} nodes changed by {change:e} on doubling (tolerance {tolerance:e})"
    )]
    QuadratureNotConverged {
        nodes: usize,
        change: f64,
        tolerance: f64,
    },

    #[error("packet does not match its origin side: {0}")]
    SideMismatch(String),

    #[error("packet support leaves the grid after a shift of {shift} samples")]
    GridOverrun { shift: f64 },

    #[error("scattering has not completed at t = {time}: a packet still straddles the mirror")]
    ScatteringIncomplete { time: f64 },

    #[error("packets live on different grids")]
    GridMismatch,

    #[error("no packet supplied")]
    NoPackets,

    #[error("invalid wave packet: {0}")]
    InvalidPacket(String),
}

pub(crate) fn ensure_in(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<f64> {
    // NaN fails both comparisons and is rejected here too.
    if value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(Error::OutOfRange { name, value, range })
    }
}
