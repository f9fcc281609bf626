//! Cancellation-free evaluation of the two oscillatory kernels in the decay rate:
//!
//! * `sinc(u) = sin u / u`
//! * `near_field(u) = cos u / u^2 - sin u / u^3`
//!
//! Both are even, entire functions of `u`. The closed forms lose all precision
//! as `u -> 0` (the second one subtracts two terms that each blow up as `u^-2`),
//! so below [`SERIES_THRESHOLD`] they are summed from their Maclaurin series:
//!
//! ```text
//! sinc(u)       =  1    - u^2/6  + u^4/120 - ...   = sum_n (-1)^n u^(2n) / (2n+1)!
//! near_field(u) = -1/3  + u^2/30 - u^4/840 + ...   = sum_{n>=1} (-1)^n 2n u^(2n-2) / (2n+1)!
//! ```

/// Below this argument the kernels are evaluated from their series.
pub const SERIES_THRESHOLD: f64 = 0.05;

/// Series are truncated once the next term drops below this magnitude.
const SERIES_CUTOFF: f64 = 1e-16;

pub fn sinc(u: f64) -> f64 {
    if u.abs() < SERIES_THRESHOLD {
        sinc_series(u)
    } else {
        u.sin() / u
    }
}

pub fn near_field(u: f64) -> f64 {
    if u.abs() < SERIES_THRESHOLD {
        near_field_series(u)
    } else {
        let u2 = u * u;
        u.cos() / u2 - u.sin() / (u2 * u)
    }
}

pub(crate) fn sinc_series(u: f64) -> f64 {
    let u2 = u * u;
    let mut term = 1.0;
    let mut sum = term;
    let mut n = 0.0;
    loop {
        // t_{n+1} / t_n = -u^2 / ((2n+2)(2n+3))
        term *= -u2 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
        n += 1.0;
        if term.abs() < SERIES_CUTOFF {
            return sum;
        }
        sum += term;
    }
}

pub(crate) fn near_field_series(u: f64) -> f64 {
    let u2 = u * u;
    let mut term = -1.0 / 3.0;
    let mut sum = term;
    let mut n = 1.0;
    loop {
        // t_{n+1} / t_n = -u^2 / (2n (2n+3))
        term *= -u2 / ((2.0 * n) * (2.0 * n + 3.0));
        n += 1.0;
        if term.abs() < SERIES_CUTOFF {
            return sum;
        }
        sum += term;
    }
}
