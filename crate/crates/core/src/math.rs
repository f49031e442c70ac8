//! Float math that works with or without `std`.
//!
//! With the default `std` feature the intrinsic methods are used; in
//! `no_std` builds the `libm` feature supplies the same functions.

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("qimc-core needs either the `std` or the `libm` feature");

#[cfg(feature = "std")]
mod imp {
    #[inline]
    pub fn cos(x: f64) -> f64 {
        x.cos()
    }

    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }

    #[inline]
    pub fn log10(x: f64) -> f64 {
        x.log10()
    }

    /// Rounds to the nearest integer, halves away from zero.
    #[inline]
    pub fn round(x: f64) -> f64 {
        x.round()
    }
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
mod imp {
    #[inline]
    pub fn cos(x: f64) -> f64 {
        libm::cos(x)
    }

    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }

    #[inline]
    pub fn log10(x: f64) -> f64 {
        libm::log10(x)
    }

    #[inline]
    pub fn round(x: f64) -> f64 {
        libm::round(x)
    }
}

pub(crate) use imp::{cos, log10, round, sqrt};
