//! Deterministic radio-propagation arithmetic.
//!
//! Free-space (Friis) link gains, thermal noise power, and the mean received
//! SNR per watt of transmit power for each of the four links between the two
//! users and the base station. Everything here is strict SI: Hz, m, W.
//! Decibel conversions belong to the CLI boundary, not to this module.

use crate::error::{Error, Result};
use crate::real::{lit, Real, SPEED_OF_LIGHT_M_PER_S};

/// Radio parameters for the cellular band, the short-range band, and the
/// fading environment.
///
/// Antenna gains and fading mean-square gains are dimensionless linear
/// quantities; `n0` is the one-sided noise power spectral density in W/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams<T> {
    /// Cellular carrier frequency in Hz.
    pub f_c: T,
    /// Cellular channel bandwidth in Hz.
    pub b_c: T,
    /// Short-range (ISM) carrier frequency in Hz.
    pub f_s: T,
    /// Short-range channel bandwidth in Hz.
    pub b_s: T,
    /// Noise power spectral density in W/Hz.
    pub n0: T,
    /// Antenna gain of user 1 (linear).
    pub g_u1: T,
    /// Antenna gain of user 2 (linear).
    pub g_u2: T,
    /// Antenna gain of the base station (linear).
    pub g_bs: T,
    /// Mean-square fading gain of the U1→U2 channel.
    pub sigma2_12: T,
    /// Mean-square fading gain of the U2→U1 channel.
    pub sigma2_21: T,
    /// Mean-square fading gain of the U1→BS channel.
    pub sigma2_1b: T,
    /// Mean-square fading gain of the U2→BS channel.
    pub sigma2_2b: T,
}

impl<T: Real> Default for RadioParams<T> {
    /// Default parameter set: 1.8 GHz / 2 MHz cellular channel, 2.4 GHz /
    /// 20 MHz short-range channel, 0 dBi antennas, unit fading gains, and
    /// thermal noise at -174 dBm/Hz (room temperature).
    fn default() -> Self {
        Self {
            f_c: lit(1.8e9),
            b_c: lit(2.0e6),
            f_s: lit(2.4e9),
            b_s: lit(2.0e7),
            n0: lit(10f64.powf(-20.4)),
            g_u1: T::one(),
            g_u2: T::one(),
            g_bs: T::one(),
            sigma2_12: T::one(),
            sigma2_21: T::one(),
            sigma2_1b: T::one(),
            sigma2_2b: T::one(),
        }
    }
}

impl<T: Real> RadioParams<T> {
    /// Checks that every field is strictly positive and finite.
    pub fn validate(&self) -> Result<()> {
        ensure_positive("f_c", self.f_c)?;
        ensure_positive("b_c", self.b_c)?;
        ensure_positive("f_s", self.f_s)?;
        ensure_positive("b_s", self.b_s)?;
        ensure_positive("n0", self.n0)?;
        ensure_positive("g_u1", self.g_u1)?;
        ensure_positive("g_u2", self.g_u2)?;
        ensure_positive("g_bs", self.g_bs)?;
        ensure_positive("sigma2_12", self.sigma2_12)?;
        ensure_positive("sigma2_21", self.sigma2_21)?;
        ensure_positive("sigma2_1b", self.sigma2_1b)?;
        ensure_positive("sigma2_2b", self.sigma2_2b)?;
        Ok(())
    }
}

/// Link distances in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry<T> {
    /// Distance from U1 to the base station.
    pub d_1b: T,
    /// Distance from U2 to the base station.
    pub d_2b: T,
    /// Distance from U1 to U2.
    pub d_12: T,
    /// Distance from U2 to U1.
    pub d_21: T,
}

impl<T: Real> Default for Geometry<T> {
    fn default() -> Self {
        Self::symmetric(lit(1000.0), lit(1000.0), lit(20.0))
    }
}

impl<T: Real> Geometry<T> {
    /// Builds a geometry with a reciprocal inter-user link (`d_21 = d_12`).
    pub fn symmetric(d_1b: T, d_2b: T, d_12: T) -> Self {
        Self {
            d_1b,
            d_2b,
            d_12,
            d_21: d_12,
        }
    }

    /// Checks that every distance is strictly positive and finite.
    pub fn validate(&self) -> Result<()> {
        ensure_positive("d_1b", self.d_1b)?;
        ensure_positive("d_2b", self.d_2b)?;
        ensure_positive("d_12", self.d_12)?;
        ensure_positive("d_21", self.d_21)?;
        Ok(())
    }
}

/// Deterministic linear power gain of a link: received power per unit
/// transmit power, fading excluded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGain<T> {
    pub value: T,
}

/// The four point-to-point links of the two-user uplink.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    U1ToBs,
    U2ToBs,
    U1ToU2,
    U2ToU1,
}

pub(crate) fn ensure_positive<T: Real>(name: &'static str, value: T) -> Result<()> {
    if value.is_finite() && value > T::zero() {
        Ok(())
    } else {
        Err(Error::NonPositive {
            name,
            value: value.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Free-space power gain `(λ / 4πd)² · g_tx · g_rx` with `λ = c / f`.
pub fn friis_factor<T: Real>(f: T, d: T, g_tx: T, g_rx: T) -> Result<LinkGain<T>> {
    ensure_positive("frequency", f)?;
    ensure_positive("distance", d)?;
    ensure_positive("g_tx", g_tx)?;
    ensure_positive("g_rx", g_rx)?;
    let lambda = lit::<T>(SPEED_OF_LIGHT_M_PER_S) / f;
    let x = lambda / (lit::<T>(4.0) * T::PI() * d);
    Ok(LinkGain {
        value: x * x * g_tx * g_rx,
    })
}

/// Thermal noise power `n0 · b` in watts.
pub fn noise_power<T: Real>(n0: T, b: T) -> Result<T> {
    ensure_positive("n0", n0)?;
    ensure_positive("bandwidth", b)?;
    Ok(n0 * b)
}

/// Mean received SNR per watt of transmit power on the given link, with the
/// fading variance folded in.
///
/// The user-to-base-station links run in the cellular band; the cross-user
/// links run in the short-range band with the `g_u1 · g_u2` antenna product.
pub fn mean_snr_per_watt<T: Real>(
    link: Link,
    radio: &RadioParams<T>,
    geo: &Geometry<T>,
) -> Result<T> {
    radio.validate()?;
    geo.validate()?;
    let (f, b, d, g_tx, g_rx, sigma2) = match link {
        Link::U1ToBs => (
            radio.f_c,
            radio.b_c,
            geo.d_1b,
            radio.g_u1,
            radio.g_bs,
            radio.sigma2_1b,
        ),
        Link::U2ToBs => (
            radio.f_c,
            radio.b_c,
            geo.d_2b,
            radio.g_u2,
            radio.g_bs,
            radio.sigma2_2b,
        ),
        Link::U1ToU2 => (
            radio.f_s,
            radio.b_s,
            geo.d_12,
            radio.g_u1,
            radio.g_u2,
            radio.sigma2_12,
        ),
        Link::U2ToU1 => (
            radio.f_s,
            radio.b_s,
            geo.d_21,
            radio.g_u1,
            radio.g_u2,
            radio.sigma2_21,
        ),
    };
    let gain = friis_factor(f, d, g_tx, g_rx)?;
    Ok(gain.value * sigma2 / noise_power(radio.n0, b)?)
}
