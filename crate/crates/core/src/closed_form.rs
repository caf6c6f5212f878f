//! Closed-form outage and power analysis of the three uplink schemes.
//!
//! For a common target outage probability and data rate this module inverts
//! the Rayleigh outage expressions of each scheme into minimum transmit
//! powers, aggregates them into total consumed power, and reports energy
//! efficiency in bits per joule.
//!
//! * Traditional non-cooperation: each user transmits alone in the cellular
//!   band; the outage CDF is the exponential-SNR CDF and inverts in closed
//!   form through `ln(1 - p)`.
//! * Inter-network cooperation: the users first exchange packets over the
//!   short-range band, then transmit jointly (space-time coded) in the
//!   cellular band. The cellular powers are chosen so both users present the
//!   same mean SNR at the base station, which turns the joint outage CDF into
//!   the equal-means two-branch diversity CDF and makes the power inversion a
//!   Lambert W evaluation on the lower branch.
//! * Intra-network cooperation: same protocol run entirely in the cellular
//!   band; the joint phase pays a doubled rate for the halved slot share.

use std::fmt;

use crate::error::{Error, Result};
use crate::lambert;
use crate::link_budget::{
    ensure_positive, friis_factor, mean_snr_per_watt, noise_power, Geometry, Link, RadioParams,
};
use crate::real::{lit, Real};

/// Common per-user targets: outage probability and data rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Targets<T> {
    /// Target outage probability, strictly inside (0, 1).
    pub p_out: T,
    /// Target data rate per user in bits/s.
    pub rate: T,
}

impl<T: Real> Default for Targets<T> {
    fn default() -> Self {
        Self {
            p_out: lit(1e-3),
            rate: lit(5e6),
        }
    }
}

impl<T: Real> Targets<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_out > T::zero() && self.p_out < T::one()) {
            return Err(Error::OutOfUnitInterval {
                name: "p_out",
                value: self.p_out.to_f64().unwrap_or(f64::NAN),
            });
        }
        ensure_positive("rate", self.rate)
    }
}

/// The three transmission schemes under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Traditional,
    Inter,
    Intra,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Traditional => "traditional",
            Scheme::Inter => "inter",
            Scheme::Intra => "intra",
        })
    }
}

/// Per-user, per-phase transmit powers in watts, plus the scheme's aggregate.
///
/// The exchange powers are zero for the traditional scheme. `total` follows
/// the scheme's aggregation rule: a plain sum for traditional, and
/// `p1s + p2s + (1 + (1-p̄)²)(p1c + p2c)` for the cooperative schemes, whose
/// joint phase spends double power whenever both users decoded the exchange.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAllocation<T> {
    pub scheme: Scheme,
    pub p1_exchange: T,
    pub p2_exchange: T,
    pub p1_cellular: T,
    pub p2_cellular: T,
    pub total: T,
}

/// Bits-per-joule report for one scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyReport<T> {
    pub scheme: Scheme,
    pub allocation: PowerAllocation<T>,
    /// Energy efficiency `rate / total` in bits/J.
    pub eta: T,
}

/// Prior over the exchange outcome: both users decode (θ=1) or at least one
/// fails (θ=2), given the per-direction exchange outage target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodePrior<T> {
    pub p_theta1: T,
    pub p_theta2: T,
}

impl<T: Real> DecodePrior<T> {
    /// `Pr(θ=1) = (1-p̄)²`, `Pr(θ=2) = p̄(2-p̄)`.
    pub fn from_target(p_out: T) -> Result<Self> {
        if !(p_out > T::zero() && p_out < T::one()) {
            return Err(Error::OutOfUnitInterval {
                name: "p_out",
                value: p_out.to_f64().unwrap_or(f64::NAN),
            });
        }
        let q = (T::one() - p_out) * (T::one() - p_out);
        Ok(Self {
            p_theta1: q,
            p_theta2: p_out * (lit::<T>(2.0) - p_out),
        })
    }
}

/// Options for the intra-network scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IntraOptions {
    /// Run the exchange phase at double rate as well, mirroring the halved
    /// slot share of the joint phase. Off by default: the exchange phase of
    /// the intra scheme is the short-range exchange with the cellular band
    /// substituted, at the nominal rate.
    pub exchange_double_rate: bool,
}

/// SNR threshold `2^(rate/bandwidth) - 1` below which a link is in outage.
pub fn snr_threshold<T: Real>(rate: T, bandwidth: T) -> T {
    (rate / bandwidth).exp2() - T::one()
}

/// `-ln(1 - p)`, the exponential quantile of the outage target.
#[inline]
fn neg_ln_one_minus<T: Real>(p: T) -> T {
    -(-p).ln_1p()
}

/// Outage probability of a single Rayleigh link: `1 - e^(-t/m)` where `m` is
/// the mean SNR and `t` the threshold.
pub fn exp_outage<T: Real>(mean_snr: T, threshold: T) -> Result<T> {
    ensure_positive("mean_snr", mean_snr)?;
    if threshold < T::zero() || !threshold.is_finite() {
        return Err(Error::NonPositive {
            name: "threshold",
            value: threshold.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(-(-threshold / mean_snr).exp_m1())
}

/// CDF at `t` of the sum of two independent exponentials given the
/// normalized arguments `x1 = t/m1`, `x2 = t/m2`.
///
/// Algebraically `1 - (m1·e^(-x1) - m2·e^(-x2))/(m1 - m2)`, rearranged so the
/// same code path is exact at `m1 = m2` and loses no precision for small
/// thresholds or nearly equal means:
///
/// * for small arguments, the bivariate series
///   `x1·x2·Σ_j (-1)^j h_j(x1,x2)/(j+2)!` over the complete homogeneous
///   symmetric polynomials `h_j`;
/// * otherwise `-expm1(-a) - a·e^(-a)·(1-e^(-Δ))/Δ` with `a = min(x1,x2)`
///   and `Δ = |x2 - x1|`.
fn sum_exp_cdf_normalized<T: Real>(x1: T, x2: T) -> T {
    let one = T::one();
    let (a, b) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    if b <= lit(0.05) {
        let mut sum = lit::<T>(0.5);
        let mut h = one; // h_0
        let mut a_pow = one; // a^j
        let mut factorial = lit::<T>(2.0); // (j+2)!
        let mut sign = one;
        for j in 1..=24u32 {
            a_pow = a_pow * a;
            h = a_pow + b * h;
            factorial = factorial * lit::<T>(f64::from(j + 2));
            sign = -sign;
            let term = sign * h / factorial;
            sum = sum + term;
            if term.abs() <= sum.abs() * T::epsilon() {
                break;
            }
        }
        a * b * sum
    } else {
        let delta = b - a;
        let slope = if delta == T::zero() {
            one
        } else {
            -(-delta).exp_m1() / delta
        };
        -(-a).exp_m1() - a * (-a).exp() * slope
    }
}

/// Outage probability of the diversity phase when both branches have the same
/// mean SNR: `1 - (1 + t/m)·e^(-t/m)`.
pub fn diversity_outage_equal_means<T: Real>(mean_snr: T, threshold: T) -> Result<T> {
    ensure_positive("mean_snr", mean_snr)?;
    if threshold < T::zero() || !threshold.is_finite() {
        return Err(Error::NonPositive {
            name: "threshold",
            value: threshold.to_f64().unwrap_or(f64::NAN),
        });
    }
    let x = threshold / mean_snr;
    Ok(sum_exp_cdf_normalized(x, x))
}

/// CDF at `t` of the sum of two independent exponential SNRs with means
/// `m1`, `m2` (not necessarily equal). Continuous at `m1 = m2`, where it
/// reduces to [`diversity_outage_equal_means`].
pub fn sum_exp_cdf_general<T: Real>(m1: T, m2: T, t: T) -> Result<T> {
    ensure_positive("m1", m1)?;
    ensure_positive("m2", m2)?;
    ensure_positive("t", t)?;
    Ok(sum_exp_cdf_normalized(t / m1, t / m2))
}

/// Normalized SNR threshold `u = t/m` at which the θ-mixture outage of the
/// cooperative joint phase equals the target:
/// `(1-p̄)²·[1-(1+u)e^(-u)] + (1-(1-p̄)²)·[1-e^(-u)] = p̄`.
///
/// Solving `(1 + (1-p̄)²·u)·e^(-u) = 1-p̄` for `u` yields
/// `u = -(1-p̄)^(-2) - W₋₁(exp[-(1-p̄)^(-2)]/(p̄-1))`, evaluated here through
/// the exponent form of the lower Lambert branch, so the result keeps full
/// relative precision arbitrarily close to the branch point (small targets)
/// and never underflows (targets near one).
pub(crate) fn coop_normalized_threshold<T: Real>(p_out: T) -> Result<T> {
    let one = T::one();
    let eps = one - p_out;
    // z = (1-p̄)^{-2} + ln(1-p̄) - 1 ≥ 0, the distance of the Lambert
    // argument exponent from the branch point
    let z = p_out * (lit::<T>(2.0) - p_out) / (eps * eps) + (-p_out).ln_1p();
    if !z.is_finite() {
        // targets so close to 1 that (1-p̄)² underflows: u diverges and the
        // cellular powers vanish
        return Ok(T::infinity());
    }
    let delta = lambert::lambert_wm1_offset_from_exponent(z.max(T::zero()));
    // u = ln(-W·(1-p̄)) = ln(1 + δ - p̄ - δ·p̄)
    let u = (delta - p_out - delta * p_out).ln_1p();
    if u > T::zero() {
        Ok(u)
    } else {
        Err(Error::InfeasibleTarget {
            p_out: p_out.to_f64().unwrap_or(f64::NAN),
            min_feasible: min_feasible_target::<T>(),
        })
    }
}

/// Smallest outage target for which the joint-phase inversion yields a
/// positive normalized threshold, found by bisection in the exponent.
fn min_feasible_target<T: Real>() -> f64 {
    let feasible = |p: T| {
        let eps = T::one() - p;
        let z = p * (lit::<T>(2.0) - p) / (eps * eps) + (-p).ln_1p();
        if !z.is_finite() || z < T::zero() {
            return false;
        }
        let delta = lambert::lambert_wm1_offset_from_exponent(z);
        (delta - p - delta * p).ln_1p() > T::zero()
    };
    let mut lo = T::min_positive_value().ln();
    let mut hi = lit::<T>(0.5).ln();
    if feasible(lo.exp()) {
        return lo.exp().to_f64().unwrap_or(f64::NAN);
    }
    for _ in 0..200 {
        let mid = (lo + hi) / lit::<T>(2.0);
        if feasible(mid.exp()) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi.exp().to_f64().unwrap_or(f64::NAN)
}

/// Minimum per-user powers of the traditional scheme and their plain-sum
/// total: `P_i = t / (s_i · (-ln(1-p̄)))` with `t = 2^(R̄/B_c) - 1` and `s_i`
/// the mean SNR per watt of the user's cellular link.
pub fn traditional_powers<T: Real>(
    radio: &RadioParams<T>,
    geo: &Geometry<T>,
    tgt: &Targets<T>,
) -> Result<PowerAllocation<T>> {
    tgt.validate()?;
    let t = snr_threshold(tgt.rate, radio.b_c);
    let l = neg_ln_one_minus(tgt.p_out);
    let s1 = mean_snr_per_watt(Link::U1ToBs, radio, geo)?;
    let s2 = mean_snr_per_watt(Link::U2ToBs, radio, geo)?;
    let p1 = t / (s1 * l);
    let p2 = t / (s2 * l);
    Ok(PowerAllocation {
        scheme: Scheme::Traditional,
        p1_exchange: T::zero(),
        p2_exchange: T::zero(),
        p1_cellular: p1,
        p2_cellular: p2,
        total: p1 + p2,
    })
}

/// Energy efficiency of the traditional scheme, `R̄ / (P₁ + P₂)`.
pub fn traditional_efficiency<T: Real>(
    radio: &RadioParams<T>,
    geo: &Geometry<T>,
    tgt: &Targets<T>,
) -> Result<EfficiencyReport<T>> {
    let allocation = traditional_powers(radio, geo, tgt)?;
    Ok(EfficiencyReport {
        scheme: Scheme::Traditional,
        eta: tgt.rate / allocation.total,
        allocation,
    })
}

/// Minimum short-range exchange powers `(P_1s, P_2s)` meeting the outage
/// target on each inter-user direction.
pub fn inter_exchange_powers<T: Real>(
    radio: &RadioParams<T>,
    geo: &Geometry<T>,
    tgt: &Targets<T>,
) -> Result<(T, T)> {
    tgt.validate()?;
    let t = snr_threshold(tgt.rate, radio.b_s);
    let l = neg_ln_one_minus(tgt.p_out);
    let s12 = mean_snr_per_watt(Link::U1ToU2, radio, geo)?;
    let s21 = mean_snr_per_watt(Link::U2ToU1, radio, geo)?;
    Ok((t / (s12 * l), t / (s21 * l)))
}

/// Minimum cellular powers `(P_1c, P_2c)` of the inter-network scheme.
///
/// Both powers share the normalized threshold from the Lambert inversion, so
/// the two mean SNR summands of the joint phase are equal and the cellular
/// power ratio is `P_2c/P_1c = σ²_1b·G_U1·d²_2b / (σ²_2b·G_U2·d²_1b)`.
pub fn inter_cellular_powers<T: Real>(
    radio: &RadioParams<T>,
    geo: &Geometry<T>,
    tgt: &Targets<T>,
) -> Result<(T, T)> {
    tgt.validate()?;
    let u = coop_normalized_threshold(tgt.p_out)?;
    let t = snr_threshold(tgt.rate, radio.b_c);
    let s1 = mean_snr_per_watt(Link::U1ToBs, radio, geo)?;
    let s2 = mean_snr_per_watt(Link::U2ToBs, radio, geo)?;
    Ok((t / (s1 * u), t / (s2 * u)))
}

fn coop_total<T: Real>(p_out: T, p1x: T, p2x: T, p1c: T, p2c: T) -> Result<T> {
    let weight = T::one() + DecodePrior::from_target(p_out)?.p_theta1;
    Ok(p1x + p2x + weight * (p1c + p2c))
}

/// Full power allocation of the inter-network scheme, with total
/// `P_1s + P_2s + (1 + (1-p̄)²)(P_1c + P_2c)`.
pub fn inter_total_power<T: Real>(
    radio: &RadioParams<T>,
    geo: &Geometry<T>,
    tgt: &Targets<T>,
) -> Result<PowerAllocation<T>> {
    let (p1x, p2x) = inter_exchange_powers(radio, geo, tgt)?;
    let (p1c, p2c) = inter_cellular_powers(radio, geo, tgt)?;
    Ok(PowerAllocation {
        scheme: Scheme::Inter,
        p1_exchange: p1x,
        p2_exchange: p2x,
        p1_cellular: p1c,
        p2_cellular: p2c,
        total: coop_total(tgt.p_out, p1x, p2x, p1c, p2c)?,
    })
}

/// Energy efficiency of the inter-network scheme, `R̄ / P_NC`.
pub fn inter_efficiency<T: Real>(
    radio: &RadioParams<T>,
    geo: &Geometry<T>,
    tgt: &Targets<T>,
) -> Result<EfficiencyReport<T>> {
    let allocation = inter_total_power(radio, geo, tgt)?;
    Ok(EfficiencyReport {
        scheme: Scheme::Inter,
        eta: tgt.rate / allocation.total,
        allocation,
    })
}

/// Powers and efficiency of the intra-network scheme.
///
/// The joint cellular phase runs at rate `2R̄` (it owns only half the slots),
/// so its powers are the inter-network cellular powers with the doubled-rate
/// threshold. The exchange phase is the short-range exchange with the
/// cellular carrier and bandwidth substituted; its rate is `R̄` unless
/// `exchange_double_rate` is set. The efficiency still counts the delivered
/// rate `R̄`.
pub fn intra_powers_and_efficiency<T: Real>(
    radio: &RadioParams<T>,
    geo: &Geometry<T>,
    tgt: &Targets<T>,
    opts: IntraOptions,
) -> Result<EfficiencyReport<T>> {
    tgt.validate()?;
    radio.validate()?;
    geo.validate()?;
    let two = lit::<T>(2.0);
    let l = neg_ln_one_minus(tgt.p_out);

    let u = coop_normalized_threshold(tgt.p_out)?;
    let t_cell = snr_threshold(two * tgt.rate, radio.b_c);
    let s1 = mean_snr_per_watt(Link::U1ToBs, radio, geo)?;
    let s2 = mean_snr_per_watt(Link::U2ToBs, radio, geo)?;
    let p1c = t_cell / (s1 * u);
    let p2c = t_cell / (s2 * u);

    let exchange_rate = if opts.exchange_double_rate {
        two * tgt.rate
    } else {
        tgt.rate
    };
    let t_exch = snr_threshold(exchange_rate, radio.b_c);
    let noise_c = noise_power(radio.n0, radio.b_c)?;
    let s12 = friis_factor(radio.f_c, geo.d_12, radio.g_u1, radio.g_u2)?.value * radio.sigma2_12
        / noise_c;
    let s21 = friis_factor(radio.f_c, geo.d_21, radio.g_u1, radio.g_u2)?.value * radio.sigma2_21
        / noise_c;
    let p1x = t_exch / (s12 * l);
    let p2x = t_exch / (s21 * l);

    let allocation = PowerAllocation {
        scheme: Scheme::Intra,
        p1_exchange: p1x,
        p2_exchange: p2x,
        p1_cellular: p1c,
        p2_cellular: p2c,
        total: coop_total(tgt.p_out, p1x, p2x, p1c, p2c)?,
    };
    Ok(EfficiencyReport {
        scheme: Scheme::Intra,
        eta: tgt.rate / allocation.total,
        allocation,
    })
}
