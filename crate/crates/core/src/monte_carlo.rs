//! Stochastic oracle for the closed forms: protocol simulation at SNR level
//! under Rayleigh fading.
//!
//! Every trial draws its fading gains from a counter-based stream keyed by
//! `(seed, trial index)`, so the estimate is a pure function of the seed and
//! trial count no matter how the work is chunked across threads. Aggregation
//! keeps integer counts only; the mean consumed power is reconstructed from
//! the decode-outcome count, which is exact and order-independent.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::closed_form::{snr_threshold, IntraOptions, PowerAllocation, Scheme};
use crate::error::{Error, Result};
use crate::link_budget::{friis_factor, noise_power, Geometry, RadioParams};
use crate::real::{lit, Real};

/// How many trials to run, under which seed, and at what parallel grain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialPlan {
    pub n_trials: u64,
    pub seed: u64,
    /// Number of consecutive trials per parallel work item. Has no effect on
    /// the result, only on scheduling.
    pub chunk_size: u64,
}

impl TrialPlan {
    pub fn new(n_trials: u64, seed: u64) -> Result<Self> {
        if n_trials == 0 {
            return Err(Error::EmptyTrialPlan);
        }
        Ok(Self {
            n_trials,
            seed,
            chunk_size: 1 << 16,
        })
    }

    pub fn with_chunk_size(mut self, chunk_size: u64) -> Result<Self> {
        if chunk_size == 0 {
            return Err(Error::EmptyTrialPlan);
        }
        self.chunk_size = chunk_size;
        Ok(self)
    }
}

/// Outcome of the exchange phase of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeOutcome {
    /// Both users decoded each other's packet (θ=1).
    BothDecoded,
    /// At least one direction failed (θ=2).
    Fallback,
}

impl DecodeOutcome {
    pub fn from_exchange(u2_decoded_u1: bool, u1_decoded_u2: bool) -> Self {
        if u2_decoded_u1 && u1_decoded_u2 {
            DecodeOutcome::BothDecoded
        } else {
            DecodeOutcome::Fallback
        }
    }
}

/// Monte Carlo outage estimate for one scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate<T> {
    pub trials: u64,
    pub failures_u1: u64,
    pub failures_u2: u64,
    /// Number of trials in which both users decoded the exchange; `None` for
    /// the traditional scheme, which has no exchange phase.
    pub both_decoded: Option<u64>,
    /// Mean transmit power consumed per trial, in watts.
    pub mean_power: T,
}

impl<T: Real> OutageEstimate<T> {
    pub fn p_hat_u1(&self) -> T {
        ratio::<T>(self.failures_u1, self.trials)
    }

    pub fn p_hat_u2(&self) -> T {
        ratio::<T>(self.failures_u2, self.trials)
    }

    /// `1.96·sqrt(p̂(1-p̂)/n)` for user 1.
    pub fn ci95_halfwidth_u1(&self) -> T {
        ci95::<T>(self.p_hat_u1(), self.trials)
    }

    /// `1.96·sqrt(p̂(1-p̂)/n)` for user 2.
    pub fn ci95_halfwidth_u2(&self) -> T {
        ci95::<T>(self.p_hat_u2(), self.trials)
    }

    /// Empirical probability that both users decoded the exchange.
    pub fn p_hat_both_decoded(&self) -> Option<T> {
        self.both_decoded.map(|n| ratio::<T>(n, self.trials))
    }
}

fn ratio<T: Real>(num: u64, den: u64) -> T {
    T::from_u64(num).expect("count fits the scalar") / T::from_u64(den).expect("count")
}

fn ci95<T: Real>(p: T, n: u64) -> T {
    lit::<T>(1.96) * (p * (T::one() - p) / T::from_u64(n).expect("count")).sqrt()
}

/// Draws `|h|² ~ Exp(mean = sigma2)` by inverse CDF, `-σ²·ln(U)` with
/// `U ∈ (0, 1]`.
pub fn sample_fading_power<T: Real, R: RngCore>(sigma2: T, rng: &mut R) -> T {
    debug_assert!(sigma2 > T::zero());
    sigma2 * -lit::<T>(unit_open_closed(rng.next_u64())).ln()
}

/// Maps 64 random bits onto (0, 1]; never returns zero, so the logarithm of
/// the inverse-CDF transform is always finite.
#[inline]
fn unit_open_closed(bits: u64) -> f64 {
    ((bits >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Per-trial generator: a fresh stream of the seeded cipher, keyed by the
/// trial index. Chunking therefore never changes any trial's draws.
fn trial_rng(base: &ChaCha8Rng, trial: u64) -> ChaCha8Rng {
    let mut rng = base.clone();
    rng.set_stream(trial);
    rng
}

fn map_chunks<F>(plan: &TrialPlan, body: F) -> (u64, u64, u64)
where
    F: Fn(u64, u64) -> (u64, u64, u64) + Sync,
{
    let mut ranges = Vec::new();
    let mut start = 0;
    while start < plan.n_trials {
        let end = plan.n_trials.min(start + plan.chunk_size.max(1));
        ranges.push((start, end));
        start = end;
    }
    ranges
        .into_par_iter()
        .map(|(a, b)| body(a, b))
        .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2))
}

/// Deterministic per-watt SNR coefficient of a link (fading excluded).
fn link_coeff<T: Real>(f: T, d: T, g_tx: T, g_rx: T, n0: T, b: T) -> Result<T> {
    Ok(friis_factor(f, d, g_tx, g_rx)?.value / noise_power(n0, b)?)
}

/// Simulates the traditional scheme: each user transmits alone in the
/// cellular band; a user is in outage when its instantaneous capacity falls
/// below the rate.
pub fn simulate_traditional<T: Real>(
    radio: &RadioParams<T>,
    geo: &Geometry<T>,
    rate: T,
    alloc: &PowerAllocation<T>,
    plan: &TrialPlan,
) -> Result<OutageEstimate<T>> {
    expect_scheme(alloc, Scheme::Traditional)?;
    radio.validate()?;
    geo.validate()?;
    let c1 = link_coeff(
        radio.f_c, geo.d_1b, radio.g_u1, radio.g_bs, radio.n0, radio.b_c,
    )?;
    let c2 = link_coeff(
        radio.f_c, geo.d_2b, radio.g_u2, radio.g_bs, radio.n0, radio.b_c,
    )?;
    let threshold = snr_threshold(rate, radio.b_c);
    let base = ChaCha8Rng::seed_from_u64(plan.seed);

    let (failures_u1, failures_u2, _) = map_chunks(plan, |start, end| {
        let mut f1 = 0;
        let mut f2 = 0;
        for trial in start..end {
            let mut rng = trial_rng(&base, trial);
            let h1 = sample_fading_power(radio.sigma2_1b, &mut rng);
            let h2 = sample_fading_power(radio.sigma2_2b, &mut rng);
            if alloc.p1_cellular * c1 * h1 < threshold {
                f1 += 1;
            }
            if alloc.p2_cellular * c2 * h2 < threshold {
                f2 += 1;
            }
        }
        (f1, f2, 0)
    });

    Ok(OutageEstimate {
        trials: plan.n_trials,
        failures_u1,
        failures_u2,
        both_decoded: None,
        // deterministic for this scheme: both users always transmit
        mean_power: alloc.total,
    })
}

/// Channel and threshold description of a two-phase cooperative run.
struct CoopChannel<T> {
    exch_coeff_12: T,
    exch_coeff_21: T,
    exch_threshold: T,
    cell_coeff_1b: T,
    cell_coeff_2b: T,
    cell_threshold: T,
    sigma2_12: T,
    sigma2_21: T,
    sigma2_1b: T,
    sigma2_2b: T,
}

fn run_cooperative<T: Real>(
    ch: &CoopChannel<T>,
    alloc: &PowerAllocation<T>,
    plan: &TrialPlan,
) -> OutageEstimate<T> {
    let base = ChaCha8Rng::seed_from_u64(plan.seed);
    let (failures_u1, failures_u2, both_decoded) = map_chunks(plan, |start, end| {
        let mut f1 = 0;
        let mut f2 = 0;
        let mut both = 0;
        for trial in start..end {
            let mut rng = trial_rng(&base, trial);
            let h12 = sample_fading_power(ch.sigma2_12, &mut rng);
            let h21 = sample_fading_power(ch.sigma2_21, &mut rng);
            let outcome = DecodeOutcome::from_exchange(
                alloc.p1_exchange * ch.exch_coeff_12 * h12 > ch.exch_threshold,
                alloc.p2_exchange * ch.exch_coeff_21 * h21 > ch.exch_threshold,
            );
            let h1b = sample_fading_power(ch.sigma2_1b, &mut rng);
            let h2b = sample_fading_power(ch.sigma2_2b, &mut rng);
            let g1 = alloc.p1_cellular * ch.cell_coeff_1b * h1b;
            let g2 = alloc.p2_cellular * ch.cell_coeff_2b * h2b;
            match outcome {
                DecodeOutcome::BothDecoded => {
                    both += 1;
                    // space-time combining: one joint SNR decides both users
                    if g1 + g2 < ch.cell_threshold {
                        f1 += 1;
                        f2 += 1;
                    }
                }
                DecodeOutcome::Fallback => {
                    if g1 < ch.cell_threshold {
                        f1 += 1;
                    }
                    if g2 < ch.cell_threshold {
                        f2 += 1;
                    }
                }
            }
        }
        (f1, f2, both)
    });

    // exchange power is spent every trial; the joint phase doubles the
    // cellular power whenever both users decoded
    let extra = ratio::<T>(both_decoded, plan.n_trials);
    let mean_power = (alloc.p1_exchange + alloc.p2_exchange)
        + (alloc.p1_cellular + alloc.p2_cellular) * (T::one() + extra);
    OutageEstimate {
        trials: plan.n_trials,
        failures_u1,
        failures_u2,
        both_decoded: Some(both_decoded),
        mean_power,
    }
}

/// Simulates the inter-network scheme: short-range exchange, then joint (or
/// fallback separate) cellular transmission.
pub fn simulate_inter<T: Real>(
    radio: &RadioParams<T>,
    geo: &Geometry<T>,
    rate: T,
    alloc: &PowerAllocation<T>,
    plan: &TrialPlan,
) -> Result<OutageEstimate<T>> {
    expect_scheme(alloc, Scheme::Inter)?;
    radio.validate()?;
    geo.validate()?;
    let ch = CoopChannel {
        exch_coeff_12: link_coeff(
            radio.f_s, geo.d_12, radio.g_u1, radio.g_u2, radio.n0, radio.b_s,
        )?,
        exch_coeff_21: link_coeff(
            radio.f_s, geo.d_21, radio.g_u1, radio.g_u2, radio.n0, radio.b_s,
        )?,
        exch_threshold: snr_threshold(rate, radio.b_s),
        cell_coeff_1b: link_coeff(
            radio.f_c, geo.d_1b, radio.g_u1, radio.g_bs, radio.n0, radio.b_c,
        )?,
        cell_coeff_2b: link_coeff(
            radio.f_c, geo.d_2b, radio.g_u2, radio.g_bs, radio.n0, radio.b_c,
        )?,
        cell_threshold: snr_threshold(rate, radio.b_c),
        sigma2_12: radio.sigma2_12,
        sigma2_21: radio.sigma2_21,
        sigma2_1b: radio.sigma2_1b,
        sigma2_2b: radio.sigma2_2b,
    };
    Ok(run_cooperative(&ch, alloc, plan))
}

/// Simulates the intra-network scheme: the exchange runs in the cellular
/// band, and the joint phase pays the doubled rate.
pub fn simulate_intra<T: Real>(
    radio: &RadioParams<T>,
    geo: &Geometry<T>,
    rate: T,
    alloc: &PowerAllocation<T>,
    opts: IntraOptions,
    plan: &TrialPlan,
) -> Result<OutageEstimate<T>> {
    expect_scheme(alloc, Scheme::Intra)?;
    radio.validate()?;
    geo.validate()?;
    let two = lit::<T>(2.0);
    let exchange_rate = if opts.exchange_double_rate {
        two * rate
    } else {
        rate
    };
    let ch = CoopChannel {
        exch_coeff_12: link_coeff(
            radio.f_c, geo.d_12, radio.g_u1, radio.g_u2, radio.n0, radio.b_c,
        )?,
        exch_coeff_21: link_coeff(
            radio.f_c, geo.d_21, radio.g_u1, radio.g_u2, radio.n0, radio.b_c,
        )?,
        exch_threshold: snr_threshold(exchange_rate, radio.b_c),
        cell_coeff_1b: link_coeff(
            radio.f_c, geo.d_1b, radio.g_u1, radio.g_bs, radio.n0, radio.b_c,
        )?,
        cell_coeff_2b: link_coeff(
            radio.f_c, geo.d_2b, radio.g_u2, radio.g_bs, radio.n0, radio.b_c,
        )?,
        cell_threshold: snr_threshold(two * rate, radio.b_c),
        sigma2_12: radio.sigma2_12,
        sigma2_21: radio.sigma2_21,
        sigma2_1b: radio.sigma2_1b,
        sigma2_2b: radio.sigma2_2b,
    };
    Ok(run_cooperative(&ch, alloc, plan))
}

fn expect_scheme<T>(alloc: &PowerAllocation<T>, expected: Scheme) -> Result<()> {
    if alloc.scheme == expected {
        Ok(())
    } else {
        Err(Error::SchemeMismatch {
            expected,
            got: alloc.scheme,
        })
    }
}
