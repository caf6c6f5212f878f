//! Real branches of the Lambert W function, the inverse of `w ↦ w·eʷ`.
//!
//! `lambert_w0` covers the principal branch on `[-1/e, ∞)` and `lambert_wm1`
//! the lower branch on `[-1/e, 0)`. Both use a branch-point series seed
//! followed by a guarded Halley/Newton iteration with a bisection fallback,
//! and hold the residual `|w·eʷ - x|` below `1e-12·max(1, |x|)` across their
//! domains, including arguments within `1e-6` of the branch point.
//!
//! The lower branch is additionally exposed in the exponent form
//! `W₋₁(-e^(-1-z))`, which stays accurate when the plain argument would be
//! indistinguishable from `-1/e` in floating point.

use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Arguments this close to -1/e round to the branch point instead of erroring.
const BRANCH_POINT_SLACK: f64 = 1e-15;

/// Nearest `f64` to 1/e.
const INV_E: f64 = 0.367_879_441_171_442_33;

/// `e·(INV_E - 1/e)`: the offset of the representable branch point from the
/// real one, scaled into `e·x + 1` units. `INV_E` sits slightly above 1/e, so
/// `e·x + 1` is computed as `e·(x + INV_E) - INV_E_SCALED_OFFSET`, which is
/// exact where it matters: `x + INV_E` cancels without error near the branch
/// point.
const INV_E_SCALED_OFFSET: f64 = 3.378_485_525_913_422_4e-17;

/// `e·x + 1` with full precision near the branch point `x = -1/e`.
#[inline]
fn ex_plus_one<T: Real>(x: T) -> T {
    let dx = x + lit::<T>(INV_E);
    dx.mul_add(T::E(), -lit::<T>(INV_E_SCALED_OFFSET))
}

const MAX_ITER: usize = 60;

/// Real branches of W.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// W₀, increasing on [-1/e, ∞) with range [-1, ∞).
    Principal,
    /// W₋₁, decreasing on [-1/e, 0) with range (-∞, -1].
    Lower,
}

/// An argument paired with the branch it should be evaluated on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedArg<T> {
    pub x: T,
    pub branch: Branch,
}

impl<T: Real> BranchedArg<T> {
    /// Validates the domain for the chosen branch.
    pub fn new(x: T, branch: Branch) -> Result<Self> {
        let arg = Self { x, branch };
        arg.eval()?;
        Ok(arg)
    }

    /// Evaluates W on the stored branch.
    pub fn eval(&self) -> Result<T> {
        match self.branch {
            Branch::Principal => lambert_w0(self.x),
            Branch::Lower => lambert_wm1(self.x),
        }
    }
}

/// Series around the branch point: W = -1 + p - p²/3 + 11p³/72 - ... with
/// p = ±sqrt(2(e·x + 1)). Returns the sum of the p-terms, i.e. `W + 1`.
#[inline]
fn branch_series_offset<T: Real>(p: T) -> T {
    let c3 = lit::<T>(-1.0 / 3.0);
    let c4 = lit::<T>(11.0 / 72.0);
    let c5 = lit::<T>(-43.0 / 540.0);
    let c6 = lit::<T>(769.0 / 17280.0);
    let c7 = lit::<T>(-221.0 / 8505.0);
    p * (T::one() + p * (c3 + p * (c4 + p * (c5 + p * (c6 + p * c7)))))
}

/// `δ = -1 - W₋₁(-e^(-1-z))` for `z ≥ 0`, to full relative precision in δ.
///
/// Solving in the exponent avoids both the underflow of `e^(-1-z)` for large
/// `z` and the cancellation of the argument against -1/e for small `z`. The
/// root satisfies `ln(1+δ) - δ + z = 0`, which a Newton iteration in δ solves
/// after a branch-point series (small z) or asymptotic (large z) seed.
pub(crate) fn lambert_wm1_offset_from_exponent<T: Real>(z: T) -> T {
    let one = T::one();
    let two = lit::<T>(2.0);
    if z <= T::zero() {
        return T::zero();
    }
    // sigma = 1 - e^{-z} equals e·x + 1 for the implied argument x.
    let sigma = -(-z).exp_m1();
    let p = (two * sigma).sqrt();
    // delta = |p| (1 + |p|/3 + 11p²/72 + ...) from the branch-point series,
    // all terms positive on this branch.
    let series = -branch_series_offset(-p);
    if sigma < lit(1e-8) {
        // truncation error ~ p⁶ is below machine precision here
        return series;
    }

    let big = one + z;
    let mut delta = if sigma < lit(0.5) {
        series
    } else {
        // w ≈ -(L + ln L) for large L = 1 + z
        big + big.ln() - one
    };
    // g(δ) = ln(1+δ) - δ + z is decreasing in δ with g(0) = z > 0.
    let mut lo = T::zero();
    let mut hi = big + big.ln() + two; // g(hi) < 0 for every z ≥ 0
    if delta <= lo || delta >= hi {
        delta = series.min(hi - one.min(hi / two));
    }
    for _ in 0..MAX_ITER {
        let g = delta.ln_1p() - delta + z;
        if g > T::zero() {
            lo = delta;
        } else {
            hi = delta;
        }
        let g_noise = lit::<T>(4.0) * T::epsilon() * (one + z + delta);
        if g.abs() <= g_noise {
            break;
        }
        // g'(δ) = -δ/(1+δ)
        let step = g * (one + delta) / delta;
        let next = delta + step;
        let next = if next > lo && next < hi {
            next
        } else {
            (lo + hi) / two
        };
        if (next - delta).abs() <= lit::<T>(1e-14) * (one + delta.abs()) {
            delta = next;
            break;
        }
        delta = next;
    }
    delta
}

/// Principal branch W₀ on `[-1/e, ∞)`.
///
/// Returns `w ≥ -1` with `w·eʷ = x`; arguments within `1e-15` of `-1/e`
/// round to the branch point.
pub fn lambert_w0<T: Real>(x: T) -> Result<T> {
    let one = T::one();
    let two = lit::<T>(2.0);
    if x.is_nan() || !x.is_finite() {
        return Err(Error::LambertDomain {
            x: x.to_f64().unwrap_or(f64::NAN),
            branch: "principal",
        });
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    let ex1 = ex_plus_one(x);
    // the slack is measured in x; ex1 scales it by e
    if ex1 < -lit::<T>(BRANCH_POINT_SLACK * std::f64::consts::E) {
        return Err(Error::LambertDomain {
            x: x.to_f64().unwrap_or(f64::NAN),
            branch: "principal",
        });
    }
    if ex1 <= T::zero() {
        return Ok(-one);
    }

    let p = (two * ex1).sqrt();
    if p < lit(1e-4) {
        // series truncation ~ p⁶ is already below the residual tolerance
        return Ok(branch_series_offset(p) - one);
    }

    let mut w = if ex1 < lit(0.04) {
        branch_series_offset(p) - one
    } else if x < lit(0.5) {
        // series of W₀ around zero
        x * (one - x * (one - lit::<T>(1.5) * x))
    } else if x < lit(10.0) {
        lit::<T>(0.8) * x.ln_1p()
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };

    // f(w) = w·eʷ - x is increasing on [-1, ∞); keep a bracket and fall back
    // to bisection whenever the Halley step leaves it.
    let mut lo = -one;
    let mut hi = if x <= T::zero() {
        T::zero()
    } else {
        one.max(x.ln() + one)
    };
    if w <= lo || w >= hi {
        w = (lo + hi) / two;
    }
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        if f > T::zero() {
            hi = w;
        } else {
            lo = w;
        }
        let f_noise = lit::<T>(4.0) * T::epsilon() * (w * ew).abs().max(x.abs()).max(one);
        if f.abs() <= f_noise {
            break;
        }
        let denom = ew * (w + one) - f * (w + two) / (two * (w + one));
        let next = w - f / denom;
        let next = if next.is_finite() && next > lo && next < hi {
            next
        } else {
            (lo + hi) / two
        };
        if (next - w).abs() <= lit::<T>(1e-14) * (one + w.abs()) {
            w = next;
            break;
        }
        w = next;
    }
    Ok(w)
}

/// Lower branch W₋₁ on `[-1/e, 0)`.
///
/// Returns `w ≤ -1` with `w·eʷ = x`; arguments within `1e-15` of `-1/e`
/// round to the branch point.
pub fn lambert_wm1<T: Real>(x: T) -> Result<T> {
    let one = T::one();
    if x.is_nan() || x >= T::zero() {
        return Err(Error::LambertDomain {
            x: x.to_f64().unwrap_or(f64::NAN),
            branch: "lower",
        });
    }
    let ex1 = ex_plus_one(x);
    if ex1 < -lit::<T>(BRANCH_POINT_SLACK * std::f64::consts::E) {
        return Err(Error::LambertDomain {
            x: x.to_f64().unwrap_or(f64::NAN),
            branch: "lower",
        });
    }
    // z ≥ 0 places the argument as -e^{-1-z}
    let z = (-(-x).ln() - one).max(T::zero());
    Ok(-one - lambert_wm1_offset_from_exponent(z))
}

#[cfg(test)]
// reference constants keep the oracle's full digits
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Bisection oracle values (mpmath, 50 digits).
    const W0_OF_1: f64 = 0.567_143_290_409_783_873;
    const WM1_OF_M0_367510: f64 = -1.045_499_763_363_757_518;

    fn residual(w: f64, x: f64) -> f64 {
        (w * w.exp() - x).abs()
    }

    /// Independent oracle: bisection on w·eʷ = x over a monotone interval.
    fn bisect_w(x: f64, mut lo: f64, mut hi: f64, increasing: bool) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let above = mid * mid.exp() > x;
            if above == increasing {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn principal_trivial_points() {
        assert_eq!(lambert_w0(0.0f64).unwrap(), 0.0);
        assert_relative_eq!(
            lambert_w0(std::f64::consts::E).unwrap(),
            1.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn principal_at_one_matches_bisection_oracle() {
        let oracle = bisect_w(1.0, 0.0, 1.0, true);
        let w = lambert_w0(1.0f64).unwrap();
        assert!((w - oracle).abs() <= 1e-12);
        assert_relative_eq!(w, W0_OF_1, max_relative = 1e-14);
    }

    #[test]
    fn lower_trivial_points() {
        let w = lambert_wm1(-INV_E).unwrap();
        assert!((w + 1.0).abs() <= 1e-9);
        let x = -2.0 * (-2.0f64).exp();
        assert_relative_eq!(lambert_wm1(x).unwrap(), -2.0, max_relative = 1e-13);
    }

    #[test]
    fn lower_matches_bisection_oracle() {
        // This argument arises from the default outage target 1e-3.
        let x = -0.367510;
        let oracle = bisect_w(x, -10.0, -1.0, false);
        let w = lambert_wm1(x).unwrap();
        assert!((w - oracle).abs() <= 1e-12);
        assert_relative_eq!(w, WM1_OF_M0_367510, max_relative = 1e-12);
    }

    #[test]
    fn residuals_on_principal_grid() {
        let mut xs = vec![];
        for i in 0..400 {
            // approach the branch point down to 1e-12 away
            xs.push(-INV_E + 10f64.powf(-12.0 + 12.0 * i as f64 / 399.0));
        }
        for i in 0..800 {
            let m = 10f64.powf(-9.0 + 18.0 * i as f64 / 799.0);
            xs.push(m);
            if m < INV_E {
                xs.push(-m);
            }
        }
        for x in xs {
            let w = lambert_w0(x).unwrap();
            assert!(w >= -1.0);
            assert!(
                residual(w, x) <= 1e-12 * x.abs().max(1.0),
                "residual too large at x={x}"
            );
        }
    }

    #[test]
    fn residuals_on_lower_grid() {
        let mut xs = vec![];
        for i in 0..400 {
            // approach the branch point from inside the domain
            xs.push(-INV_E + 10f64.powf(-12.0 + 11.5 * i as f64 / 399.0));
        }
        for i in 0..800 {
            xs.push(-10f64.powf(-300.0 + 299.0 * i as f64 / 799.0));
        }
        for x in xs {
            let w = lambert_wm1(x).unwrap();
            assert!(w <= -1.0);
            assert!(
                residual(w, x) <= 1e-12 * x.abs().max(1.0),
                "residual too large at x={x}"
            );
        }
    }

    #[test]
    fn branches_are_monotone() {
        let mut prev = None;
        for i in 0..2000 {
            let x = -INV_E + (INV_E + 3.0) * i as f64 / 1999.0;
            let w = lambert_w0(x).unwrap();
            if let Some(p) = prev {
                assert!(w >= p, "W0 not increasing at x={x}");
            }
            prev = Some(w);
        }
        let mut prev = None;
        for i in 0..2000 {
            let x = -INV_E + (INV_E - 1e-9) * i as f64 / 1999.0;
            let w = lambert_wm1(x).unwrap();
            if let Some(p) = prev {
                assert!(w <= p, "W-1 not decreasing at x={x}");
            }
            prev = Some(w);
        }
    }

    #[test]
    fn branches_bracket_minus_one() {
        for i in 1..50 {
            let x = -INV_E + 0.3 * i as f64 / 50.0;
            assert!(lambert_w0(x).unwrap() > -1.0);
            if x < 0.0 {
                assert!(lambert_wm1(x).unwrap() < -1.0);
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            lambert_w0(-0.4f64),
            Err(Error::LambertDomain { .. })
        ));
        assert!(lambert_wm1(-0.4f64).is_err());
        assert!(lambert_wm1(0.0f64).is_err());
        assert!(lambert_wm1(0.3f64).is_err());
        assert!(lambert_w0(f64::NAN).is_err());
    }

    #[test]
    fn arguments_within_slack_round_to_branch_point() {
        let x = -INV_E - 5e-16;
        assert_eq!(lambert_w0(x).unwrap(), -1.0);
        assert_eq!(lambert_wm1(x).unwrap(), -1.0);
    }

    #[test]
    fn branched_arg_wrapper() {
        let a = BranchedArg::new(0.25f64, Branch::Principal).unwrap();
        assert_relative_eq!(
            a.eval().unwrap(),
            lambert_w0(0.25f64).unwrap(),
            max_relative = 1e-15
        );
        assert!(BranchedArg::new(0.25f64, Branch::Lower).is_err());
    }

    #[test]
    fn exponent_form_matches_plain_form() {
        // wide overlap region where both routes are well conditioned
        for i in 0..200 {
            let z = 10f64.powf(-6.0 + 8.0 * i as f64 / 199.0);
            let x = -(-1.0 - z).exp();
            let via_exponent = -1.0 - lambert_wm1_offset_from_exponent(z);
            let plain = lambert_wm1(x).unwrap();
            assert_relative_eq!(via_exponent, plain, max_relative = 1e-11);
        }
    }
}
