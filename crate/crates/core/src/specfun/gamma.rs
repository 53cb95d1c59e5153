use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// (-1)^k ζ(k) / k for k = 2, 3, …; Taylor coefficients of ln Γ(1 + z) beyond the linear term.
#[allow(clippy::excessive_precision)]
const LN_GAMMA_1P_COEFFS: [f64; 39] = [
    0.822_467_033_424_113_2,
    -0.400_685_634_386_531_4,
    0.270_580_808_427_784_55,
    -0.207_385_551_028_673_98,
    0.169_557_176_997_408_2,
    -0.144_049_896_768_846_12,
    0.125_509_669_524_743_04,
    -0.111_334_265_869_564_69,
    0.100_099_457_512_781_81,
    -0.090_954_017_145_829_04,
    0.083_353_840_546_109,
    -0.076_932_516_411_352_19,
    0.071_432_946_295_361_34,
    -0.066_668_705_882_420_47,
    0.062_500_955_141_213_04,
    -0.058_823_978_658_684_58,
    0.055_555_767_627_403_61,
    -0.052_631_679_379_616_66,
    0.050_000_047_698_101_69,
    -0.047_619_070_330_142_23,
    0.045_454_556_293_204_67,
    -0.043_478_266_053_040_26,
    0.041_666_669_150_341_21,
    -0.040_000_001_192_140_14,
    0.038_461_539_034_675_19,
    -0.037_037_037_312_989_33,
    0.035_714_285_847_333_36,
    -0.034_482_758_684_919_3,
    0.033_333_333_364_377_58,
    -0.032_258_064_531_150_42,
    0.031_250_000_007_275_97,
    -0.030_303_030_306_558_05,
    0.029_411_764_707_594_34,
    -0.028_571_428_572_260_11,
    0.027_777_777_778_182,
    -0.027_027_027_027_223_67,
    0.026_315_789_473_779_95,
    -0.025_641_025_641_072_28,
    0.025_000_000_000_022_74,
];

/// B_{2k} / (2k (2k-1)) for the Stirling series.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// ln|Γ(x)| together with the sign of Γ(x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnGamma {
    pub value: f64,
    pub sign: f64,
}

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// sin(πx) with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    // r ∈ [-1, 1]
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (PI * r).sin()
}

fn ln_gamma_1p_series(z: f64) -> f64 {
    // |z| ≤ 0.25
    let mut acc = 0.0;
    for &c in LN_GAMMA_1P_COEFFS.iter().rev() {
        acc = acc * z + c;
    }
    z * (-EULER_GAMMA + z * acc)
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for &c in STIRLING_COEFFS.iter().rev() {
        acc = acc * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + acc * inv
}

fn ln_gamma_positive(x: f64) -> f64 {
    debug_assert!(x >= 0.5);
    if (x - 1.0).abs() <= 0.25 {
        return ln_gamma_1p_series(x - 1.0);
    }
    if (x - 2.0).abs() <= 0.25 {
        let z = x - 2.0;
        return z.ln_1p() + ln_gamma_1p_series(z);
    }
    if x >= 10.0 {
        return stirling(x);
    }
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < 10.0 {
        product *= shifted;
        shifted += 1.0;
    }
    stirling(shifted) - product.ln()
}

/// Sign-carrying logarithm of the Gamma function.
///
/// Errors with [`Error::Pole`] at the non-positive integers.
pub fn ln_gamma(x: f64) -> Result<LnGamma> {
    if x.is_nan() {
        return Err(Error::Domain("ln_gamma of NaN".into()));
    }
    if x.is_infinite() {
        return if x > 0.0 {
            Ok(LnGamma {
                value: f64::INFINITY,
                sign: 1.0,
            })
        } else {
            Err(Error::Domain("ln_gamma of -inf".into()))
        };
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x >= 0.5 {
        return Ok(LnGamma {
            value: ln_gamma_positive(x),
            sign: 1.0,
        });
    }
    // Γ(x) Γ(1-x) = π / sin(πx)
    let s = sin_pi(x);
    Ok(LnGamma {
        value: LN_PI - s.abs().ln() - ln_gamma_positive(1.0 - x),
        sign: s.signum(),
    })
}

/// Γ(x) as `sign · exp(ln|Γ(x)|)`, reporting overflow instead of returning infinity.
pub fn gamma(x: f64) -> Result<f64> {
    let lg = ln_gamma(x)?;
    let g = lg.sign * lg.value.exp();
    if g.is_infinite() {
        return Err(Error::Overflow(format!("Gamma({x})")));
    }
    Ok(g)
}

/// ln|1/Γ(x)| with sign; `None` where 1/Γ(x) vanishes.
pub(crate) fn ln_recip_gamma(x: f64) -> Result<Option<LnGamma>> {
    if is_nonpositive_integer(x) {
        return Ok(None);
    }
    let lg = ln_gamma(x)?;
    Ok(Some(LnGamma {
        value: -lg.value,
        sign: lg.sign,
    }))
}

/// 1/Γ(x), exactly zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> Result<f64> {
    Ok(match ln_recip_gamma(x)? {
        None => 0.0,
        Some(lg) => lg.sign * lg.value.exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn factorial_and_identity_cases() {
        assert_relative_eq!(ln_gamma(5.0).unwrap().value, 24f64.ln(), max_relative = 1e-15);
        assert_eq!(ln_gamma(1.0).unwrap().value, 0.0);
        assert_eq!(ln_gamma(2.0).unwrap().value, 0.0);
    }

    #[test]
    fn half_integer_value() {
        // ln √π
        let v = ln_gamma(0.5).unwrap();
        assert_relative_eq!(v.value, 0.572_364_942_924_700_1, max_relative = 1e-14);
        assert_eq!(v.sign, 1.0);
    }

    #[test]
    fn sign_alternates_on_negative_axis() {
        assert_eq!(ln_gamma(-0.5).unwrap().sign, -1.0);
        assert_eq!(ln_gamma(-1.5).unwrap().sign, 1.0);
        assert_eq!(ln_gamma(-2.5).unwrap().sign, -1.0);
        // Γ(-0.5) = -2√π
        assert_relative_eq!(gamma(-0.5).unwrap(), -2.0 * PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn poles_are_errors() {
        for x in [0.0, -1.0, -7.0, -170.0] {
            assert_eq!(ln_gamma(x), Err(Error::Pole(x)));
        }
        assert_eq!(recip_gamma(-3.0).unwrap(), 0.0);
    }

    #[test]
    fn gamma_overflow_is_reported() {
        assert!(matches!(gamma(200.0), Err(Error::Overflow(_))));
        assert!(gamma(170.0).is_ok());
    }

    #[test]
    fn sin_pi_exact_zeros() {
        for k in -5..=5 {
            assert_eq!(sin_pi(k as f64), 0.0);
        }
        assert_relative_eq!(sin_pi(0.5), 1.0);
        assert_relative_eq!(sin_pi(-2.5), -1.0);
    }
}
