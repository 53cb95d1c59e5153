use super::{is_nonpositive_integer, Method, SpecFunResult, MAX_SERIES_TERMS, SERIES_STOP};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Kummer's confluent hypergeometric function M(a, b, y) = ₁F₁(a; b; y) for y ≥ 0.
///
/// Summed term by term with compensated accumulation. The error estimate
/// accounts for cancellation between terms of opposite sign, which only
/// occurs for a < 0.
pub fn kummer_m(a: f64, b: f64, y: f64) -> Result<SpecFunResult> {
    if !(a.is_finite() && b.is_finite() && y.is_finite()) {
        return Err(Error::Domain(format!("kummer_m({a}, {b}, {y}): non-finite input")));
    }
    if is_nonpositive_integer(b) {
        return Err(Error::ParameterPole(b));
    }
    if y < 0.0 {
        return Err(Error::Domain(format!("kummer_m requires y ≥ 0, got {y}")));
    }
    if y == 0.0 || a == 0.0 {
        return Ok(SpecFunResult {
            value: 1.0,
            abs_error_estimate: 0.0,
            method: Method::Series,
        });
    }
    kummer_series(a, b, y)
}

/// Raw power series; valid for any sign of y.
pub(crate) fn kummer_series(a: f64, b: f64, y: f64) -> Result<SpecFunResult> {
    let terminating = is_nonpositive_integer(a);
    let mut sum = CompensatedSum::new();
    let mut term = 1.0_f64;
    sum.add(term);
    let mut k = 0usize;
    loop {
        if k >= MAX_SERIES_TERMS {
            return Err(Error::SeriesNotConverged(MAX_SERIES_TERMS));
        }
        let kf = k as f64;
        let ratio = (a + kf) / (b + kf) * y / (kf + 1.0);
        term *= ratio;
        k += 1;
        if !term.is_finite() {
            return Err(Error::Overflow(format!("M({a}, {b}, {y})")));
        }
        sum.add(term);
        if terminating && term == 0.0 {
            break;
        }
        let next_ratio = ((a + kf + 1.0) / (b + kf + 1.0) * y / (kf + 2.0)).abs();
        if term.abs() <= SERIES_STOP * sum.value().abs() && next_ratio < 1.0 {
            break;
        }
        if term == 0.0 && next_ratio < 1.0 {
            break;
        }
    }
    let value = sum.value();
    if !value.is_finite() {
        return Err(Error::Overflow(format!("M({a}, {b}, {y})")));
    }
    let rounding = 4.0 * f64::EPSILON * (sum.abs_total() + value.abs());
    let truncation = if terminating { 0.0 } else { term.abs() };
    Ok(SpecFunResult {
        value,
        abs_error_estimate: rounding + truncation,
        method: Method::Series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_argument_is_one() {
        for (a, b) in [(0.3, 1.7), (-4.5, 2.0), (10.0, -3.5)] {
            assert_eq!(kummer_m(a, b, 0.0).unwrap().value, 1.0);
        }
    }

    #[test]
    fn exponential_reduction() {
        // M(1, 2, y) = (e^y - 1)/y
        let r = kummer_m(1.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::E - 1.0, max_relative = 1e-15);
        // M(a, a, y) = e^y
        assert_relative_eq!(kummer_m(2.5, 2.5, 3.0).unwrap().value, 3f64.exp(), max_relative = 1e-14);
    }

    #[test]
    fn terminating_series_is_laguerre() {
        // M(-2, b, y) = 1 - 2y/b + y²/(b(b+1))
        let (b, y) = (1.5, 0.7);
        let expect = 1.0 - 2.0 * y / b + y * y / (b * (b + 1.0));
        let r = kummer_m(-2.0, b, y).unwrap();
        assert_relative_eq!(r.value, expect, max_relative = 1e-15);
    }

    #[test]
    fn parameter_pole_and_domain() {
        assert_eq!(kummer_m(1.0, -2.0, 1.0), Err(Error::ParameterPole(-2.0)));
        assert!(matches!(kummer_m(1.0, 2.0, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn overflow_is_an_error() {
        assert!(matches!(kummer_m(1.0, 1.0, 800.0), Err(Error::Overflow(_))));
    }

    #[test]
    fn large_argument_converges() {
        // M(a, a, y) = e^y at y = 200
        let r = kummer_m(3.0, 3.0, 200.0).unwrap();
        assert_relative_eq!(r.value, 200f64.exp(), max_relative = 1e-12);
    }
}
