use std::f64::consts::FRAC_PI_2;

use super::kummer::kummer_series;
use super::{
    is_nonpositive_integer, ln_gamma, ln_recip_gamma, Method, SpecFunResult, MAX_SERIES_TERMS,
    SERIES_STOP,
};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Relative accuracy target for [`tricomi_u`].
pub const U_REL_TARGET: f64 = 1e-9;

/// Half-width of the b-interpolation used near integer b.
const INTEGER_B_OFFSET: f64 = 1e-6;

/// Below this y the divergent large-argument series is not tried.
const ASYMPTOTIC_MIN_Y: f64 = 12.0;

/// Tricomi's confluent hypergeometric function U(a, b, y), y > 0.
///
/// Fails with [`Error::PrecisionLoss`] when no available route reaches
/// [`U_REL_TARGET`]. Root finders that only need the sign near a zero of U
/// should call [`tricomi_u_with_estimate`] instead.
pub fn tricomi_u(a: f64, b: f64, y: f64) -> Result<SpecFunResult> {
    let r = tricomi_u_with_estimate(a, b, y)?;
    if r.relative_error_estimate() > U_REL_TARGET {
        return Err(Error::PrecisionLoss {
            what: format!("U({a}, {b}, {y}) via {}", r.method),
            value: r.value,
            estimate: r.abs_error_estimate,
        });
    }
    Ok(r)
}

/// U(a, b, y) with an honest error estimate and no accuracy gate.
pub fn tricomi_u_with_estimate(a: f64, b: f64, y: f64) -> Result<SpecFunResult> {
    if !(a.is_finite() && b.is_finite() && y.is_finite()) {
        return Err(Error::Domain(format!("U({a}, {b}, {y}): non-finite input")));
    }
    if y <= 0.0 {
        return Err(Error::Domain(format!("U requires y > 0, got {y}")));
    }
    if is_nonpositive_integer(a) {
        return laguerre_reduction(a, b, y);
    }

    let asymptotic = if y >= ASYMPTOTIC_MIN_Y {
        large_y_series(a, b, y)
    } else {
        None
    };
    if let Some(r) = asymptotic {
        if r.relative_error_estimate() <= 1e-14 {
            return Ok(r);
        }
    }

    let connection = connection_with_integer_b(a, b, y);
    if let Ok(r) = &connection {
        if r.relative_error_estimate() <= 0.1 * U_REL_TARGET {
            return Ok(*r);
        }
    }

    let integral = if a > 0.0 {
        integral_representation(a, b, y).ok()
    } else if a - b + 1.0 > 0.0 {
        // U(a, b, y) = y^(1-b) U(a-b+1, 2-b, y)
        integral_representation(a - b + 1.0, 2.0 - b, y)
            .ok()
            .and_then(|r| {
                let scale = ((1.0 - b) * y.ln()).exp();
                let value = scale * r.value;
                value.is_finite().then(|| SpecFunResult {
                    value,
                    abs_error_estimate: scale * r.abs_error_estimate
                        + value.abs() * f64::EPSILON * (1.0 + ((1.0 - b) * y.ln()).abs()),
                    method: Method::IntegralRepresentation,
                })
            })
    } else {
        None
    };

    let mut best: Option<SpecFunResult> = None;
    for candidate in [connection.as_ref().ok().copied(), integral, asymptotic]
        .into_iter()
        .flatten()
    {
        best = match best {
            Some(b) if b.relative_error_estimate() <= candidate.relative_error_estimate() => Some(b),
            _ => Some(candidate),
        };
    }
    match (best, connection) {
        (Some(r), _) => Ok(r),
        (None, Err(e)) => Err(e),
        (None, Ok(r)) => Ok(r),
    }
}

/// Leading small-argument form U ≈ Γ(b−1)/Γ(a) · y0^(1−b), valid for b > 1.
pub fn tricomi_u_small_y(a: f64, b: f64, y0: f64) -> Result<f64> {
    if !(b > 1.0) {
        return Err(Error::Domain(format!(
            "small-argument form needs b > 1, got {b}"
        )));
    }
    if !(y0 > 0.0) {
        return Err(Error::Domain(format!("small-argument form needs y0 > 0, got {y0}")));
    }
    let Some(rg) = ln_recip_gamma(a)? else {
        return Ok(0.0);
    };
    let lg = ln_gamma(b - 1.0)?;
    let v = rg.sign * (lg.value + rg.value + (1.0 - b) * y0.ln()).exp();
    if v.is_infinite() {
        return Err(Error::Overflow(format!("U small-y form ({a}, {b}, {y0})")));
    }
    Ok(v)
}

/// U(−n, b, y) = (−1)^n Σ_k (−n)_k (b+k)_{n−k} y^k / k!.
fn laguerre_reduction(a: f64, b: f64, y: f64) -> Result<SpecFunResult> {
    let n = (-a) as usize;
    // coeff[k] = (−n)_k y^k / k!
    let mut coeff = Vec::with_capacity(n + 1);
    let mut c = 1.0_f64;
    coeff.push(c);
    for k in 0..n {
        c *= (k as f64 - n as f64) * y / (k as f64 + 1.0);
        coeff.push(c);
    }
    let mut sum = CompensatedSum::new();
    let mut poch = 1.0_f64; // (b+k)_{n−k}
    for k in (0..=n).rev() {
        if k < n {
            poch *= b + k as f64;
        }
        sum.add(coeff[k] * poch);
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let value = sign * sum.value();
    if !value.is_finite() {
        return Err(Error::Overflow(format!("U({a}, {b}, {y})")));
    }
    Ok(SpecFunResult {
        value,
        abs_error_estimate: 2.0 * (n as f64 + 1.0) * f64::EPSILON * sum.abs_total(),
        method: Method::PolynomialReduction,
    })
}

/// y^(−a) Σ_k (a)_k (a−b+1)_k / k! (−y)^(−k), kept only if it converges
/// before the terms start growing.
fn large_y_series(a: f64, b: f64, y: f64) -> Option<SpecFunResult> {
    let c = a - b + 1.0;
    let mut sum = CompensatedSum::new();
    let mut term = 1.0_f64;
    sum.add(term);
    let mut converged = false;
    let mut last = term.abs();
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        let next = term * (a + kf) * (c + kf) / ((kf + 1.0) * -y);
        if next == 0.0 {
            converged = true;
            last = 0.0;
            break;
        }
        if k > 0 && next.abs() > term.abs() {
            break;
        }
        term = next;
        sum.add(term);
        last = term.abs();
        if term.abs() <= SERIES_STOP * sum.value().abs() {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let log_scale = -a * y.ln();
    let scale = log_scale.exp();
    let value = scale * sum.value();
    if !value.is_finite() || value == 0.0 {
        return None;
    }
    let rel = last / sum.value().abs()
        + 4.0 * f64::EPSILON * sum.abs_total() / sum.value().abs()
        + f64::EPSILON * (1.0 + log_scale.abs());
    Some(SpecFunResult {
        value,
        abs_error_estimate: rel * value.abs(),
        method: Method::Asymptotic,
    })
}

fn scaled_term(log_coeff: f64, sign: f64, m: SpecFunResult) -> (f64, f64) {
    if m.value == 0.0 {
        return (0.0, 0.0);
    }
    let v = sign * m.value.signum() * (log_coeff + m.value.abs().ln()).exp();
    let rel = m.relative_error_estimate() + 2.0 * f64::EPSILON * (1.0 + log_coeff.abs());
    (v, rel * v.abs())
}

/// U = Γ(1−b)/Γ(a−b+1) M(a,b,y) + Γ(b−1)/Γ(a) y^(1−b) M(a−b+1, 2−b, y), b ∉ ℤ.
fn connection_formula(a: f64, b: f64, y: f64) -> Result<SpecFunResult> {
    let (mut t1, mut e1) = (0.0, 0.0);
    if let Some(rg) = ln_recip_gamma(a - b + 1.0)? {
        let g = ln_gamma(1.0 - b)?;
        let m = kummer_series(a, b, y)?;
        (t1, e1) = scaled_term(g.value + rg.value, g.sign * rg.sign, m);
    }
    let (mut t2, mut e2) = (0.0, 0.0);
    if let Some(rg) = ln_recip_gamma(a)? {
        let g = ln_gamma(b - 1.0)?;
        let m = kummer_series(a - b + 1.0, 2.0 - b, y)?;
        (t2, e2) = scaled_term(g.value + rg.value + (1.0 - b) * y.ln(), g.sign * rg.sign, m);
    }
    let value = t1 + t2;
    if !value.is_finite() {
        return Err(Error::Overflow(format!("U({a}, {b}, {y})")));
    }
    Ok(SpecFunResult {
        value,
        abs_error_estimate: e1 + e2 + 2.0 * f64::EPSILON * (t1.abs() + t2.abs()),
        method: Method::ConnectionFormula,
    })
}

/// Connection formula, interpolated linearly in b across b0 ± ε when b is
/// within ε of an integer b0.
fn connection_with_integer_b(a: f64, b: f64, y: f64) -> Result<SpecFunResult> {
    let b0 = b.round();
    if (b - b0).abs() >= INTEGER_B_OFFSET {
        return connection_formula(a, b, y);
    }
    let lo = connection_formula(a, b0 - INTEGER_B_OFFSET, y)?;
    let hi = connection_formula(a, b0 + INTEGER_B_OFFSET, y)?;
    let w = (b - (b0 - INTEGER_B_OFFSET)) / (2.0 * INTEGER_B_OFFSET);
    let value = lo.value + w * (hi.value - lo.value);
    Ok(SpecFunResult {
        value,
        abs_error_estimate: lo.abs_error_estimate.max(hi.abs_error_estimate)
            + INTEGER_B_OFFSET * (hi.value - lo.value).abs(),
        method: Method::ConnectionFormula,
    })
}

/// U(a,b,y) = 1/Γ(a) ∫₀^∞ e^(−yt) t^(a−1) (1+t)^(b−a−1) dt for a > 0,
/// by exp-sinh quadrature t = exp((π/2) sinh x).
fn integral_representation(a: f64, b: f64, y: f64) -> Result<SpecFunResult> {
    debug_assert!(a > 0.0);
    let ln_y = y.ln();
    let exponent = |x: f64| -> f64 {
        let ln_t = FRAC_PI_2 * x.sinh();
        let decay = (ln_y + ln_t).exp();
        if decay > 1e300 {
            return f64::NEG_INFINITY;
        }
        let ln_1p_t = if ln_t > 36.0 {
            ln_t + (-ln_t).exp()
        } else {
            ln_t.exp().ln_1p()
        };
        -decay + a * ln_t + (b - a - 1.0) * ln_1p_t + (FRAC_PI_2 * x.cosh()).ln()
    };

    const X_CAP: f64 = 14.0;
    // Locate the peak and the window where the integrand is non-negligible.
    let mut peak = f64::NEG_INFINITY;
    let mut x = -X_CAP;
    while x <= X_CAP {
        peak = peak.max(exponent(x));
        x += 0.125;
    }
    if !peak.is_finite() {
        return Err(Error::Domain(format!("U({a}, {b}, {y}) integrand vanishes")));
    }
    let cutoff = peak - 60.0;
    let mut lo = -X_CAP;
    while lo < X_CAP && exponent(lo) < cutoff {
        lo += 0.125;
    }
    let mut hi = X_CAP;
    while hi > lo && exponent(hi) < cutoff {
        hi -= 0.125;
    }
    lo -= 0.125;
    hi += 0.125;

    let trapezoid = |h: f64| -> f64 {
        let k0 = (lo / h).floor() as i64;
        let k1 = (hi / h).ceil() as i64;
        let s: CompensatedSum = (k0..=k1)
            .map(|k| (exponent(k as f64 * h) - peak).exp())
            .collect();
        h * s.value()
    };

    let mut h = 0.5;
    let mut prev = trapezoid(h);
    let mut diff = f64::INFINITY;
    let mut current = prev;
    for _ in 0..9 {
        h *= 0.5;
        current = trapezoid(h);
        diff = (current - prev).abs();
        if diff <= 1e-15 * current.abs() {
            break;
        }
        prev = current;
    }
    let lg = ln_gamma(a)?;
    let log_value = current.ln() + peak - lg.value;
    let value = log_value.exp();
    if !value.is_finite() {
        return Err(Error::Overflow(format!("U({a}, {b}, {y})")));
    }
    let rel = diff / current + 4.0 * f64::EPSILON * (1.0 + log_value.abs());
    Ok(SpecFunResult {
        value,
        abs_error_estimate: rel * value,
        method: Method::IntegralRepresentation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn a_zero_is_one() {
        for (b, y) in [(1.7, 0.5), (-3.2, 4.0), (4.0, 30.0)] {
            let r = tricomi_u(0.0, b, y).unwrap();
            assert_eq!(r.value, 1.0);
            assert_eq!(r.method, Method::PolynomialReduction);
        }
    }

    #[test]
    fn degree_one_reduction() {
        for (b, y) in [(1.7, 0.5), (3.0, 2.0), (-0.5, 7.0)] {
            let r = tricomi_u(-1.0, b, y).unwrap();
            assert_relative_eq!(r.value, y - b, max_relative = 1e-15);
            assert_eq!(r.method, Method::PolynomialReduction);
        }
    }

    #[test]
    fn b_equals_a_plus_one_is_power() {
        // U(a, a+1, y) = y^(−a)
        for (a, y) in [(0.3, 0.5), (2.2, 3.0), (1.5, 25.0), (0.75, 0.01)] {
            let r = tricomi_u(a, a + 1.0, y).unwrap();
            assert_relative_eq!(r.value, y.powf(-a), max_relative = 1e-10);
        }
    }

    #[test]
    fn integer_b_is_interpolated() {
        // U(1, 1, y) = e^y E1(y); E1(1) = 0.21938393439552027
        let r = tricomi_u(1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::E * 0.219_383_934_395_520_27, max_relative = 1e-9);
    }

    #[test]
    fn cancelling_connection_defers_to_quadrature() {
        // mpmath hyperu(1.3, 0.4, 6)
        let r = tricomi_u(1.3, 0.4, 6.0).unwrap();
        assert_relative_eq!(r.value, 0.070_751_193_094_880_68, max_relative = 1e-12);
        let q = integral_representation(1.3, 0.4, 6.0).unwrap();
        assert_relative_eq!(q.value, 0.070_751_193_094_880_68, max_relative = 1e-12);
    }

    #[test]
    fn large_argument_uses_asymptotic_series() {
        let r = tricomi_u(4.5, 0.5, 120.0).unwrap();
        assert_eq!(r.method, Method::Asymptotic);
        let q = integral_representation(4.5, 0.5, 120.0).unwrap();
        assert_relative_eq!(r.value, q.value, max_relative = 1e-12);
    }

    #[test]
    fn moderate_argument_large_a() {
        // mpmath hyperu(4.5, 0.5, 20) and hyperu(4.5, 0.5, 60)
        let r = tricomi_u(4.5, 0.5, 20.0).unwrap();
        assert_relative_eq!(r.value, 5.591_083_565_278_15e-7, max_relative = 1e-11);
        let r = tricomi_u(4.5, 0.5, 60.0).unwrap();
        assert_relative_eq!(r.value, 7.045_254_122_559_134e-9, max_relative = 1e-11);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(tricomi_u(0.3, 1.7, 0.0), Err(Error::Domain(_))));
        assert!(matches!(tricomi_u(0.3, 1.7, -1.0), Err(Error::Domain(_))));
        assert!(matches!(tricomi_u_small_y(0.3, 1.0, 0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn small_y_form_values() {
        assert_eq!(tricomi_u_small_y(-2.0, 1.7, 1e-3).unwrap(), 0.0);
        let v = tricomi_u_small_y(0.5, 2.0, 1e-4).unwrap();
        assert_relative_eq!(v, 5_641.895_835_477_563, max_relative = 1e-13);
    }
}
