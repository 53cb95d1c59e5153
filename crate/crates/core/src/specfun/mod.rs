//! Special functions: sign-carrying log-Gamma, Kummer's M and Tricomi's U.

mod gamma;
mod kummer;
mod tricomi;

pub use gamma::{gamma, ln_gamma, recip_gamma, LnGamma};
pub use kummer::kummer_m;
pub use tricomi::{tricomi_u, tricomi_u_small_y, tricomi_u_with_estimate, U_REL_TARGET};

pub(crate) use gamma::{is_nonpositive_integer, ln_recip_gamma};
pub(crate) use kummer::kummer_series;

/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 10_000;

/// Relative size of the last retained term at which series stop.
pub const SERIES_STOP: f64 = 1e-16;

/// Which route produced a special-function value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Series,
    ConnectionFormula,
    Asymptotic,
    PolynomialReduction,
    IntegralRepresentation,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::ConnectionFormula => "connection_formula",
            Method::Asymptotic => "asymptotic",
            Method::PolynomialReduction => "polynomial_reduction",
            Method::IntegralRepresentation => "integral_representation",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    /// Absolute error estimate, same units as `value`.
    pub abs_error_estimate: f64,
    pub method: Method,
}

impl SpecFunResult {
    pub fn relative_error_estimate(&self) -> f64 {
        if self.value == 0.0 {
            if self.abs_error_estimate == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.abs_error_estimate / self.value.abs()
        }
    }
}
