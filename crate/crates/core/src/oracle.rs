//! Brute-force cross-checks that share no code with the analytic solvers.
//!
//! The radial problem is discretized on a uniform grid in r after the
//! substitution f = u/√r, which gives the symmetric Sturm–Liouville form
//! −u″ + [(γ² − 1/4)/r² + m²ϖ²r²/4] u = τ u with Dirichlet ends. Eigenvalues
//! come from Sturm-sequence bisection on the tridiagonal matrix.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::landau::LandauChannel;
use crate::model::Spin;

pub const MIN_GRID_POINTS: usize = 100;
pub const DEFAULT_GRID_POINTS: usize = 4000;
/// Refinement stops doubling beyond this many interior points.
pub const MAX_GRID_POINTS: usize = 1 << 18;

/// Observed N→2N over 2N→4N change ratio accepted as second-order convergence.
pub const RICHARDSON_RATIO: (f64, f64) = (3.0, 5.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n: usize,
    pub spacing: f64,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "grid needs 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if n < MIN_GRID_POINTS {
            return Err(Error::InvalidParams(format!(
                "grid needs at least {MIN_GRID_POINTS} interior points, got {n}"
            )));
        }
        Ok(Self {
            r_min,
            r_max,
            n,
            spacing: (r_max - r_min) / (n + 1) as f64,
        })
    }

    /// Wall at y0 and an outer edge where the Gaussian tail is below 1e−18.
    pub fn for_wall(y0: f64, m: f64, varpi: f64, n: usize) -> Result<Self> {
        let mw = m * varpi;
        Self::new((2.0 * y0 / mw).sqrt(), outer_radius(mw), n)
    }

    /// Same end points, `n` interior points.
    pub fn with_points(&self, n: usize) -> Result<Self> {
        Self::new(self.r_min, self.r_max, n)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.r_min + (i + 1) as f64 * self.spacing
    }
}

/// ⌈√(4·41.5/(mϖ))⌉: e^(−mϖr²/4) < 1e−18 beyond it.
pub fn outer_radius(m_varpi: f64) -> f64 {
    (4.0 * 41.5 / m_varpi).sqrt().ceil()
}

/// Symmetric tridiagonal matrix: `diag[i]`, and `off_sq[i]` = (A[i][i+1])².
#[derive(Debug, Clone)]
struct Tridiagonal {
    diag: Vec<f64>,
    off_sq: Vec<f64>,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below x.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let prev = if q == 0.0 { f64::EPSILON * (self.off_sq[i - 1].sqrt() + x.abs()).max(f64::MIN_POSITIVE) } else { q };
            q = self.diag[i] - x - self.off_sq[i - 1] / prev;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let off = |i: usize| if i < n - 1 { self.off_sq[i].sqrt() } else { 0.0 };
        (0..n).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
            let radius = off(i) + if i > 0 { off(i - 1) } else { 0.0 };
            (lo.min(self.diag[i] - radius), hi.max(self.diag[i] + radius))
        })
    }

    /// k-th smallest eigenvalue (0-based) by bisection.
    fn eigenvalue(&self, k: usize, abs_tol: f64) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        while hi - lo > abs_tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Which discretization of the radial operator to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discretization {
    /// Second-order stencil on −u″ + V u after f = u/√r.
    Symmetric,
    /// Second-order stencil on −f″ − f′/r + [γ²/r² + m²ϖ²r²/4] f, made
    /// symmetric by a diagonal similarity.
    Unsymmetrized,
}

fn assemble(gamma: f64, m_varpi: f64, grid: &RadialGrid, kind: Discretization) -> Tridiagonal {
    let h = grid.spacing;
    let inv_h2 = 1.0 / (h * h);
    let confine = 0.25 * m_varpi * m_varpi;
    let centrifugal = match kind {
        Discretization::Symmetric => gamma * gamma - 0.25,
        Discretization::Unsymmetrized => gamma * gamma,
    };
    let diag = (0..grid.n)
        .map(|i| {
            let r = grid.point(i);
            2.0 * inv_h2 + centrifugal / (r * r) + confine * r * r
        })
        .collect();
    let off_sq = (0..grid.n - 1)
        .map(|i| match kind {
            Discretization::Symmetric => inv_h2 * inv_h2,
            Discretization::Unsymmetrized => {
                let upper = -inv_h2 - 1.0 / (2.0 * h * grid.point(i));
                let lower = -inv_h2 + 1.0 / (2.0 * h * grid.point(i + 1));
                upper * lower
            }
        })
        .collect();
    Tridiagonal { diag, off_sq }
}

/// The `k` lowest τ on one grid, to absolute tolerance 1e−10·mϖ.
pub fn radial_fd_eigenvalues(
    gamma: f64,
    varpi: f64,
    m: f64,
    grid: &RadialGrid,
    k: usize,
    kind: Discretization,
) -> Result<Vec<f64>> {
    if k == 0 || k > grid.n / 10 {
        return Err(Error::InvalidParams(format!(
            "can request 1..={} eigenvalues on {} points, asked for {k}",
            grid.n / 10,
            grid.n
        )));
    }
    if kind == Discretization::Unsymmetrized && grid.spacing >= 2.0 * grid.r_min {
        return Err(Error::InvalidParams("unsymmetrized stencil needs spacing < 2 r_min".into()));
    }
    let mw = m * varpi;
    let matrix = assemble(gamma, mw, grid, kind);
    let tol = 1e-10 * mw;
    Ok((0..k).into_par_iter().map(|i| matrix.eigenvalue(i, tol)).collect())
}

/// Grid-extrapolated eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergedEigenvalues {
    pub tau: Vec<f64>,
    /// |Richardson value − finest grid value| per eigenvalue.
    pub error_estimate: Vec<f64>,
    /// Interior points of the finest grid used.
    pub finest_points: usize,
}

/// Doubles N from `grid.n` until every eigenvalue shows second-order
/// convergence over N, 2N, 4N and every Richardson correction is below
/// `rel_budget`·max(|τ|, mϖ).
pub fn converged_eigenvalues(
    gamma: f64,
    varpi: f64,
    m: f64,
    grid: &RadialGrid,
    k: usize,
    kind: Discretization,
    rel_budget: f64,
) -> Result<ConvergedEigenvalues> {
    let floor = 1e-9 * m * varpi;
    let mut n = grid.n;
    let mut coarse = radial_fd_eigenvalues(gamma, varpi, m, &grid.with_points(n)?, k, kind)?;
    let mut mid = radial_fd_eigenvalues(gamma, varpi, m, &grid.with_points(2 * n)?, k, kind)?;
    loop {
        let fine = radial_fd_eigenvalues(gamma, varpi, m, &grid.with_points(4 * n)?, k, kind)?;
        let mut worst: Option<(usize, f64, f64)> = None;
        let mut tau = Vec::with_capacity(k);
        let mut error_estimate = Vec::with_capacity(k);
        for i in 0..k {
            let d1 = mid[i] - coarse[i];
            let d2 = fine[i] - mid[i];
            let ratio = d1 / d2;
            let regular = d2.abs() <= floor || (RICHARDSON_RATIO.0..=RICHARDSON_RATIO.1).contains(&ratio);
            let correction = d2 / 3.0;
            let budget = rel_budget * fine[i].abs().max(m * varpi);
            if !regular || correction.abs() > budget {
                let change = if regular { correction.abs() } else { d2.abs() };
                if worst.is_none_or(|(_, c, _)| change > c) {
                    worst = Some((i, change, budget));
                }
            }
            tau.push(fine[i] + correction);
            error_estimate.push(correction.abs());
        }
        match worst {
            None => {
                return Ok(ConvergedEigenvalues {
                    tau,
                    error_estimate,
                    finest_points: 4 * n,
                })
            }
            Some((index, change, budget)) if 8 * n > MAX_GRID_POINTS => {
                return Err(Error::GridTooCoarse { index, change, budget });
            }
            Some(_) => {
                n *= 2;
                coarse = mid;
                mid = fine;
            }
        }
    }
}

/// E = (τ + s m ϖ γ − m ϖ) / (2m).
pub fn fd_energy(tau: f64, gamma: f64, s: Spin, varpi: f64, m: f64) -> f64 {
    LandauChannel::decoupled(gamma, s, varpi, m, 0.0).energy_from_tau(tau)
}

/// Lowest `k` energies for a wall at y0; `rel_budget` bounds the Richardson correction of τ.
pub fn fd_energies(
    gamma: f64,
    s: Spin,
    varpi: f64,
    m: f64,
    y0: f64,
    k: usize,
    rel_budget: f64,
) -> Result<Vec<f64>> {
    let grid = RadialGrid::for_wall(y0, m, varpi, DEFAULT_GRID_POINTS)?;
    let conv = converged_eigenvalues(gamma, varpi, m, &grid, k, Discretization::Symmetric, rel_budget)?;
    Ok(conv.tau.iter().map(|&t| fd_energy(t, gamma, s, varpi, m)).collect())
}

/// β = j² − 2νj with j = ℓ + 1/2.
pub fn ring_dispersion_oracle(l: i64, nu: f64) -> f64 {
    let j = l as f64 + 0.5;
    j * j - 2.0 * nu * j
}

/// E = (β + ν² − mϖR²) / (2mR²).
pub fn ring_energy_from_beta(beta: f64, nu: f64, m: f64, varpi: f64, radius: f64) -> f64 {
    let r2 = radius * radius;
    (beta + nu * nu - m * varpi * r2) / (2.0 * m * r2)
}

const D1: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
const D2_CENTER: f64 = -205.0 / 72.0;
const D2: [f64; 4] = [8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];

/// Max over interior samples of the residual of
/// y f″ + f′ − (γ²/4y) f − (y/4) f + (τ/2mϖ) f,
/// each divided by the largest |f| in its stencil times the coefficient scale.
///
/// `values[i]` samples f at y_start + i·h. Derivatives use 9-point stencils.
pub fn ode_residual(channel: &LandauChannel, energy: f64, y_start: f64, h: f64, values: &[f64]) -> Result<f64> {
    if values.len() < 9 {
        return Err(Error::InsufficientSamples {
            need: 9,
            got: values.len(),
        });
    }
    if !(h > 0.0 && y_start > 0.0) {
        return Err(Error::InvalidParams("samples need y_start > 0 and h > 0".into()));
    }
    let c = channel.tau(energy) / (2.0 * channel.m * channel.varpi);
    let g2 = channel.gamma * channel.gamma;
    let mut worst: f64 = 0.0;
    for i in 4..values.len() - 4 {
        let y = y_start + i as f64 * h;
        let f = values[i];
        let (mut d1, mut d2) = (0.0, D2_CENTER * f);
        for k in 1..=4 {
            d1 += D1[k - 1] * (values[i + k] - values[i - k]);
            d2 += D2[k - 1] * (values[i + k] + values[i - k]);
        }
        let (d1, d2) = (d1 / h, d2 / (h * h));
        let residual = y * d2 + d1 - g2 / (4.0 * y) * f - 0.25 * y * f + c * f;
        let local = values[i - 4..=i + 4].iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let scale = local * (1.0 + g2 / (4.0 * y) + 0.25 * y + c.abs());
        if scale > 0.0 {
            worst = worst.max(residual.abs() / scale);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn oscillator_gate() {
        let grid = RadialGrid::new(1e-8, 12.0, DEFAULT_GRID_POINTS).unwrap();
        let conv = converged_eigenvalues(0.5, 2.0, 1.0, &grid, 4, Discretization::Symmetric, 1e-7).unwrap();
        for (k, tau) in conv.tau.iter().enumerate() {
            assert_relative_eq!(*tau, 4.0 * k as f64 + 3.0, max_relative = 1e-6);
        }
    }

    #[test]
    fn sturm_count_on_a_known_matrix() {
        // 1D Laplacian: eigenvalues 2 − 2cos(kπ/(n+1))
        let n = 50;
        let t = Tridiagonal {
            diag: vec![2.0; n],
            off_sq: vec![1.0; n - 1],
        };
        for k in [0, 7, 49] {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((t.eigenvalue(k, 1e-13) - want).abs() < 1e-12);
        }
        assert_eq!(t.count_below(10.0), n);
        assert_eq!(t.count_below(-1.0), 0);
    }

    #[test]
    fn grid_validation() {
        assert!(RadialGrid::new(0.0, 1.0, 200).is_err());
        assert!(RadialGrid::new(1.0, 0.5, 200).is_err());
        assert!(RadialGrid::new(0.1, 1.0, 99).is_err());
        let g = RadialGrid::new(0.0 + 1.0, 2.0, 999).unwrap();
        assert_eq!(g.spacing, 1e-3);
    }

    #[test]
    fn dispersion_oracle_examples() {
        assert_eq!(ring_dispersion_oracle(0, 0.0), 0.25);
        assert_eq!(ring_dispersion_oracle(0, -0.5), 0.75);
        assert_eq!(ring_energy_from_beta(0.75, -0.5, 1.0, 2.0, 1.0), -0.5);
        let nu = 3.5;
        assert_eq!(ring_dispersion_oracle(3, nu), -nu * nu);
        assert_eq!(ring_energy_from_beta(-nu * nu, nu, 1.0, 2.0, 1.0), -1.0);
    }

    #[test]
    fn residual_of_constant() {
        let ch = LandauChannel::decoupled(1.0, Spin::Up, 2.0, 1.0, 0.0);
        assert!(matches!(
            ode_residual(&ch, 0.0, 1.0, 0.1, &[1.0; 8]),
            Err(Error::InsufficientSamples { need: 9, got: 8 })
        ));
        let r = ode_residual(&ch, ch.energy_from_tau(0.0), 1.0, 1e-3, &[1.0; 9]).unwrap();
        // −1/(4y) − y/4 at y = 1.004 over 1 + 1/(4y) + y/4
        let y: f64 = 1.004;
        let want = (0.25 / y + 0.25 * y) / (1.0 + 0.25 / y + 0.25 * y);
        assert_relative_eq!(r, want, max_relative = 1e-8);
    }
}
