//! Relaxation function of the generalized Lomnitz model.
//!
//! `φ_ν` solves the Volterra equation of the second kind
//!
//! ```text
//! φ(t) = 1 - γ ∫_0^t K_ν(t - τ) φ(τ) dτ,
//! K_ν(x) = ln^{ν-1}(1+x)/(1+x),   γ = qν/Γ(1+ν)
//! ```
//!
//! in time scaled by `τ₀`. [`solve_relaxation`] uses left-constant product
//! integration, which yields the explicit recursion
//! `φ_n = 1 - γ Σ_{j<n} Ω_{n-j} φ_j` with
//! `Ω_m = [ln^ν(1+mh) - ln^ν(1+(m-1)h)]/ν`.
//! [`oracle_solve`] is an independent implicit scheme with piecewise-linear
//! `φ` on a four times finer grid.

use std::time::Instant;

use crate::creep::{creep_psi, MaterialParameters, Regime};
use crate::error::{check_order, check_positive, Error, Result};
use crate::quadrature;
use crate::special_functions::gamma;

/// Uniform time grid `t_j = j h`, `j = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    h: f64,
    n: usize,
}

impl UniformGrid {
    pub fn new(h: f64, n: usize) -> Result<Self> {
        check_positive("h", h)?;
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: 0.0,
                reason: "grid needs at least one step",
            });
        }
        Ok(Self { h, n })
    }

    /// Grid with step `h` reaching `horizon` (rounded to a whole number of
    /// steps).
    pub fn with_horizon(h: f64, horizon: f64) -> Result<Self> {
        check_positive("h", h)?;
        check_positive("horizon", horizon)?;
        let n = (horizon / h).round().max(1.0) as usize;
        Self::new(h, n)
    }

    /// Grid on `[0, horizon]` with at most `max_steps` steps and the
    /// finest step compatible with that bound.
    pub fn for_horizon(horizon: f64, max_steps: usize) -> Result<Self> {
        check_positive("horizon", horizon)?;
        Self::new(horizon / max_steps as f64, max_steps)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn horizon(&self) -> f64 {
        self.h * self.n as f64
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.h
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(|j| self.time(j))
    }

    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.h / factor as f64, self.n * factor)
    }
}

/// Values on a [`UniformGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: UniformGrid,
    values: Vec<f64>,
    label: String,
}

impl SampledFunction {
    pub fn new(grid: UniformGrid, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.len() != grid.n + 1 {
            return Err(Error::InvalidParameter {
                name: "values",
                value: values.len() as f64,
                reason: "length must be n + 1",
            });
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput {
                label: label.into(),
                t: grid.time(j),
            });
        }
        Ok(Self {
            grid,
            values,
            label: label.into(),
        })
    }

    /// Samples `f` at every grid node.
    pub fn from_fn(
        grid: UniformGrid,
        label: impl Into<String>,
        f: impl Fn(f64) -> Result<f64>,
    ) -> Result<Self> {
        let values = grid.times().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(grid, values, label)
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Piecewise-linear interpolant; `t` is clamped to `[0, T]`.
    pub fn interpolate(&self, t: f64) -> f64 {
        let s = (t / self.grid.h).clamp(0.0, self.grid.n as f64);
        let j = (s.floor() as usize).min(self.grid.n - 1);
        let frac = s - j as f64;
        self.values[j] + frac * (self.values[j + 1] - self.values[j])
    }
}

/// Solved relaxation curve with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub solution: SampledFunction,
    /// `Ω_1, Ω_2, …` (at most [`WEIGHTS_HEAD`] of them), in scaled time.
    pub weights_head: Vec<f64>,
    /// `γ = qν/Γ(1+ν)`.
    pub gamma: f64,
    /// `max_j |φ_h(t_j) - φ_{h/2}(t_j)|`.
    pub refinement_error: f64,
    pub runtime_note: String,
}

pub const WEIGHTS_HEAD: usize = 8;

/// `K_ν(x) = ln^{ν-1}(1+x)/(1+x)` for `x > 0`.
pub fn kernel(nu: f64, x: f64) -> Result<f64> {
    check_order("nu", nu)?;
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain {
            what: "kernel",
            value: x,
            reason: "kernel is defined for x > 0",
        });
    }
    let l = x.ln_1p();
    let p = if nu == 1.0 { 1.0 } else { l.powf(nu - 1.0) };
    Ok(p / (1.0 + x))
}

/// Product-integration weights `Ω_1..Ω_count` for step `h`.
///
/// `Ω_m` is a difference of `ln^ν` at neighbouring nodes; it is formed as
/// `L_{m-1}^ν expm1(ν ln(1 + d/L_{m-1}))/ν` with `d = L_m - L_{m-1}`
/// computed directly, so no digits are lost when `Ω_m ≪ L_m^ν`.
pub fn weights(nu: f64, h: f64, count: usize) -> Result<Vec<f64>> {
    check_order("nu", nu)?;
    check_positive("h", h)?;
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    out.push(h.ln_1p().powf(nu) / nu);
    for m in 2..=count {
        let prev = (m - 1) as f64 * h;
        let l_prev = prev.ln_1p();
        // ln(1+mh) - ln(1+(m-1)h)
        let d = (h / (1.0 + prev)).ln_1p();
        let omega = if nu == 1.0 {
            d
        } else {
            l_prev.powf(nu) * (nu * (d / l_prev).ln_1p()).exp_m1() / nu
        };
        out.push(omega);
    }
    Ok(out)
}

fn admissible_step(q: f64, nu: f64, gamma_1_nu: f64) -> f64 {
    // q ln^ν(1+h) < Γ(1+ν)
    ((gamma_1_nu / q).powf(1.0 / nu)).exp_m1()
}

fn check_step(p: &MaterialParameters, h_scaled: f64, g: f64, omega1: f64) -> Result<()> {
    let product = g * omega1;
    if product >= 1.0 {
        let limit = admissible_step(p.q(), p.nu(), p.gamma_1_nu()) * p.tau0();
        return Err(Error::StepTooLarge {
            h: h_scaled * p.tau0(),
            product,
            suggested: 0.5 * limit,
        });
    }
    Ok(())
}

/// `γ = qν/Γ(1+ν)`.
pub fn gamma_factor(p: &MaterialParameters) -> f64 {
    p.q() * p.nu() / p.gamma_1_nu()
}

/// Checks `γ Ω_1 < 1` for step `h` without solving.
pub fn check_admissible(p: &MaterialParameters, h: f64) -> Result<()> {
    check_positive("h", h)?;
    let h_scaled = h / p.tau0();
    let omega1 = h_scaled.ln_1p().powf(p.nu()) / p.nu();
    check_step(p, h_scaled, gamma_factor(p), omega1)
}

fn explicit_recursion(g: f64, omega: &[f64], n: usize) -> Vec<f64> {
    let mut phi = Vec::with_capacity(n + 1);
    phi.push(1.0);
    for step in 1..=n {
        // Σ_{j=0}^{n-1} Ω_{n-j} φ_j ; omega[k] holds Ω_{k+1}
        let conv: f64 = phi
            .iter()
            .zip(omega[..step].iter().rev())
            .map(|(p, w)| p * w)
            .sum();
        phi.push(1.0 - g * conv);
    }
    phi
}

fn solve_scaled(p: &MaterialParameters, h_scaled: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let g = gamma_factor(p);
    let omega = weights(p.nu(), h_scaled, n)?;
    check_step(p, h_scaled, g, omega[0])?;
    Ok((explicit_recursion(g, &omega, n), omega))
}

/// Solves for `φ_ν` on `grid` (physical time) and re-solves at `h/2`
/// on the same horizon to estimate the discretization error.
pub fn solve_relaxation(p: &MaterialParameters, grid: &UniformGrid) -> Result<SolverReport> {
    let start = Instant::now();
    let h_scaled = grid.h / p.tau0();
    let (phi, omega) = solve_scaled(p, h_scaled, grid.n)?;
    let (fine, _) = solve_scaled(p, 0.5 * h_scaled, 2 * grid.n)?;
    let refinement_error = phi
        .iter()
        .enumerate()
        .map(|(j, v)| (v - fine[2 * j]).abs())
        .fold(0.0, f64::max);
    let label = format!("phi_nu={}", p.nu());
    let elapsed = start.elapsed();
    Ok(SolverReport {
        solution: SampledFunction::new(*grid, phi, label)?,
        weights_head: omega.iter().take(WEIGHTS_HEAD).copied().collect(),
        gamma: gamma_factor(p),
        refinement_error,
        runtime_note: format!(
            "{} + {} explicit steps in {:.3} ms",
            grid.n,
            2 * grid.n,
            elapsed.as_secs_f64() * 1e3
        ),
    })
}

/// `∫_0^W expm1(w) w^{ν-1} dw = Σ_{k≥1} W^{k+ν} / (k! (k+ν))`.
fn first_moment_series(nu: f64, w: f64) -> f64 {
    let mut term = w.powf(nu);
    let mut sum = 0.0;
    for k in 1..200 {
        term *= w / k as f64;
        let add = term / (k as f64 + nu);
        sum += add;
        if add < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Per-panel moments on `[(m-1)h, mh]`, `m = 1..=count`:
/// `A_m = ∫ K`, `B_m = (1/h) ∫ K(x) (x - (m-1)h) dx`.
fn linear_moments(nu: f64, h: f64, count: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let a = weights(nu, h, count)?;
    let (nodes, gl_weights) = quadrature::gauss_legendre(10);
    let mut b = Vec::with_capacity(count);
    b.push(first_moment_series(nu, h.ln_1p()) / h);
    for m in 2..=count {
        let x0 = (m - 1) as f64 * h;
        let half = 0.5 * h;
        let mid = x0 + half;
        let s: f64 = nodes
            .iter()
            .zip(&gl_weights)
            .map(|(z, w)| {
                let x = mid + half * z;
                let l = x.ln_1p();
                let k = if nu == 1.0 { 1.0 } else { l.powf(nu - 1.0) } / (1.0 + x);
                w * k * (x - x0)
            })
            .sum();
        b.push(s * half / h);
    }
    Ok((a, b))
}

/// Independent reference solution: piecewise-linear `φ`, exact kernel
/// moments, one implicit scalar equation per step, on a grid refined 4×
/// and restricted back to `grid`.
pub fn oracle_solve(p: &MaterialParameters, grid: &UniformGrid) -> Result<SampledFunction> {
    check_admissible(p, grid.h)?;
    const REFINE: usize = 4;
    let fine_n = grid.n * REFINE;
    let h = grid.h / p.tau0() / REFINE as f64;
    let g = gamma_factor(p);
    let (a, b) = linear_moments(p.nu(), h, fine_n + 1)?;
    // a[k], b[k] hold A_{k+1}, B_{k+1}; C_m = B_m + A_{m+1} - B_{m+1}
    let c: Vec<f64> = (0..fine_n).map(|k| b[k] + a[k + 1] - b[k + 1]).collect();
    let diag = 1.0 + g * (a[0] - b[0]);
    let mut phi = Vec::with_capacity(fine_n + 1);
    phi.push(1.0);
    for n in 1..=fine_n {
        // B_n φ_0 + Σ_{i=1}^{n-1} C_{n-i} φ_i
        let mut s = b[n - 1] * phi[0];
        s += phi[1..n]
            .iter()
            .zip(c[..n - 1].iter().rev())
            .map(|(p, w)| p * w)
            .sum::<f64>();
        phi.push((1.0 - g * s) / diag);
    }
    let values = phi.iter().step_by(REFINE).copied().collect();
    SampledFunction::new(*grid, values, format!("oracle_phi_nu={}", p.nu()))
}

/// Leading-order behaviour of `φ_ν` for `q = τ₀ = 1`:
/// `1 - t^ν/Γ(1+ν)` as `t → 0⁺`, `Γ(1+ν)/ln^ν t` as `t → ∞`.
pub fn relaxation_asymptotic(nu: f64, t: f64, regime: Regime) -> Result<f64> {
    check_order("nu", nu)?;
    regime.check("relaxation_asymptotic", t)?;
    let g = gamma(1.0 + nu)?;
    Ok(match regime {
        Regime::SmallTime => 1.0 - t.powf(nu) / g,
        Regime::LargeTime => g / t.ln().powf(nu),
    })
}

/// Residual of `φ(t) - 1 + ∫_0^t ψ̇(s) φ(t - s) ds` at each probe time, with
/// `φ` linearly interpolated. The integral is taken panel by panel in the
/// variable `ψ` itself (`dψ = ψ̇ ds`), which removes the kernel singularity.
pub fn residual(p: &MaterialParameters, phi: &SampledFunction, probes: &[f64]) -> Result<Vec<f64>> {
    let horizon = phi.grid().horizon();
    let h = phi.grid().h();
    // inverse of ψ
    let lag = |psi: f64| p.tau0() * (p.gamma_1_nu() * psi / p.q()).powf(1.0 / p.nu()).exp_m1();
    probes
        .iter()
        .map(|&t| {
            if !(t > 0.0 && t <= horizon * (1.0 + 1e-12)) {
                return Err(Error::Domain {
                    what: "residual",
                    value: t,
                    reason: "probe must lie in (0, T]",
                });
            }
            let t = t.min(horizon);
            let integrand = |psi: f64| phi.interpolate((t - lag(psi)).max(0.0));
            let panels = ((t / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            let mut total = 0.0;
            for k in 0..panels {
                let lo = k as f64 * h;
                let hi = if k + 1 == panels {
                    t
                } else {
                    (k + 1) as f64 * h
                };
                let (a, b) = (creep_psi(p, t - hi)?, creep_psi(p, t - lo)?);
                total += quadrature::adaptive(integrand, a, b, 1e-14, 1e-12)?.value;
            }
            Ok((phi.interpolate(t) - 1.0 + total).abs())
        })
        .collect()
}
