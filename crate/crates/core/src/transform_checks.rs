//! Laplace-domain consistency of a creep/relaxation pair.
//!
//! The Volterra equation implies `φ̃(s) = 1 / (s [1 + s ψ̃(s)])`. Both
//! transforms are computed forward from sampled data; nothing is inverted.

use crate::creep::{creep_psi, MaterialParameters};
use crate::error::{check_positive, Error, Result};
use crate::relaxation_solver::SampledFunction;

/// Largest `s h` for which the per-panel closed forms are used.
pub const MAX_SH: f64 = 10.0;

/// Smallest `s T` accepted by [`check_laplace_identity`].
pub const MIN_ST: f64 = 15.0;

/// Default probe set.
pub const DEFAULT_PROBES: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceProbe {
    pub s: f64,
    pub truncation_t: f64,
    /// `|f(T)| e^{-sT} / s`, the transform of the constant continuation.
    pub tail_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceValue {
    pub value: f64,
    pub probe: LaplaceProbe,
}

/// `∫_0^h x e^{-sx} dx · s² = 1 - e^{-z}(1 + z)`, `z = sh`.
fn first_moment_scaled(z: f64) -> f64 {
    if z < 1e-3 {
        // Σ_{k≥2} (-1)^k (k-1) z^k / k!
        let mut term = z * z / 2.0;
        let mut sum = term;
        for k in 3..12 {
            term *= -z / k as f64;
            sum += term * (k - 1) as f64;
        }
        sum
    } else {
        -(-z).exp_m1() - z * (-z).exp()
    }
}

/// `∫_0^T e^{-st} f(t) dt` for the piecewise-linear interpolant of `f`.
pub fn laplace_of_sampled(f: &SampledFunction, s: f64) -> Result<LaplaceValue> {
    check_positive("s", s)?;
    let grid = f.grid();
    let h = grid.h();
    let z = s * h;
    if z > MAX_SH {
        return Err(Error::Unstable {
            product: z,
            limit: MAX_SH,
        });
    }
    // per panel: e^{-s t_j} [f_j I0 + (f_{j+1} - f_j) I1 / h]
    let i0 = -(-z).exp_m1() / s;
    let i1_over_h = first_moment_scaled(z) / (s * s * h);
    let decay = (-z).exp();
    let mut damping = 1.0;
    let mut total = 0.0;
    for pair in f.values().windows(2) {
        total += damping * (pair[0] * i0 + (pair[1] - pair[0]) * i1_over_h);
        damping *= decay;
    }
    let horizon = grid.horizon();
    let last = *f.values().last().unwrap();
    Ok(LaplaceValue {
        value: total,
        probe: LaplaceProbe {
            s,
            truncation_t: horizon,
            tail_estimate: last.abs() * (-s * horizon).exp() / s,
        },
    })
}

/// Per-probe outcome of [`check_laplace_identity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidual {
    pub s: f64,
    pub psi_transform: f64,
    pub phi_transform: f64,
    pub predicted_phi_transform: f64,
    /// `|φ̃ - 1/(s(1 + sψ̃))| / φ̃`.
    pub residual: f64,
}

/// Compares the transform of a solved relaxation curve with the one implied
/// by the creep function sampled on the same grid.
pub fn check_laplace_identity(
    p: &MaterialParameters,
    phi: &SampledFunction,
    probes: &[f64],
) -> Result<Vec<IdentityResidual>> {
    let grid = *phi.grid();
    let horizon = grid.horizon();
    let psi = SampledFunction::from_fn(grid, format!("psi_nu={}", p.nu()), |t| creep_psi(p, t))?;
    probes
        .iter()
        .map(|&s| {
            check_positive("s", s)?;
            let product = s * horizon;
            if product < MIN_ST {
                return Err(Error::InsufficientHorizon {
                    s,
                    horizon,
                    product,
                    required: MIN_ST,
                });
            }
            let psi_t = laplace_of_sampled(&psi, s)?.value;
            let phi_t = laplace_of_sampled(phi, s)?.value;
            let predicted = 1.0 / (s * (1.0 + s * psi_t));
            Ok(IdentityResidual {
                s,
                psi_transform: psi_t,
                phi_transform: phi_t,
                predicted_phi_transform: predicted,
                residual: ((phi_t - predicted) / phi_t).abs(),
            })
        })
        .collect()
}
