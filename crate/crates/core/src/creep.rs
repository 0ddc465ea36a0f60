//! Creep-side quantities of the generalized Lomnitz model:
//!
//! ```text
//! ψ_ν(t) = q ln^ν(1 + t/τ₀) / Γ(1 + ν)
//! J(t)   = J₀ [1 + ψ_ν(t)]
//! ε(t)   = (σ₀ / E₀) [1 + ψ_ν(t)]
//! ```
//!
//! `ν = 1` is the classical logarithmic law.

use crate::error::{check_order, check_positive, Error, Result};
use crate::special_functions::gamma;

/// Physical constants of the rheological model.
///
/// `J₀ = 1/E₀` is derived at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParameters {
    q: f64,
    e0: f64,
    tau0: f64,
    nu: f64,
    j0: f64,
    gamma_1_nu: f64,
}

impl MaterialParameters {
    pub fn new(q: f64, e0: f64, tau0: f64, nu: f64) -> Result<Self> {
        check_positive("q", q)?;
        check_positive("E0", e0)?;
        check_positive("tau0", tau0)?;
        check_order("nu", nu)?;
        Ok(Self {
            q,
            e0,
            tau0,
            nu,
            j0: 1.0 / e0,
            gamma_1_nu: gamma(1.0 + nu)?,
        })
    }

    /// Dimensionless setting `q = τ₀ = E₀ = 1`.
    pub fn normalized(nu: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, nu)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn j0(&self) -> f64 {
        self.j0
    }

    /// `Γ(1 + ν)`, cached.
    pub fn gamma_1_nu(&self) -> f64 {
        self.gamma_1_nu
    }

    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        Self::new(self.q, self.e0, self.tau0, nu)
    }
}

fn check_time(what: &'static str, t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: t,
            reason: "time must be finite and non-negative",
        })
    }
}

/// Dimensionless creep function `ψ_ν(t)`.
pub fn creep_psi(p: &MaterialParameters, t: f64) -> Result<f64> {
    check_time("creep_psi", t)?;
    let l = (t / p.tau0).ln_1p();
    Ok(p.q * l.powf(p.nu) / p.gamma_1_nu)
}

/// Creep rate `dψ_ν/dt`. Diverges at `t = 0` when `ν < 1`.
pub fn creep_rate(p: &MaterialParameters, t: f64) -> Result<f64> {
    check_time("creep_rate", t)?;
    if p.nu < 1.0 && t == 0.0 {
        return Err(Error::Domain {
            what: "creep_rate",
            value: t,
            reason: "rate diverges at t = 0 for nu < 1",
        });
    }
    let x = t / p.tau0;
    let l = x.ln_1p();
    let log_factor = if p.nu == 1.0 { 1.0 } else { l.powf(p.nu - 1.0) };
    Ok(p.q * p.nu * log_factor / (p.gamma_1_nu * (1.0 + x) * p.tau0))
}

/// Strain under a stress step `σ₀` applied at `t = 0`.
pub fn creep_strain(p: &MaterialParameters, sigma0: f64, t: f64) -> Result<f64> {
    Ok(sigma0 / p.e0 * (1.0 + creep_psi(p, t)?))
}

/// Creep compliance `J(t) = J₀ [1 + ψ_ν(t)]`.
pub fn compliance(p: &MaterialParameters, t: f64) -> Result<f64> {
    Ok(p.j0 * (1.0 + creep_psi(p, t)?))
}

/// Time regime of an asymptotic representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    SmallTime,
    LargeTime,
}

impl Regime {
    /// Checks a dimensionless time against the regime bounds
    /// (`t ≤ 1` for small time, `t ≥ 10` for large time).
    pub(crate) fn check(self, what: &'static str, t: f64) -> Result<()> {
        let ok = match self {
            Regime::SmallTime => (0.0..=1.0).contains(&t),
            Regime::LargeTime => t >= 10.0 && t.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain {
                what,
                value: t,
                reason: match self {
                    Regime::SmallTime => "small-time regime requires 0 <= t <= 1",
                    Regime::LargeTime => "large-time regime requires t >= 10",
                },
            })
        }
    }
}

/// Leading-order behaviour of `ψ_ν`: `q (t/τ₀)^ν / Γ(1+ν)` as `t → 0⁺`,
/// `q ln^ν(t/τ₀) / Γ(1+ν)` as `t → ∞`. Regime bounds apply to `t/τ₀`.
pub fn creep_asymptotic(p: &MaterialParameters, t: f64, regime: Regime) -> Result<f64> {
    let x = t / p.tau0;
    regime.check("creep_asymptotic", x)?;
    let base = match regime {
        Regime::SmallTime => x,
        Regime::LargeTime => x.ln(),
    };
    Ok(p.q * base.powf(p.nu) / p.gamma_1_nu)
}
