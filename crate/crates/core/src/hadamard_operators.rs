//! Integral and integro-differential operators with logarithmic kernel.
//!
//! For kernel parameters `0 ≤ a ≤ 1`, `b > 0` the lower limit is
//! `t_low = (1 - a)/b` and
//!
//! ```text
//! Î_α f(t) = 1/Γ(α) ∫_{t_low}^t ln^{α-1}((a+bt)/(a+bτ)) f(τ) b/(a+bτ) dτ
//! Ô_ν f(t) = Î_{1-ν}[(a/b + τ) f'(τ)](t),      0 < ν < 1
//! Ô_1 f(t) = (a/b + t) f'(t)
//! ```
//!
//! With `u = ln(a + bτ)` the kernel becomes the Abel kernel `(U - u)^{α-1}`
//! on `[0, U]`, `U = ln(a + bt)`, and `(a/b + τ) d/dτ = d/du`.
//!
//! The `u`-interval is cut in half at a grid node. The upper half, which
//! carries the kernel singularity, is handled by product integration with
//! exact weights for piecewise-linear interpolation on the uniform grid.
//! The lower half has a smooth kernel but the integrand may be singular at
//! `u = 0` (e.g. `d/du u^β` for `β < 1`), so it is integrated by parts when
//! a derivative is involved and handed to adaptive Gauss-Kronrod.

use crate::error::{check_order, Error, Result};
use crate::quadrature;
use crate::special_functions::{gamma, log_ml, reciprocal_gamma};

/// Parameters `(a, b, ν)` of the operator `Ô_ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorConfig {
    a: f64,
    b: f64,
    nu: f64,
}

impl OperatorConfig {
    pub fn new(a: f64, b: f64, nu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::InvalidParameter {
                name: "a",
                value: a,
                reason: "kernel shift must lie in [0, 1]",
            });
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter {
                name: "b",
                value: b,
                reason: "kernel rate must be finite and positive",
            });
        }
        check_order("nu", nu)?;
        Ok(Self { a, b, nu })
    }

    /// The model operator, `a = b = 1`.
    pub fn model(nu: f64) -> Result<Self> {
        Self::new(1.0, 1.0, nu)
    }

    /// The Caputo-like regularized Hadamard derivative, `a = 0, b = 1`.
    pub fn regularized_hadamard(nu: f64) -> Result<Self> {
        Self::new(0.0, 1.0, nu)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `t_low = (1 - a)/b`.
    pub fn lower_limit(&self) -> f64 {
        (1.0 - self.a) / self.b
    }

    /// `u = ln(a + bτ)`, zero at the lower limit.
    pub fn log_time(&self, tau: f64) -> f64 {
        (self.b * (tau - self.lower_limit())).ln_1p()
    }

    /// Inverse of [`Self::log_time`].
    pub fn time_of_log(&self, u: f64) -> f64 {
        self.lower_limit() + u.exp_m1() / self.b
    }
}

type RealFn<'a> = Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>;

/// A function of time with an optional analytic derivative.
pub struct DifferentiableInput<'a> {
    f: RealFn<'a>,
    df: Option<RealFn<'a>>,
    label: String,
}

impl<'a> DifferentiableInput<'a> {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        Self {
            f: Box::new(f),
            df: None,
            label: label.into(),
        }
    }

    pub fn with_derivative(mut self, df: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        self.df = Some(Box::new(df));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_derivative(&self) -> bool {
        self.df.is_some()
    }

    fn value(&self, t: f64) -> Result<f64> {
        let v = (self.f)(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteInput {
                label: self.label.clone(),
                t,
            })
        }
    }
}

/// Non-fatal diagnostics attached to an operator evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// `|I_N - I_{N/2}|` exceeded the accuracy tolerance.
    Accuracy { estimate: f64, tolerance: f64 },
    /// Central-difference and Richardson-refined derivative disagree.
    Derivative { t: f64, disagreement: f64 },
}

/// Operator value with a panel-halving refinement estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub refinement_estimate: f64,
    pub warnings: Vec<Warning>,
}

/// Relative tolerance above which the refinement estimate is flagged.
pub const ACCURACY_TOLERANCE: f64 = 1e-6;

/// Relative disagreement above which a numerical derivative is flagged.
pub const DERIVATIVE_TOLERANCE: f64 = 1e-5;

fn finite_difference(input: &DifferentiableInput, t: f64, t_low: f64) -> Result<(f64, f64)> {
    let h = 1e-6_f64.max(1e-6 * (1.0 + t.abs()));
    let f = |x: f64| input.value(x);
    let estimate = |h: f64| -> Result<f64> {
        if t - 2.0 * h >= t_low {
            Ok((f(t + h)? - f(t - h)?) / (2.0 * h))
        } else {
            Ok((-3.0 * f(t)? + 4.0 * f(t + h)? - f(t + 2.0 * h)?) / (2.0 * h))
        }
    };
    let coarse = estimate(h)?;
    let refined = (4.0 * estimate(0.5 * h)? - coarse) / 3.0;
    let disagreement = (refined - coarse).abs() / refined.abs().max(f64::MIN_POSITIVE);
    Ok((refined, disagreement))
}

fn derivative(
    input: &DifferentiableInput,
    t: f64,
    t_low: f64,
    warnings: &mut Vec<Warning>,
) -> Result<f64> {
    if let Some(df) = &input.df {
        let v = df(t);
        return if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteInput {
                label: format!("{}'", input.label),
                t,
            })
        };
    }
    let (d, disagreement) = finite_difference(input, t, t_low)?;
    // exact zeros (constants) are not a disagreement
    if d != 0.0 && disagreement > DERIVATIVE_TOLERANCE {
        warnings.push(Warning::Derivative { t, disagreement });
    }
    Ok(d)
}

/// Product-integration weights for `∫_0^{Mδ} v^{α-1} g(v) dv` with `g`
/// piecewise linear on `v_j = jδ`; entry `j` multiplies `g(v_j)`.
pub fn abel_weights(alpha: f64, delta: f64, panels: usize) -> Vec<f64> {
    let mut w = vec![0.0; panels + 1];
    let pa = |j: f64| j.powf(alpha);
    let pa1 = |j: f64| j.powf(alpha + 1.0);
    for j in 0..panels {
        let (lo, hi) = (j as f64, j as f64 + 1.0);
        // ∫ s^{α-1} ds and ∫ s^{α-1}(s - j) ds over [j, j+1], unit spacing
        let m0 = (pa(hi) - pa(lo)) / alpha;
        let m1 = (pa1(hi) - pa1(lo)) / (alpha + 1.0) - lo * m0;
        w[j] += m0 - m1;
        w[j + 1] += m1;
    }
    let scale = delta.powf(alpha);
    w.iter_mut().for_each(|x| *x *= scale);
    w
}

fn check_evaluation_point(cfg: &OperatorConfig, t: f64, panels: usize) -> Result<()> {
    let t_low = cfg.lower_limit();
    if !(t.is_finite() && t > t_low) {
        return Err(Error::Domain {
            what: "logarithmic-kernel operator",
            value: t,
            reason: "evaluation time must exceed the lower limit (1 - a)/b",
        });
    }
    if panels < 2 {
        return Err(Error::InvalidParameter {
            name: "panels",
            value: panels as f64,
            reason: "at least two panels are required",
        });
    }
    Ok(())
}

/// Which integrand the split scheme is applied to.
enum Integrand {
    /// `F(u) = f(τ(u))` itself (fractional integral).
    Value,
    /// `dF/du = (a/b + τ) f'(τ)` (Caputo-type derivative).
    LogDerivative,
}

fn split_scheme(
    cfg: &OperatorConfig,
    alpha: f64,
    input: &DifferentiableInput,
    upper: f64,
    panels: usize,
    integrand: &Integrand,
    warnings: &mut Vec<Warning>,
) -> Result<f64> {
    let t_low = cfg.lower_limit();
    let delta = upper / panels as f64;
    let split = panels / 2;
    let u_split = split as f64 * delta;
    let big_f = |u: f64| input.value(cfg.time_of_log(u));

    // Lower part: smooth kernel, possibly singular integrand at u = 0.
    let head = match integrand {
        Integrand::Value => {
            let mut failure = None;
            let r = quadrature::adaptive(
                |u| match big_f(u) {
                    Ok(v) => (upper - u).powf(alpha - 1.0) * v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                },
                0.0,
                u_split,
                1e-15,
                1e-13,
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            r.value
        }
        Integrand::LogDerivative => {
            // ∫_0^{u_s} w F' du = w(u_s)(F(u_s) - F(0)) - ∫_0^{u_s} w'(u)(F(u) - F(0)) du
            let f0 = big_f(0.0)?;
            let fs = big_f(u_split)?;
            let nu = 1.0 - alpha;
            let mut failure = None;
            let r = quadrature::adaptive(
                |u| match big_f(u) {
                    Ok(v) => nu * (upper - u).powf(-nu - 1.0) * (v - f0),
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                },
                0.0,
                u_split,
                1e-15,
                1e-13,
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            (upper - u_split).powf(-nu) * (fs - f0) - r.value
        }
    };

    // Upper part: product integration, v = U - u runs over panels - split panels.
    let tail_panels = panels - split;
    let weights = abel_weights(alpha, delta, tail_panels);
    let mut tail = 0.0;
    for (j, w) in weights.iter().enumerate() {
        let u = upper - j as f64 * delta;
        let tau = cfg.time_of_log(u);
        let g = match integrand {
            Integrand::Value => input.value(tau)?,
            Integrand::LogDerivative => u.exp() / cfg.b * derivative(input, tau, t_low, warnings)?,
        };
        tail += w * g;
    }
    Ok((head + tail) / gamma(alpha)?)
}

fn with_refinement(
    panels: usize,
    mut eval: impl FnMut(usize, &mut Vec<Warning>) -> Result<f64>,
) -> Result<Evaluation> {
    let mut warnings = Vec::new();
    let value = eval(panels, &mut warnings)?;
    let other = if panels >= 4 { panels / 2 } else { panels * 2 };
    let mut scratch = Vec::new();
    let refinement_estimate = (value - eval(other, &mut scratch)?).abs();
    let tolerance = ACCURACY_TOLERANCE * value.abs().max(1.0);
    if refinement_estimate > tolerance {
        warnings.push(Warning::Accuracy {
            estimate: refinement_estimate,
            tolerance,
        });
    }
    Ok(Evaluation {
        value,
        refinement_estimate,
        warnings,
    })
}

/// `Î_α f(t)` for any order `α > 0`, with the kernel parameters `(a, b)`
/// of `cfg` (its `ν` is not used).
pub fn hadamard_integral(
    cfg: &OperatorConfig,
    alpha: f64,
    input: &DifferentiableInput,
    t: f64,
    panels: usize,
) -> Result<Evaluation> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "integral order must be positive",
        });
    }
    check_evaluation_point(cfg, t, panels)?;
    let upper = cfg.log_time(t);
    with_refinement(panels, |n, w| {
        split_scheme(cfg, alpha, input, upper, n, &Integrand::Value, w)
    })
}

/// `Ô_ν f(t)`; for `ν = 1` the pure differential operator `(a/b + t) f'(t)`.
pub fn hadamard_derivative(
    cfg: &OperatorConfig,
    input: &DifferentiableInput,
    t: f64,
    panels: usize,
) -> Result<Evaluation> {
    check_evaluation_point(cfg, t, panels)?;
    if cfg.nu == 1.0 {
        let mut warnings = Vec::new();
        let d = derivative(input, t, cfg.lower_limit(), &mut warnings)?;
        return Ok(Evaluation {
            value: (cfg.a / cfg.b + t) * d,
            refinement_estimate: 0.0,
            warnings,
        });
    }
    let upper = cfg.log_time(t);
    let alpha = 1.0 - cfg.nu;
    with_refinement(panels, |n, w| {
        split_scheme(cfg, alpha, input, upper, n, &Integrand::LogDerivative, w)
    })
}

/// `f(t) = ln^β(a + bt)` with its analytic derivative.
pub fn log_power_input<'a>(cfg: &OperatorConfig, beta: f64) -> DifferentiableInput<'a> {
    let c1 = *cfg;
    let c2 = *cfg;
    DifferentiableInput::new(format!("ln^{beta}(a+bt)"), move |t| {
        c1.log_time(t).powf(beta)
    })
    .with_derivative(move |t| {
        let u = c2.log_time(t);
        beta * u.powf(beta - 1.0) * c2.b / (c2.a + c2.b * t)
    })
}

/// Worst relative discrepancy of
/// `Ô_ν ln^β(a+bt) = Γ(β+1)/Γ(β+1-ν) ln^{β-ν}(a+bt)` over `t_samples`.
pub fn verify_power_law_property(
    cfg: &OperatorConfig,
    beta: f64,
    t_samples: &[f64],
    panels: usize,
) -> Result<f64> {
    if !(beta.is_finite() && beta > -1.0) || beta == 0.0 {
        return Err(Error::Domain {
            what: "verify_power_law_property",
            value: beta,
            reason: "beta must satisfy beta > -1, beta != 0",
        });
    }
    let input = log_power_input(cfg, beta);
    let coefficient = gamma(beta + 1.0)? * reciprocal_gamma(beta + 1.0 - cfg.nu);
    let mut worst: f64 = 0.0;
    for &t in t_samples {
        let lhs = hadamard_derivative(cfg, &input, t, panels)?.value;
        let rhs = coefficient * cfg.log_time(t).powf(beta - cfg.nu);
        let err = if rhs != 0.0 {
            ((lhs - rhs) / rhs).abs()
        } else {
            lhs.abs()
        };
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Worst absolute deviation of `Ô_ν E_ν(-ln^ν(1+t)) = -E_ν(-ln^ν(1+t))`
/// over `t_samples`. Requires `a = b = 1`.
pub fn verify_eigenfunction(cfg: &OperatorConfig, t_samples: &[f64], panels: usize) -> Result<f64> {
    if cfg.a != 1.0 || cfg.b != 1.0 {
        return Err(Error::InvalidParameter {
            name: "a, b",
            value: cfg.a,
            reason: "eigenfunction identity holds for a = b = 1",
        });
    }
    let nu = cfg.nu;
    let input = DifferentiableInput::new("E_nu(-ln^nu(1+t))", move |t| {
        log_ml(nu, t).unwrap_or(f64::NAN)
    });
    let mut worst: f64 = 0.0;
    for &t in t_samples {
        let lhs = hadamard_derivative(cfg, &input, t, panels)?.value;
        let rhs = -log_ml(nu, t)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}
