//! Post-step entropy fix.
//!
//! If a step raises the (relative) entropy, the new state `f` is replaced
//! by `f + β (C𝓜 - f)`, where `C𝓜` is the equilibrium carrying the same
//! mass. The blend entropy is convex in `β` with its minimum at `β = 1`,
//! so it is nonincreasing on `[0, 1]` and `β` can be bracketed safely.

use std::sync::Arc;

use crate::entropy::{
    gibbs_entropy, gibbs_entropy_of, relative_entropy, to_equilibrium_coordinates, total_mass,
    weighted_mean, Distribution, Equilibrium,
};
use crate::error::{Error, Result};

/// Relative mass drift tolerated from the wrapped scheme (H1).
pub const MASS_TOLERANCE: f64 = 1e-10;

const MAX_BISECTIONS: usize = 60;
const BETA_INTERVAL_TOL: f64 = 1e-14;
const RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FixMode {
    /// Solve `η(f̃ + β(1 - f̃)) = η_target` by bisection.
    #[default]
    RootSolve,
    /// Take the convexity bound `β̂ = (η_next - η_target) / η_next`.
    CheapBound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixReport {
    pub fired: bool,
    pub beta: f64,
    /// Relative entropy of the raw step output.
    pub entropy_before_fix: f64,
    /// Relative entropy of the returned state.
    pub entropy_after_fix: f64,
    /// Relative entropy of the previous state.
    pub target_entropy: f64,
    pub mode: FixMode,
}

/// `clamp((η_next - η_target) / η_next, 0, 1)`.
pub fn cheap_beta(eta_next: f64, eta_target: f64) -> Result<f64> {
    if eta_next <= eta_target {
        return Ok(0.0);
    }
    if eta_next <= 0.0 {
        return Err(Error::Domain(format!(
            "normalized entropy {eta_next} is not positive but exceeds target {eta_target}"
        )));
    }
    Ok(((eta_next - eta_target) / eta_next).clamp(0.0, 1.0))
}

/// Blend parameter `β ∈ [0, 1]` with `η(f̃ + β(1 - f̃)) = η_target`, where
/// `f̃` is `f_next` normalized to unit weighted mean.
///
/// The returned `β` satisfies `η(blend) ≤ η_target + 1e-12 (1 + |η_target|)`.
pub fn solve_beta(f_next: &Distribution, eta_target: f64) -> Result<f64> {
    if eta_target < 0.0 {
        return Err(Error::NoRoot { target: eta_target });
    }
    let normalized = f_next
        .normalized()
        .ok_or_else(|| Error::Domain("cannot normalize the zero distribution".into()))?;
    let f = normalized.values();
    let dv = normalized.dv();
    let tol = RESIDUAL_TOL * (1.0 + eta_target.abs());
    let mut blend = vec![0.0; f.len()];
    let mut residual = |beta: f64| {
        for (b, &x) in blend.iter_mut().zip(f) {
            *b = x + beta * (1.0 - x);
        }
        gibbs_entropy_of(&blend, dv) - eta_target
    };

    if residual(0.0) <= 0.0 {
        return Ok(0.0);
    }
    // η vanishes only at the equilibrium, where η is quadratic in 1 - β and
    // the residual test would stop short of it.
    if eta_target == 0.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo < BETA_INTERVAL_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let r = residual(mid);
        if r.abs() < tol {
            return Ok(mid);
        }
        if r > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// `f + β (e - f)`, with `e` carrying the same mass as `f`.
pub fn apply_fix(f_next: &Distribution, beta: f64, e: &Equilibrium) -> Result<Distribution> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Domain(format!("beta {beta} outside [0, 1]")));
    }
    if e.len() != f_next.len() {
        return Err(Error::LengthMismatch {
            expected: f_next.len(),
            got: e.len(),
        });
    }
    let state = total_mass(f_next);
    let equilibrium: f64 = e.values().iter().zip(f_next.dv()).map(|(m, w)| m * w).sum();
    if (equilibrium - state).abs() > 1e-12 * state.abs().max(equilibrium.abs()) {
        return Err(Error::MassMismatch { state, equilibrium });
    }
    let values = f_next
        .values()
        .iter()
        .zip(e.values())
        .map(|(&f, &m)| f + beta * (m - f))
        .collect();
    Distribution::new(values, Arc::clone(f_next.weights()))
}

/// Advances one step with `raw_step` and applies the entropy fix if the
/// relative entropy with respect to `e` increased.
///
/// The raw output must conserve mass to `1e-10` relative and stay
/// nonnegative up to the clamp tolerance; otherwise an H1/H2 error is
/// returned.
pub fn entropic_step<F>(
    f_prev: &Distribution,
    raw_step: F,
    e: &Equilibrium,
    mode: FixMode,
) -> Result<(Distribution, FixReport)>
where
    F: FnOnce(&Distribution) -> Result<Vec<f64>>,
{
    let raw = raw_step(f_prev)?;
    let f_next = Distribution::new(raw, Arc::clone(f_prev.weights()))?;

    let mass_prev = total_mass(f_prev);
    let mass_next = total_mass(&f_next);
    let drift = (mass_next - mass_prev).abs() / mass_prev.abs().max(f64::MIN_POSITIVE);
    if drift > MASS_TOLERANCE {
        return Err(Error::MassDrift { drift, step: None });
    }

    let eta_prev = relative_entropy(f_prev, e)?;
    let eta_next = relative_entropy(&f_next, e)?;
    if eta_next <= eta_prev {
        let report = FixReport {
            fired: false,
            beta: 0.0,
            entropy_before_fix: eta_next,
            entropy_after_fix: eta_next,
            target_entropy: eta_prev,
            mode,
        };
        return Ok((f_next, report));
    }

    // In g = f/𝓜 coordinates with weights 𝓜Δv, the relative entropy of the
    // blend is C η(g̃ + β(1 - g̃)) + C log C · W. The target is mapped
    // through the same affine relation so the comparison is exact in η_rel.
    let g = to_equilibrium_coordinates(&f_next, e)?;
    let c = weighted_mean(&g);
    let w = g.weights().volume();
    let target = (eta_prev - c * c.ln() * w) / c;
    let beta = if target < 0.0 {
        1.0
    } else {
        match mode {
            FixMode::RootSolve => solve_beta(&g, target)?,
            FixMode::CheapBound => {
                let g_normalized = g.normalized().expect("positive mass");
                cheap_beta(gibbs_entropy(&g_normalized), target)?
            }
        }
    };

    let scaled = Equilibrium::new(e.values().iter().map(|m| c * m).collect())?;
    let fixed = apply_fix(&f_next, beta, &scaled)?;
    let eta_fixed = relative_entropy(&fixed, e)?;
    let report = FixReport {
        fired: true,
        beta,
        entropy_before_fix: eta_next,
        entropy_after_fix: eta_fixed,
        target_entropy: eta_prev,
        mode,
    };
    Ok((fixed, report))
}
