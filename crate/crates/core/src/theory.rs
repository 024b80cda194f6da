//! Executable forms of the analytic objects behind the error estimates for
//! the entropy fix, and seeded samplers that check the inequalities.
//!
//! Every check works on normalized states (weighted mean one), where the
//! entropy is `η(f) = Σ f log f Δv` and the equilibrium is the all-ones
//! vector.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};

use crate::entropy::{gibbs_entropy, norm, weighted_mean, Distribution, Norm, Weights};
use crate::error::{Error, Result};
use crate::fix::{cheap_beta, solve_beta};

/// Slack in `satisfied ⇔ worst_margin ≥ -MARGIN_TOLERANCE·scale`.
pub const MARGIN_TOLERANCE: f64 = 1e-12;

/// `h(x) = x log x - x`, with `h(0) = 0`.
pub fn h_func(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln() - x
    }
}

/// `F(x, y, C) = [h(x+y) - h(x+Cy)] / [h(x) - h(x+y)]` on
/// `0 ≤ x ≤ 1/2`, `C > 1`, `0 < y ≤ 1/(2C)`.
pub fn f_quotient(x: f64, y: f64, c: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1/2]")));
    }
    if !(c > 1.0) {
        return Err(Error::Domain(format!("C = {c} must exceed 1")));
    }
    // Allow the upper end to be hit with a rounded 1/(2C).
    if !(y > 0.0 && y <= 0.5 / c * (1.0 + 1e-15)) {
        return Err(Error::Domain(format!("y = {y} outside (0, 1/(2C)]")));
    }
    Ok((h_func(x + y) - h_func(x + c * y)) / (h_func(x) - h_func(x + y)))
}

/// `G(x, C) = F(x, 1/(2C), C)`.
pub fn g_func(x: f64, c: f64) -> Result<f64> {
    f_quotient(x, 0.5 / c, c)
}

/// `G(0, C) = C(1 + log 2) / (log(2C) + 1) - 1`.
pub fn g_at_zero(c: f64) -> f64 {
    c * (1.0 + 2f64.ln()) / ((2.0 * c).ln() + 1.0) - 1.0
}

/// `G(1/2, C)` in closed form.
pub fn g_at_half(c: f64) -> f64 {
    let l = (1.0 / c + 1.0).ln();
    let ln2 = 2f64.ln();
    (c + (c + 1.0) * (l - ln2) - 1.0) / (-(c + 1.0) * l + 1.0 + ln2)
}

/// `C₂ = (2(1 + C₁) / (C₁(1 + log 2)))²`, the constant for which
/// `F(·, ·, C₂) ≥ 1/C₁`.
pub fn c2_of_c1(c1: f64) -> Result<f64> {
    if !(c1 > 0.0 && c1 <= 1.0) {
        return Err(Error::Domain(format!("C1 = {c1} outside (0, 1]")));
    }
    Ok((2.0 * (1.0 + c1) / (c1 * (1.0 + 2f64.ln()))).powi(2))
}

/// Outcome of sampling one inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub name: String,
    /// Samples on which the inequality was evaluated.
    pub samples: usize,
    /// Instances rejected by a precondition.
    pub skipped: usize,
    pub satisfied: bool,
    /// Minimum of `rhs - lhs`.
    pub worst_margin: f64,
    /// Magnitude scale attached to the worst sample.
    pub worst_scale: f64,
    pub worst_sample: String,
}

impl fmt::Display for InequalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} samples, {} skipped, worst margin {:.3e})",
            self.name,
            if self.satisfied { "ok" } else { "VIOLATED" },
            self.samples,
            self.skipped,
            self.worst_margin
        )
    }
}

#[derive(Debug)]
struct ReportBuilder {
    name: String,
    samples: usize,
    skipped: usize,
    violated: bool,
    worst_margin: f64,
    worst_scale: f64,
    worst_sample: String,
}

impl ReportBuilder {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_owned(),
            samples: 0,
            skipped: 0,
            violated: false,
            worst_margin: f64::INFINITY,
            worst_scale: 1.0,
            worst_sample: String::new(),
        }
    }

    fn add(&mut self, lhs: f64, rhs: f64, describe: impl FnOnce() -> String) {
        self.samples += 1;
        let margin = rhs - lhs;
        let scale = 1f64.max(lhs.abs()).max(rhs.abs());
        if margin.is_nan() || margin < -MARGIN_TOLERANCE * scale {
            self.violated = true;
        }
        if margin.is_nan() || margin < self.worst_margin {
            self.worst_margin = if margin.is_nan() {
                f64::NEG_INFINITY
            } else {
                margin
            };
            self.worst_scale = scale;
            self.worst_sample = describe();
        }
    }

    fn skip(&mut self) {
        self.skipped += 1;
    }

    fn finish(self) -> InequalityReport {
        InequalityReport {
            satisfied: !self.violated && self.samples > 0,
            name: self.name,
            samples: self.samples,
            skipped: self.skipped,
            worst_margin: self.worst_margin,
            worst_scale: self.worst_scale,
            worst_sample: self.worst_sample,
        }
    }
}

fn describe(d: &Distribution) -> String {
    format!("f={:?} dv={:?}", d.values(), d.dv())
}

fn minus_one(d: &Distribution) -> Vec<f64> {
    d.values().iter().map(|v| v - 1.0).collect()
}

fn difference(a: &Distribution, b: &Distribution) -> Vec<f64> {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x - y)
        .collect()
}

/// Seeded generator for one named check, so a check run alone draws the
/// same samples as inside the full suite.
pub fn check_rng(seed: u64, check: &str) -> ChaCha8Rng {
    // FNV-1a over the check name.
    let tag = check.bytes().fold(0xcbf2_9ce4_8422_2325_u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    });
    ChaCha8Rng::seed_from_u64(seed ^ tag)
}

fn random_weights(rng: &mut impl Rng, n: usize) -> Result<Arc<Weights>> {
    let dv = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
    Ok(Arc::new(Weights::new(dv)?))
}

/// Positive log-normal profile with a random spread.
fn random_profile(rng: &mut impl Rng, n: usize, max_spread: f64) -> Vec<f64> {
    let spread = rng.random_range(0.0..max_spread);
    (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            (spread * z).exp()
        })
        .collect()
}

fn normalize_values(values: Vec<f64>, weights: &Arc<Weights>) -> Result<Distribution> {
    let d = Distribution::new(values, Arc::clone(weights))?;
    d.normalized()
        .ok_or_else(|| Error::Domain("cannot normalize the zero distribution".into()))
}

/// Random normalized distribution with `2 ≤ N ≤ n_max` and values in `(0, 10]`.
pub fn random_normalized(rng: &mut impl Rng, n_max: usize) -> Result<Distribution> {
    loop {
        let n = rng.random_range(2..=n_max.max(2));
        let weights = random_weights(rng, n)?;
        let d = normalize_values(random_profile(rng, n, 2.0), &weights)?;
        if d.values().iter().all(|&v| v > 0.0 && v <= 10.0) {
            return Ok(d);
        }
    }
}

/// `(1/(2‖f‖∞))‖f-1‖₂² ≤ η(f) ≤ ‖f-1‖₂²` for a normalized `f`.
/// Returns `(lower, η, upper)`.
pub fn entropy_sandwich(f: &Distribution) -> (f64, f64, f64) {
    let w = f.weights();
    let dist2 = norm(&minus_one(f), Norm::L2, w).powi(2);
    let sup = norm(f.values(), Norm::Inf, w);
    (dist2 / (2.0 * sup), gibbs_entropy(f), dist2)
}

fn add_sandwich(report: &mut ReportBuilder, f: &Distribution) {
    let (lower, eta, upper) = entropy_sandwich(f);
    report.add(lower, eta, || format!("lower: {}", describe(f)));
    report.add(eta, upper, || format!("upper: {}", describe(f)));
}

pub fn check_entropy_sandwich(samples: usize, seed: u64) -> Result<InequalityReport> {
    let mut rng = check_rng(seed, "sandwich");
    let mut report = ReportBuilder::new("sandwich");
    for _ in 0..samples {
        let f = random_normalized(&mut rng, 64)?;
        add_sandwich(&mut report, &f);
    }
    Ok(report.finish())
}

/// `|η(f¹) - η(f²)| ≤ max(2, 2|log C₀|) ‖f¹-f²‖₂ (‖f¹-1‖₂ + ‖f²-1‖₂)`.
/// Returns `(lhs, rhs)`.
pub fn entropy_diff_bound(f1: &Distribution, f2: &Distribution, c0: f64) -> (f64, f64) {
    let w = f1.weights();
    let constant = 2f64.max(2.0 * c0.ln().abs());
    let lhs = (gibbs_entropy(f1) - gibbs_entropy(f2)).abs();
    let rhs = constant
        * norm(&difference(f1, f2), Norm::L2, w)
        * (norm(&minus_one(f1), Norm::L2, w) + norm(&minus_one(f2), Norm::L2, w));
    (lhs, rhs)
}

/// Normalized state with every component at least `c0`:
/// `c0 + (1 - c0) u / ū` for a positive profile `u`.
fn random_floor(rng: &mut impl Rng, weights: &Arc<Weights>, c0: f64) -> Result<Distribution> {
    let u = normalize_values(random_profile(rng, weights.len(), 2.0), weights)?;
    let values = u.values().iter().map(|x| c0 + (1.0 - c0) * x).collect();
    Distribution::new(values, Arc::clone(weights))
}

pub const DIFF_BOUND_FLOORS: [f64; 2] = [0.1, 0.5];

/// Pairs are split evenly between the floors in [`DIFF_BOUND_FLOORS`].
pub fn check_entropy_diff_bound(pairs: usize, seed: u64) -> Result<InequalityReport> {
    let mut rng = check_rng(seed, "entropy_diff");
    let mut report = ReportBuilder::new("entropy_diff");
    for i in 0..pairs {
        let c0 = DIFF_BOUND_FLOORS[i % DIFF_BOUND_FLOORS.len()];
        let n = rng.random_range(2..=64);
        let weights = random_weights(&mut rng, n)?;
        let f1 = random_floor(&mut rng, &weights, c0)?;
        // Mix close and far pairs.
        let f2 = if rng.random_bool(0.5) {
            random_floor(&mut rng, &weights, c0)?
        } else {
            let t = 10f64.powf(rng.random_range(-6.0..0.0));
            let g = random_floor(&mut rng, &weights, c0)?;
            let values = f1
                .values()
                .iter()
                .zip(g.values())
                .map(|(a, b)| a + t * (b - a))
                .collect();
            Distribution::new(values, Arc::clone(&weights))?
        };
        let (lhs, rhs) = entropy_diff_bound(&f1, &f2, c0);
        report.add(lhs, rhs, || {
            format!(
                "C0={c0} f1={:?} f2={:?} dv={:?}",
                f1.values(),
                f2.values(),
                f1.dv()
            )
        });
    }
    Ok(report.finish())
}

/// If `η(f¹) ≤ η(f²)` then `‖f¹-1‖₂² ≤ 2‖f¹‖∞ ‖f²-1‖₂²`.
pub fn check_entropy_order(samples: usize, seed: u64) -> Result<InequalityReport> {
    let mut rng = check_rng(seed, "entropy_order");
    let mut report = ReportBuilder::new("entropy_order");
    for _ in 0..samples {
        let n = rng.random_range(2..=64);
        let weights = random_weights(&mut rng, n)?;
        let a = normalize_values(random_profile(&mut rng, n, 2.0), &weights)?;
        let b = normalize_values(random_profile(&mut rng, n, 2.0), &weights)?;
        let (f1, f2) = if gibbs_entropy(&a) <= gibbs_entropy(&b) {
            (a, b)
        } else {
            (b, a)
        };
        let lhs = norm(&minus_one(&f1), Norm::L2, &weights).powi(2);
        let rhs = 2.0
            * norm(f1.values(), Norm::Inf, &weights)
            * norm(&minus_one(&f2), Norm::L2, &weights).powi(2);
        report.add(lhs, rhs, || {
            format!("f1={:?} f2={:?} dv={:?}", f1.values(), f2.values(), f1.dv())
        });
    }
    Ok(report.finish())
}

/// Points per axis of the `F` scan.
pub const F_GRID_POINTS: usize = 201;

/// `C₁ ∈ {0.1, 0.2, …, 1.0}`.
pub fn default_c1_grid() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}

/// `F(x, y, C₂(C₁)) ≥ 1/C₁` for `x ∈ [0, 1/2]`, `y ∈ (0, 1/(2C₂)]`, both on
/// [`F_GRID_POINTS`] points per axis.
pub fn check_f_lower_bound(c1_grid: &[f64]) -> Result<InequalityReport> {
    let mut report = ReportBuilder::new("f_lower_bound");
    let last = (F_GRID_POINTS - 1) as f64;
    for &c1 in c1_grid {
        let c2 = c2_of_c1(c1)?;
        let y_max = 0.5 / c2;
        for i in 0..F_GRID_POINTS {
            let x = 0.5 * i as f64 / last;
            for j in 1..=F_GRID_POINTS {
                let y = if j == F_GRID_POINTS {
                    y_max
                } else {
                    y_max * j as f64 / F_GRID_POINTS as f64
                };
                let f = f_quotient(x, y, c2)?;
                report.add(1.0 / c1, f, || format!("C1={c1} C2={c2} x={x} y={y}"));
            }
        }
    }
    Ok(report.finish())
}

/// Whether the sorted components satisfy
/// `1/|log f₁| ≥ C_f / |log f_{I₁}|`, `I₁ = min{I : Σ_{i≤I} Δv_i ≥ C₁V}`,
/// with `1/|log 0| = 0`. Components are sorted internally together with
/// their weights.
pub fn check_maxlogratio(f: &Distribution, c1: f64, cf: f64) -> Result<bool> {
    if !(c1 > 0.0 && c1 <= 1.0) || !(cf > 0.0 && cf <= 1.0) {
        return Err(Error::Domain(format!(
            "C1 = {c1}, Cf = {cf} must lie in (0, 1]"
        )));
    }
    let mut pairs: Vec<(f64, f64)> = f
        .values()
        .iter()
        .copied()
        .zip(f.dv().iter().copied())
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let volume = f.weights().volume();
    let threshold = c1 * volume * (1.0 - 1e-12);
    let mut acc = 0.0;
    let mut i1 = pairs.len() - 1;
    for (i, (_, dv)) in pairs.iter().enumerate() {
        acc += dv;
        if acc >= threshold {
            i1 = i;
            break;
        }
    }
    let inv_log = |x: f64| if x == 0.0 { 0.0 } else { 1.0 / x.ln().abs() };
    Ok(inv_log(pairs[0].0) >= cf * inv_log(pairs[i1].0))
}

/// Discretized Gaussian `exp(-v_i²)` on `N + 1` points of `[-L, L]`,
/// ordered so the values increase, normalized to mean one.
pub fn gaussian_example(l: f64, n: usize) -> Result<Distribution> {
    let dv = 2.0 * l / (n + 1) as f64;
    let values: Vec<f64> = (1..=n + 1)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let v = sign * (n + 1 - i).div_ceil(2) as f64 * 2.0 * l / n as f64;
            (-v * v).exp() / std::f64::consts::PI.sqrt()
        })
        .collect();
    normalize_values(values, &Arc::new(Weights::uniform(n + 1, dv)?))
}

/// Piecewise-constant vector on `[0, 1]`: `i₁` zeros, then ones, then `i₁` twos.
pub fn piecewise_example(n: usize, i1: usize) -> Result<Distribution> {
    if 2 * i1 > n {
        return Err(Error::Config(format!(
            "block size {i1} too large for N = {n}"
        )));
    }
    let values = (0..n)
        .map(|i| {
            if i < i1 {
                0.0
            } else if i < n - i1 {
                1.0
            } else {
                2.0
            }
        })
        .collect();
    Distribution::new(values, Arc::new(Weights::uniform(n, 1.0 / n as f64)?))
}

/// Random instance with `cheap_beta ≥ solve_beta` checked on it.
pub fn check_cheap_vs_root(instances: usize, seed: u64) -> Result<InequalityReport> {
    let mut rng = check_rng(seed, "cheap_vs_root");
    let mut report = ReportBuilder::new("cheap_vs_root");
    for _ in 0..instances {
        let f = random_normalized(&mut rng, 64)?;
        let eta = gibbs_entropy(&f);
        if !(eta > 0.0) {
            report.skip();
            continue;
        }
        let target = eta * rng.random_range(0.0..1.0);
        let cheap = cheap_beta(eta, target)?;
        let root = solve_beta(&f, target)?;
        report.add(root, cheap, || format!("target={target} {}", describe(&f)));
    }
    Ok(report.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// Bound with a logarithmic factor, no lower bound on `f`.
    Log,
    /// Bound for states bounded below by `C₀ > 0`.
    LowerBound,
    /// `L²` fix bounded by the `L∞` error.
    MaxNorm,
}

impl Theorem {
    pub const ALL: [Theorem; 3] = [Theorem::Log, Theorem::LowerBound, Theorem::MaxNorm];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Log => "thm_log",
            Theorem::LowerBound => "thm_lower_bound",
            Theorem::MaxNorm => "thm_max_norm",
        }
    }
}

/// Numerical state `f^{n+1}` and exact state `f(t_{n+1})`, both normalized.
#[derive(Debug, Clone)]
pub struct TheoremInstance {
    pub f_next: Distribution,
    pub f_exact: Distribution,
}

/// `(lhs, rhs)` of the theorem inequality on one instance, or `None` when a
/// precondition fails.
///
/// `lhs = ‖β(1 - f^{n+1})‖₂` with `β` solving
/// `η(f^{n+1} + β(1 - f^{n+1})) = η(f(t_{n+1}))`.
pub fn theorem_bound(theorem: Theorem, inst: &TheoremInstance) -> Result<Option<(f64, f64)>> {
    let (f, g) = (&inst.f_next, &inst.f_exact);
    if f.len() != g.len() || f.dv() != g.dv() {
        return Ok(None);
    }
    let w = f.weights();
    let normalized = |d: &Distribution| (weighted_mean(d) - 1.0).abs() <= 1e-12;
    if !normalized(f) || !normalized(g) {
        return Ok(None);
    }
    let eta_next = gibbs_entropy(f);
    let eta_exact = gibbs_entropy(g);
    if !(eta_next > eta_exact) {
        return Ok(None);
    }
    let diff = difference(g, f);
    let sup_next = norm(f.values(), Norm::Inf, w);
    let sup_exact = norm(g.values(), Norm::Inf, w);
    let growth = 1.0 + sup_exact.sqrt();
    let rhs = match theorem {
        Theorem::Log => {
            let eps = norm(&diff, Norm::L2, w);
            if eps > 1.0 {
                return Ok(None);
            }
            let m2 = 8.0 * (w.volume().sqrt() * sup_next + 1.0) * sup_next * growth;
            m2 * eps * (1.0 + eps.ln().abs())
        }
        Theorem::LowerBound => {
            let c0 = f.values().iter().copied().fold(f64::INFINITY, f64::min);
            if !(c0 > 0.0) {
                return Ok(None);
            }
            let m = 2.0 * 2f64.max(2.0 * c0.ln().abs()) * sup_next * growth;
            m * norm(&diff, Norm::L2, w)
        }
        Theorem::MaxNorm => {
            let dist = norm(&diff, Norm::Inf, w);
            if dist > 1.0 / 3.0 {
                return Ok(None);
            }
            let sqrt_v = w.volume().sqrt();
            let m1 = 4.0 * sup_next * growth;
            (m1 * sqrt_v + 3.0 * sqrt_v * (m1 + 1.0) * sup_next) * dist
        }
    };
    let beta = solve_beta(f, eta_exact)?;
    let lhs = beta * norm(&minus_one(f), Norm::L2, w);
    Ok(Some((lhs, rhs)))
}

pub fn check_thm_bounds(
    theorem: Theorem,
    instances: &[TheoremInstance],
) -> Result<InequalityReport> {
    let mut report = ReportBuilder::new(theorem.name());
    for inst in instances {
        match theorem_bound(theorem, inst)? {
            Some((lhs, rhs)) => report.add(lhs, rhs, || {
                format!(
                    "f_next={:?} f_exact={:?} dv={:?}",
                    inst.f_next.values(),
                    inst.f_exact.values(),
                    inst.f_next.dv()
                )
            }),
            None => report.skip(),
        }
    }
    Ok(report.finish())
}

/// Draws instances until `count` of them satisfy the theorem's
/// preconditions (or the attempt budget runs out).
///
/// The exact state is a random positive profile, occasionally with
/// near-zero components; the numerical state is a mass-preserving
/// perturbation of it at a log-uniform scale in `[1e-6, 0.5]`, clipped at
/// zero and renormalized.
pub fn sample_theorem_instances(
    theorem: Theorem,
    count: usize,
    seed: u64,
) -> Result<Vec<TheoremInstance>> {
    let mut rng = check_rng(seed, theorem.name());
    let mut out = Vec::with_capacity(count);
    let budget = 50 * count.max(1);
    for _ in 0..budget {
        if out.len() == count {
            break;
        }
        let n = rng.random_range(2..=64);
        let weights = random_weights(&mut rng, n)?;
        let mut profile = random_profile(&mut rng, n, 1.5);
        if rng.random_bool(0.3) {
            for v in profile.iter_mut() {
                if rng.random_bool(0.2) {
                    *v *= 10f64.powf(rng.random_range(-12.0..-2.0));
                }
            }
        }
        let f_exact = normalize_values(profile, &weights)?;
        let scale = 10f64.powf(rng.random_range(-6.0..(0.5f64).log10()));
        let noise: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let noise_mean = noise
            .iter()
            .zip(weights.dv())
            .map(|(z, w)| z * w)
            .sum::<f64>()
            / weights.volume();
        let perturbed = f_exact
            .values()
            .iter()
            .zip(&noise)
            .map(|(v, z)| (v + scale * (z - noise_mean)).max(0.0))
            .collect();
        let f_next = normalize_values(perturbed, &weights)?;
        let inst = TheoremInstance { f_next, f_exact };
        if theorem_bound(theorem, &inst)?.is_some() {
            out.push(inst);
        }
    }
    Ok(out)
}

/// Sample sizes used by [`run_all`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuitePlan {
    pub sandwich: usize,
    pub diff_pairs: usize,
    pub order: usize,
    pub cheap_vs_root: usize,
    pub theorem_instances: usize,
}

impl Default for SuitePlan {
    fn default() -> Self {
        Self {
            sandwich: 10_000,
            diff_pairs: 10_000,
            order: 10_000,
            cheap_vs_root: 1_000,
            theorem_instances: 1_000,
        }
    }
}

/// Names accepted by [`run_check`].
pub const CHECK_NAMES: [&str; 9] = [
    "sandwich",
    "entropy_diff",
    "entropy_order",
    "f_lower_bound",
    "maxlogratio",
    "cheap_vs_root",
    "thm_log",
    "thm_lower_bound",
    "thm_max_norm",
];

/// Verdicts on the two example fixtures, reported as a 0/1 inequality per case.
pub fn check_maxlogratio_examples() -> Result<InequalityReport> {
    let mut report = ReportBuilder::new("maxlogratio");
    let mut expect = |label: &str, got: bool, want: bool| {
        let ok = if got == want { 0.0 } else { 1.0 };
        report.add(ok, 0.0, || format!("{label}: got {got}, expected {want}"));
    };
    let gaussian = gaussian_example(6.0, 20)?;
    expect(
        "gaussian L=6 N=20 C1=1/2 Cf=1/8",
        check_maxlogratio(&gaussian, 0.5, 0.125)?,
        true,
    );
    for cf in [0.125, 0.5, 1.0] {
        let blocks = piecewise_example(60, 20)?;
        expect(
            "piecewise I1=N/3 C1=1/3",
            check_maxlogratio(&blocks, 1.0 / 3.0, cf)?,
            true,
        );
    }
    for c1 in [0.1, 1.0 / 3.0, 0.5] {
        let single = piecewise_example(300, 1)?;
        expect(
            "piecewise I1=1 N=300",
            check_maxlogratio(&single, c1, 0.125)?,
            false,
        );
    }
    Ok(report.finish())
}

pub fn run_check(name: &str, plan: &SuitePlan, seed: u64) -> Result<InequalityReport> {
    let theorem = |t: Theorem| -> Result<InequalityReport> {
        let instances = sample_theorem_instances(t, plan.theorem_instances, seed)?;
        check_thm_bounds(t, &instances)
    };
    match name {
        "sandwich" => check_entropy_sandwich(plan.sandwich, seed),
        "entropy_diff" => check_entropy_diff_bound(plan.diff_pairs, seed),
        "entropy_order" => check_entropy_order(plan.order, seed),
        "f_lower_bound" => check_f_lower_bound(&default_c1_grid()),
        "maxlogratio" => check_maxlogratio_examples(),
        "cheap_vs_root" => check_cheap_vs_root(plan.cheap_vs_root, seed),
        "thm_log" => theorem(Theorem::Log),
        "thm_lower_bound" => theorem(Theorem::LowerBound),
        "thm_max_norm" => theorem(Theorem::MaxNorm),
        other => Err(Error::Config(format!(
            "unknown check '{other}'; expected one of {}",
            CHECK_NAMES.join(", ")
        ))),
    }
}

pub fn run_all(plan: &SuitePlan, seed: u64) -> Result<Vec<InequalityReport>> {
    CHECK_NAMES
        .iter()
        .map(|name| run_check(name, plan, seed))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point(values: [f64; 2]) -> Distribution {
        Distribution::new(values.to_vec(), Arc::new(Weights::uniform(2, 0.5).unwrap())).unwrap()
    }

    #[test]
    fn h_values() {
        assert_eq!(h_func(1.0), -1.0);
        assert_eq!(h_func(0.0), 0.0);
        assert!((h_func(2.0) - (-0.613_705_638_880_109_4)).abs() < 1e-15);
    }

    #[test]
    fn f_and_g_examples() {
        assert!((f_quotient(0.5, 0.25, 2.0).unwrap() - 0.287_264).abs() < 1e-6);
        // 2(1 + log 2)/(log 4 + 1) - 1; commonly quoted rounded as 0.419057.
        assert!((f_quotient(0.0, 0.25, 2.0).unwrap() - 0.419_059_784_196_405).abs() < 1e-12);
        assert!((g_func(0.0, 2.0).unwrap() - 0.419_057).abs() < 5e-6);
        assert!((g_func(0.5, 2.0).unwrap() - 0.287_264).abs() < 1e-6);
        assert!(f_quotient(0.2, 0.0, 2.0).is_err());
        assert!(f_quotient(0.6, 0.1, 2.0).is_err());
        assert!(f_quotient(0.2, 0.1, 1.0).is_err());
        assert!(f_quotient(0.2, 0.3, 2.0).is_err());
    }

    #[test]
    fn closed_forms_match_quotients() {
        for c in [1.5, 2.0, 5.581, 40.0, 170.0] {
            let g0 = g_func(0.0, c).unwrap();
            let gh = g_func(0.5, c).unwrap();
            assert!((g0 - g_at_zero(c)).abs() <= 1e-12 * g0.abs(), "C={c}");
            assert!((gh - g_at_half(c)).abs() <= 1e-12 * gh.abs(), "C={c}");
        }
    }

    #[test]
    fn g_above_endpoint_minimum() {
        for c in [1.5, 2.0, 10.0] {
            let floor = g_at_zero(c).min(g_at_half(c));
            for i in 0..=200 {
                let x = 0.5 * i as f64 / 200.0;
                assert!(g_func(x, c).unwrap() >= floor - 1e-12);
            }
        }
    }

    #[test]
    fn f_nonnegative_on_domain() {
        for c in [1.1, 2.0, 8.0] {
            for i in 0..=20 {
                for j in 1..=20 {
                    let f =
                        f_quotient(0.5 * i as f64 / 20.0, 0.5 / c * j as f64 / 20.0, c).unwrap();
                    assert!(f >= 0.0);
                }
            }
        }
    }

    #[test]
    fn c2_values() {
        assert!((c2_of_c1(1.0).unwrap() - 5.581_238_214_192_975).abs() < 1e-12);
        assert!((c2_of_c1(1.0).unwrap() - 5.581_26).abs() < 3e-5);
        let floor = 16.0 / (1.0 + 2f64.ln()).powi(2);
        let grid: Vec<f64> = (1..=100).map(|i| i as f64 / 100.0).collect();
        let vals: Vec<f64> = grid.iter().map(|&c| c2_of_c1(c).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] > w[1]));
        assert!(vals.iter().all(|&v| v >= floor * (1.0 - 1e-15)));
        assert!(c2_of_c1(0.0).is_err());
        assert!(c2_of_c1(1.5).is_err());
    }

    #[test]
    fn sandwich_fixtures() {
        let (lo, eta, hi) = entropy_sandwich(&two_point([1.0, 1.0]));
        assert_eq!((lo, eta, hi), (0.0, 0.0, 0.0));
        let (lo, eta, hi) = entropy_sandwich(&two_point([2.0, 0.0]));
        assert!((lo - 0.25).abs() < 1e-15);
        assert!((eta - 2f64.ln()).abs() < 1e-15);
        assert!((hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diff_bound_fixtures() {
        let a = two_point([1.5, 0.5]);
        let (lhs, rhs) = entropy_diff_bound(&a, &a, 0.5);
        assert_eq!((lhs, rhs), (0.0, 0.0));
        let b = two_point([1.2, 0.8]);
        let (lhs, rhs) = entropy_diff_bound(&a, &b, 0.5);
        assert!(rhs - lhs > 0.0, "{lhs} {rhs}");
    }

    #[test]
    fn theorem_fixtures() {
        let same = TheoremInstance {
            f_next: two_point([1.5, 0.5]),
            f_exact: two_point([1.5, 0.5]),
        };
        for t in Theorem::ALL {
            assert!(theorem_bound(t, &same).unwrap().is_none());
        }
        let inst = TheoremInstance {
            f_next: two_point([2.0, 0.0]),
            f_exact: two_point([1.5, 0.5]),
        };
        let (lhs, rhs) = theorem_bound(Theorem::Log, &inst).unwrap().unwrap();
        // β = 1/2 and ‖1 - f‖₂ = 1 under the weighted norm.
        assert!((lhs - 0.5).abs() < 1e-12);
        assert!(rhs > lhs);
        // Zero component: no lower bound.
        assert!(theorem_bound(Theorem::LowerBound, &inst).unwrap().is_none());
        // ‖f_exact - f_next‖∞ = 1/2 > 1/3.
        assert!(theorem_bound(Theorem::MaxNorm, &inst).unwrap().is_none());
    }

    #[test]
    fn maxlogratio_fixtures() {
        let g = gaussian_example(6.0, 20).unwrap();
        assert!(g.values().windows(2).all(|w| w[0] <= w[1]));
        assert!((weighted_mean(&g) - 1.0).abs() < 1e-14);
        assert!(check_maxlogratio(&g, 0.5, 0.125).unwrap());
        assert!(check_maxlogratio(&piecewise_example(30, 10).unwrap(), 1.0 / 3.0, 0.3).unwrap());
        assert!(!check_maxlogratio(&piecewise_example(300, 1).unwrap(), 1.0 / 3.0, 0.125).unwrap());
        // A constant state has f₁ = f_{I₁} = 1.
        assert!(check_maxlogratio(&two_point([1.0, 1.0]), 0.5, 0.5).unwrap());
        assert!(check_maxlogratio(&g, 0.0, 0.5).is_err());
    }

    #[test]
    fn maxlogratio_sorts_with_weights() {
        let w = Arc::new(Weights::new(vec![0.5, 0.2, 0.3]).unwrap());
        let shuffled = Distribution::new(vec![1.5, 0.1, 0.9], Arc::clone(&w)).unwrap();
        // Sorted: 0.1 (0.2), 0.9 (0.3), 1.5 (0.5); C1 = 0.5 reaches I1 = 3.
        let direct = 1.0 / 0.1f64.ln().abs() >= 0.5 / 1.5f64.ln().abs();
        assert_eq!(check_maxlogratio(&shuffled, 0.5, 0.5).unwrap(), direct);
    }

    #[test]
    fn small_suite_is_satisfied() {
        let plan = SuitePlan {
            sandwich: 300,
            diff_pairs: 300,
            order: 300,
            cheap_vs_root: 100,
            theorem_instances: 100,
        };
        for report in run_all(&plan, 7).unwrap() {
            assert!(report.satisfied, "{report}\n{}", report.worst_sample);
        }
    }

    #[test]
    fn theorem_sampler_fills_quota() {
        for t in Theorem::ALL {
            let inst = sample_theorem_instances(t, 50, 3).unwrap();
            assert_eq!(inst.len(), 50, "{}", t.name());
        }
    }

    #[test]
    fn unknown_check_is_rejected() {
        assert!(run_check("nope", &SuitePlan::default(), 0).is_err());
    }

    #[test]
    fn checks_are_reproducible() {
        let a = check_entropy_sandwich(50, 11).unwrap();
        let b = check_entropy_sandwich(50, 11).unwrap();
        assert_eq!(a, b);
    }
}
