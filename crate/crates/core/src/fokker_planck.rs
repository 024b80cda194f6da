//! Linear Fokker-Planck testbed on the periodic unit interval.
//!
//! With `M(x) = exp(-V(x))` and `g = f / M`, the equation
//! `g_t = (M g_x)_x / M` is discretized on nodes `x_j = j/N` by
//!
//! ```text
//! dg_j/dt = [M_{j+1/2}(g_{j+1} - g_j) - M_{j-1/2}(g_j - g_{j-1})] / (M_j Δx²)
//! ```
//!
//! with periodic indices. The state lives in `g` with weights `M_j Δx`, so
//! the relative entropy of `f` becomes the Gibbs entropy of `g` and the
//! constant state is the equilibrium.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::entropy::{Distribution, Weights};
use crate::error::{Error, Result};
use crate::integrators::LinearSystem;
use crate::linalg::{DenseMatrix, SymmetricEigen};

/// Potential `V(x)`.
pub type Potential = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `V(x) = cos(20πx) / (2π)`
pub fn default_potential(x: f64) -> f64 {
    (20.0 * PI * x).cos() / (2.0 * PI)
}

#[derive(Clone)]
pub struct FpConfig {
    pub n: usize,
    pub potential: Potential,
}

impl FpConfig {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            potential: Arc::new(default_potential),
        }
    }

    pub fn with_potential(
        n: usize,
        potential: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            n,
            potential: Arc::new(potential),
        }
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.n as f64
    }
}

impl Default for FpConfig {
    fn default() -> Self {
        Self::new(64)
    }
}

impl std::fmt::Debug for FpConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FpConfig")
            .field("n", &self.n)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub struct FpSystem {
    pub n: usize,
    pub dx: f64,
    /// `M_j = exp(-V(jΔx))`
    pub m: Vec<f64>,
    /// `M_{j+1/2}`; `M_{j-1/2}` is `m_half[j-1 mod N]`.
    pub m_half: Vec<f64>,
    /// `Δw_j = M_j Δx`
    pub weights: Arc<Weights>,
    pub system: LinearSystem,
    /// Eigendecomposition of `D^{1/2} A D^{-1/2}`, `D = diag(M_j)`.
    pub eig: SymmetricEigen,
}

pub fn fp_build(cfg: &FpConfig) -> Result<FpSystem> {
    let n = cfg.n;
    if n < 4 {
        return Err(Error::Config(format!("grid size {n} must be at least 4")));
    }
    let dx = cfg.dx();
    let v = &cfg.potential;
    let m: Vec<f64> = (0..n).map(|j| (-v(j as f64 * dx)).exp()).collect();
    let m_half: Vec<f64> = (0..n).map(|j| (-v((j as f64 + 0.5) * dx)).exp()).collect();

    let mut a = DenseMatrix::zeros(n);
    let inv_dx2 = 1.0 / (dx * dx);
    for j in 0..n {
        let right = m_half[j];
        let left = m_half[(j + n - 1) % n];
        let scale = inv_dx2 / m[j];
        a[(j, (j + 1) % n)] += right * scale;
        a[(j, (j + n - 1) % n)] += left * scale;
        a[(j, j)] -= (right + left) * scale;
    }

    // D^{1/2} A D^{-1/2} is symmetric: entries M_{j±1/2} / (sqrt(M_j M_k) Δx²).
    let sqrt_m: Vec<f64> = m.iter().map(|x| x.sqrt()).collect();
    let mut s = DenseMatrix::zeros(n);
    for i in 0..n {
        for k in 0..n {
            s[(i, k)] = sqrt_m[i] * a[(i, k)] / sqrt_m[k];
        }
    }
    let eig = SymmetricEigen::new(&s);
    let weights = Arc::new(Weights::new(m.iter().map(|x| x * dx).collect())?);
    Ok(FpSystem {
        n,
        dx,
        m,
        m_half,
        weights,
        system: LinearSystem::new(a)?,
        eig,
    })
}

/// `g(0, x) = 1.2 + Σ_{j=1}^{20} (j/210) sin(2jπx)` on the nodes.
pub fn fp_initial_values(n: usize) -> Vec<f64> {
    let dx = 1.0 / n as f64;
    (0..n)
        .map(|i| {
            let x = i as f64 * dx;
            1.2 + (1..=20)
                .map(|j| j as f64 / 210.0 * (2.0 * j as f64 * PI * x).sin())
                .sum::<f64>()
        })
        .collect()
}

pub fn fp_initial(sys: &FpSystem) -> Result<Distribution> {
    Distribution::new(fp_initial_values(sys.n), Arc::clone(&sys.weights))
}

impl FpSystem {
    /// Exact flow of the semi-discrete system: `D^{-1/2} U exp(Λt) Uᵀ D^{1/2} g0`.
    pub fn exact(&self, g0: &[f64], t: f64) -> Vec<f64> {
        let scaled: Vec<f64> = g0.iter().zip(&self.m).map(|(g, m)| g * m.sqrt()).collect();
        self.eig
            .apply_fn(&scaled, |lambda| (lambda * t).exp())
            .iter()
            .zip(&self.m)
            .map(|(y, m)| y / m.sqrt())
            .collect()
    }

    pub fn rhs(&self, g: &[f64]) -> Vec<f64> {
        self.system.apply(g)
    }

    /// `Σ_j log(g_j) M_j (A g)_j Δx`, nonpositive for positive `g`.
    pub fn entropy_production(&self, g: &[f64]) -> f64 {
        let ag = self.rhs(g);
        g.iter()
            .zip(&ag)
            .zip(self.weights.dv())
            .map(|((gj, aj), w)| gj.ln() * aj * w)
            .sum()
    }
}

pub fn fp_exact(sys: &FpSystem, g0: &[f64], t: f64) -> Result<Vec<f64>> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time {t} is negative")));
    }
    if g0.len() != sys.n {
        return Err(Error::LengthMismatch {
            expected: sys.n,
            got: g0.len(),
        });
    }
    Ok(sys.exact(g0, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{total_mass, weighted_mean};
    use crate::integrators::implicit_midpoint_step;

    #[test]
    fn flat_potential_gives_second_difference() {
        let sys = fp_build(&FpConfig::with_potential(8, |_| 0.0)).unwrap();
        let a = &sys.system.a;
        let h2 = 64.0;
        for j in 0..8 {
            assert!((a[(j, j)] + 2.0 * h2).abs() < 1e-12);
            assert!((a[(j, (j + 1) % 8)] - h2).abs() < 1e-12);
            assert!((a[(j, (j + 7) % 8)] - h2).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_potential_eigenvalues() {
        let n = 16;
        let sys = fp_build(&FpConfig::with_potential(n, |_| 0.0)).unwrap();
        let mut expected: Vec<f64> = (0..n)
            .map(|k| -4.0 * (PI * k as f64 / n as f64).sin().powi(2) * (n * n) as f64)
            .collect();
        expected.sort_by(f64::total_cmp);
        for (got, want) in sys.eig.eigenvalues.iter().zip(&expected) {
            assert!(
                (got - want).abs() < 1e-9 * want.abs().max(1.0),
                "{got} vs {want}"
            );
        }
    }

    #[test]
    fn weighted_columns_and_constants() {
        let sys = fp_build(&FpConfig::default()).unwrap();
        let a = &sys.system.a;
        let scale = a[(0, 0)].abs();
        for k in 0..sys.n {
            let col: f64 = (0..sys.n).map(|j| sys.m[j] * a[(j, k)]).sum();
            assert!(col.abs() < 1e-12 * scale, "column {k}: {col}");
        }
        let ones = sys.rhs(&vec![1.0; sys.n]);
        assert!(ones.iter().all(|v| v.abs() < 1e-12 * scale));
    }

    #[test]
    fn initial_data() {
        let g = fp_initial_values(64);
        assert_eq!(g[0], 1.2);
        assert!(g.iter().all(|&v| (0.2..=2.2).contains(&v)));
        let avg = g.iter().sum::<f64>() / 64.0;
        assert!((avg - 1.2).abs() < 1e-13);
    }

    #[test]
    fn exact_solution_limits() {
        let sys = fp_build(&FpConfig::default()).unwrap();
        let g0 = fp_initial_values(sys.n);
        let at0 = fp_exact(&sys, &g0, 0.0).unwrap();
        for (a, b) in at0.iter().zip(&g0) {
            assert!((a - b).abs() < 1e-12);
        }
        let d0 = fp_initial(&sys).unwrap();
        let mean = weighted_mean(&d0);
        let late = fp_exact(&sys, &g0, 10.0).unwrap();
        assert!(late.iter().all(|v| (v - mean).abs() < 1e-10));
        assert!(fp_exact(&sys, &g0, -1.0).is_err());
    }

    #[test]
    fn spectrum_is_nonpositive_and_symmetric() {
        let sys = fp_build(&FpConfig::default()).unwrap();
        assert!(sys.eig.eigenvalues.iter().all(|&l| l <= 1e-10));
        let n = sys.n;
        let a = &sys.system.a;
        for i in 0..n {
            for k in 0..n {
                let s_ik = sys.m[i].sqrt() * a[(i, k)] / sys.m[k].sqrt();
                let s_ki = sys.m[k].sqrt() * a[(k, i)] / sys.m[i].sqrt();
                assert!((s_ik - s_ki).abs() < 1e-12 * a[(0, 0)].abs());
            }
        }
    }

    #[test]
    fn midpoint_conserves_weighted_mass() {
        let sys = fp_build(&FpConfig::default()).unwrap();
        let g0 = fp_initial(&sys).unwrap();
        let m0 = total_mass(&g0);
        let g1 = implicit_midpoint_step(g0.values(), &sys.system, 1.0 / 512.0).unwrap();
        let d1 = Distribution::new(g1, Arc::clone(&sys.weights)).unwrap();
        assert!(((total_mass(&d1) - m0) / m0).abs() < 1e-11);
    }
}
