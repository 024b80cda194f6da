//! Quadrature weights, nonnegative distributions and the entropy functionals
//! acting on them.
//!
//! Sums are accumulated sequentially in index order so results are
//! reproducible bit for bit. The convention `0 log 0 = 0` is applied by
//! skipping zero entries.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Values in `[-CLAMP_TOLERANCE, 0)` are treated as roundoff and clamped to zero.
pub const CLAMP_TOLERANCE: f64 = 1e-13;

/// Positive quadrature weights `Δv_i` and their cached total `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    dv: Vec<f64>,
    volume: f64,
}

impl Weights {
    pub fn new(dv: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = dv
            .iter()
            .enumerate()
            .find(|(_, &w)| !(w > 0.0 && w.is_finite()))
        {
            return Err(Error::NonPositiveWeight { index, value });
        }
        let volume = dv.iter().sum();
        Ok(Self { dv, volume })
    }

    /// `n` equal weights of size `dv`.
    pub fn uniform(n: usize, dv: f64) -> Result<Self> {
        Self::new(vec![dv; n])
    }

    pub fn dv(&self) -> &[f64] {
        &self.dv
    }

    /// Total volume `V = Σ Δv_i`.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn len(&self) -> usize {
        self.dv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dv.is_empty()
    }
}

/// Nonnegative state values paired with their quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    values: Vec<f64>,
    weights: Arc<Weights>,
}

impl Distribution {
    /// Validates lengths and nonnegativity. Entries in `[-1e-13, 0)` are
    /// clamped to zero; anything more negative is rejected.
    pub fn new(mut values: Vec<f64>, weights: Arc<Weights>) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: weights.len(),
                got: values.len(),
            });
        }
        for (index, v) in values.iter_mut().enumerate() {
            if v.is_nan() || *v < -CLAMP_TOLERANCE {
                return Err(Error::Negativity {
                    index,
                    value: *v,
                    step: None,
                });
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(Self { values, weights })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &Arc<Weights> {
        &self.weights
    }

    pub fn dv(&self) -> &[f64] {
        self.weights.dv()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Same weights, values divided by the weighted mean. Returns `None` for
    /// the zero distribution.
    pub fn normalized(&self) -> Option<Distribution> {
        let c = weighted_mean(self);
        if c <= 0.0 {
            return None;
        }
        Some(Distribution {
            values: self.values.iter().map(|v| v / c).collect(),
            weights: Arc::clone(&self.weights),
        })
    }
}

/// Strictly positive equilibrium state `𝓜`.
#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    m: Vec<f64>,
}

impl Equilibrium {
    pub fn new(m: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = m
            .iter()
            .enumerate()
            .find(|(_, &x)| !(x > 0.0 && x.is_finite()))
        {
            return Err(Error::NonPositiveEquilibrium { index, value });
        }
        Ok(Self { m })
    }

    /// The constant equilibrium `𝓜 ≡ 1`, under which relative entropy is the Gibbs entropy.
    pub fn constant(n: usize) -> Self {
        Self { m: vec![1.0; n] }
    }

    pub fn values(&self) -> &[f64] {
        &self.m
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    pub fn is_constant_one(&self) -> bool {
        self.m.iter().all(|&x| x == 1.0)
    }
}

#[inline]
pub(crate) fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `Σ f_i Δv_i`
pub fn total_mass(d: &Distribution) -> f64 {
    d.values.iter().zip(d.dv()).map(|(f, w)| f * w).sum()
}

/// `C = Σ f_i Δv_i / V`
pub fn weighted_mean(d: &Distribution) -> f64 {
    total_mass(d) / d.weights.volume()
}

/// Gibbs entropy `η(f) = Σ f_i log f_i Δv_i`.
pub fn gibbs_entropy(d: &Distribution) -> f64 {
    gibbs_entropy_of(&d.values, d.dv())
}

pub(crate) fn gibbs_entropy_of(values: &[f64], dv: &[f64]) -> f64 {
    values.iter().zip(dv).map(|(&f, w)| xlogx(f) * w).sum()
}

/// `H(f) = Σ (f_i log f_i - f_i) Δv_i`, which differs from `η` by the mass.
pub fn entropy_h(d: &Distribution) -> f64 {
    d.values
        .iter()
        .zip(d.dv())
        .map(|(&f, w)| (xlogx(f) - f) * w)
        .sum()
}

/// `Σ f_i log(f_i / 𝓜_i) Δv_i`
pub fn relative_entropy(d: &Distribution, e: &Equilibrium) -> Result<f64> {
    if e.len() != d.len() {
        return Err(Error::LengthMismatch {
            expected: d.len(),
            got: e.len(),
        });
    }
    Ok(d.values
        .iter()
        .zip(e.values())
        .zip(d.dv())
        .map(|((&f, &m), w)| if f == 0.0 { 0.0 } else { f * (f / m).ln() * w })
        .sum())
}

/// Maps `(f, Δv)` to `(g, Δw) = (f / 𝓜, 𝓜 Δv)`; the relative entropy of `f`
/// is the Gibbs entropy of `g` under the new weights.
pub fn to_equilibrium_coordinates(d: &Distribution, e: &Equilibrium) -> Result<Distribution> {
    if e.len() != d.len() {
        return Err(Error::LengthMismatch {
            expected: d.len(),
            got: e.len(),
        });
    }
    if e.is_constant_one() {
        return Ok(d.clone());
    }
    let w = Weights::new(d.dv().iter().zip(e.values()).map(|(v, m)| v * m).collect())?;
    let g = d
        .values
        .iter()
        .zip(e.values())
        .map(|(f, m)| f / m)
        .collect();
    Distribution::new(g, Arc::new(w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    Inf,
}

/// Weighted `L¹`/`L²` norm or the max norm of an arbitrary (signed) sequence.
pub fn norm(values: &[f64], p: Norm, weights: &Weights) -> f64 {
    let dv = weights.dv();
    debug_assert_eq!(values.len(), dv.len());
    match p {
        Norm::L1 => values.iter().zip(dv).map(|(f, w)| f.abs() * w).sum(),
        Norm::L2 => values
            .iter()
            .zip(dv)
            .map(|(f, w)| f * f * w)
            .sum::<f64>()
            .sqrt(),
        Norm::Inf => values.iter().fold(0.0, |acc: f64, f| acc.max(f.abs())),
    }
}

/// `‖a - b‖₂ / ‖b‖₂` in the weighted norm.
pub fn l2_rel_error(a: &[f64], b: &[f64], weights: &Weights) -> Result<f64> {
    if a.len() != b.len() || b.len() != weights.len() {
        return Err(Error::LengthMismatch {
            expected: weights.len(),
            got: if a.len() != weights.len() {
                a.len()
            } else {
                b.len()
            },
        });
    }
    let denom = norm(b, Norm::L2, weights);
    if denom == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    Ok(norm(&diff, Norm::L2, weights) / denom)
}
