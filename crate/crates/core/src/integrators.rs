//! Baseline one-step schemes and the trajectory driver that wraps them with
//! the entropy fix.

use std::sync::Arc;

use crate::entropy::{entropy_h, l2_rel_error, total_mass, Distribution, Equilibrium};
use crate::error::{Error, Result};
use crate::fix::{entropic_step, FixMode, MASS_TOLERANCE};
use crate::linalg::{DenseMatrix, LuFactors};

/// Linear right-hand side `dg/dt = A g`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub a: DenseMatrix,
}

impl LinearSystem {
    pub fn new(a: DenseMatrix) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::Domain("system matrix has non-finite entries".into()));
        }
        Ok(Self { a })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn apply(&self, g: &[f64]) -> Vec<f64> {
        self.a.matvec(g)
    }
}

/// `f + dt·rhs(f)`
pub fn forward_euler_step<R>(f: &[f64], rhs: R, dt: f64) -> Result<Vec<f64>>
where
    R: FnOnce(&[f64]) -> Result<Vec<f64>>,
{
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("time step {dt} is not positive")));
    }
    let q = rhs(f)?;
    if q.len() != f.len() {
        return Err(Error::LengthMismatch {
            expected: f.len(),
            got: q.len(),
        });
    }
    Ok(f.iter().zip(&q).map(|(x, r)| x + dt * r).collect())
}

/// Solves `(I - dt/2·A) f' = (I + dt/2·A) f`.
pub fn implicit_midpoint_step(f: &[f64], sys: &LinearSystem, dt: f64) -> Result<Vec<f64>> {
    MidpointStepper::new(sys, dt)?.step(f)
}

/// Implicit midpoint with the LU factors of `I - dt/2·A` cached for a fixed `dt`.
#[derive(Debug, Clone)]
pub struct MidpointStepper {
    explicit: DenseMatrix,
    implicit: LuFactors,
    dt: f64,
}

impl MidpointStepper {
    pub fn new(sys: &LinearSystem, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::Domain(format!("time step {dt} is not positive")));
        }
        let half = 0.5 * dt;
        Ok(Self {
            explicit: sys.a.shifted(half, 1.0),
            implicit: LuFactors::new(&sys.a.shifted(-half, 1.0))?,
            dt,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.explicit.dim() {
            return Err(Error::LengthMismatch {
                expected: self.explicit.dim(),
                got: f.len(),
            });
        }
        Ok(self.implicit.solve(&self.explicit.matvec(f)))
    }
}

/// One row of a trajectory: time, entropy `H`, error against a reference,
/// whether the fix fired, the blend parameter and the total mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRecord {
    pub t: f64,
    pub entropy: f64,
    /// NaN when no reference is available.
    pub l2_rel_error: f64,
    pub fix_fired: bool,
    pub beta: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryRecorder {
    samples: Vec<ExperimentRecord>,
}

impl TrajectoryRecorder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a row; time stamps must strictly increase.
    pub fn push(&mut self, record: ExperimentRecord) -> Result<()> {
        if let Some(last) = self.samples.last() {
            if !(record.t > last.t) {
                return Err(Error::Domain(format!(
                    "time {} does not follow {}",
                    record.t, last.t
                )));
            }
        }
        self.samples.push(record);
        Ok(())
    }

    pub fn samples(&self) -> &[ExperimentRecord] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<ExperimentRecord> {
        self.samples
    }

    pub fn fix_activations(&self) -> impl Iterator<Item = &ExperimentRecord> {
        self.samples.iter().filter(|r| r.fix_fired)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub dt: f64,
    pub n_steps: usize,
    /// `None` runs the raw scheme.
    pub fix: Option<FixMode>,
}

/// Reference solution lookup by time.
pub type Reference<'a> = &'a dyn Fn(f64) -> Vec<f64>;

/// Advances `f0` by `n_steps` steps of `stepper`, optionally wrapping every
/// step with the entropy fix, and records one row per step (plus the
/// initial state at `t = 0`).
pub fn integrate<S>(
    f0: &Distribution,
    mut stepper: S,
    opts: IntegrateOptions,
    equilibrium: &Equilibrium,
    recorder: &mut TrajectoryRecorder,
    exact: Option<Reference<'_>>,
) -> Result<Distribution>
where
    S: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    if opts.n_steps == 0 {
        return Err(Error::Config("n_steps must be at least 1".into()));
    }
    let weights = Arc::clone(f0.weights());
    let error_at = |t: f64, f: &Distribution| -> Result<f64> {
        match exact {
            Some(reference) => l2_rel_error(f.values(), &reference(t), &weights),
            None => Ok(f64::NAN),
        }
    };
    recorder.push(ExperimentRecord {
        t: 0.0,
        entropy: entropy_h(f0),
        l2_rel_error: error_at(0.0, f0)?,
        fix_fired: false,
        beta: 0.0,
        mass: total_mass(f0),
    })?;

    let mut f = f0.clone();
    for n in 1..=opts.n_steps {
        let (next, fired, beta) = match opts.fix {
            Some(mode) => {
                let (next, report) = entropic_step(&f, |d| stepper(d.values()), equilibrium, mode)
                    .map_err(|e| e.at_step(n))?;
                (next, report.fired, report.beta)
            }
            None => {
                let raw = stepper(f.values())?;
                let next =
                    Distribution::new(raw, Arc::clone(&weights)).map_err(|e| e.at_step(n))?;
                let (before, after) = (total_mass(&f), total_mass(&next));
                let drift = (after - before).abs() / before.abs().max(f64::MIN_POSITIVE);
                if drift > MASS_TOLERANCE {
                    return Err(Error::MassDrift {
                        drift,
                        step: Some(n),
                    });
                }
                (next, false, 0.0)
            }
        };
        let t = n as f64 * opts.dt;
        recorder.push(ExperimentRecord {
            t,
            entropy: entropy_h(&next),
            l2_rel_error: error_at(t, &next)?,
            fix_fired: fired,
            beta,
            mass: total_mass(&next),
        })?;
        f = next;
    }
    Ok(f)
}
