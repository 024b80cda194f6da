//! Fourier-spectral homogeneous Boltzmann system on an `M×M×M` lattice with
//! the Maxwell-molecule kernel.
//!
//! The right-hand side `Q_r = Σ_{p,q,s} A_pq^rs (f_p f_q - f_r f_s)` is not
//! assembled from the `O(M¹²)` coefficient tensor. With the integer-lattice
//! basis `E_k(j) = exp(2πi k·j/M)` the triple mode sum collapses to
//!
//! ```text
//! gain_r = Re Σ_{l,h∈K} B̂(l,h) σ(l) σ(h) f̂_l f̂_h E_{l+h}(r)
//! loss_r = f_r · Re Σ_{k∈K} B̂(k,k) σ(k)² f̂_k E_k(r)
//! ```
//!
//! which is what [`SpectralOperator::collision_rhs`] evaluates. The
//! coefficients themselves are available through
//! [`coefficient_a_bruteforce`] for small lattices and serve as the oracle.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::entropy::{Distribution, Weights};
use crate::error::{Error, Result};

/// Relative size of the imaginary part tolerated in the assembled right-hand side.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoltzConfig {
    /// Lattice size `M = 2m + 1`.
    pub m_lattice: usize,
    pub m: usize,
    /// `λ = 2 / (3 + √2)`
    pub lambda: f64,
    /// Half period `T = 3/λ`.
    pub t_period: f64,
    /// Cell volume `Δv = (2T/M)³`.
    pub dv_cell: f64,
}

impl BoltzConfig {
    pub fn new(m_lattice: usize) -> Result<Self> {
        if m_lattice < 3 || m_lattice % 2 == 0 {
            return Err(Error::Config(format!(
                "lattice size {m_lattice} must be odd and at least 3"
            )));
        }
        let lambda = 2.0 / (3.0 + 2f64.sqrt());
        let t_period = 3.0 / lambda;
        Ok(Self {
            m_lattice,
            m: (m_lattice - 1) / 2,
            lambda,
            t_period,
            dv_cell: (2.0 * t_period / m_lattice as f64).powi(3),
        })
    }

    pub fn n_points(&self) -> usize {
        self.m_lattice.pow(3)
    }

    pub fn weights(&self) -> Result<Weights> {
        Weights::uniform(self.n_points(), self.dv_cell)
    }

    /// Flat index of a lattice point or mode bucket, `(i₁ M + i₂) M + i₃`.
    pub fn flat(&self, i: [usize; 3]) -> usize {
        (i[0] * self.m_lattice + i[1]) * self.m_lattice + i[2]
    }

    pub fn unflat(&self, idx: usize) -> [usize; 3] {
        let m = self.m_lattice;
        [idx / (m * m), (idx / m) % m, idx % m]
    }

    /// Bucket `k mod M` of a mode vector.
    pub fn bucket(&self, k: [i64; 3]) -> usize {
        let m = self.m_lattice as i64;
        self.flat(k.map(|c| c.rem_euclid(m) as usize))
    }

    /// Mode vector in `K = [-m, m]³` represented by a bucket.
    pub fn mode_of_bucket(&self, idx: usize) -> [i64; 3] {
        self.unflat(idx).map(|c| sym_mod(c as i64, self.m_lattice))
    }
}

/// Representative of `i mod M` in `[-m, m]`, `M = 2m + 1` odd.
pub fn sym_mod(i: i64, m_lattice: usize) -> i64 {
    let big_m = m_lattice as i64;
    let m = (big_m - 1) / 2;
    (i + m).rem_euclid(big_m) - m
}

pub fn sym_mod3(i: [i64; 3], m_lattice: usize) -> [i64; 3] {
    i.map(|c| sym_mod(c, m_lattice))
}

/// One-dimensional modified Jackson filter `σ̃_M(β)`.
pub fn jackson_sigma(beta: i64, m: usize) -> f64 {
    let mp1 = (m + 1) as f64;
    let b = beta.unsigned_abs() as f64;
    let theta = PI * b / mp1;
    ((mp1 - b) * theta.cos() + theta.sin() / (PI / mp1).tan()) / mp1
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `∫₀¹ r^n sinc(x r) dr` for `n ∈ {2, 4}`.
fn radial_moment(n: u32, x: f64) -> f64 {
    if x < 2.0 {
        // Σ_k (-1)^k x^{2k} / ((2k+1)! (n + 2k + 1))
        let x2 = x * x;
        let mut term = 1.0; // (-1)^k x^{2k} / (2k+1)!
        let mut sum = 0.0;
        for k in 0..30u32 {
            let contrib = term / (n + 2 * k + 1) as f64;
            sum += contrib;
            if contrib.abs() < 1e-18 * sum.abs() {
                break;
            }
            term *= -x2 / ((2 * k + 2) * (2 * k + 3)) as f64;
        }
        return sum;
    }
    let (s, c) = x.sin_cos();
    match n {
        2 => (s - x * c) / x.powi(3),
        4 => (-c / x + 3.0 * s / x.powi(2) + 6.0 * c / x.powi(3) - 6.0 * s / x.powi(4)) / x,
        _ => unreachable!("only second and fourth moments are used"),
    }
}

/// Maxwell-molecule kernel mode `∫₀¹ r² sinc(ξr) sinc(ηr) dr`
/// `= [(ξ+η) sin(ξ-η) - (ξ-η) sin(ξ+η)] / [2ξη(ξ² - η²)]`, with the
/// removable singularities at `ξ = 0`, `η = 0` and `ξ = η` resolved.
pub fn kernel_bhat(xi: f64, eta: f64) -> f64 {
    let (a, b) = if xi >= eta { (xi, eta) } else { (eta, xi) };
    let s = a + b;
    let d = a - b;
    if s < 2.0 {
        // (sinc d - sinc s) / (2ab) expanded in powers of d² and s², using
        // s² - d² = 4ab: 2 Σ_{k≥1} (-1)^{k+1} P_k / (2k+1)!,
        // P_k = Σ_{j<k} d^{2j} s^{2(k-1-j)}.
        let (d2, s2) = (d * d, s * s);
        let mut sum = 0.0;
        let mut fact = 6.0; // (2k+1)!
        let mut d_pow = vec![1.0];
        let mut s_pow = vec![1.0];
        for k in 1..=24usize {
            if k > 1 {
                d_pow.push(d_pow[k - 2] * d2);
                s_pow.push(s_pow[k - 2] * s2);
                fact *= ((2 * k) * (2 * k + 1)) as f64;
            }
            let p: f64 = (0..k).map(|j| d_pow[j] * s_pow[k - 1 - j]).sum();
            let term = if k % 2 == 1 { p } else { -p } / fact;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        return 2.0 * sum;
    }
    if b < 1e-4 {
        // sinc(br) ≈ 1 - (br)²/6
        return radial_moment(2, a) - b * b / 6.0 * radial_moment(4, a);
    }
    (sinc(d) - sinc(s)) / (2.0 * a * b)
}

/// `f̂_k = M⁻³ Σ_j f_j exp(-2πi k·j/M)`, returned in bucket order (`k mod M`).
pub fn dft_forward(values: &[f64], m_lattice: usize) -> Result<Vec<Complex64>> {
    let n = m_lattice.pow(3);
    if values.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: values.len(),
        });
    }
    let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    separable_dft(&mut data, m_lattice, -1.0);
    let scale = 1.0 / n as f64;
    for v in &mut data {
        *v *= scale;
    }
    Ok(data)
}

/// `f_j = Σ_k f̂_k exp(2πi k·j/M)` for modes in bucket order.
pub fn dft_inverse(modes: &[Complex64], m_lattice: usize) -> Result<Vec<Complex64>> {
    let n = m_lattice.pow(3);
    if modes.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: modes.len(),
        });
    }
    let mut data = modes.to_vec();
    separable_dft(&mut data, m_lattice, 1.0);
    Ok(data)
}

fn roots_of_unity(m_lattice: usize, sign: f64) -> Vec<Complex64> {
    (0..m_lattice)
        .map(|n| Complex64::from_polar(1.0, sign * 2.0 * PI * n as f64 / m_lattice as f64))
        .collect()
}

/// Direct DFT along each of the three axes in turn.
fn separable_dft(data: &mut [Complex64], m: usize, sign: f64) {
    let roots = roots_of_unity(m, sign);
    let strides = [m * m, m, 1];
    let mut line = vec![Complex64::new(0.0, 0.0); m];
    for &stride in &strides {
        for base in 0..data.len() {
            // Visit each line once, starting from its zero coordinate.
            if (base / stride) % m != 0 {
                continue;
            }
            for (k, out) in line.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..m {
                    acc += data[base + j * stride] * roots[(k * j) % m];
                }
                *out = acc;
            }
            for (k, v) in line.iter().enumerate() {
                data[base + k * stride] = *v;
            }
        }
    }
}

/// Precomputed kernel/filter tables for the collision right-hand side.
#[derive(Debug, Clone)]
pub struct SpectralOperator {
    cfg: BoltzConfig,
    /// Mode vector of each bucket.
    modes: Vec<[i64; 3]>,
    /// `σ(k)` per bucket.
    sigma: Vec<f64>,
    /// `B̂` indexed by `(|l+h|², |l-h|²)`; both lie in `0..=3(2m)²`.
    bhat_by_norms: Vec<f64>,
    norm_span: usize,
    /// `B̂(k,k) σ(k)²` per bucket.
    loss_diag: Vec<f64>,
}

impl SpectralOperator {
    pub fn new(cfg: BoltzConfig) -> Self {
        let n = cfg.n_points();
        let m = cfg.m;
        let modes: Vec<[i64; 3]> = (0..n).map(|b| cfg.mode_of_bucket(b)).collect();
        let sigma1: Vec<f64> = (0..=m).map(|b| jackson_sigma(b as i64, m)).collect();
        let sigma: Vec<f64> = modes
            .iter()
            .map(|k| {
                k.iter()
                    .map(|c| sigma1[c.unsigned_abs() as usize])
                    .product()
            })
            .collect();
        let norm_span = 3 * (2 * m) * (2 * m) + 1;
        let scale = cfg.lambda * PI;
        let mut bhat_by_norms = vec![0.0; norm_span * norm_span];
        for s2 in 0..norm_span {
            for d2 in 0..norm_span {
                bhat_by_norms[s2 * norm_span + d2] =
                    kernel_bhat((s2 as f64).sqrt() * scale, (d2 as f64).sqrt() * scale);
            }
        }
        let loss_diag = modes
            .iter()
            .zip(&sigma)
            .map(|(k, s)| {
                let s2: i64 = k.iter().map(|c| 4 * c * c).sum();
                bhat_by_norms[s2 as usize * norm_span] * s * s
            })
            .collect();
        Self {
            cfg,
            modes,
            sigma,
            bhat_by_norms,
            norm_span,
            loss_diag,
        }
    }

    pub fn config(&self) -> &BoltzConfig {
        &self.cfg
    }

    pub fn sigma(&self, k: [i64; 3]) -> f64 {
        self.sigma[self.cfg.bucket(k)]
    }

    /// `B̂(l,h) σ(l) σ(h)` for mode vectors `l, h ∈ K`.
    pub fn weighted_kernel(&self, l: [i64; 3], h: [i64; 3]) -> f64 {
        self.kernel_entry(l, h) * self.sigma(l) * self.sigma(h)
    }

    fn kernel_entry(&self, l: [i64; 3], h: [i64; 3]) -> f64 {
        let mut s2 = 0i64;
        let mut d2 = 0i64;
        for c in 0..3 {
            s2 += (l[c] + h[c]).pow(2);
            d2 += (l[c] - h[c]).pow(2);
        }
        self.bhat_by_norms[s2 as usize * self.norm_span + d2 as usize]
    }

    pub fn loss_diag(&self, k: [i64; 3]) -> f64 {
        self.loss_diag[self.cfg.bucket(k)]
    }

    /// Collision right-hand side `Q(f)` on the lattice.
    pub fn collision_rhs(&self, f: &[f64]) -> Result<Vec<f64>> {
        let cfg = &self.cfg;
        let big_m = cfg.m_lattice;
        let n = cfg.n_points();
        let fhat = dft_forward(f, big_m)?;

        // ĝ_k = Σ_l W(l, h) f̂_l f̂_h with h ≡ k - l, i.e. all pairs with l + h ≡ k.
        let comps: Vec<[usize; 3]> = (0..n).map(|b| cfg.unflat(b)).collect();
        let gain_modes: Vec<Complex64> = (0..n)
            .into_par_iter()
            .map(|kb| {
                let kc = comps[kb];
                let mut acc = Complex64::new(0.0, 0.0);
                for lb in 0..n {
                    let lc = comps[lb];
                    let hb = cfg.flat([
                        (kc[0] + big_m - lc[0]) % big_m,
                        (kc[1] + big_m - lc[1]) % big_m,
                        (kc[2] + big_m - lc[2]) % big_m,
                    ]);
                    let w = self.kernel_entry(self.modes[lb], self.modes[hb])
                        * self.sigma[lb]
                        * self.sigma[hb];
                    acc += fhat[lb] * fhat[hb] * w;
                }
                acc
            })
            .collect();
        let loss_modes: Vec<Complex64> = fhat
            .iter()
            .zip(&self.loss_diag)
            .map(|(fk, c)| fk * c)
            .collect();

        let gain = dft_inverse(&gain_modes, big_m)?;
        let loss = dft_inverse(&loss_modes, big_m)?;

        let mut q = Vec::with_capacity(n);
        let mut residue = 0.0_f64;
        let mut scale = 0.0_f64;
        for ((g, l), &fr) in gain.iter().zip(&loss).zip(f) {
            q.push(g.re - fr * l.re);
            residue = residue.max((g.im - fr * l.im).abs());
            scale = scale.max(g.re.abs()).max((fr * l.re).abs());
        }
        let tolerance = IMAGINARY_TOLERANCE * scale;
        if residue > tolerance {
            return Err(Error::ImaginaryResidue { residue, tolerance });
        }
        Ok(q)
    }

    /// Semi-discrete entropy production `Σ_r Q_r log f_r Δv` for positive `f`.
    pub fn entropy_production(&self, f: &[f64]) -> Result<f64> {
        let q = self.collision_rhs(f)?;
        Ok(q.iter().zip(f).map(|(qr, fr)| qr * fr.ln()).sum::<f64>() * self.cfg.dv_cell)
    }
}

/// Lattice values of
/// `f_r(0) = 3.2 + Σ_{j=1}^{10} (j/55) Σ_{c=1}^{3} sin(jπ(r_c/M - 1/2))`.
pub fn bz_initial_values(cfg: &BoltzConfig) -> Vec<f64> {
    let big_m = cfg.m_lattice;
    let axis: Vec<f64> = (0..big_m)
        .map(|r| {
            (1..=10)
                .map(|j| {
                    let j = j as f64;
                    j / 55.0 * (j * PI * (r as f64 / big_m as f64 - 0.5)).sin()
                })
                .sum()
        })
        .collect();
    (0..cfg.n_points())
        .map(|idx| {
            let r = cfg.unflat(idx);
            3.2 + axis[r[0]] + axis[r[1]] + axis[r[2]]
        })
        .collect()
}

pub fn bz_initial(cfg: &BoltzConfig) -> Result<Distribution> {
    Distribution::new(bz_initial_values(cfg), std::sync::Arc::new(cfg.weights()?))
}

/// Direct evaluation of the collision coefficients
/// `A_pq^rs = M⁻⁹ Σ_{l,h,k∈K} B̂_M^σ(h-k, l-k) E_{-l}(p-s) E_{-h}(q-s) E_k(r-s)`.
///
/// Cost is `O(M⁹)` per coefficient; intended as an oracle on tiny lattices.
#[derive(Debug, Clone)]
pub struct BruteForceCoefficients {
    cfg: BoltzConfig,
    modes: Vec<[i64; 3]>,
    /// `B̂_M^σ(h-k, l-k)` indexed by `(l, h, k)` in bucket order.
    kernel: Vec<f64>,
    roots: Vec<Complex64>,
    /// `A` over index differences, built on first use.
    table: OnceLock<Vec<f64>>,
}

pub const BRUTE_FORCE_MAX_LATTICE: usize = 5;
/// The full coefficient table costs `O(M¹⁸)`; only `M = 3` is affordable.
pub const BRUTE_FORCE_TABLE_MAX_LATTICE: usize = 3;

impl BruteForceCoefficients {
    pub fn new(cfg: BoltzConfig) -> Result<Self> {
        if cfg.m_lattice > BRUTE_FORCE_MAX_LATTICE {
            return Err(Error::Config(format!(
                "brute-force coefficients limited to M <= {BRUTE_FORCE_MAX_LATTICE}, got {}",
                cfg.m_lattice
            )));
        }
        let n = cfg.n_points();
        let big_m = cfg.m_lattice;
        let modes: Vec<[i64; 3]> = (0..n).map(|b| cfg.mode_of_bucket(b)).collect();
        let scale = cfg.lambda * PI;
        let sigma = |k: [i64; 3]| -> f64 { k.iter().map(|&c| jackson_sigma(c, cfg.m)).product() };
        let mut kernel = vec![0.0; n * n * n];
        for (li, l) in modes.iter().enumerate() {
            for (hi, h) in modes.iter().enumerate() {
                for (ki, k) in modes.iter().enumerate() {
                    let i = sym_mod3([h[0] - k[0], h[1] - k[1], h[2] - k[2]], big_m);
                    let j = sym_mod3([l[0] - k[0], l[1] - k[1], l[2] - k[2]], big_m);
                    let plus: f64 = (0..3)
                        .map(|c| ((i[c] + j[c]) as f64).powi(2))
                        .sum::<f64>()
                        .sqrt();
                    let minus: f64 = (0..3)
                        .map(|c| ((i[c] - j[c]) as f64).powi(2))
                        .sum::<f64>()
                        .sqrt();
                    kernel[(li * n + hi) * n + ki] =
                        kernel_bhat(plus * scale, minus * scale) * sigma(i) * sigma(j);
                }
            }
        }
        Ok(Self {
            cfg,
            modes,
            kernel,
            roots: roots_of_unity(big_m, 1.0),
            table: OnceLock::new(),
        })
    }

    /// Complex value of `A_pq^rs` (lattice index triples).
    pub fn coefficient_complex(
        &self,
        p: [usize; 3],
        q: [usize; 3],
        r: [usize; 3],
        s: [usize; 3],
    ) -> Complex64 {
        let big_m = self.cfg.m_lattice as i64;
        let n = self.modes.len();
        let diff = |a: [usize; 3]| {
            [
                a[0] as i64 - s[0] as i64,
                a[1] as i64 - s[1] as i64,
                a[2] as i64 - s[2] as i64,
            ]
        };
        let (dp, dq, dr) = (diff(p), diff(q), diff(r));
        let dot = |k: &[i64; 3], v: &[i64; 3]| k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
        let mut acc = Complex64::new(0.0, 0.0);
        for (li, l) in self.modes.iter().enumerate() {
            let phase_l = -dot(l, &dp);
            for (hi, h) in self.modes.iter().enumerate() {
                let phase_lh = phase_l - dot(h, &dq);
                let row = &self.kernel[(li * n + hi) * n..(li * n + hi + 1) * n];
                for (k, w) in self.modes.iter().zip(row) {
                    let phase = (phase_lh + dot(k, &dr)).rem_euclid(big_m) as usize;
                    acc += self.roots[phase] * *w;
                }
            }
        }
        acc / (big_m as f64).powi(9)
    }

    /// Real coefficient; fails if the imaginary part exceeds `1e-12`.
    pub fn coefficient(
        &self,
        p: [usize; 3],
        q: [usize; 3],
        r: [usize; 3],
        s: [usize; 3],
    ) -> Result<f64> {
        let a = self.coefficient_complex(p, q, r, s);
        let tolerance = 1e-12 * a.re.abs().max(1.0);
        if a.im.abs() > tolerance {
            return Err(Error::ImaginaryResidue {
                residue: a.im.abs(),
                tolerance,
            });
        }
        Ok(a.re)
    }

    /// `A_{a,b}^{c,0}` for all lattice offsets, indexed `(a·M³ + b)·M³ + c`.
    pub fn difference_table(&self) -> Result<&[f64]> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let cfg = &self.cfg;
        if cfg.m_lattice > BRUTE_FORCE_TABLE_MAX_LATTICE {
            return Err(Error::Config(format!(
                "brute-force coefficient table limited to M <= {BRUTE_FORCE_TABLE_MAX_LATTICE}, got {}",
                cfg.m_lattice
            )));
        }
        let n = cfg.n_points();
        let zero = [0usize; 3];
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|a| {
                let mut row = Vec::with_capacity(n * n);
                for b in 0..n {
                    for c in 0..n {
                        row.push(self.coefficient(
                            cfg.unflat(a),
                            cfg.unflat(b),
                            cfg.unflat(c),
                            zero,
                        )?);
                    }
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        Ok(self.table.get_or_init(|| rows.concat()))
    }

    /// `Q_r = Σ_{p,q,s} A_pq^rs (f_p f_q - f_r f_s)` by explicit summation.
    ///
    /// Uses a table of `A` over index differences, which is exact because the
    /// coefficients depend only on `p-s`, `q-s`, `r-s` modulo `M`.
    pub fn collision_rhs(&self, f: &[f64]) -> Result<Vec<f64>> {
        let cfg = &self.cfg;
        let n = cfg.n_points();
        if f.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: f.len(),
            });
        }
        let table = self.difference_table()?;
        let big_m = cfg.m_lattice;
        let sub = |x: usize, y: usize| -> usize {
            let (xc, yc) = (cfg.unflat(x), cfg.unflat(y));
            cfg.flat([0, 1, 2].map(|c| (xc[c] + big_m - yc[c]) % big_m))
        };
        let mut q = vec![0.0; n];
        for (r, qr) in q.iter_mut().enumerate() {
            let mut acc = 0.0;
            for s in 0..n {
                let c = sub(r, s);
                for p in 0..n {
                    let a = sub(p, s);
                    for qi in 0..n {
                        let b = sub(qi, s);
                        acc += table[(a * n + b) * n + c] * (f[p] * f[qi] - f[r] * f[s]);
                    }
                }
            }
            *qr = acc;
        }
        Ok(q)
    }
}

/// Single coefficient `A_pq^rs` by direct summation (`M ≤ 5`).
pub fn coefficient_a_bruteforce(
    cfg: &BoltzConfig,
    p: [usize; 3],
    q: [usize; 3],
    r: [usize; 3],
    s: [usize; 3],
) -> Result<f64> {
    BruteForceCoefficients::new(*cfg)?.coefficient(p, q, r, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_mod_examples() {
        assert_eq!(sym_mod(9, 17), -8);
        assert_eq!(sym_mod(0, 17), 0);
        assert_eq!(sym_mod(-9, 17), 8);
        assert_eq!(sym_mod(8, 17), 8);
        assert_eq!(sym_mod(-8, 17), -8);
        for i in -40..40 {
            let r = sym_mod(i, 5);
            assert!((-2..=2).contains(&r));
            assert_eq!((i - r).rem_euclid(5), 0);
        }
    }

    #[test]
    fn jackson_examples() {
        assert!((jackson_sigma(0, 8) - 1.0).abs() < 1e-15);
        assert!(jackson_sigma(9, 8).abs() < 1e-15);
        assert!((jackson_sigma(1, 8) - (PI / 9.0).cos()).abs() < 1e-14);
        assert_eq!(jackson_sigma(-3, 8), jackson_sigma(3, 8));
        for m in 1..12 {
            for b in 0..=m as i64 {
                let s = jackson_sigma(b, m);
                assert!((-1e-15..=1.0 + 1e-15).contains(&s), "m={m} b={b} s={s}");
            }
        }
    }

    #[test]
    fn kernel_limits() {
        assert!((kernel_bhat(0.0, 0.0) - 1.0 / 3.0).abs() < 1e-16);
        assert!((kernel_bhat(PI, 0.0) - 1.0 / (PI * PI)).abs() < 1e-15);
        let x: f64 = 2.7;
        let diag = (0.5 - (2.0 * x).sin() / (4.0 * x)) / (x * x);
        assert!((kernel_bhat(x, x) - diag).abs() < 1e-15);
        assert_eq!(kernel_bhat(1.3, 4.1), kernel_bhat(4.1, 1.3));
    }

    #[test]
    fn kernel_branches_are_continuous() {
        // Across the series/closed-form switch at ξ + η = 2.
        let below = kernel_bhat(1.0 - 1e-12, 1.0 - 1e-12);
        let above = kernel_bhat(1.0 + 1e-12, 1.0 + 1e-12);
        assert!((below - above).abs() < 1e-11);
        // Across the small-η switch.
        let a = kernel_bhat(5.0, 1e-4 * (1.0 - 1e-9));
        let b = kernel_bhat(5.0, 1e-4 * (1.0 + 1e-9));
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn config_constants() {
        let cfg = BoltzConfig::new(17).unwrap();
        let expected = (3.0 * (3.0 + 2f64.sqrt()) / 17.0).powi(3);
        assert!((cfg.dv_cell - expected).abs() < 1e-13 * expected);
        assert_eq!(cfg.m, 8);
        assert!(BoltzConfig::new(4).is_err());
        assert!(BoltzConfig::new(1).is_err());
    }

    #[test]
    fn dft_constant_and_roundtrip() {
        let cfg = BoltzConfig::new(5).unwrap();
        let c = vec![2.5; cfg.n_points()];
        let hat = dft_forward(&c, 5).unwrap();
        assert!((hat[0].re - 2.5).abs() < 1e-13);
        assert!(hat[1..].iter().all(|z| z.norm() < 1e-13));

        let f: Vec<f64> = (0..cfg.n_points())
            .map(|i| ((i * 37 % 11) as f64).sin() + 2.0)
            .collect();
        let hat = dft_forward(&f, 5).unwrap();
        for b in 0..cfg.n_points() {
            let k = cfg.mode_of_bucket(b);
            let conj = hat[cfg.bucket(k.map(|c| -c))];
            assert!((hat[b] - conj.conj()).norm() < 1e-13);
        }
        let back = dft_inverse(&hat, 5).unwrap();
        for (a, b) in back.iter().zip(&f) {
            assert!((a.re - b).abs() < 1e-12 * b.abs() && a.im.abs() < 1e-12);
        }
    }

    #[test]
    fn dft_matches_direct_definition() {
        let cfg = BoltzConfig::new(3).unwrap();
        let f: Vec<f64> = (0..27).map(|i| 1.0 + 0.1 * i as f64).collect();
        let hat = dft_forward(&f, 3).unwrap();
        let k = [1i64, -1, 0];
        let mut direct = Complex64::new(0.0, 0.0);
        for j in 0..27 {
            let jc = cfg.unflat(j);
            let dot: i64 = (0..3).map(|c| k[c] * jc[c] as i64).sum();
            direct += Complex64::from_polar(f[j], -2.0 * PI * dot as f64 / 3.0);
        }
        direct /= 27.0;
        assert!((hat[cfg.bucket(k)] - direct).norm() < 1e-13);
    }

    #[test]
    fn constant_state_is_steady() {
        let cfg = BoltzConfig::new(5).unwrap();
        let op = SpectralOperator::new(cfg);
        let q = op.collision_rhs(&vec![1.7; cfg.n_points()]).unwrap();
        assert!(
            q.iter().all(|v| v.abs() < 1e-12),
            "{:?}",
            q.iter().fold(0.0f64, |m, v| m.max(v.abs()))
        );
    }

    #[test]
    fn initial_data_values() {
        for big_m in [3, 9, 17] {
            let cfg = BoltzConfig::new(big_m).unwrap();
            let f = bz_initial_values(&cfg);
            assert!((f[0] - (3.2 - 3.0 / 11.0)).abs() < 1e-13);
            assert!(f.iter().all(|&v| (0.2..=6.2).contains(&v)));
        }
    }

    #[test]
    fn loss_kernel_matches_gain_kernel_on_antipodes() {
        let cfg = BoltzConfig::new(5).unwrap();
        let op = SpectralOperator::new(cfg);
        for b in 0..cfg.n_points() {
            let k = cfg.mode_of_bucket(b);
            let minus = k.map(|c| -c);
            assert!((op.loss_diag(k) - op.weighted_kernel(k, minus)).abs() < 1e-15);
        }
    }

    #[test]
    fn brute_force_size_limit() {
        assert!(BruteForceCoefficients::new(BoltzConfig::new(7).unwrap()).is_err());
    }
}
