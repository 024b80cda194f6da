//! Small dense linear algebra: row-major matrices, LU with partial pivoting,
//! and a symmetric eigendecomposition (backed by nalgebra).

use crate::error::{Error, Result};

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `alpha·self + beta·I`
    pub fn shifted(&self, alpha: f64, beta: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= alpha;
        }
        for i in 0..self.n {
            out[(i, i)] += beta;
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// `PA = LU` with partial pivoting; `L` has a unit diagonal and both factors
/// share storage.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl LuFactors {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.data.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if pivot <= f64::EPSILON * scale * 1e-3 {
                return Err(Error::SingularMatrix);
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / d;
                lu[(i, k)] = factor;
                if factor != 0.0 {
                    for j in k + 1..n {
                        let u = lu[(k, j)];
                        lu[(i, j)] -= factor * u;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.dim();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s: f64 = row[..i].iter().zip(&x[..i]).map(|(l, y)| l * y).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s: f64 = row[i + 1..]
                .iter()
                .zip(&x[i + 1..])
                .map(|(u, y)| u * y)
                .sum();
            x[i] = (x[i] - s) / row[i];
        }
        x
    }
}

/// Eigenpairs of a symmetric matrix: `S = U diag(λ) Uᵀ`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub eigenvalues: Vec<f64>,
    /// Column `k` (stored as `vectors[k]`) is the eigenvector for `eigenvalues[k]`.
    pub vectors: Vec<Vec<f64>>,
}

impl SymmetricEigen {
    pub fn new(s: &DenseMatrix) -> Self {
        let n = s.dim();
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| 0.5 * (s[(i, j)] + s[(j, i)]));
        let eig = m.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
            .collect();
        Self {
            eigenvalues,
            vectors,
        }
    }

    /// `U φ(Λ) Uᵀ x` for a spectral function `φ`.
    pub fn apply_fn(&self, x: &[f64], phi: impl Fn(f64) -> f64) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        for (lambda, u) in self.eigenvalues.iter().zip(&self.vectors) {
            let coeff: f64 = u.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() * phi(*lambda);
            for (o, ui) in out.iter_mut().zip(u) {
                *o += coeff * ui;
            }
        }
        out
    }
}
