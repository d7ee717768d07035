//! Principal component analysis on top of a cyclic Jacobi eigensolver.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::dot_unchecked;

/// Off-diagonal Frobenius mass below which the Jacobi sweep stops.
pub const JACOBI_TOLERANCE: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// `vectors[i]` is the unit eigenvector for `values[i]`, with its
    /// largest-magnitude component made positive.
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

fn off_diagonal_mass(a: &[Vec<f64>]) -> f64 {
    let mut sum = 0.0;
    for (p, row) in a.iter().enumerate() {
        for (q, v) in row.iter().enumerate() {
            if p != q {
                sum += v * v;
            }
        }
    }
    libm::sqrt(sum)
}

/// Cyclic Jacobi eigendecomposition. Only the symmetric part of `matrix` is
/// meaningful; callers pass a symmetric matrix.
pub fn jacobi_eigen(matrix: &[Vec<f64>]) -> Result<SymmetricEigen> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::Empty { what: "matrix" });
    }
    if let Some(row) = matrix.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: row.len(),
        });
    }
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    // v[k][j]: component k of eigenvector j
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && off_diagonal_mass(&a) >= JACOBI_TOLERANCE {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = libm::copysign(1.0, theta) / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]).then(i.cmp(&j)));
    let values = order.iter().map(|&j| a[j][j]).collect();
    let vectors = order
        .iter()
        .map(|&j| {
            let mut col: Vec<f64> = v.iter().map(|row| row[j]).collect();
            let lead = col
                .iter()
                .copied()
                .reduce(|best, x| if x.abs() > best.abs() { x } else { best })
                .unwrap_or(0.0);
            if lead < 0.0 {
                col.iter_mut().for_each(|x| *x = -*x);
            }
            col
        })
        .collect();
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Mean and leading principal directions of a set of vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaBasis {
    mean: Vec<f64>,
    components: Vec<Vec<f64>>,
    variances: Vec<f64>,
}

impl PcaBasis {
    /// Fits the top-`k` principal directions of the sample covariance.
    pub fn fit<V: AsRef<[f64]>>(vectors: &[V], k: usize) -> Result<Self> {
        if vectors.len() < 2 {
            return Err(Error::InvalidConfig("PCA needs at least 2 samples".into()));
        }
        let d = vectors[0].as_ref().len();
        if k == 0 || k > d {
            return Err(Error::InvalidConfig(alloc::format!(
                "PCA dimension k={k} must lie in 1..={d}"
            )));
        }
        let n = vectors.len() as f64;
        let mut mean = vec![0.0; d];
        for x in vectors {
            let x = x.as_ref();
            if x.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: x.len(),
                });
            }
            mean.iter_mut().zip(x).for_each(|(m, v)| *m += v);
        }
        mean.iter_mut().for_each(|m| *m /= n);

        let mut cov = vec![vec![0.0; d]; d];
        let mut centered = vec![0.0; d];
        for x in vectors {
            for ((c, v), m) in centered.iter_mut().zip(x.as_ref()).zip(&mean) {
                *c = v - m;
            }
            for i in 0..d {
                for j in i..d {
                    cov[i][j] += centered[i] * centered[j];
                }
            }
        }
        for i in 0..d {
            for j in i..d {
                cov[i][j] /= n - 1.0;
                cov[j][i] = cov[i][j];
            }
        }

        let eig = jacobi_eigen(&cov)?;
        Ok(PcaBasis {
            mean,
            components: eig.vectors.into_iter().take(k).collect(),
            variances: eig.values.into_iter().take(k).collect(),
        })
    }

    pub fn input_dim(&self) -> usize {
        self.mean.len()
    }

    pub fn output_dim(&self) -> usize {
        self.components.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// Variance captured by each component.
    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    /// Projects the centered vector onto the basis.
    pub fn transform(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                found: v.len(),
            });
        }
        Ok(self.transform_unchecked(v))
    }

    pub(crate) fn transform_unchecked(&self, v: &[f64]) -> Vec<f64> {
        let centered: Vec<f64> = v.iter().zip(&self.mean).map(|(x, m)| x - m).collect();
        self.components
            .iter()
            .map(|c| dot_unchecked(c, &centered))
            .collect()
    }
}
