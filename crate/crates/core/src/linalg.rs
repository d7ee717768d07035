//! Dense vector arithmetic on `f64` slices.

use alloc::vec::Vec;

use crate::error::{Error, Result};

fn check_len(u: &[f64], v: &[f64]) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    Ok(())
}

/// Inner product `Σ u_j v_j`.
pub fn dot(u: &[f64], v: &[f64]) -> Result<f64> {
    check_len(u, v)?;
    Ok(dot_unchecked(u, v))
}

#[inline]
pub(crate) fn dot_unchecked(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Elementwise `a·w + b·x`.
pub fn blend(w: &[f64], a: f64, x: &[f64], b: f64) -> Result<Vec<f64>> {
    check_len(w, x)?;
    Ok(w.iter().zip(x).map(|(wi, xi)| a * wi + b * xi).collect())
}

/// In-place version of [`blend`]: `w ← a·w + b·x`.
pub fn blend_into(w: &mut [f64], a: f64, x: &[f64], b: f64) -> Result<()> {
    check_len(w, x)?;
    for (wi, xi) in w.iter_mut().zip(x) {
        *wi = a * *wi + b * xi;
    }
    Ok(())
}

pub fn squared_norm(v: &[f64]) -> f64 {
    dot_unchecked(v, v)
}

pub fn norm(v: &[f64]) -> f64 {
    libm::sqrt(squared_norm(v))
}

pub fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}
