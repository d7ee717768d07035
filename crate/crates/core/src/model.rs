use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::all_finite;
use crate::perm::{factorial, MAX_TEMPLATES};
use crate::rng::Rng;

/// Parameters of a latent ordinal model: `M` templates of dimension `d` and
/// one ordering cost per permutation of `1..=M`, stored in lexicographic
/// permutation order (cost of permutation index `j` lives at `costs[j - 1]`).
#[derive(Debug, Clone, PartialEq)]
pub struct LomoModel {
    dim: usize,
    templates: Vec<Vec<f64>>,
    costs: Vec<f64>,
}

impl LomoModel {
    pub fn new(templates: Vec<Vec<f64>>, costs: Vec<f64>) -> Result<Self> {
        let m = templates.len();
        if m == 0 {
            return Err(Error::Empty { what: "template list" });
        }
        if m > MAX_TEMPLATES {
            return Err(Error::InvalidConfig(alloc::format!(
                "M={m} exceeds the maximum of {MAX_TEMPLATES} templates"
            )));
        }
        let dim = templates[0].len();
        if dim == 0 {
            return Err(Error::Empty { what: "template" });
        }
        if let Some(t) = templates.iter().find(|t| t.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: t.len(),
            });
        }
        if costs.len() != factorial(m) {
            return Err(Error::DimensionMismatch {
                expected: factorial(m),
                found: costs.len(),
            });
        }
        if !templates.iter().all(|t| all_finite(t)) || !all_finite(&costs) {
            return Err(Error::NonFinite { what: "model" });
        }
        Ok(LomoModel {
            dim,
            templates,
            costs,
        })
    }

    /// All-zero model.
    pub fn zeros(dim: usize, m: usize) -> Result<Self> {
        LomoModel::new(
            alloc::vec![alloc::vec![0.0; dim]; m],
            alloc::vec![0.0; factorial(m)],
        )
    }

    /// Templates drawn as `0.01 × uniform[0,1)` per entry, costs zero.
    pub fn init(dim: usize, m: usize, rng: &mut Rng) -> Result<Self> {
        let mut model = LomoModel::zeros(dim, m)?;
        for t in &mut model.templates {
            for v in t.iter_mut() {
                *v = 0.01 * rng.uniform();
            }
        }
        Ok(model)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_templates(&self) -> usize {
        self.templates.len()
    }

    pub fn templates(&self) -> &[Vec<f64>] {
        &self.templates
    }

    pub fn template(&self, i: usize) -> &[f64] {
        &self.templates[i]
    }

    pub(crate) fn template_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.templates[i]
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    /// Cost of the 1-based permutation index `perm`.
    pub fn cost(&self, perm: usize) -> f64 {
        self.costs[perm - 1]
    }

    pub(crate) fn cost_mut(&mut self, perm: usize) -> &mut f64 {
        &mut self.costs[perm - 1]
    }
}
