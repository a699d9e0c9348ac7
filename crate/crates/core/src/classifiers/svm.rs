//! Linear SVM with hinge loss, solved in the dual by coordinate descent.
//!
//! The primal problem is
//!
//! ```text
//! min_w  1/2 |w|^2 + sum_i C_i max(0, 1 - y_i w.x_i)
//! ```
//!
//! where every `x_i` carries an extra constant-1 feature so the bias is part
//! of `w` (and regularized with it). The dual is a box-constrained concave
//! quadratic in `alpha`, `0 <= alpha_i <= C_i`, with `w = sum_i alpha_i y_i x_i`.
//! Each coordinate step maximizes it exactly along one `alpha_i` and updates
//! `w` incrementally.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::require_both_classes;
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::seed;
use crate::textproc::{FeatureMatrix, SparseVector};

/// Solver and loss settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    /// Regularization trade-off.
    pub c: f64,
    /// Scale each class's cost by `n / (2 * n_class)`.
    pub balanced: bool,
    /// Stop once no coordinate's projected gradient exceeds this.
    pub tol: f64,
    pub max_epochs: usize,
    /// Seeds the per-epoch visiting order.
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            balanced: true,
            tol: 1e-4,
            max_epochs: 1000,
            seed: 0,
        }
    }
}

impl SvmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!(
                "C must be positive, got {}",
                self.c
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_epochs == 0 {
            return Err(Error::InvalidParameter(
                "max_epochs must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Fitted weights; the last entry is the bias.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SvmRepr", into = "SvmRepr")]
pub struct SvmModel {
    weights: Vec<f64>,
    c: f64,
    class_weight: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct SvmRepr {
    weights: Vec<f64>,
    c: f64,
    class_weight: [f64; 2],
}

impl TryFrom<SvmRepr> for SvmModel {
    type Error = Error;

    fn try_from(r: SvmRepr) -> Result<Self> {
        if r.weights.is_empty() {
            return Err(Error::InvalidModel(
                "svm weights must include the bias".into(),
            ));
        }
        Ok(Self {
            weights: r.weights,
            c: r.c,
            class_weight: r.class_weight,
        })
    }
}

impl From<SvmModel> for SvmRepr {
    fn from(m: SvmModel) -> Self {
        Self {
            weights: m.weights,
            c: m.c,
            class_weight: m.class_weight,
        }
    }
}

impl SvmModel {
    /// Builds a model from weights over `n_features + 1` augmented columns.
    pub fn from_weights(weights: Vec<f64>, c: f64, class_weight: [f64; 2]) -> Result<Self> {
        SvmRepr {
            weights,
            c,
            class_weight,
        }
        .try_into()
    }

    /// Augmented weight vector; the last entry multiplies the constant feature.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.weights[self.weights.len() - 1]
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn class_weight(&self) -> [f64; 2] {
        self.class_weight
    }

    pub fn n_features(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn decision_value(&self, x: &SparseVector) -> f64 {
        augmented_dot(x, &self.weights)
    }

    /// Label 1 iff the decision value is strictly positive.
    pub fn predict(&self, x: &SparseVector) -> (Label, f64) {
        let d = self.decision_value(x);
        (Label::from_bool(d > 0.0), d)
    }
}

/// Per-pass record of a dual solve.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolverTrace {
    /// Passes performed.
    pub epochs: usize,
    /// Dual objective at the start and after every pass.
    pub dual_objective: Vec<f64>,
    /// Largest projected-gradient magnitude at the returned solution.
    pub max_violation: f64,
    pub converged: bool,
}

/// Output of [`solve_dual`].
#[derive(Clone, Debug, PartialEq)]
pub struct DualSolution {
    pub weights: Vec<f64>,
    pub alpha: Vec<f64>,
    pub trace: SolverTrace,
}

/// `n / (2 * n_c)` for each class.
pub fn balanced_class_weights(labels: &[Label]) -> Result<[f64; 2]> {
    let counts = require_both_classes(labels)?;
    let n = labels.len() as f64;
    Ok(counts.map(|c| n / (2.0 * c as f64)))
}

/// Fits with `C_i = C * class_weight(y_i)`.
pub fn svm_fit(x: &FeatureMatrix, labels: &[Label], params: &SvmParams) -> Result<SvmModel> {
    svm_fit_traced(x, labels, params).map(|(model, _)| model)
}

/// [`svm_fit`], also returning the solver trace.
pub fn svm_fit_traced(
    x: &FeatureMatrix,
    labels: &[Label],
    params: &SvmParams,
) -> Result<(SvmModel, SolverTrace)> {
    params.validate()?;
    if x.n_rows() != labels.len() {
        return Err(Error::LengthMismatch(labels.len(), x.n_rows()));
    }
    let class_weight = if params.balanced {
        balanced_class_weights(labels)?
    } else {
        require_both_classes(labels)?;
        [1.0, 1.0]
    };
    let costs: Vec<f64> = labels
        .iter()
        .map(|l| params.c * class_weight[l.index()])
        .collect();
    let solution = solve_dual(
        x,
        labels,
        &costs,
        params.tol,
        params.max_epochs,
        params.seed,
    )?;
    let model = SvmModel {
        weights: solution.weights,
        c: params.c,
        class_weight,
    };
    Ok((model, solution.trace))
}

/// Dual coordinate descent with per-example upper bounds `costs[i]`.
///
/// Each pass visits the examples in a fresh seeded random order. For example
/// `i` with gradient `G = y_i w.x_i - 1`, `alpha_i` moves to
/// `clamp(alpha_i - G / |x_i|^2, 0, costs[i])`. The solve stops when a pass
/// sees no projected gradient of magnitude `>= tol` and a read-only check at
/// the final `w` confirms it, or after `max_epochs` passes.
pub fn solve_dual(
    x: &FeatureMatrix,
    labels: &[Label],
    costs: &[f64],
    tol: f64,
    max_epochs: usize,
    seed: u64,
) -> Result<DualSolution> {
    let n = x.n_rows();
    if labels.len() != n {
        return Err(Error::LengthMismatch(labels.len(), n));
    }
    if costs.len() != n {
        return Err(Error::LengthMismatch(costs.len(), n));
    }
    if n == 0 {
        return Err(Error::Empty);
    }
    if let Some(&c) = costs.iter().find(|&&c| !(c > 0.0 && c.is_finite())) {
        return Err(Error::InvalidParameter(alloc::format!(
            "example cost must be positive, got {c}"
        )));
    }
    if let Some(i) = x
        .rows()
        .iter()
        .position(|r| r.iter().any(|(_, v)| !v.is_finite()))
    {
        return Err(Error::NonFinite(i));
    }

    let dim = x.n_features() + 1;
    let mut w = alloc::vec![0.0; dim];
    let mut alpha = alloc::vec![0.0; n];
    let q_diag: Vec<f64> = x.rows().iter().map(|r| r.squared_norm() + 1.0).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = seed::rng(seed);
    let mut trace = SolverTrace {
        dual_objective: alloc::vec![0.0],
        ..SolverTrace::default()
    };

    for epoch in 1..=max_epochs {
        order.shuffle(&mut rng);
        let mut max_violation: f64 = 0.0;
        for &i in &order {
            let row = x.row(i);
            let y = labels[i].sign();
            let g = y * augmented_dot(row, &w) - 1.0;
            let pg = projected(g, alpha[i], costs[i]);
            max_violation = max_violation.max(pg.abs());
            if pg != 0.0 {
                let old = alpha[i];
                alpha[i] = (old - g / q_diag[i]).clamp(0.0, costs[i]);
                let step = (alpha[i] - old) * y;
                for (j, v) in row.iter() {
                    w[j] += step * v;
                }
                w[dim - 1] += step;
            }
        }
        trace.epochs = epoch;
        trace.dual_objective.push(dual_objective(&alpha, &w));
        if max_violation < tol {
            let check = max_abs(&projected_gradient_violations(x, labels, costs, &alpha, &w));
            trace.max_violation = check;
            if check < tol {
                trace.converged = true;
                break;
            }
        }
    }
    if !trace.converged {
        trace.max_violation = max_abs(&projected_gradient_violations(x, labels, costs, &alpha, &w));
    }
    Ok(DualSolution {
        weights: w,
        alpha,
        trace,
    })
}

/// `sum(alpha) - 1/2 |w|^2`.
pub fn dual_objective(alpha: &[f64], weights: &[f64]) -> f64 {
    alpha.iter().sum::<f64>() - 0.5 * weights.iter().map(|w| w * w).sum::<f64>()
}

/// Projected gradient of the dual (as a minimization) for every example.
pub fn projected_gradient_violations(
    x: &FeatureMatrix,
    labels: &[Label],
    costs: &[f64],
    alpha: &[f64],
    weights: &[f64],
) -> Vec<f64> {
    x.rows()
        .iter()
        .zip(labels)
        .zip(costs.iter().zip(alpha))
        .map(|((row, label), (&cost, &a))| {
            let g = label.sign() * augmented_dot(row, weights) - 1.0;
            projected(g, a, cost)
        })
        .collect()
}

fn projected(g: f64, alpha: f64, upper: f64) -> f64 {
    if alpha <= 0.0 {
        g.min(0.0)
    } else if alpha >= upper {
        g.max(0.0)
    } else {
        g
    }
}

fn augmented_dot(x: &SparseVector, weights: &[f64]) -> f64 {
    let bias = weights.len() - 1;
    x.dot(&weights[..bias]) + weights[bias]
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}
