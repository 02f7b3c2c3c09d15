//! Non-convex rank surrogates and their proximal operators.
//!
//! The surrogate catalog covers Geman, Laplace, logarithm, weighted nuclear,
//! Schatten-p, and weighted Schatten-p penalties. The scalar Moreau-Yosida
//! operator `argmin_x 1/2 (x - sigma)^2 + lambda phi(x)` is solved by the DC
//! iteration `x <- max(sigma - lambda phi'(x), 0)` started at `sigma`; the
//! fixed point is compared against the boundary candidate `x = 0` so the
//! returned value is the better of the two stationary candidates.

use crate::error::{QtError, Result};
use crate::linalg::{qsvd_thin, ThinQSVD};
use crate::tensor::{QMatrix, QTensor};
use crate::transform::{Direction, TransformSet};
use rayon::prelude::*;

/// Cap for the Schatten derivative at x = 0 (`p x^(p-1)` diverges there).
const SCHATTEN_DERIV_CAP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurrogateKind {
    Geman,
    Laplace,
    Logarithm,
    WeightedNuclear,
    SchattenP,
    WeightedSchattenP,
}

/// A concave non-decreasing penalty `phi_gamma` on the nonnegative reals,
/// applied to singular values. Weighted kinds index their weight vector by
/// descending singular-value rank; missing weights default to 1.
#[derive(Debug, Clone)]
pub struct Surrogate {
    pub kind: SurrogateKind,
    pub gamma: f64,
    pub p: f64,
    pub weights: Option<Vec<f64>>,
}

impl Surrogate {
    pub fn geman(gamma: f64) -> Self {
        assert!(gamma > 0.0);
        Self {
            kind: SurrogateKind::Geman,
            gamma,
            p: 1.0,
            weights: None,
        }
    }

    pub fn laplace(gamma: f64) -> Self {
        assert!(gamma > 0.0);
        Self {
            kind: SurrogateKind::Laplace,
            gamma,
            p: 1.0,
            weights: None,
        }
    }

    pub fn logarithm(gamma: f64) -> Self {
        assert!(gamma > 0.0);
        Self {
            kind: SurrogateKind::Logarithm,
            gamma,
            p: 1.0,
            weights: None,
        }
    }

    pub fn weighted_nuclear(weights: Option<Vec<f64>>) -> Self {
        Self {
            kind: SurrogateKind::WeightedNuclear,
            gamma: 1.0,
            p: 1.0,
            weights,
        }
    }

    pub fn schatten_p(p: f64) -> Self {
        assert!(p > 0.0 && p < 1.0);
        Self {
            kind: SurrogateKind::SchattenP,
            gamma: 1.0,
            p,
            weights: None,
        }
    }

    pub fn weighted_schatten_p(p: f64, weights: Option<Vec<f64>>) -> Self {
        assert!(p > 0.0 && p < 1.0);
        Self {
            kind: SurrogateKind::WeightedSchattenP,
            gamma: 1.0,
            p,
            weights,
        }
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights
            .as_ref()
            .and_then(|w| w.get(i).copied())
            .unwrap_or(1.0)
    }

    /// `phi(x)` at rank index `i`. Errors on negative `x`.
    pub fn value(&self, x: f64, i: usize) -> Result<f64> {
        if x < 0.0 {
            return Err(QtError::DomainError(format!(
                "surrogate evaluated at negative x = {x}"
            )));
        }
        Ok(self.value_nn(x, i))
    }

    /// `phi'(x)` at rank index `i`. Errors on negative `x`.
    pub fn deriv(&self, x: f64, i: usize) -> Result<f64> {
        if x < 0.0 {
            return Err(QtError::DomainError(format!(
                "surrogate derivative at negative x = {x}"
            )));
        }
        Ok(self.deriv_nn(x, i))
    }

    pub(crate) fn value_nn(&self, x: f64, i: usize) -> f64 {
        let g = self.gamma;
        match self.kind {
            SurrogateKind::Geman => (1.0 + g) * x / (x + g),
            SurrogateKind::Laplace => 1.0 - (-x / g).exp(),
            SurrogateKind::Logarithm => (g + x).ln(),
            SurrogateKind::WeightedNuclear => self.weight(i) * x,
            SurrogateKind::SchattenP => x.powf(self.p),
            SurrogateKind::WeightedSchattenP => self.weight(i) * x.powf(self.p),
        }
    }

    pub(crate) fn deriv_nn(&self, x: f64, i: usize) -> f64 {
        let g = self.gamma;
        match self.kind {
            SurrogateKind::Geman => (1.0 + g) * g / ((x + g) * (x + g)),
            SurrogateKind::Laplace => (-x / g).exp() / g,
            SurrogateKind::Logarithm => 1.0 / (g + x),
            SurrogateKind::WeightedNuclear => self.weight(i),
            SurrogateKind::SchattenP => {
                (self.p * x.powf(self.p - 1.0)).min(SCHATTEN_DERIV_CAP)
            }
            SurrogateKind::WeightedSchattenP => {
                (self.weight(i) * self.p * x.powf(self.p - 1.0)).min(SCHATTEN_DERIV_CAP)
            }
        }
    }
}

/// Inner-loop configuration for the DC iteration.
#[derive(Debug, Clone, Copy)]
pub struct ProxConfig {
    pub max_iters: usize,
    /// Absolute tolerance on the change of the iterate.
    pub tol: f64,
}

impl Default for ProxConfig {
    fn default() -> Self {
        Self {
            max_iters: 10,
            tol: 1e-8,
        }
    }
}

fn prox_objective(x: f64, sigma: f64, lambda: f64, s: &Surrogate, i: usize) -> f64 {
    0.5 * (x - sigma) * (x - sigma) + lambda * s.value_nn(x, i)
}

/// Scalar Moreau-Yosida operator via DC iteration. The result lies in
/// `[0, sigma]`.
pub fn scalar_prox(sigma: f64, lambda: f64, s: &Surrogate, cfg: &ProxConfig, i: usize) -> f64 {
    debug_assert!(sigma >= 0.0 && lambda >= 0.0);
    if lambda == 0.0 || sigma == 0.0 {
        return sigma * f64::from(lambda == 0.0 || sigma != 0.0);
    }
    let mut x = sigma;
    for _ in 0..cfg.max_iters {
        let next = (sigma - lambda * s.deriv_nn(x, i)).max(0.0);
        let done = (next - x).abs() < cfg.tol;
        x = next;
        if done || x == 0.0 {
            break;
        }
    }
    // the boundary x = 0 can beat the interior fixed point
    if prox_objective(0.0, sigma, lambda, s, i) < prox_objective(x, sigma, lambda, s, i) {
        0.0
    } else {
        x
    }
}

/// The singular decomposition of a prox input together with the thresholded
/// singular values: enough to assemble the prox output and to evaluate
/// first-order optimality of the subproblem it solved.
#[derive(Debug, Clone)]
pub struct ProxFactors {
    /// Thin QSVD of the prox *input*.
    pub svd: ThinQSVD,
    /// `scalar_prox` of each input singular value.
    pub sigma: Vec<f64>,
}

impl ProxFactors {
    /// The prox output `U diag(sigma*) V^H`.
    pub fn assemble(&self) -> Result<QMatrix> {
        self.svd.reconstruct_with(&self.sigma)
    }

    /// `sum_i phi(sigma*_i)`.
    pub fn phi_total(&self, s: &Surrogate) -> f64 {
        self.sigma
            .iter()
            .enumerate()
            .map(|(i, &x)| s.value_nn(x, i))
            .sum()
    }

    /// Distance of the post-update multiplier `beta (input - output)` from
    /// the subgradient set of `alpha phi` at the output. At positive singular
    /// values this is the smooth-point residual
    /// `|beta (sigma - sigma*) - alpha phi'(sigma*)|`; at zeroed ones the
    /// subgradient is the whole interval `[0, alpha phi'(0)]` per direction,
    /// so only the excess above `alpha phi'(0)` counts.
    pub fn grad_residual(&self, alpha: f64, beta: f64, s: &Surrogate) -> f64 {
        let mut acc = 0.0;
        for (i, (&st, &ss)) in self.svd.s.iter().zip(&self.sigma).enumerate() {
            let f = beta * (st - ss);
            let r = if ss > 0.0 {
                (f - alpha * s.deriv_nn(ss, i)).abs()
            } else {
                (f.abs() - alpha * s.deriv_nn(0.0, i)).max(0.0)
            };
            acc += r * r;
        }
        acc.sqrt()
    }
}

/// Matrix prox `argmin_X 1/2 ||X - Q||_F^2 + lambda ||X||_phi`: thresholds
/// the singular values of `Q` through [`scalar_prox`].
pub fn lrqa_prox(q: &QMatrix, lambda: f64, s: &Surrogate, cfg: &ProxConfig) -> Result<QMatrix> {
    Ok(lrqa_prox_detailed(q, lambda, s, cfg)?.0)
}

/// As [`lrqa_prox`] but also returns the thresholded singular values.
pub fn lrqa_prox_detailed(
    q: &QMatrix,
    lambda: f64,
    s: &Surrogate,
    cfg: &ProxConfig,
) -> Result<(QMatrix, Vec<f64>)> {
    let f = lrqa_prox_factors(q, lambda, s, cfg)?;
    Ok((f.assemble()?, f.sigma))
}

/// As [`lrqa_prox`] but returns the full decomposition of the subproblem.
pub fn lrqa_prox_factors(
    q: &QMatrix,
    lambda: f64,
    s: &Surrogate,
    cfg: &ProxConfig,
) -> Result<ProxFactors> {
    let svd: ThinQSVD = qsvd_thin(q)?;
    let sigma: Vec<f64> = svd
        .s
        .iter()
        .enumerate()
        .map(|(i, &x)| scalar_prox(x, lambda, s, cfg, i))
        .collect();
    Ok(ProxFactors { svd, sigma })
}

/// Tensor prox under the QT-phi norm: per transformed slice, threshold every
/// singular value, then reassemble and inverse-transform. Slices run in
/// parallel.
pub fn qt_prox(
    q: &QTensor,
    lambda: f64,
    s: &Surrogate,
    set: &TransformSet,
    cfg: &ProxConfig,
) -> Result<QTensor> {
    Ok(qt_prox_detailed(q, lambda, s, set, cfg)?.0)
}

/// As [`qt_prox`] but also returns `sum_{i,j} phi(sigma*_j^(i))`, the QT-phi
/// norm of the output evaluated from the thresholded singular values.
pub fn qt_prox_detailed(
    q: &QTensor,
    lambda: f64,
    s: &Surrogate,
    set: &TransformSet,
    cfg: &ProxConfig,
) -> Result<(QTensor, f64)> {
    let (out, phi, _) = qt_prox_factors(q, lambda, s, set, cfg)?;
    Ok((out, phi))
}

/// As [`qt_prox_detailed`] but also returns the per-transformed-slice prox
/// decompositions.
pub fn qt_prox_factors(
    q: &QTensor,
    lambda: f64,
    s: &Surrogate,
    set: &TransformSet,
    cfg: &ProxConfig,
) -> Result<(QTensor, f64, Vec<ProxFactors>)> {
    if q.order() < 3 {
        return Err(QtError::ShapeMismatch(format!(
            "qt_prox needs order >= 3, got {:?}",
            q.shape()
        )));
    }
    let qh = set.apply(q, Direction::Forward)?;
    let n_slices = crate::qt::slice_count(q);
    let slices: Vec<ProxFactors> = (0..n_slices)
        .into_par_iter()
        .map(|sl| {
            lrqa_prox_factors(&crate::qt::get_slice(&qh, sl), lambda, s, cfg)
                .map_err(|e| QtError::NumericalFailure(format!("slice {sl}: {e}")))
        })
        .collect::<Result<_>>()?;
    let mut out = QTensor::zeros(q.shape());
    let mut phi_total = 0.0;
    for (sl, f) in slices.iter().enumerate() {
        crate::qt::set_slice(&mut out, sl, &f.assemble()?);
        phi_total += f.phi_total(s);
    }
    Ok((set.apply(&out, Direction::Inverse)?, phi_total, slices))
}

/// Quaternion soft threshold: per entry `sign(q) * max(|q| - t, 0)`.
pub fn shrink(q: &QTensor, t: f64) -> QTensor {
    debug_assert!(t >= 0.0);
    q.map(|entry| {
        let m = entry.modulus();
        if m <= t {
            crate::quat::Quaternion::ZERO
        } else {
            entry.scale((m - t) / m)
        }
    })
}
