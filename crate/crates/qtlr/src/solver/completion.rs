//! ADMM completion solvers: LRQTC-NCTR (non-convex Tucker rank) and
//! LRQTC-NCTTR (non-convex TT rank). Both share one skeleton and differ only
//! in the unfolding family and the number of mode subproblems.

use super::{AdmmSchedule, IterationRecord, KktResiduals, SolverReport, StopReason};
use crate::error::{QtError, Result};
use crate::surrogate::{lrqa_prox_factors, ProxConfig, ProxFactors, Surrogate};
use crate::tensor::{MaskTensor, QMatrix, QTensor};
use crate::tensor_ops::{fold, tt_fold, tt_unfold, unfold};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankFlavor {
    Tucker,
    Tt,
}

/// A tensor completion instance: the observed tensor (anything goes at the
/// missing entries — they are zeroed on entry), its observation mask, the
/// per-mode weights `alpha` (length N for Tucker, N-1 for TT, summing to 1),
/// and the rank surrogate. A reference tensor, when given, adds a PSNR column
/// to the convergence trace.
#[derive(Debug, Clone)]
pub struct CompletionProblem {
    pub observed: QTensor,
    pub mask: MaskTensor,
    pub alpha: Vec<f64>,
    pub surrogate: Surrogate,
    pub prox_cfg: ProxConfig,
    pub flavor: RankFlavor,
    pub reference: Option<QTensor>,
}

impl CompletionProblem {
    /// Uniform-alpha problem for the given flavor.
    pub fn new(
        observed: QTensor,
        mask: MaskTensor,
        surrogate: Surrogate,
        flavor: RankFlavor,
    ) -> Self {
        let n = observed.order();
        let modes = match flavor {
            RankFlavor::Tucker => n,
            RankFlavor::Tt => n.saturating_sub(1),
        };
        let alpha = vec![1.0 / modes.max(1) as f64; modes.max(1)];
        Self {
            observed,
            mask,
            alpha,
            surrogate,
            prox_cfg: ProxConfig::default(),
            flavor,
            reference: None,
        }
    }

    fn mode_count(&self) -> usize {
        match self.flavor {
            RankFlavor::Tucker => self.observed.order(),
            RankFlavor::Tt => self.observed.order() - 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.mask.shape() != self.observed.shape() {
            return Err(QtError::InvalidProblem(format!(
                "mask shape {:?} does not match tensor shape {:?}",
                self.mask.shape(),
                self.observed.shape()
            )));
        }
        if self.mask.observed_count() == 0 {
            return Err(QtError::InvalidProblem("no observed entries".into()));
        }
        if self.observed.order() < 2 {
            return Err(QtError::InvalidProblem(format!(
                "completion needs order >= 2, got {:?}",
                self.observed.shape()
            )));
        }
        let n_modes = self.mode_count();
        if self.alpha.len() != n_modes {
            return Err(QtError::InvalidProblem(format!(
                "alpha has length {}, expected {n_modes}",
                self.alpha.len()
            )));
        }
        if self.alpha.iter().any(|&a| a < 0.0)
            || (self.alpha.iter().sum::<f64>() - 1.0).abs() > 1e-12
        {
            return Err(QtError::InvalidProblem(format!(
                "alpha must be nonnegative and sum to 1, got {:?}",
                self.alpha
            )));
        }
        if let Some(r) = &self.reference {
            if r.shape() != self.observed.shape() {
                return Err(QtError::InvalidProblem(
                    "reference shape does not match observed".into(),
                ));
            }
        }
        Ok(())
    }

    fn unfold_mode(&self, t: &QTensor, k: usize) -> Result<QMatrix> {
        match self.flavor {
            RankFlavor::Tucker => unfold(t, k + 1),
            RankFlavor::Tt => tt_unfold(t, k + 1),
        }
    }

    fn fold_mode(&self, m: &QMatrix, k: usize, shape: &[usize]) -> Result<QTensor> {
        match self.flavor {
            RankFlavor::Tucker => fold(m, k + 1, shape),
            RankFlavor::Tt => tt_fold(m, k + 1, shape),
        }
    }
}

/// Zero out the unobserved entries of `t`.
fn masked(t: &QTensor, mask: &MaskTensor) -> QTensor {
    let mut out = t.clone();
    for (i, &obs) in mask.data.iter().enumerate() {
        if !obs {
            out.set_linear(i, crate::quat::Quaternion::ZERO);
        }
    }
    out
}

fn re_inner(a: &QMatrix, b: &QMatrix) -> f64 {
    a.as_tensor().inner(b.as_tensor()).map(|q| q.w).unwrap_or(0.0)
}

/// Completion via non-convex Tucker rank (mode-k unfoldings, N subproblems).
pub fn lrqtc_nctr(
    prob: &CompletionProblem,
    sched: &AdmmSchedule,
) -> Result<(QTensor, SolverReport)> {
    if prob.flavor != RankFlavor::Tucker {
        return Err(QtError::InvalidProblem(
            "lrqtc_nctr expects the tucker rank flavor".into(),
        ));
    }
    solve(prob, sched)
}

/// Completion via non-convex TT rank (tt unfoldings, N-1 subproblems).
pub fn lrqtc_ncttr(
    prob: &CompletionProblem,
    sched: &AdmmSchedule,
) -> Result<(QTensor, SolverReport)> {
    if prob.flavor != RankFlavor::Tt {
        return Err(QtError::InvalidProblem(
            "lrqtc_ncttr expects the tt rank flavor".into(),
        ));
    }
    solve(prob, sched)
}

fn solve(prob: &CompletionProblem, sched: &AdmmSchedule) -> Result<(QTensor, SolverReport)> {
    prob.validate()?;
    sched.validate()?;
    let shape = prob.observed.shape().to_vec();
    let n_modes = prob.mode_count();
    let observed = masked(&prob.observed, &prob.mask);

    let mut p = observed.clone();
    let mut qs: Vec<QMatrix> = (0..n_modes)
        .map(|k| prob.unfold_mode(&p, k))
        .collect::<Result<_>>()?;
    let mut fs: Vec<QMatrix> = qs
        .iter()
        .map(|q| QMatrix::zeros(q.rows(), q.cols()))
        .collect();
    let mut betas = vec![sched.beta0; n_modes];
    let mut last_factors: Vec<Option<(ProxFactors, f64)>> = vec![None; n_modes];
    let mut trace = Vec::new();
    let mut stop_reason = StopReason::MaxIterations;

    for iter in 1..=sched.max_iters {
        let p_old = p.clone();

        // P-update: fold the shifted mode variables back and average, then
        // pin the observed entries bit-exactly.
        let beta_sum: f64 = betas.iter().sum();
        let mut acc = QTensor::zeros(&shape);
        for k in 0..n_modes {
            let shifted = qs[k].sub(&fs[k].scale_real(1.0 / betas[k]))?;
            let weight = if sched.paper_literal_p_update {
                1.0
            } else {
                betas[k]
            };
            acc = acc.add(&prob.fold_mode(&shifted, k, &shape)?.scale_real(weight))?;
        }
        p = acc.scale_real(1.0 / beta_sum);
        for (i, &obs) in prob.mask.data.iter().enumerate() {
            if obs {
                p.set_linear(i, observed.get_linear(i));
            }
        }

        // Q-updates: the mode subproblems are independent.
        let updates: Vec<ProxFactors> = (0..n_modes)
            .into_par_iter()
            .map(|k| {
                let target = prob
                    .unfold_mode(&p, k)?
                    .add(&fs[k].scale_real(1.0 / betas[k]))?;
                lrqa_prox_factors(
                    &target,
                    prob.alpha[k] / betas[k],
                    &prob.surrogate,
                    &prob.prox_cfg,
                )
                .map_err(|e| {
                    QtError::NumericalFailure(format!("iteration {iter}, mode {}: {e}", k + 1))
                })
            })
            .collect::<Result<_>>()?;

        // Multiplier updates and diagnostics.
        let mut primal = 0.0f64;
        let mut max_dual = 0.0f64;
        let mut max_f_norm = 0.0f64;
        let mut lagrangian = 0.0f64;
        for (k, factors) in updates.into_iter().enumerate() {
            let q_new = factors.assemble().map_err(|e| {
                QtError::NumericalFailure(format!("iteration {iter}, mode {}: {e}", k + 1))
            })?;
            let p_k = prob.unfold_mode(&p, k)?;
            let gap = q_new.sub(&p_k)?;
            let delta_f = gap.scale_real(betas[k]);
            fs[k] = fs[k].sub(&delta_f)?;
            primal = primal.max(gap.fro_norm());
            max_dual = max_dual.max(delta_f.fro_norm());
            max_f_norm = max_f_norm.max(fs[k].fro_norm());
            let gap_sq = gap.fro_norm() * gap.fro_norm();
            lagrangian += prob.alpha[k] * factors.phi_total(&prob.surrogate)
                - re_inner(&fs[k], &gap)
                + 0.5 * betas[k] * gap_sq;
            qs[k] = q_new;
            last_factors[k] = Some((factors, betas[k]));
        }
        for b in &mut betas {
            *b = sched.next_beta(*b);
        }

        let psnr_db = prob
            .reference
            .as_ref()
            .map(|r| crate::metrics::psnr(r, &p))
            .transpose()?;
        trace.push(IterationRecord {
            iter,
            lagrangian,
            primal_residual: primal,
            max_multiplier_change: max_dual,
            max_multiplier_norm: max_f_norm,
            beta: betas[0],
            psnr_db,
        });

        // At iter 1 the Q variables still hold their initialization, so P
        // cannot yet have moved; only later iterations can certify
        // convergence. A fully observed problem is the exception: P is
        // pinned everywhere and genuinely final.
        let change = p.sub(&p_old)?.fro_norm();
        let fully_observed = prob.mask.observed_count() == prob.mask.data.len();
        if (iter > 1 || fully_observed) && change * change < sched.tol {
            stop_reason = StopReason::Converged;
            break;
        }
    }

    let kkt = kkt_residuals(prob, &observed, &p, &qs, &last_factors)?;
    Ok((
        p,
        SolverReport {
            iterations: trace,
            stop_reason,
            kkt,
        },
    ))
}

/// KKT residuals of a completion state: mode feasibility, observed-entry
/// projection, and the distance of each multiplier from the subgradient set
/// of the weighted surrogate at `Q_k`. After every multiplier update
/// `F_k = beta_k (T_k - Q_k)` exactly, where `T_k` was the prox input, so the
/// distance is evaluated on the singular values of that shared decomposition
/// (smooth-point residual at positive singular values, interval distance at
/// zeroed ones).
fn kkt_residuals(
    prob: &CompletionProblem,
    observed: &QTensor,
    p: &QTensor,
    qs: &[QMatrix],
    last_factors: &[Option<(ProxFactors, f64)>],
) -> Result<KktResiduals> {
    let mut r_feas = 0.0f64;
    let mut r_grad = 0.0f64;
    for (k, q) in qs.iter().enumerate() {
        let p_k = prob.unfold_mode(p, k)?;
        r_feas = r_feas.max(q.sub(&p_k)?.fro_norm());
        if let Some((factors, beta)) = &last_factors[k] {
            r_grad = r_grad.max(factors.grad_residual(prob.alpha[k], *beta, &prob.surrogate));
        }
    }
    let mut r_proj_sq = 0.0f64;
    for (i, &obs) in prob.mask.data.iter().enumerate() {
        if obs {
            let d = p.get_linear(i) - observed.get_linear(i);
            r_proj_sq += d.modulus_sq();
        }
    }
    Ok(KktResiduals {
        r_feas,
        r_proj: r_proj_sq.sqrt(),
        r_grad,
    })
}
