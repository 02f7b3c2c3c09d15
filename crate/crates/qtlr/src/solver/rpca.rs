//! TRPCA-NC: robust principal component analysis in the QT-product domain,
//! splitting the data into a low-QT-rank part and a sparse part by ADMM.

use super::{AdmmSchedule, IterationRecord, KktResiduals, SolverReport, StopReason};
use crate::error::{QtError, Result};
use crate::surrogate::{qt_prox_factors, shrink, ProxConfig, ProxFactors, Surrogate};
use crate::tensor::QTensor;
use crate::transform::TransformSet;

/// A robust PCA instance: the corrupted tensor `X = Q + S`, the sparsity
/// balance `lambda`, the rank surrogate, and the transform set defining the
/// QT domain. A reference low-rank tensor, when given, adds a PSNR column to
/// the trace.
#[derive(Debug, Clone)]
pub struct RpcaProblem {
    pub data: QTensor,
    pub lambda: f64,
    pub surrogate: Surrogate,
    pub transform: TransformSet,
    pub prox_cfg: ProxConfig,
    pub reference: Option<QTensor>,
}

impl RpcaProblem {
    pub fn new(data: QTensor, lambda: f64, surrogate: Surrogate, transform: TransformSet) -> Self {
        Self {
            data,
            lambda,
            surrogate,
            transform,
            prox_cfg: ProxConfig::default(),
            reference: None,
        }
    }

    /// The default balance `1 / sqrt(max(H, W) * T)` for an `H x W x T`
    /// tensor (trailing extents multiplied together for higher orders).
    pub fn auto_lambda(shape: &[usize]) -> f64 {
        let hw = shape[0].max(shape[1]);
        let t: usize = shape[2..].iter().product::<usize>().max(1);
        1.0 / ((hw * t) as f64).sqrt()
    }

    fn validate(&self) -> Result<()> {
        if self.lambda <= 0.0 {
            return Err(QtError::InvalidProblem(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if self.data.order() < 3 {
            return Err(QtError::InvalidProblem(format!(
                "rpca needs order >= 3, got {:?}",
                self.data.shape()
            )));
        }
        if let Some(r) = &self.reference {
            if r.shape() != self.data.shape() {
                return Err(QtError::InvalidProblem(
                    "reference shape does not match data".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Robust PCA via non-convex QT-rank: returns the low-rank part `Q`, the
/// sparse part `S`, and the convergence trace.
pub fn trpca_nc(
    prob: &RpcaProblem,
    sched: &AdmmSchedule,
) -> Result<(QTensor, QTensor, SolverReport)> {
    prob.validate()?;
    sched.validate()?;
    let x = &prob.data;
    let shape = x.shape().to_vec();
    let mut q = QTensor::zeros(&shape);
    let mut s = QTensor::zeros(&shape);
    let mut y = QTensor::zeros(&shape);
    let mut beta = sched.beta0;
    let mut last_state: Option<(Vec<ProxFactors>, f64, f64)> = None;
    let mut trace = Vec::new();
    let mut stop_reason = StopReason::MaxIterations;

    for iter in 1..=sched.max_iters {
        let q_old = q.clone();
        let s_old = s.clone();

        let target_q = x.sub(&s)?.add(&y.scale_real(1.0 / beta))?;
        let (q_new, phi_q, factors) = qt_prox_factors(
            &target_q,
            1.0 / beta,
            &prob.surrogate,
            &prob.transform,
            &prob.prox_cfg,
        )
        .map_err(|e| QtError::NumericalFailure(format!("iteration {iter}: {e}")))?;
        q = q_new;

        let target_s = x.sub(&q)?.add(&y.scale_real(1.0 / beta))?;
        s = shrink(&target_s, prob.lambda / beta);

        let gap = x.sub(&q)?.sub(&s)?;
        let delta_y = gap.scale_real(beta);
        y = y.add(&delta_y)?;
        last_state = Some((factors, beta, s.sub(&s_old)?.fro_norm()));

        let feas = gap.fro_norm();
        let lagrangian = phi_q
            + prob.lambda * s.l1_norm()
            + y.inner(&gap).map(|v| v.w).unwrap_or(0.0)
            + 0.5 * beta * feas * feas;
        let psnr_db = prob
            .reference
            .as_ref()
            .map(|r| crate::metrics::psnr(r, &q))
            .transpose()?;
        beta = sched.next_beta(beta);
        trace.push(IterationRecord {
            iter,
            lagrangian,
            primal_residual: feas,
            max_multiplier_change: delta_y.fro_norm(),
            max_multiplier_norm: y.fro_norm(),
            beta,
            psnr_db,
        });

        // While both parts are still identically zero the iteration has not
        // actually started (thresholds above the data scale); don't let the
        // successive-change test fire on that plateau.
        let stalled_at_zero =
            q.fro_norm() == 0.0 && s.fro_norm() == 0.0 && x.fro_norm() > 0.0;
        let dq = q.sub(&q_old)?.fro_norm();
        let ds = s.sub(&s_old)?.fro_norm();
        if !stalled_at_zero && dq * dq < sched.tol && ds * ds < sched.tol {
            stop_reason = StopReason::Converged;
            break;
        }
    }

    let kkt = kkt_residuals(prob, &q, &s, &last_state)?;
    Ok((
        q,
        s,
        SolverReport {
            iterations: trace,
            stop_reason,
            kkt,
        },
    ))
}

/// KKT residuals of an RPCA state. `r_feas = ||X - Q - S||_F`; `r_proj` is
/// zero (no projection constraint in this model); `r_grad` bounds the
/// distance of the multiplier from the subgradient set of the QT-phi norm at
/// `Q`: the per-slice prox-stationarity residuals (on the shared
/// decomposition of the final Q-subproblem) plus `beta ||S - S_old||_F`,
/// which accounts for the S-update happening after the Q-update.
fn kkt_residuals(
    prob: &RpcaProblem,
    q: &QTensor,
    s: &QTensor,
    last_state: &Option<(Vec<ProxFactors>, f64, f64)>,
) -> Result<KktResiduals> {
    let gap = prob.data.sub(q)?.sub(s)?;
    let r_grad = match last_state {
        None => f64::INFINITY,
        Some((factors, beta, ds)) => {
            let slice_sq: f64 = factors
                .iter()
                .map(|f| {
                    let r = f.grad_residual(1.0, *beta, &prob.surrogate);
                    r * r
                })
                .sum();
            slice_sq.sqrt() + beta * ds
        }
    };
    Ok(KktResiduals {
        r_feas: gap.fro_norm(),
        r_proj: 0.0,
        r_grad,
    })
}
