//! ADMM solvers for low-rank quaternion tensor recovery: completion under
//! non-convex Tucker or TT rank surrogates, and robust principal component
//! analysis in the QT-product domain, plus convergence diagnostics.

mod completion;
mod rpca;

pub use completion::{lrqtc_nctr, lrqtc_ncttr, CompletionProblem, RankFlavor};
pub use rpca::{trpca_nc, RpcaProblem};

use crate::error::{QtError, Result};
use serde::Serialize;

/// The outer-loop penalty schedule: `beta <- min(beta_max, rho * beta)` each
/// iteration, stopping when the squared Frobenius change of the primal
/// variables drops below `tol` or after `max_iters`.
#[derive(Debug, Clone, Serialize)]
pub struct AdmmSchedule {
    pub beta0: f64,
    pub rho: f64,
    pub beta_max: f64,
    pub tol: f64,
    pub max_iters: usize,
    /// Use the printed P-update variant that omits the per-mode beta weights
    /// in the numerator (kept for comparison; the weighted form is the
    /// stationarity solution of the augmented Lagrangian).
    pub paper_literal_p_update: bool,
}

impl AdmmSchedule {
    /// Defaults for completion runs (25 outer iterations).
    pub fn completion_default() -> Self {
        Self {
            beta0: 1e-2,
            rho: 1.1,
            beta_max: 1e4,
            tol: 1e-6,
            max_iters: 25,
            paper_literal_p_update: false,
        }
    }

    /// Defaults for RPCA runs (100 outer iterations).
    pub fn rpca_default() -> Self {
        Self {
            beta0: 1e-2,
            rho: 1.1,
            beta_max: 1e4,
            tol: 1e-6,
            max_iters: 100,
            paper_literal_p_update: false,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.beta0 <= 0.0 || self.rho <= 1.0 || self.beta0 > self.beta_max {
            return Err(QtError::InvalidProblem(format!(
                "schedule needs 0 < beta0 <= beta_max and rho > 1, got beta0={}, rho={}, beta_max={}",
                self.beta0, self.rho, self.beta_max
            )));
        }
        if self.max_iters == 0 {
            return Err(QtError::InvalidProblem("max_iters must be positive".into()));
        }
        Ok(())
    }

    /// The capped geometric update `min(beta_max, rho * beta)`.
    pub fn next_beta(&self, beta: f64) -> f64 {
        (self.rho * beta).min(self.beta_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    MaxIterations,
}

/// One outer-iteration record.
#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    pub iter: usize,
    /// Augmented Lagrangian value at the end of the iteration.
    pub lagrangian: f64,
    /// `max_k ||P_[k] - Q_k||_F` (completion) or `||X - Q - S||_F` (rpca).
    pub primal_residual: f64,
    /// Largest Frobenius-norm change of any multiplier this iteration.
    pub max_multiplier_change: f64,
    /// Largest multiplier Frobenius norm after this iteration (boundedness
    /// diagnostic).
    pub max_multiplier_norm: f64,
    pub beta: f64,
    /// PSNR against the reference tensor, when one was supplied.
    pub psnr_db: Option<f64>,
}

/// KKT residual triple of the convergence diagnostics.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KktResiduals {
    /// `max_k ||P_[k] - Q_k||_F`.
    pub r_feas: f64,
    /// `||P_Omega - O_Omega||_F`; zero by construction of the P-update.
    pub r_proj: f64,
    /// `max_k ||F_k - U diag(alpha_k phi'(sigma_i)) V^H||_F` over the QSVD of
    /// each `Q_k`.
    pub r_grad: f64,
}

/// Full convergence trace plus final diagnostics of one solver run.
#[derive(Debug, Clone, Serialize)]
pub struct SolverReport {
    pub iterations: Vec<IterationRecord>,
    pub stop_reason: StopReason,
    pub kkt: KktResiduals,
}

impl SolverReport {
    pub fn iterations_used(&self) -> usize {
        self.iterations.len()
    }

    /// One row per iteration, fixed header and `{:.9e}` float formatting so
    /// identical runs serialize byte-identically.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "iter,lagrangian,primal_residual,max_multiplier_change,max_multiplier_norm,beta,psnr_db\n",
        );
        for r in &self.iterations {
            let psnr = match r.psnr_db {
                Some(v) if v.is_finite() => format!("{v:.9e}"),
                Some(_) => "inf".into(),
                None => String::new(),
            };
            out.push_str(&format!(
                "{},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{}\n",
                r.iter,
                r.lagrangian,
                r.primal_residual,
                r.max_multiplier_change,
                r.max_multiplier_norm,
                r.beta,
                psnr
            ));
        }
        out
    }

    /// JSON summary: configuration echo, iterations used, stop reason, and
    /// the final KKT residual triple.
    pub fn to_json_summary(&self, sched: &AdmmSchedule) -> String {
        #[derive(Serialize)]
        struct Summary<'a> {
            config: &'a AdmmSchedule,
            iterations: usize,
            stop_reason: StopReason,
            kkt_residuals: KktResiduals,
        }
        serde_json::to_string_pretty(&Summary {
            config: sched,
            iterations: self.iterations_used(),
            stop_reason: self.stop_reason,
            kkt_residuals: self.kkt,
        })
        .expect("report serialization")
    }
}

/// Closed-form check that the multiplier-boundedness series
/// `sum_tau (beta^(tau) + beta^(tau-1)) / (2 (beta^(tau-1))^2)` converges
/// under pure geometric growth (no `beta_max` cap). Returns the limit
/// `(rho^2 + rho) / (2 beta0 (rho - 1))`; the series diverges for `rho <= 1`
/// (returned as infinity).
pub fn beta_schedule_check(sched: &AdmmSchedule) -> f64 {
    if sched.rho <= 1.0 {
        return f64::INFINITY;
    }
    (sched.rho * sched.rho + sched.rho) / (2.0 * sched.beta0 * (sched.rho - 1.0))
}
