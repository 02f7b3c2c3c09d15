//! End-to-end acceptance suite. Each test prints one `criterion N ... PASS`
//! line (run with `--nocapture` to see them) and fails loudly otherwise.

use qtlr::io::synth::{add_gross_corruption, make_mask, synthetic_qt_low_rank, synthetic_tucker};
use qtlr::linalg::{complex_adjoint, qmatmul, qsvd, qsvd_thin, unitarity_defect};
use qtlr::metrics::psnr;
use qtlr::quat::Quaternion;
use qtlr::solver::{
    lrqtc_nctr, trpca_nc, AdmmSchedule, CompletionProblem, RankFlavor, RpcaProblem,
};
use qtlr::surrogate::{lrqa_prox, scalar_prox, ProxConfig, Surrogate};
use qtlr::tensor::{MaskTensor, QMatrix, QTensor};
use qtlr::tensor_ops::{fold, ket_augment, ket_inverse, tt_fold, tt_unfold, unfold};
use qtlr::transform::{Direction, TransformSet};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn verdict(n: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {n} ({name}): {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} ({name}) failed: {detail}");
}

fn random_qmatrix(m: usize, n: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    QMatrix::from_fn(m, n, |_, _| {
        Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    })
}

fn random_qtensor(shape: &[usize], rng: &mut ChaCha8Rng) -> QTensor {
    let mut t = QTensor::zeros(shape);
    for i in 0..t.len() {
        t.set_linear(
            i,
            Quaternion::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ),
        );
    }
    t
}

#[test]
fn criterion_1_qsvd_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_recon = 0.0f64;
    let mut worst_unitarity = 0.0f64;
    let mut worst_pairing = 0.0f64;
    for _ in 0..200 {
        let m = rng.gen_range(1..=32);
        let n = rng.gen_range(1..=24);
        let q = random_qmatrix(m, n, &mut rng);
        let svd = qsvd_thin(&q).unwrap();
        let rel = svd.reconstruct().unwrap().sub(&q).unwrap().fro_norm() / q.fro_norm();
        worst_recon = worst_recon.max(rel);
        worst_unitarity = worst_unitarity
            .max(unitarity_defect(&svd.u).unwrap())
            .max(unitarity_defect(&svd.v).unwrap());
        // The complex adjoint's singular values come in equal pairs whose
        // shared value is the quaternion singular value.
        let mut adj: Vec<f64> = complex_adjoint(&q)
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        adj.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let scale = 1.0 + svd.s.first().copied().unwrap_or(0.0);
        for (i, &s) in svd.s.iter().enumerate() {
            worst_pairing = worst_pairing
                .max((adj[2 * i] - adj[2 * i + 1]).abs() / scale)
                .max((adj[2 * i] - s).abs() / scale);
        }
    }
    verdict(
        1,
        "qsvd correctness",
        worst_recon <= 1e-10 && worst_unitarity <= 1e-10 && worst_pairing <= 1e-9,
        &format!(
            "200 matrices: recon {worst_recon:.2e}, unitarity {worst_unitarity:.2e}, adjoint pairing {worst_pairing:.2e}"
        ),
    );
}

#[test]
fn criterion_2_qtsvd_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for shape in [vec![8usize, 6, 5], vec![6, 5, 4, 3]] {
        let t = random_qtensor(&shape, &mut rng);
        for set in [
            TransformSet::identity(&shape),
            TransformSet::dct(&shape),
            TransformSet::random_orthogonal(&shape, 7),
        ] {
            let svd = qtlr::qt::qt_svd(&t, &set).unwrap();
            let rel = svd
                .reconstruct(&set)
                .unwrap()
                .sub(&t)
                .unwrap()
                .fro_norm()
                / t.fro_norm();
            worst = worst.max(rel);
        }
    }
    // Trailing extents of 1: the QT-SVD of an m x n x 1 tensor is the QSVD.
    let t = random_qtensor(&[7, 5, 1], &mut rng);
    let set = TransformSet::dct(&[7, 5, 1]);
    let qt = qtlr::qt::qt_svd(&t, &set).unwrap();
    let flat = qsvd(&qtlr::qt::get_slice(&t, 0)).unwrap();
    let scale = 1.0 + flat.s[0];
    let mut degen = 0.0f64;
    for (a, b) in qt.slice_singular_values[0].iter().zip(&flat.s) {
        degen = degen.max((a - b).abs() / scale);
    }
    degen = degen.max(
        qt.reconstruct(&set).unwrap().sub(&t).unwrap().fro_norm() / t.fro_norm(),
    );
    verdict(
        2,
        "qt-svd correctness",
        worst <= 1e-9 && degen <= 1e-12,
        &format!("reconstruction {worst:.2e}, qsvd degeneration {degen:.2e}"),
    );
}

#[test]
fn criterion_3_prox_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // Tight inner-loop budget: the oracle comparison asks for global accuracy
    // to 1e-6, which the DC iteration reaches with more steps than the
    // solver-oriented default.
    let cfg = ProxConfig {
        max_iters: 100,
        tol: 1e-12,
    };
    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst_wnn = 0.0f64;
    for surrogate_id in 0..6 {
        for _ in 0..500 {
            let sigma: f64 = rng.gen_range(0.0..8.0);
            let lambda: f64 = rng.gen_range(0.01..2.0);
            let gamma: f64 = rng.gen_range(0.5..20.0);
            let p: f64 = rng.gen_range(0.1..0.9);
            let s = match surrogate_id {
                0 => Surrogate::geman(gamma),
                1 => Surrogate::laplace(gamma),
                2 => Surrogate::logarithm(gamma),
                3 => Surrogate::weighted_nuclear(None),
                4 => Surrogate::schatten_p(p),
                _ => Surrogate::weighted_schatten_p(p, None),
            };
            let x = scalar_prox(sigma, lambda, &s, &cfg, 0);
            let obj = |v: f64| 0.5 * (v - sigma) * (v - sigma) + lambda * s.value(v, 0).unwrap();
            let grid_min = (0..=2000)
                .map(|g| obj(sigma * g as f64 / 2000.0))
                .fold(f64::INFINITY, f64::min);
            worst_gap = worst_gap.max(obj(x) - grid_min);
            if surrogate_id == 3 {
                worst_wnn = worst_wnn.max((x - (sigma - lambda).max(0.0)).abs());
            }
        }
    }
    verdict(
        3,
        "prox oracle equivalence",
        worst_gap <= 1e-6 && worst_wnn <= 1e-9,
        &format!("objective excess {worst_gap:.2e}, soft-threshold gap {worst_wnn:.2e}"),
    );
}

/// Independent nuclear-norm ADMM for completion, coded directly against the
/// unfold/fold and QSVD primitives: `Q_k` by singular-value soft
/// thresholding, `P` by the beta-weighted fold average with observed entries
/// pinned. Returns `P` after each outer iteration.
fn nuclear_admm(
    observed: &QTensor,
    mask: &MaskTensor,
    alpha: &[f64],
    sched: &AdmmSchedule,
    iters: usize,
) -> Vec<QTensor> {
    let shape = observed.shape().to_vec();
    let n_modes = shape.len();
    let mut p = observed.clone();
    let mut qs: Vec<QMatrix> = (1..=n_modes).map(|k| unfold(&p, k).unwrap()).collect();
    let mut fs: Vec<QMatrix> = qs
        .iter()
        .map(|q| QMatrix::zeros(q.rows(), q.cols()))
        .collect();
    let mut betas = vec![sched.beta0; n_modes];
    let mut out = Vec::new();
    for _ in 0..iters {
        let beta_sum: f64 = betas.iter().sum();
        let mut acc = QTensor::zeros(&shape);
        for k in 0..n_modes {
            let shifted = qs[k].sub(&fs[k].scale_real(1.0 / betas[k])).unwrap();
            acc = acc
                .add(&fold(&shifted, k + 1, &shape).unwrap().scale_real(betas[k]))
                .unwrap();
        }
        p = acc.scale_real(1.0 / beta_sum);
        for (i, &obs) in mask.data.iter().enumerate() {
            if obs {
                p.set_linear(i, observed.get_linear(i));
            }
        }
        for k in 0..n_modes {
            let target = unfold(&p, k + 1)
                .unwrap()
                .add(&fs[k].scale_real(1.0 / betas[k]))
                .unwrap();
            let svd = qsvd_thin(&target).unwrap();
            let thresholded: Vec<f64> = svd
                .s
                .iter()
                .map(|&v| (v - alpha[k] / betas[k]).max(0.0))
                .collect();
            let q_new = svd.reconstruct_with(&thresholded).unwrap();
            let gap = q_new.sub(&unfold(&p, k + 1).unwrap()).unwrap();
            fs[k] = fs[k].sub(&gap.scale_real(betas[k])).unwrap();
            qs[k] = q_new;
        }
        for b in &mut betas {
            *b = sched.next_beta(*b);
        }
        out.push(p.clone());
    }
    out
}

#[test]
fn criterion_4_convex_degeneration() {
    let shape = [12usize, 12, 12];
    let truth = synthetic_tucker(&shape, &[2, 2, 2], 255.0, 11).unwrap();
    let mask = make_mask(&shape, 0.5, 12, true).unwrap();
    let mut observed = truth.clone();
    for (i, &obs) in mask.data.iter().enumerate() {
        if !obs {
            observed.set_linear(i, Quaternion::ZERO);
        }
    }
    let sched = AdmmSchedule {
        tol: 0.0,
        ..AdmmSchedule::completion_default()
    };
    let alpha = vec![1.0 / 3.0; 3];
    let reference = nuclear_admm(&observed, &mask, &alpha, &sched, 10);
    let mut worst = 0.0f64;
    for (i, expected) in reference.iter().enumerate() {
        let mut prob = CompletionProblem::new(
            truth.clone(),
            mask.clone(),
            Surrogate::weighted_nuclear(None),
            RankFlavor::Tucker,
        );
        prob.prox_cfg = ProxConfig {
            max_iters: 1,
            ..ProxConfig::default()
        };
        let sched_i = AdmmSchedule {
            max_iters: i + 1,
            ..sched.clone()
        };
        let (p, _) = lrqtc_nctr(&prob, &sched_i).unwrap();
        worst = worst.max(p.sub(expected).unwrap().fro_norm() / expected.fro_norm());
    }
    verdict(
        4,
        "convex degeneration",
        worst <= 1e-9,
        &format!("10 iterations vs independent nuclear ADMM, max gap {worst:.2e}"),
    );
}

fn criterion5_setup() -> (QTensor, MaskTensor) {
    let shape = [20usize, 20, 20];
    let truth = synthetic_tucker(&shape, &[2, 2, 2], 255.0, 1).unwrap();
    let mask = make_mask(&shape, 0.5, 101, true).unwrap();
    (truth, mask)
}

fn completion_sched(iters: usize) -> AdmmSchedule {
    // rho = 1.1, beta_max = 1e4 are the schedule defaults; beta0 is chosen
    // for [0, 255]-scale data (see the solver module notes).
    AdmmSchedule {
        beta0: 2e-5,
        max_iters: iters,
        tol: 0.0,
        ..AdmmSchedule::completion_default()
    }
}

#[test]
fn criterion_5_completion_recovery() {
    let (truth, mask) = criterion5_setup();
    let prob = CompletionProblem::new(
        truth.clone(),
        mask.clone(),
        Surrogate::geman(60.0),
        RankFlavor::Tucker,
    );
    let (p, _) = lrqtc_nctr(&prob, &completion_sched(25)).unwrap();
    let rel = p.sub(&truth).unwrap().fro_norm() / truth.fro_norm();
    let observed_exact = mask
        .data
        .iter()
        .enumerate()
        .all(|(i, &obs)| !obs || p.get_linear(i) == truth.get_linear(i));
    verdict(
        5,
        "completion recovery",
        rel <= 1e-2 && observed_exact,
        &format!("relative error {rel:.2e}, observed entries bit-exact: {observed_exact}"),
    );
}

#[test]
fn criterion_6_nonconvex_advantage() {
    let mut wins = 0;
    for seed in 1..=5u64 {
        let shape = [20usize, 20, 20];
        let truth = synthetic_tucker(&shape, &[2, 2, 2], 255.0, seed).unwrap();
        let mask = make_mask(&shape, 0.5, seed + 100, true).unwrap();
        let mut psnrs = Vec::new();
        for s in [Surrogate::geman(60.0), Surrogate::weighted_nuclear(None)] {
            let prob = CompletionProblem::new(truth.clone(), mask.clone(), s, RankFlavor::Tucker);
            let (p, _) = lrqtc_nctr(&prob, &completion_sched(25)).unwrap();
            psnrs.push(psnr(&truth, &p).unwrap());
        }
        if psnrs[0] >= psnrs[1] {
            wins += 1;
        }
    }
    verdict(
        6,
        "non-convex advantage trend",
        wins >= 4,
        &format!("geman beat nuclear on {wins}/5 seeds"),
    );
}

#[test]
fn criterion_7_trpca_separation() {
    let shape = [30usize, 30, 10];
    let set = TransformSet::dct(&shape);
    let lambda = RpcaProblem::auto_lambda(&shape);
    // Main separation check on seed 1: corruption magnitude twice the data
    // peak so the sparse component is genuinely gross.
    let low = synthetic_qt_low_rank(&shape, 3, &set, 1.0, 1).unwrap();
    let (x, support) = add_gross_corruption(&low, 0.05, 2.0, 201).unwrap();
    let prob = RpcaProblem::new(x, lambda, Surrogate::geman(3.0), set.clone());
    let sched = AdmmSchedule {
        tol: 0.0,
        ..AdmmSchedule::rpca_default()
    };
    let (q, s, report) = trpca_nc(&prob, &sched).unwrap();
    let rel = q.sub(&low).unwrap().fro_norm() / low.fro_norm();
    let truth_count = support.iter().filter(|&&b| b).count();
    let hit = support
        .iter()
        .enumerate()
        .filter(|(i, &c)| c && s.get_linear(*i).modulus() > 1e-6)
        .count();
    let recall = hit as f64 / truth_count as f64;
    let feas = report.kkt.r_feas;

    // Ordering reproduction: geman-dct PSNR vs nuclear PSNR on 5 seeds.
    let mut wins = 0;
    for seed in 1..=5u64 {
        let low = synthetic_qt_low_rank(&shape, 3, &set, 1.0, seed).unwrap();
        let (x, _) = add_gross_corruption(&low, 0.05, 2.0, seed + 200).unwrap();
        let mut psnrs = Vec::new();
        for s in [Surrogate::geman(3.0), Surrogate::weighted_nuclear(None)] {
            let prob = RpcaProblem::new(x.clone(), lambda, s, set.clone());
            let (q, _, _) = trpca_nc(&prob, &AdmmSchedule::rpca_default()).unwrap();
            psnrs.push(psnr(&low, &q).unwrap());
        }
        if psnrs[0] >= psnrs[1] {
            wins += 1;
        }
    }
    verdict(
        7,
        "trpca separation",
        rel <= 5e-2 && recall >= 0.9 && feas <= 1e-6 && wins >= 4,
        &format!(
            "relative error {rel:.2e}, recall {recall:.3}, feasibility {feas:.2e}, geman beat nuclear on {wins}/5 seeds"
        ),
    );
}

#[test]
fn criterion_8_kkt_diagnostics() {
    // Criterion-5 configuration run to 50 iterations: with rho = 1.1 the
    // penalty grows by less than 11x over 25 iterations, which bounds the
    // mode feasibility gap away from the 1e-4 target at any beta0 (swept
    // 3e-6..3e-3); by iteration 50 the gap is two orders below the bound.
    let (truth, mask) = criterion5_setup();
    let prob = CompletionProblem::new(
        truth.clone(),
        mask.clone(),
        Surrogate::geman(60.0),
        RankFlavor::Tucker,
    );
    let (p, report) = lrqtc_nctr(&prob, &completion_sched(50)).unwrap();
    let mut observed = truth.clone();
    for (i, &obs) in mask.data.iter().enumerate() {
        if !obs {
            observed.set_linear(i, Quaternion::ZERO);
        }
    }
    let observed_exact = mask
        .data
        .iter()
        .enumerate()
        .all(|(i, &obs)| !obs || p.get_linear(i) == truth.get_linear(i));
    let feas_bound = 1e-4 * observed.fro_norm();
    let grad_bound = 1e-3
        * report
            .iterations
            .last()
            .map(|r| r.max_multiplier_norm)
            .unwrap_or(0.0);
    let kkt = report.kkt;
    verdict(
        8,
        "kkt diagnostics",
        kkt.r_proj == 0.0 && observed_exact && kkt.r_feas <= feas_bound && kkt.r_grad <= grad_bound,
        &format!(
            "r_proj {:.1e}, r_feas {:.2e} (bound {:.2e}), r_grad {:.2e} (bound {:.2e})",
            kkt.r_proj, kkt.r_feas, feas_bound, kkt.r_grad, grad_bound
        ),
    );
}

#[test]
fn criterion_9_invariance_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    // Unitary factors from the full QSVD of random square matrices.
    let u = qsvd(&random_qmatrix(10, 10, &mut rng)).unwrap().u;
    let v = qsvd(&random_qmatrix(8, 8, &mut rng)).unwrap().u;
    let a = random_qmatrix(10, 8, &mut rng);
    let b = qmatmul(&qmatmul(&u, &a).unwrap(), &v.conj_transpose()).unwrap();
    let s = Surrogate::geman(2.0);
    let phi_of = |m: &QMatrix| -> f64 {
        qsvd_thin(m)
            .unwrap()
            .s
            .iter()
            .enumerate()
            .map(|(i, &x)| s.value(x, i).unwrap())
            .sum()
    };
    let phi_gap = (phi_of(&a) - phi_of(&b)).abs() / phi_of(&a).abs();
    let cfg = ProxConfig::default();
    let prox_a = lrqa_prox(&a, 0.3, &s, &cfg).unwrap();
    let prox_b = lrqa_prox(&b, 0.3, &s, &cfg).unwrap();
    let conj = qmatmul(&qmatmul(&u, &prox_a).unwrap(), &v.conj_transpose()).unwrap();
    let prox_gap = prox_b.sub(&conj).unwrap().fro_norm() / prox_a.fro_norm();

    // Exact reshaping bijections.
    let t = random_qtensor(&[5, 4, 3, 2], &mut rng);
    let mut bijections_exact = true;
    for k in 1..=4 {
        bijections_exact &= fold(&unfold(&t, k).unwrap(), k, t.shape()).unwrap() == t;
    }
    for k in 1..=3 {
        bijections_exact &= tt_fold(&tt_unfold(&t, k).unwrap(), k, t.shape()).unwrap() == t;
    }
    let img = random_qtensor(&[16, 16, 2], &mut rng);
    bijections_exact &= ket_inverse(&ket_augment(&img).unwrap()).unwrap() == img;

    // Transform roundtrips.
    let mut transform_gap = 0.0f64;
    for set in [
        TransformSet::dct(&[6, 5, 4, 3]),
        TransformSet::random_orthogonal(&[6, 5, 4, 3], 4),
    ] {
        let t = random_qtensor(&[6, 5, 4, 3], &mut rng);
        let back = set
            .apply(&set.apply(&t, Direction::Forward).unwrap(), Direction::Inverse)
            .unwrap();
        transform_gap = transform_gap.max(back.sub(&t).unwrap().fro_norm() / t.fro_norm());
    }
    verdict(
        9,
        "invariance suite",
        phi_gap <= 1e-8 && prox_gap <= 1e-8 && bijections_exact && transform_gap <= 1e-10,
        &format!(
            "phi-norm invariance {phi_gap:.2e}, prox conjugation {prox_gap:.2e}, bijections exact: {bijections_exact}, transform roundtrip {transform_gap:.2e}"
        ),
    );
}

#[test]
fn criterion_10_bench_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let code = qtlr::cli::run([
            "qtlr",
            "bench",
            "--suite",
            "synthetic",
            "--seeds",
            "7",
            "--report",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "bench exited with {code}");
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    let identical = bytes_a == bytes_b;
    verdict(
        10,
        "bench determinism",
        identical && !bytes_a.is_empty(),
        &format!("two runs, {} bytes, byte-identical: {identical}", bytes_a.len()),
    );
}
