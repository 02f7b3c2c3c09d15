//! Quaternion SVD via the complex adjoint: factor a random quaternion
//! matrix, verify the reconstruction, and truncate to a best low-rank
//! approximation.

use qtlr::linalg::{qmatmul, qsvd_thin, unitarity_defect};
use qtlr::quat::Quaternion;
use qtlr::tensor::QMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = QMatrix::from_fn(8, 6, |_, _| {
        Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    });

    let svd = qsvd_thin(&a).unwrap();
    println!("singular values: {:?}", svd.s.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>());
    println!("U unitarity defect: {:.2e}", unitarity_defect(&svd.u).unwrap());
    println!("V unitarity defect: {:.2e}", unitarity_defect(&svd.v).unwrap());

    let recon = svd.reconstruct().unwrap();
    let rel = recon.sub(&a).unwrap().fro_norm() / a.fro_norm();
    println!("reconstruction relative error: {rel:.2e}");

    // Eckart-Young in the quaternion setting: zeroing trailing singular
    // values gives the best approximation of each rank, with error equal to
    // the l2 norm of the dropped tail.
    println!("\nrank  truncation error  tail norm");
    for r in 1..=svd.s.len() {
        let kept: Vec<f64> = svd
            .s
            .iter()
            .enumerate()
            .map(|(i, &v)| if i < r { v } else { 0.0 })
            .collect();
        let approx = svd.reconstruct_with(&kept).unwrap();
        let err = approx.sub(&a).unwrap().fro_norm();
        let tail: f64 = svd.s[r..].iter().map(|v| v * v).sum::<f64>().sqrt();
        println!("{r:>4}  {err:>16.6}  {tail:>9.6}");
    }

    // The factors multiply back in the quaternion algebra: A = U S V^H.
    let usvh = qmatmul(
        &qmatmul(&svd.u, &diag(&svd.s)).unwrap(),
        &svd.v.conj_transpose(),
    )
    .unwrap();
    println!(
        "\n|A - U S V^H| / |A| = {:.2e}",
        usvh.sub(&a).unwrap().fro_norm() / a.fro_norm()
    );
}

fn diag(s: &[f64]) -> QMatrix {
    QMatrix::from_fn(s.len(), s.len(), |i, j| {
        if i == j {
            Quaternion::real(s[i])
        } else {
            Quaternion::ZERO
        }
    })
}
