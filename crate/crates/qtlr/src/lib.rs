//! Quaternion tensor algebra and low-rank recovery.
//!
//! Color images and videos embed naturally into pure quaternion tensors
//! (one imaginary axis per RGB channel). This crate provides the algebra —
//! quaternion scalars, matrices, and dense tensors; QSVD through the complex
//! adjoint; mode unfoldings and the transform-domain QT-product — together
//! with non-convex low-rank recovery: a catalog of concave rank surrogates,
//! their proximal operators, and ADMM solvers for tensor completion
//! (inpainting) and robust principal component analysis (denoising).
//!
//! Entry points:
//! - [`quat::Quaternion`], [`tensor::QTensor`], [`tensor::QMatrix`]
//! - [`linalg::qsvd`], [`qt::qt_svd`]
//! - [`surrogate::Surrogate`], [`surrogate::lrqa_prox`], [`surrogate::qt_prox`]
//! - [`solver::lrqtc_nctr`], [`solver::lrqtc_ncttr`], [`solver::trpca_nc`]
//! - [`io::frames`] for PNG frame stacks, [`io::qten`] for binary tensors

pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod qt;
pub mod quat;
pub mod solver;
pub mod surrogate;
pub mod tensor;
pub mod tensor_ops;
pub mod transform;

pub use error::{QtError, Result};
pub use quat::Quaternion;
pub use tensor::{MaskTensor, QMatrix, QTensor};
