//! Sparse tensors and alternating forms on `R^n`.
//!
//! Tensors and forms store only their nonzero coefficients, keyed by
//! 1-based multi-indices. On top of the algebra (tensor and wedge products,
//! `Alt`, evaluation, contraction, pullback) sit a point-wise exterior
//! derivative for forms with scalar-field coefficients and a numerical
//! check of Stokes's theorem on cubes.
//!
//! The core types are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below are what most callers want.
//!
//! ```
//! use exterior_core::KForm64;
//!
//! let k1 = KForm64::from_rows(&[vec![3, 4, 5], vec![1, 4, 6]], &[-2.0, 7.0]).unwrap();
//! let k2 = KForm64::from_rows(&[vec![1, 3], vec![5, 7]], &[1.0, 5.0]).unwrap();
//! let w = k1.wedge(&k2);
//! assert_eq!(w.arity(), 5);
//! ```

pub mod derivative;
pub mod error;
pub mod form;
pub mod index;
pub mod linalg;
pub mod perm;
pub mod quadrature;
pub mod rng;
pub mod scalar;
pub mod sparse;
pub mod stokes;
pub mod symbolic;
pub mod tensor;
pub mod text;
pub mod verify;

pub use derivative::{dd_check, fd_gradient, fd_hessian, grad, hat, omega_gradient, FieldForm, ScalarField};
pub use error::{Error, Result};
pub use form::{binomial, Contraction, KForm};
pub use index::MultiIndex;
pub use linalg::{Matrix, PointFrame, PullbackMatrix};
pub use perm::{merge_with_sign, perm_sign, sort_with_sign, Sign};
pub use quadrature::QuadratureRule;
pub use rng::{rform, SplitMix64};
pub use scalar::Scalar;
pub use sparse::{SparseMap, DEFAULT_ZAP_TOL};
pub use stokes::{verify_det_proportionality, verify_stokes, CubeDomain, DetReport, StokesReport};
pub use symbolic::{form_symbolic, tensor_symbolic, SymbolStyle};
pub use tensor::KTensor;
pub use text::{parse_object, Parsed};

pub type KForm64 = KForm<f64>;
pub type KForm32 = KForm<f32>;
pub type KTensor64 = KTensor<f64>;
pub type KTensor32 = KTensor<f32>;
pub type SparseMap64 = SparseMap<f64>;
pub type SparseMap32 = SparseMap<f32>;
pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type ScalarField64 = ScalarField<f64>;
pub type FieldForm64 = FieldForm<f64>;
