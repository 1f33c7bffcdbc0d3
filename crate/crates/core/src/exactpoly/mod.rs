//! Exact scalar and univariate polynomial arithmetic over ℚ(i).

mod poly;
mod roots;
mod scalar;
mod squarefree;

pub use poly::Poly;
pub use roots::{gaussian_rational_roots, RootSearch};
pub use scalar::GaussianRational;
pub use squarefree::{squarefree_decompose, SquarefreeDecomposition, SquarefreePart};
