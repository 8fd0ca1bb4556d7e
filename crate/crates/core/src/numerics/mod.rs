//! Numerical kernels shared by the rest of the crate.

pub mod eigen;
pub mod quadrature;
pub mod rk;
pub mod roots;

pub use eigen::eig_dense;
pub use quadrature::{gauss_jacobi_rule, QuadratureRule};
pub use rk::{rk_integrate, rk_integrate_partial, rk_integrate_until, IntegratorConfig};
pub use roots::brent_root;
