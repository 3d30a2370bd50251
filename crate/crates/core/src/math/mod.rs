//! Closed-form quantities: the SLE exponents, the kernel `P_y`, the
//! configuration distances, the comparison functions `F`, and the one-point
//! Green's function `G`. Everything here is a pure function of its inputs.

mod config;
mod green;
mod kappa;
mod kernel;

pub use config::{config_quantities, PointConfig};
pub use green::{
    f_limit, f_radii, green_one_point, pde_residual_1pt, GreenKind, GreenValue, DEFAULT_C_HAT,
};
pub(crate) use green::{check_c_hat, ln_green_shape};
pub use kappa::{kappa_params, Kappa};
pub use kernel::{ln_p_y, p_y};
