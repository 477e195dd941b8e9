//! Quasi-modular and almost-holomorphic forms for the elliptic model.
mod anomaly;
mod qexp;
mod quasi;

pub use anomaly::{modular_anomaly_rhs, ZForm, ZTable};
pub use qexp::{divisor_sum, eisenstein, eta24, j_normalized, QExpansion};
pub use quasi::{AlmostHolPoly, QuasiModularPoly};
