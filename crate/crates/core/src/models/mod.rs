//! Model registry: per-geometry data files and the period-level
//! realizations built from them.
mod cusp;
mod elliptic;
mod hol;
mod spec;

pub use cusp::{apparent_pole_orders, cusp_exchange, pole_order, require_all, to_inverse_coordinate, Component, CuspRelation};
pub use elliptic::{
    elliptic_hol_s, elliptic_yukawa, lambda_lift_table, tilde_s_modular_check, EllipticRealization, LambdaLift,
};
pub use hol::{hol_propagators, HolPropagators, EQ_DK, EQ_DS, EQ_DSX, EQ_DSXX, EQ_GAMMA};
pub use spec::{
    builtin_names, builtin_source, load_model, resolve_model, LiftSpec, ModelKind, ModelSpec, LOAD_CHECK_ORDER,
};
