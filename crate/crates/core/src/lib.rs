//! Measurement-dependent locally causal models of the CHSH test.
//!
//! The crate builds finite hidden-variable models, measures how much the
//! hidden variable depends on the measurement settings, evaluates the
//! relaxed CHSH bounds, constructs models that saturate them, computes the
//! mutual information those models need, and checks tightness with an exact
//! rational linear-programming oracle.

pub mod bounds;
pub mod constructors;
pub mod error;
pub mod info;
pub mod measures;
pub mod model;
pub mod oracle;
pub mod sampling;
pub mod scalar;
pub mod search;
pub mod suite;
pub mod sweep;

pub use bounds::{
    bound_banik, bound_four_param, bound_hall, bound_two_param, check_inequality_chain, check_param_feasible, v_g,
    ConstraintViolation, Feasibility, ModelParams,
};
pub use constructors::{banik_model, four_param_model, hall_model, interp_model, two_param_model, InterpRegion};
pub use error::{Error, Result};
pub use info::{mutual_information, InfoCurvePoint, V_T};
pub use measures::{chsh_s, measurement_dependence, DependenceReport};
pub use model::{
    load_model, load_model_str, save_model, validate_model, AnyModel, ConditionalTable, HiddenVariableModel,
    JointSetting, OutcomeTable, SettingsDistribution,
};
pub use oracle::{lp_solve, LinearProgram, LpOutcome};
pub use oracle::{max_s_four_param, max_s_two_param, OracleResult};
pub use scalar::{format_rational, format_sig, parse_rational, Number, Rational, Scalar};
pub use suite::{run_suite, Level, SuiteOptions, SuiteReport};
pub use sweep::{sweep, Figure, SweepGrid};
