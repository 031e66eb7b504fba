//! Metrics, connections and curvature at points of a coordinate chart.

pub mod bundle;
pub mod calculus;
pub mod chart;
pub mod immersion;
pub mod local;
pub mod tensor;

pub use bundle::{
    christoffel, curvature_bundle, lightlike_sectional, orthonormal_frame, sectional,
    CurvatureBundle, Frame,
};
pub use calculus::{
    covariant_derivative_tensor, field_calculus, scalar_field_calculus, FieldCalculus,
    ScalarCalculus,
};
pub use chart::{evaluate_metric, Chart, CoordBox, DiffMode, DifferentiationConfig, Signature};
pub use local::Local;
pub use tensor::Tensor;
