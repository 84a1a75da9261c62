//! Numerically exact reference computations.

pub mod bounds;
pub mod doeblin;
pub mod first_order;
pub mod green;
pub mod linear;
pub mod perron;

pub use bounds::{alpha_thr, apriori_bounds, apriori_bounds_internal, AprioriBounds, SigmaBound};
pub use doeblin::{doeblin_rho, dual_seminorm, Doeblin};
pub use first_order::{first_order_lambda, FirstOrder};
pub use green::{green_kernel, GreenRow, GreenTable};
pub use linear::{
    adjoint_boundary_solve, excursion_weight, exit_probabilities, path_sum_converged, path_sum_resolvent, resolvent,
    stationary, stationary_dense, Excursion,
};
pub use perron::{perron, perron_reducible, perron_source, perron_with, OracleResult, PerronOptions, SourceOracle};
