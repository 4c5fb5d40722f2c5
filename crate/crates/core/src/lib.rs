//! Nonextensive entropies of the form `S_q(p) = (1 - sum p_i^q) / phi(q)`.
//!
//! The crate provides
//!
//! * [`distributions`]: simplex points, refinements and independent products;
//! * [`phi`]: normalizing functions `phi(q)` and a validator for their
//!   admissibility conditions;
//! * [`entropy`]: Shannon, Tsallis, normalized Tsallis, Havrda-Charvat and the
//!   general `phi` family, stable across `q = 1`;
//! * [`axioms`]: residual-based checkers for additivity, pseudoadditivity,
//!   maximality, expandability, the Shannon limit and symmetry;
//! * [`reconstruction`]: an oracle that rebuilds `S_q` on rational points from
//!   uniform entropies only.
//!
//! ```
//! use nonext::{generalized_entropy, Distribution, PhiSpec, QParam};
//!
//! let d = Distribution::uniform(2).unwrap();
//! let s = generalized_entropy(&d, QParam::new(2.0).unwrap(), &PhiSpec::tsallis()).unwrap();
//! assert!((s - 0.5).abs() < 1e-15);
//! ```

pub mod axioms;
pub mod distributions;
pub mod entropy;
pub mod error;
pub mod phi;
pub mod reconstruction;
pub mod report;
pub mod sampling;

pub use axioms::{
    check_expandability, check_maximality, check_pseudoadditivity, check_shannon_additivity,
    check_shannon_limit, check_symmetry,
};
pub use distributions::{product, rational_approx, Distribution, ProductSystem, Refinement, SIMPLEX_TOL};
pub use entropy::{
    generalized_entropy, havrda_charvat, normalized_tsallis, shannon, tsallis, uniform_entropy, QParam,
    Q_SWITCH,
};
pub use error::{Error, Result};
pub use phi::{phi_derivative, validate_phi, PhiSpec, PhiTolerances, PhiValidationReport};
pub use reconstruction::{
    check_functional_equation, reconstruct_rational, uniqueness_check, RationalDistribution,
};
pub use report::{CheckReport, CheckStatus};
