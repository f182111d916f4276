//! Singular contact reduction of cosphere bundles at zero momentum.
//!
//! Given a proper action, either as abstract isotropy data ([`IsotropyPoset`])
//! or as a linear torus action on `R^{2n}` ([`TorusActionSpec`]), the crate
//! computes the contact, secondary and C-L stratifications of the reduced
//! space `C₀ = J⁻¹(0)/G`: strata, dimensions, coisotropic/Legendrian
//! classification and frontier relations. The numerical side samples the zero
//! momentum level, pushes points through the Hilbert map of the torus
//! invariants, and checks them against semialgebraic presentations of the
//! reduced space, including along the Reeb flow.
//!
//! ```
//! use cosphere::{build_isotropy_poset, cl_stratification, TorusActionSpec};
//!
//! let spec = TorusActionSpec::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
//! let poset = build_isotropy_poset(&spec).unwrap();
//! let result = cl_stratification(&poset).unwrap();
//! assert_eq!(result.cl_strata.len(), 8);
//! assert_eq!(result.hasse.len(), 10);
//! ```

pub mod action;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod phase;
pub mod poset;
pub mod reeb;
pub mod semialg;
pub mod strata;
pub mod tolerance;

pub use action::{
    build_isotropy_poset, is_almost_semifree, lifted_action_is_free, poset_is_almost_semifree,
    stabilizer_of_support, DimensionPolicy, SemifreeFailure, SemifreeReport, StabilizerClass,
    SupportStabilizer, TorusActionSpec, TorusModel,
};
pub use error::{Error, Result};
pub use fixtures::{check_reduced_membership, Fixture};
pub use phase::{
    classify_point, hilbert_map, invariants, k0_project, momentum, HilbertImage, InvariantVector,
    PhasePoint, PlaneInvariants, SupportPattern, ZeroLevelSampler,
};
pub use poset::{
    hasse_edges, transitive_closure, IsotropyPoset, Label, OrbitType, PosetDescription,
    ValidationReport, Violation,
};
pub use reeb::{
    flow_exact, flow_invariants_closed, flow_rk4, reeb_field, trajectory_closed_form,
    trajectory_exact, FlowMethod, Trajectory,
};
pub use semialg::{Membership, ReducedDescription};
pub use strata::{
    bundle_targets, cl_stratification, cl_stratification_with, classify_seam, contact_strata,
    is_finer_than_contact, secondary_strata, semifree_decomposition, single_type_reduce,
    starred_lattice, zero_level_types, StratificationResult, StratifyOptions, Stratum, StratumKind,
    StratumName,
};
