//! Finite involutive set-theoretic solutions of the Yang-Baxter equation:
//! verification, retraction, the `C(n1, n2, r)` family of indecomposable
//! solutions of multipermutation level at most 2 with abelian permutation
//! group, their classification and counting, and automorphism groups.

pub mod arith;
pub mod aut;
pub mod classify;
pub mod cli;
pub mod construct;
pub mod perm;
pub mod retract;
pub mod solution;

pub use aut::{automorphism_group, aut_c_closed_form, is_aut_cyclic_c1nr, AutGroup};
pub use classify::{
    are_isomorphic, count_cyclic, count_family, enumerate_family, exhaustive_enumerate,
    explicit_iso_to_c, recover_params, ClassifyError, ClassifyOutcome, EnumFilter, IsoCertificate,
};
pub use construct::{
    build_c, build_nonabelian_example, c_params_valid, delta, inverse_isotope, pi_isotope,
    CParams, ConstructError, Delta,
};
pub use perm::{InvariantFactors, Perm, PermError, PermGroup};
pub use retract::{is_2_reductive, is_mpl_at_most_2, mpl, retract, RetractionResult};
pub use solution::{
    check_cycle_condition, t_map, tau_from_sigma, verify_solution, verify_table, Solution,
    SolutionError, VerifyReport,
};
