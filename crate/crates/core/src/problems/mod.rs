//! Ready-to-run problem definitions: sparse + low-rank matrix recovery,
//! the sparse PCA semidefinite relaxation, and sparse multicomposite
//! quadratic programs, together with their synthetic instance generators.

mod qp;
mod recovery;
mod serialize;
mod spca;

pub use qp::{
    gen_sparse_qp_instance, solve_sparse_qp_hcgs, solve_sparse_qp_hcgs_observed, QuadraticForm,
    SparseQpInstance,
};
pub use recovery::{
    gen_recovery_instance, recovery_objective_j, solve_recovery_hcgs,
    solve_recovery_hcgs_observed, solve_recovery_hcgs_with_start, RecoveryInstance, RecoveryLoss,
    RecoveryParams, SamplingMask,
};
pub use serialize::{read_manifest, write_manifest};
pub use spca::{
    gen_spca_instance, planted_overlap, solve_spca_hcgs, solve_spca_hcgs_observed, SpcaInstance,
    SpcaParams,
};
