//! Default numerical tolerances.

/// Relative tolerance used by predicates and solvers unless overridden.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tolerance for residue-level identities (nilpotency, sum rules).
pub const RESIDUE_TOL: f64 = 1e-10;
