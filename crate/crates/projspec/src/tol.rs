//! Central table of numeric tolerances and defaults.
//!
//! Every threshold used by the library lives here so that a run can be
//! reproduced from its manifest alone. The CLI prints this table with
//! `--defaults`.

/// Relative singularity threshold: a square matrix is singular when
/// `sigma_min <= SINGULAR_REL * max(1, sigma_max)`.
pub const SINGULAR_REL: f64 = 1e-10;

/// Singular values `>= RANK_REL * sigma_max` count toward numeric rank.
pub const RANK_REL: f64 = 1e-10;

/// A tuple commutes when `max ||[A_i, A_j]|| <= COMMUTE_REL * max_k ||A_k||^2`
/// (operator norms).
pub const COMMUTE_REL: f64 = 1e-10;

/// Normality test: `||A A* - A* A|| <= NORMAL_REL * ||A||^2`.
pub const NORMAL_REL: f64 = 1e-10;

/// Polynomial coefficients below this magnitude are pruned after every
/// arithmetic step.
pub const COEFF_PRUNE: f64 = 1e-12;

/// Relative bound on residual coefficients when testing whether a polynomial
/// vanishes on a hyperplane or is divisible by a linear form.
pub const HYPERPLANE_REL: f64 = 1e-10;

/// Relative agreement required between a symbolic characteristic polynomial
/// and the numeric determinant at sample points.
pub const CHAR_POLY_SAMPLE_REL: f64 = 1e-8;

/// Largest matrix dimension for which the symbolic determinant is expanded
/// exactly; larger pencils fall back to sampling where allowed.
pub const CHAR_POLY_MAX_DIM: usize = 16;

/// Residual allowed in `sum_i (A_i - lambda_i) B_i = I` and in the splitting
/// homotopy identity.
pub const HOMOTOPY_TOL: f64 = 1e-8;

/// Unitarity defect allowed for representation generators.
pub const UNITARY_TOL: f64 = 1e-10;

/// Defect allowed when verifying declared group relations.
pub const RELATION_TOL: f64 = 1e-8;

/// Largest Koopman truncation level (dimension `2^level`).
pub const KOOPMAN_MAX_LEVEL: u32 = 12;

/// `tau` is declared zero when `|z0^2 - z1^2 - z2^2| <= TAU_ZERO_TOL` after
/// canonical normalization.
pub const TAU_ZERO_TOL: f64 = 1e-12;

/// Width of the band around the real axis within which `tau` counts as real
/// for the analytic Julia test.
pub const REAL_AXIS_TOL: f64 = 1e-9;

/// Points closer than this (Fubini-Study distance of canonical forms) are the
/// same projective point.
pub const PROJ_POINT_TOL: f64 = 1e-9;

/// The semiconjugacy identity is only asserted away from the degenerate locus
/// `z0^2 = z2^2`; this is the minimum allowed `|z0^2 - z2^2|` after canonical
/// normalization.
pub const DEGENERATE_LOCUS_DELTA: f64 = 1e-8;

/// Default escape radius for Chebyshev orbits.
pub const ESCAPE_RADIUS: f64 = 10.0;

/// Default iteration cap for escape-time classification.
pub const MAX_ITER: u32 = 100;

/// Default seed for every randomized sweep.
pub const DEFAULT_SEED: u64 = 42;

/// The whole table as printable `(name, value)` pairs.
pub fn defaults_table() -> Vec<(&'static str, String)> {
    vec![
        ("singular_rel", format!("{SINGULAR_REL:e}")),
        ("rank_rel", format!("{RANK_REL:e}")),
        ("commute_rel", format!("{COMMUTE_REL:e}")),
        ("normal_rel", format!("{NORMAL_REL:e}")),
        ("coeff_prune", format!("{COEFF_PRUNE:e}")),
        ("hyperplane_rel", format!("{HYPERPLANE_REL:e}")),
        ("char_poly_sample_rel", format!("{CHAR_POLY_SAMPLE_REL:e}")),
        ("char_poly_max_dim", format!("{CHAR_POLY_MAX_DIM}")),
        ("homotopy_tol", format!("{HOMOTOPY_TOL:e}")),
        ("unitary_tol", format!("{UNITARY_TOL:e}")),
        ("relation_tol", format!("{RELATION_TOL:e}")),
        ("koopman_max_level", format!("{KOOPMAN_MAX_LEVEL}")),
        ("tau_zero_tol", format!("{TAU_ZERO_TOL:e}")),
        ("real_axis_tol", format!("{REAL_AXIS_TOL:e}")),
        ("proj_point_tol", format!("{PROJ_POINT_TOL:e}")),
        ("degenerate_locus_delta", format!("{DEGENERATE_LOCUS_DELTA:e}")),
        ("escape_radius", format!("{ESCAPE_RADIUS}")),
        ("max_iter", format!("{MAX_ITER}")),
        ("default_seed", format!("{DEFAULT_SEED}")),
    ]
}
