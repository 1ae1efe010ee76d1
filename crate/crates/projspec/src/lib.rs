//! Joint spectra of matrix tuples, projective spectra of multiparameter
//! pencils, the group representations that feed them, and the renormalization
//! dynamics on `P^2` whose Julia set recovers the dihedral spectrum.
//!
//! Module map:
//! - [`pencil`]: pencils `A(z) = sum z_i A_i`, projective points, symbolic
//!   characteristic polynomials, hyperplane containment.
//! - [`jointspec`]: Koszul complexes, Taylor/Harte/approximate-point spectra,
//!   joint eigenvalues, the hyperplane-union factorization verdict.
//! - [`groups`]: Cayley tables, regular representations, Koopman truncations
//!   of the infinite dihedral group, Markov operators, the H0 amenability
//!   surrogate.
//! - [`dynamics`]: the maps `tau`, `T(x) = 2x^2 - 1`, `F`, `F_pi`, closed-form
//!   iteration, limit map, and Julia/Fatou classification.
//! - [`render`]: chart slices of `P^2`, escape-time fields, image and CSV
//!   output.
//! - [`verify`]: the end-to-end verification suite run by the CLI and the
//!   acceptance tests.

pub mod dd;
pub mod dynamics;
pub mod groups;
pub mod io;
pub mod jointspec;
pub mod linalg;
pub mod pencil;
pub mod render;
pub mod tol;
pub mod verify;

pub use linalg::CMatrix;
pub use pencil::{LinearForm, MatrixPencil, MultiPoly, ProjPoint};
