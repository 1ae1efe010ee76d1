//! Thin wrappers around nalgebra decompositions.
//!
//! Everything in the crate funnels rank/singularity/eigenvalue questions
//! through here so the thresholds stay consistent. The wrappers also paper
//! over two nalgebra edge cases: the iterative SVD/Schur can fail to converge
//! on exactly symmetric inputs (permutation matrices), which a random unitary
//! similarity fixes, and determinants overflow long before 1000x1000.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tol;

pub type CMatrix = DMatrix<Complex64>;

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Singular values in descending order.
///
/// Falls back to the eigenvalues of the augmented Hermitian matrix
/// `[[0, M], [M*, 0]]` (which are `{+/- sigma_i}`) if the SVD iteration
/// stalls; that path converges on the permutation-structured matrices that
/// trip the bidiagonal QR.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return Vec::new();
    }
    if let Some(svd) = m.clone().try_svd(false, false, 1.0e-14, 20_000) {
        let mut sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        return sv;
    }
    let n = r + c;
    let mut h = CMatrix::zeros(n, n);
    h.view_mut((0, r), (r, c)).copy_from(m);
    h.view_mut((r, 0), (c, r)).copy_from(&m.adjoint());
    let eig = h.symmetric_eigen();
    let mut sv: Vec<f64> = eig.eigenvalues.iter().map(|x| x.abs()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv.truncate(k);
    sv
}

/// Largest singular value; 0 for empty matrices.
pub fn operator_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// `sigma_min <= tol * max(1, sigma_max)`.
pub fn is_singular(m: &CMatrix, tol: f64) -> bool {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&smax), Some(&smin)) => smin <= tol * smax.max(1.0),
        _ => true,
    }
}

/// Number of singular values `>= tol * sigma_max`.
pub fn numeric_rank(m: &CMatrix, tol: f64) -> usize {
    let sv = singular_values(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s >= tol * smax).count()
}

/// Eigenvalues of a general complex matrix via Schur form.
///
/// Retries under random unitary similarity when the QR iteration does not
/// converge (exact permutation matrices are the usual culprit).
pub fn eigenvalues(m: &CMatrix) -> Option<Vec<Complex64>> {
    debug_assert_eq!(m.nrows(), m.ncols());
    let n = m.nrows();
    if n == 0 {
        return Some(Vec::new());
    }
    if let Some(s) = m.clone().try_schur(1.0e-13, 200 * n.max(10)) {
        let t = s.unpack().1;
        return Some((0..n).map(|i| t[(i, i)]).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(tol::DEFAULT_SEED ^ 0x5c0e);
    for _ in 0..3 {
        let u = random_unitary(&mut rng, n);
        let conj = u.adjoint() * m * &u;
        if let Some(s) = conj.try_schur(1.0e-13, 200 * n.max(10)) {
            let t = s.unpack().1;
            return Some((0..n).map(|i| t[(i, i)]).collect());
        }
    }
    None
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().cloned().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    (m - m.adjoint()).norm() <= tol * m.norm().max(1.0)
}

/// `||A A* - A* A|| <= tol * ||A||^2` in the operator norm.
pub fn is_normal(m: &CMatrix, tol: f64) -> bool {
    let comm = m * m.adjoint() - m.adjoint() * m;
    let scale = operator_norm(m);
    operator_norm(&comm) <= tol * (scale * scale).max(1.0)
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    let n = m.nrows();
    if n != m.ncols() {
        return false;
    }
    (m * m.adjoint() - CMatrix::identity(n, n)).norm() <= tol * (n as f64).sqrt()
}

/// Operator norm of `AB - BA`.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    operator_norm(&(a * b - b * a))
}

pub fn random_complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        cx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    })
}

/// Unitary factor of the QR of a random complex matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    loop {
        let m = random_complex_matrix(rng, n, n);
        let q = m.qr().q();
        if q.iter().all(|e| e.re.is_finite() && e.im.is_finite()) {
            return q;
        }
    }
}

pub fn random_complex_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| cx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect()
}

/// Partial-pivot LU diagonal ratio test; cheap stand-in for `is_singular` on
/// matrices too large for a full SVD.
pub fn lu_ratio_singular(m: &CMatrix, tol: f64) -> bool {
    let lu = m.clone().lu();
    let u = lu.u();
    let k = u.nrows().min(u.ncols());
    let mut dmin = f64::MAX;
    let mut dmax = 0.0f64;
    for i in 0..k {
        let v = u[(i, i)].norm();
        dmin = dmin.min(v);
        dmax = dmax.max(v);
    }
    dmin <= tol * dmax.max(1.0)
}
