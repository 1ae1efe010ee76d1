//! Joint spectra of matrix tuples: the Koszul complex and Taylor spectrum,
//! the Harte and joint approximate point spectra, joint eigenvalues, and the
//! hyperplane-union factorization test for commuting normal tuples.

pub mod strategy;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{self, cx, CMatrix};
use crate::pencil::{LinearForm, MatrixPencil, MultiPoly, PencilError};
use crate::tol;

#[derive(Debug, Error)]
pub enum JointError {
    #[error("tuple matrices must be square of equal size")]
    DimensionMismatch,
    #[error("tuple needs at least one matrix")]
    Empty,
    #[error("lambda has {got} entries, tuple has {expected}")]
    LambdaLength { expected: usize, got: usize },
    #[error("operation requires a verified commuting tuple (defect {0:.3e})")]
    NotCommuting(f64),
    #[error("operation requires normal matrices (defect {0:.3e})")]
    NotNormal(f64),
    #[error("sum A_i B_i differs from the identity by {0:.3e}")]
    NotPartitionOfUnity(f64),
    #[error("lambda lies in the joint approximate point spectrum")]
    InSpectrum,
    #[error("eigenvalue iteration failed to converge")]
    EigenFailed,
    #[error(transparent)]
    Pencil(#[from] PencilError),
}

/// Commutation status of a tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Commutation {
    Unchecked,
    VerifiedTrue,
    VerifiedFalse,
}

/// An ordered tuple `(A_1, ..., A_n)` of equal-size square matrices.
#[derive(Debug, Clone)]
pub struct MatrixTuple {
    matrices: Vec<CMatrix>,
    commutation: Commutation,
}

impl MatrixTuple {
    /// Construct and verify the commutation flag eagerly.
    pub fn new(matrices: Vec<CMatrix>) -> Result<Self, JointError> {
        let mut t = Self::new_unchecked(matrices)?;
        t.commutation = if t.commutator_defect() <= t.commute_threshold() {
            Commutation::VerifiedTrue
        } else {
            Commutation::VerifiedFalse
        };
        Ok(t)
    }

    /// Construct without running the commutation check.
    pub fn new_unchecked(matrices: Vec<CMatrix>) -> Result<Self, JointError> {
        if matrices.is_empty() {
            return Err(JointError::Empty);
        }
        let d = matrices[0].nrows();
        if d == 0 || matrices.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(JointError::DimensionMismatch);
        }
        Ok(MatrixTuple {
            matrices,
            commutation: Commutation::Unchecked,
        })
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn commutation(&self) -> Commutation {
        self.commutation
    }

    /// `max_{i<j} ||A_i A_j - A_j A_i||` in the operator norm.
    pub fn commutator_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.matrices.len() {
            for j in (i + 1)..self.matrices.len() {
                worst = worst.max(linalg::commutator_norm(&self.matrices[i], &self.matrices[j]));
            }
        }
        worst
    }

    fn commute_threshold(&self) -> f64 {
        let scale = self
            .matrices
            .iter()
            .map(linalg::operator_norm)
            .fold(0.0f64, f64::max);
        tol::COMMUTE_REL * (scale * scale).max(1.0)
    }

    /// Errors unless the tuple commutes (checking now if unchecked).
    pub fn ensure_commuting(&self) -> Result<(), JointError> {
        match self.commutation {
            Commutation::VerifiedTrue => Ok(()),
            Commutation::VerifiedFalse => Err(JointError::NotCommuting(self.commutator_defect())),
            Commutation::Unchecked => {
                let defect = self.commutator_defect();
                if defect <= self.commute_threshold() {
                    Ok(())
                } else {
                    Err(JointError::NotCommuting(defect))
                }
            }
        }
    }

    /// Largest normality defect across the tuple.
    pub fn normality_defect(&self) -> f64 {
        self.matrices
            .iter()
            .map(|m| {
                let comm = m * m.adjoint() - m.adjoint() * m;
                linalg::operator_norm(&comm)
            })
            .fold(0.0, f64::max)
    }

    /// The shifted tuple `(A_1 - lambda_1, ..., A_n - lambda_n)`; shifting
    /// preserves commutation.
    pub fn shift(&self, lambda: &[Complex64]) -> Result<MatrixTuple, JointError> {
        if lambda.len() != self.matrices.len() {
            return Err(JointError::LambdaLength {
                expected: self.matrices.len(),
                got: lambda.len(),
            });
        }
        let d = self.dim();
        let id = CMatrix::identity(d, d);
        let shifted: Vec<CMatrix> = self
            .matrices
            .iter()
            .zip(lambda)
            .map(|(m, &l)| m - &id * l)
            .collect();
        Ok(MatrixTuple {
            matrices: shifted,
            commutation: self.commutation,
        })
    }

    /// Vertical stack `[(A_1 - l_1); ...; (A_n - l_n)]`.
    fn vstack_shifted(&self, lambda: &[Complex64]) -> Result<CMatrix, JointError> {
        let shifted = self.shift(lambda)?;
        let d = self.dim();
        let n = self.len();
        let mut out = CMatrix::zeros(n * d, d);
        for (i, m) in shifted.matrices.iter().enumerate() {
            out.view_mut((i * d, 0), (d, d)).copy_from(m);
        }
        Ok(out)
    }

    fn hstack_shifted(&self, lambda: &[Complex64]) -> Result<CMatrix, JointError> {
        let shifted = self.shift(lambda)?;
        let d = self.dim();
        let n = self.len();
        let mut out = CMatrix::zeros(d, n * d);
        for (i, m) in shifted.matrices.iter().enumerate() {
            out.view_mut((0, i * d), (d, d)).copy_from(m);
        }
        Ok(out)
    }
}

/// Lexicographically ordered p-subsets of `{0, ..., n-1}`.
fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    if p > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - p {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in (i + 1)..p {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// The Koszul complex of a tuple: boundary maps
/// `d_p : H (x) Lambda^p -> H (x) Lambda^{p+1}` for `p = 0..n-1`, with the
/// basis of `Lambda^p` ordered lexicographically.
#[derive(Debug, Clone)]
pub struct KoszulComplex {
    n: usize,
    dim: usize,
    boundaries: Vec<CMatrix>,
}

impl KoszulComplex {
    pub fn tuple_len(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `d_p` for `p = 0..n-1`.
    pub fn boundaries(&self) -> &[CMatrix] {
        &self.boundaries
    }

    /// Dimension of the stage `H (x) Lambda^p`.
    pub fn stage_dim(&self, p: usize) -> usize {
        self.dim * binomial(self.n, p)
    }

    /// `max_p ||d_{p+1} d_p||`, which vanishes for commuting tuples.
    pub fn chain_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for w in self.boundaries.windows(2) {
            worst = worst.max((&w[1] * &w[0]).norm());
        }
        worst
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Assemble the Koszul boundary maps of a tuple. For `n = 1` this is the
/// two-term complex `0 -> H -> H -> 0` with `d_0 = A_1`.
pub fn koszul_build(t: &MatrixTuple) -> KoszulComplex {
    let n = t.len();
    let d = t.dim();
    let mut boundaries = Vec::with_capacity(n);
    for p in 0..n {
        let sources = combinations(n, p);
        let targets = combinations(n, p + 1);
        let target_index = |set: &[usize]| targets.iter().position(|s| s == set).unwrap();
        let mut dp = CMatrix::zeros(d * targets.len(), d * sources.len());
        for (si, s) in sources.iter().enumerate() {
            for i in 0..n {
                if s.contains(&i) {
                    continue;
                }
                let mut merged = s.clone();
                let pos = merged.iter().position(|&x| x > i).unwrap_or(merged.len());
                merged.insert(pos, i);
                // moving e_i past the `pos` smaller indices
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                let ti = target_index(&merged);
                let mut block = dp.view_mut((ti * d, si * d), (d, d));
                block += &t.matrices()[i] * cx(sign, 0.0);
            }
        }
        boundaries.push(dp);
    }
    KoszulComplex {
        n,
        dim: d,
        boundaries,
    }
}

/// Exactness at every stage: `rank d_{p-1} = nullity d_p` with the `d_{-1} = 0`
/// and `d_n = 0` conventions, ranks from singular values `>= tol * sigma_max`.
pub fn koszul_is_exact(k: &KoszulComplex, tolerance: f64) -> bool {
    let n = k.n;
    for p in 0..=n {
        let rank_prev = if p == 0 {
            0
        } else {
            linalg::numeric_rank(&k.boundaries[p - 1], tolerance)
        };
        let nullity = if p == n {
            k.stage_dim(n)
        } else {
            k.stage_dim(p) - linalg::numeric_rank(&k.boundaries[p], tolerance)
        };
        if rank_prev != nullity {
            return false;
        }
    }
    true
}

/// Taylor spectrum membership: the shifted Koszul complex fails exactness.
/// Requires a commuting tuple.
pub fn taylor_membership(t: &MatrixTuple, lambda: &[Complex64]) -> Result<bool, JointError> {
    t.ensure_commuting()?;
    let shifted = t.shift(lambda)?;
    let k = koszul_build(&shifted);
    Ok(!koszul_is_exact(&k, tol::RANK_REL))
}

/// The homotopy maps `t_p : H (x) Lambda^p -> H (x) Lambda^{p-1}`, `p = 1..n`.
#[derive(Debug, Clone)]
pub struct HomotopyMaps {
    maps: Vec<CMatrix>,
}

impl HomotopyMaps {
    pub fn maps(&self) -> &[CMatrix] {
        &self.maps
    }
}

/// Build the contracting homotopy `t_p(x (x) e_{i_1..i_p}) =
/// sum_m (-1)^{m-1} B_{i_m} x (x) e_{..i_m-hat..}` from a right inverse tuple
/// `B` with `sum_i A_i B_i = I`, and return it with the residual
/// `max_p ||t_{p+1} d_p + d_{p-1} t_p - I||`.
pub fn splitting_homotopy(
    t: &MatrixTuple,
    b: &MatrixTuple,
) -> Result<(HomotopyMaps, f64), JointError> {
    let n = t.len();
    let d = t.dim();
    if b.len() != n || b.dim() != d {
        return Err(JointError::DimensionMismatch);
    }
    let mut sum = CMatrix::zeros(d, d);
    for (a, bi) in t.matrices().iter().zip(b.matrices()) {
        sum += a * bi;
    }
    let defect = linalg::operator_norm(&(sum - CMatrix::identity(d, d)));
    if defect > tol::HOMOTOPY_TOL {
        return Err(JointError::NotPartitionOfUnity(defect));
    }
    let mut maps = Vec::with_capacity(n);
    for p in 1..=n {
        let sources = combinations(n, p);
        let targets = combinations(n, p - 1);
        let target_index = |set: &[usize]| targets.iter().position(|s| s == set).unwrap();
        let mut tp = CMatrix::zeros(d * targets.len(), d * sources.len());
        for (si, s) in sources.iter().enumerate() {
            for (m, &i) in s.iter().enumerate() {
                let mut omitted = s.clone();
                omitted.remove(m);
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let ti = target_index(&omitted);
                let mut block = tp.view_mut((ti * d, si * d), (d, d));
                block += &b.matrices()[i] * cx(sign, 0.0);
            }
        }
        maps.push(tp);
    }
    // residual of t_{p+1} d_p + d_{p-1} t_p = id at every stage
    let k = koszul_build(t);
    let mut residual = 0.0f64;
    for p in 0..=n {
        let dim_p = k.stage_dim(p);
        let mut acc = CMatrix::zeros(dim_p, dim_p);
        if p < n {
            acc += &maps[p] * &k.boundaries[p];
        }
        if p > 0 {
            acc += &k.boundaries[p - 1] * &maps[p - 1];
        }
        residual = residual.max((acc - CMatrix::identity(dim_p, dim_p)).norm());
    }
    Ok((HomotopyMaps { maps }, residual))
}

/// Harte spectrum membership: the shifted tuple is not jointly bounded below
/// or not jointly surjective.
pub fn harte_membership(t: &MatrixTuple, lambda: &[Complex64]) -> Result<bool, JointError> {
    let v = t.vstack_shifted(lambda)?;
    let sv = linalg::singular_values(&v);
    let not_bounded_below = match (sv.first(), sv.last()) {
        (Some(&smax), Some(&smin)) => smin <= tol::SINGULAR_REL * smax.max(1.0),
        _ => true,
    };
    if not_bounded_below {
        return Ok(true);
    }
    let h = t.hstack_shifted(lambda)?;
    Ok(linalg::numeric_rank(&h, tol::RANK_REL) < t.dim())
}

/// Joint approximate point spectrum: only the bounded-below condition.
pub fn approx_point_membership(t: &MatrixTuple, lambda: &[Complex64]) -> Result<bool, JointError> {
    let v = t.vstack_shifted(lambda)?;
    let sv = linalg::singular_values(&v);
    Ok(match (sv.first(), sv.last()) {
        (Some(&smax), Some(&smin)) => smin <= tol::SINGULAR_REL * smax.max(1.0),
        _ => true,
    })
}

/// For a commuting normal tuple and `lambda` off the joint approximate point
/// spectrum, the explicit right inverse of the shifted tuple:
/// `B_k = S_k^* (sum_j S_j S_j^*)^{-1}` where `S_k = A_k - lambda_k`.
pub fn cho_takaguchi_inverse(
    t: &MatrixTuple,
    lambda: &[Complex64],
) -> Result<MatrixTuple, JointError> {
    t.ensure_commuting()?;
    let normal_defect = t.normality_defect();
    let scale = t
        .matrices()
        .iter()
        .map(linalg::operator_norm)
        .fold(0.0f64, f64::max);
    if normal_defect > tol::NORMAL_REL * (scale * scale).max(1.0) {
        return Err(JointError::NotNormal(normal_defect));
    }
    if approx_point_membership(t, lambda)? {
        return Err(JointError::InSpectrum);
    }
    let shifted = t.shift(lambda)?;
    let d = t.dim();
    let mut gram = CMatrix::zeros(d, d);
    for s in shifted.matrices() {
        gram += s * s.adjoint();
    }
    let inv = gram.clone().lu().try_inverse().ok_or(JointError::InSpectrum)?;
    let bs: Vec<CMatrix> = shifted
        .matrices()
        .iter()
        .map(|s| s.adjoint() * &inv)
        .collect();
    // sanity: the construction is exact up to the Gram inversion
    let mut sum = CMatrix::zeros(d, d);
    for (s, b) in shifted.matrices().iter().zip(&bs) {
        sum += s * b;
    }
    let defect = linalg::operator_norm(&(sum - CMatrix::identity(d, d)));
    if defect > tol::HOMOTOPY_TOL {
        return Err(JointError::NotPartitionOfUnity(defect));
    }
    MatrixTuple::new(bs)
}

/// Joint eigenvalues of a commuting tuple, with multiplicity: one Schur
/// decomposition of a fixed random generic combination, then each matrix read
/// off on its diagonal in that basis.
pub fn joint_eigenvalues(t: &MatrixTuple) -> Result<Vec<Vec<Complex64>>, JointError> {
    t.ensure_commuting()?;
    let d = t.dim();
    let n = t.len();
    if n == 1 {
        let eig = linalg::eigenvalues(&t.matrices()[0]).ok_or(JointError::EigenFailed)?;
        return Ok(eig.into_iter().map(|e| vec![e]).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(tol::DEFAULT_SEED ^ 0x7e16);
    let mut m = CMatrix::zeros(d, d);
    for a in t.matrices() {
        let c = cx(rng.random::<f64>() + 0.5, rng.random::<f64>() - 0.5);
        m += a * c;
    }
    let (q, _) = schur_with_rescue(&m).ok_or(JointError::EigenFailed)?;
    let mut tuples = vec![Vec::with_capacity(n); d];
    for a in t.matrices() {
        let in_basis = q.adjoint() * a * &q;
        for (i, tuple) in tuples.iter_mut().enumerate() {
            tuple.push(in_basis[(i, i)]);
        }
    }
    Ok(tuples)
}

fn schur_with_rescue(m: &CMatrix) -> Option<(CMatrix, CMatrix)> {
    let n = m.nrows();
    if let Some(s) = m.clone().try_schur(1.0e-13, 200 * n.max(10)) {
        let (q, t) = s.unpack();
        return Some((q, t));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(tol::DEFAULT_SEED ^ 0x5c09);
    for _ in 0..3 {
        let u = linalg::random_unitary(&mut rng, n);
        let conj = u.adjoint() * m * &u;
        if let Some(s) = conj.try_schur(1.0e-13, 200 * n.max(10)) {
            let (q, t) = s.unpack();
            return Some((&u * q, t));
        }
    }
    None
}

/// Result of the hyperplane-union decision.
#[derive(Debug, Clone)]
pub enum HyperplaneVerdict {
    /// The spectrum is a union of projective hyperplanes; the accepted linear
    /// forms with their multiplicities exhaust the characteristic polynomial.
    Factors(Vec<(LinearForm, usize)>),
    DoesNotFactor,
}

impl HyperplaneVerdict {
    pub fn factors(&self) -> bool {
        matches!(self, HyperplaneVerdict::Factors(_))
    }
}

/// Decide whether `p(I, A_1, ..., A_n)` is a union of projective hyperplanes.
/// Candidate forms `(1, l^1, ..., l^n)` come from the Cartesian product of the
/// individual eigenvalue lists; each accepted form contributes its maximal
/// dividing multiplicity, and the verdict is `Factors` exactly when the
/// multiplicities exhaust `deg Q`.
pub fn hyperplane_union_verdict(t: &MatrixTuple) -> Result<HyperplaneVerdict, JointError> {
    let defect = t.normality_defect();
    let scale = t
        .matrices()
        .iter()
        .map(linalg::operator_norm)
        .fold(0.0f64, f64::max);
    if defect > tol::NORMAL_REL * (scale * scale).max(1.0) {
        return Err(JointError::NotNormal(defect));
    }
    let d = t.dim();
    let mut ms = Vec::with_capacity(t.len() + 1);
    ms.push(CMatrix::identity(d, d));
    ms.extend(t.matrices().iter().cloned());
    let pencil = MatrixPencil::new(ms).map_err(JointError::Pencil)?;
    let q = pencil.char_poly()?;
    if q.is_zero() {
        return Err(JointError::Pencil(PencilError::ZeroPoly));
    }
    // deduplicated eigenvalue list per matrix
    let mut eig_lists: Vec<Vec<Complex64>> = Vec::with_capacity(t.len());
    for a in t.matrices() {
        let mut eig = linalg::eigenvalues(a).ok_or(JointError::EigenFailed)?;
        eig.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap());
        let mut dedup: Vec<Complex64> = Vec::new();
        for e in eig {
            if dedup.iter().all(|x| (x - e).norm() > 1e-8) {
                dedup.push(e);
            }
        }
        eig_lists.push(dedup);
    }
    let mut accepted: Vec<(LinearForm, usize)> = Vec::new();
    let mut seen: Vec<LinearForm> = Vec::new();
    let mut idx = vec![0usize; t.len()];
    'odometer: loop {
        let mut coeffs = vec![cx(1.0, 0.0)];
        for (j, &i) in idx.iter().enumerate() {
            coeffs.push(eig_lists[j][i]);
        }
        let form = LinearForm::new(coeffs).expect("leading 1 keeps the form nonzero");
        if !seen.iter().any(|f| f.approx_eq(&form, 1e-8)) {
            seen.push(form.clone());
            let mut mult = 0usize;
            let mut rem = q.clone();
            while let Some(quot) = rem.try_div_linear(&form, tol::HYPERPLANE_REL) {
                mult += 1;
                rem = quot;
                if rem.total_degree() == 0 {
                    break;
                }
            }
            if mult > 0 {
                accepted.push((form, mult));
            }
        }
        // advance the mixed-radix odometer
        for j in (0..idx.len()).rev() {
            idx[j] += 1;
            if idx[j] < eig_lists[j].len() {
                continue 'odometer;
            }
            idx[j] = 0;
            if j == 0 {
                break 'odometer;
            }
        }
    }
    let total: usize = accepted.iter().map(|(_, m)| m).sum();
    if total == d {
        Ok(HyperplaneVerdict::Factors(accepted))
    } else {
        Ok(HyperplaneVerdict::DoesNotFactor)
    }
}

/// Exposed for the verdict cross-check: does the tuple commute at the shared
/// threshold?
pub fn commutes(t: &MatrixTuple) -> bool {
    t.ensure_commuting().is_ok()
}

/// The characteristic polynomial of `(I, A_1, ..., A_n)`.
pub fn tuple_char_poly(t: &MatrixTuple) -> Result<MultiPoly, JointError> {
    let d = t.dim();
    let mut ms = Vec::with_capacity(t.len() + 1);
    ms.push(DMatrix::identity(d, d));
    ms.extend(t.matrices().iter().cloned());
    let p = MatrixPencil::new(ms).map_err(JointError::Pencil)?;
    Ok(p.char_poly()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(entries: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            entries.len(),
            entries.iter().map(|&x| cx(x, 0.0)),
        ))
    }

    fn diag_pair() -> MatrixTuple {
        MatrixTuple::new(vec![diag(&[1.0, 2.0]), diag(&[3.0, 4.0])]).unwrap()
    }

    fn lam(values: &[f64]) -> Vec<Complex64> {
        values.iter().map(|&x| cx(x, 0.0)).collect()
    }

    #[test]
    fn koszul_n1_is_the_matrix() {
        let t = MatrixTuple::new(vec![diag(&[1.0, 2.0])]).unwrap();
        let k = koszul_build(&t);
        assert_eq!(k.boundaries().len(), 1);
        assert!((k.boundaries()[0].clone() - diag(&[1.0, 2.0])).norm() < 1e-15);
        assert!(koszul_is_exact(&k, tol::RANK_REL), "invertible A is exact");
    }

    #[test]
    fn koszul_scalar_pair_matches_hand_wedge() {
        let a = CMatrix::from_row_slice(1, 1, &[cx(2.0, 0.0)]);
        let b = CMatrix::from_row_slice(1, 1, &[cx(3.0, 0.0)]);
        let t = MatrixTuple::new(vec![a, b]).unwrap();
        let k = koszul_build(&t);
        // d0 = [a; b], d1 = [-b, a]
        assert!((k.boundaries()[0][(0, 0)] - cx(2.0, 0.0)).norm() < 1e-15);
        assert!((k.boundaries()[0][(1, 0)] - cx(3.0, 0.0)).norm() < 1e-15);
        assert!((k.boundaries()[1][(0, 0)] - cx(-3.0, 0.0)).norm() < 1e-15);
        assert!((k.boundaries()[1][(0, 1)] - cx(2.0, 0.0)).norm() < 1e-15);
        assert!(k.chain_defect() < 1e-14);
    }

    #[test]
    fn koszul_exactness_scalar_cases() {
        let zero = MatrixTuple::new(vec![CMatrix::zeros(1, 1), CMatrix::zeros(1, 1)]).unwrap();
        assert!(!koszul_is_exact(&koszul_build(&zero), tol::RANK_REL));
        let t = MatrixTuple::new(vec![
            CMatrix::from_row_slice(1, 1, &[cx(1.0, 0.0)]),
            CMatrix::zeros(1, 1),
        ])
        .unwrap();
        assert!(koszul_is_exact(&koszul_build(&t), tol::RANK_REL));
    }

    #[test]
    fn taylor_membership_on_diag_pair() {
        let t = diag_pair();
        assert!(taylor_membership(&t, &lam(&[1.0, 3.0])).unwrap());
        assert!(!taylor_membership(&t, &lam(&[1.0, 4.0])).unwrap());
        assert!(!taylor_membership(&t, &lam(&[0.0, 0.0])).unwrap());
        assert!(taylor_membership(&t, &lam(&[2.0, 4.0])).unwrap());
    }

    #[test]
    fn taylor_rejects_noncommuting() {
        let sx = CMatrix::from_row_slice(2, 2, &[cx(0., 0.), cx(1., 0.), cx(1., 0.), cx(0., 0.)]);
        let sz = CMatrix::from_row_slice(2, 2, &[cx(1., 0.), cx(0., 0.), cx(0., 0.), cx(-1., 0.)]);
        let t = MatrixTuple::new(vec![sx, sz]).unwrap();
        assert_eq!(t.commutation(), Commutation::VerifiedFalse);
        assert!(matches!(
            taylor_membership(&t, &lam(&[0.0, 0.0])),
            Err(JointError::NotCommuting(_))
        ));
    }

    #[test]
    fn single_operator_taylor_is_eigenvalues() {
        let t = MatrixTuple::new(vec![diag(&[1.0, 2.0])]).unwrap();
        assert!(taylor_membership(&t, &lam(&[1.0])).unwrap());
        assert!(taylor_membership(&t, &lam(&[2.0])).unwrap());
        assert!(!taylor_membership(&t, &lam(&[1.5])).unwrap());
    }

    #[test]
    fn harte_and_approx_point_on_diag_pair() {
        let t = diag_pair();
        assert!(harte_membership(&t, &lam(&[1.0, 3.0])).unwrap());
        assert!(!harte_membership(&t, &lam(&[1.0, 4.0])).unwrap());
        assert!(approx_point_membership(&t, &lam(&[2.0, 4.0])).unwrap());
        assert!(!approx_point_membership(&t, &lam(&[2.0, 3.0])).unwrap());
        // approx point implies Harte
        for l in [[1.0, 3.0], [2.0, 4.0], [1.0, 4.0], [0.0, 0.0]] {
            if approx_point_membership(&t, &lam(&l)).unwrap() {
                assert!(harte_membership(&t, &lam(&l)).unwrap());
            }
        }
    }

    #[test]
    fn harte_n1_is_eigenvalues() {
        let t = MatrixTuple::new(vec![diag(&[1.0, 2.0])]).unwrap();
        assert!(harte_membership(&t, &lam(&[1.0])).unwrap());
        assert!(!harte_membership(&t, &lam(&[1.7])).unwrap());
    }

    #[test]
    fn cho_takaguchi_examples() {
        // n = 1, A = 2I, lambda = 0 -> B = I/2
        let t = MatrixTuple::new(vec![diag(&[2.0, 2.0])]).unwrap();
        let b = cho_takaguchi_inverse(&t, &lam(&[0.0])).unwrap();
        assert!((b.matrices()[0].clone() - diag(&[0.5, 0.5])).norm() < 1e-12);

        let t = diag_pair();
        let b = cho_takaguchi_inverse(&t, &lam(&[0.0, 0.0])).unwrap();
        let mut sum = CMatrix::zeros(2, 2);
        for (a, bi) in t.matrices().iter().zip(b.matrices()) {
            sum += a * bi;
        }
        assert!((sum - CMatrix::identity(2, 2)).norm() < 1e-10);

        assert!(matches!(
            cho_takaguchi_inverse(&t, &lam(&[1.0, 3.0])),
            Err(JointError::InSpectrum)
        ));
    }

    #[test]
    fn splitting_homotopy_examples() {
        // n = 1 with B = A^{-1}
        let t = MatrixTuple::new(vec![diag(&[2.0, 4.0])]).unwrap();
        let b = MatrixTuple::new(vec![diag(&[0.5, 0.25])]).unwrap();
        let (_, residual) = splitting_homotopy(&t, &b).unwrap();
        assert!(residual < 1e-14);

        // scalars (1, 0) with B = (1, 0)
        let one = CMatrix::from_row_slice(1, 1, &[cx(1.0, 0.0)]);
        let zero = CMatrix::zeros(1, 1);
        let t = MatrixTuple::new(vec![one.clone(), zero.clone()]).unwrap();
        let b = MatrixTuple::new(vec![one, zero]).unwrap();
        let (maps, residual) = splitting_homotopy(&t, &b).unwrap();
        assert_eq!(maps.maps().len(), 2);
        assert!(residual < 1e-14);

        // composed with this module's own inverse construction
        let t = diag_pair();
        let b = cho_takaguchi_inverse(&t, &lam(&[0.0, 0.0])).unwrap();
        let (_, residual) = splitting_homotopy(&t, &b).unwrap();
        assert!(residual <= tol::HOMOTOPY_TOL);

        // sum condition violated
        let t = diag_pair();
        let bad = MatrixTuple::new(vec![diag(&[1.0, 1.0]), diag(&[1.0, 1.0])]).unwrap();
        assert!(matches!(
            splitting_homotopy(&t, &bad),
            Err(JointError::NotPartitionOfUnity(_))
        ));
    }

    #[test]
    fn splitting_residual_small_implies_exact() {
        let t = diag_pair();
        let b = cho_takaguchi_inverse(&t, &lam(&[0.0, 0.0])).unwrap();
        let (_, residual) = splitting_homotopy(&t, &b).unwrap();
        assert!(residual <= tol::HOMOTOPY_TOL);
        assert!(koszul_is_exact(&koszul_build(&t), tol::RANK_REL));
    }

    #[test]
    fn joint_eigenvalues_of_diag_pair() {
        let t = diag_pair();
        let eigs = joint_eigenvalues(&t).unwrap();
        assert_eq!(eigs.len(), 2);
        let mut found = [false, false];
        for e in &eigs {
            if (e[0] - cx(1.0, 0.0)).norm() < 1e-8 && (e[1] - cx(3.0, 0.0)).norm() < 1e-8 {
                found[0] = true;
            }
            if (e[0] - cx(2.0, 0.0)).norm() < 1e-8 && (e[1] - cx(4.0, 0.0)).norm() < 1e-8 {
                found[1] = true;
            }
        }
        assert!(found[0] && found[1]);
    }

    #[test]
    fn joint_eigenvalues_recover_conjugated_diagonals() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let u = linalg::random_unitary(&mut rng, 4);
        let d1 = diag(&[1.0, -0.5, 2.0, 0.25]);
        let d2 = diag(&[0.0, 1.0, -1.0, 3.0]);
        let t = MatrixTuple::new(vec![
            &u * &d1 * u.adjoint(),
            &u * &d2 * u.adjoint(),
        ])
        .unwrap();
        let eigs = joint_eigenvalues(&t).unwrap();
        for want in [(1.0, 0.0), (-0.5, 1.0), (2.0, -1.0), (0.25, 3.0)] {
            assert!(
                eigs.iter().any(|e| (e[0] - cx(want.0, 0.0)).norm() < 1e-8
                    && (e[1] - cx(want.1, 0.0)).norm() < 1e-8),
                "missing joint eigenvalue {want:?} in {eigs:?}"
            );
        }
    }

    #[test]
    fn verdict_factors_for_commuting_normal_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = linalg::random_unitary(&mut rng, 3);
        let d1 = diag(&[1.0, 2.0, -1.0]);
        let d2 = diag(&[0.5, 0.5, 2.0]);
        let t = MatrixTuple::new(vec![
            &u * &d1 * u.adjoint(),
            &u * &d2 * u.adjoint(),
        ])
        .unwrap();
        match hyperplane_union_verdict(&t).unwrap() {
            HyperplaneVerdict::Factors(forms) => {
                let total: usize = forms.iter().map(|(_, m)| m).sum();
                assert_eq!(total, 3);
            }
            HyperplaneVerdict::DoesNotFactor => panic!("commuting normal pair must factor"),
        }
        assert!(commutes(&t));
    }

    #[test]
    fn verdict_rejects_pauli_pair() {
        let sx = CMatrix::from_row_slice(2, 2, &[cx(0., 0.), cx(1., 0.), cx(1., 0.), cx(0., 0.)]);
        let sz = CMatrix::from_row_slice(2, 2, &[cx(1., 0.), cx(0., 0.), cx(0., 0.), cx(-1., 0.)]);
        let t = MatrixTuple::new(vec![sx, sz]).unwrap();
        assert!(!commutes(&t));
        assert!(matches!(
            hyperplane_union_verdict(&t).unwrap(),
            HyperplaneVerdict::DoesNotFactor
        ));
    }

    #[test]
    fn verdict_single_matrix_always_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = linalg::random_unitary(&mut rng, 4);
        let d1 = diag(&[1.0, 2.0, 2.0, -3.0]);
        let t = MatrixTuple::new(vec![&u * &d1 * u.adjoint()]).unwrap();
        assert!(hyperplane_union_verdict(&t).unwrap().factors());
    }

    #[test]
    fn verdict_requires_normal_input() {
        let jordan = CMatrix::from_row_slice(2, 2, &[cx(1., 0.), cx(1., 0.), cx(0., 0.), cx(1., 0.)]);
        let t = MatrixTuple::new(vec![jordan.clone(), jordan]).unwrap();
        assert!(matches!(
            hyperplane_union_verdict(&t),
            Err(JointError::NotNormal(_))
        ));
    }

    #[test]
    fn chain_property_for_random_commuting_tuples() {
        // commuting tuples as polynomials in one random matrix
        let mut rng = ChaCha8Rng::seed_from_u64(tol::DEFAULT_SEED);
        for _ in 0..10 {
            let d = 2 + (rng.random::<u32>() % 5) as usize;
            let n = 2 + (rng.random::<u32>() % 3) as usize;
            let seed = linalg::random_complex_matrix(&mut rng, d, d);
            let mut ms = Vec::new();
            for _ in 0..n {
                let c0 = cx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                let c1 = cx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                let c2 = cx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                let m = CMatrix::identity(d, d) * c0 + &seed * c1 + &seed * &seed * c2;
                ms.push(m);
            }
            let t = MatrixTuple::new(ms).unwrap();
            assert_eq!(t.commutation(), Commutation::VerifiedTrue);
            let k = koszul_build(&t);
            let scale: f64 = k
                .boundaries()
                .iter()
                .map(|b| b.norm())
                .fold(0.0, f64::max);
            assert!(k.chain_defect() <= 1e-10 * scale.max(1.0) * scale.max(1.0));
        }
    }
}
