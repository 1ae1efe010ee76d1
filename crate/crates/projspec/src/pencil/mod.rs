//! Multiparameter linear pencils `A(z) = z_0 A_0 + ... + z_n A_n`, projective
//! points, and the singularity test that defines the projective spectrum.

pub mod poly;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{self, CMatrix};
use crate::tol;

pub use poly::{LinearForm, MultiPoly};

#[derive(Debug, Error)]
pub enum PencilError {
    #[error("projective point must have a nonzero finite coordinate")]
    ZeroPoint,
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("pencil needs at least two matrices")]
    TooFewMatrices,
    #[error("all pencil matrices must be square of equal size, got {0}x{1}")]
    DimensionMismatch(usize, usize),
    #[error("pencil matrices must not all be zero")]
    AllZero,
    #[error("point has {got} coordinates, pencil expects {expected}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("singularity test requires a square matrix")]
    NotSquare,
    #[error("symbolic determinant limited to dimension {max}, pencil has {got}")]
    SizeBound { max: usize, got: usize },
    #[error("operation requires a nonzero polynomial")]
    ZeroPoly,
    #[error("too many variables for the packed monomial representation (max 8)")]
    TooManyVariables,
}

/// A point of complex projective space, stored as homogeneous coordinates.
#[derive(Debug, Clone)]
pub struct ProjPoint {
    coords: Vec<Complex64>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self, PencilError> {
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(PencilError::NonFinite);
        }
        if coords.is_empty() || coords.iter().all(|c| c.norm_sqr() == 0.0) {
            return Err(PencilError::ZeroPoint);
        }
        Ok(ProjPoint { coords })
    }

    /// Convenience constructor from real coordinates.
    pub fn from_real(coords: &[f64]) -> Result<Self, PencilError> {
        Self::new(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// Number of homogeneous coordinates (`n + 1` on `P^n`).
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Canonical form: divide by the max-modulus coordinate, ties broken by
    /// the lowest index; that coordinate becomes exactly 1.
    pub fn canonical(&self) -> ProjPoint {
        let mut best = 0;
        let mut best_mod = self.coords[0].norm();
        for (i, c) in self.coords.iter().enumerate().skip(1) {
            let m = c.norm();
            if m > best_mod {
                best = i;
                best_mod = m;
            }
        }
        let pivot = self.coords[best];
        let mut coords: Vec<Complex64> = self.coords.iter().map(|c| c / pivot).collect();
        coords[best] = Complex64::new(1.0, 0.0);
        ProjPoint { coords }
    }

    pub fn scale(&self, c: Complex64) -> ProjPoint {
        ProjPoint {
            coords: self.coords.iter().map(|z| z * c).collect(),
        }
    }

    /// Sine of the principal angle between the two lines, computed from the
    /// wedge-product minors so that nearly equal points resolve down to
    /// machine precision. Agrees with comparing canonical forms entrywise
    /// away from modulus ties, and stays stable at the ties.
    pub fn distance(&self, other: &ProjPoint) -> f64 {
        assert_eq!(self.coords.len(), other.coords.len());
        let mut wedge = 0.0;
        for i in 0..self.coords.len() {
            for j in (i + 1)..self.coords.len() {
                wedge += (self.coords[i] * other.coords[j] - self.coords[j] * other.coords[i])
                    .norm_sqr();
            }
        }
        let na: f64 = self.coords.iter().map(|c| c.norm_sqr()).sum();
        let nb: f64 = other.coords.iter().map(|c| c.norm_sqr()).sum();
        (wedge / (na * nb)).sqrt().min(1.0)
    }

    pub fn approx_eq(&self, other: &ProjPoint, tolerance: f64) -> bool {
        self.len() == other.len() && self.distance(other) <= tolerance
    }
}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = self.canonical();
        write!(f, "[")?;
        for (i, z) in c.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            write!(f, "{}", crate::io::format_complex(*z))?;
        }
        write!(f, "]")
    }
}

/// An ordered tuple `(A_0, ..., A_n)` of equal-size square matrices.
#[derive(Debug, Clone)]
pub struct MatrixPencil {
    matrices: Vec<CMatrix>,
}

impl MatrixPencil {
    pub fn new(matrices: Vec<CMatrix>) -> Result<Self, PencilError> {
        if matrices.len() < 2 {
            return Err(PencilError::TooFewMatrices);
        }
        let d = matrices[0].nrows();
        for m in &matrices {
            if m.nrows() != d || m.ncols() != d || d == 0 {
                return Err(PencilError::DimensionMismatch(m.nrows(), m.ncols()));
            }
            if m.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
                return Err(PencilError::NonFinite);
            }
        }
        if matrices.iter().all(|m| m.iter().all(|e| e.norm_sqr() == 0.0)) {
            return Err(PencilError::AllZero);
        }
        Ok(MatrixPencil { matrices })
    }

    /// Parameter count `n` (the pencil has `n + 1` matrices).
    pub fn param_count(&self) -> usize {
        self.matrices.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// `A(z)` evaluated with the raw (non-canonical) coordinates of `z`.
    pub fn evaluate(&self, z: &ProjPoint) -> Result<CMatrix, PencilError> {
        if z.len() != self.matrices.len() {
            return Err(PencilError::CoordinateCount {
                expected: self.matrices.len(),
                got: z.len(),
            });
        }
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for (c, m) in z.coords().iter().zip(&self.matrices) {
            out += m * *c;
        }
        Ok(out)
    }

    /// Membership of `z` in the projective spectrum: `A(z)` singular.
    pub fn spectrum_membership(&self, z: &ProjPoint) -> Result<bool, PencilError> {
        let m = self.evaluate(z)?;
        is_singular(&m, tol::SINGULAR_REL)
    }

    /// The characteristic polynomial `Q(z) = det A(z)` expanded exactly.
    pub fn char_poly(&self) -> Result<MultiPoly, PencilError> {
        poly::char_poly(self)
    }
}

/// `sigma_min(M) <= tol * max(1, sigma_max(M))` via a full SVD.
pub fn is_singular(m: &CMatrix, tolerance: f64) -> Result<bool, PencilError> {
    if m.nrows() != m.ncols() {
        return Err(PencilError::NotSquare);
    }
    Ok(linalg::is_singular(m, tolerance))
}

/// The hyperplane `H_w = { z : w_0 z_0 + ... + w_n z_n = 0 }` is contained in
/// the zero set of `q`.
pub fn hyperplane_contained(q: &MultiPoly, w: &LinearForm) -> Result<bool, PencilError> {
    poly::hyperplane_contained(q, w)
}

/// Identity matrix helper used throughout the crate.
pub fn identity(d: usize) -> CMatrix {
    DMatrix::identity(d, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cx;

    fn sigma_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[cx(0., 0.), cx(1., 0.), cx(1., 0.), cx(0., 0.)])
    }

    fn dinfty_level1() -> MatrixPencil {
        MatrixPencil::new(vec![identity(2), sigma_x(), identity(2)]).unwrap()
    }

    #[test]
    fn evaluate_identity_case() {
        let p = MatrixPencil::new(vec![identity(3), CMatrix::zeros(3, 3)]).unwrap();
        let z = ProjPoint::new(vec![cx(2.0, 1.0), cx(1.0, 0.0)]).unwrap();
        let m = p.evaluate(&z).unwrap();
        assert_eq!(m[(0, 0)], cx(2.0, 1.0));
        assert_eq!(m[(0, 1)], cx(0.0, 0.0));
    }

    #[test]
    fn evaluate_dinfty_level1_at_ones() {
        let p = dinfty_level1();
        let z = ProjPoint::from_real(&[1.0, 1.0, 1.0]).unwrap();
        let m = p.evaluate(&z).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[cx(2., 0.), cx(1., 0.), cx(1., 0.), cx(2., 0.)]);
        assert!((m - expect).norm() < 1e-14);
    }

    #[test]
    fn evaluate_is_linear_in_z() {
        let p = dinfty_level1();
        let z = ProjPoint::new(vec![cx(0.3, 0.1), cx(-1.0, 0.5), cx(0.0, 2.0)]).unwrap();
        let twice = p.evaluate(&z.scale(cx(2.0, 0.0))).unwrap();
        let once = p.evaluate(&z).unwrap();
        assert!((twice - once * cx(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn singularity_examples() {
        assert!(is_singular(&CMatrix::zeros(2, 2), tol::SINGULAR_REL).unwrap());
        assert!(!is_singular(&identity(4), tol::SINGULAR_REL).unwrap());
        let m = CMatrix::from_row_slice(2, 2, &[cx(2., 0.), cx(1., 0.), cx(1., 0.), cx(2., 0.)]);
        assert!(!is_singular(&m, tol::SINGULAR_REL).unwrap());
        assert!(is_singular(&CMatrix::zeros(2, 3), tol::SINGULAR_REL).is_err());
    }

    #[test]
    fn membership_examples() {
        let p = dinfty_level1();
        // sigma - I is singular (sigma has eigenvalue 1)
        let z = ProjPoint::from_real(&[0.0, 1.0, -1.0]).unwrap();
        assert!(p.spectrum_membership(&z).unwrap());
        let z = ProjPoint::from_real(&[1.0, 0.0, 0.0]).unwrap();
        assert!(!p.spectrum_membership(&z).unwrap());
    }

    #[test]
    fn membership_is_scale_invariant() {
        let p = dinfty_level1();
        let z = ProjPoint::from_real(&[0.0, 1.0, -1.0]).unwrap();
        assert_eq!(
            p.spectrum_membership(&z).unwrap(),
            p.spectrum_membership(&z.scale(cx(5.0, 0.0))).unwrap()
        );
        let w = ProjPoint::new(vec![cx(0.4, 0.2), cx(1.0, -0.3), cx(0.1, 0.9)]).unwrap();
        assert_eq!(
            p.spectrum_membership(&w).unwrap(),
            p.spectrum_membership(&w.scale(cx(0.0, -3.0))).unwrap()
        );
    }

    #[test]
    fn canonical_normalization() {
        let z = ProjPoint::new(vec![cx(0.0, 2.0), cx(1.0, 0.0), cx(0.0, -2.0)]).unwrap();
        let c = z.canonical();
        // tie between |2i| and |-2i| broken by the lower index
        assert_eq!(c.coords()[0], cx(1.0, 0.0));
        assert!(c.coords()[1].norm() <= 1.0 + 1e-15);
    }

    #[test]
    fn projective_distance_ignores_phase_and_scale() {
        let z = ProjPoint::new(vec![cx(1.0, 0.0), cx(0.0, 1.0), cx(0.5, 0.5)]).unwrap();
        let w = z.scale(cx(0.0, -2.7));
        assert!(z.approx_eq(&w, 1e-12));
        let far = ProjPoint::from_real(&[1.0, 0.0, 0.0]).unwrap();
        assert!(!z.approx_eq(&far, 1e-3));
    }

    #[test]
    fn nonemptiness_on_random_lines() {
        // Q restricted to a random projective line is a degree-d univariate
        // polynomial; its roots give singular points of the pencil.
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(tol::DEFAULT_SEED);
        for trial in 0..10 {
            let d = 2 + trial % 3;
            let ms = vec![
                linalg::random_complex_matrix(&mut rng, d, d),
                linalg::random_complex_matrix(&mut rng, d, d),
                linalg::random_complex_matrix(&mut rng, d, d),
            ];
            let p = MatrixPencil::new(ms).unwrap();
            let z = find_singular_on_random_line(&p, &mut rng).expect("nonempty spectrum");
            let m = p.evaluate(&z).unwrap();
            let sv = linalg::singular_values(&m);
            assert!(
                sv.last().unwrap() <= &(1e-6 * sv.first().unwrap().max(1.0)),
                "root should be (near-)singular: {:?}",
                sv
            );
        }
    }

    /// Test oracle: restrict `det A(u + s v)` to a random line, interpolate the
    /// univariate coefficients from d+1 samples, and take a companion-matrix
    /// root.
    fn find_singular_on_random_line(
        p: &MatrixPencil,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> Option<ProjPoint> {
        let n1 = p.param_count() + 1;
        let d = p.dim();
        let u = linalg::random_complex_vector(rng, n1);
        let v = linalg::random_complex_vector(rng, n1);
        let at = |s: Complex64| -> Complex64 {
            let coords: Vec<Complex64> = u.iter().zip(&v).map(|(a, b)| a + s * b).collect();
            let z = ProjPoint::new(coords).unwrap();
            p.evaluate(&z).unwrap().lu().determinant()
        };
        // interpolate on the (d+1)-st roots of unity
        let k = d + 1;
        let samples: Vec<Complex64> = (0..k)
            .map(|j| {
                let ang = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
                at(Complex64::new(ang.cos(), ang.sin()))
            })
            .collect();
        // inverse DFT for the coefficients
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k];
        for (m, c) in coeffs.iter_mut().enumerate() {
            for (j, s) in samples.iter().enumerate() {
                let ang = -2.0 * std::f64::consts::PI * (m * j) as f64 / k as f64;
                *c += s * Complex64::new(ang.cos(), ang.sin());
            }
            *c /= k as f64;
        }
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        if scale < 1e-12 {
            // the whole line is singular
            return Some(ProjPoint::new(u).unwrap());
        }
        let deg = (0..k).rev().find(|&m| coeffs[m].norm() > 1e-10 * scale)?;
        if deg == 0 {
            return None;
        }
        // companion matrix of the monic normalization
        let lead = coeffs[deg];
        let mut comp = CMatrix::zeros(deg, deg);
        for i in 1..deg {
            comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..deg {
            comp[(i, deg - 1)] = -coeffs[i] / lead;
        }
        let roots = linalg::eigenvalues(&comp)?;
        let s = roots[0];
        let coords: Vec<Complex64> = u.iter().zip(&v).map(|(a, b)| a + s * b).collect();
        ProjPoint::new(coords).ok()
    }
}
