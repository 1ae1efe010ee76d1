//! Sparse multivariate polynomials with complex coefficients.
//!
//! Monomials pack one 8-bit exponent per variable into a u64 key, which caps
//! the representation at 8 variables and degree 255 per variable; the exact
//! determinant expansion is limited to dimension 16 anyway, so there is ample
//! headroom. Coefficients below `tol::COEFF_PRUNE` are dropped after every
//! arithmetic step to keep the maps sparse.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{MatrixPencil, PencilError};
use crate::tol;

const MAX_VARS: usize = 8;

#[derive(Debug, Clone)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<u64, Complex64>,
}

fn exp_of(key: u64, var: usize) -> u32 {
    ((key >> (8 * var)) & 0xff) as u32
}

fn bump(key: u64, var: usize, by: u32) -> u64 {
    debug_assert!(exp_of(key, var) + by <= 255);
    key + ((by as u64) << (8 * var))
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Result<Self, PencilError> {
        if nvars == 0 || nvars > MAX_VARS {
            return Err(PencilError::TooManyVariables);
        }
        Ok(MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(nvars: usize, c: Complex64) -> Result<Self, PencilError> {
        let mut p = Self::zero(nvars)?;
        if c.norm() > tol::COEFF_PRUNE {
            p.terms.insert(0, c);
        }
        Ok(p)
    }

    pub fn variable(nvars: usize, var: usize) -> Result<Self, PencilError> {
        let mut p = Self::zero(nvars)?;
        p.terms.insert(bump(0, var, 1), Complex64::new(1.0, 0.0));
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the monomial with the given exponents (zero if absent).
    pub fn coeff(&self, exps: &[u32]) -> Complex64 {
        assert_eq!(exps.len(), self.nvars);
        let mut key = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            key = bump(key, i, e);
        }
        self.terms.get(&key).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// All terms as (exponent vector, coefficient).
    pub fn terms(&self) -> Vec<(Vec<u32>, Complex64)> {
        self.terms
            .iter()
            .map(|(&k, &c)| ((0..self.nvars).map(|v| exp_of(k, v)).collect(), c))
            .collect()
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|&k| (0..self.nvars).map(|v| exp_of(k, v)).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self
            .terms
            .keys()
            .map(|&k| (0..self.nvars).map(|v| exp_of(k, v)).sum::<u32>());
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    fn insert(&mut self, key: u64, c: Complex64) {
        let entry = self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() > tol::COEFF_PRUNE);
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (&k, &c) in &other.terms {
            out.insert(k, c);
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> MultiPoly {
        let mut out = MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(&k, &v)| (k, v * c)).collect(),
        };
        out.prune();
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly {
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (&ka, &ca) in &self.terms {
            for (&kb, &cb) in &other.terms {
                out.insert(ka + kb, ca * cb);
            }
        }
        out.prune();
        out
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.nvars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (&k, &c) in &self.terms {
            let mut t = c;
            for (v, zv) in z.iter().enumerate() {
                let e = exp_of(k, v);
                if e > 0 {
                    t *= zv.powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitute `z_k = -(sum_{i != k} w_i z_i)/w_k`, i.e. restrict to the
    /// hyperplane `H_w` using its rank-n parametrization by the remaining
    /// variables.
    pub fn substitute_hyperplane(&self, w: &LinearForm) -> MultiPoly {
        assert_eq!(w.coeffs.len(), self.nvars);
        let k = w.pivot();
        let mut lin = MultiPoly {
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (i, &wi) in w.coeffs.iter().enumerate() {
            if i != k && wi.norm() > 0.0 {
                lin.insert(bump(0, i, 1), -wi / w.coeffs[k]);
            }
        }
        // powers of the substitution polynomial, built on demand
        let max_pow = self.terms.keys().map(|&key| exp_of(key, k)).max().unwrap_or(0);
        let mut pows: Vec<MultiPoly> = Vec::with_capacity(max_pow as usize + 1);
        pows.push(MultiPoly::constant(self.nvars, Complex64::new(1.0, 0.0)).unwrap());
        for p in 1..=max_pow {
            let next = pows[p as usize - 1].mul(&lin);
            pows.push(next);
        }
        let mut out = MultiPoly {
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (&key, &c) in &self.terms {
            let e = exp_of(key, k);
            let base = key - ((e as u64) << (8 * k));
            for (&pk, &pc) in &pows[e as usize].terms {
                out.insert(base + pk, c * pc);
            }
        }
        out.prune();
        out
    }

    /// Exact long division by the linear form `w`, in the pivot variable.
    /// Returns the quotient when the remainder is negligible relative to the
    /// input's largest coefficient.
    pub fn try_div_linear(&self, w: &LinearForm, rel_tol: f64) -> Option<MultiPoly> {
        assert_eq!(w.coeffs.len(), self.nvars);
        if self.is_zero() {
            return Some(self.clone());
        }
        let k = w.pivot();
        let wk = w.coeffs[k];
        let mut rest = MultiPoly {
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (i, &wi) in w.coeffs.iter().enumerate() {
            if i != k && wi.norm() > 0.0 {
                rest.insert(bump(0, i, 1), wi);
            }
        }
        let scale = self.max_coeff().max(1.0);
        let mut rem = self.clone();
        let mut quo = MultiPoly::zero(self.nvars).unwrap();
        loop {
            let m = rem.terms.keys().map(|&key| exp_of(key, k)).max().unwrap_or(0);
            if m == 0 {
                break;
            }
            // peel the top z_k layer: t has exponent m-1 in z_k
            let top: Vec<(u64, Complex64)> = rem
                .terms
                .iter()
                .filter(|(&key, _)| exp_of(key, k) == m)
                .map(|(&key, &c)| (key, c))
                .collect();
            let mut t = MultiPoly::zero(self.nvars).unwrap();
            for (key, c) in &top {
                rem.terms.remove(key);
                t.insert(key - (1u64 << (8 * k)), c / wk);
            }
            rem = rem.sub(&t.mul(&rest));
            quo = quo.add(&t);
        }
        if rem.max_coeff() <= rel_tol * scale {
            Some(quo)
        } else {
            None
        }
    }
}

impl std::fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut items: Vec<(Vec<u32>, Complex64)> = self.terms();
        items.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then(b.0.cmp(&a.0))
        });
        for (i, (exps, c)) in items.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", crate::io::format_complex(*c))?;
            for (v, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*z{v}")?,
                    _ => write!(f, "*z{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// A nonzero linear form `w_0 z_0 + ... + w_n z_n`.
#[derive(Debug, Clone)]
pub struct LinearForm {
    coeffs: Vec<Complex64>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self, PencilError> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(PencilError::NonFinite);
        }
        if coeffs.is_empty() || coeffs.iter().all(|c| c.norm_sqr() == 0.0) {
            return Err(PencilError::ZeroPoint);
        }
        Ok(LinearForm { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self, PencilError> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Index of the max-modulus coefficient, lowest on ties.
    fn pivot(&self) -> usize {
        let mut best = 0;
        let mut best_mod = self.coeffs[0].norm();
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            if c.norm() > best_mod {
                best = i;
                best_mod = c.norm();
            }
        }
        best
    }

    /// Canonical form, same convention as projective points.
    pub fn canonical(&self) -> LinearForm {
        let p = self.coeffs[self.pivot()];
        let mut coeffs: Vec<Complex64> = self.coeffs.iter().map(|c| c / p).collect();
        coeffs[self.pivot()] = Complex64::new(1.0, 0.0);
        LinearForm { coeffs }
    }

    pub fn approx_eq(&self, other: &LinearForm, tolerance: f64) -> bool {
        if self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        let a = super::ProjPoint::new(self.coeffs.clone()).unwrap();
        let b = super::ProjPoint::new(other.coeffs.clone()).unwrap();
        a.approx_eq(&b, tolerance)
    }

    pub fn as_poly(&self) -> MultiPoly {
        let mut p = MultiPoly::zero(self.coeffs.len()).unwrap();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.norm() > 0.0 {
                p.insert(bump(0, i, 1), c);
            }
        }
        p
    }
}

/// Exact symbolic determinant of the pencil, by dynamic programming over
/// column subsets (division-free, so no pivot growth to worry about).
pub fn char_poly(p: &MatrixPencil) -> Result<MultiPoly, PencilError> {
    let d = p.dim();
    let nvars = p.param_count() + 1;
    if d > tol::CHAR_POLY_MAX_DIM {
        return Err(PencilError::SizeBound {
            max: tol::CHAR_POLY_MAX_DIM,
            got: d,
        });
    }
    if nvars > MAX_VARS {
        return Err(PencilError::TooManyVariables);
    }
    // linear entries L[r][c] = sum_i (A_i)[r,c] z_i
    let mut entries: Vec<Vec<MultiPoly>> = Vec::with_capacity(d);
    for r in 0..d {
        let mut row = Vec::with_capacity(d);
        for c in 0..d {
            let mut e = MultiPoly::zero(nvars)?;
            for (i, m) in p.matrices().iter().enumerate() {
                let a = m[(r, c)];
                if a.norm() > 0.0 {
                    e.insert(bump(0, i, 1), a);
                }
            }
            row.push(e);
        }
        entries.push(row);
    }
    // level r holds minors of the first r rows on every column subset of size r
    let mut level: BTreeMap<u32, MultiPoly> = BTreeMap::new();
    level.insert(0, MultiPoly::constant(nvars, Complex64::new(1.0, 0.0))?);
    for r in 0..d {
        let mut next: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (&mask, minor) in &level {
            if minor.is_zero() {
                continue;
            }
            for c in 0..d {
                let bit = 1u32 << c;
                if mask & bit != 0 {
                    continue;
                }
                if entries[r][c].is_zero() {
                    continue;
                }
                // new inversions: used columns greater than c, i.e. r - (used below c)
                let below = (mask & (bit - 1)).count_ones() as usize;
                let sign = if (r - below) % 2 == 0 { 1.0 } else { -1.0 };
                let contrib = minor.mul(&entries[r][c]).scale(Complex64::new(sign, 0.0));
                match next.get_mut(&(mask | bit)) {
                    Some(acc) => *acc = acc.add(&contrib),
                    None => {
                        next.insert(mask | bit, contrib);
                    }
                }
            }
        }
        level = next;
    }
    let full = (1u32 << d) - 1;
    Ok(level.remove(&full).unwrap_or(MultiPoly::zero(nvars)?))
}

/// True when `q` vanishes identically on the hyperplane `H_w`: substitute the
/// rank-n parametrization and require every remaining coefficient to be
/// negligible relative to `q`'s largest coefficient.
pub fn hyperplane_contained(q: &MultiPoly, w: &LinearForm) -> Result<bool, PencilError> {
    if q.is_zero() {
        return Err(PencilError::ZeroPoly);
    }
    let restricted = q.substitute_hyperplane(w);
    Ok(restricted.max_coeff() <= tol::HYPERPLANE_REL * q.max_coeff().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cx;
    use crate::pencil::{identity, MatrixPencil, ProjPoint};
    use crate::linalg::CMatrix;
    use rand::SeedableRng;

    fn trivial_rep_pencil() -> MatrixPencil {
        // 1-dimensional trivial representation with two generators
        let one = CMatrix::from_row_slice(1, 1, &[cx(1.0, 0.0)]);
        MatrixPencil::new(vec![one.clone(), one.clone(), one]).unwrap()
    }

    #[test]
    fn char_poly_trivial_rep() {
        let q = char_poly(&trivial_rep_pencil()).unwrap();
        assert_eq!(q.term_count(), 3);
        assert!((q.coeff(&[1, 0, 0]) - cx(1.0, 0.0)).norm() < 1e-14);
        assert!((q.coeff(&[0, 1, 0]) - cx(1.0, 0.0)).norm() < 1e-14);
        assert!((q.coeff(&[0, 0, 1]) - cx(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn char_poly_dinfty_level1() {
        let sigma = CMatrix::from_row_slice(2, 2, &[cx(0., 0.), cx(1., 0.), cx(1., 0.), cx(0., 0.)]);
        let p = MatrixPencil::new(vec![identity(2), sigma, identity(2)]).unwrap();
        let q = char_poly(&p).unwrap();
        // (z0 + z2)^2 - z1^2
        assert!((q.coeff(&[2, 0, 0]) - cx(1.0, 0.0)).norm() < 1e-14);
        assert!((q.coeff(&[0, 0, 2]) - cx(1.0, 0.0)).norm() < 1e-14);
        assert!((q.coeff(&[1, 0, 1]) - cx(2.0, 0.0)).norm() < 1e-14);
        assert!((q.coeff(&[0, 2, 0]) - cx(-1.0, 0.0)).norm() < 1e-14);
        assert!(q.is_homogeneous());
        assert_eq!(q.total_degree(), 2);
    }

    #[test]
    fn char_poly_matches_numeric_determinant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(tol::DEFAULT_SEED);
        let d = 4;
        let p = MatrixPencil::new(vec![
            crate::linalg::random_complex_matrix(&mut rng, d, d),
            crate::linalg::random_complex_matrix(&mut rng, d, d),
            crate::linalg::random_complex_matrix(&mut rng, d, d),
        ])
        .unwrap();
        let q = char_poly(&p).unwrap();
        for _ in 0..100 {
            let z = crate::linalg::random_complex_vector(&mut rng, 3);
            let sym = q.eval(&z);
            let num = p
                .evaluate(&ProjPoint::new(z.clone()).unwrap())
                .unwrap()
                .lu()
                .determinant();
            assert!(
                (sym - num).norm() <= tol::CHAR_POLY_SAMPLE_REL * (1.0 + sym.norm()),
                "symbolic {sym} vs numeric {num}"
            );
        }
    }

    #[test]
    fn char_poly_respects_size_bound() {
        let d = tol::CHAR_POLY_MAX_DIM + 1;
        let p = MatrixPencil::new(vec![identity(d), identity(d)]).unwrap();
        assert!(matches!(char_poly(&p), Err(PencilError::SizeBound { .. })));
    }

    #[test]
    fn hyperplane_containment_examples() {
        // Q = z0 + z1 + z2 on w = (1,1,1): Q is the form itself
        let q = LinearForm::from_real(&[1.0, 1.0, 1.0]).unwrap().as_poly();
        let w = LinearForm::from_real(&[1.0, 1.0, 1.0]).unwrap();
        assert!(hyperplane_contained(&q, &w).unwrap());

        // Q = (z0+z2)^2 - z1^2 = (z0+z1+z2)(z0-z1+z2)
        let s = LinearForm::from_real(&[1.0, 1.0, 1.0]).unwrap().as_poly();
        let t = LinearForm::from_real(&[1.0, -1.0, 1.0]).unwrap().as_poly();
        let q = s.mul(&t);
        assert!(hyperplane_contained(&q, &w).unwrap());

        // Q = z0^2 - z1^2 - z2^2 does not vanish on H_w
        let z0 = MultiPoly::variable(3, 0).unwrap();
        let z1 = MultiPoly::variable(3, 1).unwrap();
        let z2 = MultiPoly::variable(3, 2).unwrap();
        let q = z0.mul(&z0).sub(&z1.mul(&z1)).sub(&z2.mul(&z2));
        assert!(!hyperplane_contained(&q, &w).unwrap());

        let zero = MultiPoly::zero(3).unwrap();
        assert!(hyperplane_contained(&zero, &w).is_err());
    }

    #[test]
    fn containment_implies_vanishing_at_samples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(tol::DEFAULT_SEED ^ 1);
        let s = LinearForm::from_real(&[1.0, 1.0, 1.0]).unwrap().as_poly();
        let t = LinearForm::from_real(&[1.0, -1.0, 1.0]).unwrap().as_poly();
        let q = s.mul(&t);
        let w = LinearForm::from_real(&[1.0, 1.0, 1.0]).unwrap();
        assert!(hyperplane_contained(&q, &w).unwrap());
        for _ in 0..50 {
            // random point of H_w: z0 = -(z1 + z2)
            let z1 = cx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let z2 = cx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let z = [-(z1 + z2), z1, z2];
            assert!(q.eval(&z).norm() < 1e-10);
        }
    }

    #[test]
    fn linear_division_and_multiplicity() {
        let l = LinearForm::from_real(&[1.0, 1.0, 1.0]).unwrap();
        let lp = l.as_poly();
        let q = lp.mul(&lp).mul(&lp); // L^3
        let q1 = q.try_div_linear(&l, tol::HYPERPLANE_REL).unwrap();
        let q2 = q1.try_div_linear(&l, tol::HYPERPLANE_REL).unwrap();
        let q3 = q2.try_div_linear(&l, tol::HYPERPLANE_REL).unwrap();
        assert!((q3.coeff(&[0, 0, 0]) - cx(1.0, 0.0)).norm() < 1e-12);
        assert!(q3.try_div_linear(&l, tol::HYPERPLANE_REL).is_none() || q3.total_degree() == 0);
        // a form that does not divide
        let other = LinearForm::from_real(&[1.0, -2.0, 0.5]).unwrap();
        assert!(q.try_div_linear(&other, tol::HYPERPLANE_REL).is_none());
    }

    use rand::Rng;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn eval_is_compatible_with_mul(seed in 0u64..1000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            let z = crate::linalg::random_complex_vector(&mut rng, 3);
            let lhs = a.mul(&b).eval(&z);
            let rhs = a.eval(&z) * b.eval(&z);
            prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
        }
    }

    fn random_poly(rng: &mut rand_chacha::ChaCha8Rng) -> MultiPoly {
        let mut p = MultiPoly::zero(3).unwrap();
        for _ in 0..6 {
            let e: Vec<u32> = (0..3).map(|_| rng.random_range(0..3u32)).collect();
            let mut key = 0u64;
            for (i, &ei) in e.iter().enumerate() {
                key = bump(key, i, ei);
            }
            p.insert(key, cx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        }
        p.prune();
        p
    }
}
