//! The renormalization dynamics on `P^2`.
//!
//! The degree-0 rational function
//! `tau(z) = (z0^2 - z1^2 - z2^2) / (2 z1 z2)` semiconjugates the
//! renormalization map `F_pi` to the Chebyshev map `T(x) = 2x^2 - 1` on the
//! Riemann sphere, so every dynamical question about `F_pi` reduces to the
//! one-variable orbit of `tau`. The dihedral spectrum is exactly
//! `{tau in [-1, 1]}`, which is also the Julia set of `F_pi`.
//!
//! Orbit products (`p_n`) run in double-double arithmetic: the Chebyshev map
//! doubles angle errors every step, and f64 alone drifts past 1e-8 by n = 30.

use num_complex::Complex64;
use thiserror::Error;

use crate::dd::CDd;
use crate::linalg::cx;
use crate::pencil::{LinearForm, PencilError, ProjPoint};
use crate::tol;

#[derive(Debug, Error)]
pub enum DynError {
    #[error("point is in the indeterminacy set of the map")]
    Indeterminate,
    #[error("point lies on the degenerate locus (tau infinite, z1 z2 = 0, or z0^2 = z2^2)")]
    DegenerateLocus,
    #[error("tau is infinite at this point")]
    TauInfinite,
    #[error("spectrum point supplied (tau in [-1, 1])")]
    SpectrumPoint,
    #[error("indeterminacy order {0} is not available for this map")]
    UnsupportedOrder(u32),
    #[error(transparent)]
    Pencil(#[from] PencilError),
}

/// A point of the Riemann sphere `C + {inf}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            ExtendedComplex::Finite(c) => Some(c),
            ExtendedComplex::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }
}

impl std::fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedComplex::Finite(c) => write!(f, "{}", crate::io::format_complex(*c)),
            ExtendedComplex::Infinity => write!(f, "inf"),
        }
    }
}

/// Chordal metric on the Riemann sphere.
pub fn chordal_distance(a: ExtendedComplex, b: ExtendedComplex) -> f64 {
    use ExtendedComplex::*;
    match (a, b) {
        (Finite(x), Finite(y)) => {
            (x - y).norm() / ((1.0 + x.norm_sqr()).sqrt() * (1.0 + y.norm_sqr()).sqrt())
        }
        (Finite(x), Infinity) | (Infinity, Finite(x)) => 1.0 / (1.0 + x.norm_sqr()).sqrt(),
        (Infinity, Infinity) => 0.0,
    }
}

/// `tau(z)`: 0 when `z0^2 - z1^2 - z2^2` vanishes (within 1e-12 after
/// canonical normalization), infinity when the numerator survives but
/// `z1 z2 = 0`, and the ratio otherwise. Degree-0 homogeneous, total on `P^2`.
pub fn tau(z: &ProjPoint) -> ExtendedComplex {
    assert_eq!(z.len(), 3, "tau is defined on P^2");
    let c = z.canonical();
    let [z0, z1, z2] = [c.coords()[0], c.coords()[1], c.coords()[2]];
    let num = z0 * z0 - z1 * z1 - z2 * z2;
    if num.norm() <= tol::TAU_ZERO_TOL {
        return ExtendedComplex::Finite(cx(0.0, 0.0));
    }
    let den = 2.0 * z1 * z2;
    if den.norm() == 0.0 {
        return ExtendedComplex::Infinity;
    }
    ExtendedComplex::Finite(num / den)
}

/// One Chebyshev step `T(x) = 2x^2 - 1`, with `T(inf) = inf`.
pub fn chebyshev(x: ExtendedComplex) -> ExtendedComplex {
    match x {
        ExtendedComplex::Finite(c) => {
            let y = 2.0 * c * c - 1.0;
            if y.re.is_finite() && y.im.is_finite() {
                ExtendedComplex::Finite(y)
            } else {
                ExtendedComplex::Infinity
            }
        }
        ExtendedComplex::Infinity => ExtendedComplex::Infinity,
    }
}

/// k-fold composition of `T`.
pub fn chebyshev_iterate(x: ExtendedComplex, k: u32) -> ExtendedComplex {
    let mut v = x;
    for _ in 0..k {
        v = chebyshev(v);
    }
    v
}

/// The degree-3 map `F(z) = [z0 (z0^2 - z1^2 - z2^2) : z1^2 z2 : z2 (z0^2 - z2^2)]`.
pub fn f_raw(z: &ProjPoint) -> Result<ProjPoint, DynError> {
    assert_eq!(z.len(), 3, "F is defined on P^2");
    let c = z.canonical();
    let [z0, z1, z2] = [c.coords()[0], c.coords()[1], c.coords()[2]];
    let u = z0 * z0 - z1 * z1 - z2 * z2;
    let w = vec![z0 * u, z1 * z1 * z2, z2 * (z0 * z0 - z2 * z2)];
    if w.iter().all(|c| c.norm() < 1e-12) {
        return Err(DynError::Indeterminate);
    }
    ProjPoint::new(w).map_err(|_| DynError::Indeterminate)
}

/// The renormalization map
/// `F_pi(z) = [2 tau(z) z0 : z1 : 2 tau(z) z2 + z1]`, extended by the
/// degree-0 limit `[z0 : 0 : z2]` where `tau = inf`. Indeterminate exactly at
/// `[+-1 : 0 : 1]`.
pub fn f_pi(z: &ProjPoint) -> Result<ProjPoint, DynError> {
    assert_eq!(z.len(), 3, "F_pi is defined on P^2");
    let c = z.canonical();
    for p in f_pi_indeterminacy() {
        if c.approx_eq(&p, tol::PROJ_POINT_TOL) {
            return Err(DynError::Indeterminate);
        }
    }
    let [z0, z1, z2] = [c.coords()[0], c.coords()[1], c.coords()[2]];
    match tau(&c) {
        ExtendedComplex::Finite(t) => {
            let two_t = 2.0 * t;
            let w = vec![two_t * z0, z1, two_t * z2 + z1];
            ProjPoint::new(w).map_err(|_| DynError::Indeterminate)
        }
        ExtendedComplex::Infinity => {
            ProjPoint::new(vec![z0, cx(0.0, 0.0), z2]).map_err(|_| DynError::Indeterminate)
        }
    }
}

fn exact_point(coords: &[f64]) -> ProjPoint {
    ProjPoint::from_real(coords).expect("nonzero literal point")
}

fn f_pi_indeterminacy() -> Vec<ProjPoint> {
    vec![exact_point(&[1.0, 0.0, 1.0]), exact_point(&[-1.0, 0.0, 1.0])]
}

/// Which map an indeterminacy query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    /// The degree-3 polynomial map `F`.
    F,
    /// The degree-0-homogeneous renormalization map `F_pi`.
    FPi,
}

/// Indeterminacy locus: a finite point list plus, for `F` at order 2, whole
/// projective lines (given as linear forms). `I_2(F)` contains the lines
/// `z0 = z2` and `z0 = -z2`, which is why the paper trades `F` for `F_pi`.
#[derive(Debug, Clone)]
pub struct IndeterminacySet {
    pub points: Vec<ProjPoint>,
    pub lines: Vec<LinearForm>,
}

impl IndeterminacySet {
    pub fn contains(&self, z: &ProjPoint, tolerance: f64) -> bool {
        if self.points.iter().any(|p| p.approx_eq(z, tolerance)) {
            return true;
        }
        let c = z.canonical();
        self.lines.iter().any(|l| {
            let v: Complex64 = l
                .coeffs()
                .iter()
                .zip(c.coords())
                .map(|(a, b)| a * b)
                .sum();
            v.norm() <= tolerance * c.coords().iter().map(|x| x.norm()).sum::<f64>()
        })
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.lines.is_empty()
    }
}

/// `I_k` of the chosen map. For `F` only `k <= 2` is known in closed form;
/// for `F_pi` the sets stabilize at `I_1 = {[+-1 : 0 : 1]}` for every `k >= 1`.
pub fn indeterminacy_set(map: MapKind, k: u32) -> Result<IndeterminacySet, DynError> {
    let empty = IndeterminacySet {
        points: Vec::new(),
        lines: Vec::new(),
    };
    match (map, k) {
        (_, 0) => Ok(empty),
        (MapKind::F, 1) => Ok(IndeterminacySet {
            points: vec![
                exact_point(&[1.0, 1.0, 0.0]),
                exact_point(&[-1.0, 1.0, 0.0]),
                exact_point(&[0.0, 1.0, 0.0]),
                exact_point(&[1.0, 0.0, 1.0]),
                exact_point(&[-1.0, 0.0, 1.0]),
            ],
            lines: Vec::new(),
        }),
        (MapKind::F, 2) => Ok(IndeterminacySet {
            // every point of the lines z0 = +-z2 lands in I_1 after one step
            points: vec![exact_point(&[1.0, 1.0, 0.0]), exact_point(&[-1.0, 1.0, 0.0])],
            lines: vec![
                LinearForm::from_real(&[1.0, 0.0, -1.0]).expect("nonzero form"),
                LinearForm::from_real(&[1.0, 0.0, 1.0]).expect("nonzero form"),
            ],
        }),
        (MapKind::F, k) => Err(DynError::UnsupportedOrder(k)),
        (MapKind::FPi, _) => Ok(IndeterminacySet {
            points: f_pi_indeterminacy(),
            lines: Vec::new(),
        }),
    }
}

/// `|tau(F_pi(z)) - T(tau(z))|` in the chordal metric. Defined away from the
/// degenerate locus: `tau` finite, `z1 z2 != 0`, and `|z0^2 - z2^2| >= delta`
/// after canonical normalization (on `z0^2 = z2^2` both sides of the identity
/// collapse to 0/0 and the `tau := 0` convention breaks it).
pub fn semiconjugacy_residual(z: &ProjPoint) -> Result<f64, DynError> {
    let c = z.canonical();
    let [z0, z1, z2] = [c.coords()[0], c.coords()[1], c.coords()[2]];
    if (z1 * z2).norm() == 0.0 {
        return Err(DynError::DegenerateLocus);
    }
    if (z0 * z0 - z2 * z2).norm() < tol::DEGENERATE_LOCUS_DELTA {
        return Err(DynError::DegenerateLocus);
    }
    let t = match tau(&c) {
        ExtendedComplex::Finite(t) => t,
        ExtendedComplex::Infinity => return Err(DynError::DegenerateLocus),
    };
    let image = f_pi(&c).map_err(|_| DynError::DegenerateLocus)?;
    let lhs = tau(&image);
    let rhs = chebyshev(ExtendedComplex::Finite(t));
    Ok(chordal_distance(lhs, rhs))
}

/// True when `tau` lies on the spectrum segment: real within 1e-9 and
/// `|Re tau| <= 1 + 1e-9`.
pub fn is_spectrum_tau(t: ExtendedComplex) -> bool {
    match t {
        ExtendedComplex::Finite(c) => {
            c.im.abs() <= tol::REAL_AXIS_TOL && c.re.abs() <= 1.0 + tol::REAL_AXIS_TOL
        }
        ExtendedComplex::Infinity => false,
    }
}

/// Shared double-double Chebyshev orbit: returns `(p_n, partial sums f_j)` up
/// to the requested n. `None` for `p_j` means the product has left the f64
/// range (the orbit escaped far enough that `1/p_j` is exactly 0).
struct OrbitProducts {
    p: Vec<Option<Complex64>>,
    f: Vec<Complex64>,
}

fn orbit_products(t: Complex64, n: u32) -> OrbitProducts {
    let mut x = CDd::new(t.re, t.im);
    let mut prod = CDd::ONE;
    let mut diverged = false;
    let mut p = Vec::with_capacity(n as usize);
    let mut f = Vec::with_capacity(n as usize);
    let mut sum = cx(0.0, 0.0);
    for _ in 1..=n {
        // p_j = 2^j * prod_{k=0}^{j-1} T^k(tau) = p_{j-1} * 2 * T^{j-1}(tau)
        if !diverged {
            prod = prod.mul(x).mul(CDd::new(2.0, 0.0));
            if prod.norm_sqr_f64() > 1e200 || !prod.norm_sqr_f64().is_finite() {
                diverged = true;
            }
        }
        if diverged {
            p.push(None);
        } else {
            let (re, im) = prod.to_complex();
            let pj = cx(re, im);
            p.push(Some(pj));
            sum += 1.0 / pj;
        }
        f.push(sum);
        if !diverged {
            x = x.chebyshev_step();
            if x.norm_sqr_f64() > 1e200 || !x.norm_sqr_f64().is_finite() {
                diverged = true;
            }
        }
    }
    OrbitProducts { p, f }
}

/// `p_n(z) = 2^n prod_{k=0}^{n-1} T^k(tau(z))`. Errors when `tau = inf`.
pub fn p_n(z: &ProjPoint, n: u32) -> Result<ExtendedComplex, DynError> {
    let t = tau(z).finite().ok_or(DynError::TauInfinite)?;
    if n == 0 {
        return Ok(ExtendedComplex::Finite(cx(1.0, 0.0)));
    }
    let orbit = orbit_products(t, n);
    Ok(match orbit.p[n as usize - 1] {
        Some(p) => ExtendedComplex::Finite(p),
        None => ExtendedComplex::Infinity,
    })
}

/// `f_n(z) = sum_{j=1}^n 1/p_j(z)`, defined off the spectrum where no `p_j`
/// vanishes.
pub fn f_n(z: &ProjPoint, n: u32) -> Result<Complex64, DynError> {
    let t = tau(z);
    if is_spectrum_tau(t) {
        return Err(DynError::SpectrumPoint);
    }
    let t = t.finite().ok_or(DynError::TauInfinite)?;
    if n == 0 {
        return Ok(cx(0.0, 0.0));
    }
    let orbit = orbit_products(t, n);
    Ok(orbit.f[n as usize - 1])
}

/// Closed-form n-th iterate
/// `F_pi^n(z) = [z0 : z1 / p_n(z) : z2 + z1 f_n(z)]` on the Fatou set.
pub fn iterate_closed(z: &ProjPoint, n: u32) -> Result<ProjPoint, DynError> {
    let t = tau(z);
    if is_spectrum_tau(t) {
        return Err(DynError::SpectrumPoint);
    }
    let t = t.finite().ok_or(DynError::TauInfinite)?;
    let c = z.canonical();
    let [z0, z1, z2] = [c.coords()[0], c.coords()[1], c.coords()[2]];
    if n == 0 {
        return Ok(c);
    }
    let orbit = orbit_products(t, n);
    let middle = match orbit.p[n as usize - 1] {
        Some(p) => z1 / p,
        None => cx(0.0, 0.0),
    };
    let last = z2 + z1 * orbit.f[n as usize - 1];
    ProjPoint::new(vec![z0, middle, last]).map_err(DynError::Pencil)
}

/// The limit `f(z) = tau - sqrt(tau^2 - 1)` of `f_n`, taken as the root of
/// `w^2 - 2 tau w + 1 = 0` with `|w| < 1` (the series forces the bounded
/// branch; principal-branch square roots pick the wrong sheet across cuts).
/// At `tau = inf` the bounded root degenerates to 0.
pub fn f_limit(z: &ProjPoint) -> Result<Complex64, DynError> {
    let t = tau(z);
    if is_spectrum_tau(t) {
        return Err(DynError::SpectrumPoint);
    }
    let t = match t {
        ExtendedComplex::Finite(t) => t,
        ExtendedComplex::Infinity => return Ok(cx(0.0, 0.0)),
    };
    let s = (t * t - 1.0).sqrt();
    let r1 = t - s;
    let r2 = t + s;
    Ok(if r1.norm() <= r2.norm() { r1 } else { r2 })
}

/// The normal limit of the iteration on the Fatou set:
/// `F_*(z) = [z0 : 0 : z2 + z1 f(z)]`.
pub fn limit_map(z: &ProjPoint) -> Result<ProjPoint, DynError> {
    let f = f_limit(z)?;
    let c = z.canonical();
    let [z0, z1, z2] = [c.coords()[0], c.coords()[1], c.coords()[2]];
    ProjPoint::new(vec![z0, cx(0.0, 0.0), z2 + z1 * f]).map_err(DynError::Pencil)
}

/// First `n >= 0` with `|T^n(tau)| > r`, or `None` if the orbit stays within
/// radius `r` for `maxiter` steps. `tau = inf` escapes at step 0.
pub fn escape_count(t: ExtendedComplex, maxiter: u32, r: f64) -> Option<u32> {
    let mut x = match t {
        ExtendedComplex::Infinity => return Some(0),
        ExtendedComplex::Finite(c) => c,
    };
    if x.norm_sqr() > r * r {
        return Some(0);
    }
    for k in 1..=maxiter {
        x = 2.0 * x * x - 1.0;
        if !x.re.is_finite() || !x.im.is_finite() || x.norm_sqr() > r * r {
            return Some(k);
        }
    }
    None
}

/// Classification mode for `julia_membership`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JuliaMode {
    /// `tau` real (within 1e-9) and in `[-1, 1]`.
    Analytic,
    /// The Chebyshev orbit of `tau` stays bounded by the escape radius.
    Escape,
}

pub fn julia_membership(z: &ProjPoint, mode: JuliaMode) -> bool {
    julia_membership_with(z, mode, tol::MAX_ITER, tol::ESCAPE_RADIUS)
}

pub fn julia_membership_with(z: &ProjPoint, mode: JuliaMode, maxiter: u32, r: f64) -> bool {
    let t = tau(z);
    match mode {
        JuliaMode::Analytic => is_spectrum_tau(t),
        JuliaMode::Escape => escape_count(t, maxiter, r).is_none(),
    }
}

/// Summary of one escape-time orbit.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    pub start: ProjPoint,
    pub tau0: ExtendedComplex,
    /// `None` means the orbit stayed bounded for the whole budget.
    pub escape: Option<u32>,
    /// `|T^k(tau)|` at the last computed step.
    pub final_abs: f64,
}

pub fn orbit_record(z: &ProjPoint, maxiter: u32, r: f64) -> OrbitRecord {
    let t0 = tau(z);
    let escape = escape_count(t0, maxiter, r);
    let steps = escape.unwrap_or(maxiter);
    let final_abs = match chebyshev_iterate(t0, steps) {
        ExtendedComplex::Finite(c) => c.norm(),
        ExtendedComplex::Infinity => f64::INFINITY,
    };
    OrbitRecord {
        start: z.clone(),
        tau0: t0,
        escape,
        final_abs,
    }
}
