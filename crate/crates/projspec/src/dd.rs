//! Double-double arithmetic (~106-bit mantissa).
//!
//! The Chebyshev orbit map doubles angles, so a plain f64 orbit loses one bit
//! of accuracy per step; by step 30 that is already past the 1e-8 envelope the
//! orbit products have to satisfy. Carrying the orbit in double-double keeps
//! the products accurate to ~1e-15 over the ranges used here.

/// A value represented as an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    // mul_add is a fused multiply-add, so the error term is exact.
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// pi/2 to double-double precision.
    pub const FRAC_PI_2: Dd = Dd {
        hi: 1.570796326794896558e0,
        lo: 6.123233995736766036e-17,
    };
    /// 2*pi to double-double precision.
    pub const TWO_PI: Dd = Dd {
        hi: 6.283185307179586232e0,
        lo: 2.449293598294706414e-16,
    };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, x);
        let p2 = p2 + self.lo * x;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul_f64(q2));
        let q3 = r.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }
}

/// sin and cos by Taylor series; requires `|x| <= pi/4 + eps`.
fn sin_cos_taylor(x: Dd) -> (Dd, Dd) {
    let x2 = x.mul(x);
    // 1/k! computed in double-double; exact integer products up to 30!.
    let mut sin = x;
    let mut cos = Dd::ONE;
    let mut term = x; // x^(2k+1)/(2k+1)! running term for sin
    let mut cterm = Dd::ONE; // x^(2k)/(2k)! running term for cos
    let mut fact_idx = 0.0f64;
    for _ in 0..16 {
        // advance cos term by two factorial steps
        fact_idx += 1.0;
        cterm = cterm.mul(x2).div(Dd::from_f64(2.0 * fact_idx - 1.0).mul_f64(2.0 * fact_idx));
        if fact_idx as u32 % 2 == 1 {
            cos = cos.sub(cterm);
        } else {
            cos = cos.add(cterm);
        }
        term = term
            .mul(x2)
            .div(Dd::from_f64(2.0 * fact_idx).mul_f64(2.0 * fact_idx + 1.0));
        if fact_idx as u32 % 2 == 1 {
            sin = sin.sub(term);
        } else {
            sin = sin.add(term);
        }
        if term.hi.abs() < 1e-35 && cterm.hi.abs() < 1e-35 {
            break;
        }
    }
    (sin, cos)
}

/// sin and cos of an arbitrary double-double angle, with range reduction by
/// multiples of pi/2. Accurate while `|x|` stays modest (here `|x| < 4*pi`).
pub fn sin_cos(x: Dd) -> (Dd, Dd) {
    let q = (x.hi / Dd::FRAC_PI_2.hi).round();
    let r = x.sub(Dd::FRAC_PI_2.mul_f64(q));
    let (s, c) = sin_cos_taylor(r);
    match (q as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    }
}

/// arccos refined to double-double by Newton iteration on `cos(t) = x`.
pub fn acos(x: f64) -> Dd {
    let mut t = Dd::from_f64(x.acos());
    for _ in 0..2 {
        let (s, c) = sin_cos(t);
        // t <- t + (cos t - x)/sin t
        let corr = c.sub(Dd::from_f64(x)).div(s);
        t = t.add(corr);
    }
    t
}

/// Complex double-double, just enough for Chebyshev orbit products.
#[derive(Debug, Clone, Copy)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ONE: CDd = CDd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    #[inline]
    pub fn new(re: f64, im: f64) -> CDd {
        CDd {
            re: Dd::from_f64(re),
            im: Dd::from_f64(im),
        }
    }

    #[inline]
    pub fn mul(self, other: CDd) -> CDd {
        CDd {
            re: self.re.mul(other.re).sub(self.im.mul(other.im)),
            im: self.re.mul(other.im).add(self.im.mul(other.re)),
        }
    }

    /// The Chebyshev step `x -> 2x^2 - 1`.
    #[inline]
    pub fn chebyshev_step(self) -> CDd {
        let sq = self.mul(self);
        CDd {
            re: sq.re.mul_f64(2.0).sub(Dd::ONE),
            im: sq.im.mul_f64(2.0),
        }
    }

    #[inline]
    pub fn to_complex(self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn norm_sqr_f64(self) -> f64 {
        let r = self.re.hi;
        let i = self.im.hi;
        r * r + i * i
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_mul_roundtrip() {
        let a = Dd::from_f64(1.0).div(Dd::from_f64(3.0));
        let three_a = a.add(a).add(a);
        assert!((three_a.to_f64() - 1.0).abs() < 1e-30);
        let b = a.mul(Dd::from_f64(3.0));
        assert!((b.to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn trig_matches_known_values() {
        let (s, c) = sin_cos(Dd::from_f64(1.0));
        // sin(1), cos(1) to 30+ digits
        assert!((s.hi - 0.8414709848078965).abs() < 1e-15);
        assert!((c.hi - 0.5403023058681398).abs() < 1e-15);
        // check the identity s^2 + c^2 = 1 well below f64 precision
        let one = s.mul(s).add(c.mul(c));
        assert!((one.to_f64() - 1.0).abs() < 1e-28);
    }

    #[test]
    fn acos_inverts_cos() {
        for &x in &[0.9, 0.5403023058681398, -0.3, 0.0, -0.99] {
            let t = acos(x);
            let (_, c) = sin_cos(t);
            assert!(
                (c.to_f64() - x).abs() < 1e-28,
                "acos({x}) not inverted: {}",
                (c.to_f64() - x).abs()
            );
        }
    }

    #[test]
    fn angle_doubling_matches_250_bit_reference() {
        // sin(2^n * acos(x)) for the exact f64 x below, reference values from
        // 250-bit arithmetic.
        let theta = acos(0.5403023058681398);
        let mut u = theta;
        for n in 1..=30 {
            u = u.add(u);
            while u.hi > Dd::TWO_PI.hi {
                u = u.sub(Dd::TWO_PI);
            }
            if n == 20 {
                let (s, _) = sin_cos(u);
                assert!((s.to_f64() - 0.3304931399657410388823205).abs() < 1e-13);
            }
        }
        let (s, _) = sin_cos(u);
        assert!((s.to_f64() - (-0.617326462839432332310431)).abs() < 1e-13);
    }

    #[test]
    fn complex_chebyshev_step() {
        let x = CDd::new(0.3, 0.4);
        let y = x.chebyshev_step();
        let (re, im) = y.to_complex();
        // 2(0.3+0.4i)^2 - 1 = 2(0.09 - 0.16 + 0.24i) - 1 = -1.14 + 0.48i
        assert!((re - (-1.14)).abs() < 1e-15);
        assert!((im - 0.48).abs() < 1e-15);
    }
}
