use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Binary floating-point real with a fixed mantissa length.
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        Real { v, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(n, prec), prec)
    }

    pub fn from_u64(n: u64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_u64(n, prec), prec)
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(x, prec), prec)
    }

    pub fn ratio(p: i64, q: u64, prec: usize) -> Self {
        let num = BigFloat::from_i64(p, prec + 8);
        let den = BigFloat::from_u64(q, prec + 8);
        Self::wrap(num.div(&den, prec, RM), prec)
    }

    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec, RM)), prec)
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        let mut v = self.v.clone();
        // set_precision only fails on NaN/Inf, which stay as they are.
        let _ = v.set_precision(prec, RM);
        Self::wrap(v, prec)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn sin(&self) -> Self {
        let v = with_consts(|cc| self.v.sin(self.prec, RM, cc));
        Self::wrap(v, self.prec)
    }

    pub fn cos(&self) -> Self {
        let v = with_consts(|cc| self.v.cos(self.prec, RM, cc));
        Self::wrap(v, self.prec)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.prec)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.v.is_zero() && self.v.is_positive()
    }

    /// Nearest `f64`, truncating the mantissa to its top word.
    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_inf_neg() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        if self.v.is_zero() {
            return 0.0;
        }
        let Some((m, _, sign, e, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        let Some(&top) = m.last() else {
            return 0.0;
        };
        let mag = (top as f64) * 2f64.powi(e - 64);
        match sign {
            Sign::Neg => -mag,
            Sign::Pos => mag,
        }
    }

    /// Nearest integer, if it fits in an `i64`.
    pub fn round_i64(&self) -> Option<i64> {
        let f = self.to_f64();
        if !f.is_finite() || f.abs() > 9.0e15 {
            return None;
        }
        let guess = f.round() as i64;
        // Correct the f64 guess with one exact comparison in each direction.
        let half = Real::ratio(1, 2, self.prec);
        for cand in [guess - 1, guess, guess + 1] {
            let d = (self - &Real::from_i64(cand, self.prec)).abs();
            if d <= half {
                return Some(cand);
            }
        }
        None
    }

    pub fn floor_i64(&self) -> Option<i64> {
        let f = self.to_f64();
        if !f.is_finite() || f.abs() > 9.0e15 {
            return None;
        }
        let g = f.floor() as i64;
        [g + 1, g, g - 1].into_iter().find(|&cand| Real::from_i64(cand, self.prec) <= *self)
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        let s = with_consts(|cc| self.v.format(Radix::Dec, RM, cc));
        match s {
            Ok(s) => truncate_sci(&s, digits),
            Err(_) => format!("{:e}", self.to_f64()),
        }
    }
}

fn truncate_sci(s: &str, digits: usize) -> String {
    let (mant, exp) = match s.find('e') {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let mut out = String::new();
    let mut seen = 0;
    for c in mant.chars() {
        if c.is_ascii_digit() {
            if seen == digits {
                break;
            }
            seen += 1;
        }
        out.push(c);
    }
    out.push_str(exp);
    out
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(24))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{:.*}", p, self.to_f64()),
            None => write!(f, "{}", self.to_f64()),
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.prec.max(rhs.prec);
                Real::wrap(self.v.$m(&rhs.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

/// Complex number over [`Real`].
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Real,
    pub im: Real,
}

impl BigComplex {
    pub fn new(re: Real, im: Real) -> Self {
        BigComplex { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.precision();
        BigComplex {
            re,
            im: Real::zero(p),
        }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_real(Real::zero(prec))
    }

    pub fn one(prec: usize) -> Self {
        Self::from_real(Real::one(prec))
    }

    pub fn i(prec: usize) -> Self {
        BigComplex::new(Real::zero(prec), Real::one(prec))
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        Self::from_real(Real::from_i64(n, prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        BigComplex::new(Real::from_f64(re, prec), Real::from_f64(im, prec))
    }

    /// `exp(2πi p/q)`; quarter turns are exact.
    pub fn root_of_unity(p: i64, q: u64, prec: usize) -> Self {
        assert!(q > 0, "root of unity with zero order");
        let r = p.rem_euclid(q as i64) as u64;
        if (4 * r as u128).is_multiple_of(q as u128) {
            let (re, im) = match 4 * r / q {
                0 => (1, 0),
                1 => (0, 1),
                2 => (-1, 0),
                _ => (0, -1),
            };
            return BigComplex::new(Real::from_i64(re, prec), Real::from_i64(im, prec));
        }
        let guard = prec + 16;
        let angle = Real::pi(guard) * Real::from_u64(2 * r, guard) / Real::from_u64(q, guard);
        BigComplex::new(
            angle.cos().with_precision(prec),
            angle.sin().with_precision(prec),
        )
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        BigComplex::new(self.re.with_precision(prec), self.im.with_precision(prec))
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: &Real) -> Self {
        BigComplex::new(&self.re * k, &self.im * k)
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// `|self - other|` as an `f64`.
    pub fn dist(&self, other: &Self) -> f64 {
        (self - other).abs().to_f64()
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        let p = f.precision().unwrap_or(6);
        if im == 0.0 {
            write!(f, "{re:.p$}")
        } else if im < 0.0 {
            write!(f, "{re:.p$}-{:.p$}i", -im)
        } else {
            write!(f, "{re:.p$}+{im:.p$}i")
        }
    }
}

impl Add<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        let d = rhs.norm_sqr();
        let n = self * &rhs.conj();
        BigComplex::new(&n.re / &d, &n.im / &d)
    }
}

macro_rules! complex_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &BigComplex) -> BigComplex {
                (&self).$m(rhs)
            }
        }
        impl $tr<BigComplex> for &BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                self.$m(&rhs)
            }
        }
    };
}

complex_owned!(Add, add);
complex_owned!(Sub, sub);
complex_owned!(Mul, mul);
complex_owned!(Div, div);

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-&self.re, -&self.im)
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 192;

    #[test]
    fn to_f64_handles_zero_and_sign() {
        assert_eq!(Real::zero(P).to_f64(), 0.0);
        assert_eq!(Real::from_i64(-3, P).to_f64(), -3.0);
        assert!((Real::ratio(1, 3, P).to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn sqrt_is_accurate_far_beyond_f64() {
        let r = Real::from_i64(3, P).sqrt();
        let err = (r.square() - Real::from_i64(3, P)).abs();
        assert!(err < Real::from_f64(1e-55, P));
    }

    #[test]
    fn roots_of_unity_have_unit_modulus() {
        for q in 1..30u64 {
            for p in -3..(q as i64 + 3) {
                let z = BigComplex::root_of_unity(p, q, P);
                let err = (z.norm_sqr() - Real::one(P)).abs().to_f64();
                assert!(err < 1e-55, "e({p},{q})");
            }
        }
    }

    #[test]
    fn root_of_unity_powers_compose() {
        let z = BigComplex::root_of_unity(5, 12, P);
        let mut w = BigComplex::one(P);
        for _ in 0..12 {
            w = &w * &z;
        }
        assert!(w.dist(&BigComplex::one(P)) < 1e-50);
        assert_eq!(BigComplex::root_of_unity(3, 4, P), -BigComplex::i(P));
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(Real::from_f64(2.5000001, P).round_i64(), Some(3));
        assert_eq!(Real::from_f64(-2.7, P).round_i64(), Some(-3));
        assert_eq!(Real::from_f64(-2.2, P).floor_i64(), Some(-3));
        assert_eq!(Real::from_i64(7, P).floor_i64(), Some(7));
    }

    #[test]
    fn division_by_complex() {
        let a = BigComplex::new(Real::from_i64(1, P), Real::from_i64(2, P));
        let b = BigComplex::new(Real::from_i64(3, P), Real::from_i64(-1, P));
        let q = &a / &b;
        assert!((&q * &b).dist(&a) < 1e-55);
    }

    #[test]
    fn sci_string_truncates() {
        let s = Real::pi(P).to_sci_string(10);
        assert!(s.starts_with("3.14159265"), "{s}");
    }
}
