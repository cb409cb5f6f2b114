//! Exact Gaussian rational arithmetic.
//!
//! A [`Scalar`] is a complex number `re + im*i` whose real and imaginary
//! parts are arbitrary-precision rationals. All arithmetic is exact; the
//! canonical reduced form (positive denominators, coprime numerator and
//! denominator) is maintained by the underlying rational type, so equality
//! is value equality.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

pub type Rat = BigRational;

/// Build a rational from an integer pair, e.g. `rat(1, 2)`.
pub fn rat(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Gaussian rational `re + im*i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    pub re: Rat,
    pub im: Rat,
}

impl Scalar {
    pub fn new(re: Rat, im: Rat) -> Self {
        Scalar { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        Scalar { re, im: Rat::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rat(Rat::from(BigInt::from(n)))
    }

    /// `p/q` as a real scalar.
    pub fn from_frac(p: i64, q: i64) -> Self {
        Scalar::from_rat(rat(p, q))
    }

    pub fn zero() -> Self {
        Scalar::from_int(0)
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar::new(Rat::zero(), Rat::one())
    }

    /// `a + b*i` from integer parts.
    pub fn complex(a: i64, b: i64) -> Self {
        Scalar::new(Rat::from(BigInt::from(a)), Rat::from(BigInt::from(b)))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2 = re^2 + im^2`, an exact rational.
    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Rational upper bound `|re| + |im| >= |z|`. The modulus itself is
    /// irrational in general; every inequality that needs `|z|` from above
    /// uses this bound instead.
    pub fn abs_bound(&self) -> Rat {
        self.re.abs() + self.im.abs()
    }

    /// Exact multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero scalar");
        Scalar::new(&self.re / &n, -&self.im / &n)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact square root within the Gaussian rationals, when one exists.
    pub fn sqrt_exact(&self) -> Option<Scalar> {
        if self.im.is_zero() {
            if self.re.is_negative() {
                return rat_sqrt_exact(&(-self.re.clone()))
                    .map(|r| Scalar::new(Rat::zero(), r));
            }
            return rat_sqrt_exact(&self.re).map(Scalar::from_rat);
        }
        // (u+vi)^2 = a+bi  =>  u^2 - v^2 = a, 2uv = b, u^2 + v^2 = |a+bi|.
        let r = rat_sqrt_exact(&self.norm_sqr())?;
        let u2 = (&self.re + &r) / Rat::from(BigInt::from(2));
        let u = rat_sqrt_exact(&u2)?;
        if u.is_zero() {
            return None;
        }
        let v = &self.im / (Rat::from(BigInt::from(2)) * &u);
        let cand = Scalar::new(u, v);
        if &(&cand * &cand) == self {
            Some(cand)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

/// Exact square root of a nonnegative rational, if it is a rational square.
pub fn rat_sqrt_exact(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer();
    let d = x.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    // Scale down huge numerators/denominators before converting.
    let n = x.numer();
    let d = x.denom();
    let bits = n.bits().max(d.bits());
    if bits <= 1000 {
        let nf = bigint_to_f64(n);
        let df = bigint_to_f64(d);
        nf / df
    } else {
        let shift = bits - 500;
        let nf = bigint_to_f64(&(n >> shift));
        let df = bigint_to_f64(&(d >> shift));
        nf / df
    }
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    let (sign, digits) = n.to_u64_digits();
    let mut val = 0.0f64;
    for &d in digits.iter().rev() {
        val = val * 18446744073709551616.0 + d as f64;
    }
    if sign == Sign::Minus {
        -val
    } else {
        val
    }
}

pub fn rat_to_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl Scalar {
    /// Canonical text form, accepted back by the polynomial grammar:
    /// `0`, `3`, `-3/2`, `i`, `-i`, `2/3*i`, `(1/3+2/3*i)`, `(1-2*i)`.
    pub fn to_canonical_string(&self) -> String {
        if self.im.is_zero() {
            return rat_to_string(&self.re);
        }
        let im_part = |im: &Rat| -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", rat_to_string(im))
            }
        };
        if self.re.is_zero() {
            return im_part(&self.im);
        }
        let re_s = rat_to_string(&self.re);
        if self.im.is_negative() {
            let m = -self.im.clone();
            let ms = if m.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", rat_to_string(&m))
            };
            format!("({}-{})", re_s, ms)
        } else {
            format!("({}+{})", re_s, im_part(&self.im))
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string())
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_canonical_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        crate::parse::parse_scalar(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let a = Scalar::complex(1, 2);
        let b = Scalar::complex(3, -1);
        assert_eq!(&a + &b, Scalar::complex(4, 1));
        assert_eq!(&a * &b, Scalar::complex(5, 5));
        let q = &a / &b;
        assert_eq!(&q * &b, a);
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(Scalar::from_int(3).to_canonical_string(), "3");
        assert_eq!(Scalar::from_frac(-3, 2).to_canonical_string(), "-3/2");
        assert_eq!(Scalar::i().to_canonical_string(), "i");
        assert_eq!((-Scalar::i()).to_canonical_string(), "-i");
        assert_eq!(
            Scalar::new(rat(1, 3), rat(2, 3)).to_canonical_string(),
            "(1/3+2/3*i)"
        );
        assert_eq!(Scalar::complex(1, -2).to_canonical_string(), "(1-2*i)");
    }

    #[test]
    fn sqrt_exact_cases() {
        // sqrt(-2i) = 1 - i
        let s = Scalar::complex(0, -2).sqrt_exact().unwrap();
        assert_eq!(&s * &s, Scalar::complex(0, -2));
        assert_eq!(Scalar::from_frac(9, 4).sqrt_exact(), Some(Scalar::from_frac(3, 2)));
        assert_eq!(Scalar::from_int(-4).sqrt_exact(), Some(Scalar::complex(0, 2)));
        assert_eq!(Scalar::from_int(2).sqrt_exact(), None);
        assert_eq!(Scalar::complex(1, 1).sqrt_exact(), None);
    }

    #[test]
    fn abs_bound_dominates() {
        let a = Scalar::new(rat(3, 5), rat(-4, 5));
        // |a| = 1, bound = 7/5
        assert_eq!(a.norm_sqr(), rat(1, 1));
        assert_eq!(a.abs_bound(), rat(7, 5));
    }
}
